//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{hermite_basis, saturate, IntMatrix, LatticeSubgroup, RatMatrix};

/// Reduced row echelon form together with the pivot columns.
pub fn rref(a: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in 0..m.cols() {
            let v = &m[(r, j)] * &inv;
            m[(r, j)] = v;
        }
        for i in 0..m.rows() {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in 0..m.cols() {
                let v = &m[(i, j)] - &f * &m[(r, j)];
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &RatMatrix) -> usize {
    rref(a).1.len()
}

/// Basis of the right kernel over Q, one column per free variable.
pub fn kernel_basis(a: &RatMatrix) -> RatMatrix {
    let (m, pivots) = rref(a);
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut cols = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![BigRational::zero(); a.cols()];
        v[f] = BigRational::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -m[(row, f)].clone();
        }
        cols.push(v);
    }
    RatMatrix::from_columns(a.cols(), &cols).expect("lengths agree")
}

/// Columns forming a basis of the column span (a subset of the input columns).
pub fn column_basis(a: &RatMatrix) -> RatMatrix {
    let (_, pivots) = rref(a);
    a.select_columns(pivots)
}

/// Some `x` with `A x = b`, or `None` if the system is inconsistent.
pub fn solve(a: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(b.len(), a.rows());
    let col = RatMatrix::from_columns(a.rows(), &[b.to_vec()]).expect("length");
    let aug = a.hstack(&col).expect("rows agree");
    let (m, pivots) = rref(&aug);
    if pivots.contains(&a.cols()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); a.cols()];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = m[(row, a.cols())].clone();
    }
    Some(x)
}

pub fn in_column_span(a: &RatMatrix, b: &[BigRational]) -> bool {
    solve(a, b).is_some()
}

/// Scales a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

pub fn to_integer_vec(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

pub fn to_rational_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Multiplies a rational matrix by the lcm of all denominators.
pub fn clear_matrix_denominators(a: &RatMatrix) -> IntMatrix {
    let l = a
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let s = BigRational::from_integer(l);
    a.map(|x| (x * &s).to_integer())
}

/// The saturated lattice `V ∩ Z^n` for the Q-subspace `V` spanned by the columns.
pub fn lattice_of_subspace(span: &RatMatrix) -> LatticeSubgroup {
    let cols: Vec<Vec<BigInt>> = span.columns().iter().map(|c| clear_denominators(c)).collect();
    let gens = IntMatrix::from_columns(span.rows(), &cols).expect("lengths agree");
    saturate(&hermite_basis(&gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rat;

    #[test]
    fn kernel_and_rank() {
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]).to_rational();
        assert_eq!(rank(&a), 1);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
    }

    #[test]
    fn solve_and_membership() {
        let a = IntMatrix::from_i64(&[&[0, 5], &[0, 0]]).to_rational();
        let x = solve(&a, &[rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(x, vec![rat(0, 1), rat(1, 5)]);
        assert!(!in_column_span(&a, &[rat(0, 1), rat(1, 1)]));
    }

    #[test]
    fn subspace_lattice_is_saturated() {
        let span = RatMatrix::from_columns(2, &[vec![rat(1, 3), rat(2, 3)]]).unwrap();
        let l = lattice_of_subspace(&span);
        assert_eq!(l.basis().column(0), crate::exact_linalg::int_vec(&[1, 2]));
    }
}
