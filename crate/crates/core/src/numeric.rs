//! Floating-point helpers for the complex-analytic side (Hodge filtrations,
//! fiber charts). Rank decisions are relative to the largest singular value.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::exact_linalg::RatMatrix;

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Relative singular values `s_i / s_max` in decreasing order (all zero for a
/// zero matrix).
pub fn relative_singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let max = s.first().copied().unwrap_or(0.0);
    if max == 0.0 {
        return vec![0.0; s.len()];
    }
    s.iter().map(|x| x / max).collect()
}

/// Outcome of a rank decision at a given tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankDecision {
    pub rank: usize,
    /// Some relative singular value sits in the gray band `(tol, 100 tol]`.
    pub ambiguous: bool,
}

pub const AMBIGUITY_FACTOR: f64 = 100.0;

pub fn rank_decision(m: &CMatrix, tol: f64) -> RankDecision {
    let s = relative_singular_values(m);
    let rank = s.iter().filter(|&&x| x > tol).count();
    let ambiguous = s.iter().any(|&x| x > tol && x <= tol * AMBIGUITY_FACTOR);
    RankDecision { rank, ambiguous }
}

pub fn numeric_rank(m: &CMatrix, tol: f64) -> usize {
    rank_decision(m, tol).rank
}

/// Orthonormal basis (columns) of the right null space.
pub fn null_space(m: &CMatrix, tol: f64) -> CMatrix {
    let n = m.ncols();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    // pad to at least n rows so the SVD yields a full right basis
    let rows = m.nrows().max(n);
    let mut padded = CMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let s = &svd.singular_values;
    let max = s.iter().copied().fold(0.0, f64::max);
    let cols: Vec<DVector<Complex64>> = (0..n)
        .filter(|&i| max == 0.0 || s[i] / max <= tol)
        .map(|i| v_t.row(i).adjoint())
        .collect();
    if cols.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis of the column span.
pub fn column_span(m: &CMatrix, tol: f64) -> CMatrix {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let s = &svd.singular_values;
    let max = s.iter().copied().fold(0.0, f64::max);
    let cols: Vec<DVector<Complex64>> = (0..s.len())
        .filter(|&i| max > 0.0 && s[i] / max > tol)
        .map(|i| u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        CMatrix::zeros(m.nrows(), 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

pub fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((0, a.ncols()), (b.nrows(), b.ncols())).copy_from(b);
    out
}

/// Orthonormal basis of `span(a) ∩ span(b)`.
pub fn intersection(a: &CMatrix, b: &CMatrix, tol: f64) -> CMatrix {
    let n = a.nrows();
    let a = column_span(a, tol);
    let b = column_span(b, tol);
    if a.ncols() == 0 || b.ncols() == 0 {
        return CMatrix::zeros(n, 0);
    }
    let k = null_space(&hstack(&a, &(-&b)), tol);
    let coeffs = k.rows(0, a.ncols()).into_owned();
    column_span(&(&a * coeffs), tol)
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn rat_matrix_to_complex(m: &RatMatrix) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        Complex64::new(rat_to_f64(&m[(i, j)]), 0.0)
    })
}

pub fn rat_matrix_to_real(m: &RatMatrix) -> RMatrix {
    RMatrix::from_fn(m.rows(), m.cols(), |i, j| rat_to_f64(&m[(i, j)]))
}

/// `exp(z N)` for nilpotent rational `N`, as a finite series.
pub fn exp_nilpotent(n: &RatMatrix, z: Complex64) -> CMatrix {
    let dim = n.rows();
    let nc = rat_matrix_to_complex(n);
    let mut out = CMatrix::identity(dim, dim);
    let mut term = CMatrix::identity(dim, dim);
    for k in 1..=dim {
        term = &term * &nc * (z / k as f64);
        if term.iter().all(|x| x.is_zero()) {
            break;
        }
        out += &term;
    }
    out
}

/// Splits complex `d`-vectors into real `2d`-vectors (real parts, then imaginary).
pub fn realify(m: &CMatrix) -> RMatrix {
    let d = m.nrows();
    RMatrix::from_fn(2 * d, m.ncols(), |i, j| {
        if i < d {
            m[(i, j)].re
        } else {
            m[(i - d, j)].im
        }
    })
}

pub fn complexify(v: &DVector<f64>) -> Vec<Complex64> {
    let d = v.len() / 2;
    (0..d).map(|i| Complex64::new(v[i], v[i + d])).collect()
}

pub fn real_rank(m: &RMatrix, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().svd(false, false).singular_values;
    let max = s.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x / max > tol).count()
}

/// Orthonormal basis of the real right null space.
pub fn real_null_space(m: &RMatrix, tol: f64) -> RMatrix {
    let n = m.ncols();
    let rows = m.nrows().max(n);
    let mut padded = RMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    if n == 0 {
        return RMatrix::zeros(0, 0);
    }
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let s = &svd.singular_values;
    let max = s.iter().copied().fold(0.0, f64::max);
    let cols: Vec<DVector<f64>> = (0..n)
        .filter(|&i| max == 0.0 || s[i] / max <= tol)
        .map(|i| v_t.row(i).transpose())
        .collect();
    if cols.is_empty() {
        RMatrix::zeros(n, 0)
    } else {
        RMatrix::from_columns(&cols)
    }
}

/// Reduced row echelon form with partial pivoting; entries below `tol`
/// (relative to the largest entry) count as zero.
pub fn real_rref(m: &RMatrix, tol: f64) -> (RMatrix, Vec<usize>) {
    let mut a = m.clone();
    let scale = a.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.ncols() {
        if row == a.nrows() {
            break;
        }
        let (best, val) = (row..a.nrows())
            .map(|i| (i, a[(i, col)].abs()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol * scale.max(f64::MIN_POSITIVE) {
            continue;
        }
        a.swap_rows(row, best);
        let p = a[(row, col)];
        for j in 0..a.ncols() {
            a[(row, j)] /= p;
        }
        for i in 0..a.nrows() {
            if i != row {
                let f = a[(i, col)];
                if f != 0.0 {
                    for j in 0..a.ncols() {
                        let v = a[(row, j)];
                        a[(i, j)] -= f * v;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Best rational approximation `p/q` with `q <= max_den` by continued
/// fractions; returned only when within `tol` of `x`.
pub fn approx_rational(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - x).abs() <= tol {
            return Some((h1, k1));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 > 0 && ((h1 as f64) / (k1 as f64) - x).abs() <= tol).then_some((h1, k1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ranks_and_kernels() {
        let m = CMatrix::from_row_slice(2, 3, &[c(1., 0.), c(2., 0.), c(0., 1.), c(2., 0.), c(4., 0.), c(0., 2.)]);
        assert_eq!(numeric_rank(&m, 1e-9), 1);
        let k = null_space(&m, 1e-9);
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).norm() < 1e-12);
    }

    #[test]
    fn intersections() {
        let a = CMatrix::from_row_slice(3, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        let b = CMatrix::from_row_slice(3, 2, &[c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        let i = intersection(&a, &b, 1e-9);
        assert_eq!(i.ncols(), 1);
        assert_eq!(intersection(&a, &b, 1e-9).ncols(), 1);
    }

    #[test]
    fn rational_approximation() {
        assert_eq!(approx_rational(0.75, 1000, 1e-12), Some((3, 4)));
        assert_eq!(approx_rational(-2.5, 1000, 1e-12), Some((-5, 2)));
        assert_eq!(approx_rational(std::f64::consts::FRAC_1_SQRT_2, 10_000, 1e-9), None);
    }

    #[test]
    fn exponential_of_nilpotent() {
        let n = crate::exact_linalg::IntMatrix::from_i64(&[&[0, 1], &[0, 0]]).to_rational();
        let e = exp_nilpotent(&n, c(0., 2.));
        assert!((e[(0, 1)] - c(0., 2.)).norm() < 1e-15);
        assert!((e[(0, 0)] - c(1., 0.)).norm() < 1e-15);
    }
}
