use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntMatrix, LinalgError};

/// A subgroup of `Z^n`, stored by its column Hermite basis.
///
/// Columns are linearly independent, lower-triangular in echelon form with
/// positive pivots; entries of earlier columns in a pivot row lie in
/// `[0, pivot)`. Two generator sets give equal values iff they generate the
/// same subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSubgroup {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl LatticeSubgroup {
    pub fn zero(ambient_rank: usize) -> Self {
        Self {
            ambient_rank,
            basis: IntMatrix::zeros(ambient_rank, 0),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Self {
            ambient_rank,
            basis: IntMatrix::identity(ambient_rank),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as columns (`ambient_rank x rank`).
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    /// Coordinates of `v` in the Hermite basis, or `None` when `v` is not in
    /// the subgroup.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank);
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for j in 0..self.rank() {
            let pivot_row = (0..self.ambient_rank)
                .find(|&i| !self.basis[(i, j)].is_zero())
                .expect("basis columns are nonzero");
            // every earlier coordinate already cleared rows above
            if (0..pivot_row).any(|i| !rest[i].is_zero()) {
                return None;
            }
            let (q, r) = rest[pivot_row].div_rem(&self.basis[(pivot_row, j)]);
            if !r.is_zero() {
                return None;
            }
            for (i, x) in rest.iter_mut().enumerate() {
                *x -= &q * &self.basis[(i, j)];
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether every basis vector of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &LatticeSubgroup) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Coordinates of each column of `gens` in this basis (`rank x gens.cols`).
    pub fn express(&self, gens: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        let mut cols = Vec::with_capacity(gens.cols());
        for (j, g) in gens.columns().into_iter().enumerate() {
            cols.push(
                self.coordinates(&g)
                    .ok_or(LinalgError::NotInLattice { column: j })?,
            );
        }
        IntMatrix::from_columns(self.rank(), &cols)
    }

    /// Sum of two subgroups of the same ambient lattice.
    pub fn sum(&self, other: &LatticeSubgroup) -> LatticeSubgroup {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        hermite_basis(&self.basis.hstack(&other.basis).expect("same ambient"))
    }

    pub fn is_saturated(&self) -> bool {
        saturate(self) == *self
    }
}

/// Column Hermite form `A * V = H` with `V` unimodular.
///
/// Returns `(H, V, rank)`; the first `rank` columns of `H` are the Hermite
/// basis of the column span and the trailing columns of `V` span the integer
/// kernel of `A`.
pub fn hermite_with_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut v = IntMatrix::identity(cols);
    let mut pc = 0;
    for i in 0..rows {
        if pc == cols {
            break;
        }
        loop {
            // smallest nonzero |entry| in row i among active columns
            let mut best: Option<(usize, BigInt)> = None;
            for j in pc..cols {
                let x = h[(i, j)].abs();
                if !x.is_zero() && best.as_ref().is_none_or(|(_, b)| x < *b) {
                    best = Some((j, x));
                }
            }
            let Some((j, _)) = best else { break };
            h.swap_cols(pc, j);
            v.swap_cols(pc, j);
            let p = h[(i, pc)].clone();
            let mut done = true;
            for j in pc + 1..cols {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -h[(i, j)].div_floor(&p);
                h.add_col_multiple(j, pc, &q);
                v.add_col_multiple(j, pc, &q);
                done &= h[(i, j)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(i, pc)].is_zero() {
            continue;
        }
        if h[(i, pc)].is_negative() {
            h.negate_col(pc);
            v.negate_col(pc);
        }
        let p = h[(i, pc)].clone();
        for j in 0..pc {
            let q = -h[(i, j)].div_floor(&p);
            h.add_col_multiple(j, pc, &q);
            v.add_col_multiple(j, pc, &q);
        }
        pc += 1;
    }
    (h, v, pc)
}

/// Hermite basis of the subgroup generated by the columns of `gens`.
pub fn hermite_basis(gens: &IntMatrix) -> LatticeSubgroup {
    let (h, _, rank) = hermite_with_transform(gens);
    LatticeSubgroup {
        ambient_rank: gens.rows(),
        basis: h.select_columns(0..rank),
    }
}

/// The saturated integer kernel `{v in Z^cols : A v = 0}`.
pub fn kernel_lattice(a: &IntMatrix) -> LatticeSubgroup {
    let (_, v, rank) = hermite_with_transform(a);
    hermite_basis(&v.select_columns(rank..a.cols()))
}

/// `(Q-span of L) ∩ Z^n`.
pub fn saturate(l: &LatticeSubgroup) -> LatticeSubgroup {
    let annihilator = kernel_lattice(&l.basis.transpose());
    kernel_lattice(&annihilator.basis.transpose())
}
