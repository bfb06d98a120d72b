use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{smith_normal_form, IntMatrix, LatticeSubgroup, LinalgError};

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`
/// with `d_i >= 2` and `d_i | d_{i+1}`.
///
/// Elements are written as coordinate vectors: torsion coordinates first
/// (reduced into `[0, d_i)`), then free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FiniteAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Validated constructor for invariant-factor data.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, LinalgError> {
        for (i, d) in torsion.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(LinalgError::BadInvariantFactors(format!(
                    "entry {d} at position {i} is below 2"
                )));
            }
            if i > 0 && !(d % &torsion[i - 1]).is_zero() {
                return Err(LinalgError::BadInvariantFactors(format!(
                    "{} does not divide {d}",
                    torsion[i - 1]
                )));
            }
        }
        Ok(Self { free_rank, torsion })
    }

    /// `Z^free ⊕ ⊕ Z/c_i` for arbitrary cyclic orders `c_i` (zeros count as free
    /// summands, ones are dropped); normalized to invariant factors.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let d = IntMatrix::diagonal(orders.len(), orders.len(), orders);
        let g = cokernel_structure(&d);
        Self {
            free_rank: free_rank + g.free_rank,
            torsion: g.torsion,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn torsion_subgroup(&self) -> Self {
        Self {
            free_rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of coordinates of an element.
    pub fn coordinate_len(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(BigInt::one(), |a, d| a * d))
    }

    /// Exponent of the torsion part (1 for torsion-free groups).
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Brings a coordinate vector into canonical form.
    pub fn normalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.coordinate_len(), "element length");
        coords
            .iter()
            .enumerate()
            .map(|(i, x)| match self.torsion.get(i) {
                Some(d) => ((x % d) + d) % d,
                None => x.clone(),
            })
            .collect()
    }

    pub fn is_identity(&self, coords: &[BigInt]) -> bool {
        self.normalize(coords).iter().all(Zero::is_zero)
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(&s)
    }

    /// All elements of a finite group in lexicographic order; `None` when the
    /// group is infinite or has more than `limit` elements.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<BigInt>>> {
        let order = self.order()?.to_usize()?;
        if order > limit {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in &self.torsion {
            let d = d.to_i64()?;
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(BigInt::from(x));
                        p
                    })
                })
                .collect();
        }
        Some(out)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z^rows / (column span of A)`, read off the Smith diagonal.
pub fn cokernel_structure(a: &IntMatrix) -> FiniteAbelianGroup {
    let s = smith_normal_form(a);
    let diag = s.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    FiniteAbelianGroup {
        free_rank: a.rows() - nonzero,
        torsion: diag
            .into_iter()
            .filter(|d| !d.is_zero() && !d.abs().is_one())
            .collect(),
    }
}

/// `sup / (subgroup generated by the columns of sub_gens)`.
pub fn quotient_structure(
    sup: &LatticeSubgroup,
    sub_gens: &IntMatrix,
) -> Result<FiniteAbelianGroup, LinalgError> {
    let coords = sup.express(sub_gens)?;
    Ok(cokernel_structure(&coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::int_vec;

    #[test]
    fn cokernel_examples() {
        let g = cokernel_structure(&IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
        assert_eq!(g.torsion(), int_vec(&[2, 4]).as_slice());
        assert_eq!(g.free_rank(), 0);
        assert!(cokernel_structure(&IntMatrix::identity(3)).is_trivial());
        let z = cokernel_structure(&IntMatrix::zeros(2, 2));
        assert_eq!((z.free_rank(), z.torsion().len()), (2, 0));
    }

    #[test]
    fn invariant_factor_validation() {
        assert!(FiniteAbelianGroup::new(0, int_vec(&[2, 3])).is_err());
        assert!(FiniteAbelianGroup::new(0, int_vec(&[1])).is_err());
        assert!(FiniteAbelianGroup::new(1, int_vec(&[2, 6])).is_ok());
    }

    #[test]
    fn cyclic_orders_normalize() {
        let g = FiniteAbelianGroup::from_cyclic_orders(0, &int_vec(&[2, 3, 1, 0]));
        assert_eq!(g, FiniteAbelianGroup::new(1, int_vec(&[6])).unwrap());
        assert_eq!(g.to_string(), "Z/6 + Z");
    }

    #[test]
    fn element_arithmetic() {
        let g = FiniteAbelianGroup::new(1, int_vec(&[5])).unwrap();
        assert_eq!(g.add(&int_vec(&[3, 1]), &int_vec(&[4, -2])), int_vec(&[2, -1]));
        assert!(g.is_identity(&int_vec(&[10, 0])));
        let h = FiniteAbelianGroup::new(0, int_vec(&[2, 4])).unwrap();
        assert_eq!(h.elements(100).unwrap().len(), 8);
        assert_eq!(h.order(), Some(BigInt::from(8)));
    }

    #[test]
    fn quotient_of_lattices() {
        let sup = LatticeSubgroup::full(2);
        let g = quotient_structure(&sup, &IntMatrix::from_i64(&[&[2, 0], &[0, 6]])).unwrap();
        assert_eq!(g.torsion(), int_vec(&[2, 6]).as_slice());
        let sub = super::super::hermite_basis(&IntMatrix::from_i64(&[&[2], &[0]]));
        assert!(quotient_structure(&sub, &IntMatrix::from_i64(&[&[1], &[0]])).is_err());
    }
}
