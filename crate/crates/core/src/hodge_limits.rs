//! Limit mixed Hodge data of a weight −1 nilpotent orbit: the monodromy
//! weight filtration, graded Hodge numbers, Hypothesis (C) and the
//! invariant part `Ker N` used by the GGK model.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use thiserror::Error;

use crate::exact_linalg::rational::{self, clear_matrix_denominators, lattice_of_subspace};
use crate::exact_linalg::{kernel_lattice, IntMatrix, LatticeSubgroup, RatMatrix};
use crate::monodromy::{is_nilpotent, MonodromyOperator};
use crate::numeric::{self, CMatrix};

/// Numeric tolerances for the complex side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value threshold for rank decisions.
    pub rank: f64,
    /// Threshold for the purity check at the calibration point.
    pub purity: f64,
    /// `y` in `exp(i y N) F⁰`.
    pub calibration_y: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            purity: 1e-6,
            calibration_y: 10.0,
        }
    }
}

impl Tolerance {
    pub fn with_rank(rank: f64) -> Self {
        Self {
            rank,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HodgeError {
    #[error("N is not nilpotent")]
    NotNilpotent,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("F0 has numeric rank {rank} but {cols} columns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("exp(iyN)F0 is not pure of weight -1 at y = {0}")]
    NotPure(f64),
    #[error("degenerate filtration: {0}")]
    DegenerateFiltration(String),
    #[error("weight filtration violates an axiom: {0}")]
    AxiomViolation(String),
}

/// Columns spanning `F⁰ ⊂ C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeFiltrationStep {
    basis: CMatrix,
}

impl HodgeFiltrationStep {
    pub fn new(basis: CMatrix, tol: f64) -> Result<Self, HodgeError> {
        let rank = numeric::numeric_rank(&basis, tol);
        if rank != basis.ncols() {
            return Err(HodgeError::RankDeficient {
                rank,
                cols: basis.ncols(),
            });
        }
        Ok(Self { basis })
    }

    pub fn from_columns(n: usize, columns: &[Vec<Complex64>], tol: f64) -> Result<Self, HodgeError> {
        for c in columns {
            if c.len() != n {
                return Err(HodgeError::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
        }
        let basis = CMatrix::from_fn(n, columns.len(), |i, j| columns[j][i]);
        Self::new(basis, tol)
    }

    pub fn zero(n: usize) -> Self {
        Self {
            basis: CMatrix::zeros(n, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        self.basis
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect()
    }

    /// `g · F⁰`.
    pub fn transform(&self, g: &CMatrix) -> Self {
        Self {
            basis: g * &self.basis,
        }
    }
}

/// `F⁰ ⊕ conj(F⁰) = C^n`.
pub fn purity_check(f0: &HodgeFiltrationStep, n: usize, tol: f64) -> bool {
    if f0.ambient_dim() != n || 2 * f0.dim() != n {
        return false;
    }
    let joint = numeric::hstack(f0.basis(), &f0.basis().map(|z| z.conj()));
    numeric::numeric_rank(&joint, tol) == n
}

/// A weight −1 nilpotent orbit `(N, F⁰)` on `Z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentOrbit {
    n: RatMatrix,
    f0: HodgeFiltrationStep,
    tol: Tolerance,
}

impl NilpotentOrbit {
    pub const WEIGHT: i64 = -1;

    pub fn new(n: RatMatrix, f0: HodgeFiltrationStep, tol: Tolerance) -> Result<Self, HodgeError> {
        if !n.is_square() {
            return Err(HodgeError::NotSquare {
                rows: n.rows(),
                cols: n.cols(),
            });
        }
        if !is_nilpotent(&n) {
            return Err(HodgeError::NotNilpotent);
        }
        if f0.ambient_dim() != n.rows() {
            return Err(HodgeError::DimensionMismatch {
                expected: n.rows(),
                found: f0.ambient_dim(),
            });
        }
        let g = numeric::exp_nilpotent(&n, Complex64::new(0.0, tol.calibration_y));
        if !purity_check(&f0.transform(&g), n.rows(), tol.purity) {
            return Err(HodgeError::NotPure(tol.calibration_y));
        }
        Ok(Self { n, f0, tol })
    }

    /// Orbit attached to a monodromy, with `N = log T^m`.
    pub fn from_monodromy(
        t: &MonodromyOperator,
        f0: HodgeFiltrationStep,
        tol: Tolerance,
    ) -> Result<Self, HodgeError> {
        Self::new(t.log().clone(), f0, tol)
    }

    pub fn rank(&self) -> usize {
        self.n.rows()
    }

    pub fn log(&self) -> &RatMatrix {
        &self.n
    }

    pub fn f0(&self) -> &HodgeFiltrationStep {
        &self.f0
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn weight(&self) -> i64 {
        Self::WEIGHT
    }

    /// `F⁰(z) = exp(zN) F⁰`.
    pub fn filtration_at(&self, z: Complex64) -> HodgeFiltrationStep {
        self.f0.transform(&numeric::exp_nilpotent(&self.n, z))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, HodgeError> {
        let n = self.n.direct_sum(&other.n);
        let (a, b) = (self.f0.basis(), other.f0.basis());
        let mut basis = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
        basis.view_mut((0, 0), a.shape()).copy_from(a);
        basis.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
        Self::new(n, HodgeFiltrationStep::new(basis, self.tol.rank)?, self.tol)
    }
}

/// Increasing filtration by saturated sublattices of `Z^n`, centered at `w`.
///
/// Steps below the stored range are zero, steps above are the full lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    center: i64,
    ambient: usize,
    steps: BTreeMap<i64, LatticeSubgroup>,
}

impl WeightFiltration {
    pub fn from_steps(
        center: i64,
        ambient: usize,
        steps: BTreeMap<i64, LatticeSubgroup>,
    ) -> Result<Self, HodgeError> {
        let mut prev: Option<&LatticeSubgroup> = None;
        for (k, s) in &steps {
            if s.ambient_rank() != ambient {
                return Err(HodgeError::DimensionMismatch {
                    expected: ambient,
                    found: s.ambient_rank(),
                });
            }
            if !s.is_saturated() {
                return Err(HodgeError::AxiomViolation(format!("W_{k} is not saturated")));
            }
            if let Some(p) = prev {
                if !s.contains_lattice(p) {
                    return Err(HodgeError::AxiomViolation(format!(
                        "W_{} is not contained in W_{k}",
                        k - 1
                    )));
                }
            }
            prev = Some(s);
        }
        Ok(Self {
            center,
            ambient,
            steps,
        })
    }

    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    /// Stored index range; outside it the filtration is constant.
    pub fn range(&self) -> (i64, i64) {
        match (self.steps.keys().next(), self.steps.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (self.center, self.center),
        }
    }

    pub fn step(&self, k: i64) -> LatticeSubgroup {
        if let Some(s) = self.steps.get(&k) {
            return s.clone();
        }
        let (lo, hi) = self.range();
        if self.steps.is_empty() || k > hi {
            LatticeSubgroup::full(self.ambient)
        } else if k < lo {
            LatticeSubgroup::zero(self.ambient)
        } else {
            // gaps in the stored range inherit the next lower step
            self.steps
                .range(..k)
                .next_back()
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| LatticeSubgroup::zero(self.ambient))
        }
    }

    pub fn steps(&self) -> &BTreeMap<i64, LatticeSubgroup> {
        &self.steps
    }

    pub fn graded_rank(&self, k: i64) -> usize {
        self.step(k).rank() - self.step(k - 1).rank()
    }

    /// Indices `k` with `Gr_k ≠ 0`.
    pub fn support(&self) -> Vec<i64> {
        let (lo, hi) = self.range();
        (lo - 1..=hi + 1).filter(|&k| self.graded_rank(k) > 0).collect()
    }

    /// Checks `N W_k ⊆ W_{k−2}` and that `N^k : Gr_{w+k} → Gr_{w−k}` is an
    /// isomorphism for `k ≥ 1`, exactly over Q.
    pub fn check_axioms(&self, n: &RatMatrix) -> Result<(), HodgeError> {
        if n.rows() != self.ambient || !n.is_square() {
            return Err(HodgeError::DimensionMismatch {
                expected: self.ambient,
                found: n.rows(),
            });
        }
        let n_int = clear_matrix_denominators(n);
        let (lo, hi) = self.range();
        for k in lo - 1..=hi + 2 {
            let image = &n_int * self.step(k).basis();
            let target = self.step(k - 2);
            for (j, col) in image.columns().iter().enumerate() {
                if !target.contains(col) {
                    return Err(HodgeError::AxiomViolation(format!(
                        "N maps generator {j} of W_{k} outside W_{}",
                        k - 2
                    )));
                }
            }
        }
        let span = (hi - self.center).max(self.center - lo) + 1;
        for k in 1..=span.max(1) {
            let up = self.graded_rank(self.center + k);
            let down = self.graded_rank(self.center - k);
            if up != down {
                return Err(HodgeError::AxiomViolation(format!(
                    "rank Gr_{} = {up} but rank Gr_{} = {down}",
                    self.center + k,
                    self.center - k
                )));
            }
            if up == 0 {
                continue;
            }
            let nk = n_int.pow(k as u32);
            let low = self.step(self.center - k - 1);
            let image = (&nk * self.step(self.center + k).basis())
                .hstack(low.basis())
                .expect("rows");
            let image_rank = rational::rank(&image.to_rational()) - low.rank();
            if image_rank != up {
                return Err(HodgeError::AxiomViolation(format!(
                    "N^{k} : Gr_{} -> Gr_{} has rank {image_rank}, expected {up}",
                    self.center + k,
                    self.center - k
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for WeightFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|(k, s)| format!("W_{k}: rank {}", s.rank()))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn rat_columns(rows: usize, cols: Vec<Vec<num_rational::BigRational>>) -> RatMatrix {
    RatMatrix::from_columns(rows, &cols).expect("column lengths")
}

/// The monodromy weight filtration of nilpotent `N` centered at `w`:
/// `W_{w+k} = Σ_{j ≥ max(0,−k)} N^j Ker N^{k+2j+1}`.
pub fn weight_monodromy_filtration(n: &RatMatrix, w: i64) -> Result<WeightFiltration, HodgeError> {
    if !n.is_square() {
        return Err(HodgeError::NotSquare {
            rows: n.rows(),
            cols: n.cols(),
        });
    }
    if !is_nilpotent(n) {
        return Err(HodgeError::NotNilpotent);
    }
    let dim = n.rows();
    // nilpotency index: N^nu = 0, N^(nu-1) != 0
    let mut nu = 0usize;
    let mut p = RatMatrix::identity(dim);
    while !p.is_zero() {
        p = &p * n;
        nu += 1;
    }
    let nu = nu as i64;
    let power = |e: i64| n.pow(e.max(0) as u32);
    let mut steps = BTreeMap::new();
    for k in -nu..nu {
        let mut cols = Vec::new();
        let mut j = 0.max(-k);
        while j < nu {
            let e = k + 2 * j + 1;
            let ker = if e >= nu {
                RatMatrix::identity(dim)
            } else {
                rational::kernel_basis(&power(e))
            };
            cols.extend((&power(j) * &ker).columns());
            j += 1;
        }
        steps.insert(w + k, lattice_of_subspace(&rat_columns(dim, cols)));
    }
    let filtration = WeightFiltration::from_steps(w, dim, steps)?;
    filtration.check_axioms(n)?;
    Ok(filtration)
}

/// `(W, F⁰)` with graded Hodge numbers `h^{p,q}` of `Gr_k^W`, `p + q = k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitMHS {
    pub w: WeightFiltration,
    pub f0: HodgeFiltrationStep,
    pub graded_hodge_numbers: BTreeMap<(i64, i64), usize>,
}

impl LimitMHS {
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(p, q), &h) in &self.graded_hodge_numbers {
            *out.entry(p + q).or_insert(0) += h;
        }
        out
    }

    pub fn hodge_number(&self, p: i64, q: i64) -> usize {
        self.graded_hodge_numbers.get(&(p, q)).copied().unwrap_or(0)
    }
}

fn lattice_to_complex(l: &LatticeSubgroup) -> CMatrix {
    numeric::rat_matrix_to_complex(&l.basis().to_rational())
}

/// `dim(A ∩ B)` from numeric ranks, refusing tolerance-ambiguous decisions.
fn checked_intersection_dim(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<usize, HodgeError> {
    let mut ranks = [0usize; 3];
    for (slot, m) in ranks.iter_mut().zip([a.clone(), b.clone(), numeric::hstack(a, b)]) {
        let d = numeric::rank_decision(&m, tol);
        if d.ambiguous {
            return Err(HodgeError::DegenerateFiltration(
                "singular value within the ambiguity band".into(),
            ));
        }
        *slot = d.rank;
    }
    Ok(ranks[0] + ranks[1] - ranks[2])
}

/// Limit mixed Hodge structure of a weight −1 orbit (Hodge level one:
/// `F¹ = 0`, `F⁻¹ = H`), so `h^{0,k} = dim Gr_k F⁰` and `h^{−1,k+1}` is the rest.
pub fn limit_mhs(orbit: &NilpotentOrbit) -> Result<LimitMHS, HodgeError> {
    let w = weight_monodromy_filtration(orbit.log(), orbit.weight())?;
    let tol = orbit.tolerance().rank;
    let f0 = orbit.f0().basis();
    let (lo, hi) = w.range();
    let mut numbers = BTreeMap::new();
    let mut prev = 0usize;
    for k in lo..=hi {
        let step = w.step(k);
        let cap = checked_intersection_dim(f0, &lattice_to_complex(&step), tol)?;
        let g = w.graded_rank(k);
        let f = cap.checked_sub(prev).filter(|f| *f <= g).ok_or_else(|| {
            HodgeError::DegenerateFiltration(format!("inconsistent F0 ranks at W_{k}"))
        })?;
        prev = cap;
        if f > 0 {
            numbers.insert((0, k), f);
        }
        if g > f {
            numbers.insert((-1, k + 1), g - f);
        }
    }
    Ok(LimitMHS {
        w,
        f0: orbit.f0().clone(),
        graded_hodge_numbers: numbers,
    })
}

/// Clemens's condition: `N² = 0` and `Gr_0^W` of type (0,0).
pub fn check_hypothesis_c(orbit: &NilpotentOrbit) -> bool {
    if !orbit.log().pow(2).is_zero() {
        return false;
    }
    match limit_mhs(orbit) {
        Ok(mhs) => mhs.w.graded_rank(0) == mhs.hodge_number(0, 0),
        Err(_) => false,
    }
}

/// `(Ker N ∩ Z^n, F⁰ ∩ Ker N_C)`.
pub fn ggk_invariant_part(orbit: &NilpotentOrbit) -> (LatticeSubgroup, HodgeFiltrationStep) {
    let lattice = kernel_lattice(&clear_matrix_denominators(orbit.log()));
    let f0 = intersect_with_lattice(orbit.f0(), &lattice, orbit.tolerance().rank);
    (lattice, f0)
}

/// `F⁰ ∩ (L ⊗ C)`.
pub fn intersect_with_lattice(
    f0: &HodgeFiltrationStep,
    lattice: &LatticeSubgroup,
    tol: f64,
) -> HodgeFiltrationStep {
    if lattice.rank() == 0 || f0.dim() == 0 {
        return HodgeFiltrationStep::zero(f0.ambient_dim());
    }
    HodgeFiltrationStep {
        basis: numeric::intersection(f0.basis(), &lattice_to_complex(lattice), tol),
    }
}

/// Integer matrix with the given columns, for building lattices by hand.
pub fn lattice_from_columns(n: usize, cols: &[Vec<BigInt>]) -> LatticeSubgroup {
    crate::exact_linalg::hermite_basis(&IntMatrix::from_columns(n, cols).expect("column lengths"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::int_vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example_57() -> NilpotentOrbit {
        let n = IntMatrix::from_i64(&[&[0, 0], &[1, 0]]).to_rational();
        let f0 = HodgeFiltrationStep::from_columns(2, &[vec![c(1., 0.), c(0., 0.)]], 1e-9).unwrap();
        NilpotentOrbit::new(n, f0, Tolerance::default()).unwrap()
    }

    fn pure_elliptic() -> NilpotentOrbit {
        let f0 = HodgeFiltrationStep::from_columns(2, &[vec![c(0., 1.), c(1., 0.)]], 1e-9).unwrap();
        NilpotentOrbit::new(RatMatrix::zeros(2, 2), f0, Tolerance::default()).unwrap()
    }

    fn span(n: usize, cols: &[&[i64]]) -> LatticeSubgroup {
        let cols: Vec<Vec<BigInt>> = cols.iter().map(|c| int_vec(c)).collect();
        lattice_from_columns(n, &cols)
    }

    #[test]
    fn two_step_filtration() {
        let n = IntMatrix::from_i64(&[&[0, 0], &[1, 0]]).to_rational();
        let w = weight_monodromy_filtration(&n, -1).unwrap();
        assert_eq!(w.step(-2), span(2, &[&[0, 1]]));
        assert_eq!(w.step(-1), span(2, &[&[0, 1]]));
        assert_eq!(w.step(0), LatticeSubgroup::full(2));
        assert_eq!(w.step(-3), LatticeSubgroup::zero(2));
        assert_eq!(w.support(), vec![-2, 0]);
    }

    #[test]
    fn trivial_filtration() {
        for wt in [-1, 0, 3] {
            let w = weight_monodromy_filtration(&RatMatrix::zeros(3, 3), wt).unwrap();
            assert_eq!(w.step(wt - 1).rank(), 0);
            assert_eq!(w.step(wt), LatticeSubgroup::full(3));
        }
    }

    #[test]
    fn jordan_block_of_size_three() {
        let n = IntMatrix::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]).to_rational();
        let w = weight_monodromy_filtration(&n, 0).unwrap();
        assert_eq!(w.step(-2), span(3, &[&[0, 0, 1]]));
        assert_eq!(w.step(-1), w.step(-2));
        assert_eq!(w.step(0), span(3, &[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(w.step(1), w.step(0));
        assert_eq!(w.step(2), LatticeSubgroup::full(3));
        assert_eq!(w.step(-3).rank(), 0);
    }

    #[test]
    fn perturbed_filtration_fails_axioms() {
        let n = IntMatrix::from_i64(&[&[0, 0], &[1, 0]]).to_rational();
        let mut steps = BTreeMap::new();
        steps.insert(-2, span(2, &[&[1, 0]]));
        steps.insert(-1, span(2, &[&[1, 0]]));
        steps.insert(0, LatticeSubgroup::full(2));
        let w = WeightFiltration::from_steps(-1, 2, steps).unwrap();
        assert!(w.check_axioms(&n).is_err());
    }

    #[test]
    fn not_nilpotent_rejected() {
        let n = IntMatrix::identity(2).to_rational();
        assert_eq!(
            weight_monodromy_filtration(&n, 0).err(),
            Some(HodgeError::NotNilpotent)
        );
    }

    #[test]
    fn limit_hodge_numbers() {
        let mhs = limit_mhs(&example_57()).unwrap();
        assert_eq!(mhs.hodge_number(0, 0), 1);
        assert_eq!(mhs.hodge_number(-1, -1), 1);
        assert_eq!(mhs.graded_hodge_numbers.len(), 2);

        let mhs = limit_mhs(&pure_elliptic()).unwrap();
        assert_eq!(mhs.hodge_number(-1, 0), 1);
        assert_eq!(mhs.hodge_number(0, -1), 1);

        let double = example_57().direct_sum(&example_57()).unwrap();
        let mhs = limit_mhs(&double).unwrap();
        assert_eq!(mhs.hodge_number(0, 0), 2);
        assert_eq!(mhs.hodge_number(-1, -1), 2);
    }

    #[test]
    fn hypothesis_c() {
        assert!(check_hypothesis_c(&example_57()));
        assert!(check_hypothesis_c(&pure_elliptic()));
        // N e0 = e1, N e1 = e2, N e3 = 0
        let n = IntMatrix::from_i64(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0]])
            .to_rational();
        let f0 = HodgeFiltrationStep::from_columns(
            4,
            &[vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)], vec![c(0., 0.), c(0., 0.), c(1., 0.), c(0., 1.)]],
            1e-9,
        )
        .unwrap();
        let orbit = NilpotentOrbit::new(n, f0, Tolerance::default()).unwrap();
        assert!(!check_hypothesis_c(&orbit));
        assert_eq!(limit_mhs(&orbit).unwrap().graded_dims().values().sum::<usize>(), 4);
    }

    #[test]
    fn invariant_part() {
        let (l, f) = ggk_invariant_part(&example_57());
        assert_eq!(l, span(2, &[&[0, 1]]));
        assert_eq!(f.dim(), 0);
        let (l, f) = ggk_invariant_part(&pure_elliptic());
        assert_eq!(l, LatticeSubgroup::full(2));
        assert_eq!(f.dim(), 1);
    }

    #[test]
    fn purity() {
        let f = HodgeFiltrationStep::from_columns(2, &[vec![c(0., 1.), c(1., 0.)]], 1e-9).unwrap();
        assert!(purity_check(&f, 2, 1e-9));
        let f = HodgeFiltrationStep::from_columns(2, &[vec![c(1., 0.), c(0., 0.)]], 1e-9).unwrap();
        assert!(!purity_check(&f, 2, 1e-9));
        assert!(!purity_check(&HodgeFiltrationStep::zero(2), 2, 1e-9));
    }

    #[test]
    fn impure_orbit_rejected() {
        let f0 = HodgeFiltrationStep::from_columns(2, &[vec![c(1., 0.), c(0., 0.)]], 1e-9).unwrap();
        assert!(matches!(
            NilpotentOrbit::new(RatMatrix::zeros(2, 2), f0, Tolerance::default()),
            Err(HodgeError::NotPure(_))
        ));
    }

    #[test]
    fn rank_deficient_f0_rejected() {
        let cols = vec![vec![c(1., 0.), c(0., 1.)], vec![c(2., 0.), c(0., 2.)]];
        assert!(matches!(
            HodgeFiltrationStep::from_columns(2, &cols, 1e-9),
            Err(HodgeError::RankDeficient { rank: 1, cols: 2 })
        ));
    }
}
