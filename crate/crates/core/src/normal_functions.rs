//! One-variable normal functions given by liftings
//! `ν̃(t) = exp(zN) σ(t) + z ℓ` with `z = log t / 2πi`, `σ` a Laurent
//! polynomial and `ℓ ∈ Ker N`.
//!
//! Two frames are used. In the flat frame the lattice is `Z^n` and the Hodge
//! filtration at `t` is `exp(zN) F⁰`. In the untwisted frame everything is
//! multiplied by `exp(−zN)`: the filtration is `F⁰` and the lattice is
//! `exp(−zN) Z^n`, and the lifting becomes `σ(t) + z ℓ`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_linalg::rational::{self, to_integer_vec, to_rational_vec};
use crate::exact_linalg::FiniteAbelianGroup;
use crate::fibers::{FiberChart, FiberError, FiberPoint, SemiTorusFiber};
use crate::hodge_limits::NilpotentOrbit;
use crate::monodromy::{invariant_lattice, CokernelPresentation, MonodromyError, MonodromyOperator};
use crate::numeric::{self, rat_to_f64, CMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormalFunctionError {
    #[error("monodromy defect is not integral")]
    NonIntegralDefect,
    #[error("defect is not killed by N")]
    UnsupportedDefect,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("t = 0 has no fiber")]
    AtOrigin,
    #[error("|t| must lie in (0, 1)")]
    OutsideDisk,
    #[error("not admissible (log growth: {log_growth}, defect in image: {defect_in_image})")]
    NotAdmissible {
        log_growth: bool,
        defect_in_image: bool,
    },
    #[error("does not extend: singularity class {0}")]
    NotExtendable(CurveCohomologyClass),
    #[error("class is not torsion")]
    NotTorsion,
    #[error("only N^2 = 0 is supported")]
    UnsupportedN,
    #[error("orbit logarithm differs from log T")]
    OrbitMismatch,
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
}

type Result<T> = std::result::Result<T, NormalFunctionError>;

/// `σ(t) = Σ c_k t^k` and the log coefficient `ℓ`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFunctionExpr {
    rank: usize,
    sigma: BTreeMap<i64, Vec<Complex64>>,
    ell: Vec<BigRational>,
}

impl NormalFunctionExpr {
    pub fn new(
        rank: usize,
        sigma: BTreeMap<i64, Vec<Complex64>>,
        ell: Vec<BigRational>,
    ) -> Result<Self> {
        let lengths = sigma.values().map(Vec::len).chain(std::iter::once(ell.len()));
        for len in lengths {
            if len != rank {
                return Err(NormalFunctionError::DimensionMismatch {
                    expected: rank,
                    found: len,
                });
            }
        }
        Ok(Self { rank, sigma, ell }.pruned())
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            sigma: BTreeMap::new(),
            ell: vec![BigRational::zero(); rank],
        }
    }

    /// Constant `σ = c` with no log term.
    pub fn constant(c: Vec<Complex64>) -> Self {
        let rank = c.len();
        Self {
            rank,
            sigma: BTreeMap::from([(0, c)]),
            ell: vec![BigRational::zero(); rank],
        }
        .pruned()
    }

    fn pruned(mut self) -> Self {
        self.sigma.retain(|_, c| c.iter().any(|z| !z.is_zero()));
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn sigma(&self) -> &BTreeMap<i64, Vec<Complex64>> {
        &self.sigma
    }

    pub fn ell(&self) -> &[BigRational] {
        &self.ell
    }

    pub fn constant_term(&self) -> Vec<Complex64> {
        self.sigma
            .get(&0)
            .cloned()
            .unwrap_or_else(|| vec![Complex64::zero(); self.rank])
    }

    pub fn sigma_at(&self, t: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.rank];
        for (&k, c) in &self.sigma {
            let tk = t.powi(k as i32);
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * tk;
            }
        }
        out
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        assert_eq!(self.rank, other.rank, "ranks differ");
        let mut sigma = self.sigma.clone();
        for (k, c) in &other.sigma {
            let e = sigma
                .entry(*k)
                .or_insert_with(|| vec![Complex64::zero(); self.rank]);
            for (a, b) in e.iter_mut().zip(c) {
                *a += b * sign;
            }
        }
        let ell = self
            .ell
            .iter()
            .zip(&other.ell)
            .map(|(a, b)| if sign > 0.0 { a + b } else { a - b })
            .collect();
        Self {
            rank: self.rank,
            sigma,
            ell,
        }
        .pruned()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    /// `z = (log t + 2πi·branch) / 2πi` with the principal logarithm.
    pub fn z_coordinate(t: Complex64, branch: i64) -> Result<Complex64> {
        if t.is_zero() {
            return Err(NormalFunctionError::AtOrigin);
        }
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        Ok((t.ln() + two_pi_i * branch as f64) / two_pi_i)
    }

    /// `σ(t) + z ℓ`: the lifting in the untwisted frame.
    pub fn untwisted_value(&self, t: Complex64, branch: i64) -> Result<Vec<Complex64>> {
        let z = Self::z_coordinate(t, branch)?;
        Ok(self
            .sigma_at(t)
            .into_iter()
            .zip(&self.ell)
            .map(|(s, l)| s + z * rat_to_f64(l))
            .collect())
    }

    /// `exp(zN) σ(t) + z ℓ`: the lifting in the flat frame.
    pub fn flat_value(&self, n: &crate::exact_linalg::RatMatrix, t: Complex64, branch: i64) -> Result<Vec<Complex64>> {
        let z = Self::z_coordinate(t, branch)?;
        let g = numeric::exp_nilpotent(n, z);
        let s = g * nalgebra::DVector::from_vec(self.sigma_at(t));
        Ok(s.iter()
            .zip(&self.ell)
            .map(|(s, l)| s + z * rat_to_f64(l))
            .collect())
    }
}

/// An element of `Coker(T_Z − id)` in Smith coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCohomologyClass {
    pub coords: Vec<BigInt>,
    pub group: FiniteAbelianGroup,
    /// Dies in `Coker(T_Q − id)`.
    pub torsion: bool,
}

impl CurveCohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.group.is_identity(&self.coords)
    }

    /// Coordinates in the torsion part `G₀`.
    pub fn torsion_coords(&self) -> &[BigInt] {
        &self.coords[..self.group.torsion().len()]
    }
}

impl fmt::Display for CurveCohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({}) in {}", c.join(", "), self.group)
    }
}

fn require_supported(nf: &NormalFunctionExpr, t: &MonodromyOperator) -> Result<()> {
    if nf.rank() != t.rank() {
        return Err(NormalFunctionError::DimensionMismatch {
            expected: t.rank(),
            found: nf.rank(),
        });
    }
    t.require_unipotent()?;
    if !t.log().mul_vec(nf.ell()).iter().all(Zero::is_zero) {
        return Err(NormalFunctionError::UnsupportedDefect);
    }
    Ok(())
}

fn require_orbit(t: &MonodromyOperator, orbit: &NilpotentOrbit) -> Result<()> {
    if t.log() != orbit.log() {
        return Err(NormalFunctionError::OrbitMismatch);
    }
    Ok(())
}

/// `λ = ν̃(z + 1) − T ν̃(z) = ℓ`.
pub fn monodromy_defect(nf: &NormalFunctionExpr, t: &MonodromyOperator) -> Result<Vec<BigInt>> {
    require_supported(nf, t)?;
    to_integer_vec(nf.ell()).ok_or(NormalFunctionError::NonIntegralDefect)
}

/// Conditions (a)′ and (b)′ on the lifting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Admissibility {
    /// No negative powers of `t` in `σ`.
    pub log_growth: bool,
    /// `λ ∈ Im(T_Q − id)`.
    pub defect_in_image: bool,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.log_growth && self.defect_in_image
    }
}

pub fn check_admissible(nf: &NormalFunctionExpr, t: &MonodromyOperator) -> Result<Admissibility> {
    require_supported(nf, t)?;
    let log_growth = nf.sigma().keys().all(|&k| k >= 0);
    let a = t.matrix().minus_identity().to_rational();
    let defect_in_image = rational::in_column_span(&a, nf.ell());
    Ok(Admissibility {
        log_growth,
        defect_in_image,
    })
}

/// Class of an integral defect in `Coker(T_Z − id)`.
pub fn class_of_defect(t: &MonodromyOperator, lambda: &[BigInt]) -> Result<CurveCohomologyClass> {
    let pres = CokernelPresentation::of_monodromy(t.matrix())?;
    Ok(CurveCohomologyClass {
        coords: pres.class_of(lambda)?,
        group: pres.group().clone(),
        torsion: pres.is_torsion_class(lambda)?,
    })
}

pub fn cohomology_class_curve(
    nf: &NormalFunctionExpr,
    t: &MonodromyOperator,
) -> Result<CurveCohomologyClass> {
    class_of_defect(t, &monodromy_defect(nf, t)?)
}

/// The fiber over `t` in untwisted coordinates: `exp(−zN) Z^n \ C^n / F⁰`.
pub fn fiber_at(orbit: &NilpotentOrbit, t: Complex64, branch: i64) -> Result<SemiTorusFiber> {
    if t.is_zero() {
        return Err(NormalFunctionError::AtOrigin);
    }
    if t.norm() >= 1.0 {
        return Err(NormalFunctionError::OutsideDisk);
    }
    let z = NormalFunctionExpr::z_coordinate(t, branch)?;
    let tol = orbit.tolerance().rank;
    let chart = FiberChart::new(orbit.f0(), tol)?;
    let lattice: CMatrix = numeric::exp_nilpotent(orbit.log(), -z);
    Ok(SemiTorusFiber::over_chart(chart, &lattice, tol)?)
}

/// Unreduced value of `ν` at `t` on the given branch, in `V = C^n / F⁰`.
pub fn evaluate_unreduced(
    nf: &NormalFunctionExpr,
    t_op: &MonodromyOperator,
    orbit: &NilpotentOrbit,
    t: Complex64,
    branch: i64,
) -> Result<(SemiTorusFiber, FiberPoint)> {
    require_supported(nf, t_op)?;
    require_orbit(t_op, orbit)?;
    let fiber = fiber_at(orbit, t, branch)?;
    if !fiber.is_discrete() {
        return Err(FiberError::NonDiscreteFiber.into());
    }
    let point = fiber.project(&nf.untwisted_value(t, branch)?)?;
    Ok((fiber, point))
}

/// `ν(t)` reduced modulo the lattice, on the principal branch.
pub fn evaluate(
    nf: &NormalFunctionExpr,
    t_op: &MonodromyOperator,
    orbit: &NilpotentOrbit,
    t: Complex64,
) -> Result<FiberPoint> {
    evaluate_on_branch(nf, t_op, orbit, t, 0)
}

pub fn evaluate_on_branch(
    nf: &NormalFunctionExpr,
    t_op: &MonodromyOperator,
    orbit: &NilpotentOrbit,
    t: Complex64,
    branch: i64,
) -> Result<FiberPoint> {
    let (fiber, point) = evaluate_unreduced(nf, t_op, orbit, t, branch)?;
    Ok(fiber.reduce_point(&point)?)
}

/// The value at `t = 0` of a Zucker-extendable normal function.
#[derive(Clone, Debug, PartialEq)]
pub struct ZuckerLimit {
    /// Reduced point of `J^Z₀ = H^inv_Z \ C^n / F⁰`.
    pub point: FiberPoint,
    /// `c₀ + μ` in `C^n`.
    pub representative: Vec<Complex64>,
    /// Integral `μ` with `(T − id) μ = λ`.
    pub correction: Vec<BigInt>,
}

/// `J^Z₀` in the chart of `F⁰`.
pub fn zucker_fiber(t: &MonodromyOperator, orbit: &NilpotentOrbit) -> Result<SemiTorusFiber> {
    let tol = orbit.tolerance().rank;
    let chart = FiberChart::new(orbit.f0(), tol)?;
    let lattice = invariant_lattice(t.matrix())?;
    let vectors = numeric::rat_matrix_to_complex(&lattice.basis().to_rational());
    Ok(SemiTorusFiber::over_chart(chart, &vectors, tol)?)
}

/// Adding the flat integral section `μ` kills the defect, after which the
/// untwisted lifting is `σ(t) + μ`, holomorphic at `t = 0`.
pub fn zucker_limit(
    nf: &NormalFunctionExpr,
    t: &MonodromyOperator,
    orbit: &NilpotentOrbit,
) -> Result<ZuckerLimit> {
    require_orbit(t, orbit)?;
    let adm = check_admissible(nf, t)?;
    if !adm.is_admissible() {
        return Err(NormalFunctionError::NotAdmissible {
            log_growth: adm.log_growth,
            defect_in_image: adm.defect_in_image,
        });
    }
    let lambda = monodromy_defect(nf, t)?;
    let class = class_of_defect(t, &lambda)?;
    if !class.is_zero() {
        return Err(NormalFunctionError::NotExtendable(class));
    }
    let pres = CokernelPresentation::of_monodromy(t.matrix())?;
    let mu = pres
        .integral_preimage(&lambda)
        .expect("zero class has an integral preimage");
    let representative: Vec<Complex64> = nf
        .constant_term()
        .iter()
        .zip(&mu)
        .map(|(c, m)| c + m.to_f64().unwrap_or(f64::NAN))
        .collect();
    let fiber = zucker_fiber(t, orbit)?;
    let point = fiber.reduce_point(&fiber.project(&representative)?)?;
    Ok(ZuckerLimit {
        point,
        representative,
        correction: mu,
    })
}

/// Distance in the fiber over `t` between `ν(t)` and the Zucker limit.
pub fn distance_to_limit(
    nf: &NormalFunctionExpr,
    t_op: &MonodromyOperator,
    orbit: &NilpotentOrbit,
    limit: &ZuckerLimit,
    t: Complex64,
) -> Result<f64> {
    let (fiber, point) = evaluate_unreduced(nf, t_op, orbit, t, 0)?;
    let target = fiber.project(&limit.representative)?;
    Ok(fiber.fiber_distance(&point, &target)?)
}

/// A torsion normal function with class `g`: the constant flat section `−μ`
/// where `(T − id) μ = λ` represents `g`. Its lifting has `σ = −μ`, `ℓ = λ`.
pub fn torsion_nf_from_class(
    t: &MonodromyOperator,
    g: &CurveCohomologyClass,
) -> Result<NormalFunctionExpr> {
    t.require_unipotent()?;
    if !t.log().pow(2).is_zero() {
        return Err(NormalFunctionError::UnsupportedN);
    }
    let pres = CokernelPresentation::of_monodromy(t.matrix())?;
    if g.group != *pres.group() {
        return Err(NormalFunctionError::DimensionMismatch {
            expected: pres.group().coordinate_len(),
            found: g.coords.len(),
        });
    }
    let torsion_len = g.group.torsion().len();
    if g.coords[torsion_len..].iter().any(|x| !x.is_zero()) {
        return Err(NormalFunctionError::NotTorsion);
    }
    let lambda = pres.representative(&g.coords);
    let mu = pres
        .rational_preimage(&lambda)
        .expect("torsion classes lie in the rational image");
    let n = t.rank();
    let sigma: Vec<Complex64> = mu
        .iter()
        .map(|m| Complex64::new(-rat_to_f64(m), 0.0))
        .collect();
    NormalFunctionExpr::new(n, BTreeMap::from([(0, sigma)]), to_rational_vec(&lambda))
}

/// `μ ∈ Q^n` used by [`torsion_nf_from_class`].
pub fn torsion_correction(t: &MonodromyOperator, g: &CurveCohomologyClass) -> Option<Vec<BigRational>> {
    let pres = CokernelPresentation::of_monodromy(t.matrix()).ok()?;
    pres.rational_preimage(&pres.representative(&g.coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{int_vec, rat, IntMatrix};
    use crate::hodge_limits::{HodgeFiltrationStep, Tolerance};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ell(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    fn op(rows: &[&[i64]]) -> MonodromyOperator {
        MonodromyOperator::new(IntMatrix::from_i64(rows)).unwrap()
    }

    fn orbit(t: &MonodromyOperator, f0: Vec<Complex64>) -> NilpotentOrbit {
        let f = HodgeFiltrationStep::from_columns(2, &[f0], 1e-9).unwrap();
        NilpotentOrbit::from_monodromy(t, f, Tolerance::default()).unwrap()
    }

    /// `N e0 = e1`.
    fn pullback_family() -> (MonodromyOperator, NilpotentOrbit) {
        let t = op(&[&[1, 0], &[1, 1]]);
        let o = orbit(&t, vec![c(1., 0.), c(0., 0.)]);
        (t, o)
    }

    fn elliptic_r5() -> (MonodromyOperator, NilpotentOrbit) {
        let t = op(&[&[1, 5], &[0, 1]]);
        let o = orbit(&t, vec![c(0., 1.), c(1., 0.)]);
        (t, o)
    }

    fn nf(sigma: &[(i64, Vec<Complex64>)], l: Vec<BigRational>) -> NormalFunctionExpr {
        NormalFunctionExpr::new(l.len(), sigma.iter().cloned().collect(), l).unwrap()
    }

    #[test]
    fn defects() {
        let (t, _) = pullback_family();
        for p in [-2, 0, 3] {
            let f = nf(&[], ell(&[0, p]));
            assert_eq!(monodromy_defect(&f, &t).unwrap(), int_vec(&[0, p]));
        }
        let half = nf(&[], vec![rat(0, 1), rat(1, 2)]);
        assert_eq!(
            monodromy_defect(&half, &t),
            Err(NormalFunctionError::NonIntegralDefect)
        );
        let unsupported = nf(&[], ell(&[1, 0]));
        assert_eq!(
            monodromy_defect(&unsupported, &t),
            Err(NormalFunctionError::UnsupportedDefect)
        );
    }

    #[test]
    fn admissibility() {
        let (t, _) = pullback_family();
        let good = nf(&[(0, vec![c(1., 0.), c(0., 2.)]), (1, vec![c(0., 1.), c(3., 0.)])], ell(&[0, 2]));
        let a = check_admissible(&good, &t).unwrap();
        assert!(a.log_growth && a.defect_in_image);
        let pole = nf(&[(-1, vec![c(1., 0.), c(0., 0.)])], ell(&[0, 0]));
        assert!(!check_admissible(&pole, &t).unwrap().log_growth);
        let id = op(&[&[1, 0], &[0, 1]]);
        let free = nf(&[], ell(&[1, 0]));
        assert!(!check_admissible(&free, &id).unwrap().defect_in_image);
    }

    #[test]
    fn classes() {
        let (t, _) = elliptic_r5();
        let g = cohomology_class_curve(&nf(&[], ell(&[1, 0])), &t).unwrap();
        assert_eq!(g.torsion_coords(), &int_vec(&[1])[..]);
        assert!(g.torsion && !g.is_zero());
        assert!(cohomology_class_curve(&nf(&[], ell(&[5, 0])), &t).unwrap().is_zero());
        assert!(cohomology_class_curve(&nf(&[], ell(&[0, 0])), &t).unwrap().is_zero());
    }

    #[test]
    fn evaluation_matches_exponential_coordinate() {
        let (t, o) = pullback_family();
        let f = nf(&[], ell(&[0, 1]));
        let (_, p) = evaluate_unreduced(&f, &t, &o, c(0.5, 0.), 0).unwrap();
        let x = (Complex64::new(0.0, 2.0 * PI) * p.coords[0]).exp();
        assert!((x - c(0.5, 0.)).norm() < 1e-12);
        assert_eq!(evaluate(&f, &t, &o, c(0., 0.)), Err(NormalFunctionError::AtOrigin));
    }

    #[test]
    fn branch_invariance() {
        let (t, o) = pullback_family();
        let f = nf(&[(0, vec![c(0.3, 0.1), c(0.2, -0.4)]), (2, vec![c(1., 1.), c(0., 1.)])], ell(&[0, 3]));
        let tt = c(0.2, -0.35);
        let (fiber, a) = evaluate_unreduced(&f, &t, &o, tt, 0).unwrap();
        let b = evaluate_on_branch(&f, &t, &o, tt, 1).unwrap();
        assert!(fiber.fiber_distance(&a, &b).unwrap() < 1e-10);
    }

    #[test]
    fn zucker_limits() {
        let (t, o) = elliptic_r5();
        let f = nf(&[(0, vec![c(0.1, 0.2), c(0.3, 0.)]), (1, vec![c(1., 0.), c(0., 1.)])], ell(&[5, 0]));
        let lim = zucker_limit(&f, &t, &o).unwrap();
        assert_eq!(lim.correction, int_vec(&[0, 1]));
        let mut prev = f64::INFINITY;
        for j in 1..=10 {
            let d = distance_to_limit(&f, &t, &o, &lim, c(10f64.powi(-j), 0.)).unwrap();
            assert!(d <= prev * 1.01 + 1e-12);
            prev = d;
        }
        assert!(prev < 1e-8);

        let g = nf(&[], ell(&[1, 0]));
        match zucker_limit(&g, &t, &o) {
            Err(NormalFunctionError::NotExtendable(class)) => {
                assert_eq!(class.torsion_coords(), &int_vec(&[1])[..])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zucker_limit_without_defect_is_constant_term() {
        let (t, o) = elliptic_r5();
        let c0 = vec![c(0.25, 0.5), c(-0.5, 0.125)];
        let f = nf(&[(0, c0.clone()), (1, vec![c(2., 0.), c(0., 0.)])], ell(&[0, 0]));
        let lim = zucker_limit(&f, &t, &o).unwrap();
        assert_eq!(lim.representative, c0);
    }

    #[test]
    fn torsion_normal_functions() {
        let (t, _) = elliptic_r5();
        let g = class_of_defect(&t, &int_vec(&[1, 0])).unwrap();
        let f = torsion_nf_from_class(&t, &g).unwrap();
        assert_eq!(torsion_correction(&t, &g).unwrap(), vec![rat(0, 1), rat(1, 5)]);
        assert_eq!(f.ell(), &ell(&[1, 0])[..]);
        assert_eq!(cohomology_class_curve(&f, &t).unwrap(), g);

        let zero = class_of_defect(&t, &int_vec(&[0, 0])).unwrap();
        let f0 = torsion_nf_from_class(&t, &zero).unwrap();
        assert_eq!(f0, NormalFunctionExpr::zero(2));

        let free = class_of_defect(&t, &int_vec(&[0, 1])).unwrap();
        assert_eq!(torsion_nf_from_class(&t, &free), Err(NormalFunctionError::NotTorsion));
    }
}
