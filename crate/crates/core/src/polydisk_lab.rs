//! The family over the bidisk pulled back from the orbit `N e0 = e1`,
//! `F⁰ = C e0` along `(t1, t2) ↦ t1 t2`, the normal functions `ν_{p,α}`
//! with `x = α t1^p`, and a numerical probe showing that one sequence of
//! parameters has two limits in the extended model.
//!
//! Points of the identity component over `(t1, t2)` are `x ∈ C*` modulo
//! `x ~ x (t1 t2)^k`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_linalg::{int_vec, rat, IntMatrix};
use crate::hodge_limits::{HodgeError, HodgeFiltrationStep, NilpotentOrbit, Tolerance};
use crate::monodromy::{
    admissible_class_subgroup, link_cohomology_bidisk, AdmissibleClasses, Cocycle, LinkCohomology,
    MonodromyError, MonodromyOperator,
};
use crate::normal_functions::{
    class_of_defect, cohomology_class_curve, CurveCohomologyClass, NormalFunctionError, NormalFunctionExpr,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("bad curve: {0}")]
    BadCurve(String),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    NormalFunction(#[from] NormalFunctionError),
}

type Result<T> = std::result::Result<T, LabError>;

/// Samples whose last three chart values agree within this are converged.
pub const CONVERGENCE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct BidiskFamilyConfig {
    pub orbit: NilpotentOrbit,
    pub t: MonodromyOperator,
    pub link: LinkCohomology,
    pub admissible: AdmissibleClasses,
    /// Class of `(e1, 0)`; fixes the sign of `γ₀`.
    pub generator: Vec<BigInt>,
}

impl BidiskFamilyConfig {
    pub fn new(tol: Tolerance) -> Result<Self> {
        let t = MonodromyOperator::new(IntMatrix::from_i64(&[&[1, 0], &[1, 1]]))?;
        let one = Complex64::new(1.0, 0.0);
        let f0 = HodgeFiltrationStep::from_columns(2, &[vec![one, Complex64::zero()]], tol.rank)?;
        let orbit = NilpotentOrbit::from_monodromy(&t, f0, tol)?;
        let link = link_cohomology_bidisk(t.matrix(), t.matrix())?;
        let admissible = admissible_class_subgroup(&link);
        let generator = link.class_of(&Self::generator_cocycle())?;
        Ok(Self {
            orbit,
            t,
            link,
            admissible,
            generator,
        })
    }

    pub fn generator_cocycle() -> Cocycle {
        Cocycle::new(int_vec(&[0, 1]), int_vec(&[0, 0]))
    }

    /// `T1 = T2 = exp N`.
    pub fn monodromies(&self) -> (&IntMatrix, &IntMatrix) {
        (self.t.matrix(), self.t.matrix())
    }
}

impl Default for BidiskFamilyConfig {
    fn default() -> Self {
        Self::new(Tolerance::default()).expect("the standard configuration is valid")
    }
}

/// `ν_{p,α}`: `x = α t1^p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NuPAlpha {
    pub p: i64,
    pub alpha: Complex64,
}

impl NuPAlpha {
    pub fn new(p: i64, alpha: Complex64) -> Result<Self> {
        if alpha.is_zero() || !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(LabError::BadParameters("alpha must be a nonzero finite number".into()));
        }
        Ok(Self { p, alpha })
    }

    /// The defect cocycle `(p e1, 0)`: continuation in `t1` only.
    pub fn defect_cocycle(&self) -> Cocycle {
        Cocycle::new(int_vec(&[0, self.p]), int_vec(&[0, 0]))
    }

    pub fn x(&self, t1: Complex64) -> Complex64 {
        self.alpha * t1.powi(self.p as i32)
    }

    /// `log α / 2πi` on the principal branch.
    pub fn alpha_coordinate(&self) -> Complex64 {
        self.alpha.ln() / Complex64::new(0.0, 2.0 * PI)
    }
}

/// A point of the identity-component chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartValue {
    /// `x (t1 t2)^k`.
    pub representative: Complex64,
    pub k: i64,
    /// `t1 t2 = 0`: no identification, `x` returned as is.
    pub on_boundary: bool,
}

/// Moves `x` into the fundamental annulus `|log|x|| ≤ |log|q|| / 2` by the
/// shift `x q^k`, ties broken towards the smaller `k`.
pub fn identity_component_chart(
    _cfg: &BidiskFamilyConfig,
    t1: Complex64,
    t2: Complex64,
    x: Complex64,
) -> Result<ChartValue> {
    if x.is_zero() {
        return Err(LabError::BadParameters("x must be nonzero".into()));
    }
    let q = t1 * t2;
    if q.is_zero() {
        return Ok(ChartValue {
            representative: x,
            k: 0,
            on_boundary: true,
        });
    }
    if q.norm() >= 1.0 || t1.norm() >= 1.0 || t2.norm() >= 1.0 {
        return Err(LabError::BadParameters("(t1, t2) must lie in the bidisk".into()));
    }
    let r = -x.norm().ln() / q.norm().ln();
    let floor = r.floor();
    let k = if (r - floor - 0.5).abs() < 1e-9 {
        floor
    } else {
        r.round()
    };
    let k = k as i64;
    Ok(ChartValue {
        representative: x * q.powi(k as i32),
        k,
        on_boundary: false,
    })
}

/// `γ₀(ν_{p,α})` as a multiple of the class of `(e1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuClass {
    pub value: i64,
    pub class: Vec<BigInt>,
    pub cocycle: Cocycle,
}

pub fn nu_class(cfg: &BidiskFamilyConfig, nf: &NuPAlpha) -> Result<NuClass> {
    let cocycle = nf.defect_cocycle();
    let class = cfg.link.class_of(&cocycle)?;
    // express the class in the invariant-factor generator of the admissible subgroup
    let gen = &cfg.admissible.generator_classes[0];
    let multiple = multiple_of(&class, gen).ok_or_else(|| {
        LabError::BadParameters("class is not a multiple of the admissible generator".into())
    })?;
    let sign = if *gen == cfg.generator { 1 } else { -1 };
    let value = (multiple * BigInt::from(sign))
        .to_i64()
        .ok_or_else(|| LabError::BadParameters("class out of range".into()))?;
    Ok(NuClass {
        value,
        class,
        cocycle,
    })
}

/// `m` with `v = m g` in a free group, if it exists.
fn multiple_of(v: &[BigInt], g: &[BigInt]) -> Option<BigInt> {
    let (i, gi) = g.iter().enumerate().find(|(_, x)| !x.is_zero())?;
    let (m, rem): (BigInt, BigInt) = v[i].div_rem(gi);
    if !rem.is_zero() {
        return None;
    }
    v.iter().zip(g).all(|(a, b)| *a == &m * b).then_some(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Chart-0 values converge to a point of the identity component while
    /// the extended section lies in a nonzero component.
    TwoLimitWitness,
    NoChart0Accumulation,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::TwoLimitWitness => "TwoLimitWitness",
            Verdict::NoChart0Accumulation => "NoChart0Accumulation",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeSample {
    pub j: u32,
    pub t1: Complex64,
    pub t2: Complex64,
    pub representative: Complex64,
    pub shift_k: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub p: i64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub samples: Vec<ProbeSample>,
    pub limit_chart0: Option<Complex64>,
    /// `α/β` for `p > 0`, `αβ` for `p < 0`; absent for `|p| ≤ 1`.
    pub expected_limit: Option<Complex64>,
    pub extended_component: i64,
    /// Chart value of the extension inside its component (depends on `α`).
    pub extended_value: Complex64,
    pub verdict: Verdict,
}

pub const CSV_HEADER: &str = "j,t1_re,t1_im,t2_re,t2_im,chart0_re,chart0_im,shift_k";

impl ProbeReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            writeln!(
                out,
                "{},{:?},{:?},{:?},{:?},{:?},{:?},{}",
                s.j, s.t1.re, s.t1.im, s.t2.re, s.t2.im, s.representative.re, s.representative.im, s.shift_k
            )
            .expect("writing to a string");
        }
        out
    }
}

/// Samples `t1 = 2^−j` along `t2 = β t1^{|p|−1}` (`t2 = β t1` when `|p| ≤ 1`).
pub fn hausdorff_probe(
    cfg: &BidiskFamilyConfig,
    nf: &NuPAlpha,
    beta: Complex64,
    samples: u32,
) -> Result<ProbeReport> {
    if samples < 8 {
        return Err(LabError::BadParameters("at least 8 samples are required".into()));
    }
    if samples > 1000 {
        return Err(LabError::BadParameters("at most 1000 samples are supported".into()));
    }
    if beta.is_zero() || !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(LabError::BadParameters("beta must be a nonzero finite number".into()));
    }
    let witness_branch = nf.p.abs() >= 2;
    let exponent = if witness_branch { nf.p.abs() - 1 } else { 1 };
    let mut out = Vec::new();
    for j in 1..=samples {
        let t1 = Complex64::new(0.5f64.powi(j as i32), 0.0);
        let t2 = beta * t1.powi(exponent as i32);
        if t2.norm() >= 1.0 {
            continue;
        }
        let x = nf.x(t1);
        if x.is_zero() || !x.re.is_finite() || !x.im.is_finite() {
            continue;
        }
        let chart = identity_component_chart(cfg, t1, t2, x)?;
        out.push(ProbeSample {
            j,
            t1,
            t2,
            representative: chart.representative,
            shift_k: chart.k,
        });
    }
    let limit_chart0 = converged_limit(&out);
    let expected_limit = match nf.p {
        p if p >= 2 => Some(nf.alpha / beta),
        p if p <= -2 => Some(nf.alpha * beta),
        _ => None,
    };
    let class = nu_class(cfg, nf)?;
    let matches = match (limit_chart0, expected_limit) {
        (Some(l), Some(e)) => (l - e).norm() <= CONVERGENCE_TOL * e.norm().max(1.0),
        _ => false,
    };
    let verdict = if witness_branch && matches && class.value != 0 {
        Verdict::TwoLimitWitness
    } else {
        Verdict::NoChart0Accumulation
    };
    Ok(ProbeReport {
        p: nf.p,
        alpha: nf.alpha,
        beta,
        samples: out,
        limit_chart0,
        expected_limit,
        extended_component: class.value,
        extended_value: nf.alpha,
        verdict,
    })
}

/// Last value if the last three agree and are bounded away from `0`.
fn converged_limit(samples: &[ProbeSample]) -> Option<Complex64> {
    if samples.len() < 3 {
        return None;
    }
    let tail = &samples[samples.len() - 3..];
    let last = tail[2].representative;
    let scale = last.norm().max(1.0);
    let agree = tail
        .iter()
        .all(|s| (s.representative - last).norm() <= CONVERGENCE_TOL * scale);
    (agree && last.norm() > CONVERGENCE_TOL).then_some(last)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Curve {
    /// `t2 = c`, parametrised by `t1`.
    Horizontal(Complex64),
    /// `t1 = t2 = s`.
    Diagonal,
}

/// A normal function on a curve through the origin, with its class and the
/// image of the bidisk class under restriction of cocycles.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub monodromy: MonodromyOperator,
    pub orbit: NilpotentOrbit,
    pub nf: NormalFunctionExpr,
    pub class: CurveCohomologyClass,
    /// Image of the defect cocycle `(λ1, λ2)`.
    pub restricted_cocycle: Vec<BigInt>,
    pub restricted_class: CurveCohomologyClass,
}

impl Restriction {
    /// Whether the restricted normal function extends over the origin.
    pub fn extends(&self) -> bool {
        self.class.is_zero()
    }

    pub fn consistent(&self) -> bool {
        self.class == self.restricted_class
    }
}

/// Restriction of link cocycles: `(λ1, λ2) ↦ λ1` along `t2 = c`, and
/// `(λ1, λ2) ↦ T2 λ1 + λ2` along the diagonal.
pub fn restrict_cocycle(cfg: &BidiskFamilyConfig, curve: Curve, c: &Cocycle) -> Vec<BigInt> {
    match curve {
        Curve::Horizontal(_) => c.lambda1.clone(),
        Curve::Diagonal => {
            let (_, t2) = cfg.monodromies();
            t2.mul_vec(&c.lambda1)
                .iter()
                .zip(&c.lambda2)
                .map(|(a, b)| a + b)
                .collect()
        }
    }
}

pub fn restrict_to_curve(cfg: &BidiskFamilyConfig, nf: &NuPAlpha, curve: Curve) -> Result<Restriction> {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let tol = cfg.orbit.tolerance();
    let (monodromy, f0) = match curve {
        Curve::Horizontal(c) => {
            if c.is_zero() || c.norm() >= 1.0 || !c.re.is_finite() || !c.im.is_finite() {
                return Err(LabError::BadCurve("need 0 < |c| < 1".into()));
            }
            // F⁰ restricted to t2 = c is exp(z2 N) F⁰ with z2 = log c / 2πi
            let z2 = c.ln() / two_pi_i;
            (cfg.t.clone(), cfg.orbit.filtration_at(z2))
        }
        Curve::Diagonal => {
            let (t1, t2) = cfg.monodromies();
            (MonodromyOperator::new(t1 * t2)?, cfg.orbit.f0().clone())
        }
    };
    let orbit = NilpotentOrbit::from_monodromy(&monodromy, f0, tol)?;
    let n = cfg.orbit.rank();
    let mut sigma = vec![Complex64::zero(); n];
    sigma[1] = nf.alpha_coordinate();
    let ell = vec![rat(0, 1), rat(nf.p, 1)];
    let restricted_nf = NormalFunctionExpr::new(n, BTreeMap::from([(0, sigma)]), ell)?;
    let class = cohomology_class_curve(&restricted_nf, &monodromy)?;
    let restricted_cocycle = restrict_cocycle(cfg, curve, &nf.defect_cocycle());
    let restricted_class = class_of_defect(&monodromy, &restricted_cocycle)?;
    Ok(Restriction {
        monodromy,
        orbit,
        nf: restricted_nf,
        class,
        restricted_cocycle,
        restricted_class,
    })
}

/// `x = exp(2πi u)` for the `e1` coordinate `u` of a one-variable value.
pub fn exp_coordinate(u: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * u).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_functions::{evaluate_unreduced, zucker_limit};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> BidiskFamilyConfig {
        BidiskFamilyConfig::default()
    }

    fn nu(p: i64, alpha: f64) -> NuPAlpha {
        NuPAlpha::new(p, c(alpha, 0.)).unwrap()
    }

    #[test]
    fn admissible_subgroup_is_infinite_cyclic() {
        let cfg = cfg();
        assert_eq!(cfg.admissible.group.free_rank(), 1);
        assert!(cfg.admissible.group.torsion().is_empty());
        assert_eq!(cfg.link.subgroup_generated(std::slice::from_ref(&cfg.generator)), cfg.admissible.group);
    }

    #[test]
    fn charts() {
        let cfg = cfg();
        let v = identity_component_chart(&cfg, c(0.5, 0.), c(0.5, 0.), c(4., 0.)).unwrap();
        assert_eq!(v.representative, c(1., 0.));
        assert_eq!(v.k, 1);
        let v = identity_component_chart(&cfg, c(0.01, 0.), c(0.02, 0.), c(1., 0.)).unwrap();
        assert_eq!((v.representative, v.k), (c(1., 0.), 0));
        let v = identity_component_chart(&cfg, c(0., 0.), c(0.3, 0.), c(7., 1.)).unwrap();
        assert!(v.on_boundary);
        assert_eq!(v.representative, c(7., 1.));
        assert!(identity_component_chart(&cfg, c(0.5, 0.), c(0.5, 0.), c(0., 0.)).is_err());
    }

    #[test]
    fn chart_gauge_invariance() {
        let cfg = cfg();
        let (t1, t2) = (c(0.5, 0.), c(0.25, 0.));
        let q = t1 * t2;
        let x = c(0.75, 0.);
        let base = identity_component_chart(&cfg, t1, t2, x).unwrap();
        for m in -3..=3 {
            let v = identity_component_chart(&cfg, t1, t2, x * q.powi(m)).unwrap();
            assert_eq!(v.representative, base.representative);
        }
    }

    #[test]
    fn classes_of_nu() {
        let cfg = cfg();
        for p in -3..=3 {
            assert_eq!(nu_class(&cfg, &nu(p, 1.5)).unwrap().value, p);
        }
    }

    #[test]
    fn probe_witness() {
        let cfg = cfg();
        let r = hausdorff_probe(&cfg, &nu(2, 1.), c(0.5, 0.), 16).unwrap();
        assert!(r.samples.iter().all(|s| s.representative == c(2., 0.)));
        assert_eq!(r.limit_chart0, Some(c(2., 0.)));
        assert_eq!(r.verdict, Verdict::TwoLimitWitness);
        assert_eq!(r.extended_component, 2);
        for (beta, expected) in [(0.5, 2.0), (1.0, 1.0), (2.0, 0.5)] {
            let r = hausdorff_probe(&cfg, &nu(2, 1.), c(beta, 0.), 16).unwrap();
            let l = r.limit_chart0.unwrap();
            assert!((l - c(expected, 0.)).norm() < 1e-10);
        }
    }

    #[test]
    fn probe_negative_p() {
        let cfg = cfg();
        let r = hausdorff_probe(&cfg, &nu(-3, 1.), c(0.5, 0.), 16).unwrap();
        assert_eq!(r.verdict, Verdict::TwoLimitWitness);
        assert!((r.limit_chart0.unwrap() - c(0.5, 0.)).norm() < 1e-10);
        assert!(r.samples.iter().all(|s| s.shift_k == 1));
        assert_eq!(r.extended_component, -3);
    }

    #[test]
    fn probe_without_witness() {
        let cfg = cfg();
        for p in [-1, 0, 1] {
            let r = hausdorff_probe(&cfg, &nu(p, 1.), c(1., 0.), 16).unwrap();
            assert_eq!(r.verdict, Verdict::NoChart0Accumulation);
        }
        assert!(hausdorff_probe(&cfg, &nu(2, 1.), c(0.5, 0.), 4).is_err());
        assert!(hausdorff_probe(&cfg, &nu(2, 1.), c(0., 0.), 16).is_err());
        assert!(NuPAlpha::new(1, c(0., 0.)).is_err());
    }

    #[test]
    fn csv_format() {
        let r = hausdorff_probe(&cfg(), &nu(2, 1.), c(0.5, 0.), 8).unwrap();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("1,0.5,0.0,0.25,0.0,2.0,0.0,-1"));
        assert_eq!(csv.lines().count(), 9);
    }

    #[test]
    fn horizontal_restriction_extends() {
        let cfg = cfg();
        let r = restrict_to_curve(&cfg, &nu(2, 1.), Curve::Horizontal(c(0.5, 0.))).unwrap();
        assert!(r.extends());
        assert!(r.consistent());
        assert!(zucker_limit(&r.nf, &r.monodromy, &r.orbit).is_ok());
        let trivial = restrict_to_curve(&cfg, &nu(0, 1.), Curve::Horizontal(c(0.5, 0.))).unwrap();
        assert!(trivial.nf.ell().iter().all(Zero::is_zero));
        assert!(restrict_to_curve(&cfg, &nu(2, 1.), Curve::Horizontal(c(0., 0.))).is_err());
    }

    #[test]
    fn diagonal_restriction() {
        let cfg = cfg();
        for p in -3..=3 {
            let r = restrict_to_curve(&cfg, &nu(p, 1.), Curve::Diagonal).unwrap();
            assert!(r.consistent());
            assert_eq!(r.restricted_cocycle, int_vec(&[0, p]));
            assert_eq!(r.class.torsion_coords(), &int_vec(&[p.rem_euclid(2)])[..]);
        }
    }

    #[test]
    fn restriction_is_well_defined_on_classes() {
        let cfg = cfg();
        let (t1, t2) = cfg.monodromies();
        for mu in [int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[2, -3])] {
            let cob = Cocycle::new(t1.minus_identity().mul_vec(&mu), t2.minus_identity().mul_vec(&mu));
            for curve in [Curve::Horizontal(c(0.5, 0.)), Curve::Diagonal] {
                let m = match curve {
                    Curve::Horizontal(_) => cfg.t.clone(),
                    Curve::Diagonal => MonodromyOperator::new(t1 * t2).unwrap(),
                };
                let img = restrict_cocycle(&cfg, curve, &cob);
                assert!(class_of_defect(&m, &img).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn one_variable_value_is_alpha_t_to_the_p() {
        let cfg = cfg();
        let r = restrict_to_curve(&cfg, &nu(1, 1.), Curve::Horizontal(c(0.5, 0.))).unwrap();
        let (_, p) = evaluate_unreduced(&r.nf, &r.monodromy, &r.orbit, c(0.5, 0.), 0).unwrap();
        let coord = r.orbit.f0();
        assert_eq!(coord.dim(), 1);
        assert!((exp_coordinate(p.coords[0]) - c(0.5, 0.)).norm() < 1e-12);
    }
}
