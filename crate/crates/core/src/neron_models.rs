//! Fibers over the puncture of the Zucker, Clemens, GGK and BPS models and
//! the blow-down map from the Clemens model to the BPS model.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::exact_linalg::{FiniteAbelianGroup, IntMatrix, LatticeSubgroup};
use crate::fibers::{jacobian_fiber, FiberError, FiberPoint, SemiTorusFiber};
use crate::hodge_limits::{ggk_invariant_part, intersect_with_lattice, HodgeError, HodgeFiltrationStep, NilpotentOrbit};
use crate::monodromy::{component_group, invariant_lattice, MonodromyError, MonodromyOperator};
use crate::normal_functions::{
    check_admissible, class_of_defect, cohomology_class_curve, torsion_nf_from_class, zucker_limit,
    CurveCohomologyClass, NormalFunctionError, NormalFunctionExpr, ZuckerLimit,
};
use crate::numeric::{self, CMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NeronError {
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    NormalFunction(#[from] NormalFunctionError),
    #[error("component group too large to enumerate basepoints ({0})")]
    TooManyComponents(String),
}

type Result<T> = std::result::Result<T, NeronError>;

/// Cap on the number of Clemens components given explicit basepoints.
pub const MAX_BASEPOINTS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Zucker,
    Clemens,
    Ggk,
    Bps,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelFiber {
    pub kind: ModelKind,
    pub identity_component: SemiTorusFiber,
    pub components: FiniteAbelianGroup,
    /// Clemens only: a torsion normal function through each component, keyed
    /// by its coordinates in `G₀`.
    pub component_basepoints: BTreeMap<Vec<BigInt>, NormalFunctionExpr>,
}

impl ModelFiber {
    pub fn component_count(&self) -> Option<BigInt> {
        self.components.order()
    }

    pub fn zucker(orbit: &NilpotentOrbit, t: &MonodromyOperator) -> Result<Self> {
        Ok(Self::connected(ModelKind::Zucker, zucker_fiber0(orbit, t)?))
    }

    pub fn ggk(orbit: &NilpotentOrbit, t: &MonodromyOperator) -> Result<Self> {
        Ok(Self::connected(ModelKind::Ggk, ggk_fiber0(orbit, t)?))
    }

    pub fn bps(t: &IntMatrix, f0: &HodgeFiltrationStep, tol: f64) -> Result<Self> {
        Ok(Self::connected(ModelKind::Bps, bps_fiber_curve(t, f0, tol)?))
    }

    /// `0 → J^Z₀ → J^C₀ → G₀ → 0`, one basepoint per element of `G₀`.
    pub fn clemens(orbit: &NilpotentOrbit, t: &MonodromyOperator) -> Result<Self> {
        let identity_component = zucker_fiber0(orbit, t)?;
        let components = component_group(t.matrix())?.group;
        let elements = components
            .elements(MAX_BASEPOINTS)
            .ok_or_else(|| NeronError::TooManyComponents(components.to_string()))?;
        let zero = class_of_defect(t, &vec![BigInt::zero(); t.rank()])?;
        let free = zero.group.free_rank();
        let mut component_basepoints = BTreeMap::new();
        for g in elements {
            let mut coords = g.clone();
            coords.extend(std::iter::repeat_n(BigInt::zero(), free));
            let class = CurveCohomologyClass {
                coords,
                group: zero.group.clone(),
                torsion: true,
            };
            component_basepoints.insert(g, torsion_nf_from_class(t, &class)?);
        }
        Ok(Self {
            kind: ModelKind::Clemens,
            identity_component,
            components,
            component_basepoints,
        })
    }

    fn connected(kind: ModelKind, identity_component: SemiTorusFiber) -> Self {
        Self {
            kind,
            identity_component,
            components: FiniteAbelianGroup::trivial(),
            component_basepoints: BTreeMap::new(),
        }
    }
}

/// `J^Z₀ = H^inv_Z \ C^n / F⁰`.
pub fn zucker_fiber0(orbit: &NilpotentOrbit, t: &MonodromyOperator) -> Result<SemiTorusFiber> {
    t.require_unipotent()?;
    let lattice = invariant_lattice(t.matrix())?;
    Ok(jacobian_fiber(&lattice, orbit.f0(), orbit.rank(), orbit.tolerance().rank)?)
}

/// `J(H^inv) = H^inv_Z \ H^inv_C / (F⁰ ∩ H^inv_C)` with `H^inv = Ker N`.
pub fn ggk_fiber0(orbit: &NilpotentOrbit, t: &MonodromyOperator) -> Result<SemiTorusFiber> {
    t.require_unipotent()?;
    let (lattice, f0_inv) = ggk_invariant_part(orbit);
    sublattice_jacobian(&lattice, &f0_inv, orbit.tolerance().rank)
}

/// `J(H_0)` over a curve: `H_0` is the integral invariant part of `T`.
pub fn bps_fiber_curve(t: &IntMatrix, f0: &HodgeFiltrationStep, tol: f64) -> Result<SemiTorusFiber> {
    let lattice = invariant_lattice(t)?;
    let f0_inv = intersect_with_lattice(f0, &lattice, tol);
    sublattice_jacobian(&lattice, &f0_inv, tol)
}

/// Coordinates of the columns of `v` in the basis of `lattice`.
fn lattice_coordinates(lattice: &LatticeSubgroup, v: &CMatrix) -> CMatrix {
    let b = numeric::rat_matrix_to_complex(&lattice.basis().to_rational());
    let gram = b.adjoint() * &b;
    let inv = gram.try_inverse().expect("lattice basis is independent");
    inv * b.adjoint() * v
}

/// `L \ (L ⊗ C) / F` computed in the coordinates of a basis of `L`.
fn sublattice_jacobian(lattice: &LatticeSubgroup, f: &HodgeFiltrationStep, tol: f64) -> Result<SemiTorusFiber> {
    let k = lattice.rank();
    if k == 0 {
        return Ok(SemiTorusFiber::point());
    }
    let coords = HodgeFiltrationStep::new(lattice_coordinates(lattice, f.basis()), tol)?;
    Ok(jacobian_fiber(&LatticeSubgroup::full(k), &coords, k, tol)?)
}

/// The extended value `ν̄(0)` in the Clemens fiber.
#[derive(Clone, Debug, PartialEq)]
pub struct ClemensPoint {
    /// `γ₀(ν)`.
    pub component: CurveCohomologyClass,
    /// Zucker limit of `ν − ν_g`.
    pub coordinate: ZuckerLimit,
    /// `ν_g`.
    pub basepoint: NormalFunctionExpr,
}

pub fn clemens_extend(
    nf: &NormalFunctionExpr,
    t: &MonodromyOperator,
    orbit: &NilpotentOrbit,
) -> Result<ClemensPoint> {
    let adm = check_admissible(nf, t)?;
    if !adm.is_admissible() {
        return Err(NormalFunctionError::NotAdmissible {
            log_growth: adm.log_growth,
            defect_in_image: adm.defect_in_image,
        }
        .into());
    }
    let component = cohomology_class_curve(nf, t)?;
    let basepoint = torsion_nf_from_class(t, &component)?;
    clemens_extend_with_basepoint(nf, t, orbit, &basepoint)
}

/// As [`clemens_extend`] with a caller-chosen basepoint in the same component.
pub fn clemens_extend_with_basepoint(
    nf: &NormalFunctionExpr,
    t: &MonodromyOperator,
    orbit: &NilpotentOrbit,
    basepoint: &NormalFunctionExpr,
) -> Result<ClemensPoint> {
    let component = cohomology_class_curve(nf, t)?;
    let coordinate = zucker_limit(&nf.sub(basepoint), t, orbit)?;
    Ok(ClemensPoint {
        component,
        coordinate,
        basepoint: basepoint.clone(),
    })
}

/// `J^C₀ → J(H_0)`: retract `C^n` onto `H^inv_C` along `F⁰` plus coordinate
/// vectors, then pass to the BPS quotient. Trivial invariants give the point.
pub fn blow_down(
    value: &[Complex64],
    t: &IntMatrix,
    f0: &HodgeFiltrationStep,
    tol: f64,
) -> Result<(SemiTorusFiber, FiberPoint)> {
    let fiber = bps_fiber_curve(t, f0, tol)?;
    let lattice = invariant_lattice(t)?;
    let k = lattice.rank();
    if k == 0 {
        return Ok((fiber, FiberPoint::zero(0)));
    }
    let n = lattice.ambient_rank();
    if value.len() != n {
        return Err(FiberError::DimensionMismatch {
            expected: n,
            found: value.len(),
        }
        .into());
    }
    let b = numeric::rat_matrix_to_complex(&lattice.basis().to_rational());
    let mut frame = b.clone();
    let candidates = f0.columns().into_iter().chain((0..n).map(|i| {
        let mut e = vec![Complex64::zero(); n];
        e[i] = Complex64::new(1.0, 0.0);
        e
    }));
    for c in candidates {
        if frame.ncols() == n {
            break;
        }
        let trial = numeric::hstack(&frame, &CMatrix::from_column_slice(n, 1, &c));
        if numeric::numeric_rank(&trial, tol) > frame.ncols() {
            frame = trial;
        }
    }
    let inv = frame
        .try_inverse()
        .ok_or(FiberError::ProjectionDegenerate { rank: k, cols: n })?;
    let coords = inv * DVector::from_column_slice(value);
    let x: Vec<Complex64> = coords.iter().take(k).copied().collect();
    let point = fiber.reduce_point(&fiber.project(&x)?)?;
    Ok((fiber, point))
}

/// Blow-down of a Clemens point (its coordinate in the identity component).
pub fn blow_down_clemens(
    point: &ClemensPoint,
    t: &MonodromyOperator,
    orbit: &NilpotentOrbit,
) -> Result<FiberPoint> {
    Ok(blow_down(
        &point.coordinate.representative,
        t.matrix(),
        orbit.f0(),
        orbit.tolerance().rank,
    )?
    .1)
}
