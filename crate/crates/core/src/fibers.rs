//! Fibers `Λ \ C^n / F⁰` presented as `V / Λ'` with `V` a coordinate
//! complement of `F⁰`, classified by their real Lie group type.

use nalgebra::DVector;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exact_linalg::rational::lattice_of_subspace;
use crate::exact_linalg::{rat, smith_normal_form, LatticeSubgroup, RatMatrix};
use crate::hodge_limits::HodgeFiltrationStep;
use crate::numeric::{self, CMatrix, RMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FiberError {
    #[error("F0 is rank-deficient or has no coordinate complement (rank {rank} of {cols})")]
    ProjectionDegenerate { rank: usize, cols: usize },
    #[error("the fiber is not discrete")]
    NonDiscreteFiber,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point has non-finite coordinates")]
    NonFinite,
}

/// Largest denominator accepted when recognising rational relations.
pub const MAX_RELATION_DENOMINATOR: i64 = 10_000;

/// Coordinates on `V = C^n / F⁰` given by selected standard basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberChart {
    ambient: usize,
    complement: Vec<usize>,
    projector: CMatrix,
}

impl FiberChart {
    /// Greedy column pivoting: repeatedly add the standard basis vector with the
    /// largest residual against `F⁰` plus the vectors already chosen.
    pub fn new(f0: &HodgeFiltrationStep, tol: f64) -> Result<Self, FiberError> {
        let n = f0.ambient_dim();
        let k = f0.dim();
        let rank = numeric::numeric_rank(f0.basis(), tol);
        if rank != k || k > n {
            return Err(FiberError::ProjectionDegenerate { rank, cols: k });
        }
        let mut q: Vec<DVector<Complex64>> = numeric::column_span(f0.basis(), tol)
            .column_iter()
            .map(|c| c.into_owned())
            .collect();
        let mut complement = Vec::new();
        for _ in k..n {
            let mut best: Option<(usize, f64, DVector<Complex64>)> = None;
            for i in (0..n).filter(|i| !complement.contains(i)) {
                let mut r = DVector::from_fn(n, |j, _| {
                    if j == i {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                for b in &q {
                    let c = b.dotc(&r);
                    r -= b * c;
                }
                let norm = r.norm();
                if best.as_ref().is_none_or(|(_, bn, _)| norm > bn + 1e-12) {
                    best = Some((i, norm, r));
                }
            }
            let (i, norm, r) = best.expect("a candidate remains");
            if norm <= tol {
                return Err(FiberError::ProjectionDegenerate { rank, cols: k });
            }
            complement.push(i);
            q.push(r / Complex64::new(norm, 0.0));
        }
        complement.sort_unstable();
        let mut frame = CMatrix::zeros(n, n);
        frame.view_mut((0, 0), (n, k)).copy_from(f0.basis());
        for (j, &i) in complement.iter().enumerate() {
            frame[(i, k + j)] = Complex64::new(1.0, 0.0);
        }
        let inverse = frame
            .try_inverse()
            .ok_or(FiberError::ProjectionDegenerate { rank, cols: k })?;
        let projector = inverse.rows(k, n - k).into_owned();
        Ok(Self {
            ambient: n,
            complement,
            projector,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Standard basis indices spanning the complement.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// `d x n` matrix sending `C^n` to `V` along `F⁰`.
    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    pub fn project(&self, v: &[Complex64]) -> Result<FiberPoint, FiberError> {
        if v.len() != self.ambient {
            return Err(FiberError::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        let out = &self.projector * DVector::from_column_slice(v);
        FiberPoint::new(out.iter().copied().collect())
    }

    pub fn project_matrix(&self, m: &CMatrix) -> CMatrix {
        &self.projector * m
    }
}

/// A representative in `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberPoint {
    pub coords: Vec<Complex64>,
}

impl FiberPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, FiberError> {
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(FiberError::NonFinite);
        }
        Ok(Self { coords })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            coords: vec![Complex64::new(0.0, 0.0); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Data used for reduction and distances in a discrete fiber.
#[derive(Clone, Debug, PartialEq)]
struct LatticeFrame {
    /// Real `2d x ρ'` basis of the image lattice.
    basis: RMatrix,
    /// `[basis | orthonormal complement]`, inverted.
    frame_inverse: RMatrix,
    frame: RMatrix,
}

/// `V / Λ'` with `Λ'` the image of the lattice generators.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiTorusFiber {
    dim: usize,
    lattice_images: CMatrix,
    discrete: bool,
    real_type: Option<(usize, usize)>,
    chart: Option<FiberChart>,
    frame: Option<LatticeFrame>,
}

impl SemiTorusFiber {
    /// Classifies the subgroup of `C^d` generated by the columns of `images`.
    ///
    /// With real rank `r` of the generators, the group is discrete exactly when
    /// the real relations among the generators are rational; then it is a
    /// lattice of rank `r`.
    pub fn from_generators(images: CMatrix, tol: f64) -> Self {
        let d = images.nrows();
        let rho = images.ncols();
        let g = numeric::realify(&images);
        let r = numeric::real_rank(&g, tol);
        let basis = if r == rho {
            Some(g.clone())
        } else {
            rational_relations(&g, tol).map(|relations| {
                // the trailing columns of U^-1 complete the relation lattice to Z^ρ
                let smith = smith_normal_form(relations.basis());
                let u_inv = RMatrix::from_fn(rho, rho, |i, j| {
                    smith.u_inv[(i, j)].to_f64().unwrap_or(f64::NAN)
                });
                (&g * u_inv).columns(rho - r, r).into_owned()
            })
        };
        let frame = basis.map(|b| lattice_frame(b, d));
        Self {
            dim: d,
            lattice_images: images,
            discrete: frame.is_some(),
            real_type: frame.as_ref().map(|_| (r, 2 * d - r)),
            chart: None,
            frame,
        }
    }

    /// Projects the columns of `vectors` (in `C^n`) through `chart`.
    pub fn over_chart(chart: FiberChart, vectors: &CMatrix, tol: f64) -> Result<Self, FiberError> {
        if vectors.nrows() != chart.ambient_dim() {
            return Err(FiberError::DimensionMismatch {
                expected: chart.ambient_dim(),
                found: vectors.nrows(),
            });
        }
        let mut fiber = Self::from_generators(chart.project_matrix(vectors), tol);
        fiber.chart = Some(chart);
        Ok(fiber)
    }

    /// The one-point group.
    pub fn point() -> Self {
        Self::from_generators(CMatrix::zeros(0, 0), 1e-9)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lattice_images(&self) -> &CMatrix {
        &self.lattice_images
    }

    pub fn is_discrete(&self) -> bool {
        self.discrete
    }

    /// `(ρ', 2d − ρ')`: the group is `T^ρ' × R^(2d−ρ')` as a real Lie group.
    pub fn real_type(&self) -> Option<(usize, usize)> {
        self.real_type
    }

    pub fn is_point(&self) -> bool {
        self.dim == 0
    }

    pub fn is_compact(&self) -> bool {
        matches!(self.real_type, Some((_, 0)))
    }

    pub fn chart(&self) -> Option<&FiberChart> {
        self.chart.as_ref()
    }

    /// Projects a vector of the ambient space into `V` (charted fibers only).
    pub fn project(&self, v: &[Complex64]) -> Result<FiberPoint, FiberError> {
        match &self.chart {
            Some(c) => c.project(v),
            None => FiberPoint::new(v.to_vec()),
        }
    }

    fn frame(&self) -> Result<&LatticeFrame, FiberError> {
        self.frame.as_ref().ok_or(FiberError::NonDiscreteFiber)
    }

    fn check_dim(&self, v: &FiberPoint) -> Result<(), FiberError> {
        if v.dim() == self.dim {
            Ok(())
        } else {
            Err(FiberError::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            })
        }
    }

    /// Canonical representative: fractional parts of the lattice coordinates.
    pub fn reduce_point(&self, v: &FiberPoint) -> Result<FiberPoint, FiberError> {
        let frame = self.frame()?;
        self.check_dim(v)?;
        if self.dim == 0 {
            return Ok(v.clone());
        }
        let x = realify_point(v);
        let mut coords = &frame.frame_inverse * x;
        for i in 0..frame.basis.ncols() {
            let mut f = coords[i] - coords[i].floor();
            if f > 1.0 - 1e-12 {
                f = 0.0;
            }
            coords[i] = f;
        }
        FiberPoint::new(numeric::complexify(&(&frame.frame * coords)))
    }

    /// `min_λ |a − b − λ|` over lattice shifts near the reduced difference.
    pub fn fiber_distance(&self, a: &FiberPoint, b: &FiberPoint) -> Result<f64, FiberError> {
        let frame = self.frame()?;
        self.check_dim(a)?;
        self.check_dim(b)?;
        if self.dim == 0 {
            return Ok(0.0);
        }
        let diff = realify_point(&a.sub(b));
        let mut coords = &frame.frame_inverse * diff;
        let rank = frame.basis.ncols();
        for i in 0..rank {
            coords[i] -= (coords[i] + 0.5).floor();
        }
        let base = &frame.frame * &coords;
        // |base + B s|² = c + 2 bᵀs + sᵀ G s
        let gram = frame.basis.transpose() * &frame.basis;
        let lin = frame.basis.transpose() * &base;
        let c = base.norm_squared();
        let radius: i64 = if rank <= 4 { 3 } else { 2 };
        let mut shift = vec![-radius as f64; rank];
        let mut best = f64::INFINITY;
        let mut best_shift = shift.clone();
        loop {
            let mut q = c;
            for i in 0..rank {
                let si = shift[i];
                if si == 0.0 {
                    continue;
                }
                q += 2.0 * lin[i] * si + gram[(i, i)] * si * si;
                for j in 0..i {
                    q += 2.0 * gram[(i, j)] * si * shift[j];
                }
            }
            if q < best {
                best = q;
                best_shift.clone_from(&shift);
            }
            let mut i = 0;
            while i < rank {
                shift[i] += 1.0;
                if shift[i] <= radius as f64 {
                    break;
                }
                shift[i] = -radius as f64;
                i += 1;
            }
            if i == rank {
                break;
            }
        }
        let v = base + &frame.basis * DVector::from_vec(best_shift);
        Ok(v.norm())
    }
}

fn realify_point(v: &FiberPoint) -> DVector<f64> {
    let d = v.dim();
    DVector::from_fn(2 * d, |i, _| {
        if i < d {
            v.coords[i].re
        } else {
            v.coords[i - d].im
        }
    })
}

fn lattice_frame(basis: RMatrix, d: usize) -> LatticeFrame {
    let r = basis.ncols();
    let complement = if r == 0 {
        RMatrix::identity(2 * d, 2 * d)
    } else {
        numeric::real_null_space(&basis.transpose(), 1e-9)
    };
    let mut frame = RMatrix::zeros(2 * d, 2 * d);
    frame.view_mut((0, 0), (2 * d, r)).copy_from(&basis);
    frame
        .view_mut((0, r), (2 * d, 2 * d - r))
        .copy_from(&complement.columns(0, 2 * d - r));
    let frame_inverse = frame.clone().try_inverse().expect("frame is a basis");
    LatticeFrame {
        basis,
        frame_inverse,
        frame,
    }
}

/// The saturated lattice of integer relations among the columns of `g`, if
/// the real relation space is spanned by rational vectors.
fn rational_relations(g: &RMatrix, tol: f64) -> Option<LatticeSubgroup> {
    let rho = g.ncols();
    let kernel = numeric::real_null_space(g, tol);
    let (rref, pivots) = numeric::real_rref(&kernel.transpose(), tol);
    let mut rows = Vec::with_capacity(pivots.len());
    for i in 0..pivots.len() {
        let mut row = Vec::with_capacity(rho);
        for j in 0..rho {
            let (p, q) = numeric::approx_rational(rref[(i, j)], MAX_RELATION_DENOMINATOR, 1e-9)?;
            row.push(rat(p, q));
        }
        rows.push(row);
    }
    let relations = RatMatrix::from_rows_vec(&rows).ok()?.transpose();
    if relations.cols() == 0 {
        return None;
    }
    // the recognised relations must actually annihilate g
    let check = g * numeric::rat_matrix_to_real(&relations);
    let scale = g.norm().max(1.0);
    if check.norm() > 1e-7 * scale {
        return None;
    }
    Some(lattice_of_subspace(&relations))
}

/// `Λ \ C^n / F⁰` for `Λ ⊂ Z^n`.
pub fn jacobian_fiber(
    lattice: &LatticeSubgroup,
    f0: &HodgeFiltrationStep,
    n: usize,
    tol: f64,
) -> Result<SemiTorusFiber, FiberError> {
    if lattice.ambient_rank() != n {
        return Err(FiberError::DimensionMismatch {
            expected: n,
            found: lattice.ambient_rank(),
        });
    }
    if f0.ambient_dim() != n {
        return Err(FiberError::DimensionMismatch {
            expected: n,
            found: f0.ambient_dim(),
        });
    }
    let chart = FiberChart::new(f0, tol)?;
    let vectors = numeric::rat_matrix_to_complex(&lattice.basis().to_rational());
    SemiTorusFiber::over_chart(chart, &vectors, tol)
}
