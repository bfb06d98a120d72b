//! Integral monodromy operators: unipotency, logarithms, invariants,
//! component groups and the Koszul link cohomology of two commuting
//! monodromies on the bidisk.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_linalg::rational::{self, to_rational_vec};
use crate::exact_linalg::{
    cokernel_structure, hermite_basis, hermite_with_transform, kernel_lattice, quotient_structure,
    saturate, smith_normal_form, FiniteAbelianGroup, IntMatrix, LatticeSubgroup, LinalgError,
    RatMatrix, SmithDecomposition,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("monodromy is not invertible over the integers (det = {0})")]
    NotInvertible(BigInt),
    #[error("monodromy is not unipotent")]
    NotUnipotent,
    #[error("no power T^m with m <= {bound} is unipotent")]
    NotQuasiUnipotent { bound: u64 },
    #[error("rank {0} exceeds the quasi-unipotency table (max 8)")]
    UnsupportedRank(usize),
    #[error("component-group formulas disagree: {0}")]
    FormulaMismatch(String),
    #[error("monodromies do not commute")]
    NonCommuting,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("pair is not a cocycle")]
    NotACocycle,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn require_square(t: &IntMatrix) -> Result<(), MonodromyError> {
    if t.is_square() {
        Ok(())
    } else {
        Err(MonodromyError::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        })
    }
}

/// True iff `(T - id)^n = 0`.
pub fn is_unipotent(t: &IntMatrix) -> Result<bool, MonodromyError> {
    require_square(t)?;
    let n = t.rows() as u32;
    Ok(t.minus_identity().pow(n).is_zero())
}

/// `lcm{k : φ(k) <= n}` for `n = 0..=8`: every finite-order eigenvalue
/// pattern of an integral `n x n` matrix has order dividing this.
pub const QUASI_UNIPOTENT_BOUND: [u64; 9] = [1, 2, 12, 12, 120, 120, 2520, 2520, 5040];

/// Smallest `m >= 1` with `T^m` unipotent, together with `T^m`.
pub fn quasi_unipotent_reduce(t: &IntMatrix) -> Result<(u64, IntMatrix), MonodromyError> {
    require_square(t)?;
    let n = t.rows();
    let det = t.determinant()?;
    if !det.abs().is_one() {
        return Err(MonodromyError::NotInvertible(det));
    }
    let bound = *QUASI_UNIPOTENT_BOUND
        .get(n)
        .ok_or(MonodromyError::UnsupportedRank(n))?;
    // the minimal m divides the bound, so divisors in increasing order suffice
    let mut power = IntMatrix::identity(n);
    let mut last = 0u64;
    for m in (1..=bound).filter(|m| bound % m == 0) {
        for _ in last..m {
            power = &power * t;
        }
        last = m;
        if power.minus_identity().pow(n as u32).is_zero() {
            return Ok((m, power));
        }
    }
    Err(MonodromyError::NotQuasiUnipotent { bound })
}

/// `log T = Σ_{k>=1} (-1)^{k+1} (T - id)^k / k`, a finite sum for unipotent `T`.
pub fn log_unipotent(t: &IntMatrix) -> Result<RatMatrix, MonodromyError> {
    if !is_unipotent(t)? {
        return Err(MonodromyError::NotUnipotent);
    }
    let n = t.rows();
    let a = t.minus_identity().to_rational();
    let mut out = RatMatrix::zeros(n, n);
    let mut power = RatMatrix::identity(n);
    for k in 1..=n.max(1) {
        power = &power * &a;
        if power.is_zero() {
            break;
        }
        let c = BigRational::new(
            if k % 2 == 1 { BigInt::one() } else { -BigInt::one() },
            BigInt::from(k),
        );
        out = &out + &power.map(|x| x * &c);
    }
    Ok(out)
}

/// `exp N = Σ N^k / k!` for nilpotent `N` (exact).
pub fn exp_nilpotent(n: &RatMatrix) -> RatMatrix {
    let dim = n.rows();
    let mut out = RatMatrix::identity(dim);
    let mut term = RatMatrix::identity(dim);
    for k in 1..=dim {
        let c = BigRational::new(BigInt::one(), BigInt::from(k));
        term = (&term * n).map(|x| x * &c);
        if term.is_zero() {
            break;
        }
        out = &out + &term;
    }
    out
}

pub fn is_nilpotent(n: &RatMatrix) -> bool {
    n.is_square() && n.pow(n.rows() as u32).is_zero()
}

/// A validated monodromy `T` with its quasi-unipotent order `m` and
/// `N = log T^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyOperator {
    t: IntMatrix,
    order: u64,
    t_unipotent: IntMatrix,
    log: RatMatrix,
}

impl MonodromyOperator {
    pub fn new(t: IntMatrix) -> Result<Self, MonodromyError> {
        let (order, t_unipotent) = quasi_unipotent_reduce(&t)?;
        let log = log_unipotent(&t_unipotent)?;
        Ok(Self {
            t,
            order,
            t_unipotent,
            log,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.t
    }

    pub fn rank(&self) -> usize {
        self.t.rows()
    }

    /// Smallest `m` with `T^m` unipotent.
    pub fn finite_order_part(&self) -> u64 {
        self.order
    }

    pub fn is_unipotent(&self) -> bool {
        self.order == 1
    }

    /// `T^m`.
    pub fn unipotent_power(&self) -> &IntMatrix {
        &self.t_unipotent
    }

    /// `N = log T^m`.
    pub fn log(&self) -> &RatMatrix {
        &self.log
    }

    pub fn require_unipotent(&self) -> Result<(), MonodromyError> {
        if self.is_unipotent() {
            Ok(())
        } else {
            Err(MonodromyError::NotUnipotent)
        }
    }
}

/// Saturated kernel of `T - id`.
pub fn invariant_lattice(t: &IntMatrix) -> Result<LatticeSubgroup, MonodromyError> {
    require_square(t)?;
    Ok(kernel_lattice(&t.minus_identity()))
}

/// Presentation of `Z^rows / A Z^cols` in Smith coordinates.
///
/// Element coordinates follow [`FiniteAbelianGroup`]: torsion coordinates
/// (reduced) first, then free coordinates.
#[derive(Clone, Debug)]
pub struct CokernelPresentation {
    a: IntMatrix,
    smith: SmithDecomposition,
    group: FiniteAbelianGroup,
    /// Smith positions carrying torsion coordinates.
    torsion_pos: Vec<usize>,
    /// Smith positions carrying free coordinates.
    free_pos: Vec<usize>,
}

impl CokernelPresentation {
    pub fn new(a: &IntMatrix) -> Self {
        let smith = smith_normal_form(a);
        let diag = smith.diagonal();
        let mut torsion_pos = Vec::new();
        let mut free_pos = Vec::new();
        for i in 0..a.rows() {
            match diag.get(i) {
                Some(d) if d.is_zero() => free_pos.push(i),
                None => free_pos.push(i),
                Some(d) if d.is_one() => {}
                Some(_) => torsion_pos.push(i),
            }
        }
        let group = FiniteAbelianGroup::new(
            free_pos.len(),
            torsion_pos.iter().map(|&i| diag[i].clone()).collect(),
        )
        .expect("Smith diagonal is an invariant-factor chain");
        Self {
            a: a.clone(),
            smith,
            group,
            torsion_pos,
            free_pos,
        }
    }

    /// Presentation of `Coker(T - id)`.
    pub fn of_monodromy(t: &IntMatrix) -> Result<Self, MonodromyError> {
        require_square(t)?;
        Ok(Self::new(&t.minus_identity()))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.smith
    }

    fn d(&self, i: usize) -> &BigInt {
        &self.smith.d[(i, i)]
    }

    /// Class of `v` in the cokernel.
    pub fn class_of(&self, v: &[BigInt]) -> Result<Vec<BigInt>, MonodromyError> {
        if v.len() != self.a.rows() {
            return Err(MonodromyError::DimensionMismatch {
                expected: self.a.rows(),
                found: v.len(),
            });
        }
        let y = self.smith.u.mul_vec(v);
        let mut coords: Vec<BigInt> = self.torsion_pos.iter().map(|&i| y[i].clone()).collect();
        coords.extend(self.free_pos.iter().map(|&i| y[i].clone()));
        Ok(self.group.normalize(&coords))
    }

    /// Whether the class of `v` vanishes after tensoring with Q.
    pub fn is_torsion_class(&self, v: &[BigInt]) -> Result<bool, MonodromyError> {
        let c = self.class_of(v)?;
        Ok(c[self.torsion_pos.len()..].iter().all(Zero::is_zero))
    }

    /// A vector in `Z^rows` whose class has the given coordinates.
    pub fn representative(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.group.coordinate_len());
        let mut y = vec![BigInt::zero(); self.a.rows()];
        for (k, &i) in self.torsion_pos.iter().chain(&self.free_pos).enumerate() {
            y[i] = coords[k].clone();
        }
        self.smith.u_inv.mul_vec(&y)
    }

    /// Rational `x` with `A x = v`, chosen in Smith coordinates (zero on the
    /// kernel directions), or `None` if `v` is not in the rational image.
    pub fn rational_preimage(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        let y = self.smith.u.mul_vec(v);
        let k = self.a.rows().min(self.a.cols());
        let mut w = vec![BigRational::zero(); self.a.cols()];
        for (i, yi) in y.iter().enumerate() {
            let d = if i < k { self.d(i).clone() } else { BigInt::zero() };
            if d.is_zero() {
                if !yi.is_zero() {
                    return None;
                }
            } else {
                w[i] = BigRational::new(yi.clone(), d);
            }
        }
        Some(self.smith.v.to_rational().mul_vec(&w))
    }

    /// Integral `x` with `A x = v` (Smith-canonical), if one exists.
    pub fn integral_preimage(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let x = self.rational_preimage(v)?;
        rational::to_integer_vec(&x)
    }
}

/// Component group by one of the three routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGroup {
    /// The common value (torsion only).
    pub group: FiniteAbelianGroup,
    /// `false` when the input was not unipotent; the computation still runs.
    pub unipotent: bool,
    /// Results of the torsion-of-cokernel, saturation-quotient and Q/Z-kernel routes.
    pub formulas: [FiniteAbelianGroup; 3],
    /// Whether the Q/Z route was a full enumeration (otherwise lattice algebra).
    pub enumerated: bool,
}

/// Largest `e^n` for which the Q/Z route enumerates exhaustively.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// `G_0`: the torsion of `Coker(T_Z - id)`, computed three independent ways
/// that must agree.
pub fn component_group(t: &IntMatrix) -> Result<ComponentGroup, MonodromyError> {
    require_square(t)?;
    let unipotent = is_unipotent(t)?;
    let a = t.minus_identity();
    let first = formula_torsion_of_cokernel(&a);
    let second = formula_saturation_quotient(&a)?;
    let (third, enumerated) = formula_qz_kernel(&a)?;
    if first != second || first != third {
        return Err(MonodromyError::FormulaMismatch(format!(
            "{first} / {second} / {third}"
        )));
    }
    Ok(ComponentGroup {
        group: first.clone(),
        unipotent,
        formulas: [first, second, third],
        enumerated,
    })
}

/// `Coker(A)_tor`.
pub fn formula_torsion_of_cokernel(a: &IntMatrix) -> FiniteAbelianGroup {
    cokernel_structure(a).torsion_subgroup()
}

/// `(Im(A_Q) ∩ Z^n) / Im(A_Z)`.
pub fn formula_saturation_quotient(a: &IntMatrix) -> Result<FiniteAbelianGroup, MonodromyError> {
    let image = hermite_basis(a);
    let saturated = saturate(&image);
    Ok(quotient_structure(&saturated, image.basis())?)
}

/// `Ker(A_{Q/Z}) / (image of Ker(A_Q))`.
///
/// Classes have representatives with denominators dividing the product of the
/// nonzero invariant factors, which is the gcd of the maximal nonvanishing
/// minors; that bound is computed from minors, not from a Smith form. When
/// `bound^n` is small the kernel is enumerated element by element, otherwise
/// it is computed as the lattice quotient `{v : A v ∈ eZ^n} / (eZ^n + Ker A)`.
pub fn formula_qz_kernel(a: &IntMatrix) -> Result<(FiniteAbelianGroup, bool), MonodromyError> {
    let n = a.cols();
    let rank = rational::rank(&a.to_rational());
    if rank == 0 {
        return Ok((FiniteAbelianGroup::trivial(), true));
    }
    let e = minor_gcd(a, rank);
    if e.is_one() {
        return Ok((FiniteAbelianGroup::trivial(), true));
    }
    let kernel = kernel_lattice(a);
    if let Some(e_small) = e.to_u64() {
        let total = (e_small as f64).powi(n as i32);
        if total <= ENUMERATION_LIMIT as f64 {
            return Ok((enumerate_qz_kernel(a, &kernel, e_small), true));
        }
    }
    // lattice route
    let rows = a.rows();
    let scaled = IntMatrix::diagonal(rows, rows, &vec![e.clone(); rows]);
    let joint = kernel_lattice(&a.hstack(&scaled)?);
    let xs: Vec<Vec<BigInt>> = joint
        .basis_vectors()
        .into_iter()
        .map(|v| v[..n].to_vec())
        .collect();
    let l = hermite_basis(&IntMatrix::from_columns(n, &xs)?);
    let m_gens = IntMatrix::diagonal(n, n, &vec![e; n]).hstack(kernel.basis())?;
    Ok((quotient_structure(&l, &m_gens)?, false))
}

/// gcd of all `r x r` minors.
fn minor_gcd(a: &IntMatrix, r: usize) -> BigInt {
    let rows = combinations(a.rows(), r);
    let cols = combinations(a.cols(), r);
    let mut g = BigInt::zero();
    for rs in &rows {
        for cs in &cols {
            let mut m = IntMatrix::zeros(r, r);
            for (i, &ri) in rs.iter().enumerate() {
                for (j, &cj) in cs.iter().enumerate() {
                    m[(i, j)] = a[(ri, cj)].clone();
                }
            }
            g = g.gcd(&m.determinant().expect("square minor"));
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive enumeration of `{v ∈ (Z/e)^n : A v ≡ 0}` modulo the image of the
/// integral kernel; the group structure is recovered from the number of
/// `p^a`-torsion elements for every prime power dividing `e`.
fn enumerate_qz_kernel(a: &IntMatrix, kernel: &LatticeSubgroup, e: u64) -> FiniteAbelianGroup {
    let n = a.cols();
    let e_i = e as i64;
    let a_small: Vec<Vec<i64>> = (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| x.mod_floor(&BigInt::from(e)).to_i64().expect("reduced"))
                .collect()
        })
        .collect();
    let reduce = |v: &[BigInt]| -> Vec<i64> {
        v.iter()
            .map(|x| x.mod_floor(&BigInt::from(e)).to_i64().expect("reduced"))
            .collect()
    };

    // solutions of A v ≡ 0 (mod e)
    let mut solutions = Vec::new();
    let mut v = vec![0i64; n];
    loop {
        let ok = a_small.iter().all(|row| {
            row.iter().zip(&v).map(|(x, y)| x * y).sum::<i64>().rem_euclid(e_i) == 0
        });
        if ok {
            solutions.push(v.clone());
        }
        // odometer
        let mut i = 0;
        while i < n {
            v[i] += 1;
            if v[i] < e_i {
                break;
            }
            v[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }

    // subgroup generated by the kernel modulo e
    let gens: Vec<Vec<i64>> = kernel.basis_vectors().iter().map(|g| reduce(g)).collect();
    let mut sub: HashSet<Vec<i64>> = HashSet::from([vec![0; n]]);
    let mut frontier = vec![vec![0i64; n]];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(e_i)).collect();
            if sub.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let sub_size = sub.len() as u64;

    let torsion_count = |m: i64| -> u64 {
        let hits = solutions
            .iter()
            .filter(|s| {
                let w: Vec<i64> = s.iter().map(|x| (x * m).rem_euclid(e_i)).collect();
                sub.contains(&w)
            })
            .count() as u64;
        hits / sub_size
    };

    // count of invariant factors divisible by p^k, per prime
    let mut factors: Vec<BigInt> = Vec::new();
    let mut rest = e;
    let mut p = 2u64;
    while rest > 1 {
        if rest.is_multiple_of(p) {
            let mut max_k = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                max_k += 1;
            }
            let mut prev = 1u64;
            let mut divisible: Vec<usize> = Vec::new();
            for k in 1..=max_k {
                let c = torsion_count(p.pow(k) as i64);
                let mut ratio = c / prev;
                let mut cnt = 0usize;
                while ratio > 1 {
                    ratio /= p;
                    cnt += 1;
                }
                divisible.push(cnt);
                prev = c;
            }
            // j-th largest invariant factor has p-exponent #{k : divisible[k] > j}
            let slots = divisible.first().copied().unwrap_or(0);
            if factors.len() < slots {
                factors.resize(slots, BigInt::one());
            }
            for (j, f) in factors.iter_mut().enumerate().take(slots) {
                let exp = divisible.iter().filter(|&&c| c > j).count() as u32;
                *f *= BigInt::from(p).pow(exp);
            }
        }
        p += 1;
    }
    FiniteAbelianGroup::from_cyclic_orders(0, &factors)
}

/// A Koszul 1-cochain `(λ1, λ2)` on the bidisk link.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cocycle {
    pub lambda1: Vec<BigInt>,
    pub lambda2: Vec<BigInt>,
}

impl Cocycle {
    pub fn new(lambda1: Vec<BigInt>, lambda2: Vec<BigInt>) -> Self {
        Self { lambda1, lambda2 }
    }

    fn stacked(&self) -> Vec<BigInt> {
        self.lambda1.iter().chain(&self.lambda2).cloned().collect()
    }

    fn from_stacked(v: &[BigInt]) -> Self {
        let n = v.len() / 2;
        Self::new(v[..n].to_vec(), v[n..].to_vec())
    }
}

/// Cohomology of `Z^n --d0--> Z^n ⊕ Z^n --d1--> Z^n` with
/// `d0(μ) = ((T1 - id)μ, (T2 - id)μ)` and `d1(λ1, λ2) = (T2 - id)λ1 - (T1 - id)λ2`.
#[derive(Clone, Debug)]
pub struct LinkCohomology {
    t1: IntMatrix,
    t2: IntMatrix,
    /// Simultaneous invariants.
    pub h0: LatticeSubgroup,
    pub h1: FiniteAbelianGroup,
    /// One cocycle per coordinate of `h1`, in coordinate order.
    pub h1_basis: Vec<Cocycle>,
    cocycles: LatticeSubgroup,
    quotient: CokernelPresentation,
}

impl LinkCohomology {
    pub fn rank(&self) -> usize {
        self.t1.rows()
    }

    pub fn monodromies(&self) -> (&IntMatrix, &IntMatrix) {
        (&self.t1, &self.t2)
    }

    pub fn d0(&self) -> IntMatrix {
        d0(&self.t1, &self.t2)
    }

    pub fn d1(&self) -> IntMatrix {
        d1(&self.t1, &self.t2)
    }

    pub fn is_cocycle(&self, c: &Cocycle) -> bool {
        self.d1().mul_vec(&c.stacked()).iter().all(Zero::is_zero)
    }

    /// Coordinates of the class of `c` in `h1`.
    pub fn class_of(&self, c: &Cocycle) -> Result<Vec<BigInt>, MonodromyError> {
        let n = self.rank();
        if c.lambda1.len() != n || c.lambda2.len() != n {
            return Err(MonodromyError::DimensionMismatch {
                expected: n,
                found: c.lambda1.len().max(c.lambda2.len()),
            });
        }
        let coords = self
            .cocycles
            .coordinates(&c.stacked())
            .ok_or(MonodromyError::NotACocycle)?;
        self.quotient.class_of(&coords)
    }

    /// A cocycle representing the class with the given coordinates.
    pub fn representative(&self, class: &[BigInt]) -> Cocycle {
        let coords = self.quotient.representative(class);
        Cocycle::from_stacked(&self.cocycles.basis().mul_vec(&coords))
    }

    /// Structure of the subgroup of `h1` generated by the given classes.
    pub fn subgroup_generated(&self, classes: &[Vec<BigInt>]) -> FiniteAbelianGroup {
        let (sup, relations) = self.subgroup_lattices(classes);
        quotient_structure(&sup, &relations).expect("relations lie in the subgroup")
    }

    fn subgroup_lattices(&self, classes: &[Vec<BigInt>]) -> (LatticeSubgroup, IntMatrix) {
        let len = self.h1.coordinate_len();
        let mut relations = Vec::new();
        for (i, d) in self.h1.torsion().iter().enumerate() {
            let mut v = vec![BigInt::zero(); len];
            v[i] = d.clone();
            relations.push(v);
        }
        let relations = IntMatrix::from_columns(len, &relations).expect("lengths");
        let gens = IntMatrix::from_columns(len, classes).expect("class lengths");
        let sup = hermite_basis(&gens.hstack(&relations).expect("rows"));
        (sup, relations)
    }
}

fn d0(t1: &IntMatrix, t2: &IntMatrix) -> IntMatrix {
    t1.minus_identity()
        .vstack(&t2.minus_identity())
        .expect("same size")
}

fn d1(t1: &IntMatrix, t2: &IntMatrix) -> IntMatrix {
    t2.minus_identity()
        .hstack(&-&t1.minus_identity())
        .expect("same size")
}

pub fn link_cohomology_bidisk(
    t1: &IntMatrix,
    t2: &IntMatrix,
) -> Result<LinkCohomology, MonodromyError> {
    require_square(t1)?;
    require_square(t2)?;
    if t1.rows() != t2.rows() {
        return Err(MonodromyError::DimensionMismatch {
            expected: t1.rows(),
            found: t2.rows(),
        });
    }
    if t1 * t2 != t2 * t1 {
        return Err(MonodromyError::NonCommuting);
    }
    let h0 = kernel_lattice(&d0(t1, t2));
    let cocycles = kernel_lattice(&d1(t1, t2));
    let coboundaries = cocycles.express(&d0(t1, t2))?;
    let quotient = CokernelPresentation::new(&coboundaries);
    let h1 = quotient.group().clone();
    let mut lc = LinkCohomology {
        t1: t1.clone(),
        t2: t2.clone(),
        h0,
        h1: h1.clone(),
        h1_basis: Vec::new(),
        cocycles,
        quotient,
    };
    lc.h1_basis = (0..h1.coordinate_len())
        .map(|i| {
            let mut e = vec![BigInt::zero(); h1.coordinate_len()];
            e[i] = BigInt::one();
            lc.representative(&e)
        })
        .collect();
    Ok(lc)
}

/// Classes of `h1` represented by cocycles with `λ_i ∈ Im(T_i,Q - id) ∩ Z^n`.
#[derive(Clone, Debug)]
pub struct AdmissibleClasses {
    pub group: FiniteAbelianGroup,
    /// Cocycles whose classes are the invariant-factor generators of `group`
    /// (torsion generators first, then free).
    pub generators: Vec<Cocycle>,
    /// Their classes in `h1` coordinates.
    pub generator_classes: Vec<Vec<BigInt>>,
}

pub fn admissible_class_subgroup(lc: &LinkCohomology) -> AdmissibleClasses {
    let n = lc.rank();
    let (t1, t2) = lc.monodromies();
    let ann = |t: &IntMatrix| {
        let s = saturate(&hermite_basis(&t.minus_identity()));
        kernel_lattice(&s.basis().transpose()).basis().transpose()
    };
    let conditions = ann(t1).direct_sum(&ann(t2));
    let system = lc.d1().vstack(&conditions).expect("2n columns");
    let admissible = kernel_lattice(&system);
    let adm_cocycles: Vec<Cocycle> = admissible
        .basis_vectors()
        .iter()
        .map(|v| Cocycle::from_stacked(v))
        .collect();
    let classes: Vec<Vec<BigInt>> = adm_cocycles
        .iter()
        .map(|c| lc.class_of(c).expect("admissible cocycles are cocycles"))
        .collect();

    let len = lc.h1.coordinate_len();
    let (sup, relations) = lc.subgroup_lattices(&classes);
    let rel_coords = sup.express(&relations).expect("relations lie in sup");
    let pres = CokernelPresentation::new(&rel_coords);
    let group = pres.group().clone();

    // lift each invariant-factor generator back to an admissible cocycle
    let class_matrix = IntMatrix::from_columns(len, &classes).expect("lengths");
    let joint = class_matrix.hstack(&relations).expect("rows");
    let (_, transform, rank) = hermite_with_transform(&joint);
    let mut generators = Vec::new();
    let mut generator_classes = Vec::new();
    for i in 0..group.coordinate_len() {
        let mut e = vec![BigInt::zero(); group.coordinate_len()];
        e[i] = BigInt::one();
        let sup_coords = pres.representative(&e);
        let element = sup.basis().mul_vec(&sup_coords);
        // joint * transform[:, :rank] is the Hermite basis of sup
        let weights = transform.select_columns(0..rank).mul_vec(&sup_coords);
        let combo = &weights[..classes.len()];
        let stacked = admissible.basis().mul_vec(combo);
        let cocycle = Cocycle::from_stacked(&stacked);
        debug_assert_eq!(
            lc.class_of(&cocycle).ok(),
            Some(lc.h1.normalize(&element))
        );
        generator_classes.push(lc.h1.normalize(&element));
        generators.push(cocycle);
    }
    debug_assert_eq!(2 * n, admissible.ambient_rank());
    AdmissibleClasses {
        group,
        generators,
        generator_classes,
    }
}

/// `(λ1, λ2) ↦ (T2 - id)λ1 - (T1 - id)λ2` applied to rationals, for tests.
pub fn koszul_defect(t1: &IntMatrix, t2: &IntMatrix, c: &Cocycle) -> Vec<BigRational> {
    to_rational_vec(&d1(t1, t2).mul_vec(&c.stacked()))
}
