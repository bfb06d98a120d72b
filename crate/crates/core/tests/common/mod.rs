#![allow(dead_code)]

use neron::exact_linalg::{IntMatrix, RatMatrix};
use neron::hodge_limits::{HodgeFiltrationStep, NilpotentOrbit, Tolerance};
use neron::monodromy::MonodromyOperator;
use neron::{BigInt, Complex64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn from_rows(rows: Vec<Vec<i64>>) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    IntMatrix::from_rows_vec(&rows).unwrap()
}

/// `(P, P⁻¹)` from a few elementary operations.
pub fn unimodular_pair(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut q = IntMatrix::identity(n);
    if n < 2 {
        return (p, q);
    }
    for _ in 0..steps {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let a = rng.random_range(1..=2i64) * if rng.random_bool(0.5) { 1 } else { -1 };
        let mut e = vec![vec![0i64; n]; n];
        let mut f = vec![vec![0i64; n]; n];
        for k in 0..n {
            e[k][k] = 1;
            f[k][k] = 1;
        }
        e[i][j] = a;
        f[i][j] = -a;
        p = &p * &from_rows(e);
        q = &from_rows(f) * &q;
    }
    (p, q)
}

/// `P S P⁻¹` with `S` strictly upper triangular.
pub fn random_nilpotent(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut s = vec![vec![0i64; n]; n];
    for (i, row) in s.iter_mut().enumerate() {
        for x in row.iter_mut().skip(i + 1) {
            if rng.random_bool(0.6) {
                *x = rng.random_range(-3..=3);
            }
        }
    }
    let (p, q) = unimodular_pair(rng, n, 3);
    &(&p * &from_rows(s)) * &q
}

/// `P U P⁻¹` with `U` upper unitriangular.
pub fn random_unipotent(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let nil = random_nilpotent(rng, n);
    &IntMatrix::identity(n) + &nil
}

/// `I + P S P⁻¹` with `S = [[0, B], [0, 0]]`, so `N² = 0`.
pub fn random_square_zero_unipotent(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let k = rng.random_range(1..n.max(2));
    let mut s = vec![vec![0i64; n]; n];
    for row in s.iter_mut().take(k) {
        for x in row.iter_mut().skip(k) {
            *x = rng.random_range(-4..=4);
        }
    }
    let (p, q) = unimodular_pair(rng, n, 3);
    &IntMatrix::identity(n) + &(&(&p * &from_rows(s)) * &q)
}

pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    from_rows(
        (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(-bound..=bound)).collect())
            .collect(),
    )
}

pub fn op(rows: &[&[i64]]) -> MonodromyOperator {
    MonodromyOperator::new(IntMatrix::from_i64(rows)).unwrap()
}

pub fn line(v: Vec<Complex64>) -> HodgeFiltrationStep {
    HodgeFiltrationStep::from_columns(v.len(), &[v], 1e-9).unwrap()
}

/// `T = [[1, r], [0, 1]]` with `F⁰ = C (i, 1)`.
pub fn elliptic(r: i64) -> (MonodromyOperator, NilpotentOrbit) {
    let t = op(&[&[1, r], &[0, 1]]);
    let o = NilpotentOrbit::from_monodromy(&t, line(vec![c(0., 1.), c(1., 0.)]), Tolerance::default()).unwrap();
    (t, o)
}

/// A direct sum of elliptic blocks `[[1, r_i], [0, 1]]`.
pub fn elliptic_sum(rs: &[i64]) -> (MonodromyOperator, NilpotentOrbit) {
    let mut blocks = rs.iter().map(|&r| elliptic(r));
    let (mut t, mut o) = blocks.next().expect("at least one block");
    for (tb, ob) in blocks {
        t = MonodromyOperator::new(t.matrix().direct_sum(tb.matrix())).unwrap();
        o = o.direct_sum(&ob).unwrap();
    }
    (t, o)
}

pub fn is_nilpotent_int(n: &IntMatrix) -> bool {
    n.pow(n.rows() as u32).is_zero()
}

pub fn rational(m: &IntMatrix) -> RatMatrix {
    m.to_rational()
}
