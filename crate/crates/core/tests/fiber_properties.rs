mod common;

use common::{c, rng};
use nalgebra::DMatrix;
use neron::exact_linalg::{rational, rat, RatMatrix};
use neron::fibers::{FiberPoint, SemiTorusFiber};
use neron::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `m ≤ 2d` generators close to a real basis of `C^d`, so the fiber is discrete.
fn near_standard_fiber(r: &mut ChaCha8Rng, d: usize, m: usize) -> SemiTorusFiber {
    let mut images = DMatrix::from_element(d, m, c(0., 0.));
    for j in 0..m {
        let (row, imag) = (j % d, j >= d);
        images[(row, j)] = if imag { c(0., 1.) } else { c(1., 0.) };
        for i in 0..d {
            images[(i, j)] += c(r.random_range(-0.2..0.2), r.random_range(-0.2..0.2));
        }
    }
    SemiTorusFiber::from_generators(images, 1e-9)
}

fn point(r: &mut ChaCha8Rng, d: usize) -> FiberPoint {
    FiberPoint::new((0..d).map(|_| c(r.random_range(-5.0..5.0), r.random_range(-5.0..5.0))).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn distance_is_a_metric(seed in any::<u64>(), d in 1usize..=3, extra in 0usize..=3) {
        let mut r = rng(seed);
        let m = (d + extra).min(2 * d);
        let f = near_standard_fiber(&mut r, d, m);
        prop_assert!(f.is_discrete());
        let (a, b, e) = (point(&mut r, d), point(&mut r, d), point(&mut r, d));
        let ab = f.fiber_distance(&a, &b).unwrap();
        let ba = f.fiber_distance(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-9);
        let ae = f.fiber_distance(&a, &e).unwrap();
        let eb = f.fiber_distance(&e, &b).unwrap();
        prop_assert!(ab <= ae + eb + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_idempotent(seed in any::<u64>(), d in 1usize..=3, extra in 0usize..=3) {
        let mut r = rng(seed);
        let f = near_standard_fiber(&mut r, d, (d + extra).min(2 * d));
        let v = point(&mut r, d);
        let once = f.reduce_point(&v).unwrap();
        let twice = f.reduce_point(&once).unwrap();
        for (x, y) in once.coords.iter().zip(&twice.coords) {
            prop_assert!((x - y).norm() < 1e-12);
        }
        prop_assert!(f.fiber_distance(&v, &once).unwrap() < 1e-12);
    }

    #[test]
    fn rational_generators_are_classified_exactly(
        seed in any::<u64>(),
        d in 1usize..=3,
        m in 1usize..=6,
    ) {
        let mut r = rng(seed);
        let re: Vec<i64> = (0..d * m).map(|_| r.random_range(-3..=3)).collect();
        let im: Vec<i64> = (0..d * m).map(|_| r.random_range(-3..=3)).collect();
        let images = DMatrix::from_fn(d, m, |i, j| Complex64::new(re[i * m + j] as f64, im[i * m + j] as f64));
        let f = SemiTorusFiber::from_generators(images, 1e-9);
        let realified = RatMatrix::from_rows_vec(
            &(0..2 * d)
                .map(|i| {
                    (0..m)
                        .map(|j| if i < d { rat(re[i * m + j], 1) } else { rat(im[(i - d) * m + j], 1) })
                        .collect()
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let exact = rational::rank(&realified);
        prop_assert!(f.is_discrete());
        let (rho, vector) = f.real_type().unwrap();
        prop_assert_eq!(rho, exact);
        prop_assert_eq!(rho + vector, 2 * d);
    }
}
