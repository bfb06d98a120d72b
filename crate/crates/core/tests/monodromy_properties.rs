mod common;

use common::{random_unipotent, rng, unimodular_pair};
use neron::exact_linalg::{cokernel_structure, kernel_lattice, IntMatrix};
use neron::monodromy::{
    component_group, exp_nilpotent, formula_qz_kernel, formula_saturation_quotient,
    formula_torsion_of_cokernel, link_cohomology_bidisk, log_unipotent,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exp_log_round_trip(seed in any::<u64>(), n in 1usize..=6) {
        let t = random_unipotent(&mut rng(seed), n);
        let n_log = log_unipotent(&t).unwrap();
        prop_assert_eq!(exp_nilpotent(&n_log), t.to_rational());
    }

    #[test]
    fn three_formulas_agree(seed in any::<u64>(), n in 1usize..=6) {
        let t = random_unipotent(&mut rng(seed), n);
        let a = t.minus_identity();
        let i = formula_torsion_of_cokernel(&a);
        let ii = formula_saturation_quotient(&a).unwrap();
        let (iii, _) = formula_qz_kernel(&a).unwrap();
        prop_assert_eq!(&i, &ii);
        prop_assert_eq!(&i, &iii);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conjugation_invariance(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let t = random_unipotent(&mut r, n);
        let (p, q) = unimodular_pair(&mut r, n, 4);
        let conj = &(&p * &t) * &q;
        prop_assert_eq!(
            component_group(&conj).unwrap().group,
            component_group(&t).unwrap().group
        );
    }

    #[test]
    fn link_cohomology_with_trivial_second_loop(seed in any::<u64>(), n in 1usize..=4) {
        let t = random_unipotent(&mut rng(seed), n);
        let lc = link_cohomology_bidisk(&t, &IntMatrix::identity(n)).unwrap();
        let a = t.minus_identity();
        let coker = cokernel_structure(&a);
        let ker = kernel_lattice(&a).rank();
        prop_assert_eq!(lc.h1.free_rank(), coker.free_rank() + ker);
        prop_assert_eq!(lc.h1.torsion(), coker.torsion());
    }

    #[test]
    fn differentials_compose_to_zero(seed in any::<u64>(), n in 1usize..=4, k in 0u32..=3) {
        let t1 = random_unipotent(&mut rng(seed), n);
        let t2 = t1.pow(k);
        let lc = link_cohomology_bidisk(&t1, &t2).unwrap();
        prop_assert!((&lc.d1() * &lc.d0()).is_zero());
    }
}
