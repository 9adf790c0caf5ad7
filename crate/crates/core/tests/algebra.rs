mod common;

use common::{algebra_params, domain_params, fock_vector, rel, rel_vec};
use proptest::prelude::*;
use qboson_core::algebra::{
    annihilate, apply_h0, apply_h_composed, apply_h_direct, apply_h_transformed, count_op, create,
    q_int_op,
};
use qboson_core::spectral::inner_product_n;
use qboson_core::{FockVector, ModelParams};

const TOL: f64 = 1e-13;

fn graded(max_n: usize, max_part: u32) -> impl Strategy<Value = FockVector> {
    (0..=max_n).prop_flat_map(move |n| fock_vector(n, max_part))
}

fn norm2(f: &FockVector, p: &ModelParams) -> f64 {
    inner_product_n(f, f, p).unwrap().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hamiltonian_forms_agree(f in graded(3, 8), p in algebra_params()) {
        prop_assert!(rel_vec(&apply_h_direct(&f, &p), &apply_h_composed(&f, &p)) <= TOL);
    }

    #[test]
    fn count_operator_commutation(f in graded(3, 6), p in algebra_params(), l in 0..8u32) {
        let a = annihilate(l, &count_op(l, 0, &f, &p));
        let b = count_op(l, 1, &annihilate(l, &f), &p);
        prop_assert!(rel_vec(&a, &b) <= TOL);
        let a = create(l, &count_op(l, 0, &f, &p), &p);
        let b = count_op(l, -1, &create(l, &f, &p), &p);
        prop_assert!(rel_vec(&a, &b) <= TOL);
    }

    #[test]
    fn annihilate_create_product(f in graded(3, 6), p in algebra_params(), l in 0..8u32) {
        let lhs = annihilate(l, &create(l, &f, &p));
        let mut rhs = q_int_op(l, 1, &f, &p);
        if l == 0 {
            rhs = &rhs - &(p.c * &count_op(0, 0, &rhs, &p));
        }
        prop_assert!(rel_vec(&lhs, &rhs) <= TOL);
    }

    #[test]
    fn q_commutator(f in graded(3, 6), p in algebra_params(), l in 0..8u32) {
        let lhs = &annihilate(l, &create(l, &f, &p)) - &(p.q * &create(l, &annihilate(l, &f), &p));
        let rhs = if l == 0 { &f - &(p.c * &count_op(0, 0, &count_op(0, 0, &f, &p), &p)) } else { f.clone() };
        prop_assert!(rel_vec(&lhs, &rhs) <= TOL);
    }

    #[test]
    fn ultralocality(f in graded(3, 6), p in algebra_params(), l in 0..8u32, k in 0..8u32) {
        prop_assume!(l != k);
        let pairs = [
            (annihilate(l, &annihilate(k, &f)), annihilate(k, &annihilate(l, &f))),
            (create(l, &create(k, &f, &p), &p), create(k, &create(l, &f, &p), &p)),
            (annihilate(l, &create(k, &f, &p)), create(k, &annihilate(l, &f), &p)),
            (count_op(l, 0, &annihilate(k, &f), &p), annihilate(k, &count_op(l, 0, &f, &p))),
            (count_op(l, 0, &create(k, &f, &p), &p), create(k, &count_op(l, 0, &f, &p), &p)),
            (count_op(l, 0, &count_op(k, 0, &f, &p), &p), count_op(k, 0, &count_op(l, 0, &f, &p), &p)),
        ];
        for (a, b) in &pairs {
            prop_assert!(rel_vec(a, b) <= TOL);
        }
    }

    #[test]
    fn grading(f in (1..=3usize).prop_flat_map(|n| fock_vector(n, 6)), p in domain_params(), l in 0..8u32) {
        let n = f.grade();
        prop_assert_eq!(annihilate(l, &f).grade(), n - 1);
        prop_assert_eq!(create(l, &f, &p).grade(), n + 1);
        prop_assert_eq!(apply_h_direct(&f, &p).grade(), n);
        prop_assert_eq!(apply_h_composed(&f, &p).grade(), n);
        prop_assert_eq!(apply_h_transformed(&f, &p).unwrap().grade(), n);
        prop_assert_eq!(apply_h0(&f).grade(), n);
        let counted = count_op(l, 0, &f, &p);
        let a: Vec<_> = counted.support().collect();
        let b: Vec<_> = f.support().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn adjointness(f in (0..=2usize).prop_flat_map(|n| fock_vector(n, 5)), g_seed in any::<u64>(),
                   p in domain_params(), l in 0..7u32) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(g_seed);
        let n = f.grade() as usize + 1;
        let g = FockVector::from_pairs(n, (0..4).map(|_| {
            let mut parts: Vec<u32> = (0..n).map(|_| rng.random_range(0..=5)).collect();
            parts.sort_unstable_by(|a, b| b.cmp(a));
            (qboson_core::Partition::new(parts), qboson_core::Complex64::new(rng.random(), rng.random()))
        })).unwrap();
        let a = inner_product_n(&create(l, &f, &p), &g, &p).unwrap();
        let b = inner_product_n(&f, &annihilate(l, &g), &p).unwrap();
        prop_assert!(rel(a, b) <= TOL);
        let a = inner_product_n(&count_op(l, 0, &f, &p), &f, &p).unwrap();
        let b = inner_product_n(&f, &count_op(l, 0, &f, &p), &p).unwrap();
        prop_assert!(rel(a, b) <= TOL);
    }

    #[test]
    fn bound_constant_is_sharp_for_positive_q(p in domain_params()) {
        prop_assume!(p.q > 0.0);
        // [m]_q increases to 1/(1 − q)
        let f = FockVector::ket(qboson_core::Partition::new(vec![3; 40]));
        let ratio = norm2(&annihilate(3, &f), &p) / norm2(&f, &p);
        prop_assert!(ratio <= (1.0 + 1e-12) / (1.0 - p.q));
        prop_assert!(ratio >= 0.99 / (1.0 - p.q) || p.q > 0.88);
    }

    #[test]
    fn bounded_representation(f in (1..=3usize).prop_flat_map(|n| fock_vector(n, 5)), p in domain_params(), l in 0..7u32) {
        // 1/(1 − q) bounds [m]_q only for q > 0; for q < 0 the sharp constant is 1 ≤ 1/(1 − |q|)
        let bound = (1.0 + if l == 0 { p.c.abs() } else { 0.0 }) / (1.0 - p.q.abs()) * norm2(&f, &p);
        let slack = 1.0 + 1e-12;
        prop_assert!(norm2(&annihilate(l, &f), &p) <= bound * slack);
        prop_assert!(norm2(&create(l, &f, &p), &p) <= bound * slack);
        prop_assert!(norm2(&count_op(l, 0, &f, &p), &p) <= norm2(&f, &p) * slack);
    }
}
