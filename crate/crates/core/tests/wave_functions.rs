mod common;

use std::f64::consts::PI;

use common::{alcove_point, domain_params, partition, rel};
use proptest::prelude::*;
use qboson_core::algebra::apply_h_direct;
use qboson_core::hall_littlewood::{
    eigenvalue, p_normalized_at_x, phi, pieri_residual, pieri_v_minus, pieri_v_minus_closed,
    pieri_v_plus, pieri_v_plus_closed, signed_permutations, tau_vector, weight_delta, PieriForm,
};
use qboson_core::partition::enumerate;
use qboson_core::{Complex64, EvalOptions, FockVector, HlEvaluator, ModelParams, SpectralPoint};

fn point_and_n(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_n).prop_flat_map(alcove_point)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_hyperoctahedrally_invariant(xi in point_and_n(3), p in domain_params(), seed in 0..100u32) {
        let n = xi.len();
        let point = SpectralPoint::new(xi);
        let lambda = qboson_core::Partition::new((0..n as u32).map(|k| (seed + 3 * k) % 7).collect());
        let (base, diag) = phi(&point, &lambda, &p).unwrap();
        for w in signed_permutations(n) {
            let (v, _) = phi(&point.signed_permuted(w), &lambda, &p).unwrap();
            prop_assert!((v - base).norm() <= 1e-12 * diag.condition * base.norm().max(1.0));
        }
    }

    #[test]
    fn weight_is_hyperoctahedrally_invariant(xi in point_and_n(4), p in domain_params()) {
        let point = SpectralPoint::new(xi);
        let base = weight_delta(&point, &p).unwrap();
        prop_assert!(base > 0.0);
        for w in signed_permutations(point.n()) {
            let moved = weight_delta(&point.signed_permuted(w), &p).unwrap();
            prop_assert!((moved - base).abs() <= 1e-12 * base);
        }
    }

    #[test]
    fn phi_is_periodic(xi in point_and_n(3), p in domain_params(), j in 0..3usize, lambda_seed in 0..50u32) {
        let n = xi.len();
        let j = j % n;
        let lambda = qboson_core::Partition::new((0..n as u32).map(|k| (lambda_seed + k) % 6).collect());
        let (a, diag) = phi(&SpectralPoint::new(xi.clone()), &lambda, &p).unwrap();
        let mut shifted = xi;
        shifted[j] += 2.0 * PI;
        let (b, _) = phi(&SpectralPoint::new(shifted), &lambda, &p).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * diag.condition * a.norm().max(1.0));
    }

    #[test]
    fn condition_is_at_least_one(xi in point_and_n(3), p in domain_params(), lambda_seed in 0..50u32) {
        let n = xi.len();
        let lambda = qboson_core::Partition::new((0..n as u32).map(|k| (lambda_seed * (k + 1)) % 9).collect());
        let (v, diag) = phi(&SpectralPoint::new(xi), &lambda, &p).unwrap();
        prop_assert_eq!(diag.term_count, (1..=n).product::<usize>() << n);
        if v.norm() > 0.0 {
            prop_assert!(diag.condition >= 1.0);
        }
    }

    #[test]
    fn eigenvalue_equation(xi in point_and_n(3), p in domain_params()) {
        let n = xi.len();
        let point = SpectralPoint::new(xi);
        let eval = HlEvaluator::new(&point, &p, EvalOptions::default()).unwrap();
        let e = eigenvalue(point.xi());
        let window = enumerate(n, 7);
        let f = FockVector::from_pairs(n, window.iter().map(|l| (l.clone(), eval.value(l).unwrap()))).unwrap();
        let hf = apply_h_direct(&f, &p);
        for lambda in enumerate(n, 6) {
            let v = f.get(&lambda);
            // scale: the largest neighbouring amplitude
            let scale = window.iter().filter(|m| m.max_part() <= 7).map(|m| f.get(m).norm()).fold(v.norm(), f64::max);
            prop_assert!((hf.get(&lambda) - e * v).norm() <= 1e-9 * scale.max(1e-300));
        }
    }

    #[test]
    fn v_forms_agree(lambda in (1..=4usize).prop_flat_map(|n| partition(n, 8)), p in domain_params(), j in 0..4usize) {
        let j = j % lambda.len();
        if lambda.can_raise(j) {
            prop_assert!(rel(pieri_v_plus(&lambda, j, &p).unwrap(), pieri_v_plus_closed(&lambda, j, &p).unwrap()) <= 1e-12);
        } else {
            prop_assert!(pieri_v_plus(&lambda, j, &p).is_err());
        }
        if lambda.can_lower(j) {
            prop_assert!(rel(pieri_v_minus(&lambda, j, &p).unwrap(), pieri_v_minus_closed(&lambda, j, &p).unwrap()) <= 1e-12);
        } else {
            prop_assert!(pieri_v_minus(&lambda, j, &p).is_err());
        }
    }

    #[test]
    fn pieri_residuals(xi in point_and_n(3), p in domain_params(), seed in 0..40u32) {
        let n = xi.len();
        let point = SpectralPoint::new(xi);
        let lambda = qboson_core::Partition::new((0..n as u32).map(|k| (seed + 2 * k) % 7).collect());
        for form in [PieriForm::Full, PieriForm::Compact] {
            let r = pieri_residual(&point, &lambda, &p, form).unwrap();
            prop_assert!(r.relative <= 1e-9, "{form:?}: {r:?}");
        }
    }

    #[test]
    fn principal_specialization(p in domain_params(), lambda in (1..=3usize).prop_flat_map(|n| partition(n, 6))) {
        prop_assume!(p.r().norm() > 1e-3);
        let tau = tau_vector(&p, lambda.len());
        let v = p_normalized_at_x(&tau, &lambda, &p, EvalOptions::default()).unwrap();
        prop_assert!((v - Complex64::new(1.0, 0.0)).norm() <= 1e-9);
    }
}

#[test]
fn complex_roots_reach_the_principal_specialization() {
    // c > (a/2)²: τ is complex, only the Pieri machinery accepts it
    let p = ModelParams::new(0.4, 0.2, 0.3).unwrap();
    assert!(!p.in_orthogonality_domain());
    for lambda in enumerate(2, 4) {
        let v = p_normalized_at_x(&tau_vector(&p, 2), &lambda, &p, EvalOptions::default()).unwrap();
        assert!((v - 1.0).norm() < 1e-9, "{lambda:?}: {v}");
    }
}
