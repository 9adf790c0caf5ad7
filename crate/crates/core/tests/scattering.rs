mod common;

use std::f64::consts::PI;

use common::{alcove_point, domain_params};
use proptest::prelude::*;
use qboson_core::algebra::apply_h_transformed;
use qboson_core::hall_littlewood::eigenvalue;
use qboson_core::partition::enumerate;
use qboson_core::scattering::{
    apply_s, apply_s_inverse, ordering_map, psi, s_boundary, s_boundary_sqrt, s_bulk, s_bulk_sqrt,
    s_hat, s_hat_sqrt,
};
use qboson_core::{Complex64, FockVector, PsiMethod, SpectralPoint};

fn point_and_n(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_n).prop_flat_map(alcove_point)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn phases_are_unimodular(x in -PI..PI, p in domain_params()) {
        for (s, root) in [
            (s_bulk(x, &p).unwrap(), s_bulk_sqrt(x, &p).unwrap()),
            (s_boundary(x, &p).unwrap(), s_boundary_sqrt(x, &p).unwrap()),
        ] {
            prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
            prop_assert!((root * root - s).norm() <= 1e-12);
        }
    }

    #[test]
    fn phases_reflect_to_conjugates(x in -PI..PI, p in domain_params()) {
        for s in [s_bulk, s_boundary] {
            let (a, b) = (s(x, &p).unwrap(), s(-x, &p).unwrap());
            prop_assert!((b - a.conj()).norm() <= 1e-12);
            prop_assert!((b - a.inv()).norm() <= 1e-12);
        }
    }

    #[test]
    fn s_hat_is_unimodular(xi in proptest::collection::vec(-PI..PI, 1..4), p in domain_params()) {
        let s = s_hat(&xi, &p).unwrap();
        prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
        prop_assert!((s_hat_sqrt(&xi, &p).unwrap().powi(2) - s).norm() <= 1e-12);
    }

    #[test]
    fn ordering_map_orders_the_gradient(xi in proptest::collection::vec(-PI..PI, 1..5)) {
        if let Ok(o) = ordering_map(&xi) {
            // ∂_j E_n = −2 sin y_j, recomputed from the ordered point
            let grad: Vec<f64> = o.apply(&xi).iter().map(|y| -2.0 * y.sin()).collect();
            prop_assert!(grad.iter().all(|&g| g > 0.0));
            prop_assert!(grad.windows(2).all(|w| w[0] > w[1]));
            let mut seen = o.sigma.clone();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..xi.len()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn s_and_its_inverse_cancel(xi in proptest::collection::vec(-PI..PI, 1..4), p in domain_params()) {
        let fhat = |x: &[f64]| Ok(Complex64::new(x.iter().sum::<f64>().cos(), x[0]));
        if let Ok(a) = apply_s(fhat, &xi, &p) {
            let back = apply_s_inverse(|_| Ok(a), &xi, &p).unwrap();
            prop_assert!((back - fhat(&xi).unwrap()).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn psi_methods_agree(xi in point_and_n(3), p in domain_params(), seed in 0..60u32) {
        let n = xi.len();
        let point = SpectralPoint::new(xi);
        let lambda = qboson_core::Partition::new((0..n as u32).map(|k| (seed + 5 * k) % 8).collect());
        let a = psi(&point, &lambda, &p, PsiMethod::Renormalized).unwrap();
        let b = psi(&point, &lambda, &p, PsiMethod::SignSum).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(b.norm()).max(1e-300));
    }

    #[test]
    fn psi_is_an_eigenfunction(xi in point_and_n(3), p in domain_params()) {
        let n = xi.len();
        let point = SpectralPoint::new(xi);
        let window = enumerate(n, 6);
        let f = FockVector::from_pairs(
            n,
            window.iter().map(|l| (l.clone(), psi(&point, l, &p, PsiMethod::SignSum).unwrap())),
        ).unwrap();
        let hf = apply_h_transformed(&f, &p).unwrap();
        let e = eigenvalue(point.xi());
        for lambda in enumerate(n, 5) {
            let r = (hf.get(&lambda) - e * f.get(&lambda)).norm();
            prop_assert!(r <= 1e-9 * (1.0 + f.max_abs()), "{lambda:?}: {r:e}");
        }
    }
}

#[test]
fn outside_the_alcove_is_rejected() {
    let p = qboson_core::ModelParams::default();
    let lambda = qboson_core::Partition::new(vec![1, 0]);
    assert!(psi(
        &SpectralPoint::new(vec![0.5, 1.0]),
        &lambda,
        &p,
        PsiMethod::SignSum
    )
    .is_err());
    assert!(ordering_map(&[0.5, PI - 0.5]).is_err());
    assert!(ordering_map(&[0.0]).is_err());
}
