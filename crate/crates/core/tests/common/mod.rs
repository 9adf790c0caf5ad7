#![allow(dead_code)]

use proptest::prelude::*;
use qboson_core::{Complex64, FockVector, ModelParams, Partition};

/// Parameters inside the orthogonality domain.
pub fn domain_params() -> impl Strategy<Value = ModelParams> {
    (
        prop_oneof![-0.9..-0.05f64, 0.05..0.9f64],
        -0.95..0.95f64,
        -0.95..0.95f64,
    )
        .prop_map(|(q, r1, r2)| ModelParams::from_roots(q, r1, r2).unwrap())
}

/// Any admissible parameters: `|q| ∉ {0, 1}`, arbitrary real `a`, `c`.
pub fn algebra_params() -> impl Strategy<Value = ModelParams> {
    (
        prop_oneof![-2.0..-1.05f64, -0.95..-0.05f64, 0.05..0.95f64, 1.05..2.0f64],
        -2.0..2.0f64,
        -2.0..2.0f64,
    )
        .prop_map(|(q, a, c)| ModelParams::new(q, a, c).unwrap())
}

pub fn partition(n: usize, max_part: u32) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(0..=max_part, n).prop_map(Partition::new)
}

pub fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// A vector of grade `n` with up to six terms.
pub fn fock_vector(n: usize, max_part: u32) -> impl Strategy<Value = FockVector> {
    proptest::collection::vec((partition(n, max_part), complex()), 1..6)
        .prop_map(move |pairs| FockVector::from_pairs(n, pairs).unwrap())
}

/// A generic point of the open alcove, sorted and away from the walls.
pub fn alcove_point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0..std::f64::consts::PI, n)
        .prop_map(|mut xi| {
            xi.sort_by(|a, b| b.total_cmp(a));
            xi
        })
        .prop_filter("generic", |xi| {
            qboson_core::SpectralPoint::new(xi.clone()).is_generic(1e-2)
        })
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

pub fn rel_vec(a: &FockVector, b: &FockVector) -> f64 {
    a.max_abs_diff(b) / a.max_abs().max(b.max_abs()).max(1.0)
}
