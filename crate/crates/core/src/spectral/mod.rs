//! The weighted inner product on the alcove, orthogonality of the wave
//! functions, the Fourier pair `F_q`/`F_q^{−1}` and the time evolution
//! `e^{itH}`.
//!
//! ```text
//! ⟨f̂, ĝ⟩_Δ   = (2π)^{−n} ∫_A f̂(ξ) conj(ĝ(ξ)) Δ(ξ) dξ
//! ⟨f, g⟩_n   = Σ_λ f(λ) conj(g(λ)) / N(λ)
//! (F_q f)(ξ) = Σ_λ f(λ) conj(φ_ξ(λ)) / N(λ)
//! ```
//!
//! All integrals go through a [`QuadratureRule`]; the per-node work runs in
//! parallel and is reduced in a fixed order, so results are reproducible.

mod quadrature;
mod spectrum;

pub use quadrature::{build_rule, QuadMode, QuadratureRule};
pub use spectrum::{
    band_eigenvalues, one_particle_tridiagonal, sturm_count, truncated_hamiltonian,
    SymmetricTridiagonal,
};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::hall_littlewood::{
    eigenvalue, norm_n, weight_delta_unchecked, EvalOptions, HlEvaluator, SpectralPoint,
};
use crate::params::ModelParams;
use crate::partition::Partition;
use crate::scattering::psi_from_phi;
use crate::summation::ComplexSum;

/// Nodes per oscillation period below which [`evolve_window`] warns.
pub const MIN_NODES_PER_PERIOD: f64 = 10.0;

fn evaluator(xi: &[f64], p: &ModelParams) -> Result<HlEvaluator> {
    HlEvaluator::new(&SpectralPoint::new(xi.to_vec()), p, EvalOptions::default())
}

fn check_grade(n: usize, f: &FockVector) -> Result<()> {
    if f.grade() == n as i64 {
        Ok(())
    } else {
        Err(Error::GradeMismatch {
            left: f.grade(),
            right: n as i64,
        })
    }
}

fn check_lengths(n: usize, lambdas: &[Partition]) -> Result<()> {
    match lambdas.iter().find(|l| l.len() != n) {
        Some(l) => Err(Error::DimensionMismatch {
            expected: n,
            got: l.len(),
        }),
        None => Ok(()),
    }
}

/// `⟨f, g⟩_n = Σ_λ f(λ) conj(g(λ)) N(λ)^{−1}`.
pub fn inner_product_n(f: &FockVector, g: &FockVector, p: &ModelParams) -> Result<Complex64> {
    if f.grade() != g.grade() {
        return Err(Error::GradeMismatch {
            left: f.grade(),
            right: g.grade(),
        });
    }
    p.require_orthogonality_domain()?;
    let mut sum = ComplexSum::default();
    for (lambda, a) in f.iter() {
        let b = g.get(lambda);
        if b != Complex64::new(0.0, 0.0) {
            sum.add(a * b.conj() / norm_n(lambda, p));
        }
    }
    Ok(sum.value())
}

/// `⟨f̂, ĝ⟩_Δ` by quadrature, including the `(2π)^{−n}` prefactor.
pub fn inner_product_delta<F, G>(
    fhat: F,
    ghat: G,
    rule: &QuadratureRule,
    p: &ModelParams,
) -> Result<Complex64>
where
    F: Fn(&SpectralPoint) -> Result<Complex64> + Sync,
    G: Fn(&SpectralPoint) -> Result<Complex64> + Sync,
{
    p.require_orthogonality_domain()?;
    let v = rule.integrate(|xi| {
        let point = SpectralPoint::new(xi.to_vec());
        Ok(fhat(&point)? * ghat(&point)?.conj() * weight_delta_unchecked(xi, p))
    })?;
    Ok(v * rule.prefactor())
}

/// `G_ij = ⟨φ(λ_i), φ(λ_j)⟩_Δ`, which should approximate `diag(N(λ_i))`.
pub fn gram_matrix(
    lambdas: &[Partition],
    rule: &QuadratureRule,
    p: &ModelParams,
) -> Result<DMatrix<Complex64>> {
    p.require_orthogonality_domain()?;
    let k = lambdas.len();
    if k == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    check_lengths(rule.n(), lambdas)?;
    let flat = rule.integrate_vec(k * k, |xi, out| {
        let eval = evaluator(xi, p)?;
        let delta = weight_delta_unchecked(xi, p);
        let v = lambdas
            .iter()
            .map(|l| eval.value(l))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..k {
            for j in 0..k {
                out[i * k + j] = v[i] * v[j].conj() * delta;
            }
        }
        Ok(())
    })?;
    let pref = rule.prefactor();
    Ok(DMatrix::from_fn(k, k, |i, j| flat[i * k + j] * pref))
}

/// One Gram entry against its exact value `δ_ij N(λ_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GramEntry {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
    pub expected: f64,
    pub abs_error: f64,
}

/// Entries of a Gram matrix with their exact values, row-major.
pub fn gram_entries(
    lambdas: &[Partition],
    gram: &DMatrix<Complex64>,
    p: &ModelParams,
) -> Vec<GramEntry> {
    let mut out = Vec::with_capacity(gram.len());
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let expected = if i == j { norm_n(&lambdas[i], p) } else { 0.0 };
            let v = gram[(i, j)];
            out.push(GramEntry {
                i,
                j,
                re: v.re,
                im: v.im,
                expected,
                abs_error: (v - expected).norm(),
            });
        }
    }
    out
}

/// `max_{i≠j} |G_ij| / √(G_ii G_jj)`.
pub fn gram_offdiagonal_ratio(gram: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            if i != j {
                let scale = (gram[(i, i)].norm() * gram[(j, j)].norm()).sqrt();
                worst = worst.max(gram[(i, j)].norm() / scale);
            }
        }
    }
    worst
}

/// `(F_q f)(ξ) = Σ_λ f(λ) conj(φ_ξ(λ)) / N(λ)`.
pub fn fourier_forward(f: &FockVector, xi: &SpectralPoint, p: &ModelParams) -> Result<Complex64> {
    p.require_orthogonality_domain()?;
    check_grade(xi.n(), f)?;
    let eval = HlEvaluator::new(xi, p, EvalOptions::default())?;
    forward_with(f, &eval, p)
}

fn forward_with(f: &FockVector, eval: &HlEvaluator, p: &ModelParams) -> Result<Complex64> {
    let mut sum = ComplexSum::default();
    for (lambda, a) in f.iter() {
        sum.add(a * eval.value(lambda)?.conj() / norm_n(lambda, p));
    }
    Ok(sum.value())
}

/// `(F_q^{−1} f̂)(λ) = (2π)^{−n} ∫_A f̂(ξ) φ_ξ(λ) Δ(ξ) dξ`.
pub fn fourier_inverse<F>(
    fhat: F,
    lambda: &Partition,
    rule: &QuadratureRule,
    p: &ModelParams,
) -> Result<Complex64>
where
    F: Fn(&SpectralPoint) -> Result<Complex64> + Sync,
{
    p.require_orthogonality_domain()?;
    check_lengths(rule.n(), std::slice::from_ref(lambda))?;
    let v = rule.integrate(|xi| {
        let point = SpectralPoint::new(xi.to_vec());
        let eval = HlEvaluator::new(&point, p, EvalOptions::default())?;
        Ok(fhat(&point)? * eval.value(lambda)? * weight_delta_unchecked(xi, p))
    })?;
    Ok(v * rule.prefactor())
}

/// `F_q^{−1} F_q f` on `window` in one pass over the nodes.
pub fn fourier_roundtrip(
    f: &FockVector,
    window: &[Partition],
    rule: &QuadratureRule,
    p: &ModelParams,
) -> Result<FockVector> {
    p.require_orthogonality_domain()?;
    check_grade(rule.n(), f)?;
    check_lengths(rule.n(), window)?;
    let values = rule.integrate_vec(window.len(), |xi, out| {
        let eval = evaluator(xi, p)?;
        let fhat = forward_with(f, &eval, p)? * weight_delta_unchecked(xi, p);
        for (o, l) in out.iter_mut().zip(window) {
            *o = fhat * eval.value(l)?;
        }
        Ok(())
    })?;
    let pref = rule.prefactor();
    FockVector::from_pairs(
        rule.n(),
        window
            .iter()
            .cloned()
            .zip(values.into_iter().map(|v| v * pref)),
    )
}

/// Nodes per oscillation period of `e^{itE_n(ξ)}` along one axis
/// (`|∂_j tE_n| ≤ 2|t|`); infinite at `t = 0`.
pub fn nodes_per_period(rule: &QuadratureRule, t: f64) -> f64 {
    let period = PI / t.abs();
    period * rule.points_per_axis() as f64 / rule.axis_length()
}

/// Result of [`evolve_window`].
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub state: FockVector,
    pub nodes_per_period: f64,
    /// Set when the rule resolves fewer than [`MIN_NODES_PER_PERIOD`] nodes per period.
    pub warning: Option<String>,
}

/// `(e^{itH} f)(λ) = (2π)^{−n} ∫_A e^{itE_n(ξ)} f̂(ξ) Ψ_ξ(λ) dξ` for every `λ` in
/// `window`, with `f̂(ξ) = Σ_μ f(μ) conj(Ψ_ξ(μ))`.
pub fn evolve_window(
    f: &FockVector,
    t: f64,
    window: &[Partition],
    rule: &QuadratureRule,
    p: &ModelParams,
) -> Result<Evolution> {
    Ok(evolve_times(f, &[t], window, rule, p)?.remove(0))
}

/// [`evolve_window`] for several times, sharing the kernel evaluations.
pub fn evolve_times(
    f: &FockVector,
    ts: &[f64],
    window: &[Partition],
    rule: &QuadratureRule,
    p: &ModelParams,
) -> Result<Vec<Evolution>> {
    p.require_orthogonality_domain()?;
    check_grade(rule.n(), f)?;
    check_lengths(rule.n(), window)?;
    let w = window.len();
    let values = rule.integrate_vec(w * ts.len(), |xi, out| {
        let eval = evaluator(xi, p)?;
        let mut fhat = ComplexSum::default();
        for (mu, a) in f.iter() {
            fhat.add(a * psi_from_phi(&eval, xi, mu)?.conj());
        }
        let e = eigenvalue(xi);
        let phases: Vec<Complex64> = ts
            .iter()
            .map(|t| fhat.value() * Complex64::from_polar(1.0, t * e))
            .collect();
        for (k, l) in window.iter().enumerate() {
            let kernel = psi_from_phi(&eval, xi, l)?;
            for (j, g) in phases.iter().enumerate() {
                out[j * w + k] = g * kernel;
            }
        }
        Ok(())
    })?;
    let pref = rule.prefactor();
    ts.iter()
        .enumerate()
        .map(|(j, &t)| {
            let amps = values[j * w..(j + 1) * w].iter().map(|v| v * pref);
            let state = FockVector::from_pairs(rule.n(), window.iter().cloned().zip(amps))?;
            let npp = nodes_per_period(rule, t);
            let warning = (npp < MIN_NODES_PER_PERIOD).then(|| {
                format!("t = {t}: {npp:.1} nodes per oscillation period (< {MIN_NODES_PER_PERIOD}); increase the quadrature")
            });
            Ok(Evolution { state, nodes_per_period: npp, warning })
        })
        .collect()
}

/// `(e^{itH} f)(λ)` at a single `λ`.
pub fn evolve(
    f: &FockVector,
    t: f64,
    lambda: &Partition,
    rule: &QuadratureRule,
    p: &ModelParams,
) -> Result<Complex64> {
    let e = evolve_window(f, t, std::slice::from_ref(lambda), rule, p)?;
    Ok(e.state.get(lambda))
}
