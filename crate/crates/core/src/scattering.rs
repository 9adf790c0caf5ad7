//! Factorized scattering: two-body and boundary phases, the S-matrix `Ŝ`,
//! the normalized wave function `Ψ_ξ`, the ordering map on `A_r` and a
//! finite-time probe of the wave operators.
//!
//! ```text
//! s(x)  = (1 − q e^{−ix}) / (1 − q e^{ix})
//! s₀(x) = (1 − a e^{−ix} + c e^{−2ix}) / (1 − a e^{ix} + c e^{2ix})
//! Ŝ(ξ)  = ∏_{j<k} s(ξ_j − ξ_k) s(ξ_j + ξ_k) ∏_j s₀(ξ_j)
//! ```
//!
//! Square roots use the explicit branch "numerator over modulus".

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::hall_littlewood::{
    eigenvalue, norm_n, signed_permutations, EvalOptions, HlEvaluator, SpectralPoint,
    DEFAULT_GENERICITY_MARGIN, DEFAULT_SINGULAR_CUTOFF,
};
use crate::params::ModelParams;
use crate::partition::{enumerate, Partition};
use crate::spectral::QuadratureRule;
use crate::summation::ComplexSum;

/// `|sin ξ_j|` below this, or two of them closer than this, leaves `A_r`.
pub const REGULAR_MARGIN: f64 = 1e-12;

fn bulk_parts(x: f64, p: &ModelParams) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    (
        one - Complex64::from_polar(p.q, -x),
        one - Complex64::from_polar(p.q, x),
    )
}

fn boundary_parts(x: f64, p: &ModelParams) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let num = one - Complex64::from_polar(p.a, -x) + Complex64::from_polar(p.c, -2.0 * x);
    let den = one - Complex64::from_polar(p.a, x) + Complex64::from_polar(p.c, 2.0 * x);
    (num, den)
}

fn check(den: Complex64, name: impl FnOnce() -> String) -> Result<()> {
    let m = den.norm();
    if m > DEFAULT_SINGULAR_CUTOFF {
        Ok(())
    } else {
        Err(Error::Singular {
            factor: name(),
            magnitude: m,
        })
    }
}

/// Two-body phase `s(x)`.
pub fn s_bulk(x: f64, p: &ModelParams) -> Result<Complex64> {
    let (num, den) = bulk_parts(x, p);
    check(den, || format!("1 - q e^(i {x})"))?;
    Ok(num / den)
}

/// `s(x)^{1/2} = (1 − q e^{−ix}) / |1 − q e^{ix}|`.
pub fn s_bulk_sqrt(x: f64, p: &ModelParams) -> Result<Complex64> {
    let (num, den) = bulk_parts(x, p);
    check(den, || format!("1 - q e^(i {x})"))?;
    Ok(num / den.norm())
}

/// Boundary phase `s₀(x)`.
pub fn s_boundary(x: f64, p: &ModelParams) -> Result<Complex64> {
    let (num, den) = boundary_parts(x, p);
    check(den, || format!("1 - a e^(i {x}) + c e^(2i {x})"))?;
    Ok(num / den)
}

/// `s₀(x)^{1/2} = (1 − a e^{−ix} + c e^{−2ix}) / |1 − a e^{ix} + c e^{2ix}|`.
pub fn s_boundary_sqrt(x: f64, p: &ModelParams) -> Result<Complex64> {
    let (num, den) = boundary_parts(x, p);
    check(den, || format!("1 - a e^(i {x}) + c e^(2i {x})"))?;
    Ok(num / den.norm())
}

fn factorized(
    xi: &[f64],
    p: &ModelParams,
    bulk: fn(f64, &ModelParams) -> Result<Complex64>,
    boundary: fn(f64, &ModelParams) -> Result<Complex64>,
) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &xj) in xi.iter().enumerate() {
        acc *= boundary(xj, p)?;
        for &xk in &xi[j + 1..] {
            acc *= bulk(xj - xk, p)? * bulk(xj + xk, p)?;
        }
    }
    Ok(acc)
}

/// The S-matrix `Ŝ(ξ)`.
pub fn s_hat(xi: &[f64], p: &ModelParams) -> Result<Complex64> {
    factorized(xi, p, s_bulk, s_boundary)
}

/// `Ŝ(ξ)^{1/2}` as the product of the factor square roots.
pub fn s_hat_sqrt(xi: &[f64], p: &ModelParams) -> Result<Complex64> {
    factorized(xi, p, s_bulk_sqrt, s_boundary_sqrt)
}

/// How [`psi`] is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiMethod {
    /// `i^{n²} |C(ξ)|^{−1} N(λ)^{−1/2} φ_ξ(λ)`.
    Renormalized,
    /// `N(λ)^{−1/2} Σ sign(εσ) Ŝ(εξ_σ)^{1/2} e^{i⟨ρ+λ, εξ_σ⟩}`.
    SignSum,
}

/// `e^{iπn²/2}`, exactly.
pub fn phase_factor(n: usize) -> Complex64 {
    match (n * n) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// The shift in the sign-sum form of `Ψ`: `ρ = (n, n−1, …, 1)`.
///
/// The shift `(n−1, …, 1, 0)` with the same phase does not reproduce the
/// renormalized form; already at `n = 1` the two differ by `e^{±iξ}`.
pub fn rho(n: usize) -> Vec<u32> {
    (1..=n as u32).rev().collect()
}

/// `Σ_{σ,ε} sign(εσ) w(εξ_σ) e^{i⟨ρ+λ, εξ_σ⟩}` for a given amplitude `w`.
pub fn sign_sum(
    xi: &[f64],
    lambda: &Partition,
    shift: &[u32],
    amplitude: impl Fn(&[f64]) -> Result<Complex64>,
) -> Result<Complex64> {
    let n = xi.len();
    if lambda.len() != n || shift.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: lambda.len().min(shift.len()),
        });
    }
    let mut sum = ComplexSum::default();
    for w in signed_permutations(n) {
        let y = w.apply_real(xi);
        let arg: f64 = y
            .iter()
            .zip(lambda.parts())
            .zip(shift)
            .map(|((&y, &l), &r)| (l + r) as f64 * y)
            .sum();
        sum.add(amplitude(&y)? * Complex64::from_polar(w.sign(), arg));
    }
    Ok(sum.value())
}

/// The normalized wave function `Ψ_ξ(λ)` on the open alcove.
pub fn psi(
    xi: &SpectralPoint,
    lambda: &Partition,
    p: &ModelParams,
    method: PsiMethod,
) -> Result<Complex64> {
    if !xi.in_alcove() {
        return Err(Error::OutsideAlcove {
            xi: xi.xi().to_vec(),
        });
    }
    xi.require_generic(DEFAULT_GENERICITY_MARGIN)?;
    p.require_orthogonality_domain()?;
    match method {
        PsiMethod::Renormalized => {
            let eval = HlEvaluator::new(xi, p, EvalOptions::default())?;
            Ok(psi_from_phi(&eval, xi.xi(), lambda)?)
        }
        PsiMethod::SignSum => {
            let s = sign_sum(xi.xi(), lambda, &rho(xi.n()), |y| s_hat_sqrt(y, p))?;
            Ok(s / norm_n(lambda, p).sqrt())
        }
    }
}

/// Renormalized `Ψ` through an existing evaluator; W-invariant in `ξ`.
pub(crate) fn psi_from_phi(
    eval: &HlEvaluator,
    xi: &[f64],
    lambda: &Partition,
) -> Result<Complex64> {
    let p = eval.params();
    let delta = crate::hall_littlewood::weight_delta_unchecked(xi, p);
    let phi = eval.value(lambda)?;
    Ok(phase_factor(xi.len()) * phi * (delta / norm_n(lambda, p)).sqrt())
}

/// The free kernel `Ψ⁰_ξ(λ)` (`Ŝ ≡ 1`, `N ≡ 1`), extended off the alcove as a
/// W-invariant function (evaluated at the alcove representative of `ξ`).
pub fn psi_free(xi: &[f64], lambda: &Partition) -> Result<Complex64> {
    sign_sum(&alcove_representative(xi), lambda, &rho(xi.len()), |_| {
        Ok(Complex64::new(1.0, 0.0))
    })
}

/// The point of `Wξ ∩ closure(A)`, for `ξ ∈ [−π, π]ⁿ`.
pub fn alcove_representative(xi: &[f64]) -> Vec<f64> {
    let mut y: Vec<f64> = xi
        .iter()
        .map(|x| (x - 2.0 * PI * (x / (2.0 * PI)).round()).abs())
        .collect();
    y.sort_by(|a, b| b.total_cmp(a));
    y
}

/// `(ε_ξ, σ_ξ)` with `∇E_n(ε_ξ ξ_{σ_ξ})` positive and strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingData {
    pub epsilon: Vec<i8>,
    pub sigma: Vec<usize>,
}

impl OrderingData {
    /// `(ε ξ_σ)_j = ε_j ξ_{σ_j}`.
    pub fn apply(&self, xi: &[f64]) -> Vec<f64> {
        self.sigma
            .iter()
            .zip(&self.epsilon)
            .map(|(&s, &e)| e as f64 * xi[s])
            .collect()
    }
}

fn ordering(xi: &[f64], strict: bool) -> Result<OrderingData> {
    let sines: Vec<f64> = xi.iter().map(|x| x.sin()).collect();
    if strict {
        if let Some(j) = sines.iter().position(|s| s.abs() < REGULAR_MARGIN) {
            return Err(Error::OutsideRegular {
                xi: xi.to_vec(),
                reason: format!("sin(xi_{}) vanishes", j + 1),
            });
        }
    }
    let mut sigma: Vec<usize> = (0..xi.len()).collect();
    sigma.sort_by(|&i, &j| sines[j].abs().total_cmp(&sines[i].abs()));
    if strict {
        if let Some(w) = sigma
            .windows(2)
            .find(|w| (sines[w[0]].abs() - sines[w[1]].abs()).abs() < REGULAR_MARGIN)
        {
            return Err(Error::OutsideRegular {
                xi: xi.to_vec(),
                reason: format!("|sin(xi_{})| = |sin(xi_{})|", w[0] + 1, w[1] + 1),
            });
        }
    }
    // −2 sin(ε y) > 0  ⇔  ε = −sign(sin y)
    let epsilon = sigma
        .iter()
        .map(|&s| if sines[s] > 0.0 { -1 } else { 1 })
        .collect();
    Ok(OrderingData { epsilon, sigma })
}

/// The ordering map on `A_r`; ties and vanishing components are errors.
pub fn ordering_map(xi: &[f64]) -> Result<OrderingData> {
    ordering(xi, true)
}

/// `(Ŝ f̂)(ξ) = Ŝ(ε_ξ ξ_{σ_ξ}) f̂(ξ)`.
pub fn apply_s(
    fhat: impl Fn(&[f64]) -> Result<Complex64>,
    xi: &[f64],
    p: &ModelParams,
) -> Result<Complex64> {
    let o = ordering_map(xi)?;
    Ok(s_hat(&o.apply(xi), p)? * fhat(xi)?)
}

/// `(Ŝ^{−1} f̂)(ξ)`.
pub fn apply_s_inverse(
    fhat: impl Fn(&[f64]) -> Result<Complex64>,
    xi: &[f64],
    p: &ModelParams,
) -> Result<Complex64> {
    let o = ordering_map(xi)?;
    Ok(s_hat(&o.apply(xi), p)?.conj() * fhat(xi)?)
}

/// The multiplier `Ŝ^{∓1/2}` of `Ω_r^±` at `ξ` (upper sign for `forward`).
///
/// Quadrature nodes on the measure-zero complement of `A_r` (ties of
/// `|sin ξ_j|`) are ordered by index instead of rejected.
pub(crate) fn wave_multiplier(xi: &[f64], p: &ModelParams, forward: bool) -> Result<Complex64> {
    let o = ordering(xi, false)?;
    let root = s_hat_sqrt(&o.apply(xi), p)?;
    Ok(if forward { root.conj() } else { root })
}

/// One line of the decay table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub t: f64,
    pub distance: f64,
    pub window_size: usize,
    pub quadrature_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    /// `‖f‖²` missing from the window after free evolution, per row.
    pub leakage: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Leakage above this produces a window-truncation warning.
const LEAKAGE_WARNING: f64 = 1e-10;

/// A normalized one-particle wave packet
/// `f(λ) ∝ exp(−(λ−center)²/(4 width²)) e^{−iξ₀λ}` on sites `0..=cutoff`.
///
/// With `ξ₀ ∈ (0,π)` it moves away from the boundary under `e^{−itH₀}`.
pub fn wave_packet(center: f64, width: f64, xi0: f64, cutoff: u32) -> FockVector {
    let mut f = FockVector::zero(1);
    for l in 0..=cutoff {
        let x = l as f64;
        let env = (-(x - center).powi(2) / (4.0 * width * width)).exp();
        f.add_at(
            Partition::new(vec![l]),
            Complex64::from_polar(env, -xi0 * x),
        );
    }
    let norm = f.norm_sqr().sqrt();
    f.scale(Complex64::new(1.0 / norm, 0.0))
}

/// Sites reached by ballistic motion (speed ≤ 2 per particle) plus a margin.
fn auto_window(f: &FockVector, t_list: &[f64]) -> u32 {
    let tmax = t_list.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    f.max_part() + (2.5 * tmax).ceil() as u32 + 30
}

/// Decay table of `d(t) = ‖e^{itH} e^{−itH₀} f − Ω_r^{sign t} f‖` with the
/// window chosen from the ballistic speed.
pub fn wave_operator_probe(
    f: &FockVector,
    t_list: &[f64],
    rule: &QuadratureRule,
    p: &ModelParams,
) -> Result<ProbeReport> {
    wave_operator_probe_window(f, t_list, auto_window(f, t_list), rule, p)
}

/// As [`wave_operator_probe`] on the window of partitions with parts `≤ window_max_part`.
///
/// All states are represented on the window: the free evolution
/// `e^{−itH₀} f` is computed there through `F₀`, transformed with `F`, evolved
/// with `e^{itE}` and compared with `F^{−1} Ŝ^{∓1/2} F₀ f`.
pub fn wave_operator_probe_window(
    f: &FockVector,
    t_list: &[f64],
    window_max_part: u32,
    rule: &QuadratureRule,
    p: &ModelParams,
) -> Result<ProbeReport> {
    p.require_orthogonality_domain()?;
    let n = rule.n();
    if f.grade() != n as i64 {
        return Err(Error::GradeMismatch {
            left: f.grade(),
            right: n as i64,
        });
    }
    let window = enumerate(n, window_max_part.max(f.max_part()));
    let k = window.len();
    let norm_f = f.norm_sqr();

    struct Node {
        psi: Vec<Complex64>,
        free: Vec<Complex64>,
        energy: f64,
        free_hat: Complex64,
        mult_plus: Complex64,
        mult_minus: Complex64,
    }
    let nodes = rule.map_nodes(|xi| {
        let point = SpectralPoint::new(xi.to_vec());
        let eval = HlEvaluator::new(&point, p, EvalOptions::default())?;
        let psi = window
            .iter()
            .map(|l| psi_from_phi(&eval, xi, l))
            .collect::<Result<Vec<_>>>()?;
        let free = window
            .iter()
            .map(|l| psi_free(xi, l))
            .collect::<Result<Vec<_>>>()?;
        let mut free_hat = ComplexSum::default();
        for (mu, &a) in f.iter() {
            free_hat.add(a * psi_free(xi, mu)?.conj());
        }
        Ok(Node {
            psi,
            free,
            energy: eigenvalue(xi),
            free_hat: free_hat.value(),
            mult_plus: wave_multiplier(xi, p, true)?,
            mult_minus: wave_multiplier(xi, p, false)?,
        })
    })?;
    let pref = rule.prefactor();
    let live: Vec<(f64, &Node)> = nodes
        .iter()
        .enumerate()
        .filter_map(|(i, nd)| nd.as_ref().map(|nd| (rule.weight(i) * pref, nd)))
        .collect();

    // x(λ) = Σ_nodes w g(ξ) K_ξ(λ)
    let synth =
        |g: &dyn Fn(&Node) -> Complex64, kernel: fn(&Node) -> &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![ComplexSum::default(); k];
            for &(w, nd) in &live {
                let gw = g(nd) * w;
                for (o, kv) in out.iter_mut().zip(kernel(nd)) {
                    o.add(gw * kv);
                }
            }
            out.into_iter().map(|s| s.value()).collect()
        };
    let psi_kernel: fn(&Node) -> &[Complex64] = |nd| &nd.psi;
    let free_kernel: fn(&Node) -> &[Complex64] = |nd| &nd.free;
    let omega_plus = synth(&|nd| nd.mult_plus * nd.free_hat, psi_kernel);
    let omega_minus = synth(&|nd| nd.mult_minus * nd.free_hat, psi_kernel);

    let mut rows = Vec::with_capacity(t_list.len());
    let mut leakage = Vec::with_capacity(t_list.len());
    let mut warnings = Vec::new();
    for &t in t_list {
        let free_evolved = synth(
            &|nd| Complex64::from_polar(1.0, -t * nd.energy) * nd.free_hat,
            free_kernel,
        );
        let inside: f64 = free_evolved.iter().map(|v| v.norm_sqr()).sum();
        let leak = (norm_f - inside).max(0.0);
        if leak > LEAKAGE_WARNING {
            warnings.push(format!(
                "t = {t}: free evolution leaves the window (lost norm² {leak:e})"
            ));
        }
        leakage.push(leak);
        let hat: Vec<Complex64> = live
            .iter()
            .map(|(_, nd)| {
                let mut s = ComplexSum::default();
                for (g, kv) in free_evolved.iter().zip(&nd.psi) {
                    s.add(g * kv.conj());
                }
                s.value()
            })
            .collect();
        let mut out = vec![ComplexSum::default(); k];
        for ((w, nd), h) in live.iter().zip(&hat) {
            let gw = Complex64::from_polar(1.0, t * nd.energy) * h * *w;
            for (o, kv) in out.iter_mut().zip(&nd.psi) {
                o.add(gw * kv);
            }
        }
        let target = if t >= 0.0 { &omega_plus } else { &omega_minus };
        let distance = out
            .into_iter()
            .zip(target)
            .map(|(s, o)| (s.value() - o).norm_sqr())
            .sum::<f64>()
            .sqrt();
        rows.push(ProbeRow {
            t,
            distance,
            window_size: k,
            quadrature_points: rule.len(),
        });
    }
    Ok(ProbeReport {
        rows,
        leakage,
        warnings,
    })
}
