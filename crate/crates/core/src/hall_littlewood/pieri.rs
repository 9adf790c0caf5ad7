//! Pieri recurrences for the renormalized `P_λ`.
//!
//! Indices `j` are 0-based throughout; the formulas below are written with
//! the usual 1-based `j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{p_normalized_with, q_int_c, tau_vector, EvalOptions, HlEvaluator, SpectralPoint};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PieriForm {
    /// Differences `P_{λ±e_j} − P_λ` weighted by `V_j^±`.
    Full,
    /// `P_λ Σ(x_j + x_j^{−1}) = a[m₀]P_λ + Σ τ_j[m]P_{λ−e_j} + Σ τ_j^{−1}(1 − cδq^{m₀−1})[m]P_{λ+e_j}`.
    Compact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PieriReport {
    /// `|LHS − RHS|`
    pub residual: f64,
    /// Largest modulus among the summands on either side.
    pub scale: f64,
    /// `residual / scale`
    pub relative: f64,
    /// `|Σ(τ_j + τ_j^{−1}) − Σ τ_j[m] − Σ τ_j^{−1}[m] − r[m₀]|`
    pub bridging_residual: f64,
    pub bridging_ok: bool,
    /// `P_λ(x)` vanishes relative to its neighbours.
    pub degenerate: bool,
}

fn tau_at(p: &ModelParams, n: usize, j: usize) -> Result<Complex64> {
    let t = tau_vector(p, n)[j];
    if t == Complex64::new(0.0, 0.0) {
        Err(Error::InvalidParams("tau vanishes (r = 0)".into()))
    } else {
        Ok(t)
    }
}

fn boundary_delta(part: u32) -> f64 {
    if part == 0 {
        1.0
    } else {
        0.0
    }
}

/// `V_j^+(λ)` in product form:
///
/// ```text
/// τ_j^{−1} (1 − c²δ q^{2(n−j)})/(1 + cδ q^{2(n−j)})
///   ∏_{j<k≤n, λ_k=λ_j} (1 − q^{1+k−j})/(1 − q^{k−j}) · (1 + cδ q^{1+2n−k−j})/(1 + cδ q^{2n−k−j})
/// ```
/// with `δ = δ_{λ_j}`.
pub fn pieri_v_plus(lambda: &Partition, j: usize, p: &ModelParams) -> Result<Complex64> {
    if !lambda.can_raise(j) {
        return Err(Error::NotAdmissible {
            j,
            partition: lambda.parts().to_vec(),
            reason: "λ + e_j is not a partition",
        });
    }
    let n = lambda.len();
    let parts = lambda.parts();
    let (q, c) = (p.q, p.c);
    let delta = boundary_delta(parts[j]);
    let (n1, j1) = (n as i32, j as i32 + 1);
    let qe = q.powi(2 * (n1 - j1));
    let mut v = (1.0 - c * c * delta * qe) / (1.0 + c * delta * qe);
    for k in j + 1..n {
        if parts[k] != parts[j] {
            continue;
        }
        let k1 = k as i32 + 1;
        v *= (1.0 - q.powi(1 + k1 - j1)) / (1.0 - q.powi(k1 - j1));
        v *= (1.0 + c * delta * q.powi(1 + 2 * n1 - k1 - j1))
            / (1.0 + c * delta * q.powi(2 * n1 - k1 - j1));
    }
    Ok(v / tau_at(p, n, j)?)
}

/// `V_j^+(λ) = τ_j^{−1}(1 − c δ_{λ_j} q^{m₀(λ)−1}) [m_{λ_j}(λ)]`.
pub fn pieri_v_plus_closed(lambda: &Partition, j: usize, p: &ModelParams) -> Result<Complex64> {
    if !lambda.can_raise(j) {
        return Err(Error::NotAdmissible {
            j,
            partition: lambda.parts().to_vec(),
            reason: "λ + e_j is not a partition",
        });
    }
    let part = lambda.parts()[j];
    let m0 = lambda.multiplicity(0) as i32;
    let boundary = 1.0 - p.c * boundary_delta(part) * p.q.powi(m0 - 1);
    Ok(q_int_c(lambda.multiplicity(part), p.q) * boundary / tau_at(p, lambda.len(), j)?)
}

/// `V_j^−(λ) = τ_j ∏_{1≤k<j, λ_k=λ_j} (1 − q^{1+j−k})/(1 − q^{j−k})`.
pub fn pieri_v_minus(lambda: &Partition, j: usize, p: &ModelParams) -> Result<Complex64> {
    if !lambda.can_lower(j) {
        return Err(Error::NotAdmissible {
            j,
            partition: lambda.parts().to_vec(),
            reason: "λ − e_j is not a partition",
        });
    }
    let parts = lambda.parts();
    let mut v = 1.0;
    for k in 0..j {
        if parts[k] == parts[j] {
            let d = (j - k) as i32;
            v *= (1.0 - p.q.powi(1 + d)) / (1.0 - p.q.powi(d));
        }
    }
    Ok(tau_vector(p, lambda.len())[j] * v)
}

/// `V_j^−(λ) = τ_j [m_{λ_j}(λ)]`.
pub fn pieri_v_minus_closed(lambda: &Partition, j: usize, p: &ModelParams) -> Result<Complex64> {
    if !lambda.can_lower(j) {
        return Err(Error::NotAdmissible {
            j,
            partition: lambda.parts().to_vec(),
            reason: "λ − e_j is not a partition",
        });
    }
    let m = lambda.multiplicity(lambda.parts()[j]);
    Ok(tau_vector(p, lambda.len())[j] * q_int_c(m, p.q))
}

/// Residual of the Pieri identity at a real generic point.
pub fn pieri_residual(
    xi: &SpectralPoint,
    lambda: &Partition,
    p: &ModelParams,
    form: PieriForm,
) -> Result<PieriReport> {
    let eval = HlEvaluator::new(xi, p, EvalOptions::default())?;
    residual_with(&eval, &xi.exponentials(), lambda, form)
}

/// Residual of the Pieri identity at complex `x`.
pub fn pieri_residual_at_x(
    x: &[Complex64],
    lambda: &Partition,
    p: &ModelParams,
    form: PieriForm,
    opts: EvalOptions,
) -> Result<PieriReport> {
    let eval = HlEvaluator::at_x(x, p, opts)?;
    residual_with(&eval, x, lambda, form)
}

fn residual_with(
    eval: &HlEvaluator,
    x: &[Complex64],
    lambda: &Partition,
    form: PieriForm,
) -> Result<PieriReport> {
    let p = *eval.params();
    let n = lambda.len();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: n,
        });
    }
    let tau = tau_vector(&p, n);
    if tau.iter().any(|t| t.norm() == 0.0) {
        return Err(Error::InvalidParams("tau vanishes (r = 0)".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let p_lambda = p_normalized_with(eval, lambda)?;
    let m0 = lambda.multiplicity(0);

    let mut summands: Vec<Complex64> = Vec::new();
    let mut neighbour_max: f64 = 0.0;
    let lhs = match form {
        PieriForm::Full => {
            let shift: Complex64 = x
                .iter()
                .zip(&tau)
                .map(|(&xj, &tj)| xj + one / xj - tj - one / tj)
                .sum();
            p_lambda * shift
        }
        PieriForm::Compact => {
            let shift: Complex64 = x.iter().map(|&xj| xj + one / xj).sum();
            summands.push(q_int_c(m0, p.q) * p.a * p_lambda);
            p_lambda * shift
        }
    };
    for j in 0..n {
        if lambda.can_raise(j) {
            let up = p_normalized_with(eval, &lambda.raised(j))?;
            neighbour_max = neighbour_max.max(up.norm());
            match form {
                PieriForm::Full => summands.push(pieri_v_plus(lambda, j, &p)? * (up - p_lambda)),
                PieriForm::Compact => summands.push(pieri_v_plus_closed(lambda, j, &p)? * up),
            }
        }
        if lambda.can_lower(j) {
            let down = p_normalized_with(eval, &lambda.lowered(j))?;
            neighbour_max = neighbour_max.max(down.norm());
            match form {
                PieriForm::Full => summands.push(pieri_v_minus(lambda, j, &p)? * (down - p_lambda)),
                PieriForm::Compact => summands.push(pieri_v_minus_closed(lambda, j, &p)? * down),
            }
        }
    }
    let rhs: Complex64 = summands.iter().sum();
    let residual = (lhs - rhs).norm();
    let scale = summands.iter().map(|s| s.norm()).fold(lhs.norm(), f64::max);
    let relative = if scale > 0.0 { residual / scale } else { 0.0 };

    // Σ(τ_j + τ_j^{−1}) − Σ_{λ−e_j} τ_j[m] − Σ_{λ+e_j} τ_j^{−1}[m] = r[m₀]
    let mut bridge_terms: Vec<Complex64> = tau.iter().map(|&t| t + one / t).collect();
    for (j, &t) in tau.iter().enumerate().take(n) {
        let m = q_int_c(lambda.multiplicity(lambda.parts()[j]), p.q);
        if lambda.can_lower(j) {
            bridge_terms.push(-t * m);
        }
        if lambda.can_raise(j) {
            bridge_terms.push(-m / t);
        }
    }
    bridge_terms.push(-p.r() * q_int_c(m0, p.q));
    let bridge_scale = bridge_terms.iter().map(|t| t.norm()).fold(1.0, f64::max);
    let bridging_residual = bridge_terms.iter().sum::<Complex64>().norm();

    Ok(PieriReport {
        residual,
        scale,
        relative,
        bridging_residual,
        bridging_ok: bridging_residual <= 1e-12 * bridge_scale,
        degenerate: p_lambda.norm() <= 1e-12 * neighbour_max.max(f64::MIN_POSITIVE),
    })
}
