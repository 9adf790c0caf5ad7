//! Bethe-Ansatz wave functions: Macdonald's hyperoctahedral Hall-Littlewood
//! functions of type BC, their orthogonality weight and norms, and the
//! renormalized `P_λ` with its Pieri recurrences.
//!
//! The wave function is the symmetrized plane-wave sum
//!
//! ```text
//! φ_ξ(λ) = Σ_{σ ∈ S_n, ε ∈ {±1}ⁿ} C(εξ_σ) e^{i⟨λ, εξ_σ⟩}
//! ```
//!
//! Everything is evaluated in the multiplicative variables `x_j = e^{iξ_j}`,
//! in which `φ` is a Laurent polynomial. This also provides the extension to
//! complex spectral points needed for the principal specialization `x = τ`.
//!
//! Individual terms blow up near the alcove walls while the sum stays finite,
//! so terms are added with compensated summation and the cancellation is
//! reported in [`EvalDiagnostics`]. A double-double path is available through
//! [`Precision::Extended`] (or [`Precision::Auto`], which switches when the
//! condition exceeds [`EXTENDED_CONDITION_THRESHOLD`]).

mod pieri;
mod signed;

pub use pieri::{
    pieri_residual, pieri_residual_at_x, pieri_v_minus, pieri_v_minus_closed, pieri_v_plus,
    pieri_v_plus_closed, PieriForm, PieriReport,
};
pub use signed::{signed_permutations, SignedPermutation, MAX_PARTICLES};

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::{Complex, Complex64};
use num_traits::Float;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::algebra::{q_factorial, q_int};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::partition::Partition;
use crate::summation::ComplexSum;

/// Minimal distance of `ξ_j`, `ξ_j ± ξ_k` from the singular set.
pub const DEFAULT_GENERICITY_MARGIN: f64 = 1e-6;
/// Hard cutoff on the denominators of `C`.
pub const DEFAULT_SINGULAR_CUTOFF: f64 = 1e-10;
/// Condition above which [`Precision::Auto`] re-evaluates in double-double.
pub const EXTENDED_CONDITION_THRESHOLD: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Standard,
    Extended,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub genericity_margin: f64,
    pub singular_cutoff: f64,
    pub precision: Precision,
    pub extended_threshold: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            genericity_margin: DEFAULT_GENERICITY_MARGIN,
            singular_cutoff: DEFAULT_SINGULAR_CUTOFF,
            precision: Precision::Standard,
            extended_threshold: EXTENDED_CONDITION_THRESHOLD,
        }
    }
}

impl EvalOptions {
    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }
}

/// Numerical health of one symmetrized sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalDiagnostics {
    /// `2ⁿ·n!`
    pub term_count: usize,
    pub max_term_magnitude: f64,
    /// `Σ|term| / |Σ term|`, infinite when the sum vanishes.
    pub condition: f64,
    pub precision: Precision,
}

/// A spectral parameter `ξ ∈ ℝⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectralPoint {
    xi: Vec<f64>,
}

fn distance_to_lattice(x: f64, period: f64) -> f64 {
    (x - period * (x / period).round()).abs()
}

impl SpectralPoint {
    pub fn new(xi: Vec<f64>) -> Self {
        SpectralPoint { xi }
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }

    /// `π > ξ₁ > ξ₂ > … > ξ_n > 0`.
    pub fn in_alcove(&self) -> bool {
        let ordered = self.xi.windows(2).all(|w| w[0] > w[1]);
        let bounded =
            self.xi.first().is_none_or(|&x| x < PI) && self.xi.last().is_none_or(|&x| x > 0.0);
        ordered && bounded
    }

    /// Distance to the nearest point where a denominator of some `C(εξ_σ)`
    /// vanishes: `ξ_j ∈ πℤ` or `ξ_j ± ξ_k ∈ 2πℤ`.
    pub fn wall_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for (j, &xj) in self.xi.iter().enumerate() {
            d = d.min(distance_to_lattice(xj, PI));
            for &xk in &self.xi[j + 1..] {
                d = d.min(distance_to_lattice(xj - xk, 2.0 * PI));
                d = d.min(distance_to_lattice(xj + xk, 2.0 * PI));
            }
        }
        d
    }

    pub fn is_generic(&self, margin: f64) -> bool {
        self.wall_distance() >= margin
    }

    pub fn require_generic(&self, margin: f64) -> Result<()> {
        if self.is_generic(margin) {
            Ok(())
        } else {
            Err(Error::NonGeneric {
                xi: self.xi.clone(),
                margin,
            })
        }
    }

    /// `x_j = e^{iξ_j}`.
    pub fn exponentials(&self) -> Vec<Complex64> {
        self.xi
            .iter()
            .map(|&x| Complex64::from_polar(1.0, x))
            .collect()
    }

    /// `εξ_σ`.
    pub fn signed_permuted(&self, w: &SignedPermutation) -> SpectralPoint {
        SpectralPoint::new(w.apply_real(&self.xi))
    }
}

impl From<Vec<f64>> for SpectralPoint {
    fn from(xi: Vec<f64>) -> Self {
        SpectralPoint::new(xi)
    }
}

/// Real scalar usable by the term evaluation.
pub(crate) trait Real: Float + Send + Sync + std::fmt::Debug + 'static {
    fn lift(x: f64) -> Self;
    fn lower(self) -> f64;
    /// Sum of terms, lowered to `f64`.
    fn sum_terms(terms: &[Complex<Self>]) -> Complex64;
}

impl Real for f64 {
    fn lift(x: f64) -> Self {
        x
    }

    fn lower(self) -> f64 {
        self
    }

    fn sum_terms(terms: &[Complex64]) -> Complex64 {
        terms.iter().copied().collect::<ComplexSum>().value()
    }
}

impl Real for TwoFloat {
    fn lift(x: f64) -> Self {
        TwoFloat::from(x)
    }

    fn lower(self) -> f64 {
        f64::from(self)
    }

    fn sum_terms(terms: &[Complex<Self>]) -> Complex64 {
        let zero = Complex::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
        let s = terms.iter().fold(zero, |acc, &t| acc + t);
        Complex64::new(f64::from(s.re), f64::from(s.im))
    }
}

fn lift_complex<T: Real>(z: Complex64) -> Complex<T> {
    Complex::new(T::lift(z.re), T::lift(z.im))
}

fn cpowi<T: Real>(z: Complex<T>, mut k: u32) -> Complex<T> {
    let mut base = z;
    let mut acc = Complex::new(T::one(), T::zero());
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

fn check_denominator<T: Real>(
    den: Complex<T>,
    cutoff: f64,
    name: impl FnOnce() -> String,
) -> Result<()> {
    let magnitude = den.norm_sqr().lower().sqrt();
    if magnitude < cutoff {
        Err(Error::Singular {
            factor: name(),
            magnitude,
        })
    } else {
        Ok(())
    }
}

/// `C` in the multiplicative variables `y_j = e^{iξ_j}`:
///
/// ```text
/// ∏_j (1 − a/y_j + c/y_j²)/(1 − 1/y_j²)
///   · ∏_{j<k} (1 − q y_k/y_j)/(1 − y_k/y_j) · (1 − q/(y_j y_k))/(1 − 1/(y_j y_k))
/// ```
fn coeff_c_generic<T: Real>(y: &[Complex<T>], p: &ModelParams, cutoff: f64) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let (q, a, c) = (T::lift(p.q), T::lift(p.a), T::lift(p.c));
    let mut acc = one;
    for (j, &yj) in y.iter().enumerate() {
        let inv = one / yj;
        let inv2 = inv * inv;
        let den = one - inv2;
        check_denominator(den, cutoff, || format!("1 - e^(-2i xi_{})", j + 1))?;
        acc = acc * (one - inv * a + inv2 * c) / den;
    }
    for j in 0..y.len() {
        for k in j + 1..y.len() {
            let ratio = y[k] / y[j];
            let den = one - ratio;
            check_denominator(den, cutoff, || {
                format!("1 - e^(-i(xi_{} - xi_{}))", j + 1, k + 1)
            })?;
            acc = acc * (one - ratio * q) / den;

            let prod = one / (y[j] * y[k]);
            let den = one - prod;
            check_denominator(den, cutoff, || {
                format!("1 - e^(-i(xi_{} + xi_{}))", j + 1, k + 1)
            })?;
            acc = acc * (one - prod * q) / den;
        }
    }
    Ok(acc)
}

/// `1 − e^{−iθ} = 2 sin²(θ/2) + i sin θ`, accurate for small `θ`.
fn one_minus_exp_neg_i(theta: f64) -> Complex64 {
    let h = (theta / 2.0).sin();
    Complex64::new(2.0 * h * h, theta.sin())
}

/// `C` evaluated from real angles; the vanishing denominators are formed
/// without cancellation so each term keeps full relative accuracy.
fn coeff_c_angles(theta: &[f64], p: &ModelParams, cutoff: f64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = one;
    for (j, &t) in theta.iter().enumerate() {
        let e1 = Complex64::from_polar(1.0, -t);
        let den = one_minus_exp_neg_i(2.0 * t);
        check_denominator(den, cutoff, || format!("1 - e^(-2i xi_{})", j + 1))?;
        acc *= (one - e1 * p.a + e1 * e1 * p.c) / den;
    }
    for j in 0..theta.len() {
        for k in j + 1..theta.len() {
            for (y, op) in [(theta[j] - theta[k], '-'), (theta[j] + theta[k], '+')] {
                let den = one_minus_exp_neg_i(y);
                check_denominator(den, cutoff, || {
                    format!("1 - e^(-i(xi_{} {op} xi_{}))", j + 1, k + 1)
                })?;
                acc *= (one - Complex64::from_polar(p.q, -y)) / den;
            }
        }
    }
    Ok(acc)
}

/// Precomputed `(C(εx_σ), εx_σ)` for every signed permutation.
#[derive(Debug, Clone)]
struct Terms<T> {
    n: usize,
    coeff: Vec<Complex<T>>,
    points: Vec<Complex<T>>,
}

impl Terms<f64> {
    fn build_angles(xi: &[f64], p: &ModelParams, cutoff: f64) -> Result<Self> {
        let n = xi.len();
        let perms = signed_permutations(n);
        let mut coeff = Vec::with_capacity(perms.len());
        let mut points = Vec::with_capacity(perms.len() * n);
        for w in perms {
            let theta = w.apply_real(xi);
            coeff.push(coeff_c_angles(&theta, p, cutoff)?);
            points.extend(theta.iter().map(|&t| Complex64::from_polar(1.0, t)));
        }
        Ok(Terms { n, coeff, points })
    }
}

impl<T: Real> Terms<T> {
    fn build(x: &[Complex64], p: &ModelParams, cutoff: f64) -> Result<Self> {
        let n = x.len();
        let lifted: Vec<Complex<T>> = x.iter().map(|&z| lift_complex(z)).collect();
        let one = Complex::new(T::one(), T::zero());
        let perms = signed_permutations(n);
        let mut coeff = Vec::with_capacity(perms.len());
        let mut points = Vec::with_capacity(perms.len() * n);
        let mut y = Vec::with_capacity(n);
        for w in perms {
            y.clear();
            for j in 0..n {
                let base = lifted[w.sigma[j]];
                y.push(if w.eps[j] > 0 { base } else { one / base });
            }
            coeff.push(coeff_c_generic(&y, p, cutoff)?);
            points.extend_from_slice(&y);
        }
        Ok(Terms { n, coeff, points })
    }

    fn eval(&self, lambda: &Partition, buf: &mut Vec<Complex<T>>) -> (Complex64, f64, f64) {
        buf.clear();
        let mut abs_sum = 0.0;
        let mut abs_max: f64 = 0.0;
        for (t, &c) in self.coeff.iter().enumerate() {
            let y = &self.points[t * self.n..(t + 1) * self.n];
            let mut term = c;
            for (j, &part) in lambda.parts().iter().enumerate() {
                term = term * cpowi(y[j], part);
            }
            let m = term.norm_sqr().lower().sqrt();
            abs_sum += m;
            abs_max = abs_max.max(m);
            buf.push(term);
        }
        (T::sum_terms(buf), abs_sum, abs_max)
    }
}

/// Evaluates `φ_ξ(λ)` for many `λ` at one spectral point, caching the
/// `2ⁿ·n!` expansion coefficients.
#[derive(Debug)]
pub struct HlEvaluator {
    params: ModelParams,
    x: Vec<Complex64>,
    opts: EvalOptions,
    standard: Option<Terms<f64>>,
    extended: OnceLock<Result<Terms<TwoFloat>>>,
}

impl HlEvaluator {
    /// At a real spectral point; rejects non-generic points.
    pub fn new(xi: &SpectralPoint, params: &ModelParams, opts: EvalOptions) -> Result<Self> {
        xi.require_generic(opts.genericity_margin)?;
        if xi.n() > MAX_PARTICLES {
            return Err(Error::InvalidParams(format!(
                "at most {MAX_PARTICLES} particles supported"
            )));
        }
        if opts.precision == Precision::Extended {
            return Self::at_x(&xi.exponentials(), params, opts);
        }
        Ok(HlEvaluator {
            params: *params,
            x: xi.exponentials(),
            opts,
            standard: Some(Terms::build_angles(xi.xi(), params, opts.singular_cutoff)?),
            extended: OnceLock::new(),
        })
    }

    /// At arbitrary nonzero `x ∈ ℂⁿ` (complex-extended `ξ`, `x_j = e^{iξ_j}`).
    pub fn at_x(x: &[Complex64], params: &ModelParams, opts: EvalOptions) -> Result<Self> {
        if x.len() > MAX_PARTICLES {
            return Err(Error::InvalidParams(format!(
                "at most {MAX_PARTICLES} particles supported"
            )));
        }
        let extended = OnceLock::new();
        let standard = if opts.precision == Precision::Extended {
            extended
                .set(Terms::build(x, params, opts.singular_cutoff))
                .expect("fresh cell");
            if let Some(Err(e)) = extended.get() {
                return Err(e.clone());
            }
            None
        } else {
            Some(Terms::build(x, params, opts.singular_cutoff)?)
        };
        Ok(HlEvaluator {
            params: *params,
            x: x.to_vec(),
            opts,
            standard,
            extended,
        })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `C(x)` itself (the identity term).
    pub fn coeff_c(&self) -> Result<Complex64> {
        match &self.standard {
            Some(t) => Ok(t.coeff[0]),
            None => {
                let t = self.extended_terms()?;
                Ok(Complex64::new(t.coeff[0].re.lower(), t.coeff[0].im.lower()))
            }
        }
    }

    fn extended_terms(&self) -> Result<&Terms<TwoFloat>> {
        self.extended
            .get_or_init(|| Terms::build(&self.x, &self.params, self.opts.singular_cutoff))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn diagnostics(
        &self,
        value: Complex64,
        abs_sum: f64,
        abs_max: f64,
        precision: Precision,
    ) -> EvalDiagnostics {
        let magnitude = value.norm();
        EvalDiagnostics {
            term_count: signed_permutations(self.n()).len(),
            max_term_magnitude: abs_max,
            condition: if magnitude > 0.0 {
                abs_sum / magnitude
            } else {
                f64::INFINITY
            },
            precision,
        }
    }

    /// `φ(λ)` with diagnostics.
    pub fn phi(&self, lambda: &Partition) -> Result<(Complex64, EvalDiagnostics)> {
        if lambda.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: lambda.len(),
            });
        }
        if let Some(terms) = &self.standard {
            let mut buf = Vec::with_capacity(terms.coeff.len());
            let (v, abs_sum, abs_max) = terms.eval(lambda, &mut buf);
            let diag = self.diagnostics(v, abs_sum, abs_max, Precision::Standard);
            if !(self.opts.precision == Precision::Auto
                && diag.condition > self.opts.extended_threshold)
            {
                return Ok((v, diag));
            }
        }
        let terms = self.extended_terms()?;
        let mut buf = Vec::with_capacity(terms.coeff.len());
        let (v, abs_sum, abs_max) = terms.eval(lambda, &mut buf);
        Ok((
            v,
            self.diagnostics(v, abs_sum, abs_max, Precision::Extended),
        ))
    }

    /// `φ(λ)` without diagnostics.
    pub fn value(&self, lambda: &Partition) -> Result<Complex64> {
        self.phi(lambda).map(|(v, _)| v)
    }
}

/// The expansion coefficient `C(ξ)` at a real point.
pub fn coeff_c(xi: &[f64], p: &ModelParams) -> Result<Complex64> {
    coeff_c_angles(xi, p, DEFAULT_SINGULAR_CUTOFF)
}

/// `C` at complex `x = e^{iξ}`.
pub fn coeff_c_at_x(x: &[Complex64], p: &ModelParams, cutoff: f64) -> Result<Complex64> {
    coeff_c_generic::<f64>(x, p, cutoff)
}

/// `φ_ξ(λ)` with default options.
pub fn phi(
    xi: &SpectralPoint,
    lambda: &Partition,
    p: &ModelParams,
) -> Result<(Complex64, EvalDiagnostics)> {
    phi_with(xi, lambda, p, EvalOptions::default())
}

pub fn phi_with(
    xi: &SpectralPoint,
    lambda: &Partition,
    p: &ModelParams,
    opts: EvalOptions,
) -> Result<(Complex64, EvalDiagnostics)> {
    check_dims(xi.n(), lambda)?;
    HlEvaluator::new(xi, p, opts)?.phi(lambda)
}

/// `φ` at complex `x` (complex-extended spectral parameter).
pub fn phi_at_x(
    x: &[Complex64],
    lambda: &Partition,
    p: &ModelParams,
    opts: EvalOptions,
) -> Result<(Complex64, EvalDiagnostics)> {
    check_dims(x.len(), lambda)?;
    HlEvaluator::at_x(x, p, opts)?.phi(lambda)
}

fn check_dims(n: usize, lambda: &Partition) -> Result<()> {
    if lambda.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: n,
            got: lambda.len(),
        })
    }
}

/// `E_n(ξ) = 2 Σ_j cos ξ_j`.
pub fn eigenvalue(xi: &[f64]) -> f64 {
    2.0 * xi.iter().map(|x| x.cos()).sum::<f64>()
}

/// `(c; q)_m = (1 − c)(1 − cq)⋯(1 − cq^{m−1})`.
pub fn pochhammer_q(c: f64, q: f64, m: u32) -> f64 {
    let mut acc = 1.0;
    let mut cq = c;
    for _ in 0..m {
        acc *= 1.0 - cq;
        cq *= q;
    }
    acc
}

/// `N(λ) = (c; q)_{m₀(λ)} ∏_ℓ [m_ℓ(λ)]!`.
pub fn norm_n(lambda: &Partition, p: &ModelParams) -> f64 {
    let parts = lambda.parts();
    let m0 = lambda.multiplicity(0) as u32;
    let mut acc = pochhammer_q(p.c, p.q, m0);
    let mut i = 0;
    while i < parts.len() {
        let run = parts[i..].iter().take_while(|&&x| x == parts[i]).count();
        acc *= q_factorial(run as u32, p.q);
        i += run;
    }
    acc
}

/// `Δ = 1/|C|²` from the reciprocal product, finite (and zero) on the walls.
pub(crate) fn weight_delta_unchecked(xi: &[f64], p: &ModelParams) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = 1.0;
    for (j, &xj) in xi.iter().enumerate() {
        let e1 = Complex64::from_polar(1.0, -xj);
        let e2 = e1 * e1;
        acc *= (one - e2).norm_sqr() / (one - e1 * p.a + e2 * p.c).norm_sqr();
        for &xk in &xi[j + 1..] {
            for y in [xj - xk, xj + xk] {
                let e = Complex64::from_polar(1.0, -y);
                acc *= (one - e).norm_sqr() / (one - e * p.q).norm_sqr();
            }
        }
    }
    acc
}

/// The orthogonality weight `Δ(ξ) = 1/|C(ξ)|²`.
pub fn weight_delta(xi: &SpectralPoint, p: &ModelParams) -> Result<f64> {
    xi.require_generic(DEFAULT_GENERICITY_MARGIN)?;
    Ok(weight_delta_unchecked(xi.xi(), p))
}

/// `τ_j = r q^{n−j}` for `j = 1..n` (returned 0-based).
pub fn tau_vector(p: &ModelParams, n: usize) -> Vec<Complex64> {
    let r = p.r();
    (0..n).map(|j| r * p.q.powi((n - 1 - j) as i32)).collect()
}

/// `N(0) = (c; q)_n [n]!`.
pub fn norm_zero(n: usize, p: &ModelParams) -> f64 {
    pochhammer_q(p.c, p.q, n as u32) * q_factorial(n as u32, p.q)
}

fn tau_power(tau: &[Complex64], lambda: &Partition) -> Complex64 {
    tau.iter()
        .zip(lambda.parts())
        .fold(Complex64::new(1.0, 0.0), |acc, (&t, &l)| acc * t.powu(l))
}

/// `P_λ = τ^λ φ_ξ(λ) / N(0)`, normalized so that `P_λ(τ) = 1`.
pub fn p_normalized(xi: &SpectralPoint, lambda: &Partition, p: &ModelParams) -> Result<Complex64> {
    check_dims(xi.n(), lambda)?;
    let eval = HlEvaluator::new(xi, p, EvalOptions::default())?;
    p_normalized_with(&eval, lambda)
}

/// `P_λ(x)` at complex `x`.
pub fn p_normalized_at_x(
    x: &[Complex64],
    lambda: &Partition,
    p: &ModelParams,
    opts: EvalOptions,
) -> Result<Complex64> {
    check_dims(x.len(), lambda)?;
    let eval = HlEvaluator::at_x(x, p, opts)?;
    p_normalized_with(&eval, lambda)
}

pub(crate) fn p_normalized_with(eval: &HlEvaluator, lambda: &Partition) -> Result<Complex64> {
    let n = eval.n();
    let tau = tau_vector(eval.params(), n);
    let phi = eval.value(lambda)?;
    Ok(tau_power(&tau, lambda) * phi / norm_zero(n, eval.params()))
}

pub(crate) fn q_int_c(m: usize, q: f64) -> Complex64 {
    Complex64::new(q_int(m as u32, q), 0.0)
}
