//! Identity and convergence checks, grouped into suites. Each check reports
//! its worst residual against a tolerance; the CLI and the acceptance tests
//! both run these.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    annihilate, apply_h_composed, apply_h_direct, apply_h_transformed, count_op, create, q_int_op,
};
use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::hall_littlewood::{
    eigenvalue, p_normalized_at_x, phi, pieri_residual, pieri_v_minus, pieri_v_minus_closed,
    pieri_v_plus, pieri_v_plus_closed, signed_permutations, tau_vector, weight_delta, EvalOptions,
    HlEvaluator, PieriForm, SpectralPoint,
};
use crate::params::ModelParams;
use crate::partition::{enumerate, Partition};
use crate::scattering::{
    psi, s_boundary, s_boundary_sqrt, s_bulk, s_bulk_sqrt, s_hat, s_hat_sqrt, wave_operator_probe,
    wave_packet, PsiMethod,
};
use crate::spectral::{
    band_eigenvalues, build_rule, evolve_times, fourier_roundtrip, gram_entries, gram_matrix,
    gram_offdiagonal_ratio, inner_product_n, one_particle_tridiagonal, sturm_count,
    truncated_hamiltonian, QuadMode, QuadratureRule,
};

/// Minimal wall distance of randomly sampled spectral points.
pub const SAMPLING_MARGIN: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Algebra,
    Eigen,
    Pieri,
    Principal,
    Gram,
    Modes,
    Roundtrip,
    PsiAgreement,
    Unimodularity,
    WeightInvariance,
    Dynamics,
    Probe,
    Spectrum,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Algebra,
        Suite::Eigen,
        Suite::Pieri,
        Suite::Principal,
        Suite::Gram,
        Suite::Modes,
        Suite::Roundtrip,
        Suite::PsiAgreement,
        Suite::Unimodularity,
        Suite::WeightInvariance,
        Suite::Dynamics,
        Suite::Probe,
        Suite::Spectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Eigen => "eigen",
            Suite::Pieri => "pieri",
            Suite::Principal => "principal",
            Suite::Gram => "gram",
            Suite::Modes => "modes",
            Suite::Roundtrip => "roundtrip",
            Suite::PsiAgreement => "psi-agreement",
            Suite::Unimodularity => "unimodularity",
            Suite::WeightInvariance => "weight-invariance",
            Suite::Dynamics => "dynamics",
            Suite::Probe => "probe",
            Suite::Spectrum => "spectrum",
        }
    }

    /// Whether the suite draws random spectral points (and so needs a seed).
    pub fn samples(self) -> bool {
        matches!(
            self,
            Suite::Eigen | Suite::Pieri | Suite::PsiAgreement | Suite::WeightInvariance
        )
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite {s:?}")))
    }
}

/// Tolerances of every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub algebra: f64,
    pub eigen: f64,
    pub pieri: f64,
    pub v_forms: f64,
    pub principal: f64,
    pub gram: f64,
    pub modes: f64,
    pub roundtrip: f64,
    pub psi: f64,
    pub unimodular: f64,
    pub weight: f64,
    pub evolve_identity: f64,
    pub unitarity: f64,
    pub generator: f64,
    pub band_margin: f64,
}

impl Tolerances {
    /// Defaults; the quadrature-based ones depend on the particle number.
    pub fn for_n(n: usize) -> Self {
        let (gram, roundtrip) = match n {
            0 | 1 => (1e-8, 1e-6),
            2 => (1e-6, 1e-4),
            _ => (1e-5, 1e-4),
        };
        Tolerances {
            algebra: 1e-13,
            eigen: 1e-9,
            pieri: 1e-9,
            v_forms: 1e-12,
            principal: 1e-9,
            gram,
            modes: gram,
            roundtrip,
            psi: 1e-10,
            unimodular: 1e-12,
            weight: 1e-12,
            evolve_identity: gram,
            unitarity: 1e-4,
            generator: 1e-5,
            band_margin: 0.05,
        }
    }
}

/// Points per axis used when none is given.
pub fn default_quad(n: usize) -> usize {
    match n {
        0 | 1 => 400,
        2 => 200,
        _ => 60,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub params: ModelParams,
    pub n: usize,
    /// Largest part `L` of the tested partitions (sites for `spectrum`).
    pub max_part: u32,
    pub samples: usize,
    pub seed: Option<u64>,
    pub quad: Option<usize>,
    pub quad_mode: Option<QuadMode>,
    pub t_list: Vec<f64>,
    pub tolerances: Tolerances,
}

impl VerifyConfig {
    pub fn new(params: ModelParams, n: usize, max_part: u32) -> Self {
        VerifyConfig {
            params,
            n,
            max_part,
            samples: 20,
            seed: None,
            quad: None,
            quad_mode: None,
            t_list: Vec::new(),
            tolerances: Tolerances::for_n(n),
        }
    }

    fn rng(&self, suite: Suite) -> Result<ChaCha8Rng> {
        self.seed.map(ChaCha8Rng::seed_from_u64).ok_or_else(|| {
            Error::InvalidParams(format!(
                "suite {} samples spectral points and needs a seed",
                suite.name()
            ))
        })
    }

    fn rule(&self, mode: Option<QuadMode>) -> Result<QuadratureRule> {
        let mode = mode
            .or(self.quad_mode)
            .unwrap_or_else(|| QuadMode::default_for(self.n));
        build_rule(
            self.n,
            self.quad.unwrap_or_else(|| default_quad(self.n)),
            mode,
        )
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Number of individual comparisons.
    pub count: usize,
}

impl Check {
    fn new(name: impl Into<String>, max_residual: f64, tolerance: f64, count: usize) -> Self {
        Check {
            name: name.into(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            count,
        }
    }
}

/// Running maximum of residuals.
#[derive(Default)]
struct Worst {
    max: f64,
    count: usize,
}

impl Worst {
    fn add(&mut self, r: f64) {
        // NaN must fail the check
        self.max = if r.is_nan() {
            f64::INFINITY
        } else {
            self.max.max(r)
        };
        self.count += 1;
    }

    fn check(self, name: &str, tol: f64) -> Check {
        Check::new(name, self.max, tol, self.count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs one suite.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    if cfg.n == 0 && !matches!(suite, Suite::Algebra) {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let checks = match suite {
        Suite::Algebra => algebra(cfg)?,
        Suite::Eigen => eigen(cfg)?,
        Suite::Pieri => pieri(cfg)?,
        Suite::Principal => principal(cfg)?,
        Suite::Gram => gram(cfg)?,
        Suite::Modes => modes(cfg)?,
        Suite::Roundtrip => roundtrip(cfg)?,
        Suite::PsiAgreement => psi_agreement(cfg)?,
        Suite::Unimodularity => unimodularity(cfg)?,
        Suite::WeightInvariance => weight_invariance(cfg)?,
        Suite::Dynamics => dynamics(cfg)?,
        Suite::Probe => probe(cfg)?,
        Suite::Spectrum => spectrum(cfg)?,
    };
    Ok(SuiteReport { suite, checks })
}

/// A generic point of the open alcove, at least [`SAMPLING_MARGIN`] from the walls.
pub fn random_alcove_point(rng: &mut impl Rng, n: usize) -> SpectralPoint {
    loop {
        let mut xi: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..PI)).collect();
        xi.sort_by(|a, b| b.total_cmp(a));
        let point = SpectralPoint::new(xi);
        if point.in_alcove() && point.is_generic(SAMPLING_MARGIN) {
            return point;
        }
    }
}

/// Parameter grid of `q × (r₁, r₂)` inside the orthogonality domain.
pub fn parameter_grid() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for q in [-0.6, 0.3, 0.8] {
        for (r1, r2) in [(0.2, 0.4), (-0.7, 0.5), (-0.9, -0.3)] {
            out.push(ModelParams::from_roots(q, r1, r2).expect("grid values are valid"));
        }
    }
    out
}

fn kets(n: usize, max_part: u32) -> Vec<FockVector> {
    enumerate(n, max_part)
        .into_iter()
        .map(FockVector::ket)
        .collect()
}

fn rel_diff(a: &FockVector, b: &FockVector) -> f64 {
    a.max_abs_diff(b) / a.max_abs().max(b.max_abs()).max(1.0)
}

fn algebra(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let tol = cfg.tolerances.algebra;
    let mut forms = Worst::default();
    for p in parameter_grid().iter().chain([&cfg.params]) {
        for m in 1..=cfg.n {
            for f in kets(m, cfg.max_part) {
                forms.add(rel_diff(&apply_h_direct(&f, p), &apply_h_composed(&f, p)));
            }
        }
    }

    let p = &cfg.params;
    let (mut commute, mut product, mut qcomm, mut local, mut adjoint) = (
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
    );
    let sites = 0..=cfg.max_part + 1;
    for m in 0..=cfg.n {
        for f in kets(m, cfg.max_part) {
            for l in sites.clone() {
                // β_l q^{N_l} = q^{N_l+1} β_l,  β*_l q^{N_l} = q^{N_l−1} β*_l
                commute.add(rel_diff(
                    &annihilate(l, &count_op(l, 0, &f, p)),
                    &count_op(l, 1, &annihilate(l, &f), p),
                ));
                commute.add(rel_diff(
                    &create(l, &count_op(l, 0, &f, p), p),
                    &count_op(l, -1, &create(l, &f, p), p),
                ));

                // β_l β*_l = [N_l+1](1 − c δ_l q^{N₀})
                let lhs = annihilate(l, &create(l, &f, p));
                let boundary = |g: &FockVector| {
                    if l == 0 {
                        g - &(p.c * &count_op(0, 0, g, p))
                    } else {
                        g.clone()
                    }
                };
                product.add(rel_diff(&lhs, &boundary(&q_int_op(l, 1, &f, p))));

                // β_l β*_l − q β*_l β_l = 1 − c δ_l q^{2N₀}
                let comm = &lhs - &(p.q * &create(l, &annihilate(l, &f), p));
                let rhs = if l == 0 {
                    &f - &(p.c * &count_op(0, 0, &count_op(0, 0, &f, p), p))
                } else {
                    f.clone()
                };
                qcomm.add(rel_diff(&comm, &rhs));

                for k in sites.clone().filter(|&k| k != l) {
                    let pairs: [(FockVector, FockVector); 6] = [
                        (
                            annihilate(l, &annihilate(k, &f)),
                            annihilate(k, &annihilate(l, &f)),
                        ),
                        (
                            create(l, &create(k, &f, p), p),
                            create(k, &create(l, &f, p), p),
                        ),
                        (
                            annihilate(l, &create(k, &f, p)),
                            create(k, &annihilate(l, &f), p),
                        ),
                        (
                            count_op(l, 0, &annihilate(k, &f), p),
                            annihilate(k, &count_op(l, 0, &f, p)),
                        ),
                        (
                            count_op(l, 0, &create(k, &f, p), p),
                            create(k, &count_op(l, 0, &f, p), p),
                        ),
                        (
                            count_op(l, 0, &count_op(k, 0, &f, p), p),
                            count_op(k, 0, &count_op(l, 0, &f, p), p),
                        ),
                    ];
                    for (a, b) in &pairs {
                        local.add(rel_diff(a, b));
                    }
                }
            }
        }
        // ⟨β*_l f, g⟩_{m+1} = ⟨f, β_l g⟩_m
        let upper = kets(m + 1, cfg.max_part);
        for f in kets(m, cfg.max_part) {
            for g in &upper {
                for l in sites.clone() {
                    let a = inner_product_n(&create(l, &f, p), g, p)?;
                    let b = inner_product_n(&f, &annihilate(l, g), p)?;
                    adjoint.add((a - b).norm() / a.norm().max(b.norm()).max(1.0));
                }
            }
        }
    }
    Ok(vec![
        forms.check("h-direct-vs-composed", tol),
        commute.check("count-commutation", tol),
        product.check("annihilate-create-product", tol),
        qcomm.check("q-commutator", tol),
        local.check("ultralocality", tol),
        adjoint.check("adjointness", tol),
    ])
}

fn eigen(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = cfg.rng(Suite::Eigen)?;
    let p = &cfg.params;
    let mut worst = Worst::default();
    for _ in 0..cfg.samples {
        let xi = random_alcove_point(&mut rng, cfg.n);
        let eval = HlEvaluator::new(&xi, p, EvalOptions::default())?;
        let energy = eigenvalue(xi.xi());
        let mut f = FockVector::zero(cfg.n as i64);
        for lambda in enumerate(cfg.n, cfg.max_part + 1) {
            let v = eval.value(&lambda)?;
            f.add_at(lambda, v);
        }
        let hf = apply_h_direct(&f, p);
        let abs_h = apply_h_direct(
            &f.map_amplitudes(|_, v| Complex64::new(v.norm(), 0.0)),
            &abs_params(p),
        );
        for lambda in enumerate(cfg.n, cfg.max_part) {
            let v = f.get(&lambda);
            let scale = abs_h.get(&lambda).re + (energy * v).norm();
            worst.add((hf.get(&lambda) - energy * v).norm() / scale.max(f64::MIN_POSITIVE));
        }
    }
    Ok(vec![
        worst.check("eigenvalue-equation", cfg.tolerances.eigen)
    ])
}

/// Parameters whose `H_q` coefficients bound those of `p` in modulus, for
/// term-magnitude scales. Only valid as a scale, not as a model.
fn abs_params(p: &ModelParams) -> ModelParams {
    ModelParams {
        q: p.q,
        a: p.a.abs(),
        c: -p.c.abs(),
    }
}

fn pieri(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = cfg.rng(Suite::Pieri)?;
    let p = &cfg.params;
    let (mut full, mut compact, mut bridge, mut vforms) = (
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
    );
    for m in 1..=cfg.n {
        for lambda in enumerate(m, cfg.max_part) {
            for j in 0..m {
                if lambda.can_raise(j) {
                    let (a, b) = (
                        pieri_v_plus(&lambda, j, p)?,
                        pieri_v_plus_closed(&lambda, j, p)?,
                    );
                    vforms.add((a - b).norm() / a.norm().max(1.0));
                }
                if lambda.can_lower(j) {
                    let (a, b) = (
                        pieri_v_minus(&lambda, j, p)?,
                        pieri_v_minus_closed(&lambda, j, p)?,
                    );
                    vforms.add((a - b).norm() / a.norm().max(1.0));
                }
            }
        }
        for _ in 0..cfg.samples {
            let xi = random_alcove_point(&mut rng, m);
            for lambda in enumerate(m, cfg.max_part) {
                let a = pieri_residual(&xi, &lambda, p, PieriForm::Full)?;
                let b = pieri_residual(&xi, &lambda, p, PieriForm::Compact)?;
                full.add(a.relative);
                compact.add(b.relative);
                bridge.add(if b.bridging_ok {
                    0.0
                } else {
                    b.bridging_residual
                });
            }
        }
    }
    let tol = cfg.tolerances.pieri;
    Ok(vec![
        full.check("pieri-full", tol),
        compact.check("pieri-compact", tol),
        bridge.check("bridging-identity", 0.0),
        vforms.check("v-product-vs-closed", cfg.tolerances.v_forms),
    ])
}

fn principal(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let mut worst = Worst::default();
    for m in 1..=cfg.n {
        let tau = tau_vector(p, m);
        if tau.iter().any(|t| t.norm() == 0.0) {
            return Err(Error::InvalidParams(
                "principal specialization needs r ≠ 0".into(),
            ));
        }
        for lambda in enumerate(m, cfg.max_part) {
            let v = p_normalized_at_x(&tau, &lambda, p, EvalOptions::default())?;
            worst.add((v - 1.0).norm());
        }
    }
    Ok(vec![worst.check(
        "principal-specialization",
        cfg.tolerances.principal,
    )])
}

fn gram_error(
    cfg: &VerifyConfig,
    rule: &QuadratureRule,
) -> Result<(f64, f64, usize, nalgebra::DMatrix<Complex64>)> {
    let lambdas = enumerate(cfg.n, cfg.max_part);
    let g = gram_matrix(&lambdas, rule, &cfg.params)?;
    let err = gram_entries(&lambdas, &g, &cfg.params)
        .iter()
        .map(|e| e.abs_error)
        .fold(0.0, f64::max);
    Ok((err, gram_offdiagonal_ratio(&g), g.len(), g))
}

fn gram(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    cfg.params.require_orthogonality_domain()?;
    let (err, ratio, count, _) = gram_error(cfg, &cfg.rule(None)?)?;
    let tol = cfg.tolerances.gram;
    Ok(vec![
        Check::new("gram-vs-norms", err, tol, count),
        Check::new("gram-offdiagonal-ratio", ratio, tol, count),
    ])
}

fn modes(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    cfg.params.require_orthogonality_domain()?;
    let (ea, _, count, a) = gram_error(cfg, &cfg.rule(Some(QuadMode::Alcove))?)?;
    let (eb, _, _, b) = gram_error(cfg, &cfg.rule(Some(QuadMode::FullCube))?)?;
    let diff = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let tol = cfg.tolerances.modes;
    Ok(vec![
        Check::new("alcove-vs-full-cube", diff, tol, count),
        Check::new("alcove-gram-vs-norms", ea, tol, count),
        Check::new("full-cube-gram-vs-norms", eb, tol, count),
    ])
}

fn roundtrip(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    cfg.params.require_orthogonality_domain()?;
    let rule = cfg.rule(None)?;
    let window = enumerate(cfg.n, cfg.max_part + 2);
    let mut worst = Worst::default();
    for lambda in enumerate(cfg.n, cfg.max_part) {
        let f = FockVector::ket(lambda);
        worst.add(fourier_roundtrip(&f, &window, &rule, &cfg.params)?.max_abs_diff(&f));
    }
    Ok(vec![
        worst.check("fourier-roundtrip", cfg.tolerances.roundtrip)
    ])
}

fn psi_agreement(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = cfg.rng(Suite::PsiAgreement)?;
    let p = &cfg.params;
    let (mut agree, mut modulus) = (Worst::default(), Worst::default());
    for m in 1..=cfg.n {
        for _ in 0..cfg.samples {
            let xi = random_alcove_point(&mut rng, m);
            let delta = weight_delta(&xi, p)?;
            for lambda in enumerate(m, cfg.max_part) {
                let a = psi(&xi, &lambda, p, PsiMethod::Renormalized)?;
                let b = psi(&xi, &lambda, p, PsiMethod::SignSum)?;
                let scale = a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
                agree.add((a - b).norm() / scale);
                let phi = phi(&xi, &lambda, p)?.0;
                let expected = delta * phi.norm_sqr() / crate::hall_littlewood::norm_n(&lambda, p);
                modulus.add((a.norm_sqr() - expected).abs() / expected.max(f64::MIN_POSITIVE));
            }
        }
    }
    Ok(vec![
        agree.check("psi-two-method-agreement", cfg.tolerances.psi),
        modulus.check("psi-modulus", cfg.tolerances.psi),
    ])
}

fn unimodularity(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let tol = cfg.tolerances.unimodular;
    let (mut modulus, mut branch, mut symmetry, mut shat) = (
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
    );
    let grid: Vec<f64> = (0..=720)
        .map(|k| -PI + 2.0 * PI * k as f64 / 720.0)
        .collect();
    for &x in &grid {
        for (s, root, s_neg) in [
            (s_bulk(x, p)?, s_bulk_sqrt(x, p)?, s_bulk(-x, p)?),
            (
                s_boundary(x, p)?,
                s_boundary_sqrt(x, p)?,
                s_boundary(-x, p)?,
            ),
        ] {
            modulus.add((s.norm() - 1.0).abs());
            branch.add((root * root - s).norm());
            symmetry.add((s_neg - s.conj()).norm().max((s_neg - s.inv()).norm()));
        }
    }
    // Ŝ on a tensor grid in n dimensions (coarser for larger n)
    let per_axis = match cfg.n {
        1 => 721,
        2 => 41,
        3 => 13,
        _ => 5,
    };
    let axis: Vec<f64> = (0..per_axis)
        .map(|k| -PI + 2.0 * PI * (k as f64 + 0.5) / per_axis as f64)
        .collect();
    let mut idx = vec![0usize; cfg.n];
    'grid: loop {
        let xi: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
        let s = s_hat(&xi, p)?;
        let r = s_hat_sqrt(&xi, p)?;
        shat.add((s.norm() - 1.0).abs().max((r * r - s).norm()));
        for k in (0..cfg.n).rev() {
            idx[k] += 1;
            if idx[k] < per_axis {
                continue 'grid;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(vec![
        modulus.check("phase-modulus", tol),
        branch.check("square-root-branch", tol),
        symmetry.check("phase-reflection", tol),
        shat.check("s-hat-modulus-and-root", tol),
    ])
}

fn weight_invariance(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = cfg.rng(Suite::WeightInvariance)?;
    let p = &cfg.params;
    let (mut delta, mut phi_inv) = (Worst::default(), Worst::default());
    for _ in 0..cfg.samples {
        let xi = random_alcove_point(&mut rng, cfg.n);
        let base = weight_delta(&xi, p)?;
        let lambda = Partition::new((0..cfg.n as u32).map(|k| k.min(cfg.max_part)).collect());
        let phi0 = phi(&xi, &lambda, p)?;
        for w in signed_permutations(cfg.n) {
            let moved = xi.signed_permuted(w);
            delta.add((weight_delta(&moved, p)? - base).abs() / base);
            let v = phi(&moved, &lambda, p)?.0;
            phi_inv.add((v - phi0.0).norm() / (phi0.0.norm() * phi0.1.condition.max(1.0)));
        }
    }
    let tol = cfg.tolerances.weight;
    Ok(vec![
        delta.check("weight-w-invariance", tol),
        phi_inv.check("phi-w-invariance", tol),
    ])
}

/// A fixed test vector with several complex amplitudes on parts `≤ max_part`.
pub fn dynamics_vector(n: usize, max_part: u32) -> FockVector {
    let mut f = FockVector::zero(n as i64);
    for (k, lambda) in enumerate(n, max_part.min(3))
        .into_iter()
        .enumerate()
        .take(4)
    {
        let k = k as f64;
        f.add_at(lambda, Complex64::new(1.0 / (1.0 + k), 0.3 * k - 0.2));
    }
    f.scale(Complex64::new(1.0 / f.norm_sqr().sqrt(), 0.0))
}

fn dynamics(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let rule = cfg.rule(None)?;
    let f = dynamics_vector(cfg.n, cfg.max_part);
    let t_list = if cfg.t_list.is_empty() {
        vec![1.0, 5.0, 10.0]
    } else {
        cfg.t_list.clone()
    };
    let tmax = t_list.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let window = enumerate(cfg.n, f.max_part() + (2.5 * tmax).ceil() as u32 + 20);
    let tol = &cfg.tolerances;

    let h = 1e-4;
    let mut times = vec![0.0, h, -h];
    times.extend(&t_list);
    let states = evolve_times(&f, &times, &window, &rule, p)?;
    let identity = Check::new(
        "evolve-identity",
        states[0].state.max_abs_diff(&f),
        tol.evolve_identity,
        window.len(),
    );

    let mut unitary = Worst::default();
    for e in &states[3..] {
        if let Some(w) = &e.warning {
            return Err(Error::InvalidParams(w.clone()));
        }
        unitary.add((e.state.norm_sqr().sqrt() - f.norm_sqr().sqrt()).abs());
    }

    let (plus, minus) = (&states[1].state, &states[2].state);
    let hf = apply_h_transformed(&f, p)?;
    let mut generator = Worst::default();
    for lambda in &window {
        let d = (plus.get(lambda) - minus.get(lambda)) / (2.0 * h);
        generator.add((d - Complex64::new(0.0, 1.0) * hf.get(lambda)).norm());
    }
    Ok(vec![
        identity,
        unitary.check("norm-conservation", tol.unitarity),
        generator.check("generator", tol.generator),
    ])
}

/// The default probe packet: spectral centre `ξ₀ = 1.2`, moving towards
/// the boundary from site 10.
pub fn probe_packet() -> FockVector {
    wave_packet(10.0, 3.0, -1.2, 40)
}

fn probe(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    if cfg.n != 1 {
        return Err(Error::InvalidParams(
            "the probe suite uses a one-particle packet (n = 1)".into(),
        ));
    }
    let rule = build_rule(1, cfg.quad.unwrap_or(1000), QuadMode::Alcove)?;
    let t_list = if cfg.t_list.is_empty() {
        vec![5.0, 10.0, 20.0, 40.0]
    } else {
        cfg.t_list.clone()
    };
    let report = wave_operator_probe(&probe_packet(), &t_list, &rule, &cfg.params)?;
    // largest ratio d(t_{k+1}) / d(t_k); strictly decreasing iff < 1
    let ratio = report
        .rows
        .windows(2)
        .map(|w| w[1].distance / w[0].distance)
        .fold(
            0.0,
            |m: f64, r| if r.is_nan() { f64::INFINITY } else { m.max(r) },
        );
    let mut decay = Check::new(
        "distance-strictly-decreasing",
        ratio,
        1.0,
        report.rows.len(),
    );
    decay.pass = ratio < 1.0;
    let leak = report.leakage.iter().copied().fold(0.0, f64::max);
    Ok(vec![
        decay,
        Check::new("window-leakage", leak, 1e-10, report.rows.len()),
    ])
}

fn spectrum(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let p = &cfg.params;
    p.require_orthogonality_domain()?;
    let band = 2.0 * cfg.n as f64;
    let (eigs, sturm) = if cfg.n == 1 {
        let t = one_particle_tridiagonal(cfg.max_part as usize, p)?;
        let eigs = band_eigenvalues(&t.to_dense());
        let lo = band + cfg.tolerances.band_margin;
        let dense_inside = eigs.iter().filter(|&&e| e.abs() <= lo).count();
        let sturm_inside = sturm_count(&t, lo) - sturm_count(&t, -lo);
        (
            eigs,
            Some((dense_inside as f64 - sturm_inside as f64).abs()),
        )
    } else {
        (
            band_eigenvalues(&truncated_hamiltonian(cfg.n, cfg.max_part, p)?.1),
            None,
        )
    };
    let excess = eigs.iter().map(|e| e.abs() - band).fold(0.0, f64::max);
    let mut out = vec![Check::new(
        "band-containment",
        excess,
        cfg.tolerances.band_margin,
        eigs.len(),
    )];
    if let Some(d) = sturm {
        out.push(Check::new("sturm-count-agreement", d, 0.0, eigs.len()));
    }
    Ok(out)
}
