use serde::Serialize;
use serde_json::{json, Value};

use qboson_core::hall_littlewood::{coeff_c, eigenvalue, norm_n, tau_vector, weight_delta};
use qboson_core::partition::enumerate;
use qboson_core::scattering::{
    psi, s_boundary, s_boundary_sqrt, s_bulk, s_bulk_sqrt, s_hat, s_hat_sqrt, wave_operator_probe,
    wave_operator_probe_window, wave_packet,
};
use qboson_core::spectral::{build_rule, gram_entries, gram_matrix, QuadMode};
use qboson_core::verify::{default_quad, run_suite, Suite, Tolerances, VerifyConfig};
use qboson_core::{
    Complex64, EvalOptions, FockVector, HlEvaluator, ModelParams, PsiMethod, SpectralPoint,
};

use crate::args::{Common, EvalKind, Format, PsiMethodArg, SuiteArg, TolArgs};
use crate::report::{csv_rows, CheckOut, Failure, Output, Report};

#[derive(Serialize)]
struct ConfigEcho<'a> {
    q: f64,
    a: f64,
    c: f64,
    r1: Option<f64>,
    r2: Option<f64>,
    n: Option<usize>,
    #[serde(rename = "L")]
    max_part: u32,
    xi: Option<&'a [f64]>,
    lambda: Option<&'a [u32]>,
    x: Option<f64>,
    t: Option<&'a [f64]>,
    quad: Option<usize>,
    quad_mode: Option<QuadMode>,
    precision: qboson_core::hall_littlewood::Precision,
    seed: Option<u64>,
    format: &'static str,
}

fn echo(common: &Common, p: &ModelParams, extra: Value) -> Value {
    let roots = p.roots();
    let config = ConfigEcho {
        q: p.q,
        a: p.a,
        c: p.c,
        r1: common.r1.or(roots.map(|r| r.0)),
        r2: common.r2.or(roots.map(|r| r.1)),
        n: common.particles().ok().flatten(),
        max_part: common.max_part,
        xi: common.xi.as_deref(),
        lambda: common.lambda.as_deref(),
        x: common.x,
        t: common.t.as_deref(),
        quad: common.quad,
        quad_mode: common.quad_mode.map(Into::into),
        precision: common.precision.into(),
        seed: common.seed,
        format: match common.format {
            Format::Json => "json",
            Format::Csv => "csv",
        },
    };
    let mut v = serde_json::to_value(config).expect("config serializes");
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.extend(more);
    }
    v
}

fn cx(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

#[derive(Serialize)]
struct ValueRow {
    name: String,
    re: f64,
    im: f64,
}

fn row(name: impl Into<String>, z: Complex64) -> ValueRow {
    ValueRow {
        name: name.into(),
        re: z.re,
        im: z.im,
    }
}

fn point(common: &Common) -> Result<SpectralPoint, Failure> {
    Ok(SpectralPoint::new(common.require_xi()?.to_vec()))
}

fn require_x(common: &Common) -> Result<f64, Failure> {
    common
        .x
        .ok_or_else(|| Failure::usage("this quantity needs --x"))
}

pub fn eval(kind: EvalKind, method: PsiMethodArg, common: &Common) -> Result<Output, Failure> {
    let p = common.params()?;
    common.particles()?;
    let opts = EvalOptions {
        precision: common.precision.into(),
        ..EvalOptions::default()
    };
    let real = |v: f64| {
        (
            json!({ "value": v }),
            vec![row("value", Complex64::new(v, 0.0))],
        )
    };
    let (result, rows) = match kind {
        EvalKind::Phi => {
            let (xi, lambda) = (point(common)?, common.require_lambda()?);
            let (v, d) = HlEvaluator::new(&xi, &p, opts)?.phi(&lambda)?;
            (
                json!({ "value": cx(v), "diagnostics": d }),
                vec![row("value", v)],
            )
        }
        EvalKind::Psi => {
            let (xi, lambda) = (point(common)?, common.require_lambda()?);
            let m = match method {
                PsiMethodArg::Renormalized => PsiMethod::Renormalized,
                PsiMethodArg::SignSum => PsiMethod::SignSum,
            };
            let v = psi(&xi, &lambda, &p, m)?;
            (
                json!({ "value": cx(v), "method": m }),
                vec![row("value", v)],
            )
        }
        EvalKind::C => {
            let xi = point(common)?;
            xi.require_generic(opts.genericity_margin)?;
            let v = coeff_c(xi.xi(), &p)?;
            (json!({ "value": cx(v) }), vec![row("value", v)])
        }
        EvalKind::Delta => real(weight_delta(&point(common)?, &p)?),
        EvalKind::N => real(norm_n(&common.require_lambda()?, &p)),
        EvalKind::E => real(eigenvalue(common.require_xi()?)),
        EvalKind::Tau => {
            let n = common
                .particles()?
                .ok_or_else(|| Failure::usage("tau needs --n"))?;
            let tau = tau_vector(&p, n);
            let rows = tau
                .iter()
                .enumerate()
                .map(|(j, &z)| row(format!("tau_{}", j + 1), z))
                .collect();
            (
                json!({ "value": tau.into_iter().map(cx).collect::<Vec<_>>() }),
                rows,
            )
        }
        EvalKind::Shat => {
            let xi = common.require_xi()?;
            let (v, r) = (s_hat(xi, &p)?, s_hat_sqrt(xi, &p)?);
            (
                json!({ "value": cx(v), "sqrt": cx(r) }),
                vec![row("value", v), row("sqrt", r)],
            )
        }
        EvalKind::S | EvalKind::S0 => {
            let x = require_x(common)?;
            let (v, r) = if kind == EvalKind::S {
                (s_bulk(x, &p)?, s_bulk_sqrt(x, &p)?)
            } else {
                (s_boundary(x, &p)?, s_boundary_sqrt(x, &p)?)
            };
            (
                json!({ "value": cx(v), "sqrt": cx(r) }),
                vec![row("value", v), row("sqrt", r)],
            )
        }
    };
    let report = Report {
        command: "eval".into(),
        config: echo(common, &p, json!({ "kind": kind })),
        result,
        checks: Vec::new(),
        runtime_ms: 0,
    };
    Ok(Output {
        report,
        csv: Some(csv_rows(&rows)),
    })
}

pub fn verify(
    suite: SuiteArg,
    samples: usize,
    tol: &TolArgs,
    common: &Common,
) -> Result<Output, Failure> {
    let p = common.params()?;
    let suite: Suite = suite.into();
    let n = common.particles()?.unwrap_or(1);
    if suite.samples() && common.seed.is_none() {
        return Err(Failure::usage(format!(
            "suite {} samples random points and needs --seed",
            suite.name()
        )));
    }
    let mut cfg = VerifyConfig::new(p, n, common.max_part);
    cfg.samples = samples;
    cfg.seed = common.seed;
    cfg.quad = common.quad;
    cfg.quad_mode = common.quad_mode.map(Into::into);
    cfg.t_list = common.t.clone().unwrap_or_default();
    cfg.tolerances = tol.apply(Tolerances::for_n(n));

    let report = run_suite(suite, &cfg)?;
    let checks: Vec<CheckOut> = report.checks.iter().map(CheckOut::from).collect();
    let mut result = json!({ "suite": suite.name(), "pass": report.pass() });
    let mut csv = csv_rows(&checks);
    if suite == Suite::Gram {
        let rule = build_rule(
            n,
            cfg.quad.unwrap_or_else(|| default_quad(n)),
            cfg.quad_mode.unwrap_or(QuadMode::default_for(n)),
        )?;
        let lambdas = enumerate(n, common.max_part);
        let entries = gram_entries(&lambdas, &gram_matrix(&lambdas, &rule, &p)?, &p);
        csv = csv_rows(&entries);
        result["partitions"] = json!(lambdas
            .iter()
            .map(|l| l.parts().to_vec())
            .collect::<Vec<_>>());
        result["entries"] = serde_json::to_value(&entries).expect("entries serialize");
    }
    let extra = json!({ "suite": suite.name(), "samples": samples, "tolerances": cfg.tolerances });
    let report = Report {
        command: "verify".into(),
        config: echo(common, &p, extra),
        result,
        checks,
        runtime_ms: 0,
    };
    Ok(Output {
        report,
        csv: Some(csv),
    })
}

pub struct PacketArgs {
    pub center: f64,
    pub width: f64,
    pub xi0: f64,
    pub cutoff: u32,
    pub window: Option<u32>,
}

pub fn scatter(packet: &PacketArgs, common: &Common) -> Result<Output, Failure> {
    let p = common.params()?;
    p.require_orthogonality_domain()?;
    let (f, n, source) = match common.lambda {
        Some(_) => {
            let lambda = common.require_lambda()?;
            let n = lambda.len();
            (FockVector::ket(lambda), n, json!("ket"))
        }
        None => {
            if common.particles()?.is_some_and(|n| n != 1) {
                return Err(Failure::usage(
                    "the wave packet has one particle; give --lambda for n > 1",
                ));
            }
            if packet.width <= 0.0 {
                return Err(Failure::usage("--width must be positive"));
            }
            let f = wave_packet(packet.center, packet.width, packet.xi0, packet.cutoff);
            (
                f,
                1,
                json!({ "center": packet.center, "width": packet.width, "xi0": packet.xi0, "cutoff": packet.cutoff }),
            )
        }
    };
    let t_list = common
        .t
        .clone()
        .unwrap_or_else(|| vec![5.0, 10.0, 20.0, 40.0]);
    let quad = common
        .quad
        .unwrap_or(if n == 1 { 1000 } else { default_quad(n) });
    let mode = common
        .quad_mode
        .map(Into::into)
        .unwrap_or(QuadMode::default_for(n));
    let rule = build_rule(n, quad, mode)?;
    let probe = match packet.window {
        Some(w) => wave_operator_probe_window(&f, &t_list, w, &rule, &p)?,
        None => wave_operator_probe(&f, &t_list, &rule, &p)?,
    };
    let decreasing = probe.rows.windows(2).all(|w| w[1].distance < w[0].distance);
    let result = json!({
        "rows": probe.rows,
        "leakage": probe.leakage,
        "warnings": probe.warnings,
        "strictly_decreasing": decreasing,
    });
    let extra = json!({ "initial_state": source, "t": t_list, "quad": quad, "quad_mode": mode });
    let csv = csv_rows(&probe.rows);
    let report = Report {
        command: "scatter".into(),
        config: echo(common, &p, extra),
        result,
        checks: Vec::new(),
        runtime_ms: 0,
    };
    Ok(Output {
        report,
        csv: Some(csv),
    })
}
