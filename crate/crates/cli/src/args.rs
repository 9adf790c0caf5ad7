use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qboson_core::hall_littlewood::Precision;
use qboson_core::spectral::QuadMode;
use qboson_core::verify::{Suite, Tolerances};
use qboson_core::{ModelParams, Partition};

use crate::report::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "qboson",
    version,
    about = "Semi-infinite q-boson system with boundary interaction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Evaluate a single quantity.
    Eval {
        #[arg(value_enum)]
        kind: EvalKind,
        /// Sign-sum or renormalized evaluation for `psi`.
        #[arg(long, value_enum, default_value_t = PsiMethodArg::SignSum)]
        method: PsiMethodArg,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Random spectral points per sampling suite.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Wave-operator decay table for a one-particle packet or a ket.
    Scatter {
        /// Packet centre (site).
        #[arg(long, default_value_t = 10.0)]
        center: f64,
        #[arg(long, default_value_t = 3.0)]
        width: f64,
        /// Spectral centre; negative values move towards the boundary.
        #[arg(long, default_value_t = -1.2, allow_hyphen_values = true)]
        xi0: f64,
        #[arg(long, default_value_t = 40)]
        cutoff: u32,
        /// Sites of the evolution window (default: from the ballistic speed).
        #[arg(long)]
        window: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
}

/// Flags shared by all commands.
#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r2: Option<f64>,
    /// Particle number.
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest part of the tested partitions.
    #[arg(long = "L", default_value_t = 4)]
    pub max_part: u32,
    /// Spectral point, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi: Option<Vec<f64>>,
    /// Partition, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<u32>>,
    /// Argument of the phases `s` and `s0`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Times, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Option<Vec<f64>>,
    /// Gauss-Legendre points per axis.
    #[arg(long)]
    pub quad: Option<usize>,
    #[arg(long, value_enum)]
    pub quad_mode: Option<QuadModeArg>,
    #[arg(long, value_enum, default_value_t = PrecisionArg::Standard)]
    pub precision: PrecisionArg,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Tolerance overrides; unset ones keep the defaults for `n`.
#[derive(Args, Debug, Clone, Default)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_algebra: Option<f64>,
    #[arg(long)]
    pub tol_eigen: Option<f64>,
    #[arg(long)]
    pub tol_pieri: Option<f64>,
    #[arg(long)]
    pub tol_v_forms: Option<f64>,
    #[arg(long)]
    pub tol_principal: Option<f64>,
    #[arg(long)]
    pub tol_gram: Option<f64>,
    #[arg(long)]
    pub tol_modes: Option<f64>,
    #[arg(long)]
    pub tol_roundtrip: Option<f64>,
    #[arg(long)]
    pub tol_psi: Option<f64>,
    #[arg(long)]
    pub tol_unimodular: Option<f64>,
    #[arg(long)]
    pub tol_weight: Option<f64>,
    #[arg(long)]
    pub tol_evolve: Option<f64>,
    #[arg(long)]
    pub tol_unitarity: Option<f64>,
    #[arg(long)]
    pub tol_generator: Option<f64>,
    #[arg(long)]
    pub tol_band: Option<f64>,
}

impl TolArgs {
    pub fn apply(&self, mut t: Tolerances) -> Tolerances {
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut t.algebra, self.tol_algebra);
        set(&mut t.eigen, self.tol_eigen);
        set(&mut t.pieri, self.tol_pieri);
        set(&mut t.v_forms, self.tol_v_forms);
        set(&mut t.principal, self.tol_principal);
        set(&mut t.gram, self.tol_gram);
        set(&mut t.modes, self.tol_modes);
        set(&mut t.roundtrip, self.tol_roundtrip);
        set(&mut t.psi, self.tol_psi);
        set(&mut t.unimodular, self.tol_unimodular);
        set(&mut t.weight, self.tol_weight);
        set(&mut t.evolve_identity, self.tol_evolve);
        set(&mut t.unitarity, self.tol_unitarity);
        set(&mut t.generator, self.tol_generator);
        set(&mut t.band_margin, self.tol_band);
        t
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EvalKind {
    #[value(name = "phi")]
    Phi,
    #[value(name = "psi")]
    Psi,
    #[value(name = "C")]
    C,
    #[value(name = "Delta")]
    Delta,
    #[value(name = "N")]
    N,
    #[value(name = "E")]
    E,
    #[value(name = "tau")]
    Tau,
    #[value(name = "Shat")]
    Shat,
    #[value(name = "s")]
    S,
    #[value(name = "s0")]
    S0,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteArg {
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

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Algebra => Suite::Algebra,
            SuiteArg::Eigen => Suite::Eigen,
            SuiteArg::Pieri => Suite::Pieri,
            SuiteArg::Principal => Suite::Principal,
            SuiteArg::Gram => Suite::Gram,
            SuiteArg::Modes => Suite::Modes,
            SuiteArg::Roundtrip => Suite::Roundtrip,
            SuiteArg::PsiAgreement => Suite::PsiAgreement,
            SuiteArg::Unimodularity => Suite::Unimodularity,
            SuiteArg::WeightInvariance => Suite::WeightInvariance,
            SuiteArg::Dynamics => Suite::Dynamics,
            SuiteArg::Probe => Suite::Probe,
            SuiteArg::Spectrum => Suite::Spectrum,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadModeArg {
    Alcove,
    FullCube,
}

impl From<QuadModeArg> for QuadMode {
    fn from(m: QuadModeArg) -> Self {
        match m {
            QuadModeArg::Alcove => QuadMode::Alcove,
            QuadModeArg::FullCube => QuadMode::FullCube,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionArg {
    Standard,
    Extended,
    Auto,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Standard => Precision::Standard,
            PrecisionArg::Extended => Precision::Extended,
            PrecisionArg::Auto => Precision::Auto,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiMethodArg {
    Renormalized,
    SignSum,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Common {
    /// `(a, c)` or `(r₁, r₂)`, never both; defaults to `r₁ = 0.2`, `r₂ = 0.4`.
    pub fn params(&self) -> Result<ModelParams, Failure> {
        let direct = self.a.is_some() || self.c.is_some();
        let roots = self.r1.is_some() || self.r2.is_some();
        let p = match (direct, roots) {
            (true, true) => {
                return Err(Failure::usage("give either --a/--c or --r1/--r2, not both"))
            }
            (true, false) => match (self.a, self.c) {
                (Some(a), Some(c)) => ModelParams::new(self.q, a, c),
                _ => return Err(Failure::usage("--a and --c must be given together")),
            },
            (false, true) => match (self.r1, self.r2) {
                (Some(r1), Some(r2)) => ModelParams::from_roots(self.q, r1, r2),
                _ => return Err(Failure::usage("--r1 and --r2 must be given together")),
            },
            (false, false) => ModelParams::from_roots(self.q, 0.2, 0.4),
        };
        p.map_err(Failure::domain)
    }

    /// Particle number from `--n`, or else from `--xi` / `--lambda`.
    pub fn particles(&self) -> Result<Option<usize>, Failure> {
        let sizes = [
            self.n,
            self.xi.as_ref().map(Vec::len),
            self.lambda.as_ref().map(Vec::len),
        ];
        let mut known = sizes.iter().flatten();
        let first = known.next().copied();
        if known.any(|&k| Some(k) != first) {
            return Err(Failure::usage(format!(
                "inconsistent particle numbers: --n {:?}, --xi has {:?}, --lambda has {:?}",
                sizes[0], sizes[1], sizes[2]
            )));
        }
        Ok(first)
    }

    pub fn require_xi(&self) -> Result<&[f64], Failure> {
        self.xi
            .as_deref()
            .ok_or_else(|| Failure::usage("this quantity needs --xi"))
    }

    pub fn require_lambda(&self) -> Result<Partition, Failure> {
        let parts = self
            .lambda
            .clone()
            .ok_or_else(|| Failure::usage("this quantity needs --lambda"))?;
        Partition::from_ordered(parts.clone())
            .ok_or_else(|| Failure::usage(format!("--lambda {parts:?} is not weakly decreasing")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Common {
        let mut full = vec!["qboson", "eval", "E"];
        full.extend(args);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Eval { common, .. } => common,
            _ => unreachable!(),
        }
    }

    #[test]
    fn default_parameters() {
        let p = parse(&[]).params().unwrap();
        assert_eq!(p.q, 0.5);
        assert!((p.a - 0.6).abs() < 1e-15 && (p.c - 0.08).abs() < 1e-15);
    }

    #[test]
    fn parameter_sources_are_exclusive() {
        assert!(parse(&["--a", "0.1", "--c", "0.0"]).params().is_ok());
        assert!(parse(&["--r1", "-0.3", "--r2", "0.5"])
            .params()
            .unwrap()
            .in_orthogonality_domain());
        for bad in [
            &["--a", "0.1"][..],
            &["--r2", "0.1"],
            &["--a", "0.1", "--c", "0", "--r1", "0.1", "--r2", "0.2"],
        ] {
            assert_eq!(parse(bad).params().unwrap_err().kind, "usage");
        }
        assert_eq!(parse(&["--q", "1"]).params().unwrap_err().kind, "domain");
    }

    #[test]
    fn particle_number_is_consistent() {
        assert_eq!(
            parse(&["--xi", "1,0.5", "--lambda", "2,0"])
                .particles()
                .unwrap(),
            Some(2)
        );
        assert_eq!(parse(&[]).particles().unwrap(), None);
        assert!(parse(&["--n", "3", "--xi", "1,0.5"]).particles().is_err());
    }

    #[test]
    fn lambda_must_be_ordered() {
        assert!(parse(&["--lambda", "1,2"]).require_lambda().is_err());
        assert_eq!(
            parse(&["--lambda", "2,2,0"])
                .require_lambda()
                .unwrap()
                .parts(),
            &[2, 2, 0]
        );
    }

    #[test]
    fn tolerance_overrides() {
        let cli =
            Cli::try_parse_from(["qboson", "verify", "gram", "--tol-gram", "1e-3", "--n", "2"])
                .unwrap();
        let Command::Verify { tol, .. } = cli.command else {
            unreachable!()
        };
        let t = tol.apply(Tolerances::for_n(2));
        assert_eq!(t.gram, 1e-3);
        assert_eq!(t.eigen, Tolerances::for_n(2).eigen);
    }
}
