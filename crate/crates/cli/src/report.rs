use serde::Serialize;
use serde_json::Value;

use qboson_core::verify::Check;
use qboson_core::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// A usage or domain error; always exit code 2.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            kind: "usage",
            message: message.into(),
        }
    }

    pub fn domain(e: Error) -> Self {
        Failure {
            kind: "domain",
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::domain(e)
    }
}

#[derive(Debug, Serialize)]
pub struct CheckOut {
    pub name: String,
    pub max_residual: f64,
    pub pass: bool,
    pub tolerance: f64,
    pub count: usize,
}

impl From<&Check> for CheckOut {
    fn from(c: &Check) -> Self {
        CheckOut {
            name: c.name.clone(),
            max_residual: c.max_residual,
            pass: c.pass,
            tolerance: c.tolerance,
            count: c.count,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub result: Value,
    pub checks: Vec<CheckOut>,
    pub runtime_ms: u128,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorReport<'a> {
    pub command: &'a str,
    pub error: &'a Failure,
}

/// Output of a command: a JSON report plus, for `--format csv`, a table.
pub struct Output {
    pub report: Report,
    pub csv: Option<Vec<u8>>,
}

/// Writes serializable rows as CSV with a header line.
pub fn csv_rows<T: Serialize>(rows: &[T]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv write");
    }
    w.into_inner().expect("in-memory csv flush")
}
