//! Model parameters `(q, a, c)` and the derived boundary roots.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coupling `q` and boundary parameters `a`, `c` of the q-boson hamiltonian.
///
/// The boundary roots `r₁, r₂` solve `r² − a·r + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub q: f64,
    pub a: f64,
    pub c: f64,
}

impl ModelParams {
    /// Requires finite values and `|q| ∉ {0, 1}`.
    pub fn new(q: f64, a: f64, c: f64) -> Result<Self> {
        if !(q.is_finite() && a.is_finite() && c.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "non-finite value in q={q}, a={a}, c={c}"
            )));
        }
        if q == 0.0 || q.abs() == 1.0 {
            return Err(Error::InvalidParams(format!(
                "|q| must differ from 0 and 1, got q={q}"
            )));
        }
        Ok(ModelParams { q, a, c })
    }

    /// `a = r₁ + r₂`, `c = r₁·r₂`.
    pub fn from_roots(q: f64, r1: f64, r2: f64) -> Result<Self> {
        Self::new(q, r1 + r2, r1 * r2)
    }

    /// Real roots `(r₁, r₂)` with `r₁ ≤ r₂`, if the discriminant is non-negative.
    pub fn roots(&self) -> Option<(f64, f64)> {
        let half = self.a / 2.0;
        let disc = half * half - self.c;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        Some((half - s, half + s))
    }

    /// `r = a/2 + √((a/2)² − c)`, principal branch (complex when `c > (a/2)²`).
    pub fn r(&self) -> Complex64 {
        let half = self.a / 2.0;
        Complex64::new(half, 0.0) + Complex64::new(half * half - self.c, 0.0).sqrt()
    }

    pub fn in_orthogonality_domain(&self) -> bool {
        let q_ok = self.q.abs() > 0.0 && self.q.abs() < 1.0;
        q_ok && self.roots().is_some_and(|(r1, r2)| r1 > -1.0 && r2 < 1.0)
    }

    pub fn require_orthogonality_domain(&self) -> Result<()> {
        if self.in_orthogonality_domain() {
            Ok(())
        } else {
            Err(Error::OutsideOrthogonalityDomain {
                q: self.q,
                a: self.a,
                c: self.c,
            })
        }
    }
}

impl Default for ModelParams {
    /// `q = 0.5`, `r₁ = 0.2`, `r₂ = 0.4`, hence `a = 0.6`, `c = 0.08`.
    fn default() -> Self {
        ModelParams {
            q: 0.5,
            a: 0.6,
            c: 0.2 * 0.4,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_roots() {
        let p = ModelParams::default();
        let (r1, r2) = p.roots().unwrap();
        assert!((r1 - 0.2).abs() < 1e-15 && (r2 - 0.4).abs() < 1e-15);
        assert!((p.r().re - 0.4).abs() < 1e-15 && p.r().im == 0.0);
        assert!(p.in_orthogonality_domain());
    }

    #[test]
    fn rejects_degenerate_q() {
        assert!(ModelParams::new(0.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(-1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 0.0, 0.0).is_err());
        // outside the orthogonality domain but still a valid algebra
        assert!(ModelParams::new(2.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn domain_predicate() {
        assert!(!ModelParams::from_roots(0.5, 1.5, 0.2)
            .unwrap()
            .in_orthogonality_domain());
        assert!(!ModelParams::from_roots(0.5, -1.0, 0.2)
            .unwrap()
            .in_orthogonality_domain());
        assert!(!ModelParams::new(1.5, 0.0, 0.0)
            .unwrap()
            .in_orthogonality_domain());
        // complex roots
        let p = ModelParams::new(0.5, 0.0, 0.25).unwrap();
        assert!(p.roots().is_none());
        assert!(!p.in_orthogonality_domain());
        assert!((p.r() - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(ModelParams::from_roots(-0.7, -0.9, 0.95)
            .unwrap()
            .in_orthogonality_domain());
    }
}
