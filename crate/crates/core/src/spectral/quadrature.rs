use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hall_littlewood::{SpectralPoint, DEFAULT_GENERICITY_MARGIN};
use crate::summation::ComplexSum;

/// Nodes per reduction chunk. Fixed, so sums do not depend on the thread count.
const CHUNK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadMode {
    /// Tensor rule on `(0,π)ⁿ` restricted to `ξ₁ > … > ξ_n`.
    Alcove,
    /// Tensor rule on `(−π,π)ⁿ` with the factor `1/(2ⁿ n!)`.
    FullCube,
}

impl QuadMode {
    /// Full cube for `n ≥ 2`; for `n = 1` the alcove rule already has no waste.
    pub fn default_for(n: usize) -> Self {
        if n >= 2 {
            QuadMode::FullCube
        } else {
            QuadMode::Alcove
        }
    }
}

impl std::str::FromStr for QuadMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alcove" => Ok(QuadMode::Alcove),
            "full-cube" => Ok(QuadMode::FullCube),
            _ => Err(Error::InvalidParams(format!(
                "unknown quadrature mode {s:?}"
            ))),
        }
    }
}

/// Tensor Gauss-Legendre rule for integrals `∫_A g(ξ) dξ` over the alcove.
///
/// Nodes closer than the genericity margin to a wall of `C` are kept (and
/// counted) but marked; every integrand built here vanishes there, so they
/// contribute zero.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    n: usize,
    points_per_axis: usize,
    mode: QuadMode,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    wall: Vec<bool>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl QuadratureRule {
    pub fn new(n: usize, points_per_axis: usize, mode: QuadMode) -> Result<Self> {
        if points_per_axis < 2 {
            return Err(Error::InvalidParams(
                "points_per_axis must be at least 2".into(),
            ));
        }
        if n == 0 {
            return Err(Error::InvalidParams("quadrature needs n ≥ 1".into()));
        }
        let (lo, hi, factor) = match mode {
            QuadMode::Alcove => (0.0, PI, 1.0),
            QuadMode::FullCube => (-PI, PI, 1.0 / (2f64.powi(n as i32) * factorial(n))),
        };
        let degree = NonZeroUsize::new(points_per_axis).expect("checked above");
        let axis: Vec<(f64, f64)> = GaussLegendre::new(degree)
            .iter()
            .map(|(x, w)| (0.5 * ((hi - lo) * x + hi + lo), 0.5 * (hi - lo) * w))
            .collect();

        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut wall = Vec::new();
        let mut idx = vec![0usize; n];
        let mut point = vec![0.0; n];
        loop {
            let mut w = factor;
            for (slot, &i) in point.iter_mut().zip(&idx) {
                *slot = axis[i].0;
                w *= axis[i].1;
            }
            let keep = mode == QuadMode::FullCube || point.windows(2).all(|p| p[0] > p[1]);
            if keep {
                let generic =
                    SpectralPoint::new(point.clone()).is_generic(DEFAULT_GENERICITY_MARGIN);
                nodes.extend_from_slice(&point);
                weights.push(w);
                wall.push(!generic);
            }
            // odometer over the tensor grid
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(QuadratureRule {
                        n,
                        points_per_axis,
                        mode,
                        nodes,
                        weights,
                        wall,
                    });
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < points_per_axis {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn mode(&self) -> QuadMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.n..(i + 1) * self.n]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn is_wall(&self, i: usize) -> bool {
        self.wall[i]
    }

    pub fn wall_count(&self) -> usize {
        self.wall.iter().filter(|&&w| w).count()
    }

    /// `1/(2ⁿ n!)` in full-cube mode, 1 otherwise.
    pub fn symmetry_factor(&self) -> f64 {
        match self.mode {
            QuadMode::Alcove => 1.0,
            QuadMode::FullCube => 1.0 / (2f64.powi(self.n as i32) * factorial(self.n)),
        }
    }

    /// Width of the integration interval along one axis.
    pub fn axis_length(&self) -> f64 {
        match self.mode {
            QuadMode::Alcove => PI,
            QuadMode::FullCube => 2.0 * PI,
        }
    }

    /// `(2π)^{−n}`.
    pub fn prefactor(&self) -> f64 {
        (2.0 * PI).powi(-(self.n as i32))
    }

    /// `Σ_i w_i g(ξ_i)` over non-wall nodes, vector valued: `g` adds its
    /// (unweighted) value into the slice it is handed.
    pub(crate) fn integrate_vec<F>(&self, dim: usize, g: F) -> Result<Vec<Complex64>>
    where
        F: Fn(&[f64], &mut [Complex64]) -> Result<()> + Sync,
    {
        let chunks: Vec<usize> = (0..self.len().div_ceil(CHUNK)).collect();
        let partials = chunks
            .par_iter()
            .map(|&c| {
                let mut acc = vec![Complex64::new(0.0, 0.0); dim];
                let mut local = vec![Complex64::new(0.0, 0.0); dim];
                for i in c * CHUNK..((c + 1) * CHUNK).min(self.len()) {
                    if self.wall[i] {
                        continue;
                    }
                    local.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
                    g(self.node(i), &mut local)?;
                    let w = self.weights[i];
                    for (a, v) in acc.iter_mut().zip(&local) {
                        *a += v * w;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((0..dim)
            .map(|k| {
                partials
                    .iter()
                    .map(|p| p[k])
                    .collect::<ComplexSum>()
                    .value()
            })
            .collect())
    }

    /// Scalar version of [`Self::integrate_vec`].
    pub(crate) fn integrate<F>(&self, g: F) -> Result<Complex64>
    where
        F: Fn(&[f64]) -> Result<Complex64> + Sync,
    {
        Ok(self.integrate_vec(1, |xi, out| {
            out[0] = g(xi)?;
            Ok(())
        })?[0])
    }

    /// Per-node values in node order, computed in parallel; wall nodes get `None`.
    pub(crate) fn map_nodes<T, F>(&self, g: F) -> Result<Vec<Option<T>>>
    where
        T: Send,
        F: Fn(&[f64]) -> Result<T> + Sync,
    {
        (0..self.len())
            .into_par_iter()
            .map(|i| {
                if self.wall[i] {
                    Ok(None)
                } else {
                    g(self.node(i)).map(Some)
                }
            })
            .collect()
    }
}

/// Tensor Gauss-Legendre rule; see [`QuadratureRule`].
pub fn build_rule(n: usize, points_per_axis: usize, mode: QuadMode) -> Result<QuadratureRule> {
    QuadratureRule::new(n, points_per_axis, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_weights_sum_to_pi() {
        let r = build_rule(1, 200, QuadMode::Alcove).unwrap();
        assert_eq!(r.len(), 200);
        let s: f64 = (0..r.len()).map(|i| r.weight(i)).sum();
        assert!((s - PI).abs() < 1e-12);
        assert!((0..r.len()).all(|i| r.node(i)[0] > 0.0 && r.node(i)[0] < PI));
    }

    #[test]
    fn node_counts() {
        let cube = build_rule(2, 100, QuadMode::FullCube).unwrap();
        assert_eq!(cube.len(), 10_000);
        assert_eq!(cube.symmetry_factor(), 0.125);
        let alcove = build_rule(2, 100, QuadMode::Alcove).unwrap();
        assert_eq!(alcove.len(), 4950);
        assert!(build_rule(1, 1, QuadMode::Alcove).is_err());
    }

    #[test]
    fn alcove_volume() {
        // |A| = πⁿ/n!, and the full cube folds to the same value
        for n in 1..=3 {
            for mode in [QuadMode::Alcove, QuadMode::FullCube] {
                let r = build_rule(n, 24, mode).unwrap();
                let v: f64 = (0..r.len()).map(|i| r.weight(i)).sum();
                let exact = PI.powi(n as i32) / factorial(n);
                // alcove mode keeps whole tensor cells, so the volume carries O(1/points) error
                let tol = if mode == QuadMode::FullCube {
                    1e-12
                } else {
                    0.2 * exact
                };
                assert!((v - exact).abs() < tol, "n={n} {mode:?}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn diagonal_nodes_are_walls() {
        let r = build_rule(2, 11, QuadMode::FullCube).unwrap();
        // 11 diagonal, 11 antidiagonal (sharing the origin), the ξ=0 lines (21 nodes)
        assert!(r.wall_count() > 0);
        for i in 0..r.len() {
            let x = r.node(i);
            if (x[0] - x[1]).abs() < 1e-12 {
                assert!(r.is_wall(i));
            }
        }
        let a = build_rule(2, 10, QuadMode::Alcove).unwrap();
        assert_eq!(a.wall_count(), 0);
    }

    #[test]
    fn reduction_is_deterministic() {
        let r = build_rule(2, 60, QuadMode::FullCube).unwrap();
        let g = |x: &[f64]| {
            Ok(Complex64::new(
                (3.0 * x[0]).cos() * x[1].sin().powi(2),
                x[0],
            ))
        };
        let a = r.integrate(g).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| r.integrate(g).unwrap());
        assert_eq!(a, b);
    }
}
