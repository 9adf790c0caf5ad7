use std::sync::OnceLock;

use itertools::Itertools;

/// Largest particle number for which the `2ⁿ·n!` term tables are built.
pub const MAX_PARTICLES: usize = 8;

/// A signed permutation `w = (σ, ε)` acting by `(wξ)_j = ε_j ξ_{σ_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    pub sigma: Vec<usize>,
    pub eps: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            sigma: (0..n).collect(),
            eps: vec![1; n],
        }
    }

    /// `sign(εσ) = ε₁⋯ε_n · sign(σ)`.
    pub fn sign(&self) -> f64 {
        let mut s: f64 = self.eps.iter().map(|&e| e as f64).product();
        for i in 0..self.sigma.len() {
            for j in i + 1..self.sigma.len() {
                if self.sigma[i] > self.sigma[j] {
                    s = -s;
                }
            }
        }
        s
    }

    pub fn apply_real(&self, xi: &[f64]) -> Vec<f64> {
        self.sigma
            .iter()
            .zip(&self.eps)
            .map(|(&s, &e)| e as f64 * xi[s])
            .collect()
    }
}

fn build(n: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::new();
    for sigma in (0..n).permutations(n) {
        for bits in 0..(1usize << n) {
            // first position varies slowest, +1 before -1
            let eps = (0..n)
                .map(|j| if bits >> (n - 1 - j) & 1 == 0 { 1 } else { -1 })
                .collect();
            out.push(SignedPermutation {
                sigma: sigma.clone(),
                eps,
            });
        }
    }
    out
}

/// All `2ⁿ·n!` signed permutations, lexicographic in `(σ, ε)`; the identity comes first.
pub fn signed_permutations(n: usize) -> &'static [SignedPermutation] {
    static CACHE: [OnceLock<Vec<SignedPermutation>>; MAX_PARTICLES + 1] =
        [const { OnceLock::new() }; MAX_PARTICLES + 1];
    assert!(
        n <= MAX_PARTICLES,
        "at most {MAX_PARTICLES} particles supported"
    );
    CACHE[n].get_or_init(|| build(n))
}
