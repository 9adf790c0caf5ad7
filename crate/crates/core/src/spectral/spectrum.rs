use nalgebra::{DMatrix, SymmetricEigen};

use crate::algebra::apply_h_transformed;
use crate::error::Result;
use crate::fock::FockVector;
use crate::params::ModelParams;
use crate::partition::{enumerate, Partition};

/// A real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i+1`.
    pub off: Vec<f64>,
}

impl SymmetricTridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let k = self.len();
        DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                self.diag[i]
            } else if i + 1 == j {
                self.off[i]
            } else if j + 1 == i {
                self.off[j]
            } else {
                0.0
            }
        })
    }
}

/// The transformed one-particle hamiltonian on sites `0..sites`, read off
/// from its action on kets.
pub fn one_particle_tridiagonal(sites: usize, p: &ModelParams) -> Result<SymmetricTridiagonal> {
    let mut diag = Vec::with_capacity(sites);
    let mut off = Vec::with_capacity(sites.saturating_sub(1));
    for l in 0..sites as u32 {
        let image = apply_h_transformed(&FockVector::ket(Partition::new(vec![l])), p)?;
        diag.push(image.get(&Partition::new(vec![l])).re);
        if (l as usize) + 1 < sites {
            off.push(image.get(&Partition::new(vec![l + 1])).re);
        }
    }
    Ok(SymmetricTridiagonal { diag, off })
}

/// Dense matrix of the transformed `H` compressed to partitions with parts
/// `≤ max_part` (in [`enumerate`] order).
pub fn truncated_hamiltonian(
    n: usize,
    max_part: u32,
    p: &ModelParams,
) -> Result<(Vec<Partition>, DMatrix<f64>)> {
    let basis = enumerate(n, max_part);
    let index: std::collections::HashMap<&Partition, usize> =
        basis.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut m = DMatrix::zeros(basis.len(), basis.len());
    for (j, mu) in basis.iter().enumerate() {
        let image = apply_h_transformed(&FockVector::ket(mu.clone()), p)?;
        for (lambda, v) in image.iter() {
            if let Some(&i) = index.get(lambda) {
                m[(i, j)] = v.re;
            }
        }
    }
    Ok((basis, m))
}

/// Number of eigenvalues strictly below `x` (Sturm sequence of the `LDLᵀ` pivots).
pub fn sturm_count(m: &SymmetricTridiagonal, x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..m.len() {
        let b2 = if i == 0 {
            0.0
        } else {
            m.off[i - 1] * m.off[i - 1]
        };
        d = m.diag[i] - x - if i == 0 { 0.0 } else { b2 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (m.diag[i].abs() + x.abs() + 1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues (ascending) by the dense symmetric eigensolver.
pub fn band_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_particle_entries() {
        let p = ModelParams::new(0.5, 0.6, 0.08).unwrap();
        let t = one_particle_tridiagonal(5, &p).unwrap();
        assert!((t.diag[0] - 0.6).abs() < 1e-15);
        assert!(t.diag[1..].iter().all(|&d| d == 0.0));
        assert!((t.off[0] - 0.92f64.sqrt()).abs() < 1e-15);
        assert!(t.off[1..].iter().all(|&o| (o - 1.0).abs() < 1e-15));
        let (_, dense) = truncated_hamiltonian(1, 4, &p).unwrap();
        assert_eq!(dense, t.to_dense());
    }

    #[test]
    fn sturm_matches_dense() {
        let p = ModelParams::from_roots(0.3, -0.8, 0.9).unwrap();
        let t = one_particle_tridiagonal(60, &p).unwrap();
        let ev = band_eigenvalues(&t.to_dense());
        for x in [-2.5, -1.3, 0.0, 0.77, 1.99, 2.5] {
            assert_eq!(sturm_count(&t, x), ev.iter().filter(|&&e| e < x).count());
        }
    }

    #[test]
    fn truncated_two_particle_is_symmetric() {
        let p = ModelParams::new(0.5, 0.6, 0.08).unwrap();
        let (basis, m) = truncated_hamiltonian(2, 5, &p).unwrap();
        assert_eq!(basis.len(), 21);
        assert!((&m - m.transpose()).abs().max() < 1e-14);
    }
}
