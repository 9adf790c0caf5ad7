//! The deformed q-boson field algebra on the algebraic Fock space and the
//! hamiltonian in operator form, in explicit n-particle form, after the
//! similarity transform by `N^{1/2}`, and in the impenetrable-boson limit.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::hall_littlewood::norm_n;
use crate::params::ModelParams;
use crate::partition::Partition;

/// The q-integer `[m] = 1 + q + … + q^{m−1}` (`[0] = 0`).
pub fn q_int(m: u32, q: f64) -> f64 {
    (0..m).fold(0.0, |acc, _| acc * q + 1.0)
}

/// `[m]! = [m][m−1]⋯[1]`, `[0]! = 1`.
pub fn q_factorial(m: u32, q: f64) -> f64 {
    (1..=m).map(|k| q_int(k, q)).product()
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Annihilation operator `β_l`: `(β_l f)(λ) = f(β*_l λ)`.
///
/// Annihilating a grade-0 vector gives the zero vector of grade −1.
pub fn annihilate(l: u32, f: &FockVector) -> FockVector {
    let mut out = FockVector::zero(f.grade() - 1);
    if f.grade() <= 0 {
        return out;
    }
    for (mu, &amp) in f.iter() {
        if let Ok(lambda) = mu.delete_part(l) {
            out.add_at(lambda, amp);
        }
    }
    out
}

/// Coefficient of `β*_l` read on the target partition `λ ∈ Λ_{n+1}`:
/// `[m_l(λ)]·(1 − c·δ_l·q^{m₀(λ)−1})`, zero when `m_l(λ) = 0`.
pub fn creation_coefficient(l: u32, lambda: &Partition, p: &ModelParams) -> f64 {
    let m = lambda.multiplicity(l) as u32;
    if m == 0 {
        return 0.0;
    }
    let boundary = if l == 0 {
        1.0 - p.c * p.q.powi(lambda.multiplicity(0) as i32 - 1)
    } else {
        1.0
    };
    q_int(m, p.q) * boundary
}

/// Creation operator `β*_l`, defined functionally:
/// `(β*_l f)(λ) = [m_l(λ)](1 − c δ_l q^{m₀(λ)−1}) f(β_l λ)`.
pub fn create(l: u32, f: &FockVector, p: &ModelParams) -> FockVector {
    let mut out = FockVector::zero(f.grade() + 1);
    if f.grade() < 0 {
        return out;
    }
    for (mu, &amp) in f.iter() {
        let lambda = mu.insert_part(l);
        let coeff = creation_coefficient(l, &lambda, p);
        out.add_at(lambda, amp * coeff);
    }
    out
}

/// Ket form of the creation operator: `β*_l|μ⟩ = [m_l(μ)+1](1 − c δ_l q^{m₀(μ)})|β*_l μ⟩`.
pub fn create_on_ket(l: u32, mu: &Partition, p: &ModelParams) -> (Partition, f64) {
    let m = mu.multiplicity(l) as u32;
    let boundary = if l == 0 {
        1.0 - p.c * p.q.powi(mu.multiplicity(0) as i32)
    } else {
        1.0
    };
    (mu.insert_part(l), q_int(m + 1, p.q) * boundary)
}

/// `q^{N_l + k}`: multiplies the amplitude at `λ` by `q^{m_l(λ) + k}`.
pub fn count_op(l: u32, k: i32, f: &FockVector, p: &ModelParams) -> FockVector {
    f.map_amplitudes(|lambda, amp| amp * p.q.powi(lambda.multiplicity(l) as i32 + k))
}

/// `[N_l + k] = (1 − q^{N_l+k})/(1 − q)`, built from `count_op`.
pub fn q_int_op(l: u32, k: i32, f: &FockVector, p: &ModelParams) -> FockVector {
    let counted = count_op(l, k, f, p);
    (1.0 / (1.0 - p.q)) * &(f - &counted)
}

/// `H_q f = a[N₀]f + Σ_l (β_{l+1}β*_l + β*_{l+1}β_l) f`, composed from the
/// primitive operators. Terms with `l` beyond the largest occupied site + 1 vanish.
pub fn apply_h_composed(f: &FockVector, p: &ModelParams) -> FockVector {
    if f.is_zero() {
        return FockVector::zero(f.grade());
    }
    let mut out = p.a * &q_int_op(0, 0, f, p);
    for l in 0..=f.max_part() + 1 {
        let right = annihilate(l + 1, &create(l, f, p));
        let left = create(l + 1, &annihilate(l, f), p);
        out = &(&out + &right) + &left;
    }
    out
}

/// Candidate output support of a nearest-neighbour operator: the support
/// together with every `μ ± e_j` that is again a partition.
fn neighbourhood(f: &FockVector) -> BTreeSet<Partition> {
    let mut set = BTreeSet::new();
    for mu in f.support() {
        set.insert(mu.clone());
        for j in 0..mu.len() {
            if mu.can_raise(j) {
                set.insert(mu.raised(j));
            }
            if mu.can_lower(j) {
                set.insert(mu.lowered(j));
            }
        }
    }
    set
}

/// The explicit n-particle action
///
/// ```text
/// (H_q f)(λ) = a[m₀(λ)] f(λ)
///            + Σ_{j: λ+e_j ∈ Λ_n} (1 − c δ_{λ_j} q^{m₀(λ)−1}) [m_{λ_j}(λ)] f(λ+e_j)
///            + Σ_{j: λ−e_j ∈ Λ_n} [m_{λ_j}(λ)] f(λ−e_j)
/// ```
pub fn apply_h_direct(f: &FockVector, p: &ModelParams) -> FockVector {
    let mut out = FockVector::zero(f.grade());
    for lambda in neighbourhood(f) {
        let m0 = lambda.multiplicity(0) as u32;
        let mut value = f.get(&lambda) * (p.a * q_int(m0, p.q));
        for j in 0..lambda.len() {
            let part = lambda.parts()[j];
            let mult = q_int(lambda.multiplicity(part) as u32, p.q);
            if lambda.can_raise(j) {
                let boundary = if part == 0 {
                    1.0 - p.c * p.q.powi(m0 as i32 - 1)
                } else {
                    1.0
                };
                value += f.get(&lambda.raised(j)) * (boundary * mult);
            }
            if lambda.can_lower(j) {
                value += f.get(&lambda.lowered(j)) * mult;
            }
        }
        out.add_at(lambda, value);
    }
    out
}

/// `H = N^{−1/2} H_q N^{1/2}`, self-adjoint on the flat `ℓ²(Λ_n)`.
pub fn apply_h_transformed(f: &FockVector, p: &ModelParams) -> Result<FockVector> {
    p.require_orthogonality_domain()?;
    let sqrt_norm = |lambda: &Partition| -> Result<f64> {
        let v = norm_n(lambda, p);
        if v > 0.0 {
            Ok(v.sqrt())
        } else {
            Err(Error::NonPositiveNorm {
                partition: lambda.parts().to_vec(),
                value: v,
            })
        }
    };
    let mut lifted = FockVector::zero(f.grade());
    for (lambda, &amp) in f.iter() {
        lifted.add_at(lambda.clone(), amp * sqrt_norm(lambda)?);
    }
    let image = apply_h_direct(&lifted, p);
    let mut out = FockVector::zero(f.grade());
    for (lambda, &amp) in image.iter() {
        out.add_at(lambda.clone(), amp / sqrt_norm(lambda)?);
    }
    Ok(out)
}

/// Impenetrable bosons: `(H₀ f)(λ) = Σ_{λ+e_j ∈ Λ_n} f(λ+e_j) + Σ_{λ−e_j ∈ Λ_n} f(λ−e_j)`.
pub fn apply_h0(f: &FockVector) -> FockVector {
    let mut out = FockVector::zero(f.grade());
    for lambda in neighbourhood(f) {
        let mut value = re(0.0);
        for j in 0..lambda.len() {
            if lambda.can_raise(j) {
                value += f.get(&lambda.raised(j));
            }
            if lambda.can_lower(j) {
                value += f.get(&lambda.lowered(j));
            }
        }
        out.add_at(lambda, value);
    }
    out
}
