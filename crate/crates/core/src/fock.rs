//! Finitely supported vectors in a fixed particle-number sector.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// An element of `F(Λ_n)`: complex amplitudes on partitions of length `n`.
///
/// The grade is signed so that annihilating the vacuum lands in the null
/// space of grade `−1`, which only ever holds the zero vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockVector {
    grade: i64,
    amplitudes: BTreeMap<Partition, Complex64>,
}

impl FockVector {
    pub fn zero(grade: i64) -> Self {
        FockVector {
            grade,
            amplitudes: BTreeMap::new(),
        }
    }

    /// The characteristic function `|λ⟩`.
    pub fn ket(lambda: Partition) -> Self {
        Self::from_pairs(lambda.len(), [(lambda, Complex64::new(1.0, 0.0))])
            .expect("a single ket has a consistent grade")
    }

    /// Builds a vector of grade `n`; amplitudes for repeated keys are added.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, Complex64)>,
    {
        let mut v = FockVector::zero(n as i64);
        for (lambda, amp) in pairs {
            if lambda.len() != n {
                return Err(Error::GradeMismatch {
                    left: n as i64,
                    right: lambda.len() as i64,
                });
            }
            v.add_at(lambda, amp);
        }
        Ok(v)
    }

    pub fn grade(&self) -> i64 {
        self.grade
    }

    /// Amplitude at `λ` (zero off the support).
    pub fn get(&self, lambda: &Partition) -> Complex64 {
        self.amplitudes.get(lambda).copied().unwrap_or_default()
    }

    /// Adds to the amplitude at `λ`; entries that become exactly zero are dropped.
    pub fn add_at(&mut self, lambda: Partition, amp: Complex64) {
        debug_assert_eq!(lambda.len() as i64, self.grade);
        let zero = Complex64::new(0.0, 0.0);
        match self.amplitudes.entry(lambda) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += amp;
                if *e.get() == zero {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if amp != zero {
                    e.insert(amp);
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Partition> {
        self.amplitudes.keys()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Same as [`Self::is_empty`]: amplitudes are only stored when nonzero.
    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    /// Largest part over the support (0 for the zero vector).
    pub fn max_part(&self) -> u32 {
        self.amplitudes
            .keys()
            .map(Partition::max_part)
            .max()
            .unwrap_or(0)
    }

    /// Applies `f` to every amplitude.
    pub fn map_amplitudes(
        &self,
        mut f: impl FnMut(&Partition, Complex64) -> Complex64,
    ) -> FockVector {
        let mut out = FockVector::zero(self.grade);
        for (lambda, &amp) in &self.amplitudes {
            out.add_at(lambda.clone(), f(lambda, amp));
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> FockVector {
        self.map_amplitudes(|_, a| a * s)
    }

    /// `self + s·other`, checking grades unless one side is zero.
    pub fn axpy(&self, s: Complex64, other: &FockVector) -> Result<FockVector> {
        if self.grade != other.grade && !(self.is_zero() || other.is_zero()) {
            return Err(Error::GradeMismatch {
                left: self.grade,
                right: other.grade,
            });
        }
        let mut out = if self.is_zero() && self.grade != other.grade {
            FockVector::zero(other.grade)
        } else {
            self.clone()
        };
        for (lambda, &amp) in &other.amplitudes {
            out.add_at(lambda.clone(), s * amp);
        }
        Ok(out)
    }

    /// Largest amplitude modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        let mut m: f64 = 0.0;
        for (lambda, amp) in &self.amplitudes {
            m = m.max((amp - other.get(lambda)).norm());
        }
        for (lambda, amp) in &other.amplitudes {
            if !self.amplitudes.contains_key(lambda) {
                m = m.max(amp.norm());
            }
        }
        m
    }

    /// Largest amplitude modulus.
    pub fn max_abs(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|a| a.norm())
            .fold(0.0, f64::max)
    }

    /// Unweighted squared norm `Σ |f(λ)|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }
}

impl Add for &FockVector {
    type Output = FockVector;

    /// Panics on a grade mismatch between nonzero operands.
    fn add(self, rhs: &FockVector) -> FockVector {
        self.axpy(Complex64::new(1.0, 0.0), rhs)
            .expect("grade mismatch in addition")
    }
}

impl Sub for &FockVector {
    type Output = FockVector;

    fn sub(self, rhs: &FockVector) -> FockVector {
        self.axpy(Complex64::new(-1.0, 0.0), rhs)
            .expect("grade mismatch in subtraction")
    }
}

impl Mul<&FockVector> for Complex64 {
    type Output = FockVector;

    fn mul(self, rhs: &FockVector) -> FockVector {
        rhs.scale(self)
    }
}

impl Mul<&FockVector> for f64 {
    type Output = FockVector;

    fn mul(self, rhs: &FockVector) -> FockVector {
        rhs.scale(Complex64::new(self, 0.0))
    }
}

#[derive(Serialize, Deserialize)]
struct AmplitudeRecord {
    partition: Partition,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct FockRecord {
    n: usize,
    amplitudes: Vec<AmplitudeRecord>,
}

impl Serialize for FockVector {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let record = FockRecord {
            n: self.grade.max(0) as usize,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(p, a)| AmplitudeRecord {
                    partition: p.clone(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        };
        record.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let record = FockRecord::deserialize(deserializer)?;
        FockVector::from_pairs(
            record.n,
            record
                .amplitudes
                .into_iter()
                .map(|r| (r.partition, Complex64::new(r.re, r.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}
