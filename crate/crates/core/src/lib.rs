//! The semi-infinite q-boson system with a two-parameter boundary interaction.
//!
//! - [`partition`]: the particle configurations `Λ_n`.
//! - [`algebra`]: creation/annihilation/number operators on the Fock space and
//!   the hamiltonian `H_q`, its similarity transform `H` and the free `H₀`.
//! - [`hall_littlewood`]: Bethe-Ansatz eigenfunctions `φ_ξ(λ)` (hyperoctahedral
//!   Hall-Littlewood functions), norms, weight and Pieri recurrences.
//! - [`spectral`]: quadrature on the Weyl alcove, orthogonality, the Fourier
//!   pair and the time evolution.
//! - [`scattering`]: two-body and boundary phases, the factorized S-matrix,
//!   normalized wave functions and wave-operator probes.
//! - [`verify`]: the identity checks driven by the CLI and the acceptance suite.

pub mod algebra;
pub mod error;
pub mod fock;
pub mod hall_littlewood;
pub mod params;
pub mod partition;
pub mod scattering;
pub mod spectral;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use fock::FockVector;
pub use hall_littlewood::{EvalDiagnostics, EvalOptions, HlEvaluator, Precision, SpectralPoint};
pub use num_complex::Complex64;
pub use params::ModelParams;
pub use partition::Partition;
pub use scattering::PsiMethod;
pub use spectral::{QuadMode, QuadratureRule};
