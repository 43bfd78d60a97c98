//! Hybrid-Lindblad dynamics of driven dissipative qubits and a slow-driving
//! perturbation theory for chiral state conversion.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] vectorization, superoperator assembly, biorthogonal
//!   eigensystems with branch tracking, Drazin inverse and steady states.
//! * [`models`] the single-qubit model A, the locally coupled two-qubit model B
//!   and its global master-equation variant G.
//! * [`drive`] the elliptical parameter loop and time-dependent models.
//! * [`propagate`] exact stepwise propagation used as the reference.
//! * [`slowdrive`] the slow-driving evolution operator, growth parameters,
//!   Drazin-series corrections, Floquet operator and validity diagnostics.
//! * [`analysis`] fidelities, closed-form predictions and witnesses.
//! * [`methods`] a by-name registry of dynamics methods.
//!
//! Units: ħ = 1, energies in units of the drive amplitude δ₀.

pub mod analysis;
pub mod drive;
pub mod error;
pub mod methods;
pub mod models;
pub mod propagate;
pub mod slowdrive;
pub mod spectral;

pub use error::{Error, Result};

/// Crate version, recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C = Complex64;
pub type CMat = DMatrix<C>;
pub type CVec = DVector<C>;

/// Imaginary unit.
pub const I: C = C::new(0.0, 1.0);

/// Real number as a complex scalar.
#[inline]
pub fn re(x: f64) -> C {
    C::new(x, 0.0)
}
