//! Prolate spheroidal wave functions and their use in wavenumber-domain MIMO
//! analysis.
//!
//! The crate is layered bottom-up:
//!
//! - [`special`]: Legendre polynomials, Gauss–Legendre quadrature, `sinc`.
//! - [`pswf`]: PSWF eigen-system on an interval via a Legendre spectral
//!   (Bouwkamp-type) method, including the prolate eigenvalues.
//! - [`dpss`]: discrete prolate spheroidal (Slepian) sequences.
//! - [`channel`]: bandlimited Gaussian random wavenumber fields and the
//!   discrete channel matrices they induce on linear arrays.
//! - [`capacity`]: water-filling, equal-power rates, ε-DoF, spectral
//!   dominance checks and the PSWF ergodic-capacity bound.
//! - [`estimators`]: MMSE, AMP, bandwidth MAP and the two-step PSWF channel
//!   estimator.
//! - [`experiments`]: config-driven Monte Carlo harness writing CSV tables.

pub mod capacity;
pub mod channel;
pub mod dpss;
mod error;
pub mod estimators;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod pswf;
pub mod rng;
pub mod special;
mod tridiag;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Carrier wavelength in meters for a carrier frequency in Hz.
pub fn wavelength(carrier_hz: f64) -> f64 {
    SPEED_OF_LIGHT / carrier_hz
}
