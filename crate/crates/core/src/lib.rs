//! Spectral machinery for elastic plasmonic resonance on spherical geometries.
//!
//! The library works in the quasi-static regime of the 3D Lamé system and
//! provides, for a central ball (and a core-shell variant):
//!
//! * fundamental solutions of the static and time-harmonic Lamé operators
//!   (Kelvin and Kupradze matrices) together with their low-frequency
//!   decomposition ([`kernels`]);
//! * scalar and vector spherical harmonics, the three eigenfunction families
//!   of the Neumann-Poincaré operator on the sphere, and modal projection of
//!   boundary fields ([`modes`]);
//! * closed-form spectra of the Neumann-Poincaré and single-layer operators,
//!   resonance denominators, critical plasmon parameters and dissipation
//!   weights ([`spectrum`]);
//! * the modal solution of the single-inclusion transmission problem with
//!   energy-dissipation bookkeeping ([`transmission`]);
//! * core-shell cloaking due to anomalous localized resonance: closed-form
//!   modal coefficients, denominator estimates, critical radius and sweep
//!   verdicts ([`cloaking`]);
//! * independent brute-force validation of every closed form by surface and
//!   volume quadrature ([`oracle`]).

pub mod cloaking;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod materials;
pub mod modes;
pub mod oracle;
pub mod spectrum;
pub mod transmission;

pub use error::{Error, Result};
pub use materials::{convexity_status, Convexity, LameParams};
pub use modes::{ModalField, ModeIndex};
pub use spectrum::PlasmonConfig;
