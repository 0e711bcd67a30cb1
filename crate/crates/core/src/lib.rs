//! Spectral stochastic Galerkin solver for the compressible Navier-Stokes
//! system with multiplicative noise on the periodic torus.
//!
//! The crate is organised around the pipeline
//!
//! * [`spectral`] -- torus grids, Fourier transforms, Galerkin projection,
//!   Fourier-multiplier operators, dealiased products and the reflection
//!   symmetry class;
//! * [`model`] -- constitutive laws (pressure, viscous stress), the smooth
//!   cutoff, velocity truncation, the mass equilibrium and the noise
//!   coefficient family;
//! * [`dynamics`] -- the semi-implicit Euler-Maruyama stepper for the
//!   regularized system, reproducible Wiener increments, trajectory records
//!   and snapshot I/O;
//! * [`diagnostics`] -- numerical audits of the a priori structures: energy
//!   balance, mass ODE, renormalized continuity, Korn-Poincare coercivity,
//!   density lower bounds, ergodic averages and the effective-viscous-flux
//!   identities;
//! * [`stationarity`] -- time shifts, mollified path evaluation, empirical
//!   laws, two-sample Kolmogorov-Smirnov machinery and Krylov-Bogoliubov
//!   time averages.

pub mod diagnostics;
pub mod dynamics;
mod error;
pub mod model;
pub mod spectral;
pub mod stationarity;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
