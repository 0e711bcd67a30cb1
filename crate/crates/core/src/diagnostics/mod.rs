//! Numerical audits of the a priori structures: energy balance, mass ODE,
//! renormalized continuity, Korn-Poincare coercivity, density lower bounds,
//! ergodic averages and the effective-viscous-flux identities.

mod bound;
mod energy;
mod ergodic;
mod flux;
mod korn;
mod mass;
mod renorm;

pub use bound::{density_lower_bound, LowerBoundReport};
pub use energy::{
    density_integral, energy, energy_balance_residual, energy_with_noise, max_energy_increment,
    pointwise_inner, velocity_sup, BalanceBreakdown, EnergyReport,
};
pub use ergodic::{ergodic_velocity_average, ErgodicReport};
pub use flux::{effective_viscous_flux_report, flux_rows, flux_test_field, FluxLevel, FluxReport};
pub use korn::{empirical_korn_constant, korn_poincare_ratio, random_symmetric_field};
pub use mass::{
    mass_ode_residual, mass_ode_rhs, rk4_mass_reference, semi_implicit_mass_scheme,
};
pub use renorm::{renorm_continuity_residual, BFunction};
