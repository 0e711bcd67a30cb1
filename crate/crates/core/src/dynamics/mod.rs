//! Time integration of the regularized Galerkin system and reproducible
//! Wiener path generation.

mod record;
mod snapshot;
mod state;
mod stepper;
mod wiener;

pub use record::{simulate, simulate_ensemble, TrajectoryRecord};
pub use snapshot::{read_snapshot, snapshot_bytes, write_snapshot, Snapshot, SNAPSHOT_MAGIC};
pub use state::State;
pub use stepper::{
    continuity_rhs, em_step, mass_source, momentum_drift_pieces, momentum_rhs_weak,
    recover_velocity, transport_velocity, viscous_force, DriftPieces, NoiseContext, Scheme,
    StepperConfig, SystemVariant,
};
pub use wiener::{standard_normal, WienerPath};
