//! Shared fixtures for the benchmark targets.

use scns_core::dynamics::State;
use scns_core::model::ModelParams;
use scns_core::spectral::{SpectralField, SpectralVectorField, TorusGrid};
use std::f64::consts::PI;

pub fn desk_grid() -> TorusGrid {
    TorusGrid::new(2, 36, 8, 2.0).unwrap()
}

pub fn desk_params() -> ModelParams {
    let grid = desk_grid();
    ModelParams {
        epsilon: 0.1,
        m0: grid.volume(),
        k_noise: 8,
        ..ModelParams::default()
    }
}

/// Smooth symmetric state with active density and velocity modes.
pub fn desk_state() -> State {
    let grid = desk_grid();
    let l = grid.length();
    let rho = SpectralField::from_fn(grid, |x| {
        1.0 + 0.1 * (2.0 * PI * x[0] / l).cos() * (2.0 * PI * x[1] / l).cos()
    });
    let u = SpectralVectorField::from_fn(grid, |i, x| {
        0.1 * (2.0 * PI * x[i] / l).sin() * (2.0 * PI * x[1 - i] / l).cos()
    });
    State::new(0.0, rho, u).unwrap()
}
