//! Piecewise-constant embedding of a sample sequence into a path, with the
//! discrete isometry between the sample-norm sum and the path-norm integral.

use crate::dynamics::State;
use crate::spectral::{l2_norm, sobolev12_norm_sq};
use crate::{Error, Result};

/// State norm used by the embedding: `(|rho|_{L^2}^2 + |u|_{W^{1,2}}^2)^(1/2)`.
pub fn state_norm(state: &State) -> f64 {
    let r = l2_norm(&state.rho);
    (r * r + sobolev12_norm_sq(&state.u)).sqrt()
}

/// Piecewise-constant path `U~(t) = U(t_i)` on `[t_i, t_{i+1})`.
pub struct PiecewiseEmbed<'a> {
    states: &'a [State],
    dt: f64,
    /// `sum_i |U(t_i)| dt`.
    pub sum_norms_dt: f64,
    /// `int |U~(t)| dt` by midpoint quadrature on a refinement.
    pub path_integral: f64,
}

impl<'a> PiecewiseEmbed<'a> {
    /// Path value at `t in [0, len * dt)`.
    pub fn value_at(&self, t: f64) -> &State {
        let idx = ((t / self.dt).floor() as usize).min(self.states.len() - 1);
        &self.states[idx]
    }
}

/// Embeds the samples and evaluates both sides of the isometry; the two
/// fields agree to rounding because midpoint quadrature is exact on
/// piecewise constants.
pub fn piecewise_embed(states: &[State], dt: f64, refine: usize) -> Result<PiecewiseEmbed<'_>> {
    if states.is_empty() {
        return Err(Error::invalid("samples", "need >= 1 sample"));
    }
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", "dt > 0 required"));
    }
    let refine = refine.max(1);
    let norms: Vec<f64> = states.iter().map(state_norm).collect();
    let sum_norms_dt: f64 = norms.iter().map(|n| n * dt).sum();

    let mut embed = PiecewiseEmbed {
        states,
        dt,
        sum_norms_dt,
        path_integral: 0.0,
    };
    // midpoint rule over `refine` slices per piece, evaluated through the
    // path lookup rather than the sample list
    let h = dt / refine as f64;
    let mut integral = 0.0;
    for i in 0..states.len() {
        for j in 0..refine {
            let t = i as f64 * dt + (j as f64 + 0.5) * h;
            integral += state_norm(embed.value_at(t)) * h;
        }
    }
    embed.path_integral = integral;
    Ok(embed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{SpectralField, SpectralVectorField, TorusGrid};

    fn mk_state(t: f64, level: f64) -> State {
        let grid = TorusGrid::new(1, 8, 1, 2.0).unwrap();
        State::new(
            t,
            SpectralField::constant(grid, level),
            SpectralVectorField::zeros(grid),
        )
        .unwrap()
    }

    #[test]
    fn single_sample_isometry() {
        let states = vec![mk_state(0.0, 2.0)];
        let e = piecewise_embed(&states, 0.4, 7).unwrap();
        assert!((e.sum_norms_dt - e.path_integral).abs() < 1e-13);
        assert!((e.sum_norms_dt - state_norm(&states[0]) * 0.4).abs() < 1e-13);
    }

    #[test]
    fn isometry_holds_for_any_samples() {
        let states: Vec<State> = (0..9)
            .map(|i| mk_state(i as f64 * 0.1, 1.0 + (i as f64 * 1.3).sin()))
            .collect();
        let e = piecewise_embed(&states, 0.1, 4).unwrap();
        let rel = (e.sum_norms_dt - e.path_integral).abs() / e.sum_norms_dt;
        assert!(rel < 1e-12, "isometry defect {rel}");
    }

    #[test]
    fn refinement_stays_within_the_modulus_of_continuity() {
        // sampling a smooth path twice as finely moves the embedded integral
        // by less than max|d/dt level| * dt * horizon
        let horizon = 2.0;
        let level = |t: f64| 1.5 + 0.4 * t.sin();
        let build = |dt: f64| -> Vec<State> {
            let count = (horizon / dt).round() as usize;
            (0..count).map(|i| mk_state(i as f64 * dt, level(i as f64 * dt))).collect()
        };
        let coarse = build(0.1);
        let fine = build(0.05);
        let ic = piecewise_embed(&coarse, 0.1, 2).unwrap().path_integral;
        let if_ = piecewise_embed(&fine, 0.05, 2).unwrap().path_integral;
        let grid = TorusGrid::new(1, 8, 1, 2.0).unwrap();
        let modulus = 0.4 * 0.1 * grid.volume().sqrt() * horizon;
        assert!(
            (ic - if_).abs() < modulus,
            "refinement moved the integral by {} (bound {modulus})",
            (ic - if_).abs()
        );
    }
}
