//! Density lower-bound audit against the comparison-ODE floor.

use crate::dynamics::{transport_velocity, SystemVariant, TrajectoryRecord};
use crate::model::{cutoff_h, solve_m_epsilon};
use crate::spectral::{divergence, lp_norm};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    /// Smallest collocation value of the density over the inspected window.
    pub observed_min: f64,
    /// Comparison-ODE equilibrium floor
    /// `H(M_eps / M0) / (|T| (2 eps + D))`.
    pub comparison_bound: f64,
    /// Measured transport compressibility `D = max |div u_tr|_inf`.
    pub d_rn: f64,
    pub m_eps: f64,
    pub from_time: f64,
}

/// Scans the recorded states with `t >= from_time`: reports the observed
/// density floor together with the comparison bound built from the measured
/// `max |div [u]_R|`.
pub fn density_lower_bound(record: &TrajectoryRecord, from_time: f64) -> Result<LowerBoundReport> {
    let params = record.params;
    if record.config.variant != SystemVariant::ZeroLevel {
        return Err(Error::invalid(
            "variant",
            "the density floor audit applies to the zero-level system",
        ));
    }
    if !(params.epsilon > 0.0) {
        return Err(Error::invalid("epsilon", "epsilon > 0 required"));
    }
    let mut observed_min = f64::INFINITY;
    let mut d_rn = 0.0f64;
    let mut seen = false;
    for (t, state) in record.times.iter().zip(&record.states) {
        if *t < from_time {
            continue;
        }
        seen = true;
        observed_min = observed_min.min(state.min_density());
        let u_tr = transport_velocity(state, &params, record.config.variant);
        d_rn = d_rn.max(lp_norm(&divergence(&u_tr), f64::INFINITY));
    }
    if !seen {
        let (lo, hi) = record.time_range();
        return Err(Error::WindowOutOfRange {
            lo: from_time,
            hi: from_time,
            rec_lo: lo,
            rec_hi: hi,
        });
    }
    let m_eps = solve_m_epsilon(params.epsilon, params.m0)?;
    let volume = record.states[0].grid().volume();
    let comparison_bound =
        cutoff_h(m_eps / params.m0) / (volume * (2.0 * params.epsilon + d_rn));
    Ok(LowerBoundReport {
        observed_min,
        comparison_bound,
        d_rn,
        m_eps,
        from_time,
    })
}
