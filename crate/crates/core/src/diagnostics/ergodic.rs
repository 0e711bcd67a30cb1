//! Ergodic velocity averages `(1/T) int_0^T |u|_{W^{1,2}}^2 dt`.

use crate::dynamics::TrajectoryRecord;
use crate::spectral::sobolev12_norm_sq;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ErgodicReport {
    /// Final average over `(0, T]`.
    pub average: f64,
    /// Partial averages `(t_i, avg over (0, t_i])` for boundedness
    /// inspection.
    pub partials: Vec<(f64, f64)>,
}

/// Time-averaged squared Sobolev norm of the velocity over the recorded
/// samples in `(0, T]`.
pub fn ergodic_velocity_average(record: &TrajectoryRecord, t_end: f64) -> Result<ErgodicReport> {
    let spacing = record.sample_spacing();
    let mut acc = 0.0;
    let mut partials = Vec::new();
    let mut seen = false;
    for (t, state) in record.times.iter().zip(&record.states) {
        if *t <= 0.0 || *t > t_end + 1e-9 {
            continue;
        }
        seen = true;
        acc += sobolev12_norm_sq(&state.u) * spacing;
        partials.push((*t, acc / *t));
    }
    if !seen {
        let (lo, hi) = record.time_range();
        return Err(Error::WindowOutOfRange {
            lo: 0.0,
            hi: t_end,
            rec_lo: lo,
            rec_hi: hi,
        });
    }
    Ok(ErgodicReport {
        average: partials.last().map(|(_, a)| *a).unwrap_or(0.0),
        partials,
    })
}
