//! Mollified path evaluation: smearing a sampled trajectory against a
//! compactly supported bump before applying a functional, the constructive
//! side of the equivalence between pathwise and marginal stationarity.

use crate::dynamics::{State, TrajectoryRecord};
use crate::model::ModelParams;
use crate::spectral::SpectralVectorField;
use crate::{Error, Result};

use super::functional::Functional;

/// Polynomial bump `psi_m(s) = (15 m / 16)(1 - (m s)^2)^2` on
/// `[-1/m, 1/m]`, normalized to unit mass.
pub fn mollifier(m: f64, s: f64) -> f64 {
    let y = m * s;
    if y.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - y * y;
        15.0 * m / 16.0 * w * w
    }
}

/// State smeared around `t`: `int U(s) psi_m(t - s) ds` by discrete
/// quadrature over the recorded samples, with the weights renormalized to
/// exact unit mass so a time-constant record reproduces itself for every `m`.
pub fn mollified_state(record: &TrajectoryRecord, t: f64, m: f64) -> Result<State> {
    if !(m > 0.0) {
        return Err(Error::invalid("m", "mollifier order must be positive"));
    }
    let (lo, hi) = record.time_range();
    if t - 1.0 / m < lo - 1e-9 || t + 1.0 / m > hi + 1e-9 {
        return Err(Error::WindowOutOfRange {
            lo: t - 1.0 / m,
            hi: t + 1.0 / m,
            rec_lo: lo,
            rec_hi: hi,
        });
    }
    let mut weights = Vec::with_capacity(record.times.len());
    let mut total = 0.0;
    for &s in &record.times {
        let w = mollifier(m, t - s);
        weights.push(w);
        total += w;
    }
    if total <= 0.0 {
        return Err(Error::Coverage(format!(
            "no samples inside the mollifier support around t = {t}"
        )));
    }
    let grid = *record.states[0].grid();
    let mut rho = crate::spectral::SpectralField::zeros(grid);
    let mut u = SpectralVectorField::zeros(grid);
    for (w, state) in weights.iter().zip(&record.states) {
        if *w == 0.0 {
            continue;
        }
        let a = w / total;
        rho = rho.lin_comb(1.0, &state.rho.to_samples(), a)?;
        u = u.lin_comb(1.0, &state.u.to_samples(), a)?;
    }
    State::new(t, rho, u)
}

/// `F` applied to the mollified state.
pub fn mollified_evaluation(
    record: &TrajectoryRecord,
    t: f64,
    m: f64,
    functional: &Functional,
    params: &ModelParams,
) -> Result<f64> {
    let state = mollified_state(record, t, m)?;
    Ok(functional.eval(&state, params))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_has_unit_mass() {
        // composite Simpson on the support
        for m in [4.0, 16.0, 64.0] {
            let n = 4000;
            let h = 2.0 / m / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                let a = -1.0 / m + i as f64 * h;
                let mid = a + 0.5 * h;
                let b = a + h;
                acc += h / 6.0 * (mollifier(m, a) + 4.0 * mollifier(m, mid) + mollifier(m, b));
            }
            assert!((acc - 1.0).abs() < 1e-10, "m = {m}: mass {acc}");
        }
    }

    #[test]
    fn bump_is_compactly_supported() {
        assert_eq!(mollifier(4.0, 0.26), 0.0);
        assert_eq!(mollifier(4.0, -0.25), 0.0);
        assert!(mollifier(4.0, 0.0) > 0.0);
    }
}
