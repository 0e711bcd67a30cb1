//! Time-shift machinery, Krylov-Bogoliubov averages and the two-view
//! stationarity report.

use crate::dynamics::{State, TrajectoryRecord};
use crate::model::ModelParams;
use crate::spectral::{SpectralField, SpectralVectorField, TorusGrid};
use crate::{Error, Result};

use super::functional::Functional;
use super::law::{ks_critical_value, ks_distance, EmpiricalLaw};
use super::mollify::mollified_evaluation;

/// Time shift `S_tau`: drops the first `tau` of the record so the shifted
/// record's state at time `t` is the original state at `t + tau`, bitwise.
pub fn shift(record: &TrajectoryRecord, tau: f64) -> Result<TrajectoryRecord> {
    if tau < 0.0 {
        return Err(Error::invalid("tau", "shift must be >= 0"));
    }
    let spacing = record.sample_spacing();
    let k = (tau / spacing).round();
    if (k * spacing - tau).abs() > 1e-9 * spacing.max(1.0) {
        return Err(Error::invalid(
            "tau",
            format!("shift must be a multiple of the sample spacing {spacing}"),
        ));
    }
    let k = k as usize;
    if k >= record.states.len() {
        let (lo, hi) = record.time_range();
        return Err(Error::WindowOutOfRange {
            lo: tau,
            hi: tau,
            rec_lo: lo,
            rec_hi: hi,
        });
    }
    let shift_steps = record.state_steps[k];
    Ok(TrajectoryRecord {
        params: record.params,
        noise: record.noise.clone(),
        config: record.config,
        seed: record.seed,
        member: record.member,
        times: record.times[k..].iter().map(|t| t - tau).collect(),
        states: record.states[k..].to_vec(),
        state_steps: record.state_steps[k..]
            .iter()
            .map(|s| s - shift_steps)
            .collect(),
        increments: record.increments[shift_steps as usize..].to_vec(),
        total_steps: record.total_steps - shift_steps,
    })
}

/// Marginal law `{F(U_omega(t))}` over an ensemble at one time instant.
pub fn marginal_law_samples(
    ensemble: &[TrajectoryRecord],
    t: f64,
    functional: &Functional,
    params: &ModelParams,
) -> Result<EmpiricalLaw> {
    let mut samples = Vec::with_capacity(ensemble.len());
    for record in ensemble {
        let state = record.state_at_time(t)?;
        samples.push(functional.eval(state, params));
    }
    Ok(EmpiricalLaw::new(functional.name(), samples))
}

/// Time-averaged empirical law: `{F(U(t_i))}` over the recorded samples in
/// `[0, t_final]`, the discrete surrogate of the averaged transition laws.
pub fn krylov_bogoliubov_average(
    record: &TrajectoryRecord,
    t_final: f64,
    functionals: &[Functional],
    params: &ModelParams,
) -> Result<Vec<EmpiricalLaw>> {
    let (_, hi) = record.time_range();
    if t_final > hi + 1e-9 {
        return Err(Error::WindowOutOfRange {
            lo: 0.0,
            hi: t_final,
            rec_lo: 0.0,
            rec_hi: hi,
        });
    }
    let mut laws: Vec<EmpiricalLaw> = functionals
        .iter()
        .map(|f| EmpiricalLaw::new(f.name(), Vec::new()))
        .collect();
    for (t, state) in record.times.iter().zip(&record.states) {
        if *t > t_final + 1e-9 {
            break;
        }
        for (law, f) in laws.iter_mut().zip(functionals) {
            law.samples.push(f.eval(state, params));
        }
    }
    Ok(laws)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    /// Marginal laws at fixed times (finite-dimensional distributions).
    Marginal,
    /// Laws of mollified path evaluations.
    Mollified,
}

impl std::fmt::Display for View {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            View::Marginal => write!(f, "marginal"),
            View::Mollified => write!(f, "mollified"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportRow {
    pub functional: String,
    pub view: View,
    pub tau: f64,
    pub distance: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    InsufficientSamples,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
            Verdict::InsufficientSamples => write!(f, "INSUFFICIENT SAMPLES"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StationarityReport {
    pub rows: Vec<ReportRow>,
    pub verdict: Verdict,
    /// Pooled sample size per side (members times probe times).
    pub sample_size: usize,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct StationarityConfig {
    /// Significance level of the permutation threshold.
    pub alpha: f64,
    pub permutations: usize,
    /// Mollifier order of the pathwise view.
    pub mollifier_m: f64,
    /// Below this pooled sample size the verdict is flagged insufficient.
    pub min_samples: usize,
    pub seed: u64,
}

impl Default for StationarityConfig {
    fn default() -> Self {
        Self {
            alpha: 0.01,
            permutations: 2000,
            mollifier_m: 16.0,
            min_samples: 8,
            seed: 0x5ca1ab1e,
        }
    }
}

/// Compares the laws of every functional at probe times against their
/// `tau`-shifted counterparts in both views, pooling samples across ensemble
/// members and probe times.
pub fn stationarity_report(
    ensemble: &[TrajectoryRecord],
    tau_list: &[f64],
    t_list: &[f64],
    functionals: &[Functional],
    params: &ModelParams,
    cfg: &StationarityConfig,
) -> Result<StationarityReport> {
    if ensemble.is_empty() {
        return Err(Error::Coverage("empty ensemble".into()));
    }
    if t_list.is_empty() || tau_list.is_empty() {
        return Err(Error::Coverage("need at least one probe time and shift".into()));
    }
    let max_t = t_list.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_t = t_list.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_tau = tau_list.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let horizon = max_t + max_tau;
    let margin = if cfg.mollifier_m > 0.0 {
        1.0 / cfg.mollifier_m
    } else {
        0.0
    };
    for record in ensemble {
        let (lo, hi) = record.time_range();
        if horizon + margin > hi + 1e-9 {
            return Err(Error::Coverage(format!(
                "records end at {hi} but probes need {}",
                horizon + margin
            )));
        }
        if min_t - margin < lo - 1e-9 {
            return Err(Error::Coverage(format!(
                "records start at {lo} but the mollified view needs {}",
                min_t - margin
            )));
        }
    }

    let sample_size = ensemble.len() * t_list.len();
    let threshold = ks_critical_value(
        sample_size,
        sample_size,
        cfg.alpha,
        cfg.permutations,
        cfg.seed,
    );

    let mut rows = Vec::new();
    for functional in functionals {
        for &tau in tau_list {
            // marginal view: pooled {F(U_w(t_j))} vs {F(U_w(t_j + tau))}
            let mut base = Vec::with_capacity(sample_size);
            let mut shifted = Vec::with_capacity(sample_size);
            for record in ensemble {
                for &t in t_list {
                    base.push(functional.eval(record.state_at_time(t)?, params));
                    shifted.push(functional.eval(record.state_at_time(t + tau)?, params));
                }
            }
            let d = ks_distance(
                &EmpiricalLaw::new(functional.name(), base),
                &EmpiricalLaw::new(functional.name(), shifted),
            )?;
            rows.push(ReportRow {
                functional: functional.name(),
                view: View::Marginal,
                tau,
                distance: d,
                threshold,
                pass: d <= threshold,
            });

            // mollified (pathwise) view
            if cfg.mollifier_m > 0.0 {
                let mut base = Vec::with_capacity(sample_size);
                let mut shifted = Vec::with_capacity(sample_size);
                for record in ensemble {
                    for &t in t_list {
                        base.push(mollified_evaluation(
                            record,
                            t,
                            cfg.mollifier_m,
                            functional,
                            params,
                        )?);
                        shifted.push(mollified_evaluation(
                            record,
                            t + tau,
                            cfg.mollifier_m,
                            functional,
                            params,
                        )?);
                    }
                }
                let d = ks_distance(
                    &EmpiricalLaw::new(functional.name(), base),
                    &EmpiricalLaw::new(functional.name(), shifted),
                )?;
                rows.push(ReportRow {
                    functional: functional.name(),
                    view: View::Mollified,
                    tau,
                    distance: d,
                    threshold,
                    pass: d <= threshold,
                });
            }
        }
    }

    let verdict = if sample_size < cfg.min_samples {
        Verdict::InsufficientSamples
    } else if rows.iter().all(|r| r.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(StationarityReport {
        rows,
        verdict,
        sample_size,
        alpha: cfg.alpha,
    })
}

/// Deterministic non-stationary control signal: spatially constant density
/// ramping linearly in time, zero velocity. Any strictly monotone functional
/// of it separates shifted laws completely.
pub fn ramp_surrogate_ensemble(
    members: usize,
    t_final: f64,
    spacing: f64,
) -> Result<Vec<TrajectoryRecord>> {
    let grid = TorusGrid::new(1, 8, 1, 2.0)?;
    let params = ModelParams::default();
    let config = crate::dynamics::StepperConfig::new(spacing);
    let samples = (t_final / spacing).round() as usize + 1;
    (0..members)
        .map(|member| {
            let mut times = Vec::with_capacity(samples);
            let mut states = Vec::with_capacity(samples);
            let mut state_steps = Vec::with_capacity(samples);
            for i in 0..samples {
                let t = i as f64 * spacing;
                let state = State::new(
                    t,
                    SpectralField::constant(grid, 1.0 + t),
                    SpectralVectorField::zeros(grid),
                )?;
                times.push(t);
                states.push(state);
                state_steps.push(i as u64);
            }
            Ok(TrajectoryRecord {
                params,
                noise: crate::model::NoiseModel::off(1),
                config,
                seed: 0,
                member: member as u64,
                times,
                states,
                state_steps,
                increments: vec![Vec::new(); samples.saturating_sub(1)],
                total_steps: samples.saturating_sub(1) as u64,
            })
        })
        .collect()
}
