//! Sampled trajectories with the Wiener increments that produced them.

use crate::model::{ModelParams, NoiseModel};
use crate::{Error, Result};

use super::state::State;
use super::stepper::{em_step, NoiseContext, StepperConfig};
use super::wiener::WienerPath;

/// A simulated path: states sampled at a stride, plus every per-step Wiener
/// increment so that diagnostics can replay any window exactly.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub params: ModelParams,
    pub noise: NoiseModel,
    pub config: StepperConfig,
    pub seed: u64,
    pub member: u64,
    /// Sample times of the recorded states.
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// Step index of each recorded state.
    pub state_steps: Vec<u64>,
    /// Per-step increments `dW_k`, one row per integration step.
    pub increments: Vec<Vec<f64>>,
    pub total_steps: u64,
}

impl TrajectoryRecord {
    pub fn time_range(&self) -> (f64, f64) {
        (
            *self.times.first().unwrap_or(&0.0),
            *self.times.last().unwrap_or(&0.0),
        )
    }

    /// Spacing between recorded samples (stride times dt).
    pub fn sample_spacing(&self) -> f64 {
        self.config.dt * self.config.stride as f64
    }

    pub fn wiener_path(&self) -> WienerPath {
        WienerPath::new(
            self.seed,
            self.member,
            self.noise.k_count(),
            self.config.dt,
            self.config.substeps,
        )
    }

    /// Step index of a time instant; errors unless `t` lies on the step grid
    /// inside the record.
    pub fn step_of_time(&self, t: f64) -> Result<u64> {
        let dt = self.config.dt;
        let (lo, hi) = self.time_range();
        if t < lo - 1e-9 || t > hi + 1e-9 {
            return Err(Error::WindowOutOfRange {
                lo: t,
                hi: t,
                rec_lo: lo,
                rec_hi: hi,
            });
        }
        let step = (t / dt).round();
        if (step * dt - t).abs() > 1e-7 * dt.max(1.0) {
            return Err(Error::Coverage(format!(
                "time {t} does not lie on the step grid (dt = {dt})"
            )));
        }
        Ok(step as u64)
    }

    /// Recorded state at exactly time `t`.
    pub fn state_at_time(&self, t: f64) -> Result<&State> {
        let i = self
            .times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-9 * t.abs().max(1.0))
            .ok_or_else(|| Error::Coverage(format!("no recorded sample at t = {t}")))?;
        Ok(&self.states[i])
    }

    /// Index of the latest recorded state at or before step `step`.
    fn anchor_index(&self, step: u64) -> Result<usize> {
        self.state_steps
            .iter()
            .rposition(|&s| s <= step)
            .ok_or_else(|| Error::Coverage("record holds no state before the window".into()))
    }

    /// Replays `[step_lo, step_hi)` from the nearest recorded anchor, calling
    /// the visitor with `(pre-state, increments, post-state)` for every step
    /// inside the window. Bit-exact thanks to seed determinism.
    pub fn replay<F>(&self, step_lo: u64, step_hi: u64, mut visitor: F) -> Result<State>
    where
        F: FnMut(&State, &[f64], &State) -> Result<()>,
    {
        if step_hi > self.total_steps {
            let (lo, hi) = self.time_range();
            return Err(Error::WindowOutOfRange {
                lo: step_lo as f64 * self.config.dt,
                hi: step_hi as f64 * self.config.dt,
                rec_lo: lo,
                rec_hi: hi,
            });
        }
        let anchor = self.anchor_index(step_lo)?;
        let mut current = self.states[anchor].clone();
        let mut step = self.state_steps[anchor];
        let noise_ctx = NoiseContext::new(self.noise.clone(), *current.grid());
        let path = self.wiener_path();
        while step < step_hi {
            let dws = &self.increments[step as usize];
            let next = em_step(
                &current,
                &self.params,
                &noise_ctx,
                &self.config,
                dws,
                &path,
                step,
            )?;
            if step >= step_lo {
                visitor(&current, dws, &next)?;
            }
            current = next;
            step += 1;
        }
        Ok(current)
    }

    /// Validates a `[t0, t1]` window and maps it to step indices.
    pub fn window_steps(&self, t0: f64, t1: f64) -> Result<(u64, u64)> {
        if t1 <= t0 {
            return Err(Error::Coverage(format!("empty window [{t0}, {t1}]")));
        }
        Ok((self.step_of_time(t0)?, self.step_of_time(t1)?))
    }
}

/// Integrates the system from `initial` to `t_final`, recording at the
/// configured stride. Bit-reproducible from `(seed, member)`.
pub fn simulate(
    initial: &State,
    t_final: f64,
    params: &ModelParams,
    noise: &NoiseModel,
    config: &StepperConfig,
    seed: u64,
    member: u64,
) -> Result<TrajectoryRecord> {
    if t_final < 0.0 {
        return Err(Error::invalid("t_final", "horizon must be >= 0"));
    }
    config.validate()?;
    params.validate(initial.grid().dim())?;
    initial.validate(false)?;

    let steps = (t_final / config.dt).round() as u64;
    let grid = *initial.grid();
    let noise_ctx = NoiseContext::new(noise.clone(), grid);
    let path = WienerPath::new(seed, member, noise.k_count(), config.dt, config.substeps);

    let mut record = TrajectoryRecord {
        params: *params,
        noise: noise.clone(),
        config: *config,
        seed,
        member,
        times: vec![initial.t],
        states: vec![initial.clone()],
        state_steps: vec![0],
        increments: Vec::with_capacity(steps as usize),
        total_steps: steps,
    };

    let mut current = initial.clone();
    for step in 0..steps {
        let dws = path.step_increments(step);
        let next = em_step(&current, params, &noise_ctx, config, &dws, &path, step)?;
        record.increments.push(dws);
        current = next;
        let done = step + 1;
        if done % config.stride as u64 == 0 || done == steps {
            record.times.push(current.t);
            record.states.push(current.clone());
            record.state_steps.push(done);
        }
    }
    Ok(record)
}

/// Runs an ensemble of trajectories concurrently; member `i` uses stream
/// `(seed, member_offset + i)`. Results preserve member order.
#[allow(clippy::too_many_arguments)]
pub fn simulate_ensemble(
    initial: &State,
    t_final: f64,
    params: &ModelParams,
    noise: &NoiseModel,
    config: &StepperConfig,
    seed: u64,
    members: usize,
    jobs: usize,
) -> Result<Vec<TrajectoryRecord>> {
    let jobs = jobs.max(1).min(members.max(1));
    let mut results: Vec<Option<Result<TrajectoryRecord>>> = (0..members).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<&mut Option<Result<TrajectoryRecord>>>> =
        results.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= members {
                    break;
                }
                let r = simulate(initial, t_final, params, noise, config, seed, i as u64);
                **slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("every member visited"))
        .collect()
}
