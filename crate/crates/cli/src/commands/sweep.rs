use crate::artifacts::fmt_f;
use crate::config::RunConfig;
use scns_core::diagnostics::energy;
use scns_core::dynamics::{simulate, State, TrajectoryRecord};
use scns_core::model::solve_m_epsilon;
use scns_core::spectral::{tail_fraction, TorusGrid};
use scns_core::{Error, Result};
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Epsilon,
    Delta,
    CutoffN,
    TruncationR,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "epsilon" => Ok(SweepAxis::Epsilon),
            "delta" => Ok(SweepAxis::Delta),
            "N" | "n" => Ok(SweepAxis::CutoffN),
            "R" | "r" => Ok(SweepAxis::TruncationR),
            other => Err(Error::invalid(
                "axis",
                format!("unknown sweep axis `{other}` (epsilon | delta | N | R)"),
            )),
        }
    }
}

struct CellStats {
    value: f64,
    m_eps: f64,
    mass_mean: f64,
    energy_q25: f64,
    energy_q50: f64,
    energy_q75: f64,
    min_rho: f64,
    u_tail_fraction: f64,
    gained_pressure: f64,
    gained_kinetic: f64,
}

fn apply_axis(config: &RunConfig, axis: SweepAxis, value: f64) -> Result<RunConfig> {
    let mut cell = config.clone();
    match axis {
        SweepAxis::Epsilon => cell.params.epsilon = value,
        SweepAxis::Delta => cell.params.delta = value,
        SweepAxis::CutoffN => {
            let n_cut = value.round() as usize;
            cell.grid = TorusGrid::new(
                config.grid.dim(),
                config.grid.points(),
                n_cut,
                config.grid.length(),
            )?;
        }
        SweepAxis::TruncationR => cell.params.r_trunc = value,
    }
    cell.params.validate(cell.grid.dim())?;
    Ok(cell)
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

fn cell_stats(cell: &RunConfig, value: f64, seed: u64) -> Result<CellStats> {
    let initial = State::rest(cell.grid, &cell.params);
    let record: TrajectoryRecord = simulate(
        &initial,
        cell.t_final,
        &cell.params,
        &cell.noise,
        &cell.stepper,
        seed,
        0,
    )?;
    let burn = (cell.t_final * 0.5).min(cell.stationarity.burn_in);
    let mut energies = Vec::new();
    let mut mass_acc = 0.0;
    let mut min_rho = f64::INFINITY;
    let mut tail_acc = 0.0;
    let mut gained_p = 0.0;
    let mut gained_k = 0.0;
    let mut count = 0usize;
    for (t, state) in record.times.iter().zip(&record.states) {
        if *t < burn {
            continue;
        }
        count += 1;
        let e = energy(state, &cell.params)?;
        energies.push(e.total);
        mass_acc += state.total_mass();
        min_rho = min_rho.min(state.min_density());
        let shell = cell.grid.cutoff() / 2;
        let tail: f64 = state
            .u
            .components()
            .iter()
            .map(|c| tail_fraction(c, shell))
            .sum::<f64>()
            / cell.grid.dim() as f64;
        tail_acc += tail;
        // gained-integrability integrands with the unit exponent shift
        let w = cell.grid.quad_weight();
        let rho = state.rho.to_samples();
        let u2 = state.u.magnitude_sq();
        for (&r, &m) in rho.samples().iter().zip(u2.samples()) {
            gained_p += cell.params.a * r.powf(cell.params.gamma + 1.0) * w;
            gained_k += r * r * m * w;
        }
    }
    if count == 0 {
        return Err(Error::Coverage(
            "sweep cell has no samples past the burn-in".into(),
        ));
    }
    energies.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let m_eps = if cell.params.epsilon > 0.0 {
        solve_m_epsilon(cell.params.epsilon, cell.params.m0)?
    } else {
        cell.params.m0
    };
    Ok(CellStats {
        value,
        m_eps,
        mass_mean: mass_acc / count as f64,
        energy_q25: quantile(&energies, 0.25),
        energy_q50: quantile(&energies, 0.5),
        energy_q75: quantile(&energies, 0.75),
        min_rho,
        u_tail_fraction: tail_acc / count as f64,
        gained_pressure: gained_p / count as f64,
        gained_kinetic: gained_k / count as f64,
    })
}

pub fn run(
    config: &RunConfig,
    axis: SweepAxis,
    values: &[f64],
    out_override: Option<PathBuf>,
    jobs: usize,
) -> Result<PathBuf> {
    if values.is_empty() {
        return Err(Error::invalid("values", "sweep needs at least one value"));
    }
    let out = out_override.unwrap_or_else(|| config.out.clone());
    std::fs::create_dir_all(&out)?;
    let seed = config.effective_seed()?;

    // independent cells over a small worker pool, results in axis order
    let jobs = jobs.max(1).min(values.len());
    let mut results: Vec<Option<Result<CellStats>>> = (0..values.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<&mut Option<Result<CellStats>>>> =
        results.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= values.len() {
                    break;
                }
                let r = apply_axis(config, axis, values[i])
                    .and_then(|cell| cell_stats(&cell, values[i], seed));
                **slots[i].lock().unwrap() = Some(r);
            });
        }
    });

    let mut w = std::fs::File::create(out.join("sweep.csv"))?;
    writeln!(
        w,
        "value,m_eps,mass_mean,energy_q25,energy_q50,energy_q75,min_rho,u_tail_fraction,gained_pressure,gained_kinetic"
    )?;
    for slot in results {
        let stats = slot.expect("every cell visited")?;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_f(stats.value),
            fmt_f(stats.m_eps),
            fmt_f(stats.mass_mean),
            fmt_f(stats.energy_q25),
            fmt_f(stats.energy_q50),
            fmt_f(stats.energy_q75),
            fmt_f(stats.min_rho),
            fmt_f(stats.u_tail_fraction),
            fmt_f(stats.gained_pressure),
            fmt_f(stats.gained_kinetic)
        )?;
    }
    println!("sweep: {} cells written to {}", values.len(), out.join("sweep.csv").display());
    Ok(out)
}
