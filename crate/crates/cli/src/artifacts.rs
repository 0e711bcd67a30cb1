//! Run-directory artifacts: trajectory CSV, binary snapshots, the Wiener
//! increment log, and their reconstruction into a replayable record.

use crate::config::RunConfig;
use scns_core::diagnostics::energy;
use scns_core::dynamics::{read_snapshot, write_snapshot, State, TrajectoryRecord};
use scns_core::spectral::sobolev12_norm_sq;
use scns_core::{Error, Result};
use std::io::{BufWriter, Read, Write};
use std::path::Path;

pub const INCREMENTS_MAGIC: &[u8; 6] = b"SCNSW1";

/// Full-precision, locale-independent float formatting.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.17e}")
}

pub fn write_trajectory_csv(dir: &Path, record: &TrajectoryRecord) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(dir.join("trajectory.csv"))?);
    writeln!(w, "t,mass,energy,kinetic,sobolev12_sq,min_rho,seed")?;
    for state in &record.states {
        let e = energy(state, &record.params)?;
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_f(state.t),
            fmt_f(state.total_mass()),
            fmt_f(e.total),
            fmt_f(e.kinetic),
            fmt_f(sobolev12_norm_sq(&state.u)),
            fmt_f(state.min_density()),
            record.seed
        )?;
    }
    Ok(())
}

pub fn snapshot_name(step: u64) -> String {
    format!("snap_{step:010}.bin")
}

pub fn write_snapshots(dir: &Path, record: &TrajectoryRecord) -> Result<Vec<String>> {
    let snap_dir = dir.join("snapshots");
    std::fs::create_dir_all(&snap_dir)?;
    let mut names = Vec::new();
    for (state, step) in record.states.iter().zip(&record.state_steps) {
        let name = snapshot_name(*step);
        let mut w = BufWriter::new(std::fs::File::create(snap_dir.join(&name))?);
        write_snapshot(&mut w, state, &record.params, record.noise.k_count())?;
        names.push(format!("snapshots/{name}"));
    }
    Ok(names)
}

pub fn write_increments(dir: &Path, record: &TrajectoryRecord) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(dir.join("increments.bin"))?);
    w.write_all(INCREMENTS_MAGIC)?;
    w.write_all(&(record.noise.k_count() as u32).to_le_bytes())?;
    w.write_all(&record.total_steps.to_le_bytes())?;
    w.write_all(&record.config.dt.to_le_bytes())?;
    for row in &record.increments {
        for v in row {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_increments(dir: &Path, k_expected: usize) -> Result<(Vec<Vec<f64>>, f64)> {
    let mut r = std::fs::File::open(dir.join("increments.bin"))?;
    let mut magic = [0u8; 6];
    r.read_exact(&mut magic)?;
    if &magic != INCREMENTS_MAGIC {
        return Err(Error::SnapshotFormat("bad increments magic".into()));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let k = u32::from_le_bytes(b4) as usize;
    if k != k_expected {
        return Err(Error::SnapshotFormat(format!(
            "increment log has K = {k}, config says {k_expected}"
        )));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let steps = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let dt = f64::from_le_bytes(b8);
    let mut rows = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut row = Vec::with_capacity(k);
        for _ in 0..k {
            r.read_exact(&mut b8)?;
            row.push(f64::from_le_bytes(b8));
        }
        rows.push(row);
    }
    Ok((rows, dt))
}

/// Rebuilds a replayable record from run-directory artifacts: every stored
/// snapshot plus the increment log.
pub fn load_record(run_dir: &Path) -> Result<(RunConfig, TrajectoryRecord)> {
    let config = RunConfig::from_path(&run_dir.join("config.cfg"))?;
    let snap_dir = run_dir.join("snapshots");
    let mut entries: Vec<(u64, State)> = Vec::new();
    for entry in std::fs::read_dir(&snap_dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let Some(step_str) = name
            .strip_prefix("snap_")
            .and_then(|s| s.strip_suffix(".bin"))
        else {
            continue;
        };
        let step = step_str
            .parse::<u64>()
            .map_err(|_| Error::SnapshotFormat(format!("bad snapshot name {name}")))?;
        let mut f = std::fs::File::open(entry.path())?;
        let snap = read_snapshot(&mut f)?;
        entries.push((step, snap.state));
    }
    if entries.is_empty() {
        return Err(Error::Coverage(format!(
            "no snapshots under {}",
            snap_dir.display()
        )));
    }
    entries.sort_by_key(|(s, _)| *s);
    let (increments, dt) = read_increments(run_dir, config.noise.k_count())?;
    if (dt - config.stepper.dt).abs() > 1e-12 * dt.max(1.0) {
        return Err(Error::SnapshotFormat(format!(
            "increment log dt = {dt} does not match config dt = {}",
            config.stepper.dt
        )));
    }
    let seed = config.effective_seed()?;
    let record = TrajectoryRecord {
        params: config.params,
        noise: config.noise.clone(),
        config: config.stepper,
        seed,
        member: 0,
        times: entries.iter().map(|(_, s)| s.t).collect(),
        states: entries.iter().map(|(_, s)| s.clone()).collect(),
        state_steps: entries.iter().map(|(s, _)| *s).collect(),
        total_steps: increments.len() as u64,
        increments,
    };
    Ok((config, record))
}
