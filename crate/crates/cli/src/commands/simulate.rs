use crate::artifacts::{write_increments, write_snapshots, write_trajectory_csv};
use crate::config::RunConfig;
use crate::manifest::Manifest;
use scns_core::dynamics::{simulate, State};
use scns_core::Result;
use std::path::PathBuf;
use std::time::Instant;

pub fn run(config: &RunConfig, out_override: Option<PathBuf>) -> Result<PathBuf> {
    let out = out_override.unwrap_or_else(|| config.out.clone());
    std::fs::create_dir_all(&out)?;
    std::fs::write(out.join("config.cfg"), &config.raw)?;

    let seed = config.effective_seed()?;
    let start = Instant::now();
    let initial = State::rest(config.grid, &config.params);
    let record = simulate(
        &initial,
        config.t_final,
        &config.params,
        &config.noise,
        &config.stepper,
        seed,
        0,
    )?;

    write_trajectory_csv(&out, &record)?;
    let snapshot_names = write_snapshots(&out, &record)?;
    write_increments(&out, &record)?;

    let mut manifest = Manifest::new(&config.raw, seed, 1);
    manifest.wall_clock_s = start.elapsed().as_secs_f64();
    manifest.add_file(&out, "config.cfg")?;
    manifest.add_file(&out, "trajectory.csv")?;
    manifest.add_file(&out, "increments.bin")?;
    for name in &snapshot_names {
        manifest.add_file(&out, name)?;
    }
    manifest.write(&out)?;

    println!(
        "simulate: {} steps to t = {} in {:.2}s, artifacts under {}",
        record.total_steps,
        config.t_final,
        manifest.wall_clock_s,
        out.display()
    );
    Ok(out)
}
