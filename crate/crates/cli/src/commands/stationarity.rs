use crate::artifacts::fmt_f;
use crate::config::RunConfig;
use crate::manifest::Manifest;
use scns_core::dynamics::{simulate_ensemble, State};
use scns_core::stationarity::{
    ramp_surrogate_ensemble, shift, stationarity_report, StationarityConfig, StationarityReport,
};
use scns_core::Result;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

pub fn run(
    config: &RunConfig,
    out_override: Option<PathBuf>,
    jobs: usize,
    ramp: bool,
) -> Result<StationarityReport> {
    let out = out_override.unwrap_or_else(|| config.out.clone());
    std::fs::create_dir_all(&out)?;
    let seed = config.effective_seed()?;
    let opts = &config.stationarity;
    let start = Instant::now();

    let max_probe = opts.probe_times.iter().cloned().fold(0.0, f64::max);
    let max_tau = opts.tau_list.iter().cloned().fold(0.0, f64::max);
    let margin = if opts.mollifier_m > 0.0 {
        1.0 / opts.mollifier_m
    } else {
        0.0
    };

    let ensemble = if ramp || opts.ramp_control {
        let spacing = config.stepper.dt * config.stepper.stride as f64;
        ramp_surrogate_ensemble(opts.ensemble, max_probe + max_tau + margin + spacing, spacing)?
    } else {
        let horizon = opts.burn_in + max_probe + max_tau + margin + config.stepper.dt;
        let initial = State::rest(config.grid, &config.params);
        let raw = simulate_ensemble(
            &initial,
            horizon,
            &config.params,
            &config.noise,
            &config.stepper,
            seed,
            opts.ensemble,
            jobs,
        )?;
        raw.iter()
            .map(|r| shift(r, opts.burn_in))
            .collect::<Result<Vec<_>>>()?
    };

    let cfg = StationarityConfig {
        alpha: opts.alpha,
        permutations: opts.permutations,
        mollifier_m: opts.mollifier_m,
        min_samples: 8,
        seed,
    };
    let report = stationarity_report(
        &ensemble,
        &opts.tau_list,
        &opts.probe_times,
        &opts.functionals,
        &config.params,
        &cfg,
    )?;

    let mut w = std::fs::File::create(out.join("stationarity.csv"))?;
    writeln!(w, "functional,view,tau,distance,threshold,pass")?;
    for row in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            row.functional,
            row.view,
            fmt_f(row.tau),
            fmt_f(row.distance),
            fmt_f(row.threshold),
            row.pass
        )?;
    }
    let verdict_text = format!(
        "verdict = {}\nsample_size = {}\nalpha = {}\nburn_in = {}\n",
        report.verdict, report.sample_size, report.alpha, opts.burn_in
    );
    std::fs::write(out.join("verdict.txt"), &verdict_text)?;

    let mut manifest = Manifest::new(&config.raw, seed, opts.ensemble);
    manifest.wall_clock_s = start.elapsed().as_secs_f64();
    manifest.add_file(&out, "stationarity.csv")?;
    manifest.add_file(&out, "verdict.txt")?;
    manifest.write(&out)?;

    print!("{verdict_text}");
    Ok(report)
}
