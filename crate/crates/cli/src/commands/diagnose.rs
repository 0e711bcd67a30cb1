use crate::artifacts::{fmt_f, load_record};
use scns_core::diagnostics::{
    density_lower_bound, effective_viscous_flux_report, empirical_korn_constant,
    energy_balance_residual, ergodic_velocity_average, mass_ode_residual,
    renorm_continuity_residual, BFunction, FluxLevel,
};
use scns_core::spectral::symmetry_defect;
use scns_core::{Error, Result};
use std::io::Write;
use std::path::PathBuf;

pub struct DiagnoseArgs {
    pub run_dir: PathBuf,
    pub which: Vec<String>,
    pub window: Option<(f64, f64)>,
    pub alpha: Option<f64>,
    pub level: Option<String>,
}

/// Runs the selected audits; returns `true` when every hard run invariant
/// (positivity, symmetry-class membership) held.
pub fn run(args: &DiagnoseArgs) -> Result<bool> {
    let (config, record) = load_record(&args.run_dir)?;
    let reports = args.run_dir.join("reports");
    std::fs::create_dir_all(&reports)?;
    let mut summary = String::new();

    // hard invariants of the recorded states
    let mut invariants_ok = true;
    for state in &record.states {
        if state.min_density() <= 0.0 {
            invariants_ok = false;
            summary.push_str(&format!(
                "INVARIANT FAIL: nonpositive density at t = {}\n",
                state.t
            ));
        }
        if config.stepper.symmetric {
            let defect = symmetry_defect(&state.rho, &state.u)?;
            if defect >= 1e-10 {
                invariants_ok = false;
                summary.push_str(&format!(
                    "INVARIANT FAIL: symmetry defect {defect:.3e} at t = {}\n",
                    state.t
                ));
            }
        }
    }

    let (lo, hi) = record.time_range();
    let window = args.window.unwrap_or((lo, hi));

    for which in &args.which {
        match which.as_str() {
            "energy" => {
                let b = energy_balance_residual(&record, window)?;
                let mut w = std::fs::File::create(reports.join("energy_balance.csv"))?;
                writeln!(w, "term,value")?;
                writeln!(w, "window_start,{}", fmt_f(b.window.0))?;
                writeln!(w, "window_end,{}", fmt_f(b.window.1))?;
                writeln!(w, "energy_start,{}", fmt_f(b.energy_start))?;
                writeln!(w, "energy_end,{}", fmt_f(b.energy_end))?;
                for (name, value) in &b.terms {
                    writeln!(w, "{name},{}", fmt_f(*value))?;
                }
                writeln!(w, "residual,{}", fmt_f(b.residual))?;
                summary.push_str(&format!("energy balance residual = {:.6e}\n", b.residual));
            }
            "mass" => {
                let res = mass_ode_residual(&record)?;
                let mut w = std::fs::File::create(reports.join("mass_ode.csv"))?;
                writeln!(w, "term,value")?;
                writeln!(w, "max_residual,{}", fmt_f(res))?;
                writeln!(w, "dt,{}", fmt_f(record.config.dt))?;
                summary.push_str(&format!(
                    "mass ODE residual = {res:.6e} ({}x dt)\n",
                    res / record.config.dt
                ));
            }
            "renorm" => {
                let mut w = std::fs::File::create(reports.join("renorm.csv"))?;
                writeln!(w, "b,residual")?;
                for (name, b) in [
                    ("identity", BFunction::Identity),
                    ("zlogz", BFunction::ZLogZ),
                ] {
                    let res = renorm_continuity_residual(&record, &b, window)?;
                    writeln!(w, "{name},{}", fmt_f(res))?;
                    summary.push_str(&format!("renormalized continuity ({name}) = {res:.6e}\n"));
                }
            }
            "evf" => {
                let level = match args.level.as_deref() {
                    Some("delta") => FluxLevel::Delta {
                        alpha: args.alpha.ok_or_else(|| {
                            Error::invalid("alpha", "delta-level flux audit needs --alpha")
                        })?,
                    },
                    _ => FluxLevel::Epsilon,
                };
                let report = effective_viscous_flux_report(&record, window, level)?;
                let mut w = std::fs::File::create(reports.join("flux.csv"))?;
                writeln!(w, "term,value")?;
                writeln!(w, "boundary_difference,{}", fmt_f(report.boundary_difference))?;
                for (name, value) in &report.terms {
                    writeln!(w, "{name},{}", fmt_f(*value))?;
                }
                writeln!(w, "cross_term,{}", fmt_f(report.cross_term))?;
                writeln!(w, "residual,{}", fmt_f(report.residual))?;
                writeln!(w, "gained_pressure,{}", fmt_f(report.gained_pressure))?;
                writeln!(w, "gained_artificial,{}", fmt_f(report.gained_artificial))?;
                writeln!(w, "gained_kinetic,{}", fmt_f(report.gained_kinetic))?;
                summary.push_str(&format!("flux residual = {:.6e}\n", report.residual));
            }
            "korn" => {
                let c = empirical_korn_constant(config.grid, &config.params, 100, 1234)?;
                let mut w = std::fs::File::create(reports.join("korn.csv"))?;
                writeln!(w, "term,value")?;
                writeln!(w, "samples,100")?;
                writeln!(w, "empirical_constant,{}", fmt_f(c))?;
                summary.push_str(&format!("empirical Korn-Poincare constant = {c:.6e}\n"));
            }
            "lower-bound" => {
                let from = window.0.max(1.0_f64.min(hi));
                let report = density_lower_bound(&record, from)?;
                let mut w = std::fs::File::create(reports.join("lower_bound.csv"))?;
                writeln!(w, "term,value")?;
                writeln!(w, "from_time,{}", fmt_f(report.from_time))?;
                writeln!(w, "observed_min,{}", fmt_f(report.observed_min))?;
                writeln!(w, "comparison_bound,{}", fmt_f(report.comparison_bound))?;
                writeln!(w, "d_rn,{}", fmt_f(report.d_rn))?;
                writeln!(w, "m_eps,{}", fmt_f(report.m_eps))?;
                summary.push_str(&format!(
                    "density floor {:.6e} vs bound {:.6e}\n",
                    report.observed_min, report.comparison_bound
                ));
            }
            "ergodic" => {
                let report = ergodic_velocity_average(&record, hi)?;
                let mut w = std::fs::File::create(reports.join("ergodic.csv"))?;
                writeln!(w, "t,partial_average")?;
                for (t, avg) in &report.partials {
                    writeln!(w, "{},{}", fmt_f(*t), fmt_f(*avg))?;
                }
                summary.push_str(&format!("ergodic velocity average = {:.6e}\n", report.average));
            }
            other => {
                return Err(Error::invalid(
                    "which",
                    format!(
                        "unknown audit `{other}` (energy | mass | renorm | evf | korn | lower-bound | ergodic)"
                    ),
                ))
            }
        }
    }

    std::fs::write(reports.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(invariants_ok)
}

pub fn resolve_run_dir(run: Option<PathBuf>, config: Option<PathBuf>) -> Result<PathBuf> {
    match (run, config) {
        (Some(dir), _) => Ok(dir),
        (None, Some(cfg)) => {
            let parsed = crate::config::RunConfig::from_path(&cfg)?;
            Ok(parsed.out)
        }
        (None, None) => Err(Error::invalid("run", "diagnose needs --run <dir> or --config <path>")),
    }
}
