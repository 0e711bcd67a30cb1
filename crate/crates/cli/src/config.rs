//! Flat `key = value` run configuration with `[section]` headers.
//!
//! Unknown keys, missing mandatory fields and constraint violations are all
//! reported with the offending field name before any compute starts.

use scns_core::dynamics::{Scheme, StepperConfig, SystemVariant};
use scns_core::model::{ModelParams, NoiseModel};
use scns_core::spectral::TorusGrid;
use scns_core::stationarity::Functional;
use scns_core::{Error, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid: TorusGrid,
    pub params: ModelParams,
    pub noise: NoiseModel,
    pub stepper: StepperConfig,
    pub t_final: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub stationarity: StationarityOptions,
    /// Raw config text, preserved for hashing and provenance copies.
    pub raw: String,
}

#[derive(Debug, Clone)]
pub struct StationarityOptions {
    pub ensemble: usize,
    pub burn_in: f64,
    pub tau_list: Vec<f64>,
    pub probe_times: Vec<f64>,
    pub functionals: Vec<Functional>,
    pub alpha: f64,
    pub permutations: usize,
    pub mollifier_m: f64,
    pub ramp_control: bool,
}

impl Default for StationarityOptions {
    fn default() -> Self {
        Self {
            ensemble: 16,
            burn_in: 50.0,
            tau_list: vec![1.0, 5.0, 10.0],
            probe_times: vec![0.5, 2.5, 4.5, 6.5, 8.5],
            functionals: vec![
                Functional::Mass,
                Functional::TotalEnergy,
                Functional::SobolevSq,
            ],
            alpha: 0.01,
            permutations: 2000,
            mollifier_m: 16.0,
            ramp_control: false,
        }
    }
}

fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut section = String::new();
    let mut map = BTreeMap::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| {
                Error::invalid("config", format!("line {}: malformed section header", lineno + 1))
            })?;
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::invalid(
                "config",
                format!("line {}: expected `key = value`", lineno + 1),
            )
        })?;
        let full = if section.is_empty() {
            key.trim().to_string()
        } else {
            format!("{section}.{}", key.trim())
        };
        map.insert(full, value.trim().to_string());
    }
    Ok(map)
}

struct Fields {
    map: BTreeMap<String, String>,
    used: std::cell::RefCell<std::collections::BTreeSet<String>>,
}

impl Fields {
    fn get(&self, key: &str) -> Option<&str> {
        if self.map.contains_key(key) {
            self.used.borrow_mut().insert(key.to_string());
        }
        self.map.get(key).map(|s| s.as_str())
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| Error::invalid(key, format!("not a number: `{v}`"))),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| Error::invalid(key, format!("not an integer: `{v}`"))),
        }
    }

    fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| Error::invalid(key, format!("not an integer: `{v}`"))),
        }
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(v) => Err(Error::invalid(key, format!("not a boolean: `{v}`"))),
        }
    }

    fn f64_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::invalid(key, format!("not a number: `{s}`")))
                })
                .collect(),
        }
    }

    fn reject_unknown(&self) -> Result<()> {
        for key in self.map.keys() {
            if !self.used.borrow().contains(key) {
                return Err(Error::invalid(key, "unknown configuration key"));
            }
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self> {
        let fields = Fields {
            map: parse_kv(text)?,
            used: Default::default(),
        };

        let d = fields.usize_or("grid.d", 2)?;
        let n = fields.usize_or("grid.n", 36)?;
        let cutoff = fields.usize_or("grid.cutoff", 8)?;
        let length = fields.f64_or("grid.length", TorusGrid::DEFAULT_LENGTH)?;
        let grid = TorusGrid::new(d, n, cutoff, length)?;

        let params = ModelParams {
            a: fields.f64_or("model.a", 1.0)?,
            gamma: fields.f64_or("model.gamma", 5.0 / 3.0)?,
            mu: fields.f64_or("model.mu", 1.0)?,
            eta: fields.f64_or("model.eta", 0.0)?,
            m0: fields.f64_or("model.m0", grid.volume())?,
            epsilon: fields.f64_or("model.epsilon", 0.1)?,
            delta: fields.f64_or("model.delta", 0.0)?,
            gamma_art: fields.f64_or("model.gamma_art", 5.0)?,
            r_trunc: fields.f64_or("model.r_trunc", 10.0)?,
            k_noise: fields.usize_or("noise.modes", 8)?,
        };
        params.validate(d)?;

        let noise = match fields.get("noise.family").unwrap_or("symmetric_trig") {
            "off" => NoiseModel::off(d),
            "symmetric_trig" => {
                let amplitude = fields.f64_or("noise.amplitude", 0.5)?;
                NoiseModel::symmetric_trig(d, amplitude, params.k_noise)?
            }
            other => {
                return Err(Error::invalid(
                    "noise.family",
                    format!("unknown family `{other}` (off | symmetric_trig)"),
                ))
            }
        };

        let variant = match fields.get("stepper.variant").unwrap_or("zero_level") {
            "zero_level" => SystemVariant::ZeroLevel,
            "eps_level" => SystemVariant::EpsLevel,
            other => {
                return Err(Error::invalid(
                    "stepper.variant",
                    format!("unknown variant `{other}` (zero_level | eps_level)"),
                ))
            }
        };
        let stepper = StepperConfig {
            dt: fields.f64_or("stepper.dt", 5e-3)?,
            scheme: Scheme::SemiImplicitEulerMaruyama,
            max_halvings: fields.usize_or("stepper.max_halvings", 8)? as u32,
            symmetric: fields.bool_or("stepper.symmetric", true)?,
            variant,
            stride: fields.usize_or("stepper.stride", 10)?,
            substeps: fields.usize_or("stepper.substeps", 1)? as u32,
        };
        stepper.validate()?;
        let t_final = fields.f64_or("stepper.t_final", 10.0)?;
        if t_final < 0.0 {
            return Err(Error::invalid("stepper.t_final", "t_final >= 0 required"));
        }

        let defaults = StationarityOptions::default();
        let functionals = match fields.get("stationarity.functionals") {
            None => defaults.functionals.clone(),
            Some(list) => list
                .split(',')
                .map(|s| Functional::parse(s.trim()))
                .collect::<Result<Vec<_>>>()?,
        };
        let stationarity = StationarityOptions {
            ensemble: fields.usize_or("stationarity.ensemble", defaults.ensemble)?,
            burn_in: fields.f64_or("stationarity.burn_in", defaults.burn_in)?,
            tau_list: fields.f64_list_or("stationarity.tau", &defaults.tau_list)?,
            probe_times: fields.f64_list_or("stationarity.probes", &defaults.probe_times)?,
            functionals,
            alpha: fields.f64_or("stationarity.alpha", defaults.alpha)?,
            permutations: fields.usize_or("stationarity.permutations", defaults.permutations)?,
            mollifier_m: fields.f64_or("stationarity.mollifier_m", defaults.mollifier_m)?,
            ramp_control: fields.bool_or("stationarity.ramp_control", false)?,
        };
        if !(stationarity.alpha > 0.0 && stationarity.alpha < 1.0) {
            return Err(Error::invalid("stationarity.alpha", "alpha in (0, 1) required"));
        }

        let seed = fields.u64_or("run.seed", 0)?;
        let out = PathBuf::from(fields.get("run.out").unwrap_or("runs/default"));
        fields.reject_unknown()?;

        Ok(Self {
            grid,
            params,
            noise,
            stepper,
            t_final,
            seed,
            out,
            stationarity,
            raw: text.to_string(),
        })
    }

    /// Effective seed: the `SCNS_SEED` environment variable wins over the
    /// config value.
    pub fn effective_seed(&self) -> Result<u64> {
        match std::env::var("SCNS_SEED") {
            Ok(v) => v
                .parse::<u64>()
                .map_err(|_| Error::invalid("SCNS_SEED", format!("not an integer: `{v}`"))),
            Err(_) => Ok(self.seed),
        }
    }
}
