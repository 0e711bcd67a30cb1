//! Multiplicative noise coefficients `G_k = rho g_k(x, rho, q)`.
//!
//! The default family is
//!
//! ```text
//! g_k^i(x, rho, q) = alpha_k * sigma(rho) * sin(2 pi k_i x_i / L)
//!                    * prod_{j != i} cos(2 pi k_j x_j / L),
//! sigma(rho) = 1 / (1 + rho),    alpha_k = A / k,
//! ```
//!
//! which is q-independent, bounded by `alpha_k` together with its
//! `(rho, q)`-gradient, and carries the odd/even parity of the velocity
//! symmetry class in each component.

use crate::spectral::{SpectralField, SpectralVectorField, TorusGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseFamily {
    /// No stochastic forcing.
    Off,
    /// Parity-constrained trigonometric family with `sigma(rho) = 1/(1+rho)`.
    SymmetricTrig,
}

/// Truncated coefficient family `{g_k, alpha_k}`, `k = 1..K`.
#[derive(Debug, Clone)]
pub struct NoiseModel {
    family: NoiseFamily,
    dim: usize,
    amps: Vec<f64>,
    multis: Vec<[usize; 3]>,
}

impl NoiseModel {
    pub fn off(dim: usize) -> Self {
        Self {
            family: NoiseFamily::Off,
            dim,
            amps: Vec::new(),
            multis: Vec::new(),
        }
    }

    /// Default family with `alpha_k = amplitude / k`.
    pub fn symmetric_trig(dim: usize, amplitude: f64, k_count: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::invalid("d", "dimension must be 1, 2 or 3"));
        }
        if amplitude < 0.0 {
            return Err(Error::invalid("amplitude", "noise amplitude must be >= 0"));
        }
        let amps = (1..=k_count).map(|k| amplitude / k as f64).collect();
        let multis = enumerate_multi_indices(dim, k_count);
        Ok(Self {
            family: NoiseFamily::SymmetricTrig,
            dim,
            amps,
            multis,
        })
    }

    pub fn family(&self) -> NoiseFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of retained modes K.
    pub fn k_count(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    /// `G = sum alpha_k^2`.
    pub fn total_noise_strength(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    pub fn is_off(&self) -> bool {
        matches!(self.family, NoiseFamily::Off) || self.amps.is_empty()
    }

    /// Largest trig frequency used by any retained mode.
    pub fn max_frequency(&self) -> usize {
        self.multis
            .iter()
            .map(|m| m.iter().copied().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// The density factor `sigma(rho)`.
    pub fn sigma(rho: f64) -> f64 {
        1.0 / (1.0 + rho)
    }

    /// Spatial trig factor of component `i` of mode `k` (unit amplitude).
    pub fn trig_component(&self, k: usize, i: usize, x: &[f64; 3], length: f64) -> f64 {
        let multi = &self.multis[k];
        let mut v = 1.0;
        for j in 0..self.dim {
            let arg = 2.0 * std::f64::consts::PI * multi[j] as f64 * x[j] / length;
            v *= if j == i { arg.sin() } else { arg.cos() };
        }
        v
    }

    /// Pointwise evaluation of `g_k(x, rho, q)`.
    pub fn eval_g(
        &self,
        k: usize,
        x: &[f64; 3],
        rho: f64,
        _q: &[f64; 3],
        length: f64,
        out: &mut [f64; 3],
    ) {
        match self.family {
            NoiseFamily::Off => out.iter_mut().for_each(|o| *o = 0.0),
            NoiseFamily::SymmetricTrig => {
                let s = self.amps[k] * Self::sigma(rho.max(0.0));
                for i in 0..self.dim {
                    out[i] = s * self.trig_component(k, i, x, length);
                }
            }
        }
    }

    /// Unit-amplitude trig vector fields of every mode on a grid, in mode
    /// representation. The stepper combines them linearly per step.
    pub fn trig_fields(&self, grid: TorusGrid) -> Vec<SpectralVectorField> {
        (0..self.k_count())
            .map(|k| {
                SpectralVectorField::from_fn(grid, |i, x| {
                    self.trig_component(k, i, x, grid.length())
                })
                .to_modes()
            })
            .collect()
    }
}

/// Evaluates `G_k = rho g_k(x, rho, q)` for every retained mode.
///
/// Each returned field satisfies `|G_k| <= rho alpha_k` pointwise and carries
/// the symmetry-class parity whenever `(rho, q)` do.
pub fn noise_eval(
    model: &NoiseModel,
    rho: &SpectralField,
    q: &SpectralVectorField,
) -> Result<Vec<SpectralVectorField>> {
    let grid = *rho.grid();
    grid.check_same(q.grid())?;
    let rho_s = rho.to_samples();
    if let Some((index, &value)) = rho_s
        .samples()
        .iter()
        .enumerate()
        .find(|(_, v)| **v < 0.0)
    {
        return Err(Error::NegativeDensity {
            index,
            value,
            time: f64::NAN,
        });
    }
    let q_s = q.to_samples();
    let mut out = Vec::with_capacity(model.k_count());
    for k in 0..model.k_count() {
        let mut comps = vec![vec![0.0; grid.size()]; grid.dim()];
        let mut g = [0.0f64; 3];
        let mut qv = [0.0f64; 3];
        for flat in 0..grid.size() {
            let x = grid.coords(flat);
            let r = rho_s.samples()[flat];
            for a in 0..grid.dim() {
                qv[a] = q_s.component(a).samples()[flat];
            }
            model.eval_g(k, &x, r, &qv, grid.length(), &mut g);
            for (a, comp) in comps.iter_mut().enumerate() {
                comp[flat] = r * g[a];
            }
        }
        let fields = comps
            .into_iter()
            .map(|c| SpectralField::from_samples(grid, c))
            .collect::<Result<Vec<_>>>()?;
        out.push(SpectralVectorField::new(fields)?);
    }
    Ok(out)
}

/// Deterministic enumeration of positive multi-indices: ordered by max
/// component, then lexicographically.
fn enumerate_multi_indices(dim: usize, count: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(count);
    let mut shell = 1usize;
    while out.len() < count {
        let mut shell_indices = Vec::new();
        let ranges = vec![1..=shell; dim];
        collect_indices(&ranges, shell, &mut shell_indices);
        shell_indices.sort();
        for idx in shell_indices {
            if out.len() < count {
                out.push(idx);
            }
        }
        shell += 1;
    }
    out
}

fn collect_indices(
    ranges: &[std::ops::RangeInclusive<usize>],
    shell: usize,
    out: &mut Vec<[usize; 3]>,
) {
    let dim = ranges.len();
    let mut idx = [1usize; 3];
    loop {
        if (0..dim).map(|a| idx[a]).max().unwrap_or(1) == shell {
            out.push(idx);
        }
        // odometer increment over {1..=shell}^dim
        let mut axis = dim;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if idx[axis] < shell {
                idx[axis] += 1;
                for a in axis + 1..dim {
                    idx[a] = 1;
                }
                break;
            }
        }
    }
}
