//! Renormalized continuity audit: the discrete residual of
//!
//! ```text
//! d/dt int b(rho) + int (b'(rho) rho - b(rho)) div u_tr
//!   + eps int b''(rho) |grad rho|^2 + 2 eps int b'(rho) rho
//!   - source int b'(rho)
//! ```
//!
//! over a window, with the transport velocity of the record's system variant.

use crate::dynamics::{mass_source, transport_velocity, TrajectoryRecord};
use crate::spectral::{divergence, gradient, SpectralField};
use crate::{Error, Result};

/// Renormalization function `b` with the derivatives the audit needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BFunction {
    /// `b(z) = z`: reduces to the mass law.
    Identity,
    /// `b(z) = c`.
    Constant(f64),
    /// `b(z) = z log z` (requires positive density).
    ZLogZ,
    /// `b(z) = z^p` for a fixed exponent.
    Power(f64),
}

impl BFunction {
    pub fn b(&self, z: f64) -> f64 {
        match self {
            BFunction::Identity => z,
            BFunction::Constant(c) => *c,
            BFunction::ZLogZ => {
                if z > 0.0 {
                    z * z.ln()
                } else {
                    0.0
                }
            }
            BFunction::Power(p) => z.powf(*p),
        }
    }

    pub fn b_prime(&self, z: f64) -> f64 {
        match self {
            BFunction::Identity => 1.0,
            BFunction::Constant(_) => 0.0,
            BFunction::ZLogZ => z.ln() + 1.0,
            BFunction::Power(p) => p * z.powf(p - 1.0),
        }
    }

    pub fn b_second(&self, z: f64) -> f64 {
        match self {
            BFunction::Identity | BFunction::Constant(_) => 0.0,
            BFunction::ZLogZ => 1.0 / z,
            BFunction::Power(p) => p * (p - 1.0) * z.powf(p - 2.0),
        }
    }
}

fn b_integral(rho: &SpectralField, b: &BFunction) -> f64 {
    let s = rho.to_samples();
    s.samples().iter().map(|&r| b.b(r)).sum::<f64>() * rho.grid().quad_weight()
}

/// Discrete residual of the renormalized continuity identity over `[t0, t1]`.
pub fn renorm_continuity_residual(
    record: &TrajectoryRecord,
    b: &BFunction,
    window: (f64, f64),
) -> Result<f64> {
    let (s0, s1) = record.window_steps(window.0, window.1)?;
    let params = record.params;
    let variant = record.config.variant;
    let dt = record.config.dt;

    let mut start = None;
    let mut end = 0.0;
    let mut dilation = 0.0;
    let mut diffusion = 0.0;
    let mut damping = 0.0;
    let mut source_term = 0.0;

    record.replay(s0, s1, |pre, _dws, post| {
        if start.is_none() {
            start = Some(b_integral(&pre.rho, b));
        }
        let grid = *pre.grid();
        let w = grid.quad_weight();
        let rho = pre.rho.to_samples();
        let u_tr = transport_velocity(pre, &params, variant);
        let div_tr = divergence(&u_tr).to_samples();

        dilation += dt
            * rho
                .samples()
                .iter()
                .zip(div_tr.samples())
                .map(|(&r, &d)| (b.b_prime(r) * r - b.b(r)) * d)
                .sum::<f64>()
            * w;

        if params.epsilon > 0.0 {
            let grad_rho_sq = gradient(&pre.rho).magnitude_sq();
            diffusion += dt
                * params.epsilon
                * rho
                    .samples()
                    .iter()
                    .zip(grad_rho_sq.samples())
                    .map(|(&r, &g)| b.b_second(r) * g)
                    .sum::<f64>()
                * w;
            damping += dt
                * 2.0
                * params.epsilon
                * rho
                    .samples()
                    .iter()
                    .map(|&r| b.b_prime(r) * r)
                    .sum::<f64>()
                * w;
        }

        let src = mass_source(pre.total_mass(), &params, variant, grid.volume());
        if src != 0.0 {
            source_term +=
                dt * src * rho.samples().iter().map(|&r| b.b_prime(r)).sum::<f64>() * w;
        }
        end = b_integral(&post.rho, b);
        Ok(())
    })?;

    let start = start.ok_or_else(|| Error::Coverage("empty window".into()))?;
    Ok((end - start) + dilation + diffusion + damping - source_term)
}
