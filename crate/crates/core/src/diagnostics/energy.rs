//! Energy functional and the discrete energy balance audit.

use crate::dynamics::{mass_source, NoiseContext, State, SystemVariant, TrajectoryRecord};
use crate::model::ModelParams;
use crate::spectral::{
    gradient, gradient_tensor, l2_inner, lp_norm, SpectralField, SpectralVectorField,
};
use crate::{Error, Result};

/// Instantaneous energy components and rate terms.
#[derive(Debug, Clone, Default)]
pub struct EnergyReport {
    /// `int 1/2 rho |u|^2`.
    pub kinetic: f64,
    /// `int a/(gamma-1) rho^gamma`.
    pub pressure_potential: f64,
    /// `int delta/(Gamma-1) rho^Gamma`.
    pub artificial_potential: f64,
    /// Sum of the three parts above.
    pub total: f64,
    /// `int S(grad u) : grad u`.
    pub dissipation_rate: f64,
    /// `2 eps int [1/2 rho |u|^2 + a gamma/(gamma-1) rho^gamma + ...]`.
    pub eps_energy_drain_rate: f64,
    /// `eps int rho |grad u|^2`.
    pub eps_velocity_dissipation_rate: f64,
    /// `eps int (a gamma rho^(gamma-2) + delta Gamma rho^(Gamma-2)) |grad rho|^2`.
    pub eps_density_dissipation_rate: f64,
    /// Kinetic drain from the mass source, `(source/2) int |u|^2`.
    pub reaction_kinetic_drain_rate: f64,
    /// Ito correction `1/2 sum_k int rho |Pi_N g_k|^2`.
    pub ito_correction_rate: f64,
    /// Potential production from the mass source.
    pub mass_production_rate: f64,
    /// Accumulated stochastic integral over a window (zero for a static
    /// report).
    pub stochastic_integral: f64,
}

fn check_positive(rho: &SpectralField, t: f64) -> Result<SpectralField> {
    let s = rho.to_samples();
    if let Some((index, &value)) = s.samples().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeDensity { index, value, time: t });
    }
    Ok(s)
}

/// Static energy components of a state.
pub fn energy(state: &State, params: &ModelParams) -> Result<EnergyReport> {
    let rho = check_positive(&state.rho, state.t)?;
    let grid = *state.grid();
    let w = grid.quad_weight();
    let u2 = state.u.magnitude_sq();

    let kinetic: f64 = rho
        .samples()
        .iter()
        .zip(u2.samples())
        .map(|(&r, &m)| 0.5 * r * m)
        .sum::<f64>()
        * w;
    let pressure_potential: f64 = rho
        .samples()
        .iter()
        .map(|&r| params.a / (params.gamma - 1.0) * r.powf(params.gamma))
        .sum::<f64>()
        * w;
    let artificial_potential: f64 = if params.delta > 0.0 {
        rho.samples()
            .iter()
            .map(|&r| params.delta / (params.gamma_art - 1.0) * r.powf(params.gamma_art))
            .sum::<f64>()
            * w
    } else {
        0.0
    };

    let grad_u = gradient_tensor(&state.u);
    let s = crate::model::stress(&grad_u, params);
    let dissipation_rate = s.contract(&grad_u)?.integral();

    let mut report = EnergyReport {
        kinetic,
        pressure_potential,
        artificial_potential,
        total: kinetic + pressure_potential + artificial_potential,
        dissipation_rate,
        ..EnergyReport::default()
    };

    if params.epsilon > 0.0 {
        let gamma_weighted: f64 = rho
            .samples()
            .iter()
            .map(|&r| {
                let mut v = params.a * params.gamma / (params.gamma - 1.0) * r.powf(params.gamma);
                if params.delta > 0.0 {
                    v += params.delta * params.gamma_art / (params.gamma_art - 1.0)
                        * r.powf(params.gamma_art);
                }
                v
            })
            .sum::<f64>()
            * w;
        report.eps_energy_drain_rate = 2.0 * params.epsilon * (kinetic + gamma_weighted);

        let mut grad_u_sq = vec![0.0; grid.size()];
        for e in grad_u.entries() {
            let es = e.to_samples();
            for (acc, &v) in grad_u_sq.iter_mut().zip(es.samples()) {
                *acc += v * v;
            }
        }
        report.eps_velocity_dissipation_rate = params.epsilon
            * rho
                .samples()
                .iter()
                .zip(&grad_u_sq)
                .map(|(&r, &g)| r * g)
                .sum::<f64>()
            * w;

        let grad_rho = gradient(&state.rho);
        let grad_rho_sq = grad_rho.magnitude_sq();
        report.eps_density_dissipation_rate = params.epsilon
            * rho
                .samples()
                .iter()
                .zip(grad_rho_sq.samples())
                .map(|(&r, &g)| {
                    let mut c = params.a * params.gamma * r.powf(params.gamma - 2.0);
                    if params.delta > 0.0 {
                        c += params.delta * params.gamma_art * r.powf(params.gamma_art - 2.0);
                    }
                    c * g
                })
                .sum::<f64>()
            * w;
    }
    Ok(report)
}

/// Energy report including the noise-dependent rates of one system variant.
pub fn energy_with_noise(
    state: &State,
    params: &ModelParams,
    noise: &NoiseContext,
    variant: SystemVariant,
) -> Result<EnergyReport> {
    let mut report = energy(state, params)?;
    let grid = *state.grid();
    let w = grid.quad_weight();
    let rho = state.rho.to_samples();
    let src = mass_source(state.total_mass(), params, variant, grid.volume());

    if src != 0.0 {
        let u2 = state.u.magnitude_sq();
        report.reaction_kinetic_drain_rate =
            0.5 * src * u2.samples().iter().sum::<f64>() * w;
        report.mass_production_rate = src
            * rho
                .samples()
                .iter()
                .map(|&r| {
                    let mut v =
                        params.a * params.gamma / (params.gamma - 1.0) * r.powf(params.gamma - 1.0);
                    if params.delta > 0.0 {
                        v += params.delta * params.gamma_art / (params.gamma_art - 1.0)
                            * r.powf(params.gamma_art - 1.0);
                    }
                    v
                })
                .sum::<f64>()
            * w;
    }

    if !noise.is_off() {
        let mut rate = 0.0;
        for g_k in noise.projected_g(&state.rho)? {
            let g2 = g_k.magnitude_sq();
            rate += rho
                .samples()
                .iter()
                .zip(g2.samples())
                .map(|(&r, &g)| r * g)
                .sum::<f64>()
                * w;
        }
        report.ito_correction_rate = 0.5 * rate;
    }
    Ok(report)
}

/// Window-integrated balance: every term of the discrete energy identity plus
/// the defect.
#[derive(Debug, Clone)]
pub struct BalanceBreakdown {
    pub window: (f64, f64),
    pub energy_start: f64,
    pub energy_end: f64,
    /// Named window integrals; drain terms enter the residual with `+`,
    /// source terms with `-`.
    pub terms: Vec<(String, f64)>,
    pub residual: f64,
}

impl BalanceBreakdown {
    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }
}

/// Evaluates the discrete energy balance over `[t0, t1]` by replaying the
/// recorded increments with left-endpoint (Ito) evaluation of every rate.
pub fn energy_balance_residual(
    record: &TrajectoryRecord,
    window: (f64, f64),
) -> Result<BalanceBreakdown> {
    let (s0, s1) = record.window_steps(window.0, window.1)?;
    let params = record.params;
    let dt = record.config.dt;
    let variant = record.config.variant;
    let grid = *record.states[0].grid();
    let noise_ctx = NoiseContext::new(record.noise.clone(), grid);
    let w = grid.quad_weight();

    let mut energy_start = None;
    let mut energy_end = 0.0;
    let mut drain = 0.0;
    let mut viscous = 0.0;
    let mut eps_vel = 0.0;
    let mut eps_den = 0.0;
    let mut reaction = 0.0;
    let mut stochastic = 0.0;
    let mut ito = 0.0;
    let mut production = 0.0;

    record.replay(s0, s1, |pre, dws, post| {
        let er = energy_with_noise(pre, &params, &noise_ctx, variant)?;
        if energy_start.is_none() {
            energy_start = Some(er.total);
        }
        drain += dt * er.eps_energy_drain_rate;
        viscous += dt * er.dissipation_rate;
        eps_vel += dt * er.eps_velocity_dissipation_rate;
        eps_den += dt * er.eps_density_dissipation_rate;
        reaction += dt * er.reaction_kinetic_drain_rate;
        ito += dt * er.ito_correction_rate;
        production += dt * er.mass_production_rate;

        if !noise_ctx.is_off() {
            let rho = pre.rho.to_samples();
            let u = pre.u.to_samples();
            for (k, g_k) in noise_ctx.projected_g(&pre.rho)?.iter().enumerate() {
                let gs = g_k.to_samples();
                let mut pair = 0.0;
                for i in 0..grid.dim() {
                    pair += rho
                        .samples()
                        .iter()
                        .zip(gs.component(i).samples())
                        .zip(u.component(i).samples())
                        .map(|((&r, &g), &v)| r * g * v)
                        .sum::<f64>();
                }
                stochastic += pair * w * dws[k];
            }
        }
        energy_end = energy(post, &params)?.total;
        Ok(())
    })?;

    let energy_start = energy_start.ok_or_else(|| Error::Coverage("empty window".into()))?;
    let residual = (energy_end - energy_start) + drain + viscous + eps_vel + eps_den + reaction
        - stochastic
        - ito
        - production;
    Ok(BalanceBreakdown {
        window,
        energy_start,
        energy_end,
        terms: vec![
            ("energy_drain_2eps".into(), drain),
            ("viscous_dissipation".into(), viscous),
            ("eps_velocity_dissipation".into(), eps_vel),
            ("eps_density_dissipation".into(), eps_den),
            ("reaction_kinetic_drain".into(), reaction),
            ("stochastic_integral".into(), stochastic),
            ("ito_correction".into(), ito),
            ("mass_production".into(), production),
        ],
        residual,
    })
}

/// Max positive jump of total energy between consecutive recorded samples;
/// zero for a dissipative noise-free path up to the time-discretization
/// tolerance.
pub fn max_energy_increment(record: &TrajectoryRecord) -> Result<f64> {
    let params = record.params;
    let mut max_inc = 0.0f64;
    let mut prev: Option<f64> = None;
    for state in &record.states {
        let e = energy(state, &params)?.total;
        if let Some(p) = prev {
            max_inc = max_inc.max(e - p);
        }
        prev = Some(e);
    }
    Ok(max_inc)
}

/// Sup norm of `|u|` helper used by positivity diagnostics.
pub fn velocity_sup(u: &SpectralVectorField) -> f64 {
    u.components()
        .iter()
        .map(|c| lp_norm(c, f64::INFINITY))
        .fold(0.0, f64::max)
}

/// Quadrature of a pointwise function of the density.
pub fn density_integral(rho: &SpectralField, f: impl Fn(f64) -> f64) -> f64 {
    let s = rho.to_samples();
    s.samples().iter().map(|&r| f(r)).sum::<f64>() * rho.grid().quad_weight()
}

/// `int f g` for two scalar fields via collocation quadrature.
pub fn pointwise_inner(f: &SpectralField, g: &SpectralField) -> Result<f64> {
    l2_inner(&f.to_samples(), &g.to_samples())
}
