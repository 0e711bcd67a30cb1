//! Effective-viscous-flux audit: the pressure-functional identity obtained by
//! pairing the momentum equation with `Psi = Pi_N grad lap^{-1}[g - mean g]`,
//! where `g = rho` at the epsilon level and `g = rho^alpha` (0 < alpha < 1/3)
//! at the delta level.
//!
//! Writing `f(t) = <P, Psi>` with `P = Pi_N(rho u)`, the time increment of
//! `f` splits into the momentum-drift pairings `<F, Psi>`, the test-field
//! evolution pairings `<P, dPsi/dt>` (transport, diffusion, damping or the
//! renormalized dilation at the delta level), the noise pairing, and a
//! quadratic cross term that vanishes in the continuous-time limit. The
//! residual measures the time-discretization defect of the identity.

use crate::dynamics::{
    momentum_drift_pieces, viscous_force, NoiseContext, SystemVariant, TrajectoryRecord,
};
use crate::model::{pressure, ModelParams};
use crate::spectral::{
    dealias_product_truncated, dealias_scalar_vector_truncated, divergence, gradient,
    project_modes, project_vector, riesz_grad, vec_l2_inner, SpectralField, SpectralVectorField,
};
use crate::{Error, Result};

use super::energy::pointwise_inner;
use crate::dynamics::State;

/// Which flux identity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxLevel {
    /// Test argument `rho`; requires `epsilon > 0`.
    Epsilon,
    /// Test argument `rho^alpha` with `0 < alpha < 1/3`; requires
    /// `epsilon = 0`.
    Delta { alpha: f64 },
}

impl FluxLevel {
    fn exponent(&self) -> f64 {
        match self {
            FluxLevel::Epsilon => 1.0,
            FluxLevel::Delta { alpha } => *alpha,
        }
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        match self {
            FluxLevel::Epsilon => {
                if !(params.epsilon > 0.0) {
                    return Err(Error::invalid(
                        "epsilon",
                        "the epsilon-level flux identity requires epsilon > 0",
                    ));
                }
            }
            FluxLevel::Delta { alpha } => {
                if !(*alpha > 0.0 && *alpha < 1.0 / 3.0) {
                    return Err(Error::invalid("alpha", "alpha in (0, 1/3) required"));
                }
                if params.epsilon != 0.0 {
                    return Err(Error::invalid(
                        "epsilon",
                        "the delta-level flux identity requires epsilon = 0",
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FluxReport {
    pub level: FluxLevel,
    pub window: (f64, f64),
    /// `f(t1) - f(t0)` with `f = <P, Psi>`.
    pub boundary_difference: f64,
    /// Window-integrated named drift and noise pairings.
    pub terms: Vec<(String, f64)>,
    /// Exact quadratic increment pairing `sum <dP, dPsi>`; part of the
    /// discretization defect, reported for transparency.
    pub cross_term: f64,
    /// `boundary_difference - sum(terms)`.
    pub residual: f64,
    /// Time averages of the gained-integrability integrals
    /// `int a rho^(gamma+x)`, `int delta rho^(Gamma+x)`, `int rho^(1+x)|u|^2`.
    pub gained_pressure: f64,
    pub gained_artificial: f64,
    pub gained_kinetic: f64,
}

impl FluxReport {
    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// Test argument `g` of the selected level.
fn test_argument(state: &State, level: FluxLevel) -> Result<SpectralField> {
    match level {
        FluxLevel::Epsilon => Ok(state.rho.to_samples()),
        FluxLevel::Delta { alpha } => {
            let s = state.rho.to_samples();
            if let Some((index, &value)) =
                s.samples().iter().enumerate().find(|(_, v)| **v <= 0.0)
            {
                return Err(Error::NegativeDensity {
                    index,
                    value,
                    time: state.t,
                });
            }
            Ok(s.map_samples(|r| r.powf(alpha)))
        }
    }
}

/// Galerkin test field `Psi = Pi_N grad lap^{-1} [g - mean g]`.
pub fn flux_test_field(state: &State, level: FluxLevel) -> Result<SpectralVectorField> {
    let g = test_argument(state, level)?;
    project_vector(&riesz_grad(&g), state.grid().cutoff())
}

/// Per-unit-time drift pairings of the identity at one state.
pub fn flux_rows(
    state: &State,
    params: &ModelParams,
    level: FluxLevel,
) -> Result<Vec<(String, f64)>> {
    let grid = *state.grid();
    let n = grid.cutoff();
    let g = test_argument(state, level)?;
    let psi = flux_test_field(state, level)?;
    let pieces = momentum_drift_pieces(state, params, SystemVariant::EpsLevel)?;
    let p_field = state.momentum()?;

    let mut rows = Vec::new();

    // <-grad Pi_N p, Psi> = <p, Pi_N g> - mean(g) int p
    let press = pressure(&state.rho, params)?;
    let g_n = project_modes(&g, n)?;
    let pressure_flux = pointwise_inner(&press, &g_n)? - g.mean() * press.integral();
    rows.push(("pressure_flux".into(), pressure_flux));
    debug_assert!(
        (pressure_flux - vec_l2_inner(&pieces.pressure, &psi).unwrap()).abs()
            <= 1e-8 * (1.0 + pressure_flux.abs())
    );

    rows.push((
        "convective_flux".into(),
        vec_l2_inner(&pieces.convective, &psi)?,
    ));
    rows.push((
        "viscous_flux".into(),
        vec_l2_inner(&viscous_force(&state.u, params), &psi)?,
    ));
    if let Some(diff) = &pieces.eps_diffusion {
        rows.push(("eps_momentum_diffusion".into(), vec_l2_inner(diff, &psi)?));
    }
    if let Some(damp) = &pieces.eps_damping {
        rows.push(("momentum_reaction".into(), vec_l2_inner(damp, &psi)?));
    }

    // test-field evolution pairings <P, dPsi/dt>
    match level {
        FluxLevel::Epsilon => {
            let q = dealias_scalar_vector_truncated(&state.rho, &state.u, n)?;
            let transport = project_vector(&riesz_grad(&divergence(&q)), n)?;
            rows.push((
                "testfn_transport".into(),
                -vec_l2_inner(&p_field, &transport)?,
            ));
            let grad_rho = project_vector(&gradient(&state.rho), n)?;
            rows.push((
                "testfn_diffusion".into(),
                params.epsilon * vec_l2_inner(&p_field, &grad_rho)?,
            ));
            rows.push((
                "testfn_reaction".into(),
                -2.0 * params.epsilon * vec_l2_inner(&p_field, &psi)?,
            ));
        }
        FluxLevel::Delta { alpha } => {
            let g_flux = dealias_scalar_vector_truncated(&g, &state.u, n)?;
            let transport = project_vector(&riesz_grad(&divergence(&g_flux)), n)?;
            rows.push((
                "testfn_transport".into(),
                -vec_l2_inner(&p_field, &transport)?,
            ));
            let div_u = divergence(&state.u);
            let dil = dealias_product_truncated(&g, &div_u, n)?;
            let dil_field = project_vector(&riesz_grad(&dil), n)?;
            rows.push((
                "testfn_dilation".into(),
                -(alpha - 1.0) * vec_l2_inner(&p_field, &dil_field)?,
            ));
        }
    }
    Ok(rows)
}

fn gained_integrands(state: &State, params: &ModelParams, x: f64) -> (f64, f64, f64) {
    let grid = *state.grid();
    let w = grid.quad_weight();
    let rho = state.rho.to_samples();
    let u2 = state.u.magnitude_sq();
    let mut press = 0.0;
    let mut art = 0.0;
    let mut kin = 0.0;
    for (&r, &m) in rho.samples().iter().zip(u2.samples()) {
        press += params.a * r.powf(params.gamma + x);
        if params.delta > 0.0 {
            art += params.delta * r.powf(params.gamma_art + x);
        }
        kin += r.powf(1.0 + x) * m;
    }
    (press * w, art * w, kin * w)
}

/// Evaluates the selected flux identity over `[t0, t1]` by exact replay.
pub fn effective_viscous_flux_report(
    record: &TrajectoryRecord,
    window: (f64, f64),
    level: FluxLevel,
) -> Result<FluxReport> {
    let params = record.params;
    level.validate(&params)?;
    if record.config.variant != SystemVariant::EpsLevel {
        return Err(Error::invalid(
            "variant",
            "flux identities are derived for the untruncated system variant",
        ));
    }
    let (s0, s1) = record.window_steps(window.0, window.1)?;
    let grid = *record.states[0].grid();
    let noise_ctx = NoiseContext::new(record.noise.clone(), grid);
    let dt = record.config.dt;
    let x = level.exponent();

    let mut acc: Vec<(String, f64)> = Vec::new();
    let mut noise_acc = 0.0;
    let mut cross = 0.0;
    let mut f_start = None;
    let mut f_end = 0.0;
    let mut gained = (0.0, 0.0, 0.0);

    record.replay(s0, s1, |pre, dws, post| {
        let psi_pre = flux_test_field(pre, level)?;
        let p_pre = pre.momentum()?;
        if f_start.is_none() {
            f_start = Some(vec_l2_inner(&p_pre, &psi_pre)?);
        }
        for (name, value) in flux_rows(pre, &params, level)? {
            match acc.iter_mut().find(|(n, _)| *n == name) {
                Some((_, v)) => *v += dt * value,
                None => acc.push((name, dt * value)),
            }
        }
        if let Some(inc) = noise_ctx.increment_field(&pre.rho, dws)? {
            noise_acc += vec_l2_inner(&inc, &psi_pre)?;
        }
        let psi_post = flux_test_field(post, level)?;
        let p_post = post.momentum()?;
        let dp = p_post.lin_comb(1.0, &p_pre, -1.0)?;
        let dpsi = psi_post.lin_comb(1.0, &psi_pre, -1.0)?;
        cross += vec_l2_inner(&dp, &dpsi)?;
        f_end = vec_l2_inner(&p_post, &psi_post)?;

        let g = gained_integrands(pre, &params, x);
        gained.0 += dt * g.0;
        gained.1 += dt * g.1;
        gained.2 += dt * g.2;
        Ok(())
    })?;

    let f_start = f_start.ok_or_else(|| Error::Coverage("empty window".into()))?;
    acc.push(("noise_flux".into(), noise_acc));
    let total: f64 = acc.iter().map(|(_, v)| v).sum();
    let span = window.1 - window.0;
    Ok(FluxReport {
        level,
        window,
        boundary_difference: f_end - f_start,
        residual: (f_end - f_start) - total,
        terms: acc,
        cross_term: cross,
        gained_pressure: gained.0 / span,
        gained_artificial: gained.1 / span,
        gained_kinetic: gained.2 / span,
    })
}
