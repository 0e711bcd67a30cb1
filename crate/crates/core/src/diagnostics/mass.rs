//! Total-mass ODE audit: the spatial mean of the simulated density against a
//! high-accuracy Runge-Kutta reference of the scalar law
//! `d/dt rhohat = -2 eps rhohat + H(rhohat / M0)`.

use crate::dynamics::{SystemVariant, TrajectoryRecord};
use crate::model::{cutoff_h, solve_m_epsilon, ModelParams};
use crate::Result;

/// Right-hand side of the scalar mass law for a system variant.
pub fn mass_ode_rhs(m: f64, params: &ModelParams, variant: SystemVariant) -> f64 {
    match variant {
        SystemVariant::ZeroLevel => -2.0 * params.epsilon * m + cutoff_h(m / params.m0),
        SystemVariant::EpsLevel => {
            if params.epsilon > 0.0 {
                let m_eps = solve_m_epsilon(params.epsilon, params.m0).expect("epsilon > 0");
                2.0 * params.epsilon * (m_eps - m)
            } else {
                0.0
            }
        }
    }
}

/// Classical RK4 integration of the scalar mass law.
pub fn rk4_mass_reference(
    m_init: f64,
    t_init: f64,
    t_final: f64,
    dt: f64,
    params: &ModelParams,
    variant: SystemVariant,
) -> f64 {
    let mut m = m_init;
    let mut t = t_init;
    while t < t_final - 1e-12 {
        let h = dt.min(t_final - t);
        let k1 = mass_ode_rhs(m, params, variant);
        let k2 = mass_ode_rhs(m + 0.5 * h * k1, params, variant);
        let k3 = mass_ode_rhs(m + 0.5 * h * k2, params, variant);
        let k4 = mass_ode_rhs(m + h * k3, params, variant);
        m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    m
}

/// The mean scheme actually embedded in the stepper: source explicit, linear
/// damping implicit. Used by exactness tests.
pub fn semi_implicit_mass_scheme(
    m_init: f64,
    steps: u64,
    dt: f64,
    params: &ModelParams,
    variant: SystemVariant,
) -> f64 {
    let mut m = m_init;
    for _ in 0..steps {
        match variant {
            SystemVariant::ZeroLevel => {
                let src = cutoff_h(m / params.m0);
                m = (m + dt * src) / (1.0 + 2.0 * params.epsilon * dt);
            }
            SystemVariant::EpsLevel => {
                if params.epsilon > 0.0 {
                    let m_eps = solve_m_epsilon(params.epsilon, params.m0).expect("epsilon > 0");
                    let src = 2.0 * params.epsilon * m_eps;
                    m = (m + dt * src) / (1.0 + 2.0 * params.epsilon * dt);
                }
            }
        }
    }
    m
}

/// Max deviation of the recorded total mass from the RK4 reference started at
/// the same initial mean.
pub fn mass_ode_residual(record: &TrajectoryRecord) -> Result<f64> {
    let params = record.params;
    let variant = record.config.variant;
    let m0 = record.states[0].total_mass();
    let t0 = record.times[0];
    let rk_dt = (record.config.dt / 10.0).min(1e-3);
    let mut worst = 0.0f64;
    for (t, state) in record.times.iter().zip(&record.states) {
        let reference = rk4_mass_reference(m0, t0, *t, rk_dt, &params, variant);
        worst = worst.max((state.total_mass() - reference).abs());
    }
    Ok(worst)
}
