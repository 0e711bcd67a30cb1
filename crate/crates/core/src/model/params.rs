use crate::{Error, Result};

/// Physical and regularization constants.
///
/// `gamma_art` is the artificial pressure exponent (the `Gamma` of the
/// regularized pressure `delta rho^Gamma`), `r_trunc` the velocity truncation
/// radius and `k_noise` the number of retained noise modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Pressure coefficient `a > 0`.
    pub a: f64,
    /// Adiabatic exponent.
    pub gamma: f64,
    /// Shear viscosity `mu > 0`.
    pub mu: f64,
    /// Bulk viscosity `eta >= 0`.
    pub eta: f64,
    /// Total mass `M0 > 0`.
    pub m0: f64,
    /// Artificial viscosity `epsilon >= 0`.
    pub epsilon: f64,
    /// Artificial pressure coefficient `delta >= 0`.
    pub delta: f64,
    /// Artificial pressure exponent, `> max(9/2, gamma)` whenever `delta > 0`.
    pub gamma_art: f64,
    /// Velocity truncation radius `R > 0`.
    pub r_trunc: f64,
    /// Number of retained noise modes.
    pub k_noise: usize,
}

impl ModelParams {
    /// Validates every constitutive constraint for spatial dimension `d`;
    /// errors name the violated constraint.
    pub fn validate(&self, d: usize) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(Error::invalid("a", "a > 0 required"));
        }
        let gamma_floor = match d {
            3 => ("gamma > 3/2 required for d=3", 1.5, false),
            2 => ("gamma > 1 required for d=2", 1.0, false),
            _ => ("gamma >= 1 required for d=1", 1.0, true),
        };
        let (msg, floor, inclusive) = gamma_floor;
        let ok = if inclusive {
            self.gamma >= floor
        } else {
            self.gamma > floor
        };
        if !ok {
            return Err(Error::invalid("gamma", msg));
        }
        if !(self.mu > 0.0) {
            return Err(Error::invalid("mu", "mu > 0 required"));
        }
        if self.eta < 0.0 {
            return Err(Error::invalid("eta", "eta >= 0 required"));
        }
        if !(self.m0 > 0.0) {
            return Err(Error::invalid("m0", "M0 > 0 required"));
        }
        if self.epsilon < 0.0 {
            return Err(Error::invalid("epsilon", "epsilon >= 0 required"));
        }
        if self.delta < 0.0 {
            return Err(Error::invalid("delta", "delta >= 0 required"));
        }
        if self.delta > 0.0 && self.gamma_art <= self.gamma.max(4.5) {
            return Err(Error::invalid(
                "gamma_art",
                "Gamma > max(9/2, gamma) required when delta > 0",
            ));
        }
        if !(self.r_trunc > 0.0) {
            return Err(Error::invalid("r_trunc", "R > 0 required"));
        }
        Ok(())
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            gamma: 5.0 / 3.0,
            mu: 1.0,
            eta: 0.0,
            m0: 4.0,
            epsilon: 0.1,
            delta: 0.0,
            gamma_art: 5.0,
            r_trunc: 10.0,
            k_noise: 8,
        }
    }
}
