use crate::model::ModelParams;
use crate::spectral::{
    dealias_scalar_vector_truncated, project_vector, symmetry_defect, SpectralField,
    SpectralVectorField, TorusGrid,
};
use crate::{Error, Result};

/// Instantaneous solver state `(t, rho, u)` with `u` in the Galerkin space.
#[derive(Debug, Clone)]
pub struct State {
    pub t: f64,
    pub rho: SpectralField,
    pub u: SpectralVectorField,
}

impl State {
    /// Builds a state, projecting the velocity onto the Galerkin band.
    pub fn new(t: f64, rho: SpectralField, u: SpectralVectorField) -> Result<Self> {
        rho.grid().check_same(u.grid())?;
        let cutoff = rho.grid().cutoff();
        let u = project_vector(&u, cutoff)?;
        Ok(Self {
            t,
            rho: rho.to_samples(),
            u: u.to_samples(),
        })
    }

    /// Assembles a state from trusted sample data (snapshot decode path);
    /// performs no projection so encode/decode round-trips are byte-exact.
    pub fn from_trusted_samples(t: f64, rho: SpectralField, u: SpectralVectorField) -> Result<Self> {
        rho.grid().check_same(u.grid())?;
        Ok(Self { t, rho, u })
    }

    /// Canonical initial data: uniform density of total mass `M0`, velocity
    /// zero.
    pub fn rest(grid: TorusGrid, params: &ModelParams) -> Self {
        Self {
            t: 0.0,
            rho: SpectralField::constant(grid, params.m0 / grid.volume()),
            u: SpectralVectorField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &TorusGrid {
        self.rho.grid()
    }

    /// Total mass `int rho`.
    pub fn total_mass(&self) -> f64 {
        self.rho.integral()
    }

    pub fn min_density(&self) -> f64 {
        self.rho
            .to_samples()
            .samples()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Galerkin momentum `Pi_N(rho u)`, exact through the dealiased product.
    pub fn momentum(&self) -> Result<SpectralVectorField> {
        dealias_scalar_vector_truncated(&self.rho, &self.u, self.grid().cutoff())
    }

    /// Checks positivity, Galerkin closure and (optionally) symmetry-class
    /// membership.
    pub fn validate(&self, symmetric: bool) -> Result<()> {
        let min = self.min_density();
        if min <= 0.0 {
            let rho_s = self.rho.to_samples();
            let (index, &value) = rho_s
                .samples()
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap();
            return Err(Error::NegativeDensity {
                index,
                value,
                time: self.t,
            });
        }
        let cutoff = self.grid().cutoff() as i64;
        for c in self.u.components() {
            let cm = c.to_modes();
            let scale = cm
                .modes()
                .iter()
                .map(|m| m.norm())
                .fold(0.0, f64::max)
                .max(1e-300);
            for i in 0..self.grid().size() {
                if self.grid().freq_inf(i) > cutoff && cm.modes()[i].norm() > 1e-12 * scale {
                    return Err(Error::invalid("u", "velocity has modes beyond the Galerkin cutoff"));
                }
            }
        }
        if symmetric {
            let d = symmetry_defect(&self.rho, &self.u)?;
            if d >= 1e-10 {
                return Err(Error::invalid(
                    "state",
                    format!("symmetry defect {d:.3e} exceeds 1e-10"),
                ));
            }
        }
        Ok(())
    }
}
