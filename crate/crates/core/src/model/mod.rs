//! Constitutive laws, regularization machinery and the noise family.

mod cutoff;
mod noise;
mod params;

pub use cutoff::cutoff_h;
pub use noise::{noise_eval, NoiseFamily, NoiseModel};
pub use params::ModelParams;

use crate::spectral::{h_n_norm, MatrixField, SpectralField, SpectralVectorField};
use crate::{Error, Result};

/// Isentropic plus artificial pressure `a rho^gamma + delta rho^Gamma`,
/// evaluated pointwise at collocation points.
pub fn pressure(rho: &SpectralField, params: &ModelParams) -> Result<SpectralField> {
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
    Ok(rho_s.map_samples(|r| {
        let mut p = params.a * r.powf(params.gamma);
        if params.delta > 0.0 {
            p += params.delta * r.powf(params.gamma_art);
        }
        p
    }))
}

/// Newtonian viscous stress
/// `S = mu (grad u + grad u^T - (2/3) div u I) + eta div u I`.
pub fn stress(grad_u: &MatrixField, params: &ModelParams) -> MatrixField {
    let grid = *grad_u.grid();
    let d = grid.dim();
    let div = grad_u.trace().to_samples();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let gij = grad_u.entry(i, j).to_samples();
            let gji = grad_u.entry(j, i).to_samples();
            let samples: Vec<f64> = (0..grid.size())
                .map(|p| {
                    let sym = gij.samples()[p] + gji.samples()[p];
                    let mut s = params.mu * sym;
                    if i == j {
                        s += (params.eta - 2.0 * params.mu / 3.0) * div.samples()[p];
                    }
                    s
                })
                .collect();
            entries.push(SpectralField::from_samples(grid, samples).expect("length preserved"));
        }
    }
    MatrixField::new(grid, entries).expect("componentwise construction")
}

/// Velocity truncation `[u]_R = H(|u|_{H_N} - R) u`.
pub fn truncate_velocity(
    u: &SpectralVectorField,
    r_trunc: f64,
    n_cutoff: usize,
) -> SpectralVectorField {
    let h = cutoff_h(h_n_norm(u, n_cutoff) - r_trunc);
    u.scale(h)
}

/// Scalar truncation factor `H(|u|_{H_N} - R)`.
pub fn truncation_factor(u: &SpectralVectorField, r_trunc: f64, n_cutoff: usize) -> f64 {
    cutoff_h(h_n_norm(u, n_cutoff) - r_trunc)
}

/// Solves `2 eps M = H(M / M0)` for the unique equilibrium mass
/// `M in (0, M0]` by bisection to absolute tolerance `1e-13 * M0`.
///
/// Uniqueness follows from strict monotonicity: the left side increases in
/// `M` while the right side is non-increasing.
pub fn solve_m_epsilon(epsilon: f64, m0: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon", "epsilon > 0 required for the mass equilibrium"));
    }
    if !(m0 > 0.0) {
        return Err(Error::invalid("m0", "M0 > 0 required"));
    }
    let g = |m: f64| 2.0 * epsilon * m - cutoff_h(m / m0);
    let mut lo = 0.0;
    let mut hi = m0;
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    let tol = 1e-13 * m0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
