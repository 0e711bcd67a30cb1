//! Korn-Poincare coercivity probe over the reflection symmetry class.

use crate::dynamics::standard_normal;
use crate::model::ModelParams;
use crate::spectral::{
    gradient_tensor, project_vector, project_vector_class, sobolev12_norm_sq, SpectralField,
    SpectralVectorField, TorusGrid,
};
use crate::{Error, Result};

/// Ratio `int S(grad u) : grad u / |u|_{W^{1,2}}^2` for a symmetry-class
/// velocity field. Scale-invariant; errors on the zero field and on fields
/// outside the class.
pub fn korn_poincare_ratio(u: &SpectralVectorField, params: &ModelParams) -> Result<f64> {
    let norm_sq = sobolev12_norm_sq(u);
    if norm_sq == 0.0 {
        return Err(Error::ZeroField);
    }
    let rho = SpectralField::constant(*u.grid(), 1.0);
    let defect = crate::spectral::symmetry_defect(&rho, u)?;
    if defect >= 1e-10 {
        return Err(Error::invalid(
            "u",
            format!("field outside the symmetry class (defect {defect:.3e})"),
        ));
    }
    let grad = gradient_tensor(u);
    let s = crate::model::stress(&grad, params);
    Ok(s.contract(&grad)?.integral() / norm_sq)
}

/// Deterministic pseudo-random symmetry-class field in the Galerkin band.
pub fn random_symmetric_field(grid: TorusGrid, seed: u64, index: u64) -> SpectralVectorField {
    let raw = SpectralVectorField::from_fn(grid, |comp, x| {
        let mut acc = 0.0;
        for mode in 0..4u64 {
            let a = standard_normal(&[seed, index, comp as u64, mode, 0]);
            let b = standard_normal(&[seed, index, comp as u64, mode, 1]);
            let f = (mode + 1) as f64 * 2.0 * std::f64::consts::PI / grid.length();
            acc += a * (f * x[0]).sin() + b * (f * x[comp.min(grid.dim() - 1)]).cos();
        }
        acc
    });
    let symmetric = project_vector_class(&raw);
    project_vector(&symmetric, grid.cutoff()).expect("cutoff within grid")
}

/// Minimum coercivity ratio over a family of random symmetric fields: the
/// empirical Korn-Poincare constant.
pub fn empirical_korn_constant(
    grid: TorusGrid,
    params: &ModelParams,
    count: usize,
    seed: u64,
) -> Result<f64> {
    let mut min_ratio = f64::INFINITY;
    let mut produced = 0usize;
    let mut index = 0u64;
    while produced < count {
        let u = random_symmetric_field(grid, seed, index);
        index += 1;
        if sobolev12_norm_sq(&u) < 1e-12 {
            continue;
        }
        min_ratio = min_ratio.min(korn_poincare_ratio(&u, params)?);
        produced += 1;
    }
    Ok(min_ratio)
}
