//! Norms and inner products via collocation quadrature (uniform trapezoid,
//! exact for band-limited integrands).

use super::field::{SpectralField, SpectralVectorField};
use super::ops::{gradient, project_modes};
use crate::Result;

/// `L^p` norm for `p in [1, inf]`; pass `f64::INFINITY` for the sup norm.
pub fn lp_norm(f: &SpectralField, p: f64) -> f64 {
    assert!(p >= 1.0, "p must be >= 1");
    let src = f.to_samples();
    if p.is_infinite() {
        return src.samples().iter().map(|s| s.abs()).fold(0.0, f64::max);
    }
    let w = f.grid().quad_weight();
    let sum: f64 = src.samples().iter().map(|s| s.abs().powf(p)).sum();
    (w * sum).powf(1.0 / p)
}

/// `L^2` norm.
pub fn l2_norm(f: &SpectralField) -> f64 {
    l2_inner(f, f).expect("same grid").max(0.0).sqrt()
}

/// `L^2` inner product `int f g`.
pub fn l2_inner(f: &SpectralField, g: &SpectralField) -> Result<f64> {
    f.grid().check_same(g.grid())?;
    if f.has_modes() && g.has_modes() {
        // Parseval: int f g = L^d sum_m f_m conj(g_m) for real fields.
        let acc: f64 = f
            .modes()
            .iter()
            .zip(g.modes())
            .map(|(a, b)| (a * b.conj()).re)
            .sum();
        Ok(acc * f.grid().volume())
    } else {
        let a = f.to_samples();
        let b = g.to_samples();
        let acc: f64 = a
            .samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| x * y)
            .sum();
        Ok(acc * f.grid().quad_weight())
    }
}

/// `L^2` norm of a vector field.
pub fn vec_l2_norm(v: &SpectralVectorField) -> f64 {
    let sq: f64 = v.components().iter().map(|c| {
        let n = l2_norm(c);
        n * n
    }).sum();
    sq.sqrt()
}

/// `L^2` inner product of vector fields.
pub fn vec_l2_inner(a: &SpectralVectorField, b: &SpectralVectorField) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..a.dim() {
        acc += l2_inner(a.component(i), b.component(i))?;
    }
    Ok(acc)
}

/// Squared `W^{1,2}` norm: `|u|_{L^2}^2 + |grad u|_{L^2}^2` with the spectral
/// gradient.
pub fn sobolev12_norm_sq(u: &SpectralVectorField) -> f64 {
    let mut acc = 0.0;
    for i in 0..u.dim() {
        let c = u.component(i);
        let n = l2_norm(c);
        acc += n * n;
        let g = gradient(c);
        for a in 0..u.dim() {
            let gn = l2_norm(g.component(a));
            acc += gn * gn;
        }
    }
    acc
}

/// `W^{1,2}` norm.
pub fn sobolev12_norm(u: &SpectralVectorField) -> f64 {
    sobolev12_norm_sq(u).sqrt()
}

/// Galerkin-space norm: `L^2` norm of the field projected onto
/// `|m|_inf <= n_cutoff`.
pub fn h_n_norm(u: &SpectralVectorField, n_cutoff: usize) -> f64 {
    let sq: f64 = u
        .components()
        .iter()
        .map(|c| {
            let p = project_modes(c, n_cutoff).expect("cutoff within grid");
            let n = l2_norm(&p);
            n * n
        })
        .sum();
    sq.sqrt()
}
