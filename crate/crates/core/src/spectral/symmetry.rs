//! Reflection symmetry class: even density, componentwise odd/even velocity.
//!
//! The class consists of fields with `rho(-x) = rho(x)` and velocity
//! components `u^i` odd under `x_i -> -x_i` and even under `x_j -> -x_j`,
//! `j != i`. Averaging over the `2^d` axis reflections realizes the
//! L2-orthogonal projection onto the class; with an even collocation count
//! the grid is closed under every reflection, so the projection is exact.

use super::field::{SpectralField, SpectralVectorField};
use super::norms::l2_norm;
use crate::Result;

/// Projects a scalar field onto the even class (even in every coordinate).
pub fn project_scalar_even(f: &SpectralField) -> SpectralField {
    let grid = *f.grid();
    let src = f.to_samples();
    let samples = src.samples();
    let masks = 1usize << grid.dim();
    let weight = 1.0 / masks as f64;
    let mut out = vec![0.0; grid.size()];
    for (flat, acc) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for mask in 0..masks {
            s += samples[grid.reflect(flat, mask)];
        }
        *acc = s * weight;
    }
    SpectralField::from_samples(grid, out).expect("length preserved")
}

/// Projects a velocity field onto the class (`u^i` odd in `x_i`, even in the
/// remaining coordinates).
pub fn project_vector_class(v: &SpectralVectorField) -> SpectralVectorField {
    let grid = *v.grid();
    let masks = 1usize << grid.dim();
    let weight = 1.0 / masks as f64;
    let comps = (0..grid.dim())
        .map(|i| {
            let src = v.component(i).to_samples();
            let samples = src.samples();
            let mut out = vec![0.0; grid.size()];
            for (flat, acc) in out.iter_mut().enumerate() {
                let mut s = 0.0;
                for mask in 0..masks {
                    let sign = if mask & (1 << i) != 0 { -1.0 } else { 1.0 };
                    s += sign * samples[grid.reflect(flat, mask)];
                }
                *acc = s * weight;
            }
            SpectralField::from_samples(grid, out).expect("length preserved")
        })
        .collect();
    SpectralVectorField::new(comps).expect("componentwise construction")
}

/// Projects the pair `(rho, u)` onto the symmetry class.
pub fn symmetry_project(
    rho: &SpectralField,
    u: &SpectralVectorField,
) -> Result<(SpectralField, SpectralVectorField)> {
    rho.grid().check_same(u.grid())?;
    Ok((project_scalar_even(rho), project_vector_class(u)))
}

/// L2 distance of `(rho, u)` to the symmetry class.
pub fn symmetry_defect(rho: &SpectralField, u: &SpectralVectorField) -> Result<f64> {
    let (rho_p, u_p) = symmetry_project(rho, u)?;
    let mut sq = {
        let diff = rho.lin_comb(1.0, &rho_p, -1.0)?;
        let n = l2_norm(&diff);
        n * n
    };
    for i in 0..u.dim() {
        let diff = u.component(i).lin_comb(1.0, u_p.component(i), -1.0)?;
        let n = l2_norm(&diff);
        sq += n * n;
    }
    Ok(sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TorusGrid;
    use std::f64::consts::PI;

    fn grid() -> TorusGrid {
        TorusGrid::new(2, 16, 3, 2.0).unwrap()
    }

    #[test]
    fn in_class_pair_is_fixed() {
        let g = grid();
        let l = g.length();
        let rho = SpectralField::from_fn(g, |x| 1.0 + 0.2 * (2.0 * PI * x[0] / l).cos());
        let u = SpectralVectorField::from_fn(g, |i, x| {
            if i == 0 {
                (2.0 * PI * x[0] / l).sin() * (2.0 * PI * x[1] / l).cos()
            } else {
                (2.0 * PI * x[1] / l).sin()
            }
        });
        let defect = symmetry_defect(&rho, &u).unwrap();
        assert!(defect < 1e-13, "defect {defect}");
        let (rho_p, u_p) = symmetry_project(&rho, &u).unwrap();
        let dr = rho
            .to_samples()
            .samples()
            .iter()
            .zip(rho_p.to_samples().samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dr < 1e-14);
        let du = u
            .component(0)
            .to_samples()
            .samples()
            .iter()
            .zip(u_p.component(0).to_samples().samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(du < 1e-14);
    }

    #[test]
    fn odd_scalar_part_annihilated() {
        let g = grid();
        let l = g.length();
        let rho = SpectralField::from_fn(g, |x| (2.0 * PI * x[0] / l).sin());
        let proj = project_scalar_even(&rho);
        let max = proj.samples().iter().map(|s| s.abs()).fold(0.0, f64::max);
        assert!(max < 1e-14, "odd part survived: {max}");
    }

    #[test]
    fn projection_is_idempotent() {
        let g = grid();
        let rho = SpectralField::from_fn(g, |x| (3.1 * x[0] + 1.7 * x[1]).sin() + 0.5 * x[1]);
        let u = SpectralVectorField::from_fn(g, |i, x| {
            ((i + 1) as f64 * x[0] * 2.2).cos() + x[1] * 0.3
        });
        let (r1, u1) = symmetry_project(&rho, &u).unwrap();
        let (r2, u2) = symmetry_project(&r1, &u1).unwrap();
        let dr = r1
            .to_samples()
            .samples()
            .iter()
            .zip(r2.to_samples().samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dr < 1e-12);
        for i in 0..2 {
            let du = u1
                .component(i)
                .to_samples()
                .samples()
                .iter()
                .zip(u2.component(i).to_samples().samples())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(du < 1e-12);
        }
        let defect = symmetry_defect(&r1, &u1).unwrap();
        assert!(defect < 1e-12);
    }
}
