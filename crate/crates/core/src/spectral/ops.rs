//! Fourier-multiplier operators, Galerkin projection and dealiased products.

use super::fft::{fft_nd, C64};
use super::field::{hermitize, MatrixField, SpectralField, SpectralVectorField};
use super::grid::TorusGrid;
use crate::{Error, Result};

/// L2-orthogonal projection onto trigonometric polynomials of order
/// `n_max`: modes with `|m|_inf > n_max` are zeroed. Idempotent and
/// self-adjoint.
pub fn project_modes(f: &SpectralField, n_max: usize) -> Result<SpectralField> {
    let grid = *f.grid();
    if n_max > grid.points() / 2 {
        return Err(Error::invalid(
            "N",
            format!("projection order {} exceeds grid resolution n/2 = {}", n_max, grid.points() / 2),
        ));
    }
    let src = f.to_modes();
    let modes = (0..grid.size())
        .map(|i| {
            if grid.freq_inf(i) > n_max as i64 {
                C64::default()
            } else {
                src.modes()[i]
            }
        })
        .collect();
    SpectralField::from_modes(grid, modes)
}

/// Componentwise Galerkin projection of a vector field.
pub fn project_vector(v: &SpectralVectorField, n_max: usize) -> Result<SpectralVectorField> {
    v.try_map(|c| project_modes(c, n_max))
}

/// Squared wavenumber `|kappa|^2` of a flat mode index.
fn kappa_sq(grid: &TorusGrid, flat: usize) -> f64 {
    let k = grid.kappas(flat);
    (0..grid.dim()).map(|a| k[a] * k[a]).sum()
}

/// Derivative wavenumber along `axis`: zero on the Nyquist slot so odd
/// multipliers keep real fields real.
fn kappa_deriv(grid: &TorusGrid, flat: usize, axis: usize) -> f64 {
    let idx = grid.unravel(flat);
    if idx[axis] == grid.points() / 2 {
        0.0
    } else {
        grid.kappa_of(idx[axis])
    }
}

/// Inverse Laplacian on the mean-zero part: returns `g` with
/// `lap g = f - mean f` and `mean g = 0`.
pub fn inv_laplacian(f: &SpectralField) -> SpectralField {
    f.apply_multiplier(|g, i| {
        let k2 = kappa_sq(g, i);
        if k2 == 0.0 {
            C64::default()
        } else {
            C64::new(-1.0 / k2, 0.0)
        }
    })
}

/// Spectral Laplacian.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    f.apply_multiplier(|g, i| C64::new(-kappa_sq(g, i), 0.0))
}

/// Spectral partial derivative along one axis.
pub fn derivative(f: &SpectralField, axis: usize) -> SpectralField {
    f.apply_multiplier(|g, i| C64::new(0.0, kappa_deriv(g, i, axis)))
}

/// Spectral gradient of a scalar field.
pub fn gradient(f: &SpectralField) -> SpectralVectorField {
    let comps = (0..f.grid().dim()).map(|a| derivative(f, a)).collect();
    SpectralVectorField::new(comps).expect("componentwise construction")
}

/// Spectral divergence of a vector field.
pub fn divergence(v: &SpectralVectorField) -> SpectralField {
    let grid = *v.grid();
    let mut acc = SpectralField::zeros(grid);
    for a in 0..grid.dim() {
        acc = acc
            .lin_comb(1.0, &derivative(v.component(a), a), 1.0)
            .expect("same grid");
    }
    acc
}

/// Velocity gradient tensor, entry `(i, j) = d u^i / d x_j`.
pub fn gradient_tensor(v: &SpectralVectorField) -> MatrixField {
    let grid = *v.grid();
    let d = grid.dim();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            entries.push(derivative(v.component(i), j));
        }
    }
    MatrixField::new(grid, entries).expect("componentwise construction")
}

/// `grad lap^{-1} f`: mode-wise multiplier `-i kappa / |kappa|^2`, zero on the
/// mean and Nyquist slots. Annihilates constants.
pub fn riesz_grad(f: &SpectralField) -> SpectralVectorField {
    let grid = *f.grid();
    let comps = (0..grid.dim())
        .map(|axis| {
            f.apply_multiplier(|g, i| {
                let k2 = kappa_sq(g, i);
                if k2 == 0.0 {
                    C64::default()
                } else {
                    C64::new(0.0, -kappa_deriv(g, i, axis) / k2)
                }
            })
        })
        .collect();
    SpectralVectorField::new(comps).expect("componentwise construction")
}

/// `grad lap^{-1} div v`: multiplier `kappa kappa^T / |kappa|^2` applied to
/// the component stack.
pub fn riesz_grad_div(v: &SpectralVectorField) -> SpectralVectorField {
    let grid = *v.grid();
    let d = grid.dim();
    let vm = v.to_modes();
    let mut out = vec![vec![C64::default(); grid.size()]; d];
    for flat in 0..grid.size() {
        let k2 = kappa_sq(&grid, flat);
        if k2 == 0.0 {
            continue;
        }
        let mut kdotv = C64::default();
        for a in 0..d {
            kdotv += vm.component(a).modes()[flat] * kappa_deriv(&grid, flat, a);
        }
        for (a, comp) in out.iter_mut().enumerate() {
            comp[flat] = kdotv * (kappa_deriv(&grid, flat, a) / k2);
        }
    }
    let comps = out
        .into_iter()
        .map(|m| SpectralField::from_modes(grid, m).expect("length preserved"))
        .collect();
    SpectralVectorField::new(comps).expect("componentwise construction")
}

/// `grad lap^{-1} grad f`: matrix multiplier `kappa_i kappa_j / |kappa|^2`.
/// Its trace reproduces `f - mean f`.
pub fn riesz_double(f: &SpectralField) -> MatrixField {
    let grid = *f.grid();
    let d = grid.dim();
    let fm = f.to_modes();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let modes = (0..grid.size())
                .map(|flat| {
                    let k2 = kappa_sq(&grid, flat);
                    if k2 == 0.0 {
                        C64::default()
                    } else {
                        // full (non-Nyquist-zeroed) wavenumbers keep the
                        // multiplier even, so the trace identity is exact
                        let k = grid.kappas(flat);
                        fm.modes()[flat] * (k[i] * k[j] / k2)
                    }
                })
                .collect();
            entries.push(SpectralField::from_modes(grid, modes).expect("length preserved"));
        }
    }
    MatrixField::new(grid, entries).expect("componentwise construction")
}

/// Smallest even 7-smooth integer at least `m` (fast FFT lengths).
fn next_smooth_even(mut m: usize) -> usize {
    if m % 2 == 1 {
        m += 1;
    }
    loop {
        let mut v = m;
        for p in [2usize, 3, 5, 7] {
            while v % p == 0 {
                v /= p;
            }
        }
        if v == 1 {
            return m;
        }
        m += 2;
    }
}

/// Per-axis embedding table: coarse slot `k` maps to up to two fine slots
/// with weights (the `-n/2` slot splits across `+-n/2`).
fn slot_table(n: usize, m: usize) -> Vec<([(usize, f64); 2], usize)> {
    (0..n)
        .map(|k| {
            if k < n / 2 {
                ([(k, 1.0), (0, 0.0)], 1)
            } else if k == n / 2 {
                if m == n {
                    ([(n / 2, 1.0), (0, 0.0)], 1)
                } else {
                    ([(n / 2, 0.5), (m - n / 2, 0.5)], 2)
                }
            } else {
                ([(m - (n - k), 1.0), (0, 0.0)], 1)
            }
        })
        .collect()
}

/// Alias-free pointwise product with the retained band `out_band`: the
/// factors are zero-padded to a grid wide enough that every retained
/// coefficient equals the exact truncated mode convolution.
pub fn dealias_product_truncated(
    f: &SpectralField,
    g: &SpectralField,
    out_band: usize,
) -> Result<SpectralField> {
    let grid = *f.grid();
    grid.check_same(g.grid())?;
    let n = grid.points();
    let d = grid.dim();
    let needed = f.band() + g.band() + out_band + 1;
    let m = if needed <= n {
        n
    } else {
        next_smooth_even(needed).min(2 * n)
    };

    if m == n {
        // the base grid already resolves the product alias-free on the band
        let fs = f.samples_cow();
        let gs = g.samples_cow();
        let prod: Vec<f64> = fs.iter().zip(gs.iter()).map(|(a, b)| a * b).collect();
        let prod_field = SpectralField::from_samples(grid, prod)?;
        let mut modes = prod_field.modes_cow().into_owned();
        if (out_band as i64) < (n as i64) / 2 {
            for (flat, c) in modes.iter_mut().enumerate() {
                if grid.freq_inf(flat) > out_band as i64 {
                    *c = C64::default();
                }
            }
        }
        return SpectralField::from_modes(grid, modes);
    }

    let fine_size = m.pow(d as u32);
    let fm = f.modes_cow();
    let gm = g.modes_cow();
    let table = slot_table(n, m);
    let mut fine_strides = [0usize; 3];
    {
        let mut s = 1usize;
        for a in (0..d).rev() {
            fine_strides[a] = s;
            s *= m;
        }
    }

    let mut fine_f = vec![C64::default(); fine_size];
    let mut fine_g = vec![C64::default(); fine_size];
    for (coarse, fine) in [(&fm, &mut fine_f), (&gm, &mut fine_g)] {
        for (flat, &c) in coarse.iter().enumerate() {
            if c == C64::default() {
                continue;
            }
            let idx = grid.unravel(flat);
            let mut targets = [(0usize, 1.0f64); 8];
            let mut count = 1usize;
            for a in 0..d {
                let (slots, scount) = &table[idx[a]];
                let mut next = [(0usize, 0.0f64); 8];
                let mut ncount = 0;
                for &(base, w) in targets.iter().take(count) {
                    for &(s, sw) in slots.iter().take(*scount) {
                        next[ncount] = (base + s * fine_strides[a], w * sw);
                        ncount += 1;
                    }
                }
                targets = next;
                count = ncount;
            }
            for &(t, w) in targets.iter().take(count) {
                fine[t] += c * w;
            }
        }
    }

    let mut dims = [1usize; 3];
    for a in 0..d {
        dims[a] = m;
    }
    fft_nd(&dims[..d], &mut fine_f, true);
    fft_nd(&dims[..d], &mut fine_g, true);
    for (a, b) in fine_f.iter_mut().zip(&fine_g) {
        *a *= b;
    }
    fft_nd(&dims[..d], &mut fine_f, false);
    let scale = 1.0 / fine_size as f64;

    let mut coarse = vec![C64::default(); grid.size()];
    for (flat, out) in coarse.iter_mut().enumerate() {
        if grid.freq_inf(flat) > out_band as i64 {
            continue;
        }
        let idx = grid.unravel(flat);
        let mut sources = [0usize; 8];
        let mut count = 1usize;
        for a in 0..d {
            let (slots, scount) = &table[idx[a]];
            let mut next = [0usize; 8];
            let mut ncount = 0;
            for &base in sources.iter().take(count) {
                for &(s, _) in slots.iter().take(*scount) {
                    next[ncount] = base + s * fine_strides[a];
                    ncount += 1;
                }
            }
            sources = next;
            count = ncount;
        }
        *out = sources.iter().take(count).map(|&s| fine_f[s] * scale).sum();
    }
    hermitize(&grid, &mut coarse);
    SpectralField::from_modes(grid, coarse)
}

/// Dealiased pointwise product retaining the full grid band
/// `|m|_inf <= n/2`: exact truncated mode convolution for any two grid
/// fields.
pub fn dealias_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    dealias_product_truncated(f, g, f.grid().points() / 2)
}

/// Dealiased product of a scalar and each component of a vector field.
pub fn dealias_scalar_vector(
    f: &SpectralField,
    v: &SpectralVectorField,
) -> Result<SpectralVectorField> {
    v.try_map(|c| dealias_product(f, c))
}

/// Componentwise alias-free product retaining only `|m|_inf <= out_band`.
pub fn dealias_scalar_vector_truncated(
    f: &SpectralField,
    v: &SpectralVectorField,
    out_band: usize,
) -> Result<SpectralVectorField> {
    v.try_map(|c| dealias_product_truncated(f, c, out_band))
}

/// Resamples a field onto a grid refined by `factor` via zero padding; exact
/// for band-limited fields. Used by refined-quadrature oracles and spectral
/// tail reports.
pub fn resample(f: &SpectralField, factor: usize) -> SpectralField {
    let grid = *f.grid();
    let n = grid.points();
    let m = n * factor;
    let d = grid.dim();
    let fine_size = m.pow(d as u32);
    let fm = f.modes_cow();
    let table = slot_table(n, m);
    let mut fine_strides = [0usize; 3];
    {
        let mut s = 1usize;
        for a in (0..d).rev() {
            fine_strides[a] = s;
            s *= m;
        }
    }
    let mut fine = vec![C64::default(); fine_size];
    for (flat, &c) in fm.iter().enumerate() {
        if c == C64::default() {
            continue;
        }
        let idx = grid.unravel(flat);
        let mut targets = [(0usize, 1.0f64); 8];
        let mut count = 1usize;
        for a in 0..d {
            let (slots, scount) = &table[idx[a]];
            let mut next = [(0usize, 0.0f64); 8];
            let mut ncount = 0;
            for &(base, w) in targets.iter().take(count) {
                for &(s, sw) in slots.iter().take(*scount) {
                    next[ncount] = (base + s * fine_strides[a], w * sw);
                    ncount += 1;
                }
            }
            targets = next;
            count = ncount;
        }
        for &(t, w) in targets.iter().take(count) {
            fine[t] += c * w;
        }
    }
    let mut dims = [1usize; 3];
    for a in 0..d {
        dims[a] = m;
    }
    fft_nd(&dims[..d], &mut fine, true);
    let fine_grid = TorusGrid::new(d, m, grid.cutoff(), grid.length()).expect("refined grid");
    SpectralField::from_samples(fine_grid, fine.iter().map(|c| c.re).collect())
        .expect("length by construction")
}

/// Fraction of the squared L2 mass of `f` carried by modes `|m|_inf > shell`.
pub fn tail_fraction(f: &SpectralField, shell: usize) -> f64 {
    let fm = f.to_modes();
    let grid = fm.grid();
    let mut total = 0.0;
    let mut tail = 0.0;
    for i in 0..grid.size() {
        let e = fm.modes()[i].norm_sqr();
        total += e;
        if grid.freq_inf(i) > shell as i64 {
            tail += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}
