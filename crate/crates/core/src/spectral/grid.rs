use crate::{Error, Result};

/// Uniform collocation grid on the periodic torus `[0, L)^d`.
///
/// `n` collocation points per axis carry modes `|m|_inf <= n/2`; the Galerkin
/// cutoff `N` selects the subspace `|m|_inf <= N`. The constraint
/// `n >= 2(2N + 1)` leaves enough headroom that the cubic transport term,
/// assembled as two exact dealiased quadratic products, is alias-free on the
/// Galerkin band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGrid {
    dim: usize,
    points: usize,
    cutoff: usize,
    length: f64,
}

impl TorusGrid {
    /// Default torus side length.
    pub const DEFAULT_LENGTH: f64 = 2.0;

    pub fn new(dim: usize, points: usize, cutoff: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::invalid("d", "dimension must be 1, 2 or 3"));
        }
        if points < 4 || points % 2 != 0 {
            return Err(Error::invalid("n", "collocation count must be even and >= 4"));
        }
        if points < 2 * (2 * cutoff + 1) {
            return Err(Error::invalid(
                "n",
                format!("n >= 2(2N+1) required for dealiased cubic products, got n = {points}, N = {cutoff}"),
            ));
        }
        if !(length > 0.0) {
            return Err(Error::invalid("L", "side length must be positive"));
        }
        Ok(Self { dim, points, cutoff, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Collocation points per axis.
    pub fn points(&self) -> usize {
        self.points
    }

    /// Galerkin cutoff N.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Total number of collocation points / retained modes.
    pub fn size(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    /// Torus volume `L^d`.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Quadrature weight of one collocation point, `(L/n)^d`.
    pub fn quad_weight(&self) -> f64 {
        (self.length / self.points as f64).powi(self.dim as i32)
    }

    /// Grid spacing along one axis.
    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Signed integer frequency of FFT slot `k` along one axis, in
    /// `{-n/2, ..., n/2 - 1}`.
    pub fn freq_of(&self, k: usize) -> i64 {
        let n = self.points as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// Angular wavenumber `2 pi m / L` of FFT slot `k`.
    pub fn kappa_of(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.freq_of(k) as f64 / self.length
    }

    /// Decomposes a flat row-major index into per-axis slot indices.
    pub fn unravel(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for axis in (0..self.dim).rev() {
            idx[axis] = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    /// Flat row-major index of per-axis slot indices.
    pub fn ravel(&self, idx: &[usize; 3]) -> usize {
        let mut flat = 0usize;
        for axis in 0..self.dim {
            flat = flat * self.points + idx[axis];
        }
        flat
    }

    /// Signed frequencies of a flat mode index.
    pub fn freqs(&self, flat: usize) -> [i64; 3] {
        let idx = self.unravel(flat);
        let mut m = [0i64; 3];
        for axis in 0..self.dim {
            m[axis] = self.freq_of(idx[axis]);
        }
        m
    }

    /// Angular wavenumber vector of a flat mode index.
    pub fn kappas(&self, flat: usize) -> [f64; 3] {
        let idx = self.unravel(flat);
        let mut k = [0.0f64; 3];
        for axis in 0..self.dim {
            k[axis] = self.kappa_of(idx[axis]);
        }
        k
    }

    /// Physical coordinates of a flat collocation index.
    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let idx = self.unravel(flat);
        let h = self.spacing();
        let mut x = [0.0f64; 3];
        for axis in 0..self.dim {
            x[axis] = idx[axis] as f64 * h;
        }
        x
    }

    /// Flat index of the reflected point `x -> -x mod L` (axis-wise flips
    /// selected by `mask` bit `i`).
    pub fn reflect(&self, flat: usize, mask: usize) -> usize {
        let mut idx = self.unravel(flat);
        for axis in 0..self.dim {
            if mask & (1 << axis) != 0 {
                idx[axis] = (self.points - idx[axis]) % self.points;
            }
        }
        self.ravel(&idx)
    }

    /// Maximum `|m|_inf` over the flat mode index.
    pub fn freq_inf(&self, flat: usize) -> i64 {
        let m = self.freqs(flat);
        (0..self.dim).map(|a| m[a].abs()).max().unwrap_or(0)
    }

    pub(crate) fn check_same(&self, other: &TorusGrid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch {
                left: format!("{self:?}"),
                right: format!("{other:?}"),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_insufficient_dealias_headroom() {
        assert!(TorusGrid::new(2, 32, 8, 2.0).is_err());
        assert!(TorusGrid::new(2, 36, 8, 2.0).is_ok());
        assert!(TorusGrid::new(2, 34, 8, 2.0).is_ok());
    }

    #[test]
    fn freq_layout_is_standard() {
        let g = TorusGrid::new(1, 8, 1, 2.0).unwrap();
        let freqs: Vec<i64> = (0..8).map(|k| g.freq_of(k)).collect();
        assert_eq!(freqs, vec![0, 1, 2, 3, -4, -3, -2, -1]);
    }

    #[test]
    fn grid_closed_under_reflection() {
        let g = TorusGrid::new(2, 12, 2, 2.0).unwrap();
        for flat in 0..g.size() {
            let r = g.reflect(flat, 0b11);
            let x = g.coords(flat);
            let xr = g.coords(r);
            for a in 0..2 {
                let want = (g.length() - x[a]) % g.length();
                assert!((xr[a] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ravel_unravel_roundtrip() {
        let g = TorusGrid::new(3, 10, 2, 1.0).unwrap();
        for flat in 0..g.size() {
            assert_eq!(g.ravel(&g.unravel(flat)), flat);
        }
    }
}
