use super::fft::{fft_nd, C64};
use super::grid::TorusGrid;
use crate::{Error, Result};
use std::borrow::Cow;

/// Which of the two representations is currently populated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repr {
    Samples,
    Modes,
    Both,
}

/// Real periodic scalar field with dual mode-coefficient / collocation-sample
/// representations.
///
/// The mode array follows the standard FFT layout with signed frequencies
/// `m in {-n/2, ..., n/2 - 1}` per axis and coefficients normalized so that
/// `f(x) = sum_m c_m exp(i 2 pi m . x / L)`. Real samples correspond to the
/// Hermitian symmetry `c_{-m} = conj(c_m)`, which [`SpectralField::to_modes`]
/// enforces exactly.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: TorusGrid,
    samples: Vec<f64>,
    modes: Vec<C64>,
    repr: Repr,
}

impl SpectralField {
    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            samples: vec![0.0; grid.size()],
            modes: vec![C64::default(); grid.size()],
            repr: Repr::Both,
        }
    }

    pub fn constant(grid: TorusGrid, value: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.samples.iter_mut().for_each(|s| *s = value);
        f.modes[0] = C64::new(value, 0.0);
        f
    }

    pub fn from_samples(grid: TorusGrid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.size() {
            return Err(Error::invalid(
                "samples",
                format!("expected {} values, got {}", grid.size(), samples.len()),
            ));
        }
        Ok(Self {
            grid,
            samples,
            modes: Vec::new(),
            repr: Repr::Samples,
        })
    }

    /// Builds a field from mode coefficients; Hermitian symmetry is enforced
    /// so the field is real.
    pub fn from_modes(grid: TorusGrid, mut modes: Vec<C64>) -> Result<Self> {
        if modes.len() != grid.size() {
            return Err(Error::invalid(
                "modes",
                format!("expected {} coefficients, got {}", grid.size(), modes.len()),
            ));
        }
        hermitize(&grid, &mut modes);
        Ok(Self {
            grid,
            samples: Vec::new(),
            modes,
            repr: Repr::Modes,
        })
    }

    /// Evaluates `f` at every collocation point.
    pub fn from_fn(grid: TorusGrid, f: impl Fn(&[f64; 3]) -> f64) -> Self {
        let samples = (0..grid.size()).map(|i| f(&grid.coords(i))).collect();
        Self::from_samples(grid, samples).expect("length by construction")
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn has_samples(&self) -> bool {
        matches!(self.repr, Repr::Samples | Repr::Both)
    }

    pub fn has_modes(&self) -> bool {
        matches!(self.repr, Repr::Modes | Repr::Both)
    }

    fn compute_modes(&self) -> Vec<C64> {
        let mut buf: Vec<C64> = self.samples.iter().map(|&s| C64::new(s, 0.0)).collect();
        let dims = dims_of(&self.grid);
        fft_nd(&dims[..self.grid.dim()], &mut buf, false);
        let scale = 1.0 / self.grid.size() as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        hermitize(&self.grid, &mut buf);
        buf
    }

    fn compute_samples(&self) -> Vec<f64> {
        let mut buf = self.modes.clone();
        let dims = dims_of(&self.grid);
        fft_nd(&dims[..self.grid.dim()], &mut buf, true);
        buf.iter().map(|c| c.re).collect()
    }

    /// Returns the field with both representations populated; the mode array
    /// is produced by a forward transform with Hermitian symmetry enforced.
    pub fn to_modes(&self) -> Self {
        if self.has_modes() {
            return self.clone();
        }
        Self {
            grid: self.grid,
            samples: self.samples.clone(),
            modes: self.compute_modes(),
            repr: Repr::Both,
        }
    }

    /// Returns the field with both representations populated; samples are the
    /// real part of the inverse transform.
    pub fn to_samples(&self) -> Self {
        if self.has_samples() {
            return self.clone();
        }
        Self {
            grid: self.grid,
            samples: self.compute_samples(),
            modes: self.modes.clone(),
            repr: Repr::Both,
        }
    }

    /// Mode coefficients without cloning an already-populated representation.
    pub fn modes_cow(&self) -> Cow<'_, [C64]> {
        if self.has_modes() {
            Cow::Borrowed(&self.modes)
        } else {
            Cow::Owned(self.compute_modes())
        }
    }

    /// Collocation samples without cloning an already-populated
    /// representation.
    pub fn samples_cow(&self) -> Cow<'_, [f64]> {
        if self.has_samples() {
            Cow::Borrowed(&self.samples)
        } else {
            Cow::Owned(self.compute_samples())
        }
    }

    /// Largest `|m|_inf` carrying a nonzero coefficient, or 0 for the zero
    /// field. Galerkin-projected fields report their exact band.
    pub fn band(&self) -> usize {
        let modes = self.modes_cow();
        let mut band = 0i64;
        for (flat, c) in modes.iter().enumerate() {
            if c.norm_sqr() != 0.0 {
                band = band.max(self.grid.freq_inf(flat));
            }
        }
        band as usize
    }

    /// Collocation samples; call [`Self::to_samples`] first if only modes are
    /// populated.
    pub fn samples(&self) -> &[f64] {
        assert!(self.has_samples(), "field holds no sample representation");
        &self.samples
    }

    pub fn modes(&self) -> &[C64] {
        assert!(self.has_modes(), "field holds no mode representation");
        &self.modes
    }

    /// Spatial mean `(1/|T|) int f`.
    pub fn mean(&self) -> f64 {
        if self.has_modes() {
            self.modes[0].re
        } else {
            self.samples.iter().sum::<f64>() / self.samples.len() as f64
        }
    }

    /// Integral over the torus.
    pub fn integral(&self) -> f64 {
        self.mean() * self.grid.volume()
    }

    pub fn map_samples(&self, f: impl Fn(f64) -> f64) -> Self {
        let src = self.samples_cow();
        let samples = src.iter().map(|&s| f(s)).collect();
        Self::from_samples(self.grid, samples).expect("length preserved")
    }

    pub fn zip_samples(&self, other: &SpectralField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let a = self.samples_cow();
        let b = other.samples_cow();
        let samples = a.iter().zip(b.iter()).map(|(&x, &y)| f(x, y)).collect();
        Self::from_samples(self.grid, samples)
    }

    /// Linear combination `alpha * self + beta * other`, computed in whichever
    /// representation both operands share.
    pub fn lin_comb(&self, alpha: f64, other: &SpectralField, beta: f64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        if self.has_modes() && other.has_modes() {
            let modes = self
                .modes
                .iter()
                .zip(&other.modes)
                .map(|(a, b)| a * alpha + b * beta)
                .collect();
            Self::from_modes(self.grid, modes)
        } else {
            self.zip_samples(other, |a, b| alpha * a + beta * b)
        }
    }

    pub fn scale(&self, alpha: f64) -> Self {
        match self.repr {
            Repr::Samples => {
                Self::from_samples(self.grid, self.samples.iter().map(|&s| alpha * s).collect())
                    .expect("length preserved")
            }
            _ => Self::from_modes(self.grid, self.modes.iter().map(|&c| c * alpha).collect())
                .expect("length preserved"),
        }
    }

    /// Applies a mode-wise multiplier `lambda(m)`; the result is hermitized so
    /// real multipliers (and odd imaginary ones zeroed at Nyquist) map real
    /// fields to real fields.
    pub fn apply_multiplier(&self, lambda: impl Fn(&TorusGrid, usize) -> C64) -> Self {
        let src = self.modes_cow();
        let modes = (0..self.grid.size())
            .map(|i| src[i] * lambda(&self.grid, i))
            .collect();
        Self::from_modes(self.grid, modes).expect("length preserved")
    }
}

/// All-axes dims array for FFT calls.
pub(crate) fn dims_of(grid: &TorusGrid) -> [usize; 3] {
    let mut dims = [1usize; 3];
    for a in 0..grid.dim() {
        dims[a] = grid.points();
    }
    dims
}

/// Enforces `c_{-m} = conj(c_m)` exactly by averaging conjugate pairs;
/// self-conjugate slots (all components 0 or -n/2) become purely real.
pub(crate) fn hermitize(grid: &TorusGrid, modes: &mut [C64]) {
    let n = grid.points();
    for flat in 0..grid.size() {
        let idx = grid.unravel(flat);
        let mut conj_idx = [0usize; 3];
        for a in 0..grid.dim() {
            conj_idx[a] = (n - idx[a]) % n;
        }
        let cflat = grid.ravel(&conj_idx);
        if cflat == flat {
            modes[flat] = C64::new(modes[flat].re, 0.0);
        } else if cflat > flat {
            let avg = 0.5 * (modes[flat] + modes[cflat].conj());
            modes[flat] = avg;
            modes[cflat] = avg.conj();
        }
    }
}

/// Vector field with `d` scalar spectral components.
#[derive(Debug, Clone)]
pub struct SpectralVectorField {
    components: Vec<SpectralField>,
}

impl SpectralVectorField {
    pub fn new(components: Vec<SpectralField>) -> Result<Self> {
        let grid = *components
            .first()
            .ok_or_else(|| Error::invalid("components", "vector field needs >= 1 component"))?
            .grid();
        if components.len() != grid.dim() {
            return Err(Error::invalid(
                "components",
                format!("expected {} components, got {}", grid.dim(), components.len()),
            ));
        }
        for c in &components {
            grid.check_same(c.grid())?;
        }
        Ok(Self { components })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            components: (0..grid.dim()).map(|_| SpectralField::zeros(grid)).collect(),
        }
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(usize, &[f64; 3]) -> f64) -> Self {
        let components = (0..grid.dim())
            .map(|i| SpectralField::from_fn(grid, |x| f(i, x)))
            .collect();
        Self { components }
    }

    pub fn grid(&self) -> &TorusGrid {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &SpectralField {
        &self.components[i]
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    pub fn into_components(self) -> Vec<SpectralField> {
        self.components
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        Self {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn try_map(
        &self,
        f: impl Fn(&SpectralField) -> Result<SpectralField>,
    ) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(f)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }

    pub fn to_modes(&self) -> Self {
        self.map(|c| c.to_modes())
    }

    pub fn to_samples(&self) -> Self {
        self.map(|c| c.to_samples())
    }

    pub fn scale(&self, alpha: f64) -> Self {
        self.map(|c| c.scale(alpha))
    }

    pub fn lin_comb(&self, alpha: f64, other: &SpectralVectorField, beta: f64) -> Result<Self> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.lin_comb(alpha, b, beta))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }

    /// Pointwise squared magnitude `|v|^2` as a sample-space field.
    pub fn magnitude_sq(&self) -> SpectralField {
        let grid = *self.grid();
        let mut samples = vec![0.0; grid.size()];
        for c in &self.components {
            let cs = c.samples_cow();
            for (acc, &v) in samples.iter_mut().zip(cs.iter()) {
                *acc += v * v;
            }
        }
        SpectralField::from_samples(grid, samples).expect("length preserved")
    }
}

/// Square matrix of spectral fields, row-major `d x d` (entry `(i, j)` at
/// `i * d + j`).
#[derive(Debug, Clone)]
pub struct MatrixField {
    grid: TorusGrid,
    entries: Vec<SpectralField>,
}

impl MatrixField {
    pub fn new(grid: TorusGrid, entries: Vec<SpectralField>) -> Result<Self> {
        if entries.len() != grid.dim() * grid.dim() {
            return Err(Error::invalid(
                "entries",
                format!("expected {} entries", grid.dim() * grid.dim()),
            ));
        }
        for e in &entries {
            grid.check_same(e.grid())?;
        }
        Ok(Self { grid, entries })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn entry(&self, i: usize, j: usize) -> &SpectralField {
        &self.entries[i * self.grid.dim() + j]
    }

    pub fn entries(&self) -> &[SpectralField] {
        &self.entries
    }

    /// Trace as a scalar field.
    pub fn trace(&self) -> SpectralField {
        let d = self.grid.dim();
        let mut acc = self.entry(0, 0).clone();
        for i in 1..d {
            acc = acc.lin_comb(1.0, self.entry(i, i), 1.0).expect("same grid");
        }
        acc
    }

    /// Pointwise double contraction `A : B` as a sample-space field.
    pub fn contract(&self, other: &MatrixField) -> Result<SpectralField> {
        self.grid.check_same(&other.grid)?;
        let mut samples = vec![0.0; self.grid.size()];
        for (a, b) in self.entries.iter().zip(&other.entries) {
            let a = a.to_samples();
            let b = b.to_samples();
            for ((acc, &x), &y) in samples.iter_mut().zip(a.samples()).zip(b.samples()) {
                *acc += x * y;
            }
        }
        SpectralField::from_samples(self.grid, samples)
    }
}
