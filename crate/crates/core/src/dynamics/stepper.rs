//! Semi-implicit Euler-Maruyama integration of the regularized Galerkin
//! system.
//!
//! Density: the linear diffusion and damping are implicit (diagonal in mode
//! space), transport and the mass source explicit. Momentum: the unknown is
//! the vector of Galerkin momentum functionals `P = Pi_N(rho u)`; all drift
//! except the viscous term plus the Ito noise is explicit, the viscous term
//! is implicit in the velocity, and the velocity is recovered from the new
//! density through the SPD density-weighted mass system.

use crate::model::{cutoff_h, solve_m_epsilon, truncation_factor, ModelParams, NoiseModel};
use crate::spectral::{
    dealias_product_truncated, dealias_scalar_vector, dealias_scalar_vector_truncated,
    derivative, divergence, gradient, project_modes, project_vector, symmetry_project, C64,
    SpectralField, SpectralVectorField, TorusGrid,
};
use crate::{Error, Result};

use super::state::State;
use super::wiener::WienerPath;

/// Which regularized system the stepper integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemVariant {
    /// Full zero-level system: truncated transport `rho [u]_R`, cutoff
    /// pressure, damped continuity with the mass-stabilizing source
    /// `H(rhohat / M0) / |T|`.
    ZeroLevel,
    /// The regularized system after the truncation limits: no cutoffs, mass
    /// source frozen at its equilibrium value `2 eps M_eps / |T|`. With
    /// `epsilon = 0` every regularization term vanishes.
    EpsLevel,
}

/// Time integrator selector (a single scheme is provided).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    SemiImplicitEulerMaruyama,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    /// Retry budget: a step producing negative density is bisected with
    /// Brownian-bridge refinement up to this depth before failing hard.
    pub max_halvings: u32,
    /// Project each step onto the reflection symmetry class.
    pub symmetric: bool,
    pub variant: SystemVariant,
    /// Record every `stride`-th step in the trajectory.
    pub stride: usize,
    /// Fine Wiener increments per step (common-random-number refinement).
    pub substeps: u32,
}

impl StepperConfig {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            scheme: Scheme::SemiImplicitEulerMaruyama,
            max_halvings: 8,
            symmetric: false,
            variant: SystemVariant::ZeroLevel,
            stride: 1,
            substeps: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::invalid("dt", "dt > 0 required"));
        }
        if self.stride == 0 {
            return Err(Error::invalid("stride", "stride >= 1 required"));
        }
        if self.substeps == 0 {
            return Err(Error::invalid("substeps", "substeps >= 1 required"));
        }
        Ok(())
    }
}

/// Grid realization of the noise family: unit trig fields precomputed in
/// mode space.
#[derive(Debug, Clone)]
pub struct NoiseContext {
    model: NoiseModel,
    trig: Vec<SpectralVectorField>,
}

impl NoiseContext {
    pub fn new(model: NoiseModel, grid: TorusGrid) -> Self {
        let trig = model.trig_fields(grid);
        Self { model, trig }
    }

    pub fn model(&self) -> &NoiseModel {
        &self.model
    }

    pub fn k_count(&self) -> usize {
        self.model.k_count()
    }

    pub fn is_off(&self) -> bool {
        self.model.is_off()
    }

    /// `Pi_N g_k(rho)` for every mode: the projected coefficient fields the
    /// Galerkin system actually sees.
    pub fn projected_g(&self, rho: &SpectralField) -> Result<Vec<SpectralVectorField>> {
        let grid = *rho.grid();
        let sigma = rho.to_samples().map_samples(NoiseModel::sigma);
        let n = grid.cutoff();
        self.trig
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let alpha = self.model.amplitudes()[k];
                let scaled = t.try_map(|c| {
                    let prod = sigma.zip_samples(c, |s, v| s * v)?;
                    project_modes(&prod, n).map(|f| f.scale(alpha))
                })?;
                Ok(scaled)
            })
            .collect()
    }

    /// Increment field `sum_k Pi_N(rho Pi_N g_k) dW_k`, assembled through the
    /// linear combination of the precomputed trig fields.
    pub fn increment_field(
        &self,
        rho: &SpectralField,
        dws: &[f64],
    ) -> Result<Option<SpectralVectorField>> {
        if self.is_off() || dws.iter().all(|w| *w == 0.0) {
            return Ok(None);
        }
        let grid = *rho.grid();
        let n = grid.cutoff();
        // weighted trig sum, folded directly in mode space
        let d = grid.dim();
        let mut acc_modes = vec![vec![C64::default(); grid.size()]; d];
        for (k, t) in self.trig.iter().enumerate() {
            let w = self.model.amplitudes()[k] * dws[k];
            if w == 0.0 {
                continue;
            }
            for (i, comp) in acc_modes.iter_mut().enumerate() {
                let tm = t.component(i).modes();
                for (a, b) in comp.iter_mut().zip(tm) {
                    *a += b * w;
                }
            }
        }
        let acc = SpectralVectorField::new(
            acc_modes
                .into_iter()
                .map(|m| SpectralField::from_modes(grid, m))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let sigma = rho.map_samples(NoiseModel::sigma);
        let projected = acc.try_map(|c| {
            let prod = sigma.zip_samples(c, |s, v| s * v)?;
            project_modes(&prod, n)
        })?;
        Ok(Some(dealias_scalar_vector_truncated(rho, &projected, n)?))
    }
}

/// Mass source entering the continuity equation pointwise. Dividing by the
/// torus volume makes the total mass obey the scalar ODE
/// `d/dt rhohat = -2 eps rhohat + H(rhohat / M0)` exactly.
pub fn mass_source(total_mass: f64, params: &ModelParams, variant: SystemVariant, volume: f64) -> f64 {
    match variant {
        SystemVariant::ZeroLevel => cutoff_h(total_mass / params.m0) / volume,
        SystemVariant::EpsLevel => {
            if params.epsilon > 0.0 {
                let m_eps = solve_m_epsilon(params.epsilon, params.m0).expect("epsilon > 0");
                2.0 * params.epsilon * m_eps / volume
            } else {
                0.0
            }
        }
    }
}

/// Transport velocity of the continuity equation: `[u]_R` at the zero level,
/// `u` afterwards.
pub fn transport_velocity(
    state: &State,
    params: &ModelParams,
    variant: SystemVariant,
) -> SpectralVectorField {
    match variant {
        SystemVariant::ZeroLevel => {
            let h = truncation_factor(&state.u, params.r_trunc, state.grid().cutoff());
            state.u.scale(h)
        }
        SystemVariant::EpsLevel => state.u.clone(),
    }
}

/// Full continuity right-hand side
/// `-div(rho u_tr) + eps lap rho - 2 eps rho + source`.
pub fn continuity_rhs(
    state: &State,
    params: &ModelParams,
    variant: SystemVariant,
) -> Result<SpectralField> {
    let u_tr = transport_velocity(state, params, variant);
    let flux = dealias_scalar_vector(&state.rho, &u_tr)?;
    let mut rhs = divergence(&flux).scale(-1.0);
    if params.epsilon > 0.0 {
        rhs = rhs.lin_comb(1.0, &crate::spectral::laplacian(&state.rho), params.epsilon)?;
        rhs = rhs.lin_comb(1.0, &state.rho, -2.0 * params.epsilon)?;
    }
    let src = mass_source(state.total_mass(), params, variant, state.grid().volume());
    if src != 0.0 {
        rhs = rhs.lin_comb(1.0, &SpectralField::constant(*state.grid(), 1.0), src)?;
    }
    Ok(rhs)
}

/// The explicit momentum drift split into its constituent forces, so state
/// diagnostics can pair each one with a test field separately.
pub struct DriftPieces {
    /// `-Pi_N div(rho u_tr (x) u)`.
    pub convective: SpectralVectorField,
    /// `-H(|u| - R) grad Pi_N (a rho^gamma + delta rho^Gamma)`.
    pub pressure: SpectralVectorField,
    /// `eps Pi_N lap(rho u)`, absent for `epsilon = 0`.
    pub eps_diffusion: Option<SpectralVectorField>,
    /// `-2 eps Pi_N(rho u)`, absent for `epsilon = 0`.
    pub eps_damping: Option<SpectralVectorField>,
}

impl DriftPieces {
    pub fn sum(&self) -> SpectralVectorField {
        let mut acc = self
            .convective
            .lin_comb(1.0, &self.pressure, 1.0)
            .expect("same grid");
        for extra in [&self.eps_diffusion, &self.eps_damping].into_iter().flatten() {
            acc = acc.lin_comb(1.0, extra, 1.0).expect("same grid");
        }
        acc
    }
}

/// Assembles the explicit momentum drift pieces at a state.
pub fn momentum_drift_pieces(
    state: &State,
    params: &ModelParams,
    variant: SystemVariant,
) -> Result<DriftPieces> {
    let h_r = match variant {
        SystemVariant::ZeroLevel => {
            truncation_factor(&state.u, params.r_trunc, state.grid().cutoff())
        }
        SystemVariant::EpsLevel => 1.0,
    };
    let u_tr = state.u.scale(h_r);
    let q_tr = dealias_scalar_vector(&state.rho, &u_tr)?;
    momentum_drift_pieces_with(state, params, &q_tr, h_r)
}

/// Drift pieces with the truncated momentum flux `rho u_tr` already in hand
/// (shared with the continuity update inside a step).
fn momentum_drift_pieces_with(
    state: &State,
    params: &ModelParams,
    q_tr: &SpectralVectorField,
    h_r: f64,
) -> Result<DriftPieces> {
    let grid = *state.grid();
    let n = grid.cutoff();
    let d = grid.dim();

    // convection: component i of -div(rho u_tr (x) u)
    let mut comps = Vec::with_capacity(d);
    for i in 0..d {
        let mut acc = SpectralField::zeros(grid);
        for j in 0..d {
            let prod = dealias_product_truncated(q_tr.component(i), state.u.component(j), n)?;
            acc = acc.lin_comb(1.0, &derivative(&prod, j), -1.0)?;
        }
        comps.push(acc);
    }
    let convective = SpectralVectorField::new(comps)?;

    let p = crate::model::pressure(&state.rho, params).map_err(|e| match e {
        Error::NegativeDensity { index, value, .. } => Error::NegativeDensity {
            index,
            value,
            time: state.t,
        },
        other => other,
    })?;
    let p_n = project_modes(&p, n)?;
    let pressure = gradient(&p_n).scale(-h_r);

    let (eps_diffusion, eps_damping) = if params.epsilon > 0.0 {
        let q = dealias_scalar_vector_truncated(&state.rho, &state.u, n)?;
        let lap_q = q.map(crate::spectral::laplacian).scale(params.epsilon);
        (Some(lap_q), Some(q.scale(-2.0 * params.epsilon)))
    } else {
        (None, None)
    };

    Ok(DriftPieces {
        convective,
        pressure,
        eps_diffusion,
        eps_damping,
    })
}

/// Explicit momentum drift: convection, cutoff pressure and the epsilon
/// reaction terms; everything except the viscous force.
fn momentum_drift_explicit(
    state: &State,
    params: &ModelParams,
    variant: SystemVariant,
) -> Result<SpectralVectorField> {
    Ok(momentum_drift_pieces(state, params, variant)?.sum())
}

/// Viscous force `Pi_N div S(grad u) = mu lap u + (mu/3 + eta) grad div u`,
/// exact on the Galerkin band.
pub fn viscous_force(u: &SpectralVectorField, params: &ModelParams) -> SpectralVectorField {
    let lap = u.map(crate::spectral::laplacian);
    let gd = gradient(&divergence(u));
    lap.scale(params.mu)
        .lin_comb(1.0, &gd, params.mu / 3.0 + params.eta)
        .expect("same grid")
}

/// Weak momentum increment over one step of width `dt`:
/// `drift(state) dt + sum_k Pi_N(rho Pi_N g_k) dW_k`, as an element of the
/// Galerkin space.
pub fn momentum_rhs_weak(
    state: &State,
    params: &ModelParams,
    noise: &NoiseContext,
    variant: SystemVariant,
    dt: f64,
    dws: &[f64],
) -> Result<SpectralVectorField> {
    let mut inc = momentum_drift_explicit(state, params, variant)?
        .lin_comb(1.0, &viscous_force(&state.u, params), 1.0)?
        .scale(dt);
    if let Some(noise_inc) = noise.increment_field(&state.rho, dws)? {
        inc = inc.lin_comb(1.0, &noise_inc, 1.0)?;
    }
    Ok(inc)
}

/// Compact workspace for the density-weighted Galerkin solves: coefficient
/// vectors hold only the `|m|_inf <= N` slots.
struct BandSolver {
    grid: TorusGrid,
    /// Full-grid flat index of each retained slot.
    flats: Vec<usize>,
    /// Position of the Hermitian partner inside the compact vector.
    conj: Vec<usize>,
    kappas: Vec<[f64; 3]>,
    rho_samples: Vec<f64>,
    rho_mean: f64,
    dt_visc: f64,
    mu: f64,
    visc_bulk: f64,
}

type Compact = Vec<C64>;

impl BandSolver {
    fn new(rho: &SpectralField, dt_visc: f64, params: &ModelParams) -> Self {
        let grid = *rho.grid();
        let n = grid.cutoff() as i64;
        let mut flats = Vec::new();
        let mut full_to_compact = vec![usize::MAX; grid.size()];
        for flat in 0..grid.size() {
            if grid.freq_inf(flat) <= n {
                full_to_compact[flat] = flats.len();
                flats.push(flat);
            }
        }
        let points = grid.points();
        let conj = flats
            .iter()
            .map(|&flat| {
                let idx = grid.unravel(flat);
                let mut c = [0usize; 3];
                for a in 0..grid.dim() {
                    c[a] = (points - idx[a]) % points;
                }
                full_to_compact[grid.ravel(&c)]
            })
            .collect();
        let kappas = flats.iter().map(|&flat| grid.kappas(flat)).collect();
        Self {
            grid,
            flats,
            conj,
            kappas,
            rho_samples: rho.samples_cow().into_owned(),
            rho_mean: rho.mean(),
            dt_visc,
            mu: params.mu,
            visc_bulk: params.mu / 3.0 + params.eta,
        }
    }

    fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn gather(&self, v: &SpectralVectorField) -> Vec<Compact> {
        (0..self.dim())
            .map(|i| {
                let modes = v.component(i).modes_cow();
                self.flats.iter().map(|&f| modes[f]).collect()
            })
            .collect()
    }

    fn scatter(&self, v: &[Compact]) -> SpectralVectorField {
        let comps = v
            .iter()
            .map(|c| {
                let mut modes = vec![C64::default(); self.grid.size()];
                for (slot, &flat) in self.flats.iter().enumerate() {
                    modes[flat] = c[slot];
                }
                SpectralField::from_modes(self.grid, modes).expect("length preserved")
            })
            .collect();
        SpectralVectorField::new(comps).expect("componentwise construction")
    }

    fn hermitize(&self, v: &mut [Compact]) {
        for comp in v.iter_mut() {
            for slot in 0..comp.len() {
                let partner = self.conj[slot];
                if partner == slot {
                    comp[slot] = C64::new(comp[slot].re, 0.0);
                } else if partner > slot {
                    let avg = 0.5 * (comp[slot] + comp[partner].conj());
                    comp[slot] = avg;
                    comp[partner] = avg.conj();
                }
            }
        }
    }

    /// `A v = Pi_N(rho v) - dt_visc Pi_N div S(grad v)` on compact vectors.
    fn apply(&self, v: &[Compact]) -> Vec<Compact> {
        let d = self.dim();
        let size = self.grid.size();
        let dims = crate::spectral::grid_dims(&self.grid);
        let mut out = Vec::with_capacity(d);
        for comp in v.iter() {
            let mut full = vec![C64::default(); size];
            for (slot, &flat) in self.flats.iter().enumerate() {
                full[flat] = comp[slot];
            }
            crate::spectral::fft_raw(&dims[..d], &mut full, true);
            for (a, &r) in full.iter_mut().zip(&self.rho_samples) {
                *a *= r;
            }
            crate::spectral::fft_raw(&dims[..d], &mut full, false);
            let scale = 1.0 / size as f64;
            out.push(
                self.flats
                    .iter()
                    .map(|&flat| full[flat] * scale)
                    .collect::<Compact>(),
            );
        }
        if self.dt_visc > 0.0 {
            for slot in 0..self.flats.len() {
                let k = &self.kappas[slot];
                let k2: f64 = (0..d).map(|a| k[a] * k[a]).sum();
                let mut kdotv = C64::default();
                for (i, comp) in v.iter().enumerate() {
                    kdotv += comp[slot] * k[i];
                }
                for (i, comp) in out.iter_mut().enumerate() {
                    comp[slot] += self.dt_visc
                        * (self.mu * k2 * v[i][slot] + self.visc_bulk * k[i] * kdotv);
                }
            }
        }
        self.hermitize(&mut out);
        out
    }

    /// Mode-diagonal inverse of the mean-density operator.
    fn precondition(&self, r: &[Compact]) -> Vec<Compact> {
        let d = self.dim();
        let mut out: Vec<Compact> = r.to_vec();
        for slot in 0..self.flats.len() {
            let k = &self.kappas[slot];
            let k2: f64 = (0..d).map(|a| k[a] * k[a]).sum();
            let a = self.rho_mean + self.dt_visc * self.mu * k2;
            let b = self.dt_visc * self.visc_bulk;
            let denom = a + b * k2;
            let mut kdotr = C64::default();
            for (i, comp) in r.iter().enumerate() {
                kdotr += comp[slot] * k[i];
            }
            for (i, comp) in out.iter_mut().enumerate() {
                comp[slot] = (r[i][slot] - kdotr * (b * k[i] / denom)) / a;
            }
        }
        out
    }

    fn inner(&self, a: &[Compact], b: &[Compact]) -> f64 {
        let mut acc = 0.0;
        for (ca, cb) in a.iter().zip(b) {
            for (x, y) in ca.iter().zip(cb) {
                acc += (x * y.conj()).re;
            }
        }
        acc * self.grid.volume()
    }

    fn axpy(a: &mut [Compact], alpha: f64, b: &[Compact]) {
        for (ca, cb) in a.iter_mut().zip(b) {
            for (x, y) in ca.iter_mut().zip(cb) {
                *x += y * alpha;
            }
        }
    }

    fn xpay(a: &mut [Compact], alpha: f64, b: &[Compact]) {
        for (ca, cb) in a.iter_mut().zip(b) {
            for (x, y) in ca.iter_mut().zip(cb) {
                *x = y + *x * alpha;
            }
        }
    }
}

/// Preconditioned conjugate gradients for the density-weighted (optionally
/// viscosity-augmented) Galerkin system.
fn solve_mass_system(
    rho: &SpectralField,
    rhs: &SpectralVectorField,
    guess: Option<&SpectralVectorField>,
    dt_visc: f64,
    params: &ModelParams,
) -> Result<SpectralVectorField> {
    let grid = *rho.grid();
    let n = grid.cutoff();
    let rho_s = rho.to_samples();
    let (min_rho, max_rho) = rho_s
        .samples()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let cond = if min_rho > 0.0 {
        max_rho / min_rho
    } else {
        f64::INFINITY
    };
    if cond > 1e12 {
        return Err(Error::SingularMass { cond });
    }
    let solver = BandSolver::new(&rho_s, dt_visc, params);
    let rhs_p = project_vector(rhs, n)?;
    let b = solver.gather(&rhs_p);
    let rhs_norm = solver.inner(&b, &b).sqrt();
    if rhs_norm == 0.0 {
        return Ok(SpectralVectorField::zeros(grid));
    }

    let mut x = match guess {
        Some(g) => solver.gather(&project_vector(g, n)?),
        None => vec![vec![C64::default(); solver.flats.len()]; solver.dim()],
    };
    let ax = solver.apply(&x);
    let mut r = b.clone();
    BandSolver::axpy(&mut r, -1.0, &ax);
    let mut z = solver.precondition(&r);
    let mut p = z.clone();
    let mut rz = solver.inner(&r, &z);
    let tol = 1e-13 * rhs_norm;
    let max_iters = 500;

    for _ in 0..max_iters {
        let rnorm = solver.inner(&r, &r).sqrt();
        if rnorm <= tol {
            return Ok(solver.scatter(&x));
        }
        let ap = solver.apply(&p);
        let pap = solver.inner(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::SingularMass { cond });
        }
        let alpha = rz / pap;
        BandSolver::axpy(&mut x, alpha, &p);
        BandSolver::axpy(&mut r, -alpha, &ap);
        z = solver.precondition(&r);
        let rz_new = solver.inner(&r, &z);
        BandSolver::xpay(&mut p, rz_new / rz, &z);
        rz = rz_new;
    }
    let rnorm = solver.inner(&r, &r).sqrt();
    if rnorm <= tol * 10.0 {
        Ok(solver.scatter(&x))
    } else {
        Err(Error::SolveDiverged {
            iters: max_iters,
            residual: rnorm / rhs_norm,
        })
    }
}

/// Recovers `u in H_N` from Galerkin momentum functionals by solving the
/// density-weighted mass system `Pi_N(rho u) = m`.
pub fn recover_velocity(
    rho: &SpectralField,
    momentum: &SpectralVectorField,
) -> Result<SpectralVectorField> {
    let params = ModelParams::default();
    solve_mass_system(rho, momentum, None, 0.0, &params)
}

/// One semi-implicit Euler-Maruyama attempt of width `dt` from `state`.
fn em_attempt(
    state: &State,
    params: &ModelParams,
    noise: &NoiseContext,
    config: &StepperConfig,
    dt: f64,
    dws: &[f64],
) -> Result<State> {
    let grid = *state.grid();
    let n = grid.cutoff();

    // density: transport + source explicit, diffusion + damping implicit
    let u_tr = transport_velocity(state, params, config.variant);
    let flux = dealias_scalar_vector(&state.rho, &u_tr)?;
    let mut rhs = divergence(&flux).scale(-1.0);
    let src = mass_source(state.total_mass(), params, config.variant, grid.volume());
    if src != 0.0 {
        rhs = rhs.lin_comb(1.0, &SpectralField::constant(grid, 1.0), src)?;
    }
    let rho_m = state.rho.to_modes();
    let rhs_m = rhs.to_modes();
    let new_modes: Vec<C64> = (0..grid.size())
        .map(|flat| {
            let k = grid.kappas(flat);
            let k2: f64 = (0..grid.dim()).map(|a| k[a] * k[a]).sum();
            let denom = 1.0 + params.epsilon * dt * (k2 + 2.0);
            (rho_m.modes()[flat] + rhs_m.modes()[flat] * dt) / denom
        })
        .collect();
    let rho_new = SpectralField::from_modes(grid, new_modes)?.to_samples();
    if let Some((index, &value)) = rho_new
        .samples()
        .iter()
        .enumerate()
        .find(|(_, v)| **v <= 0.0)
    {
        return Err(Error::NegativeDensity {
            index,
            value,
            time: state.t + dt,
        });
    }

    // momentum: explicit drift and noise, implicit viscosity
    let h_r = match config.variant {
        SystemVariant::ZeroLevel => truncation_factor(&state.u, params.r_trunc, n),
        SystemVariant::EpsLevel => 1.0,
    };
    let drift = momentum_drift_pieces_with(state, params, &flux, h_r)?.sum();
    let p_old = state.momentum()?;
    let mut p_star = p_old.lin_comb(1.0, &drift, dt)?;
    if let Some(noise_inc) = noise.increment_field(&state.rho, dws)? {
        p_star = p_star.lin_comb(1.0, &noise_inc, 1.0)?;
    }
    let mut u_new = solve_mass_system(&rho_new, &p_star, Some(&state.u), dt, params)?;

    let rho_final;
    if config.symmetric {
        let (r, u) = symmetry_project(&rho_new, &u_new)?;
        // the reflection average preserves the mean; re-impose the exact
        // pre-projection mode 0 so the total mass follows the scalar update
        // to the last bit
        let mut modes = r.modes_cow().into_owned();
        modes[0] = rho_new.modes_cow()[0];
        rho_final = SpectralField::from_modes(grid, modes)?.to_samples();
        u_new = project_vector(&u, n)?;
    } else {
        rho_final = rho_new;
    }
    State::new(state.t + dt, rho_final, u_new)
}

/// One step with negative-density protection: a failing step is bisected
/// recursively with Brownian-bridge increments up to `max_halvings` before
/// failing hard with diagnostics.
pub fn em_step(
    state: &State,
    params: &ModelParams,
    noise: &NoiseContext,
    config: &StepperConfig,
    dws: &[f64],
    path: &WienerPath,
    step: u64,
) -> Result<State> {
    em_step_depth(state, params, noise, config, config.dt, dws, path, step, 0, 0)
}

#[allow(clippy::too_many_arguments)]
fn em_step_depth(
    state: &State,
    params: &ModelParams,
    noise: &NoiseContext,
    config: &StepperConfig,
    dt: f64,
    dws: &[f64],
    path: &WienerPath,
    step: u64,
    depth: u32,
    node: u64,
) -> Result<State> {
    match em_attempt(state, params, noise, config, dt, dws) {
        Ok(next) => Ok(next),
        Err(Error::NegativeDensity { value, .. }) if depth < config.max_halvings => {
            let h = dt;
            let k_count = dws.len();
            let mut left = vec![0.0; k_count];
            let mut right = vec![0.0; k_count];
            for k in 0..k_count {
                let xi = path.bridge_noise(k, step, depth, node, h);
                left[k] = 0.5 * dws[k] + xi;
                right[k] = 0.5 * dws[k] - xi;
            }
            let _ = value;
            let mid = em_step_depth(
                state, params, noise, config, 0.5 * h, &left, path, step, depth + 1, 2 * node,
            )?;
            em_step_depth(
                &mid, params, noise, config, 0.5 * h, &right, path, step, depth + 1, 2 * node + 1,
            )
        }
        Err(Error::NegativeDensity { value, time, .. }) => Err(Error::StepFailed {
            time,
            min_rho: value,
            halvings: depth,
        }),
        Err(other) => Err(other),
    }
}
