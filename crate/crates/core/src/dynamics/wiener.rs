//! Reproducible Wiener increments from a counter-based splitting scheme.
//!
//! Every Gaussian draw is a pure function of `(root seed, member, mode,
//! fine-step index, slot)`, so ensemble members own independent streams
//! regardless of ensemble size or evaluation order, and regeneration from the
//! same seed is bit-identical. A run may subdivide each logical step into
//! `substeps` fine increments; runs whose fine lattices coincide share the
//! same Brownian path, which gives common-random-number time-step refinement.

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Hashes a word chain into one 64-bit stream value.
fn chain(words: &[u64]) -> u64 {
    let mut h = 0x2545f4914f6cdd1du64;
    for &w in words {
        h = mix64(h ^ w);
    }
    h
}

fn to_unit_open(bits: u64) -> f64 {
    // (0, 1]: avoids log(0) in Box-Muller
    ((bits >> 11) as f64 + 1.0) / (1u64 << 53) as f64
}

/// Standard normal draw for an arbitrary counter tuple.
pub fn standard_normal(words: &[u64]) -> f64 {
    let mut w = words.to_vec();
    w.push(0);
    let u1 = to_unit_open(chain(&w));
    *w.last_mut().unwrap() = 1;
    let u2 = to_unit_open(chain(&w));
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Wiener increment generator for one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerPath {
    seed: u64,
    member: u64,
    k_count: usize,
    dt: f64,
    substeps: u32,
}

impl WienerPath {
    pub fn new(seed: u64, member: u64, k_count: usize, dt: f64, substeps: u32) -> Self {
        assert!(dt > 0.0 && substeps >= 1);
        Self {
            seed,
            member,
            k_count,
            dt,
            substeps,
        }
    }

    pub fn k_count(&self) -> usize {
        self.k_count
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Increment of mode `k` over logical step `step`, distributed
    /// `N(0, dt)`: the sum of `substeps` fine increments.
    pub fn increment(&self, k: usize, step: u64) -> f64 {
        let fine_dt = self.dt / self.substeps as f64;
        let sigma = fine_dt.sqrt();
        let mut acc = 0.0;
        for s in 0..self.substeps as u64 {
            let fine = step * self.substeps as u64 + s;
            acc += sigma * standard_normal(&[self.seed, self.member, k as u64, fine]);
        }
        acc
    }

    /// All mode increments of one step.
    pub fn step_increments(&self, step: u64) -> Vec<f64> {
        (0..self.k_count).map(|k| self.increment(k, step)).collect()
    }

    /// Brownian-bridge midpoint noise used when a step is bisected: given the
    /// step increment `dw` over width `h`, the two halves are
    /// `dw/2 +- xi` with `xi ~ N(0, h/4)` drawn from a reserved counter.
    pub fn bridge_noise(&self, k: usize, step: u64, depth: u32, node: u64, h: f64) -> f64 {
        0.5 * h.sqrt()
            * standard_normal(&[
                self.seed,
                self.member,
                k as u64,
                u64::MAX - step, // reserved lattice, disjoint from fine indices
                depth as u64,
                node,
            ])
    }
}
