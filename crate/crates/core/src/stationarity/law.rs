//! Empirical laws, the two-sample Kolmogorov-Smirnov distance and its
//! permutation-calibrated critical values.

use crate::{Error, Result};

/// Finite sample of scalar-functional values standing in for a law.
#[derive(Debug, Clone)]
pub struct EmpiricalLaw {
    pub name: String,
    pub samples: Vec<f64>,
}

impl EmpiricalLaw {
    pub fn new(name: impl Into<String>, samples: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            samples,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Sup distance between the empirical CDFs of two samples, in `[0, 1]`.
pub fn ks_distance(a: &EmpiricalLaw, b: &EmpiricalLaw) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptyLaw {
            name: a.name.clone(),
        });
    }
    if b.is_empty() {
        return Err(Error::EmptyLaw {
            name: b.name.clone(),
        });
    }
    Ok(ks_statistic(&a.samples, &b.samples))
}

pub(crate) fn ks_statistic(xs: &[f64], ys: &[f64]) -> f64 {
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    ys.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < n || j < m {
        let v = match (i < n, j < m) {
            (true, true) => xs[i].min(ys[j]),
            (true, false) => xs[i],
            _ => ys[j],
        };
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        sup = sup.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    sup
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Permutation-calibrated critical value of the two-sample KS distance at
/// significance `alpha` for sample sizes `(n, m)`. Distribution-free for
/// continuous data, so the calibration runs on pooled ranks.
pub fn ks_critical_value(n: usize, m: usize, alpha: f64, permutations: usize, seed: u64) -> f64 {
    assert!(n > 0 && m > 0 && alpha > 0.0 && alpha < 1.0);
    let total = n + m;
    let mut pool: Vec<f64> = (0..total).map(|i| i as f64).collect();
    let mut stats = Vec::with_capacity(permutations);
    let mut counter = seed;
    for _ in 0..permutations {
        // Fisher-Yates with the counter-based generator
        for i in (1..total).rev() {
            counter = counter.wrapping_add(1);
            let r = mix64(counter) as usize % (i + 1);
            pool.swap(i, r);
        }
        stats.push(ks_statistic(&pool[..n], &pool[n..]));
    }
    stats.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    // conservative upper quantile
    let rank = ((1.0 - alpha) * (permutations as f64 + 1.0)).ceil() as usize;
    let idx = rank.min(permutations).saturating_sub(1);
    stats[idx]
}
