//! Smooth non-increasing cutoff: 1 on `(-inf, 0]`, 0 on `[1, inf)`, strictly
//! decreasing in between.
//!
//! The profile is the standard exponential partition
//! `H(x) = phi(1 - x) / (phi(x) + phi(1 - x))` with `phi(s) = exp(-1/s)`,
//! which is `C^inf` and symmetric about `H(1/2) = 1/2`.

fn phi(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// Evaluates the cutoff.
pub fn cutoff_h(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        let a = phi(1.0 - x);
        a / (phi(x) + a)
    }
}
