//! Multi-dimensional FFTs over row-major complex buffers, with a process-wide
//! plan cache keyed by transform length.

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub type C64 = Complex<f64>;

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry((len, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// In-place unnormalized FFT along every axis of a row-major `dims` buffer.
///
/// Forward maps samples to `sum_j f_j e^{-2 pi i j k / n}`; the caller applies
/// the `1/n^d` normalization. Inverse is the unnormalized adjoint.
pub fn fft_nd(dims: &[usize], data: &mut [C64], inverse: bool) {
    debug_assert_eq!(dims.iter().product::<usize>(), data.len());
    let rank = dims.len();
    for axis in 0..rank {
        let len = dims[axis];
        if len == 1 {
            continue;
        }
        let fft = plan(len, inverse);
        let mut scratch = vec![C64::default(); fft.get_inplace_scratch_len()];
        let stride: usize = dims[axis + 1..].iter().product();
        if stride == 1 {
            for chunk in data.chunks_exact_mut(len) {
                fft.process_with_scratch(chunk, &mut scratch);
            }
            continue;
        }
        let block = stride * len;
        let blocks = data.len() / block;
        let mut lane = vec![C64::default(); len];
        for b in 0..blocks {
            let base = b * block;
            for s in 0..stride {
                for (i, slot) in lane.iter_mut().enumerate() {
                    *slot = data[base + s + i * stride];
                }
                fft.process_with_scratch(&mut lane, &mut scratch);
                for (i, slot) in lane.iter().enumerate() {
                    data[base + s + i * stride] = *slot;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_inverse_roundtrip() {
        let dims = [6, 10];
        let n: usize = dims.iter().product();
        let orig: Vec<C64> = (0..n)
            .map(|i| C64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let mut buf = orig.clone();
        fft_nd(&dims, &mut buf, false);
        fft_nd(&dims, &mut buf, true);
        let scale = 1.0 / n as f64;
        let err = buf
            .iter()
            .zip(&orig)
            .map(|(a, b)| (a * scale - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-13, "roundtrip error {err}");
    }

    #[test]
    fn matches_direct_dft_1d() {
        let n = 8;
        let samples: Vec<C64> = (0..n).map(|i| C64::new((i as f64).cos(), 0.0)).collect();
        let mut buf = samples.clone();
        fft_nd(&[n], &mut buf, false);
        for k in 0..n {
            let mut acc = C64::default();
            for (j, s) in samples.iter().enumerate() {
                let phase = -2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
                acc += s * C64::new(phase.cos(), phase.sin());
            }
            assert!((acc - buf[k]).norm() < 1e-12);
        }
    }
}
