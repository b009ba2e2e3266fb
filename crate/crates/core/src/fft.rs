//! Thin wrapper around rustfft keeping one forward/inverse plan pair per
//! padded length.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct FftPair {
    len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl FftPair {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            len,
            fwd: planner.plan_fft_forward(len),
            inv: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len);
        self.fwd.process(buf);
    }

    /// Unnormalized inverse; divide by `len` to invert `forward`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len);
        self.inv.process(buf);
    }
}

impl std::fmt::Debug for FftPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPair").field("len", &self.len).finish()
    }
}

/// Smallest length `>= n` of the form `2^a * 3^b`, which rustfft handles
/// with fast mixed-radix plans.
pub fn next_fast_len(n: usize) -> usize {
    let mut best = usize::MAX;
    let mut p3 = 1usize;
    while p3 / 3 < best {
        let mut c = p3;
        while c < n {
            c = match c.checked_mul(2) {
                Some(v) => v,
                None => return best,
            };
        }
        best = best.min(c);
        p3 = match p3.checked_mul(3) {
            Some(v) => v,
            None => break,
        };
        if p3 >= best {
            break;
        }
    }
    best
}
