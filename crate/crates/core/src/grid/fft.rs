use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Three-dimensional FFT on an `N³` block in site order.
///
/// Forward is unnormalized; inverse divides by `N³`, so the pair is an exact
/// round trip up to rounding.
pub struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn forward(&self, block: &mut [Complex64]) {
        self.transform(block, &*self.forward);
    }

    pub fn inverse(&self, block: &mut [Complex64]) {
        self.transform(block, &*self.inverse);
        let scale = 1.0 / block.len() as f64;
        for z in block.iter_mut() {
            *z *= scale;
        }
    }

    fn transform(&self, block: &mut [Complex64], fft: &dyn Fft<f64>) {
        let n = self.n;
        assert_eq!(block.len(), n * n * n, "block must hold N³ values");
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        // innermost axis is contiguous
        fft.process_with_scratch(block, &mut scratch);

        let mut lines = vec![Complex64::new(0.0, 0.0); n * n];
        // middle axis: one i-plane at a time
        for i in 0..n {
            let plane = &mut block[i * n * n..(i + 1) * n * n];
            for j in 0..n {
                for k in 0..n {
                    lines[k * n + j] = plane[j * n + k];
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            for j in 0..n {
                for k in 0..n {
                    plane[j * n + k] = lines[k * n + j];
                }
            }
        }
        // outer axis: one j-slab at a time
        for j in 0..n {
            for i in 0..n {
                for k in 0..n {
                    lines[k * n + i] = block[(i * n + j) * n + k];
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            for i in 0..n {
                for k in 0..n {
                    block[(i * n + j) * n + k] = lines[k * n + i];
                }
            }
        }
    }
}

impl std::fmt::Debug for Fft3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft3").field("n", &self.n).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn naive_dft(data: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                let phase = -2.0 * PI * ((a * i + b * j + c * k) as f64) / n as f64;
                                acc += data[(i * n + j) * n + k] * Complex64::from_polar(1.0, phase);
                            }
                        }
                    }
                    out[(a * n + b) * n + c] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn matches_direct_sum_and_round_trips() {
        let n = 4;
        let data: Vec<Complex64> =
            (0..n * n * n).map(|s| Complex64::new((s as f64 * 0.37).sin(), (s as f64 * 1.3).cos())).collect();
        let fft = Fft3::new(n);
        let mut x = data.clone();
        fft.forward(&mut x);
        let reference = naive_dft(&data, n);
        for (a, b) in x.iter().zip(&reference) {
            assert!((a - b).norm() < 1e-12);
        }
        fft.inverse(&mut x);
        for (a, b) in x.iter().zip(&data) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
