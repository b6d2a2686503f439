//! Type-I discrete sine transform and the separable Dirichlet-Laplacian
//! preconditioner built on it.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Unnormalized DST-I of length `n`: `X_k = sum_j x_j sin(pi (j+1)(k+1)/(n+1))`.
///
/// Applying it twice multiplies by `(n + 1) / 2`.
pub struct Dst1 {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl Dst1 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fft: planner.plan_fft_forward(2 * (n + 1)),
        }
    }

    fn buffers(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        (
            vec![Complex64::new(0.0, 0.0); 2 * (self.n + 1)],
            vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()],
        )
    }

    /// Transform two real sequences with one complex FFT. `b` may be empty.
    fn pair(&self, a: &mut [f64], b: &mut [f64], buf: &mut [Complex64], scratch: &mut [Complex64]) {
        let n = self.n;
        let m = 2 * (n + 1);
        let bval = |j: usize| if b.is_empty() { 0.0 } else { b[j] };
        buf[0] = Complex64::new(0.0, 0.0);
        buf[n + 1] = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let v = Complex64::new(a[j], bval(j));
            buf[j + 1] = v;
            buf[m - 1 - j] = -v;
        }
        self.fft.process_with_scratch(buf, scratch);
        // The odd extension of a real sequence has a purely imaginary FFT
        // equal to -2i X_k; a second sequence in the imaginary slot lands in
        // the real part.
        for k in 0..n {
            let y = buf[k + 1];
            a[k] = -0.5 * y.im;
            if !b.is_empty() {
                b[k] = 0.5 * y.re;
            }
        }
    }

    #[cfg(test)]
    pub fn transform(&self, x: &mut [f64]) {
        let (mut buf, mut scratch) = self.buffers();
        self.pair(x, &mut [], &mut buf, &mut scratch);
    }

    /// Transform every contiguous row of length `n` in `data`.
    pub fn transform_rows(&self, data: &mut [f64]) {
        let n = self.n;
        data.par_chunks_mut(2 * n).for_each(|chunk| {
            let (mut buf, mut scratch) = self.buffers();
            let (a, b) = chunk.split_at_mut(n.min(chunk.len()));
            self.pair(a, b, &mut buf, &mut scratch);
        });
    }
}

fn transpose(src: &[f64], dst: &mut [f64], n: usize) {
    dst.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (i, v) in row.iter_mut().enumerate() {
            *v = src[i * n + j];
        }
    });
}

/// Exact inverse of `-(a2/2) D2 (x) I - (a3/2) I (x) D2 + shift` on an
/// `n x n` Dirichlet grid, where `D2` is the three-point second difference.
pub struct SeparablePreconditioner {
    n: usize,
    dst: Dst1,
    eig2: Vec<f64>,
    eig3: Vec<f64>,
}

impl SeparablePreconditioner {
    pub fn new(n: usize, spacing: [f64; 2], kinetic_diag: [f64; 2]) -> Self {
        let lap = |h: f64, a: f64| -> Vec<f64> {
            (1..=n)
                .map(|k| {
                    let s = (std::f64::consts::PI * k as f64 / (2.0 * (n + 1) as f64)).sin();
                    0.5 * a * 4.0 * s * s / (h * h)
                })
                .collect()
        };
        Self {
            n,
            dst: Dst1::new(n),
            eig2: lap(spacing[0], kinetic_diag[0]),
            eig3: lap(spacing[1], kinetic_diag[1]),
        }
    }

    /// `z = (T + shift)^-1 r`, with `r` indexed `i * n + j` (i along q2).
    pub fn apply(&self, r: &[f64], z: &mut [f64], shift: f64) {
        let n = self.n;
        let mut t = r.to_vec();
        self.dst.transform_rows(&mut t); // along j
        transpose(&t, z, n);
        self.dst.transform_rows(z); // along i; z is indexed j * n + i
        let norm = (2.0 / (n + 1) as f64).powi(2);
        z.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            let e3 = self.eig3[j];
            for (i, v) in row.iter_mut().enumerate() {
                *v *= norm / (self.eig2[i] + e3 + shift);
            }
        });
        self.dst.transform_rows(z);
        transpose(z, &mut t, n);
        self.dst.transform_rows(&mut t);
        z.copy_from_slice(&t);
    }
}
