//! Spectral transforms over the configuration grid.
//!
//! Wraps rustfft with the bookkeeping for multi-axis transforms on the flat
//! row-major layout. The forward transform is unnormalized; the inverse
//! carries the 1/M factor per axis so a round trip is the identity.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::GridSpec;

/// Signed wavenumbers `2 pi j / L` for an M-point axis of length L, in FFT
/// output order: `j = 0, 1, ..., M/2, -(M/2 - 1), ..., -1`.
pub fn wavenumbers(m: usize, length: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / length;
    (0..m)
        .map(|j| {
            let jj = if j <= m / 2 {
                j as isize
            } else {
                j as isize - m as isize
            };
            base * jj as f64
        })
        .collect()
}

/// FFT plans for one grid, reusable across steps and shareable across threads.
pub struct SpectralTransform {
    m: usize,
    dim: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SpectralTransform {
    pub fn new(grid: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let m = grid.points_per_axis();
        SpectralTransform {
            m,
            dim: grid.dim(),
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        }
    }

    /// In-place forward transform along every axis (unnormalized).
    pub fn forward(&self, data: &mut [Complex64]) {
        for axis in 0..self.dim {
            self.transform_axis(data, axis, &self.forward);
        }
    }

    /// In-place inverse transform along every axis, scaled so that
    /// `inverse(forward(x)) == x` up to rounding.
    pub fn inverse(&self, data: &mut [Complex64]) {
        for axis in 0..self.dim {
            self.transform_axis(data, axis, &self.inverse);
        }
        let scale = 1.0 / (self.m as f64).powi(self.dim as i32);
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn transform_axis(&self, data: &mut [Complex64], axis: usize, fft: &Arc<dyn Fft<f64>>) {
        let m = self.m;
        let stride = m.pow((self.dim - 1 - axis) as u32);
        if stride == 1 {
            // Contiguous lines.
            for chunk in data.chunks_exact_mut(m) {
                fft.process(chunk);
            }
            return;
        }
        let mut line = vec![Complex64::new(0.0, 0.0); m];
        let block = stride * m;
        let n_blocks = data.len() / block;
        for b in 0..n_blocks {
            for off in 0..stride {
                let base = b * block + off;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[base + j * stride];
                }
                fft.process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * stride] = *v;
                }
            }
        }
    }
}

/// Spectral partial derivative along one axis.
///
/// The Nyquist mode is zeroed: its derivative is sign-ambiguous on the
/// periodic grid and the states used here have no weight there.
pub fn spectral_gradient(grid: &GridSpec, amplitudes: &[Complex64], axis: usize) -> Vec<Complex64> {
    let transform = SpectralTransform::new(grid);
    spectral_gradient_with(grid, &transform, amplitudes, axis)
}

/// Same as [`spectral_gradient`] but reusing prepared plans.
pub fn spectral_gradient_with(
    grid: &GridSpec,
    transform: &SpectralTransform,
    amplitudes: &[Complex64],
    axis: usize,
) -> Vec<Complex64> {
    let m = grid.points_per_axis();
    let stride = grid.stride(axis);
    let k = wavenumbers(m, grid.axis_length());
    let mut hat = amplitudes.to_vec();
    // Transform only the target axis; the other axes are untouched.
    transform.transform_axis(&mut hat, axis, &transform.forward);
    for (flat, v) in hat.iter_mut().enumerate() {
        let j = (flat / stride) % m;
        if j == m / 2 {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v *= Complex64::new(0.0, k[j]);
        }
    }
    transform.transform_axis(&mut hat, axis, &transform.inverse);
    let scale = 1.0 / m as f64;
    for v in hat.iter_mut() {
        *v *= scale;
    }
    hat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::WaveFunction;

    #[test]
    fn round_trip_preserves_norm() {
        // Parseval: forward-then-inverse is the identity to 1e-12.
        let grid = GridSpec::new_1d(2, -5.0, 5.0, 32).unwrap();
        let psi = WaveFunction::from_fn(&grid, |x| {
            num_complex::Complex64::new((-0.3 * (x[0] * x[0] + x[1] * x[1])).exp(), 0.2 * x[0])
        })
        .normalized()
        .unwrap();
        let t = SpectralTransform::new(&grid);
        let mut data = psi.amplitudes().to_vec();
        t.forward(&mut data);
        t.inverse(&mut data);
        let back = WaveFunction::new(grid, data, 0.0).unwrap();
        assert!(psi.l2_distance(&back).unwrap() < 1e-12);
    }

    #[test]
    fn plane_wave_transforms_to_single_mode() {
        let grid = GridSpec::new_1d(1, 0.0, 1.0, 16).unwrap();
        let k = wavenumbers(16, 1.0);
        let psi = WaveFunction::from_fn(&grid, |x| Complex64::new(0.0, k[3] * x[0]).exp());
        let t = SpectralTransform::new(&grid);
        let mut data = psi.amplitudes().to_vec();
        t.forward(&mut data);
        for (j, v) in data.iter().enumerate() {
            if j == 3 {
                assert!((v.norm() - 16.0).abs() < 1e-10);
            } else {
                assert!(v.norm() < 1e-10, "leak at {j}: {v}");
            }
        }
    }

    #[test]
    fn gradient_of_plane_wave_is_ik_psi() {
        let grid = GridSpec::new_1d(1, -4.0, 4.0, 64).unwrap();
        let k = wavenumbers(64, 8.0);
        let k0 = k[5];
        let psi = WaveFunction::from_fn(&grid, |x| Complex64::new(0.0, k0 * x[0]).exp());
        let grad = spectral_gradient(&grid, psi.amplitudes(), 0);
        for (g, a) in grad.iter().zip(psi.amplitudes()) {
            let expect = Complex64::new(0.0, k0) * a;
            assert!((g - expect).norm() < 1e-9);
        }
    }

    #[test]
    fn gradient_of_gaussian_matches_closed_form() {
        let grid = GridSpec::new_1d(1, -16.0, 16.0, 256).unwrap();
        let s = 1.3;
        let psi = WaveFunction::from_fn(&grid, |x| {
            Complex64::new((-x[0] * x[0] / (2.0 * s * s)).exp(), 0.0)
        });
        let grad = spectral_gradient(&grid, psi.amplitudes(), 0);
        for (i, g) in grad.iter().enumerate() {
            let x = grid.axis_coordinate(i);
            let expect = -x / (s * s) * (-x * x / (2.0 * s * s)).exp();
            assert!(
                (g.re - expect).abs() < 1e-10,
                "at x={x}: {} vs {expect}",
                g.re
            );
            assert!(g.im.abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_along_one_axis_ignores_the_other() {
        let grid = GridSpec::new_1d(2, -8.0, 8.0, 64).unwrap();
        // psi = f(x0) * g(x1) with f Gaussian, g Gaussian: d/dx1 psi must be
        // f(x0) * g'(x1). Widths keep both the periodic images and the
        // spectral tail at the Nyquist mode negligible.
        let psi = WaveFunction::from_fn(&grid, |x| {
            Complex64::new((-x[0] * x[0] / 0.8 - x[1] * x[1] / 1.2).exp(), 0.0)
        });
        let grad = spectral_gradient(&grid, psi.amplitudes(), 1);
        for (flat, g) in grad.iter().enumerate() {
            let x0 = grid.axis_coordinate(grid.axis_index(flat, 0));
            let x1 = grid.axis_coordinate(grid.axis_index(flat, 1));
            let expect = (-x0 * x0 / 0.8 - x1 * x1 / 1.2).exp() * (-2.0 * x1 / 1.2);
            assert!(
                (g.re - expect).abs() < 1e-9,
                "at ({x0},{x1}): {} vs {expect}",
                g.re
            );
        }
    }
}
