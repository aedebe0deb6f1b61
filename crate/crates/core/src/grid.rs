//! Uniform grids on T^n and axis-wise spectral operations.
//!
//! A slice over the t-variables is stored row-major with shape
//! `[g; n]` (g points per circle). All transforms are plain FFTs from
//! rustfft; wavenumbers follow the usual 0..g/2, -g/2+1..-1 layout.

use num_complex::Complex64;
use num_traits::Zero;
use rustfft::FftPlanner;

pub fn fft_forward(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(values.len());
    fft.process(&mut buf);
    buf
}

pub fn fft_inverse(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(values.len());
    fft.process(&mut buf);
    let n = values.len() as f64;
    for v in &mut buf {
        *v /= n;
    }
    buf
}

/// Wavenumber for FFT bin `idx` of a length-`n` transform.
pub fn wavenumber(idx: usize, n: usize) -> i64 {
    if idx <= n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// FFT bin for an integer mode `k` with |k| < n/2.
pub fn bin_of_mode(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Geometry of an n-dimensional t-grid with g points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TGrid {
    pub n: usize,
    pub g: usize,
}

impl TGrid {
    pub fn new(n: usize, g: usize) -> Self {
        assert!(n >= 1 && g >= 2 && g.is_power_of_two());
        TGrid { n, g }
    }

    pub fn len(&self) -> usize {
        self.g.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid point along one axis.
    pub fn point(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * i as f64 / self.g as f64
    }

    /// Decompose a flat index into per-axis indices.
    pub fn coords(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for axis in (0..self.n).rev() {
            out[axis] = flat % self.g;
            flat /= self.g;
        }
        out
    }

    /// Stride of an axis in the flat layout.
    pub fn stride(&self, axis: usize) -> usize {
        self.g.pow((self.n - 1 - axis) as u32)
    }

    /// Visit every 1-d line along `axis`: calls `f` with the flat indices
    /// of the line's g entries.
    pub fn for_each_line(&self, axis: usize, mut f: impl FnMut(&[usize])) {
        let stride = self.stride(axis);
        let lines = self.len() / self.g;
        let mut idx = vec![0usize; self.g];
        for line in 0..lines {
            // Embed the line counter into all axes except `axis`.
            let mut rem = line;
            let mut base = 0usize;
            for a in (0..self.n).rev() {
                if a == axis {
                    continue;
                }
                let s = self.stride(a);
                base += (rem % self.g) * s;
                rem /= self.g;
            }
            for (i, slot) in idx.iter_mut().enumerate() {
                *slot = base + i * stride;
            }
            f(&idx);
        }
    }

    /// Spectral derivative along `axis` (multiplication by i k in modes).
    pub fn spectral_derivative(&self, data: &[Complex64], axis: usize) -> Vec<Complex64> {
        assert_eq!(data.len(), self.len());
        let g = self.g;
        let mut out = data.to_vec();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(g);
        let inv = planner.plan_fft_inverse(g);
        let mut line = vec![Complex64::zero(); g];
        self.for_each_line(axis, |idxs| {
            for (i, &flat) in idxs.iter().enumerate() {
                line[i] = out[flat];
            }
            fwd.process(&mut line);
            for (bin, v) in line.iter_mut().enumerate() {
                let k = wavenumber(bin, g) as f64;
                *v *= Complex64::new(0.0, k) / g as f64;
            }
            inv.process(&mut line);
            for (i, &flat) in idxs.iter().enumerate() {
                out[flat] = line[i];
            }
        });
        out
    }

    /// Multiply by a per-axis profile w(t_axis), broadcast over the others.
    pub fn mul_axis_profile(&self, data: &mut [Complex64], axis: usize, profile: &[Complex64]) {
        assert_eq!(data.len(), self.len());
        assert_eq!(profile.len(), self.g);
        let stride = self.stride(axis);
        for (flat, v) in data.iter_mut().enumerate() {
            let i = (flat / stride) % self.g;
            *v *= profile[i];
        }
    }

    pub fn sup_norm(&self, data: &[Complex64]) -> f64 {
        data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn derivative_of_plane_wave() {
        let grid = TGrid::new(2, 16);
        let mut data = vec![Complex64::zero(); grid.len()];
        let (k0, k1) = (3.0, -2.0);
        for (flat, v) in data.iter_mut().enumerate() {
            let c = grid.coords(flat);
            let (t0, t1) = (grid.point(c[0]), grid.point(c[1]));
            *v = Complex64::from_polar(1.0, k0 * t0 + k1 * t1);
        }
        let d0 = grid.spectral_derivative(&data, 0);
        let d1 = grid.spectral_derivative(&data, 1);
        for flat in 0..grid.len() {
            assert!((d0[flat] - Complex64::new(0.0, k0) * data[flat]).norm() < 1e-10);
            assert!((d1[flat] - Complex64::new(0.0, k1) * data[flat]).norm() < 1e-10);
        }
    }

    #[test]
    fn fft_round_trip() {
        let n = 64;
        let data: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((2.0 * PI * i as f64 / n as f64).sin(), 0.3 * i as f64))
            .collect();
        let back = fft_inverse(&fft_forward(&data));
        for (a, b) in data.iter().zip(back.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}
