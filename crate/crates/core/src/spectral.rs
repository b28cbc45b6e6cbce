//! Real-to-half-spectrum transforms along the periodic `x` direction.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse DFT pair for rows of `nx` real samples on `[0, L)`.
///
/// Coefficients are normalized so that `f(x_j) = Re sum_k c_k e^{i kappa_k x_j}`
/// with `c_0` and (for even `nx`) the Nyquist coefficient real, and the other
/// coefficients doubled to absorb the conjugate half.
#[derive(Clone)]
pub struct XTransform {
    nx: usize,
    length: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for XTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("XTransform").field("nx", &self.nx).field("length", &self.length).finish()
    }
}

impl XTransform {
    pub fn new(nx: usize, length: f64) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            length,
            forward: planner.plan_fft_forward(nx),
            inverse: planner.plan_fft_inverse(nx),
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    /// Number of stored modes, `nx/2 + 1`.
    pub fn modes(&self) -> usize {
        self.nx / 2 + 1
    }

    /// Angular wavenumber of mode `k`.
    pub fn kappa(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.length
    }

    fn is_nyquist(&self, k: usize) -> bool {
        self.nx % 2 == 0 && k == self.nx / 2
    }

    pub fn forward(&self, row: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = row.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let n = self.nx as f64;
        (0..self.modes())
            .map(|k| {
                let scale = if k == 0 || self.is_nyquist(k) { 1.0 / n } else { 2.0 / n };
                buf[k] * scale
            })
            .collect()
    }

    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.nx];
        for (k, &c) in coeffs.iter().enumerate().take(self.modes()) {
            if k == 0 || self.is_nyquist(k) {
                buf[k] = Complex64::new(c.re, 0.0);
            } else {
                buf[k] = 0.5 * c;
                buf[self.nx - k] = 0.5 * c.conj();
            }
        }
        self.inverse.process(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// Spectral `x`-derivative of the given order. The Nyquist mode is
    /// dropped for odd orders.
    pub fn derivative(&self, row: &[f64], order: usize) -> Vec<f64> {
        if order == 0 {
            return row.to_vec();
        }
        let mut c = self.forward(row);
        let i = Complex64::new(0.0, 1.0);
        for (k, ck) in c.iter_mut().enumerate() {
            if order % 2 == 1 && self.is_nyquist(k) {
                *ck = Complex64::new(0.0, 0.0);
                continue;
            }
            *ck *= (i * self.kappa(k)).powi(order as i32);
        }
        self.inverse(&c)
    }

    /// Applies `derivative` to each contiguous row of length `nx`.
    pub fn derivative_rows(&self, values: &[f64], order: usize) -> Vec<f64> {
        values.chunks(self.nx).flat_map(|row| self.derivative(row, order)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn roundtrip_and_derivative() {
        let nx = 16;
        let l = 2.0 * PI;
        let t = XTransform::new(nx, l);
        let row: Vec<f64> = (0..nx)
            .map(|j| {
                let x = j as f64 * l / nx as f64;
                0.3 + (2.0 * x).cos() - 0.5 * (3.0 * x).sin()
            })
            .collect();
        let back = t.inverse(&t.forward(&row));
        for (a, b) in row.iter().zip(&back) {
            assert!((a - b).abs() < 1e-14);
        }
        let d = t.derivative(&row, 1);
        for j in 0..nx {
            let x = j as f64 * l / nx as f64;
            let exact = -2.0 * (2.0 * x).sin() - 1.5 * (3.0 * x).cos();
            assert!((d[j] - exact).abs() < 1e-12);
        }
        let c = t.forward(&row);
        assert!((c[2] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((c[3] - Complex64::new(0.0, 0.5)).norm() < 1e-14);
    }
}
