//! Tridiagonal solves and finite-difference stencils on nonuniform nodes.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Sub};

use crate::error::{Error, Result};

/// Scalars the Thomas solver works over.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_finite_value(&self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Solves `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]` in place
/// (`rhs` becomes the solution). `lower[0]` and `upper[n-1]` are ignored.
/// `scratch` must have the same length as `rhs`.
pub fn thomas<T: Scalar>(
    lower: &[T],
    diag: &[T],
    upper: &[T],
    rhs: &mut [T],
    scratch: &mut [T],
) -> Result<()> {
    let n = rhs.len();
    if diag.len() != n || lower.len() != n || upper.len() != n || scratch.len() != n {
        return Err(Error::Solver("tridiagonal system with inconsistent sizes".into()));
    }
    if n == 0 {
        return Ok(());
    }
    let mut beta = diag[0];
    rhs[0] = rhs[0] / beta;
    for i in 1..n {
        scratch[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * scratch[i];
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] = rhs[i] - scratch[i + 1] * next;
    }
    if rhs.iter().any(|v| !v.is_finite_value()) {
        return Err(Error::Solver("tridiagonal solve produced non-finite values".into()));
    }
    Ok(())
}

/// Weights `(w_-, w_0, w_+)` of the three-point second derivative at an
/// interior node with left spacing `hm` and right spacing `hp`.
pub fn second_derivative_weights(hm: f64, hp: f64) -> (f64, f64, f64) {
    let s = hm + hp;
    (2.0 / (hm * s), -2.0 / (hm * hp), 2.0 / (hp * s))
}

/// Weights of the three-point first derivative at an interior node.
pub fn first_derivative_weights(hm: f64, hp: f64) -> (f64, f64, f64) {
    let s = hm + hp;
    (-hp / (hm * s), (hp - hm) / (hm * hp), hm / (hp * s))
}

/// Nodal first derivative, second order: centered in the interior and
/// one-sided three-point at both ends.
pub fn derivative(nodes: &[f64], f: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    assert!(n >= 3 && f.len() == n);
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let (a, b, c) = first_derivative_weights(nodes[i] - nodes[i - 1], nodes[i + 1] - nodes[i]);
        d[i] = a * f[i - 1] + b * f[i] + c * f[i + 1];
    }
    d[0] = one_sided(nodes[0], nodes[1], nodes[2], f[0], f[1], f[2]);
    d[n - 1] = one_sided(nodes[n - 1], nodes[n - 2], nodes[n - 3], f[n - 1], f[n - 2], f[n - 3]);
    d
}

// Derivative at x0 of the parabola through (x0,f0), (x1,f1), (x2,f2).
fn one_sided(x0: f64, x1: f64, x2: f64, f0: f64, f1: f64, f2: f64) -> f64 {
    let h1 = x1 - x0;
    let h2 = x2 - x0;
    let c1 = h2 / (h1 * (h2 - h1));
    let c2 = -h1 / (h2 * (h2 - h1));
    -(c1 + c2) * f0 + c1 * f1 + c2 * f2
}

/// Nodal second derivative: three-point in the interior, four-point one-sided
/// (second order) at the ends.
pub fn second_derivative(nodes: &[f64], f: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    assert!(n >= 4 && f.len() == n);
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let (a, b, c) = second_derivative_weights(nodes[i] - nodes[i - 1], nodes[i + 1] - nodes[i]);
        d[i] = a * f[i - 1] + b * f[i] + c * f[i + 1];
    }
    d[0] = end_second(&nodes[..4], &f[..4]);
    let xs: Vec<f64> = nodes[n - 4..].iter().rev().copied().collect();
    let fs: Vec<f64> = f[n - 4..].iter().rev().copied().collect();
    d[n - 1] = end_second(&xs, &fs);
    d
}

// Second derivative at xs[0] of the cubic through four points.
fn end_second(xs: &[f64], fs: &[f64]) -> f64 {
    // Lagrange basis second derivatives evaluated at xs[0]
    let mut acc = 0.0;
    for j in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&k| k != j).collect();
        let denom: f64 = others.iter().map(|&k| xs[j] - xs[k]).product();
        // d2/dx2 of prod_{k != j}(x - x_k) = 2 * sum over pairs of the remaining factor
        let mut num = 0.0;
        for a in 0..3 {
            let k = others[a];
            num += 2.0 * (xs[0] - xs[k]);
        }
        acc += fs[j] * num / denom;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_real_and_complex() {
        let lower = [0.0, -1.0, -1.0, -1.0];
        let diag = [2.0, 2.0, 2.0, 2.0];
        let upper = [-1.0, -1.0, -1.0, 0.0];
        let x = [1.0, 2.0, -1.0, 0.5];
        let mut rhs: Vec<f64> = (0..4)
            .map(|i| {
                let l = if i > 0 { lower[i] * x[i - 1] } else { 0.0 };
                let u = if i < 3 { upper[i] * x[i + 1] } else { 0.0 };
                l + diag[i] * x[i] + u
            })
            .collect();
        let mut s = vec![0.0; 4];
        thomas(&lower, &diag, &upper, &mut rhs, &mut s).unwrap();
        for i in 0..4 {
            assert!((rhs[i] - x[i]).abs() < 1e-14);
        }

        let i1 = Complex64::new(0.0, 1.0);
        let lc: Vec<Complex64> = lower.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let dc: Vec<Complex64> = diag.iter().map(|&v| v + i1).collect();
        let uc: Vec<Complex64> = upper.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, -v)).collect();
        let mut rc: Vec<Complex64> = (0..4)
            .map(|i| {
                let mut r = dc[i] * xc[i];
                if i > 0 {
                    r += lc[i] * xc[i - 1];
                }
                if i < 3 {
                    r += uc[i] * xc[i + 1];
                }
                r
            })
            .collect();
        let mut sc = vec![Complex64::new(0.0, 0.0); 4];
        thomas(&lc, &dc, &uc, &mut rc, &mut sc).unwrap();
        for i in 0..4 {
            assert!((rc[i] - xc[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn stencils_exact_on_quadratics_and_cubics() {
        let nodes = [0.0, 0.1, 0.25, 0.3, 0.6, 1.0];
        let f: Vec<f64> = nodes.iter().map(|&x| 1.0 + 2.0 * x - 3.0 * x * x).collect();
        let d = derivative(&nodes, &f);
        for (i, &x) in nodes.iter().enumerate() {
            assert!((d[i] - (2.0 - 6.0 * x)).abs() < 1e-12);
        }
        let g: Vec<f64> = nodes.iter().map(|&x| x * x * x).collect();
        let dd = second_derivative(&nodes, &g);
        assert!((dd[0] - 0.0).abs() < 1e-10);
        assert!((dd[5] - 6.0).abs() < 1e-10);
        let q: Vec<f64> = nodes.iter().map(|&x| x * x).collect();
        let dq = second_derivative(&nodes, &q);
        assert!(dq.iter().all(|v| (v - 2.0).abs() < 1e-10));
    }
}
