//! Separable data functions.
//!
//! Every scenario slot is a finite sum of terms `amp * T(t) * X(x) * Z(z)`.
//! Each factor comes from a small closed family with exact derivatives of any
//! order, which is what the Euler characteristics and the wall-trace
//! coefficients of the remainders rely on.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Time factor of a separable term.
#[derive(Clone, Debug, PartialEq)]
pub enum TimeFactor {
    One,
    /// `sin(w t)`
    Sin(f64),
    /// `cos(w t)`
    Cos(f64),
    /// `1 - cos(w t)`
    OneMinusCos(f64),
    /// `sum_k c_k t^k`
    Poly(Vec<f64>),
    /// 0 for `t <= 0`, 1 afterwards. Only meant for deliberately incompatible
    /// oracle runs.
    Step,
}

impl TimeFactor {
    pub fn eval(&self, t: f64) -> f64 {
        self.derivative(0, t)
    }

    pub fn derivative(&self, order: usize, t: f64) -> f64 {
        match self {
            TimeFactor::One => {
                if order == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            TimeFactor::Sin(w) => trig_derivative(false, *w, order, t),
            TimeFactor::Cos(w) => trig_derivative(true, *w, order, t),
            TimeFactor::OneMinusCos(w) => {
                let c = trig_derivative(true, *w, order, t);
                if order == 0 {
                    1.0 - c
                } else {
                    -c
                }
            }
            TimeFactor::Poly(c) => poly_derivative(c, order, t),
            TimeFactor::Step => {
                if order > 0 {
                    0.0
                } else if t > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Spatial factor, used for both the periodic `x` direction and the
/// wall-normal `z` direction.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceFactor {
    One,
    /// `cos(k s)`
    Cos(f64),
    /// `sin(k s)`
    Sin(f64),
    /// `sum_k c_k s^k`
    Poly(Vec<f64>),
}

impl SpaceFactor {
    pub fn eval(&self, s: f64) -> f64 {
        self.derivative(0, s)
    }

    pub fn derivative(&self, order: usize, s: f64) -> f64 {
        match self {
            SpaceFactor::One => {
                if order == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            SpaceFactor::Cos(k) => trig_derivative(true, *k, order, s),
            SpaceFactor::Sin(k) => trig_derivative(false, *k, order, s),
            SpaceFactor::Poly(c) => poly_derivative(c, order, s),
        }
    }

    /// Writes the factor as `Re(w e^{i k s})` when it is a single Fourier mode.
    pub fn fourier_mode(&self) -> Option<(f64, Complex64)> {
        match self {
            SpaceFactor::One => Some((0.0, Complex64::new(1.0, 0.0))),
            SpaceFactor::Cos(k) => Some((*k, Complex64::new(1.0, 0.0))),
            SpaceFactor::Sin(k) => Some((*k, Complex64::new(0.0, -1.0))),
            SpaceFactor::Poly(c) if c.iter().skip(1).all(|&v| v == 0.0) => {
                Some((0.0, Complex64::new(c.first().copied().unwrap_or(0.0), 0.0)))
            }
            SpaceFactor::Poly(_) => None,
        }
    }
}

fn trig_derivative(cosine: bool, k: f64, order: usize, s: f64) -> f64 {
    let phase = k * s + order as f64 * FRAC_PI_2;
    let scale = k.powi(order as i32);
    if cosine {
        scale * phase.cos()
    } else {
        scale * phase.sin()
    }
}

fn poly_derivative(c: &[f64], order: usize, s: f64) -> f64 {
    // Horner from the highest power down: sum_k c_k k!/(k-order)! s^(k-order)
    c.iter().enumerate().skip(order).rev().fold(0.0, |acc, (k, &ck)| {
        let falling: f64 = (0..order).map(|j| (k - j) as f64).product();
        acc * s + ck * falling
    })
}

/// One separable term `amp * T(t) * X(x) * Z(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub amp: f64,
    pub time: TimeFactor,
    pub x: SpaceFactor,
    pub z: SpaceFactor,
}

impl Term {
    pub fn new(amp: f64, time: TimeFactor, x: SpaceFactor, z: SpaceFactor) -> Self {
        Self { amp, time, x, z }
    }

    fn partial(&self, dt: usize, dx: usize, dz: usize, t: f64, x: f64, z: f64) -> f64 {
        if self.amp == 0.0 {
            return 0.0;
        }
        self.amp
            * self.time.derivative(dt, t)
            * self.x.derivative(dx, x)
            * self.z.derivative(dz, z)
    }
}

/// A finite sum of separable terms. The empty sum is the zero function.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeparableFn {
    terms: Vec<Term>,
}

impl SeparableFn {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::zero().with(c, TimeFactor::One, SpaceFactor::One, SpaceFactor::One)
    }

    /// Adds the term `amp * time * x * z`.
    pub fn with(mut self, amp: f64, time: TimeFactor, x: SpaceFactor, z: SpaceFactor) -> Self {
        if amp != 0.0 {
            self.terms.push(Term::new(amp, time, x, z));
        }
        self
    }

    /// Profile in `z` only.
    pub fn profile(z: SpaceFactor, amp: f64) -> Self {
        Self::zero().with(amp, TimeFactor::One, SpaceFactor::One, z)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, t: f64, x: f64, z: f64) -> f64 {
        self.partial(0, 0, 0, t, x, z)
    }

    /// Mixed partial derivative of the given orders.
    pub fn partial(&self, dt: usize, dx: usize, dz: usize, t: f64, x: f64, z: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.partial(dt, dx, dz, t, x, z))
            .sum()
    }

    /// True when no term depends on `x`.
    pub fn is_x_independent(&self) -> bool {
        self.terms
            .iter()
            .all(|t| matches!(t.x.fourier_mode(), Some((k, _)) if k == 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_derivatives() {
        // 1 + 2s + 3s^2
        let p = SpaceFactor::Poly(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0), 17.0);
        assert_eq!(p.derivative(1, 2.0), 14.0);
        assert_eq!(p.derivative(2, 2.0), 6.0);
        assert_eq!(p.derivative(3, 2.0), 0.0);
    }

    #[test]
    fn trig_derivative_cycle() {
        let s = SpaceFactor::Sin(3.0);
        let x = 0.37;
        assert!((s.derivative(1, x) - 3.0 * (3.0 * x).cos()).abs() < 1e-14);
        assert!((s.derivative(2, x) + 9.0 * (3.0 * x).sin()).abs() < 1e-13);
        let c = TimeFactor::OneMinusCos(1.0);
        assert_eq!(c.eval(0.0), 0.0);
        assert!((c.derivative(1, 0.4) - 0.4f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn fourier_mode_matches_values() {
        for f in [SpaceFactor::Cos(2.0), SpaceFactor::Sin(2.0), SpaceFactor::One] {
            let (k, w) = f.fourier_mode().unwrap();
            for &x in &[0.0, 0.3, 1.7] {
                let v = (w * Complex64::new(0.0, k * x).exp()).re;
                assert!((v - f.eval(x)).abs() < 1e-14);
            }
        }
        assert!(SpaceFactor::Poly(vec![0.0, 1.0]).fourier_mode().is_none());
    }

    #[test]
    fn separable_sum() {
        let f = SeparableFn::zero()
            .with(2.0, TimeFactor::Sin(1.0), SpaceFactor::Cos(1.0), SpaceFactor::One)
            .with(1.0, TimeFactor::One, SpaceFactor::One, SpaceFactor::Poly(vec![0.0, 1.0]));
        let v = f.eval(0.5, 0.2, 0.3);
        let expected = 2.0 * 0.5f64.sin() * 0.2f64.cos() + 0.3;
        assert!((v - expected).abs() < 1e-15);
        assert!(!f.is_x_independent());
        assert!(SeparableFn::zero().is_zero());
    }
}
