//! Crank–Nicolson steps for `d_t v = c(z) (d_zz - k^2) v - shift(z) v + f`
//! with Dirichlet end rows.

use crate::error::Result;
use crate::linalg::{second_derivative_weights, thomas, Scalar};

/// Three-point `c(z) d_zz` on the interior nodes; the end rows stay empty.
pub struct Stencil {
    w: Vec<(f64, f64, f64)>,
    coef: Vec<f64>,
}

impl Stencil {
    pub fn new(z: &[f64], coef_at: impl Fn(f64) -> f64) -> Self {
        let nz = z.len();
        let mut w = vec![(0.0, 0.0, 0.0); nz];
        let mut coef = vec![0.0; nz];
        for i in 1..nz - 1 {
            w[i] = second_derivative_weights(z[i] - z[i - 1], z[i + 1] - z[i]);
            coef[i] = coef_at(z[i]);
        }
        Self { w, coef }
    }
}

pub struct Workspace<T> {
    lower: Vec<T>,
    diag: Vec<T>,
    upper: Vec<T>,
    rhs: Vec<T>,
    scratch: Vec<T>,
}

impl<T: Scalar> Workspace<T> {
    pub fn new(n: usize) -> Self {
        Self {
            lower: vec![T::zero(); n],
            diag: vec![T::zero(); n],
            upper: vec![T::zero(); n],
            rhs: vec![T::zero(); n],
            scratch: vec![T::zero(); n],
        }
    }
}

/// One Crank–Nicolson step of `d_t v = c (d_zz - k^2) v - shift v + f`
/// with wall values `wall_new`. `shift_old/new` hold the (possibly complex)
/// zeroth-order coefficient at both time levels. Returns the relative residual.
#[allow(clippy::too_many_arguments)]
pub fn cn_step<T: Scalar + std::fmt::Debug>(
    st: &Stencil,
    k2: f64,
    shift_old: &[T],
    shift_new: &[T],
    dt: f64,
    v: &mut [T],
    f_old: &[T],
    f_new: &[T],
    wall_new: (T, T),
    ws: &mut Workspace<T>,
    norm: impl Fn(T) -> f64,
) -> Result<f64> {
    let n = v.len();
    let h = 0.5 * dt;
    for i in 1..n - 1 {
        let (a, b, c) = st.w[i];
        let k = st.coef[i];
        let lv = (v[i - 1] * a + v[i] * b + v[i + 1] * c) * k - v[i] * (k * k2) - shift_old[i] * v[i];
        ws.rhs[i] = v[i] + lv * h + (f_old[i] + f_new[i]) * h;
        ws.lower[i] = T::zero() - T::one() * (h * k * a);
        ws.upper[i] = T::zero() - T::one() * (h * k * c);
        ws.diag[i] = T::one() * (1.0 - h * k * b + h * k * k2) + shift_new[i] * h;
    }
    ws.diag[0] = T::one();
    ws.upper[0] = T::zero();
    ws.lower[0] = T::zero();
    ws.rhs[0] = wall_new.0;
    ws.diag[n - 1] = T::one();
    ws.lower[n - 1] = T::zero();
    ws.upper[n - 1] = T::zero();
    ws.rhs[n - 1] = wall_new.1;
    let b = ws.rhs.clone();
    thomas(&ws.lower, &ws.diag, &ws.upper, &mut ws.rhs, &mut ws.scratch)?;
    let mut res: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..n {
        let mut r = ws.diag[i] * ws.rhs[i];
        if i > 0 {
            r = r + ws.lower[i] * ws.rhs[i - 1];
        }
        if i + 1 < n {
            r = r + ws.upper[i] * ws.rhs[i + 1];
        }
        res = res.max(norm(r - b[i]));
        scale = scale.max(norm(b[i]));
    }
    v.copy_from_slice(&ws.rhs);
    Ok(if scale > 0.0 { res / scale } else { res })
}

