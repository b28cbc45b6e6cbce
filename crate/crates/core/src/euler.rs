//! Outer (inviscid) solution by quadrature and exact characteristics.
//!
//! `u1` solves `d_t u1 = f1` pointwise in `z`. `u2` is transported with speed
//! `u1(t; z)`: along `x - X(t; z)` with drift `X = int_0^t u1`,
//!
//! `u2(t, x, z) = b(x - X(t), z) + int_0^t f2(s, x - X(t) + X(s), z) ds`.
//!
//! Each forcing term is a single `x`-mode `Re(w e^{i k x})`, so the integral
//! factors as `Re(w e^{i k (x - X(t))} I(t))` with
//! `I(t) = int_0^t T(s) Z(z) e^{i k X(s)} ds`. Only `I` needs quadrature;
//! nothing is interpolated.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{uniform_stamps, Field1D, Field2D, Grid2D, TimeSeries};
use crate::scenario::{Scenario, SeparableFn, Side};

/// Outer solution on one grid.
#[derive(Clone, Debug)]
pub struct EulerSolution {
    pub grid: Arc<Grid2D>,
    pub u1: TimeSeries<Field1D>,
    /// `d_z^2 u1`, used by the remainder fields.
    pub u1_zz: TimeSeries<Field1D>,
    pub u2: TimeSeries<Field2D>,
    pub drift: TimeSeries<Field1D>,
}

/// Wall traces of the outer solution on an arbitrary uniform time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WallTrace {
    pub side: Side,
    pub times: Vec<f64>,
    pub nx: usize,
    pub length: f64,
    pub u1: Vec<f64>,
    /// `d_z u1`
    pub u1_z: Vec<f64>,
    /// Rows of `nx` values per stamp.
    pub u2: Vec<Vec<f64>>,
    pub u2_x: Vec<Vec<f64>>,
    /// `d_z d_x u2`
    pub u2_xz: Vec<Vec<f64>>,
}

struct ModeTerm {
    kappa: f64,
    weight: Complex64,
    index: usize,
}

fn forcing_modes(f2: &SeparableFn) -> Result<Vec<ModeTerm>> {
    f2.terms()
        .iter()
        .enumerate()
        .map(|(index, term)| {
            let (kappa, weight) = term
                .x
                .fourier_mode()
                .ok_or_else(|| Error::invalid("f2", "x-dependence must be a Fourier mode"))?;
            Ok(ModeTerm { kappa, weight, index })
        })
        .collect()
}

/// Per-column quadrature data at the stamps.
struct Column {
    /// `d_z^d u1` at the stamps for d = 0, 1, 2.
    u1: [Vec<f64>; 3],
    /// `X` and `d_z X` at the stamps.
    drift: [Vec<f64>; 2],
    /// `I_m(t_n)` and `d_z I_m(t_n)` per forcing term.
    modes: Vec<(Vec<Complex64>, Vec<Complex64>)>,
}

/// Widest Simpson panel of the mode integrals; stamp intervals are split
/// so that the quadrature error stays far below the stamp spacing's.
const MAX_PANEL: f64 = 1.0 / 256.0;

// Composite Simpson throughout. Each stamp interval holds `r` panels: f1 at
// spacing dt/(8r) gives u1 on a dt/(4r) grid, pairs of those give X at
// dt/(2r), and X at panel ends and midpoints gives the mode integrals.
fn column(s: &Scenario, modes: &[ModeTerm], z: f64, dt: f64, nt: usize, want_modes: bool, derivs: usize) -> Column {
    let r = ((dt / MAX_PANEL).ceil() as usize).max(1);
    let eta = dt / (4 * r) as f64;
    let nf = 4 * r * nt;
    let mut u1: [Vec<f64>; 3] = Default::default();
    let mut xs: [Vec<f64>; 2] = Default::default();
    for d in 0..derivs.min(3) {
        let a = s.a.partial(0, 0, d, 0.0, 0.0, z);
        let mut u = Vec::with_capacity(nf + 1);
        u.push(a);
        let mut acc = 0.0;
        let mut f_prev = s.f1.partial(0, 0, d, 0.0, 0.0, z);
        for j in 0..nf {
            let t0 = j as f64 * eta;
            let fm = s.f1.partial(0, 0, d, t0 + 0.5 * eta, 0.0, z);
            let f_next = s.f1.partial(0, 0, d, t0 + eta, 0.0, z);
            acc += eta / 6.0 * (f_prev + 4.0 * fm + f_next);
            u.push(a + acc);
            f_prev = f_next;
        }
        if d < 2 {
            // drift at half-stamps (every second fine node)
            let mut x = Vec::with_capacity(2 * r * nt + 1);
            x.push(0.0);
            let mut acc = 0.0;
            for m in 0..2 * r * nt {
                acc += 2.0 * eta / 6.0 * (u[2 * m] + 4.0 * u[2 * m + 1] + u[2 * m + 2]);
                x.push(acc);
            }
            xs[d] = x;
        }
        u1[d] = (0..=nt).map(|n| u[4 * r * n]).collect();
    }

    let mut mode_data = Vec::new();
    if want_modes {
        let i = Complex64::new(0.0, 1.0);
        let x_half = &xs[0];
        let xz_half = if derivs > 1 { Some(&xs[1]) } else { None };
        for m in modes {
            let term = &s.f2.terms()[m.index];
            let zf = term.z.eval(z);
            let zf1 = term.z.derivative(1, z);
            let h = |k: usize| {
                let t = k as f64 * eta * 2.0;
                let phase = (i * m.kappa * x_half[k]).exp();
                let tf = term.amp * term.time.eval(t);
                let v = tf * zf * phase;
                let vz = match xz_half {
                    Some(xz) => tf * (zf1 + i * m.kappa * xz[k] * zf) * phase,
                    None => Complex64::new(0.0, 0.0),
                };
                (v, vz)
            };
            let mut ii = vec![Complex64::new(0.0, 0.0); nt + 1];
            let mut jj = vec![Complex64::new(0.0, 0.0); nt + 1];
            let w = dt / r as f64;
            let mut prev = h(0);
            for n in 0..nt {
                let (mut a, mut b) = (ii[n], jj[n]);
                for p in 0..r {
                    let k = 2 * (r * n + p);
                    let mid = h(k + 1);
                    let next = h(k + 2);
                    a += w / 6.0 * (prev.0 + 4.0 * mid.0 + next.0);
                    b += w / 6.0 * (prev.1 + 4.0 * mid.1 + next.1);
                    prev = next;
                }
                ii[n + 1] = a;
                jj[n + 1] = b;
            }
            mode_data.push((ii, jj));
        }
    }
    let drift = [
        (0..=nt).map(|n| xs[0][2 * r * n]).collect(),
        if derivs > 1 { (0..=nt).map(|n| xs[1][2 * r * n]).collect() } else { Vec::new() },
    ];
    Column { u1, drift, modes: mode_data }
}

struct PointValues {
    u2: f64,
    u2_x: f64,
    u2_xz: f64,
}

fn u2_at(s: &Scenario, modes: &[ModeTerm], col: &Column, n: usize, x: f64, z: f64, with_z: bool) -> PointValues {
    let xd = col.drift[0][n];
    let xi = x - xd;
    let i = Complex64::new(0.0, 1.0);
    let mut u2 = s.b.eval(0.0, xi, z);
    let mut u2_x = s.b.partial(0, 1, 0, 0.0, xi, z);
    let mut u2_xz = 0.0;
    if with_z {
        let xz = col.drift[1][n];
        u2_xz = -s.b.partial(0, 2, 0, 0.0, xi, z) * xz + s.b.partial(0, 1, 1, 0.0, xi, z);
    }
    for (m, (ii, jj)) in modes.iter().zip(&col.modes) {
        let e = m.weight * (i * m.kappa * xi).exp();
        u2 += (e * ii[n]).re;
        let ex = i * m.kappa * e;
        u2_x += (ex * ii[n]).re;
        if with_z {
            let xz = col.drift[1][n];
            u2_xz += (ex * (-i * m.kappa * xz * ii[n] + jj[n])).re;
        }
    }
    PointValues { u2, u2_x, u2_xz }
}

fn check_nt(nt: usize) -> Result<()> {
    if nt == 0 {
        return Err(Error::domain("at least one time step is required"));
    }
    Ok(())
}

/// `u1^0(t; z) = a(z) + int_0^t f1` at every node and stamp.
pub fn solve_euler_u1(s: &Scenario, grid: Arc<Grid2D>, nt: usize) -> Result<TimeSeries<Field1D>> {
    Ok(solve_euler(s, grid, nt)?.u1)
}

/// Transported `u2^0` on the grid. The drift is integrated from the forcing
/// on a finer time grid than the stamps of `u1`, which only fixes the stamps.
pub fn solve_euler_u2(
    s: &Scenario,
    u1: &TimeSeries<Field1D>,
    grid: Arc<Grid2D>,
    nt: usize,
) -> Result<TimeSeries<Field2D>> {
    let stamps = uniform_stamps(s.horizon, nt);
    if u1.times != stamps || u1.frames.iter().any(|f| *f.grid != *grid) {
        return Err(Error::domain("u1 series does not live on the requested grid and stamps"));
    }
    Ok(solve_euler(s, grid, nt)?.u2)
}

/// Full outer solution: `u1`, `d_z^2 u1`, `u2` and the drift.
pub fn solve_euler(s: &Scenario, grid: Arc<Grid2D>, nt: usize) -> Result<EulerSolution> {
    check_nt(nt)?;
    let modes = forcing_modes(&s.f2)?;
    let times = uniform_stamps(s.horizon, nt);
    let dt = s.horizon / nt as f64;
    let nx = grid.nx();
    let xs = grid.x_nodes();
    let cols: Vec<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> = grid
        .z()
        .par_iter()
        .map(|&z| {
            let col = column(s, &modes, z, dt, nt, true, 3);
            let u2: Vec<Vec<f64>> = (0..=nt)
                .map(|n| xs.iter().map(|&x| u2_at(s, &modes, &col, n, x, z, false).u2).collect())
                .collect();
            let Column { u1, drift, .. } = col;
            let [u, _, uzz] = u1;
            let [x, _] = drift;
            (u, uzz, x, u2)
        })
        .collect();

    let nz = grid.nz();
    let mut u1 = Vec::with_capacity(nt + 1);
    let mut u1_zz = Vec::with_capacity(nt + 1);
    let mut drift = Vec::with_capacity(nt + 1);
    let mut u2 = Vec::with_capacity(nt + 1);
    for (n, &t) in times.iter().enumerate() {
        let pick = |k: usize| -> Vec<f64> {
            cols.iter()
                .map(|c| match k {
                    0 => c.0[n],
                    1 => c.1[n],
                    _ => c.2[n],
                })
                .collect()
        };
        u1.push(Field1D::new(grid.clone(), pick(0), t)?);
        u1_zz.push(Field1D::new(grid.clone(), pick(1), t)?);
        drift.push(Field1D::new(grid.clone(), pick(2), t)?);
        let mut v = Vec::with_capacity(nx * nz);
        for c in &cols {
            v.extend_from_slice(&c.3[n]);
        }
        u2.push(Field2D::new(grid.clone(), v, t)?);
    }
    for f in &u2 {
        if f.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("f2", "Euler solution is not finite"));
        }
    }
    Ok(EulerSolution {
        grid: grid.clone(),
        u1: TimeSeries::new(times.clone(), u1)?,
        u1_zz: TimeSeries::new(times.clone(), u1_zz)?,
        u2: TimeSeries::new(times.clone(), u2)?,
        drift: TimeSeries::new(times, drift)?,
    })
}

/// Outer traces at one wall on `nt + 1` uniform stamps and `nx` points.
pub fn wall_trace(s: &Scenario, side: Side, nt: usize, nx: usize) -> Result<WallTrace> {
    check_nt(nt)?;
    let modes = forcing_modes(&s.f2)?;
    let times = uniform_stamps(s.horizon, nt);
    let dt = s.horizon / nt as f64;
    let z = side.wall();
    let col = column(s, &modes, z, dt, nt, true, 2);
    let xs: Vec<f64> = (0..nx).map(|j| s.length * j as f64 / nx as f64).collect();
    let mut u2 = Vec::with_capacity(nt + 1);
    let mut u2_x = Vec::with_capacity(nt + 1);
    let mut u2_xz = Vec::with_capacity(nt + 1);
    for n in 0..=nt {
        let p: Vec<PointValues> = xs.iter().map(|&x| u2_at(s, &modes, &col, n, x, z, true)).collect();
        u2.push(p.iter().map(|v| v.u2).collect());
        u2_x.push(p.iter().map(|v| v.u2_x).collect());
        u2_xz.push(p.iter().map(|v| v.u2_xz).collect());
    }
    let [u1, u1_z, _] = col.u1;
    Ok(WallTrace { side, times, nx, length: s.length, u1, u1_z, u2, u2_x, u2_xz })
}
