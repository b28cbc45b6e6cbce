use std::sync::Arc;

use rayon::prelude::*;

use super::{check_inputs, ApproxSolution, Cutoff};
use crate::error::{Error, Result};
use crate::euler::EulerSolution;
use crate::fields::{Field1D, Field2D, FieldNorms, Grid2D, HalfLineGrid, TimeSeries};
use crate::linalg;
use crate::prandtl::derivs::{d_dt, d_dz};
use crate::prandtl::CorrectorSet;
use crate::scenario::{Scenario, Side};
use crate::spectral::XTransform;

/// The five remainder fields at every stamp.
#[derive(Clone, Debug)]
pub struct RemainderFields {
    pub epsilon: f64,
    pub a: TimeSeries<Field1D>,
    pub b: TimeSeries<Field1D>,
    pub c: TimeSeries<Field2D>,
    pub d: TimeSeries<Field2D>,
    pub e: TimeSeries<Field2D>,
}

impl RemainderFields {
    /// `max_t ||R||_{L^2}` for `A, B, C, D, E` in that order.
    pub fn linf_l2(&self) -> [(&'static str, f64); 5] {
        fn m<F: FieldNorms>(s: &TimeSeries<F>) -> f64 {
            s.frames.iter().map(|f| f.l2_norm()).fold(0.0, f64::max)
        }
        [("A", m(&self.a)), ("B", m(&self.b)), ("C", m(&self.c)), ("D", m(&self.d)), ("E", m(&self.e))]
    }
}

// Corrector values and derivatives on the half-line, one entry per stamp.
struct LayerData {
    zgrid: Arc<HalfLineGrid>,
    nx: usize,
    th1: Vec<Vec<f64>>,
    th1_t: Vec<Vec<f64>>,
    th1_z: Vec<Vec<f64>>,
    th2: Vec<Vec<f64>>,
    th2_t: Vec<Vec<f64>>,
    th2_z: Vec<Vec<f64>>,
    th2_x: Vec<Vec<f64>>,
    th2_xx: Vec<Vec<f64>>,
}

impl LayerData {
    fn new(c: &CorrectorSet) -> Result<Self> {
        let times = &c.theta1.times;
        if times.len() < 3 {
            return Err(Error::domain("time derivatives of the correctors need at least 3 stamps"));
        }
        let nodes = c.zgrid.nodes();
        let tr = XTransform::new(c.nx, c.length);
        let th1: Vec<Vec<f64>> = c.theta1.frames.iter().map(|f| f.values.clone()).collect();
        let th2: Vec<Vec<f64>> = c.theta2.frames.iter().map(|f| f.values.clone()).collect();
        Ok(Self {
            zgrid: c.zgrid.clone(),
            nx: c.nx,
            th1_t: d_dt(&th1, times),
            th1_z: th1.iter().map(|v| linalg::derivative(nodes, v)).collect(),
            th2_t: d_dt(&th2, times),
            th2_z: th2.iter().map(|v| d_dz(v, c.nx, nodes)).collect(),
            th2_x: th2.iter().map(|v| tr.derivative_rows(v, 1)).collect(),
            th2_xx: th2.iter().map(|v| tr.derivative_rows(v, 2)).collect(),
            th1,
            th2,
        })
    }

    fn scalar(&self, v: &[f64], zeta: f64) -> f64 {
        match self.zgrid.cubic_stencil(zeta) {
            Some((start, w)) => (0..4).map(|k| w[k] * v[start + k]).sum(),
            None => 0.0,
        }
    }

    fn row(&self, v: &[f64], zeta: f64, out: &mut [f64]) {
        let nx = self.nx;
        match self.zgrid.cubic_stencil(zeta) {
            Some((start, w)) => {
                for (ix, o) in out.iter_mut().enumerate() {
                    *o = (0..4).map(|k| w[k] * v[(start + k) * nx + ix]).sum();
                }
            }
            None => out.iter_mut().for_each(|o| *o = 0.0),
        }
    }
}

// Cutoff and its first two derivatives at `z` for the lower wall and at
// `1 - z` for the upper one.
fn cutoff_triplet(c: &Cutoff, side: Side, z: f64) -> [f64; 3] {
    let arg = match side {
        Side::Lower => z,
        Side::Upper => 1.0 - z,
    };
    [c.eval_unchecked(arg, 0), c.eval_unchecked(arg, 1), c.eval_unchecked(arg, 2)]
}

/// `A, ..., E` sampled on the outer solution's grid, each term as written in
/// the remainder formulas. Wall coefficients `d_z rho0(i)`,
/// `d_z(rho0 u1^0)(t; i)` and `d_z(rho0 d_x u2^0)(t; x, i)` come from the
/// analytic density and the outer wall traces; corrector derivatives are
/// finite differences in `t` and `Z` and spectral in `x`.
pub fn evaluate_remainders(
    s: &Scenario,
    euler: &EulerSolution,
    lower: &CorrectorSet,
    upper: &CorrectorSet,
    eps: f64,
) -> Result<RemainderFields> {
    check_inputs(euler, lower, upper, eps)?;
    let grid = euler.grid.clone();
    let layers = [LayerData::new(lower)?, LayerData::new(upper)?];
    let sets = [lower, upper];
    let cutoff = Cutoff::default();
    let r = eps.sqrt();
    let nx = grid.nx();
    let nz = grid.nz();
    let tr = XTransform::new(nx, grid.length());
    let rho: Vec<f64> = grid.z().iter().map(|&z| s.rho(z)).collect();
    let rho_w = [s.rho(0.0), s.rho(1.0)];
    let rho_w_z = [s.rho0.partial(0, 0, 1, 0.0, 0.0, 0.0), s.rho0.partial(0, 0, 1, 0.0, 0.0, 1.0)];

    type Frame = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);
    let frames: Vec<Frame> = (0..euler.u1.len())
        .into_par_iter()
        .map(|n| {
            let mut a = vec![0.0; nz];
            let mut b: Vec<f64> = euler.u1_zz.frames[n].values.iter().map(|v| -eps * v).collect();
            let mut c = vec![0.0; nz * nx];
            let mut d = vec![0.0; nz * nx];
            let u2 = &euler.u2.frames[n];
            let u2_xx = tr.derivative_rows(&u2.values, 2);
            let u2_zz = u2.dzz().values;
            let mut e: Vec<f64> = u2_xx.iter().zip(&u2_zz).map(|(p, q)| -eps * (p + q)).collect();

            let mut th2 = vec![0.0; nx];
            let mut th2_t = vec![0.0; nx];
            let mut th2_z = vec![0.0; nx];
            let mut th2_x = vec![0.0; nx];
            let mut th2_xx = vec![0.0; nx];
            for (w, side) in Side::BOTH.into_iter().enumerate() {
                let ld = &layers[w];
                let tra = &sets[w].traces;
                let sigma = if side == Side::Lower { 1.0 } else { -1.0 };
                let rho_u1_z = rho_w_z[w] * tra.u1[n] + rho_w[w] * tra.u1_z[n];
                let rho_u2x_z: Vec<f64> = tra.u2_x[n]
                    .iter()
                    .zip(&tra.u2_xz[n])
                    .map(|(p, q)| rho_w_z[w] * p + rho_w[w] * q)
                    .collect();
                for (iz, &z) in grid.z().iter().enumerate() {
                    let [psi, dpsi, ddpsi] = cutoff_triplet(&cutoff, side, z);
                    if psi == 0.0 && dpsi == 0.0 && ddpsi == 0.0 {
                        continue;
                    }
                    let zeta = match side {
                        Side::Lower => z / r,
                        Side::Upper => (1.0 - z) / r,
                    };
                    let t1 = ld.scalar(&ld.th1[n], zeta);
                    let t1_t = ld.scalar(&ld.th1_t[n], zeta);
                    let t1_z = ld.scalar(&ld.th1_z[n], zeta);
                    a[iz] += r * (sigma * psi * zeta * rho_w_z[w] * t1_t - 2.0 * dpsi * t1_z);
                    b[iz] -= eps * ddpsi * t1;

                    ld.row(&ld.th2[n], zeta, &mut th2);
                    ld.row(&ld.th2_t[n], zeta, &mut th2_t);
                    ld.row(&ld.th2_z[n], zeta, &mut th2_z);
                    ld.row(&ld.th2_x[n], zeta, &mut th2_x);
                    ld.row(&ld.th2_xx[n], zeta, &mut th2_xx);
                    for ix in 0..nx {
                        let k = iz * nx + ix;
                        c[k] += psi * (psi - 1.0) * rho[iz] * t1 * th2_x[ix];
                        let bracket = rho_w_z[w] * th2_t[ix]
                            + rho_u1_z * th2_x[ix]
                            + rho_u2x_z[ix] * t1
                            + rho_w_z[w] * t1 * th2_x[ix];
                        d[k] += r * (sigma * psi * zeta * bracket - 2.0 * dpsi * th2_z[ix]);
                        e[k] -= eps * (psi * th2_xx[ix] + ddpsi * th2[ix]);
                    }
                }
            }
            (a, b, c, d, e)
        })
        .collect();

    let times = euler.u1.times.clone();
    let mk1 = |v: Vec<f64>, t: f64| Field1D { grid: grid.clone(), values: v, t };
    let mk2 = |v: Vec<f64>, t: f64| Field2D { grid: grid.clone(), values: v, t };
    let mut out = (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for ((a, b, c, d, e), &t) in frames.into_iter().zip(&times) {
        out.0.push(mk1(a, t));
        out.1.push(mk1(b, t));
        out.2.push(mk2(c, t));
        out.3.push(mk2(d, t));
        out.4.push(mk2(e, t));
    }
    Ok(RemainderFields {
        epsilon: eps,
        a: TimeSeries::new(times.clone(), out.0)?,
        b: TimeSeries::new(times.clone(), out.1)?,
        c: TimeSeries::new(times.clone(), out.2)?,
        d: TimeSeries::new(times.clone(), out.3)?,
        e: TimeSeries::new(times, out.4)?,
    })
}

/// Largest `L^2` norm over interior stamps of
/// `rho0 d_t u1a - eps d_zz u1a - rho0 f1 - (A + B)` and
/// `rho0 d_t u2a - eps Lap u2a + rho0 u1a d_x u2a - rho0 f2 - (C + D + E)`,
/// with centred differences in `t` and `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualIdentity {
    pub u1: f64,
    pub u2: f64,
}

pub fn residual_identity(s: &Scenario, approx: &ApproxSolution, rem: &RemainderFields) -> Result<ResidualIdentity> {
    let times = &approx.u1a.times;
    if times.len() < 3 || rem.a.times != *times {
        return Err(Error::domain("residual identity needs matching series with at least 3 stamps"));
    }
    let grid: &Grid2D = approx.grid();
    let eps = approx.epsilon;
    let nx = grid.nx();
    let x = grid.x_nodes();
    let z = grid.z();
    let rho: Vec<f64> = z.iter().map(|&zz| s.rho(zz)).collect();
    let worst = (1..times.len() - 1)
        .into_par_iter()
        .map(|n| {
            let t = times[n];
            let h = times[n + 1] - times[n - 1];
            let u1 = &approx.u1a.frames[n];
            let u1_zz = linalg::second_derivative(z, &u1.values);
            let r1: Vec<f64> = (0..z.len())
                .map(|iz| {
                    let dt = (approx.u1a.frames[n + 1].values[iz] - approx.u1a.frames[n - 1].values[iz]) / h;
                    rho[iz] * dt - eps * u1_zz[iz] - rho[iz] * s.f1.eval(t, 0.0, z[iz])
                        - rem.a.frames[n].values[iz]
                        - rem.b.frames[n].values[iz]
                })
                .collect();
            let u2 = &approx.u2a.frames[n];
            let lap: Vec<f64> = u2.dx(2).values.iter().zip(&u2.dzz().values).map(|(p, q)| p + q).collect();
            let u2_x = u2.dx(1).values;
            let r2: Vec<f64> = (0..z.len() * nx)
                .map(|k| {
                    let (iz, ix) = (k / nx, k % nx);
                    let dt = (approx.u2a.frames[n + 1].values[k] - approx.u2a.frames[n - 1].values[k]) / h;
                    rho[iz] * dt - eps * lap[k] + rho[iz] * u1.values[iz] * u2_x[k]
                        - rho[iz] * s.f2.eval(t, x[ix], z[iz])
                        - rem.c.frames[n].values[k]
                        - rem.d.frames[n].values[k]
                        - rem.e.frames[n].values[k]
                })
                .collect();
            let g = u1.grid.clone();
            let n1 = Field1D { grid: g.clone(), values: r1, t }.l2_norm();
            let n2 = Field2D { grid: g, values: r2, t }.l2_norm();
            (n1, n2)
        })
        .reduce(|| (0.0, 0.0), |p, q| (p.0.max(q.0), p.1.max(q.1)));
    Ok(ResidualIdentity { u1: worst.0, u2: worst.1 })
}
