//! Wall-layer correctors on the truncated half-line `Z in [0, Z_max]`.
//!
//! For a wall with density `rho_w` and outer traces `u1^0(t; i)`,
//! `d_x u2^0(t; x, i)`:
//!
//! `rho_w d_t th1 - d_ZZ th1 = 0`,
//! `rho_w d_t th2 - d_ZZ th2 + (u1^0 + th1) rho_w d_x th2 + rho_w d_x u2^0 th1 = 0`,
//!
//! with zero initial data, the boundary mismatch at `Z = 0` and zero at
//! `Z_max`. Neither equation involves the viscosity, so one solve serves a
//! whole sweep. The density carries no layer and has no corrector.

pub(crate) mod derivs;
mod weighted;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{wall_trace, WallTrace};
use crate::fields::{uniform_stamps, HalfLineField, HalfLineField2D, HalfLineGrid, TimeSeries};
use crate::scenario::{Scenario, Side};
use crate::spectral::XTransform;
use crate::stepping::{cn_step, Stencil, Workspace};

pub use weighted::{weighted_report, WeightedEntry, WeightedReport, NORM_KINDS};

/// Half-line discretization of the corrector problems.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrectorOptions {
    pub z_max: f64,
    pub dz: f64,
    /// Solver steps per stamp interval.
    pub substeps: usize,
    /// Largest accepted `|g(0)|`.
    pub compat_tol: f64,
    /// Skip the `g(0) = 0` check (for deliberately incompatible data).
    #[serde(skip)]
    pub allow_incompatible: bool,
}

impl Default for CorrectorOptions {
    fn default() -> Self {
        Self { z_max: 20.0, dz: 0.01, substeps: 1, compat_tol: 1e-10, allow_incompatible: false }
    }
}

/// Time levels of a solve: `nt` stamp intervals, each split into `substeps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeLevels {
    pub horizon: f64,
    pub nt: usize,
    pub substeps: usize,
}

impl TimeLevels {
    pub fn new(horizon: f64, nt: usize, substeps: usize) -> Result<Self> {
        if nt == 0 || substeps == 0 || !(horizon > 0.0) {
            return Err(Error::domain("time levels need a positive horizon and step counts"));
        }
        Ok(Self { horizon, nt, substeps })
    }

    pub fn count(&self) -> usize {
        self.nt * self.substeps + 1
    }

    pub fn dt(&self) -> f64 {
        self.horizon / (self.nt * self.substeps) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        uniform_stamps(self.horizon, self.nt * self.substeps)
    }

    pub fn stamps(&self) -> Vec<f64> {
        uniform_stamps(self.horizon, self.nt)
    }
}

/// Lower or upper corrector pair as time series on the half-line.
#[derive(Clone, Debug)]
pub struct CorrectorSet {
    pub side: Side,
    pub rho_wall: f64,
    /// `d_z rho0` at the wall.
    pub rho_wall_slope: f64,
    pub zgrid: Arc<HalfLineGrid>,
    pub nx: usize,
    pub length: f64,
    pub theta1: TimeSeries<HalfLineField>,
    pub theta2: TimeSeries<HalfLineField2D>,
    /// Outer traces at the wall, sampled at the stamps.
    pub traces: WallTrace,
}

fn check_start(name: &str, v: f64, opts: &CorrectorOptions) -> Result<()> {
    if !opts.allow_incompatible && v.abs() > opts.compat_tol {
        return Err(Error::Compatibility(format!(
            "{name}(0) = {v:.3e} exceeds the tolerance {:.1e}",
            opts.compat_tol
        )));
    }
    Ok(())
}

/// Heat equation `rho_w d_t th1 = d_ZZ th1` with `th1(t, 0) = g1(t)`.
///
/// `g1` is sampled at every solver level (`levels.count()` values); the
/// result holds the stamps only.
pub fn solve_theta1(
    rho_wall: f64,
    g1: &[f64],
    zgrid: Arc<HalfLineGrid>,
    levels: TimeLevels,
    opts: &CorrectorOptions,
) -> Result<TimeSeries<HalfLineField>> {
    let all = solve_theta1_levels(rho_wall, g1, &zgrid, levels, opts)?;
    let stamps = levels.stamps();
    let frames = stamps
        .iter()
        .enumerate()
        .map(|(n, &t)| HalfLineField::new(zgrid.clone(), all[n * levels.substeps].clone(), t))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(stamps, frames)
}

fn solve_theta1_levels(
    rho_wall: f64,
    g1: &[f64],
    zgrid: &HalfLineGrid,
    levels: TimeLevels,
    opts: &CorrectorOptions,
) -> Result<Vec<Vec<f64>>> {
    if g1.len() != levels.count() {
        return Err(Error::domain("wall data must cover every time level"));
    }
    if !(rho_wall > 0.0) {
        return Err(Error::domain(format!("wall density {rho_wall} must be positive")));
    }
    check_start("g1", g1[0], opts)?;
    let n = zgrid.len();
    let st = Stencil::new(zgrid.nodes(), |_| 1.0 / rho_wall);
    let zero = vec![0.0; n];
    let mut ws = Workspace::<f64>::new(n);
    let mut v = vec![0.0; n];
    v[0] = g1[0];
    let dt = levels.dt();
    let mut out = Vec::with_capacity(levels.count());
    out.push(v.clone());
    for l in 1..levels.count() {
        cn_step(&st, 0.0, &zero, &zero, dt, &mut v, &zero, &zero, (g1[l], 0.0), &mut ws, f64::abs)?;
        out.push(v.clone());
    }
    Ok(out)
}

/// Outer traces and mismatch data a `theta2` solve needs, at every level.
#[derive(Clone, Debug)]
pub struct Theta2Data<'a> {
    /// `th1` at every level.
    pub theta1: &'a [Vec<f64>],
    /// `u1^0(t; i)` at every level.
    pub u1_wall: &'a [f64],
    /// `d_x u2^0(t; x, i)` rows at every level.
    pub u2x_wall: &'a [Vec<f64>],
    /// `g2(t, x)` rows at every level.
    pub g2: &'a [Vec<f64>],
}

/// Advected layer equation for `th2`, solved mode by mode in `x`.
pub fn solve_theta2(
    rho_wall: f64,
    data: Theta2Data<'_>,
    zgrid: Arc<HalfLineGrid>,
    length: f64,
    levels: TimeLevels,
    opts: &CorrectorOptions,
) -> Result<TimeSeries<HalfLineField2D>> {
    let count = levels.count();
    if data.theta1.len() != count || data.u1_wall.len() != count || data.u2x_wall.len() != count || data.g2.len() != count {
        return Err(Error::domain("theta2 inputs must cover every time level"));
    }
    let nx = data.g2[0].len();
    if nx < 4 {
        return Err(Error::domain("theta2 needs at least 4 x points"));
    }
    let g2_start = data.g2[0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    check_start("g2", g2_start, opts)?;
    let nzz = zgrid.len();
    let tr = XTransform::new(nx, length);
    let nm = tr.modes();
    let st = Stencil::new(zgrid.nodes(), |_| 1.0 / rho_wall);
    let dt = levels.dt();
    let i = Complex64::new(0.0, 1.0);
    let czero = Complex64::new(0.0, 0.0);

    let g2_hat: Vec<Vec<Complex64>> = data.g2.iter().map(|row| tr.forward(row)).collect();
    let s_hat: Vec<Vec<Complex64>> = data.u2x_wall.iter().map(|row| tr.forward(row)).collect();
    // state[k][j]
    let mut state = vec![vec![czero; nzz]; nm];
    for k in 0..nm {
        state[k][0] = g2_hat[0][k];
    }
    let stamps = levels.stamps();
    let to_field = |state: &[Vec<Complex64>], t: f64| -> Result<HalfLineField2D> {
        let mut values = Vec::with_capacity(nzz * nx);
        let mut c = vec![czero; nm];
        for j in 0..nzz {
            for k in 0..nm {
                c[k] = state[k][j];
            }
            values.extend(tr.inverse(&c));
        }
        HalfLineField2D::new(zgrid.clone(), nx, length, values, t)
    };
    let mut frames = vec![to_field(&state, 0.0)?];
    let mut ws = Workspace::<Complex64>::new(nzz);
    for l in 1..count {
        let (th_old, th_new) = (&data.theta1[l - 1], &data.theta1[l]);
        for k in 0..nm {
            let kappa = if nx % 2 == 0 && k == nx / 2 { 0.0 } else { tr.kappa(k) };
            let shift = |lv: usize, th: &[f64]| -> Vec<Complex64> {
                th.iter().map(|&t| i * (kappa * (data.u1_wall[lv] + t))).collect()
            };
            let src = |lv: usize, th: &[f64]| -> Vec<Complex64> {
                th.iter().map(|&t| -(s_hat[lv][k] * t)).collect()
            };
            cn_step(
                &st,
                0.0,
                &shift(l - 1, th_old),
                &shift(l, th_new),
                dt,
                &mut state[k],
                &src(l - 1, th_old),
                &src(l, th_new),
                (g2_hat[l][k], czero),
                &mut ws,
                |c: Complex64| c.norm(),
            )?;
        }
        if l % levels.substeps == 0 {
            frames.push(to_field(&state, stamps[l / levels.substeps])?);
        }
    }
    TimeSeries::new(stamps, frames)
}

/// Solves both correctors of one wall for the scenario's boundary mismatch.
pub fn solve_correctors(
    s: &Scenario,
    side: Side,
    nx: usize,
    nt: usize,
    opts: &CorrectorOptions,
) -> Result<CorrectorSet> {
    let levels = TimeLevels::new(s.horizon, nt, opts.substeps)?;
    let zgrid = Arc::new(HalfLineGrid::new(opts.z_max, opts.dz)?);
    let rho_wall = s.rho(side.wall());
    if rho_wall < s.c0 {
        return Err(Error::Precondition(format!("wall density {rho_wall} below c0 = {}", s.c0)));
    }
    let rho_wall_slope = s.rho0.partial(0, 0, 1, 0.0, 0.0, side.wall());
    let trace = wall_trace(s, side, nt * opts.substeps, nx)?;
    let times = levels.times();
    let xs: Vec<f64> = (0..nx).map(|j| s.length * j as f64 / nx as f64).collect();
    let g1: Vec<f64> = times.iter().zip(&trace.u1).map(|(&t, u)| s.beta1_at(side, t) - u).collect();
    let g2: Vec<Vec<f64>> = times
        .iter()
        .zip(&trace.u2)
        .map(|(&t, row)| row.iter().zip(&xs).map(|(u, &x)| s.beta2_at(side, t, x) - u).collect())
        .collect();
    let th1_levels = solve_theta1_levels(rho_wall, &g1, &zgrid, levels, opts)?;
    let theta2 = solve_theta2(
        rho_wall,
        Theta2Data { theta1: &th1_levels, u1_wall: &trace.u1, u2x_wall: &trace.u2_x, g2: &g2 },
        zgrid.clone(),
        s.length,
        levels,
        opts,
    )?;
    let stamps = levels.stamps();
    let m = levels.substeps;
    let theta1 = TimeSeries::new(
        stamps.clone(),
        stamps
            .iter()
            .enumerate()
            .map(|(n, &t)| HalfLineField::new(zgrid.clone(), th1_levels[n * m].clone(), t))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let pick = |v: &Vec<f64>| -> Vec<f64> { (0..=nt).map(|n| v[n * m]).collect() };
    let pick_rows = |v: &Vec<Vec<f64>>| -> Vec<Vec<f64>> { (0..=nt).map(|n| v[n * m].clone()).collect() };
    let traces = WallTrace {
        side,
        times: stamps,
        nx,
        length: s.length,
        u1: pick(&trace.u1),
        u1_z: pick(&trace.u1_z),
        u2: pick_rows(&trace.u2),
        u2_x: pick_rows(&trace.u2_x),
        u2_xz: pick_rows(&trace.u2_xz),
    };
    Ok(CorrectorSet {
        side,
        rho_wall,
        rho_wall_slope,
        zgrid,
        nx,
        length: s.length,
        theta1,
        theta2,
        traces,
    })
}

impl CorrectorSet {
    /// Largest `L^2` norm over the interior stamps of the discrete residual of
    /// the `th2` equation, with centred differences in `t` and `Z`.
    pub fn theta2_residual(&self) -> f64 {
        let times = &self.theta2.times;
        let nt = times.len();
        if nt < 3 {
            return 0.0;
        }
        let tr = XTransform::new(self.nx, self.length);
        let h = self.zgrid.dz();
        let nzz = self.zgrid.len();
        let nx = self.nx;
        let rho = self.rho_wall;
        let mut worst: f64 = 0.0;
        for n in 1..nt - 1 {
            let dt2 = times[n + 1] - times[n - 1];
            let th = &self.theta2.frames[n];
            let dx_th = tr.derivative_rows(&th.values, 1);
            let th1 = &self.theta1.frames[n].values;
            let u1w = self.traces.u1[n];
            let u2x = &self.traces.u2_x[n];
            let mut r = vec![0.0; nzz * nx];
            for j in 1..nzz - 1 {
                for ix in 0..nx {
                    let idx = j * nx + ix;
                    let dt_th = (self.theta2.frames[n + 1].values[idx] - self.theta2.frames[n - 1].values[idx]) / dt2;
                    let dzz = (th.values[idx - nx] - 2.0 * th.values[idx] + th.values[idx + nx]) / (h * h);
                    r[idx] = rho * dt_th - dzz + (u1w + th1[j]) * rho * dx_th[idx] + rho * u2x[ix] * th1[j];
                }
            }
            let f = HalfLineField2D::new(self.zgrid.clone(), nx, self.length, r, times[n]).expect("sizes match");
            worst = worst.max(f.weighted_l2(0));
        }
        worst
    }
}
