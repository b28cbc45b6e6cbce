//! Crank–Nicolson solver for the reduced viscous system
//!
//! `rho0 d_t u1 - eps d_zz u1 = rho0 f1`,
//! `rho0 d_t u2 - eps (d_xx + d_zz) u2 + rho0 u1 d_x u2 = rho0 f2`,
//!
//! with Dirichlet data at `z = 0, 1` and periodic `x`. Every coefficient is
//! independent of `x`, so `u2` is advanced one Fourier mode at a time: each
//! mode is a complex tridiagonal problem in `z` and the advection `i k u1`
//! is taken implicitly together with the diffusion.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{nodes_within, uniform_stamps, Field1D, Field2D, Grid2D, TimeSeries, };
use crate::fields::mesh::MIN_LAYER_NODES;
use crate::stepping::{cn_step, Stencil, Workspace};
use crate::scenario::{Scenario, Side};
use crate::spectral::XTransform;

/// Time-stepping knobs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOptions {
    /// Solver steps between consecutive stamps.
    pub substeps: usize,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self { substeps: 1 }
    }
}

/// Per-run bookkeeping.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ViscousDiagnostics {
    pub dt: f64,
    pub substeps: usize,
    /// Largest nodal change over each stamp interval (first entry is 0).
    pub max_step_change: Vec<f64>,
    /// Largest relative residual of the tridiagonal solves.
    pub max_residual: f64,
    /// `max |u1| dt / dx`; informational, the scheme has no advective limit.
    pub advective_cfl: f64,
    /// Nodes within `sqrt(eps)` of the lower and upper wall.
    pub layer_nodes: [usize; 2],
    pub warnings: Vec<String>,
}

/// Viscous solution on one grid.
#[derive(Clone, Debug)]
pub struct ViscousSolution {
    pub epsilon: f64,
    pub grid: Arc<Grid2D>,
    pub u1: TimeSeries<Field1D>,
    pub u2: TimeSeries<Field2D>,
    pub diagnostics: ViscousDiagnostics,
}

fn check_inputs(eps: f64, nt: usize, opts: StepOptions) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("viscosity {eps} must be positive")));
    }
    if nt == 0 || opts.substeps == 0 {
        return Err(Error::domain("step counts must be positive"));
    }
    Ok(())
}

fn layer_check(eps: f64, grid: &Grid2D, diag: &mut ViscousDiagnostics) {
    let w = eps.sqrt();
    let lower = nodes_within(grid.z(), w);
    let mirrored: Vec<f64> = grid.z().iter().rev().map(|z| 1.0 - z).collect();
    let upper = nodes_within(&mirrored, w);
    diag.layer_nodes = [lower, upper];
    for (side, n) in [(Side::Lower, lower), (Side::Upper, upper)] {
        if n < MIN_LAYER_NODES {
            let msg = format!(
                "unresolved layer: {n} nodes within sqrt(eps) = {w:.3e} of the {side} wall (< {MIN_LAYER_NODES})"
            );
            log::warn!("{msg}");
            diag.warnings.push(msg);
        }
    }
}

fn u1_wall(s: &Scenario, t: f64) -> (f64, f64) {
    (s.beta1_at(Side::Lower, t), s.beta1_at(Side::Upper, t))
}

/// Viscous `u1` at the stamps.
pub fn solve_viscous_u1(s: &Scenario, eps: f64, grid: Arc<Grid2D>, nt: usize) -> Result<TimeSeries<Field1D>> {
    let mut diag = ViscousDiagnostics::default();
    solve_u1_inner(s, eps, grid, nt, StepOptions::default(), &mut diag)
}

fn solve_u1_inner(
    s: &Scenario,
    eps: f64,
    grid: Arc<Grid2D>,
    nt: usize,
    opts: StepOptions,
    diag: &mut ViscousDiagnostics,
) -> Result<TimeSeries<Field1D>> {
    check_inputs(eps, nt, opts)?;
    let st = Stencil::new(grid.z(), |z| eps / s.rho(z));
    let z = grid.z().to_vec();
    let nz = z.len();
    let times = uniform_stamps(s.horizon, nt);
    let m = opts.substeps;
    let dt = s.horizon / (nt * m) as f64;
    let zero = vec![0.0; nz];
    let mut ws = Workspace::<f64>::new(nz);
    let mut v: Vec<f64> = z.iter().map(|&zi| s.a.eval(0.0, 0.0, zi)).collect();
    let (b0, b1) = u1_wall(s, 0.0);
    v[0] = b0;
    v[nz - 1] = b1;
    let mut frames = vec![Field1D::new(grid.clone(), v.clone(), 0.0)?];
    let forcing = |t: f64| -> Vec<f64> { z.iter().map(|&zi| s.f1.eval(t, 0.0, zi)).collect() };
    let mut f_old = forcing(0.0);
    let mut changes = vec![0.0];
    for n in 0..nt {
        let mut change: f64 = 0.0;
        for j in 0..m {
            let t_new = if j + 1 == m { times[n + 1] } else { times[n] + (j + 1) as f64 * dt };
            let f_new = forcing(t_new);
            let prev = v.clone();
            let r = cn_step(&st, 0.0, &zero, &zero, dt, &mut v, &f_old, &f_new, u1_wall(s, t_new), &mut ws, f64::abs)?;
            diag.max_residual = diag.max_residual.max(r);
            change = prev.iter().zip(&v).fold(change, |c, (a, b)| c.max((a - b).abs()));
            f_old = f_new;
        }
        changes.push(change);
        frames.push(Field1D::new(grid.clone(), v.clone(), times[n + 1])?);
    }
    diag.max_step_change = changes;
    TimeSeries::new(times, frames)
}

/// Viscous `u2` at the stamps, one step per stamp interval, with the advection
/// speed taken from `u1` at the stamps.
pub fn solve_viscous_u2(
    s: &Scenario,
    eps: f64,
    u1: &TimeSeries<Field1D>,
    grid: Arc<Grid2D>,
    nt: usize,
) -> Result<TimeSeries<Field2D>> {
    let mut diag = ViscousDiagnostics::default();
    if u1.times != uniform_stamps(s.horizon, nt) || u1.frames.iter().any(|f| *f.grid != *grid) {
        return Err(Error::domain("u1 series does not live on the requested grid and stamps"));
    }
    let speeds: Vec<&[f64]> = u1.frames.iter().map(|f| f.values.as_slice()).collect();
    solve_u2_inner(s, eps, &speeds, grid, nt, 1, &mut diag)
}

// `speeds` holds u1 at every solver time level (nt * substeps + 1 of them).
fn solve_u2_inner(
    s: &Scenario,
    eps: f64,
    speeds: &[&[f64]],
    grid: Arc<Grid2D>,
    nt: usize,
    substeps: usize,
    diag: &mut ViscousDiagnostics,
) -> Result<TimeSeries<Field2D>> {
    check_inputs(eps, nt, StepOptions { substeps })?;
    let st = Stencil::new(grid.z(), |z| eps / s.rho(z));
    let nx = grid.nx();
    let nz = grid.nz();
    let z = grid.z().to_vec();
    let xs = grid.x_nodes();
    let tr = XTransform::new(nx, grid.length());
    let nm = tr.modes();
    let times = uniform_stamps(s.horizon, nt);
    let dt = s.horizon / (nt * substeps) as f64;
    let level_time = |l: usize| -> f64 {
        if l % substeps == 0 {
            times[l / substeps]
        } else {
            l as f64 * dt
        }
    };

    // spectral state: modes[k][iz]
    let to_modes = |values: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![Complex64::new(0.0, 0.0); nz]; nm];
        let mut row = vec![0.0; nx];
        for iz in 0..nz {
            for (ix, r) in row.iter_mut().enumerate() {
                *r = values(iz, ix);
            }
            for (k, c) in tr.forward(&row).into_iter().enumerate() {
                out[k][iz] = c;
            }
        }
        out
    };
    let forcing = |t: f64| to_modes(&|iz, ix| s.f2.eval(t, xs[ix], z[iz]));
    let wall_modes = |t: f64| -> (Vec<Complex64>, Vec<Complex64>) {
        let lo: Vec<f64> = xs.iter().map(|&x| s.beta2_at(Side::Lower, t, x)).collect();
        let hi: Vec<f64> = xs.iter().map(|&x| s.beta2_at(Side::Upper, t, x)).collect();
        (tr.forward(&lo), tr.forward(&hi))
    };
    let to_field = |modes: &[Vec<Complex64>], t: f64| -> Result<Field2D> {
        let mut values = Vec::with_capacity(nx * nz);
        let mut c = vec![Complex64::new(0.0, 0.0); nm];
        for iz in 0..nz {
            for k in 0..nm {
                c[k] = modes[k][iz];
            }
            values.extend(tr.inverse(&c));
        }
        Field2D::new(grid.clone(), values, t)
    };

    let mut state = to_modes(&|iz, ix| s.b.eval(0.0, xs[ix], z[iz]));
    let (w0, w1) = wall_modes(0.0);
    for k in 0..nm {
        state[k][0] = w0[k];
        state[k][nz - 1] = w1[k];
    }
    let mut frames = vec![to_field(&state, 0.0)?];
    let mut f_old = forcing(0.0);
    let mut ws = Workspace::<Complex64>::new(nz);
    let i = Complex64::new(0.0, 1.0);
    let mut changes = vec![0.0];
    let mut vmax: f64 = 0.0;
    let mut prev_values = frames[0].values.clone();
    for n in 0..nt {
        for j in 0..substeps {
            let l_old = n * substeps + j;
            let t_new = level_time(l_old + 1);
            let f_new = forcing(t_new);
            let (w0, w1) = wall_modes(t_new);
            let u_old = speeds[l_old];
            let u_new = speeds[l_old + 1];
            vmax = u_new.iter().fold(vmax, |m, v| m.max(v.abs()));
            for k in 0..nm {
                // the Nyquist mode has no discrete x-derivative
                let kappa = if nx % 2 == 0 && k == nx / 2 { 0.0 } else { tr.kappa(k) };
                let k2 = tr.kappa(k).powi(2);
                let shift_old: Vec<Complex64> = u_old.iter().map(|&u| i * (kappa * u)).collect();
                let shift_new: Vec<Complex64> = u_new.iter().map(|&u| i * (kappa * u)).collect();
                let r = cn_step(
                    &st,
                    k2,
                    &shift_old,
                    &shift_new,
                    dt,
                    &mut state[k],
                    &f_old[k],
                    &f_new[k],
                    (w0[k], w1[k]),
                    &mut ws,
                    |c: Complex64| c.norm(),
                )?;
                diag.max_residual = diag.max_residual.max(r);
            }
            f_old = f_new;
        }
        let frame = to_field(&state, times[n + 1])?;
        let change = prev_values.iter().zip(&frame.values).fold(0.0f64, |c, (a, b)| c.max((a - b).abs()));
        changes.push(change);
        prev_values = frame.values.clone();
        frames.push(frame);
    }
    diag.advective_cfl = vmax * dt / grid.dx();
    if diag.max_step_change.len() == changes.len() {
        for (a, b) in diag.max_step_change.iter_mut().zip(changes) {
            *a = a.max(b);
        }
    } else {
        diag.max_step_change = changes;
    }
    TimeSeries::new(times, frames)
}

/// Solves for `u1` and `u2` together, sharing the inner time levels.
pub fn solve_viscous(
    s: &Scenario,
    eps: f64,
    grid: Arc<Grid2D>,
    nt: usize,
    opts: StepOptions,
) -> Result<ViscousSolution> {
    check_inputs(eps, nt, opts)?;
    let mut diag = ViscousDiagnostics { substeps: opts.substeps, ..Default::default() };
    diag.dt = s.horizon / (nt * opts.substeps) as f64;
    layer_check(eps, &grid, &mut diag);
    // u1 on every inner level; the stamps are every `substeps`-th level
    let fine = solve_u1_inner(s, eps, grid.clone(), nt * opts.substeps, StepOptions::default(), &mut diag)?;
    let speeds: Vec<&[f64]> = fine.frames.iter().map(|f| f.values.as_slice()).collect();
    let mut d1 = diag.clone();
    let u1_changes = std::mem::take(&mut d1.max_step_change);
    let u2 = solve_u2_inner(s, eps, &speeds, grid.clone(), nt, opts.substeps, &mut diag)?;
    let stamps = uniform_stamps(s.horizon, nt);
    let u1_frames: Vec<Field1D> = (0..=nt)
        .map(|n| {
            let mut f = fine.frames[n * opts.substeps].clone();
            f.t = stamps[n];
            f
        })
        .collect();
    // per-stamp change of u1 folded into the diagnostics
    let mut changes = diag.max_step_change.clone();
    for n in 1..=nt {
        let c = (1..=opts.substeps).map(|j| u1_changes[(n - 1) * opts.substeps + j]).fold(0.0, f64::max);
        changes[n] = changes[n].max(c);
    }
    diag.max_step_change = changes;
    Ok(ViscousSolution {
        epsilon: eps,
        grid,
        u1: TimeSeries::new(stamps.clone(), u1_frames)?,
        u2,
        diagnostics: diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldNorms;
    use crate::scenario::catalog::{build, Params};
    use crate::scenario::{SeparableFn, SpaceFactor as Sp, TimeFactor as Tf};
    use std::f64::consts::PI;

    fn grid(nx: usize, nz: usize, l: f64) -> Arc<Grid2D> {
        Arc::new(Grid2D::uniform(nx, nz, l).unwrap())
    }

    #[test]
    fn zero_and_constant_states() {
        let s = build("zero", &Params::new(), None).unwrap();
        let g = grid(8, 33, s.length);
        let v = solve_viscous(&s, 1e-2, g, 20, StepOptions::default()).unwrap();
        assert!(v.u1.frames.iter().all(|f| f.linf_norm() == 0.0));
        assert!(v.u2.frames.iter().all(|f| f.linf_norm() == 0.0));

        let s = build("constant-state", &Params::new(), None).unwrap();
        let g = grid(8, 33, s.length);
        let v = solve_viscous(&s, 1e-2, g, 20, StepOptions { substeps: 2 }).unwrap();
        for f in &v.u1.frames {
            assert!(f.values.iter().all(|x| (x - 1.0).abs() < 1e-10));
        }
        for f in &v.u2.frames {
            assert!(f.values.iter().all(|x| (x - 0.5).abs() < 1e-10));
        }
    }

    #[test]
    fn walls_are_pinned_exactly() {
        let s = build("channel", &Params::new(), None).unwrap();
        let g = grid(8, 65, s.length);
        let v = solve_viscous(&s, 1e-2, g.clone(), 20, StepOptions::default()).unwrap();
        for (f1, f2) in v.u1.frames.iter().zip(&v.u2.frames) {
            assert_eq!(f1.values[0], s.beta1_at(Side::Lower, f1.t));
            assert_eq!(f1.values[64], s.beta1_at(Side::Upper, f1.t));
            for ix in 0..8 {
                let x = g.x(ix);
                assert!((f2.get(0, ix) - s.beta2_at(Side::Lower, f2.t, x)).abs() < 1e-14);
                assert!((f2.get(64, ix) - s.beta2_at(Side::Upper, f2.t, x)).abs() < 1e-14);
            }
        }
        assert!(v.diagnostics.max_residual < 1e-12);
        assert!(!v.diagnostics.warnings.is_empty(), "coarse uniform grid must warn");
    }

    #[test]
    fn x_independent_u2_matches_heat_solver() {
        let base = build("channel", &Params::new(), None).unwrap();
        let mut s = base.clone();
        s.b = SeparableFn::profile(Sp::Sin(PI), 1.0);
        s.f2 = SeparableFn::zero().with(1.0, Tf::Sin(1.0), Sp::One, Sp::Sin(PI));
        s.beta2 = [
            SeparableFn::zero().with(1.0, Tf::OneMinusCos(1.0), Sp::One, Sp::One),
            SeparableFn::zero(),
        ];
        let g = grid(8, 65, s.length);
        let v = solve_viscous(&s, 1e-2, g.clone(), 40, StepOptions::default()).unwrap();
        let mut heat = s.clone();
        heat.a = s.b.clone();
        heat.f1 = s.f2.clone();
        heat.beta1 = s.beta2.clone();
        let h = solve_viscous_u1(&heat, 1e-2, g.clone(), 40).unwrap();
        for (f2, f1) in v.u2.frames.iter().zip(&h.frames) {
            for iz in 0..g.nz() {
                for ix in 0..8 {
                    assert!((f2.get(iz, ix) - f1.values[iz]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn max_principle_without_forcing() {
        let mut s = build("channel", &Params::new(), None).unwrap();
        s.f1 = SeparableFn::zero();
        s.a = SeparableFn::profile(Sp::Sin(PI), 0.3);
        let g = grid(4, 129, s.length);
        let u = solve_viscous_u1(&s, 1e-2, g, 100).unwrap();
        // data range: a in [0, 0.3], beta1 in [0, 1 - cos 1]
        let hi = 0.3f64.max(1.0 - 1f64.cos());
        for f in &u.frames {
            assert!(f.values.iter().all(|&v| v >= -1e-10 && v <= hi + 1e-10));
        }
    }

    #[test]
    fn split_and_joint_solves_agree() {
        let s = build("channel", &Params::new(), None).unwrap();
        let g = grid(8, 65, s.length);
        let joint = solve_viscous(&s, 1e-2, g.clone(), 30, StepOptions::default()).unwrap();
        let u1 = solve_viscous_u1(&s, 1e-2, g.clone(), 30).unwrap();
        let u2 = solve_viscous_u2(&s, 1e-2, &u1, g, 30).unwrap();
        for (a, b) in joint.u2.frames.iter().zip(&u2.frames) {
            assert_eq!(a.values, b.values);
        }
        // deterministic
        let again = solve_viscous(&s, 1e-2, joint.grid.clone(), 30, StepOptions::default()).unwrap();
        assert_eq!(again.u2.last().values, joint.u2.last().values);
    }
}
