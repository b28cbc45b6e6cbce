//! Composite approximation `u^0 + psi(z) th(z/sqrt(eps)) + psi(1-z) th^u((1-z)/sqrt(eps))`
//! and the remainder fields it leaves in the viscous equations.

mod remainders;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euler::EulerSolution;
use crate::fields::{Field1D, Field2D, Grid2D, TimeSeries};
use crate::prandtl::CorrectorSet;
use crate::scenario::{Scenario, Side};

pub use remainders::{evaluate_remainders, residual_identity, RemainderFields, ResidualIdentity};

/// Plateau function: 1 on `[0, lo]`, 0 on `[hi, 1]`, quintic smoothstep in between.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cutoff {
    pub lo: f64,
    pub hi: f64,
    /// `s^3 (c0 + c1 s + c2 s^2)` is the rising part of the transition.
    pub coeffs: [f64; 3],
}

impl Default for Cutoff {
    fn default() -> Self {
        Self { lo: 1.0 / 3.0, hi: 0.5, coeffs: [10.0, -15.0, 6.0] }
    }
}

impl Cutoff {
    /// `psi^(order)(z)` for `order <= 2`.
    pub fn eval(&self, z: f64, order: usize) -> Result<f64> {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::domain(format!("cutoff argument {z} outside [0, 1]")));
        }
        if order > 2 {
            return Err(Error::domain(format!("cutoff derivative of order {order} not available")));
        }
        Ok(self.eval_unchecked(z, order))
    }

    fn eval_unchecked(&self, z: f64, order: usize) -> f64 {
        if z <= self.lo {
            return if order == 0 { 1.0 } else { 0.0 };
        }
        if z >= self.hi {
            return 0.0;
        }
        let w = self.hi - self.lo;
        let s = (z - self.lo) / w;
        let [a, b, c] = self.coeffs;
        // rise(s) = a s^3 + b s^4 + c s^5
        match order {
            0 => 1.0 - s * s * s * (a + s * (b + s * c)),
            1 => -s * s * (3.0 * a + s * (4.0 * b + 5.0 * c * s)) / w,
            _ => -s * (6.0 * a + s * (12.0 * b + 20.0 * c * s)) / (w * w),
        }
    }
}

/// `psi^(order)(z)` of the default cutoff.
pub fn cutoff_psi(z: f64, order: usize) -> Result<f64> {
    Cutoff::default().eval(z, order)
}

/// Composite approximation at the stamps of the outer solution.
#[derive(Clone, Debug)]
pub struct ApproxSolution {
    pub epsilon: f64,
    pub u1a: TimeSeries<Field1D>,
    pub u2a: TimeSeries<Field2D>,
}

pub(crate) fn check_inputs(
    euler: &EulerSolution,
    lower: &CorrectorSet,
    upper: &CorrectorSet,
    eps: f64,
) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("viscosity {eps} must be positive")));
    }
    if lower.side != Side::Lower || upper.side != Side::Upper {
        return Err(Error::domain("corrector sets passed for the wrong walls"));
    }
    for c in [lower, upper] {
        if c.theta1.times != euler.u1.times || c.theta2.times != euler.u2.times {
            return Err(Error::domain(format!("{} corrector stamps differ from the outer solution", c.side)));
        }
        if c.nx != euler.grid.nx() || c.length != euler.grid.length() {
            return Err(Error::domain(format!("{} corrector x-grid differs from the channel grid", c.side)));
        }
    }
    Ok(())
}

/// Layer variable and cutoff weight of each node, per wall.
pub(crate) struct LayerMap {
    /// `(Z, psi(z))` for the lower wall, `(Z^u, psi(1 - z))` for the upper.
    pub(crate) nodes: [Vec<(f64, f64)>; 2],
}

impl LayerMap {
    pub(crate) fn new(grid: &Grid2D, cutoff: &Cutoff, eps: f64) -> Self {
        let r = eps.sqrt();
        let lower = grid.z().iter().map(|&z| (z / r, cutoff.eval_unchecked(z, 0))).collect();
        let upper = grid.z().iter().map(|&z| ((1.0 - z) / r, cutoff.eval_unchecked(1.0 - z, 0))).collect();
        Self { nodes: [lower, upper] }
    }
}

/// Evaluates the correctors at `z / sqrt(eps)` and `(1 - z) / sqrt(eps)` by
/// cubic interpolation (zero beyond `Z_max`), applies the cutoffs and adds
/// the outer solution.
pub fn assemble_approximation(
    euler: &EulerSolution,
    lower: &CorrectorSet,
    upper: &CorrectorSet,
    eps: f64,
) -> Result<ApproxSolution> {
    check_inputs(euler, lower, upper, eps)?;
    let grid = euler.grid.clone();
    let map = LayerMap::new(&grid, &Cutoff::default(), eps);
    let nx = grid.nx();
    let frames: Vec<(Field1D, Field2D)> = (0..euler.u1.len())
        .into_par_iter()
        .map(|n| {
            let mut u1 = euler.u1.frames[n].values.clone();
            let mut u2 = euler.u2.frames[n].values.clone();
            let mut row = vec![0.0; nx];
            for (c, nodes) in [lower, upper].into_iter().zip(&map.nodes) {
                let th1 = &c.theta1.frames[n];
                let th2 = &c.theta2.frames[n];
                for (iz, &(zeta, psi)) in nodes.iter().enumerate() {
                    if psi == 0.0 {
                        continue;
                    }
                    u1[iz] += psi * th1.sample(zeta);
                    th2.sample_row(zeta, &mut row);
                    for (u, r) in u2[iz * nx..(iz + 1) * nx].iter_mut().zip(&row) {
                        *u += psi * r;
                    }
                }
            }
            let t = euler.u1.times[n];
            (Field1D { grid: grid.clone(), values: u1, t }, Field2D { grid: grid.clone(), values: u2, t })
        })
        .collect();
    let (f1, f2): (Vec<_>, Vec<_>) = frames.into_iter().unzip();
    Ok(ApproxSolution {
        epsilon: eps,
        u1a: TimeSeries::new(euler.u1.times.clone(), f1)?,
        u2a: TimeSeries::new(euler.u2.times.clone(), f2)?,
    })
}

impl ApproxSolution {
    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.u1a.frames[0].grid
    }

    /// Largest deviation from the wall data at any stamp and from the outer
    /// solution's initial state (zero-initial correctors leave it unchanged).
    pub fn boundary_defect(&self, s: &Scenario, euler: &EulerSolution) -> f64 {
        let grid = self.grid();
        let nz = grid.nz();
        let x = grid.x_nodes();
        let mut worst: f64 = 0.0;
        for (n, &t) in self.u1a.times.iter().enumerate() {
            for (side, iz) in [(Side::Lower, 0), (Side::Upper, nz - 1)] {
                worst = worst.max((self.u1a.frames[n].values[iz] - s.beta1_at(side, t)).abs());
                for (ix, &xi) in x.iter().enumerate() {
                    worst = worst.max((self.u2a.frames[n].get(iz, ix) - s.beta2_at(side, t, xi)).abs());
                }
            }
        }
        let pairs = self.u1a.frames[0].values.iter().zip(&euler.u1.frames[0].values);
        let pairs2 = self.u2a.frames[0].values.iter().zip(&euler.u2.frames[0].values);
        for (a, b) in pairs.chain(pairs2) {
            worst = worst.max((a - b).abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::solve_euler;
    use crate::fields::GridPolicy;
    use crate::prandtl::{solve_correctors, CorrectorOptions};
    use crate::scenario::catalog::{build, Params};

    #[test]
    fn cutoff_plateaus_and_domain() {
        let c = Cutoff::default();
        assert_eq!(c.eval(0.2, 0).unwrap(), 1.0);
        assert_eq!(c.eval(0.2, 1).unwrap(), 0.0);
        assert_eq!(c.eval(0.75, 0).unwrap(), 0.0);
        assert!(c.eval(-0.1, 0).is_err());
        assert!(c.eval(1.1, 0).is_err());
        for k in 0..=10_000 {
            let z = k as f64 / 10_000.0;
            let p = c.eval(z, 0).unwrap();
            assert!((0.0..=1.0).contains(&p));
            assert_eq!(p * c.eval(1.0 - z, 0).unwrap(), 0.0);
        }
    }

    #[test]
    fn cutoff_derivatives_match_differences() {
        let c = Cutoff::default();
        let h = 1e-5;
        for k in 1..40 {
            let z = 1.0 / 3.0 + k as f64 / 240.0;
            let d1 = (c.eval(z + h, 0).unwrap() - c.eval(z - h, 0).unwrap()) / (2.0 * h);
            let d2 = (c.eval(z + h, 1).unwrap() - c.eval(z - h, 1).unwrap()) / (2.0 * h);
            assert!((d1 - c.eval(z, 1).unwrap()).abs() < 1e-6);
            assert!((d2 - c.eval(z, 2).unwrap()).abs() < 1e-4);
        }
        // C^2 junctions
        for z in [1.0 / 3.0, 0.5] {
            for o in 1..=2 {
                assert!(c.eval(z, o).unwrap().abs() < 1e-12);
            }
        }
    }

    fn channel_parts(eps: f64, nt: usize) -> (EulerSolution, CorrectorSet, CorrectorSet) {
        let s = build("channel", &Params::new(), None).unwrap();
        let grid = Arc::new(GridPolicy { nz: 64, layer_nodes: 32, ..Default::default() }.build(eps, s.length).unwrap());
        let e = solve_euler(&s, grid, nt).unwrap();
        let o = CorrectorOptions::default();
        let lo = solve_correctors(&s, Side::Lower, 8, nt, &o).unwrap();
        let up = solve_correctors(&s, Side::Upper, 8, nt, &o).unwrap();
        (e, lo, up)
    }

    #[test]
    fn boundary_and_initial_identities() {
        let s = build("channel", &Params::new(), None).unwrap();
        let (e, lo, up) = channel_parts(1e-3, 40);
        let a = assemble_approximation(&e, &lo, &up, 1e-3).unwrap();
        let x = a.grid().x_nodes();
        let nz = a.grid().nz();
        for (n, &t) in a.u1a.times.iter().enumerate() {
            let u1 = &a.u1a.frames[n].values;
            assert!((u1[0] - s.beta1_at(Side::Lower, t)).abs() < 1e-12);
            assert!((u1[nz - 1] - s.beta1_at(Side::Upper, t)).abs() < 1e-12);
            let u2 = &a.u2a.frames[n];
            for (ix, &xi) in x.iter().enumerate() {
                assert!((u2.get(0, ix) - s.beta2_at(Side::Lower, t, xi)).abs() < 1e-12);
                assert!((u2.get(nz - 1, ix) - s.beta2_at(Side::Upper, t, xi)).abs() < 1e-12);
            }
        }
        for (v, w) in a.u2a.frames[0].values.iter().zip(&e.u2.frames[0].values) {
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn stamp_mismatch_rejected() {
        let (e, lo, _) = channel_parts(1e-3, 20);
        let (_, _, up) = channel_parts(1e-3, 10);
        assert!(assemble_approximation(&e, &lo, &up, 1e-3).is_err());
        assert!(assemble_approximation(&e, &lo, &lo, 1e-3).is_err());
    }
}
