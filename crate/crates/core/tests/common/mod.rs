//! Independent reference solutions shared by the integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use prandtl_channel::composer::{assemble_approximation, evaluate_remainders, residual_identity, ResidualIdentity};
use prandtl_channel::euler::solve_euler;
use prandtl_channel::fields::Grid2D;
use prandtl_channel::prandtl::{solve_correctors, CorrectorOptions};
use prandtl_channel::scenario::catalog::{build, Params};
use prandtl_channel::scenario::{Scenario, Side};

/// `u2^0(t, x, z)` by tracing the characteristic through `(t, x)` back to
/// `t = 0` with classical RK4 on `(xi, u1, J)`:
/// `xi' = u1`, `u1' = f1`, `J' = f2(s, xi, z)`.
pub fn characteristics_u2(s: &Scenario, t: f64, x: f64, z: f64, steps: usize) -> f64 {
    let f1 = |r: f64| s.f1.eval(r, 0.0, z);
    let h = t / steps as f64;
    // u1 at time t: quadrature of f1 (RK4 reduces to Simpson here)
    let mut u1 = s.a.eval(0.0, 0.0, z);
    for k in 0..steps {
        let r = k as f64 * h;
        u1 += h / 6.0 * (f1(r) + 4.0 * f1(r + 0.5 * h) + f1(r + h));
    }
    let rhs = |r: f64, st: [f64; 3]| [st[1], f1(r), s.f2.eval(r, st[0], z)];
    let mut st = [x, u1, 0.0];
    let h = -h;
    for k in 0..steps {
        let r = t + k as f64 * h;
        let k1 = rhs(r, st);
        let k2 = rhs(r + 0.5 * h, add(st, k1, 0.5 * h));
        let k3 = rhs(r + 0.5 * h, add(st, k2, 0.5 * h));
        let k4 = rhs(r + h, add(st, k3, h));
        for i in 0..3 {
            st[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    // J was accumulated backward from 0 at s = t
    s.b.eval(0.0, st[0], z) - st[2]
}

fn add(a: [f64; 3], b: [f64; 3], h: f64) -> [f64; 3] {
    [a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]]
}

/// Half-line heat solution with a unit wall jump at `t = 0`.
pub fn erfc_profile(z: f64, t: f64, diffusivity: f64) -> f64 {
    libm::erfc(z / (2.0 * (diffusivity * t).sqrt()))
}

/// Residual identity of the composite approximation on a uniform channel
/// grid whose nodes coincide with the layer nodes (`z_j = sqrt(eps) Z_j`).
pub fn residual_identity_at(eps: f64, dzeta: f64, nt: usize) -> ResidualIdentity {
    let s = build("uniform-stream", &Params::new(), None).unwrap();
    let nz = (1.0 / (eps.sqrt() * dzeta)).round() as usize + 1;
    let grid = Arc::new(Grid2D::uniform(8, nz, s.length).unwrap());
    let e = solve_euler(&s, grid, nt).unwrap();
    let o = CorrectorOptions { dz: dzeta, ..Default::default() };
    let lo = solve_correctors(&s, Side::Lower, 8, nt, &o).unwrap();
    let up = solve_correctors(&s, Side::Upper, 8, nt, &o).unwrap();
    let a = assemble_approximation(&e, &lo, &up, eps).unwrap();
    let r = evaluate_remainders(&s, &e, &lo, &up, eps).unwrap();
    residual_identity(&s, &a, &r).unwrap()
}

/// Observed orders between consecutive errors of a halving sequence.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
