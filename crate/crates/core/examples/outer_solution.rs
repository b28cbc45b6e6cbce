//! Outer (Euler) solution of the channel scenario: wall traces and the
//! boundary mismatch the correctors have to absorb.

use std::sync::Arc;

use prandtl_channel::euler::{solve_euler, wall_trace};
use prandtl_channel::fields::{FieldNorms, Grid2D};
use prandtl_channel::scenario::catalog::{build, Params};
use prandtl_channel::scenario::{boundary_mismatch, Side};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = build("channel", &Params::new(), None)?;
    let grid = Arc::new(Grid2D::uniform(16, 65, s.length)?);
    let e = solve_euler(&s, grid, 100)?;
    println!("{:>6} {:>12} {:>12}", "t", "max|u1|", "max|u2|");
    for n in (0..e.u1.len()).step_by(20) {
        println!("{:>6.2} {:>12.5e} {:>12.5e}", e.u1.times[n], e.u1.frames[n].linf_norm(), e.u2.frames[n].linf_norm());
    }
    for side in Side::BOTH {
        let w = wall_trace(&s, side, 100, 16)?;
        let m = boundary_mismatch(&s, &e, side)?;
        let g1 = m.g1.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let g2 = m.g2.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        println!(
            "{side} wall at t = 1: u1 = {:.5}, d_z u1 = {:.5}; max |g1| = {g1:.5}, max |g2| = {g2:.5}",
            w.u1[100], w.u1_z[100]
        );
    }
    Ok(())
}
