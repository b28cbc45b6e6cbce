//! Viscous solve of the channel scenario on the layer-graded mesh.

use std::sync::Arc;

use prandtl_channel::fields::{FieldNorms, GridPolicy};
use prandtl_channel::scenario::catalog::{build, Params};
use prandtl_channel::viscous::{solve_viscous, StepOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = build("channel", &Params::new(), None)?;
    let eps = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(1e-3);
    let grid = Arc::new(GridPolicy::default().build(eps, s.length)?);
    println!("eps = {eps:e}: nz = {}, smallest dz = {:.3e}", grid.nz(), grid.min_dz());
    let v = solve_viscous(&s, eps, grid, 200, StepOptions::default())?;
    let d = &v.diagnostics;
    println!("dt = {:.3e}, layer nodes {:?}, advective CFL {:.2}", d.dt, d.layer_nodes, d.advective_cfl);
    println!("largest tridiagonal residual {:.2e}", d.max_residual);
    for w in &d.warnings {
        println!("warning: {w}");
    }
    for n in (0..v.u2.len()).step_by(50) {
        println!("t = {:.2}: |u1|_L2 = {:.5e}, |u2|_L2 = {:.5e}", v.u1.times[n], v.u1.frames[n].l2_norm(), v.u2.frames[n].l2_norm());
    }
    Ok(())
}
