//! Composite approximation at one viscosity: error norms against the viscous
//! solution, remainder sizes and the residual identity check.

use prandtl_channel::analysis::{solve_point, CorrectorPair, PipelineOptions};
use prandtl_channel::composer::{evaluate_remainders, residual_identity};
use prandtl_channel::scenario::catalog::{build, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = build("channel", &Params::new(), None)?;
    let eps = 2f64.powi(-10);
    let opts = PipelineOptions::default();
    let pair = CorrectorPair::solve(&s, &opts)?;
    let p = solve_point(&s, eps, &opts, &pair)?;
    let r = &p.report;
    println!("eps = {eps:e}");
    println!(
        "u - u~a: L2 {:.4e}  H1 {:.4e}  Linf {:.4e}",
        r.err_vs_approx.l2, r.err_vs_approx.h1, r.err_vs_approx.linf
    );
    println!("u - u0:  L2 {:.4e}  (interior H1 {:.4e}, Linf {:.4e})", r.err_vs_euler_l2, r.interior_h1, r.interior_linf);
    println!("boundary defect {:.2e}, anisotropic ratio {:.4}", r.boundary_defect, r.sobolev.ratio);
    for (name, v) in &r.remainder_norms {
        println!("  {name}: {v:.4e}");
    }
    let rem = evaluate_remainders(&s, &p.euler, &pair.lower, &pair.upper, eps)?;
    let id = residual_identity(&s, &p.approx, &rem)?;
    println!("residual identity (finite-difference consistency): u1 {:.3e}, u2 {:.3e}", id.u1, id.u2);
    Ok(())
}
