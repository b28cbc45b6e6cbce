//! Prandtl-type correctors of the channel scenario on the half-line, with
//! their weighted norms. The correctors do not depend on the viscosity.

use prandtl_channel::fields::FieldNorms;
use prandtl_channel::prandtl::{solve_correctors, weighted_report, CorrectorOptions};
use prandtl_channel::scenario::catalog::{build, Params};
use prandtl_channel::scenario::Side;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = build("channel", &Params::new(), None)?;
    let opts = CorrectorOptions::default();
    for side in Side::BOTH {
        let c = solve_correctors(&s, side, 8, 200, &opts)?;
        let last = c.theta1.len() - 1;
        println!(
            "{side} wall: rho = {}, |th1(1)|_inf = {:.4e}, |th2(1)|_inf = {:.4e}, CN residual {:.2e}",
            c.rho_wall,
            c.theta1.frames[last].linf_norm(),
            c.theta2.frames[last].linf_norm(),
            c.theta2_residual()
        );
        let (l1, l2) = c.l2_sizes();
        println!("  max_t |th1|_L2 = {l1:.4e}, max_t |th2|_L2 = {l2:.4e}");
        let w = weighted_report(&c, &[0, 2, 4], &[0, 1], 1e6);
        for e in w.entries.iter().filter(|e| e.norm_kind == "linf_l2") {
            println!("  {} l={} i={}: {:.4e}", e.quantity, e.l, e.i, e.value);
        }
    }
    Ok(())
}
