//! Viscosity sweep on the default channel scenario: prints every tracked
//! quantity and the fitted rates.

use prandtl_channel::analysis::{run_sweep, PipelineOptions, SweepOptions, QUANTITIES};
use prandtl_channel::scenario::catalog::{build, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let s = build("channel", &Params::new(), None)?;
    let eps: Vec<f64> = (6..=14).map(|k| 2f64.powi(-k)).collect();
    let start = std::time::Instant::now();
    let r = run_sweep(&s, &eps, &PipelineOptions::default(), &SweepOptions::default())?;
    println!("{:>10} {}", "eps", QUANTITIES.map(|q| format!("{q:>13}")).join(""));
    for rep in &r.reports {
        let row: String = QUANTITIES.iter().map(|q| format!("{:>13.4e}", rep.quantity(q).unwrap())).collect();
        println!("{:>10.3e} {row}", rep.epsilon);
        let audit: String = QUANTITIES.iter().map(|q| format!("{:>13.3}", rep.audit.ratios.get(*q).copied().unwrap_or(f64::NAN))).collect();
        println!("{:>10} {audit}", "audit");
    }
    for f in &r.fits {
        match &f.fit {
            Some(fit) => println!("{:>14}: slope {:.3}  R2 {:.4}  n {}", f.quantity, fit.slope, fit.r2, fit.n_points),
            None => println!("{:>14}: no fit ({})", f.quantity, f.note.as_deref().unwrap_or("")),
        }
    }
    println!("sobolev spread {:.3}", r.sobolev_spread());
    println!("monotone violations: {}", r.monotone_violations.len());
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
