//! Log-log rate fit of norms read from the command line (pairs `eps norm`),
//! or of a built-in example series when no arguments are given.

use prandtl_channel::analysis::fit_rate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (eps, norms): (Vec<f64>, Vec<f64>) = if args.is_empty() {
        (6..=14).map(|k| 2f64.powi(-k)).map(|e| (e, 0.3 * e.powf(0.25) + 0.05 * e)).unzip()
    } else {
        args.chunks_exact(2).map(|p| (p[0], p[1])).unzip()
    };
    let f = fit_rate(&eps, &norms)?;
    println!("slope {:.4}, intercept {:.4}, R2 {:.5}, {} points", f.slope, f.intercept, f.r2, f.n_points);
    Ok(())
}
