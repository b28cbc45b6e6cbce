//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Built with `harness = false` so the lines are always
//! printed.
//!
//! The rate criteria share one audited sweep of the default channel scenario
//! over eps = 2^-6 ... 2^-14.

mod common;

use std::sync::Arc;
use std::time::Instant;

use prandtl_channel::analysis::{run_sweep, CorrectorPair, PipelineOptions, SweepOptions, SweepReport, SLOPE_BARS};
use prandtl_channel::composer::Cutoff;
use prandtl_channel::euler::{solve_euler_u1, solve_euler_u2};
use prandtl_channel::fields::{Grid2D, GridPolicy, HalfLineGrid};
use prandtl_channel::prandtl::{solve_theta1, weighted_report, CorrectorOptions, TimeLevels};
use prandtl_channel::scenario::catalog::{build, Params};
use prandtl_channel::viscous::{solve_viscous, solve_viscous_u1, solve_viscous_u2, StepOptions};

use common::{characteristics_u2, erfc_profile, observed_orders, residual_identity_at};

struct Outcome {
    ok: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { ok: true, lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.ok &= ok;
        self.lines.push(format!("{} {line}", if ok { "pass" } else { "fail" }));
    }
}

fn bars(sweep: &SweepReport, quantities: &[&str]) -> Outcome {
    let mut out = Outcome::new();
    for q in quantities {
        let bar = SLOPE_BARS.iter().find(|b| b.quantity == *q).expect("slope bar");
        let (ok, line) = bar.check(sweep.fit(q));
        out.check(ok, line);
    }
    out
}

fn weighted_suite(sweep: &SweepReport) -> Outcome {
    let mut out = Outcome::new();
    let entries = sweep.weighted.iter().flat_map(|w| &w.entries);
    let finite = entries.clone().all(|e| e.value.is_finite());
    let count = entries.count();
    out.check(finite, format!("{count} weighted entries (l = 0..4, i = 0..2, both walls) finite"));
    out.check(
        sweep.weighted_identical && sweep.corrector_reuse,
        format!(
            "entries identical across the sweep: {}, corrector series shared: {}",
            sweep.weighted_identical, sweep.corrector_reuse
        ),
    );

    let s = build("channel", &Params::new(), None).unwrap();
    let base = PipelineOptions::default();
    let mut wide = base.clone();
    wide.corrector.z_max *= 2.0;
    let opts = SweepOptions::default();
    let near = CorrectorPair::solve(&s, &base).unwrap();
    let far = CorrectorPair::solve(&s, &wide).unwrap();
    let mut worst: f64 = 0.0;
    for (a, b) in [(&near.lower, &far.lower), (&near.upper, &far.upper)] {
        let wa = weighted_report(a, &opts.weighted_l, &opts.weighted_i, opts.weighted_ceiling);
        let wb = weighted_report(b, &opts.weighted_l, &opts.weighted_i, opts.weighted_ceiling);
        for e in &wa.entries {
            let other = wb.get(e.quantity, e.l, e.i, e.norm_kind).expect("matching entry");
            worst = worst.max((e.value - other).abs());
        }
    }
    out.check(worst < 1e-8, format!("Z_max 20 -> 40 changes entries by at most {worst:.2e} (needs < 1e-8)"));
    out
}

fn oracle_suite() -> Outcome {
    let mut out = Outcome::new();

    // erfc against the corrector heat solver
    let rho = 2.0;
    let opts = CorrectorOptions { dz: 0.01, allow_incompatible: true, ..Default::default() };
    let zgrid = Arc::new(HalfLineGrid::new(opts.z_max, opts.dz).unwrap());
    let levels = TimeLevels::new(1.0, 100, 20).unwrap();
    let g1: Vec<f64> = (0..levels.count()).map(|l| if l == 0 { 0.0 } else { 1.0 }).collect();
    let th = solve_theta1(rho, &g1, zgrid.clone(), levels, &opts).unwrap();
    let mut worst: f64 = 0.0;
    for f in th.frames.iter().filter(|f| f.t >= 0.1) {
        for (v, &z) in f.values.iter().zip(zgrid.nodes()) {
            worst = worst.max((v - erfc_profile(z, f.t, 1.0 / rho)).abs());
        }
    }
    out.check(worst < 1e-3, format!("theta1 vs erfc for t >= 0.1: {worst:.2e} (needs < 1e-3)"));

    // erfc against the viscous u1 solver, layer far from the upper wall
    let eps = 1e-3;
    let s = build("heat-step", &Params::new(), None).unwrap();
    let grid = Arc::new(Grid2D::uniform(4, 2001, s.length).unwrap());
    let u1 = solve_viscous_u1(&s, eps, grid.clone(), 4000).unwrap();
    let mut worst: f64 = 0.0;
    for f in u1.frames.iter().filter(|f| f.t >= 0.1) {
        for (v, &z) in f.values.iter().zip(grid.z()) {
            worst = worst.max((v - erfc_profile(z, f.t, eps / s.rho(z))).abs());
        }
    }
    out.check(worst < 1e-3, format!("viscous u1 vs erfc (eps = 1e-3, t >= 0.1): {worst:.2e} (needs < 1e-3)"));

    // characteristics
    let mut worst: f64 = 0.0;
    for id in ["channel", "uniform-stream", "translation"] {
        let s = build(id, &Params::new(), None).unwrap();
        let grid = Arc::new(Grid2D::uniform(8, 17, s.length).unwrap());
        let nt = 20;
        let u1 = solve_euler_u1(&s, grid.clone(), nt).unwrap();
        let u2 = solve_euler_u2(&s, &u1, grid.clone(), nt).unwrap();
        for f in &u2.frames {
            for (iz, &z) in grid.z().iter().enumerate() {
                for ix in 0..grid.nx() {
                    let exact = characteristics_u2(&s, f.t, grid.x(ix), z, 2000);
                    worst = worst.max((f.get(iz, ix) - exact).abs());
                }
            }
        }
    }
    out.check(worst < 1e-10, format!("Euler u2 vs characteristics (3 scenarios): {worst:.2e} (needs < 1e-10)"));

    // manufactured solution for u2
    let eps = 1e-2;
    let s = build("manufactured-sine", &Params::from([("eps".to_string(), eps)]), None).unwrap();
    let k = 2.0 * std::f64::consts::PI / s.length;
    let mut errors = Vec::new();
    for level in 0..4 {
        let nz = 16 * (1 << level) + 1;
        let nt = 10 * (1 << level);
        let grid = Arc::new(Grid2D::uniform(8, nz, s.length).unwrap());
        let u1 = solve_viscous_u1(&s, eps, grid.clone(), nt).unwrap();
        let u2 = solve_viscous_u2(&s, eps, &u1, grid.clone(), nt).unwrap();
        let mut err: f64 = 0.0;
        for f in &u2.frames {
            for (iz, &z) in grid.z().iter().enumerate() {
                for ix in 0..grid.nx() {
                    let exact = (k * grid.x(ix)).sin() * (std::f64::consts::PI * z).sin() * (1.0 + f.t);
                    err = err.max((f.get(iz, ix) - exact).abs());
                }
            }
        }
        errors.push(err);
    }
    let orders = observed_orders(&errors);
    let least = orders.iter().copied().fold(f64::INFINITY, f64::min);
    out.check(
        least >= 1.8,
        format!("manufactured u2: max errors {} orders {} (needs >= 1.8)", fmt_sci(&errors), fmt_list(&orders)),
    );
    out
}

fn invariant_suite(sweep: &SweepReport) -> Outcome {
    let mut out = Outcome::new();

    let defect = sweep.reports.iter().map(|r| r.boundary_defect).fold(0.0, f64::max);
    out.check(defect < 1e-12, format!("boundary/initial identities over the sweep: {defect:.2e} (needs < 1e-12)"));

    let c = Cutoff::default();
    let mut exact = true;
    for k in 0..=10_000 {
        let z = k as f64 / 10_000.0;
        let p = c.eval(z, 0).unwrap();
        let q = c.eval(1.0 - z, 0).unwrap();
        exact &= (0.0..=1.0).contains(&p) && p * q == 0.0;
        if z <= c.lo {
            exact &= p == 1.0 && c.eval(z, 1).unwrap() == 0.0 && c.eval(z, 2).unwrap() == 0.0;
        }
        if z >= c.hi {
            exact &= p == 0.0 && c.eval(z, 1).unwrap() == 0.0 && c.eval(z, 2).unwrap() == 0.0;
        }
    }
    out.check(exact, "cutoff partition identities at 10001 points".to_string());

    let s = build("constant-state", &Params::new(), None).unwrap();
    let eps = 2f64.powi(-14);
    let grid = Arc::new(GridPolicy::default().build(eps, s.length).unwrap());
    let v = solve_viscous(&s, eps, grid, 200, StepOptions::default()).unwrap();
    let drift1 = v.u1.frames.iter().flat_map(|f| &f.values).map(|u| (u - 1.0).abs()).fold(0.0, f64::max);
    let drift2 = v.u2.frames.iter().flat_map(|f| &f.values).map(|u| (u - 0.5).abs()).fold(0.0, f64::max);
    let drift = drift1.max(drift2);
    out.check(drift < 1e-10, format!("constant state on the graded eps = 2^-14 grid: {drift:.2e} (needs < 1e-10)"));

    let eps = 2f64.powi(-8);
    let ids: Vec<_> = [(0.1, 25), (0.05, 100), (0.025, 400)]
        .iter()
        .map(|&(dz, nt)| residual_identity_at(eps, dz, nt))
        .collect();
    let o1 = observed_orders(&ids.iter().map(|r| r.u1).collect::<Vec<_>>());
    let o2 = observed_orders(&ids.iter().map(|r| r.u2).collect::<Vec<_>>());
    let least = o1.iter().chain(&o2).copied().fold(f64::INFINITY, f64::min);
    out.check(
        least >= 1.8,
        format!("residual identity orders u1 {} u2 {} (needs >= 1.8)", fmt_list(&o1), fmt_list(&o2)),
    );
    out
}

fn sobolev(sweep: &SweepReport) -> Outcome {
    let mut out = Outcome::new();
    let spread = sweep.sobolev_spread();
    let ratios: Vec<f64> = sweep.reports.iter().map(|r| r.sobolev.ratio).collect();
    out.check(
        spread < 2.0 && ratios.iter().all(|r| r.is_finite()),
        format!("anisotropic ratios {} spread {spread:.3} (needs < 2)", fmt_list(&ratios)),
    );
    out
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.3}")).collect();
    format!("[{}]", items.join(", "))
}

fn fmt_sci(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", items.join(", "))
}

fn main() {
    let start = Instant::now();
    let s = build("channel", &Params::new(), None).unwrap();
    let eps: Vec<f64> = (6..=14).map(|k| 2f64.powi(-k)).collect();
    let sweep = run_sweep(&s, &eps, &PipelineOptions::default(), &SweepOptions::default()).expect("default sweep");
    println!("default sweep finished in {:.1}s", start.elapsed().as_secs_f64());

    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 outer-solution rate", bars(&sweep, &["l2_euler"])),
        ("2 corrector scaling", bars(&sweep, &["corrector_l2"])),
        ("3 composite error bounds", bars(&sweep, &["l2_approx", "h1_approx", "linf_approx"])),
        ("4 interior rates", bars(&sweep, &["h1_interior", "linf_interior"])),
        ("5 remainder scaling", bars(&sweep, &["A", "D", "B", "E", "C"])),
        ("6 weighted corrector norms", weighted_suite(&sweep)),
        ("7 oracle equivalences", oracle_suite()),
        ("8 structural invariants", invariant_suite(&sweep)),
        ("9 anisotropic inequality", sobolev(&sweep)),
    ];

    let mut failed = 0;
    for (name, o) in &criteria {
        println!("{} criterion {name}", if o.ok { "PASS" } else { "FAIL" });
        for l in &o.lines {
            println!("    {l}");
        }
        failed += usize::from(!o.ok);
    }
    println!(
        "acceptance: {} passed, {failed} failed ({:.1}s)",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
