//! Command layer behind the `prandtl-channel` binary.
//!
//! Exit status: 0 pass, 1 run or acceptance failure, 2 usage or config error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::{
    audit_against, run_sweep, solve_point, CorrectorPair, SweepReport, QUANTITIES, SLOPE_BARS,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::fields::write_field_dump;
use crate::prandtl::weighted_report;
use crate::scenario::{validate_scenario, Side};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Tolerance of the compatibility checks run by `validate`.
pub const COMPAT_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "prandtl-channel", version, about = "Boundary-layer rate experiments for variable-density channel flow")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check density floor, periodicity and compatibility of the scenario.
    Validate { config: PathBuf },
    /// Run the full pipeline for one viscosity.
    Solve {
        config: PathBuf,
        #[arg(long)]
        eps: f64,
        /// Write the viscous, composite and outer fields at the last stamp.
        #[arg(long)]
        dump_fields: bool,
    },
    /// Run the viscosity sweep, fit rates and check the slope bars.
    Sweep {
        config: PathBuf,
        /// Report fits without failing on slope bars.
        #[arg(long)]
        report_only: bool,
        /// Worker threads (default from the config, 0 = all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Parses `args` and runs the command; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Validate { config } => cmd_validate(&config),
        Command::Solve { config, eps, dump_fields } => cmd_solve(&config, eps, dump_fields),
        Command::Sweep { config, report_only, jobs } => cmd_sweep(&config, report_only, jobs),
    }
}

fn status_of(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidScenario { .. } => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn fail(e: Error) -> i32 {
    eprintln!("error: {e}");
    status_of(&e)
}

fn load(path: &Path) -> std::result::Result<RunConfig, i32> {
    RunConfig::load(path).map_err(fail)
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn eps_tag(eps: f64) -> String {
    format!("{eps:e}")
}

pub fn cmd_validate(path: &Path) -> i32 {
    let cfg = match load(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let report = match cfg.scenario().and_then(|s| validate_scenario(&s, COMPAT_TOL)) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    println!("{}", report.to_text());
    print!("{}", report.to_csv());
    if report.passed() { EXIT_OK } else { EXIT_FAIL }
}

pub fn cmd_solve(path: &Path, eps: f64, dump_fields: bool) -> i32 {
    let cfg = match load(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if !(eps > 0.0 && eps.is_finite()) {
        return fail(Error::Config(format!("--eps {eps} must be positive")));
    }
    match solve(&cfg, eps, dump_fields || cfg.output.dump_fields) {
        Ok(()) => EXIT_OK,
        Err(e) => fail(e),
    }
}

fn solve(cfg: &RunConfig, eps: f64, dump: bool) -> Result<()> {
    let s = cfg.scenario()?;
    let opts = cfg.pipeline();
    let pair = CorrectorPair::solve(&s, &opts)?;
    let point = solve_point(&s, eps, &opts, &pair)?;
    let mut report = point.report.clone();
    if cfg.sweep.audit {
        let fine_opts = opts.refined();
        let fine = solve_point(&s, eps, &fine_opts, &CorrectorPair::solve(&s, &fine_opts)?)?.report;
        audit_against(&mut report, &fine);
    }
    for w in &report.audit.warnings {
        eprintln!("warning: {w}");
    }
    let dir = &cfg.output.dir;
    let tag = eps_tag(eps);
    write(dir, &format!("errors_{tag}.csv"), &report.to_csv())?;
    if !report.audit.warnings.is_empty() {
        write(dir, &format!("audit_{tag}.txt"), &(report.audit.warnings.join("\n") + "\n"))?;
    }
    for (side, c) in [(Side::Lower, &pair.lower), (Side::Upper, &pair.upper)] {
        let w = weighted_report(c, &[0, 1, 2, 3, 4], &[0, 1, 2], cfg.analysis.weighted_ceiling);
        write(dir, &format!("weighted_{}.csv", side.name()), &w.to_csv())?;
    }
    if dump {
        let n = point.viscous.u2.len() - 1;
        let fields = [
            ("viscous_u2", &point.viscous.u2.frames[n]),
            ("approx_u2", &point.approx.u2a.frames[n]),
            ("euler_u2", &point.euler.u2.frames[n]),
        ];
        for (name, f) in fields {
            let mut file = std::io::BufWriter::new(std::fs::File::create(dir.join(format!("{name}_{tag}.dat")))?);
            write_field_dump(f, &mut file)?;
        }
    }
    println!("wrote {}", dir.join(format!("errors_{tag}.csv")).display());
    Ok(())
}

pub fn cmd_sweep(path: &Path, report_only: bool, jobs: Option<usize>) -> i32 {
    let cfg = match load(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let jobs = jobs.unwrap_or(cfg.output.jobs);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => return fail(Error::Config(format!("cannot start {jobs} workers: {e}"))),
    };
    let result = pool.install(|| -> Result<SweepReport> {
        let s = cfg.scenario()?;
        run_sweep(&s, &cfg.sweep.eps_list, &cfg.pipeline(), &cfg.sweep_options())
    });
    let report = match result {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if let Err(e) = write_sweep(&cfg.output.dir, &report) {
        return fail(e);
    }
    let mut ok = true;
    for bar in SLOPE_BARS {
        let (pass, line) = bar.check(report.fit(bar.quantity));
        println!("{} {line}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    }
    for v in &report.monotone_violations {
        println!("note: {v}");
    }
    for r in &report.reports {
        let failed: Vec<&str> = QUANTITIES
            .iter()
            .copied()
            .filter(|q| cfg.sweep.audit && !r.audit.passes(q, cfg.sweep.audit_threshold))
            .collect();
        if !failed.is_empty() {
            println!("note: eps = {:e} excluded from fits of {}", r.epsilon, failed.join(", "));
        }
    }
    if ok || report_only || cfg.sweep.report_only { EXIT_OK } else { EXIT_FAIL }
}

fn write_sweep(dir: &Path, r: &SweepReport) -> Result<()> {
    write(dir, "sweep.csv", &r.to_csv())?;
    write(dir, "fits.csv", &r.fits_csv())?;
    for (side, w) in Side::BOTH.iter().zip(&r.weighted) {
        write(dir, &format!("weighted_{}.csv", side.name()), &w.to_csv())?;
    }
    for q in QUANTITIES {
        write(dir, &format!("rate_{q}.dat"), &r.rate_data(q))?;
    }
    Ok(())
}
