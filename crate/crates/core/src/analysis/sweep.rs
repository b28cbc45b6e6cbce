use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use super::{audit_against, fit_rate, solve_point, CorrectorPair, ErrorReport, PipelineOptions, RateFit, QUANTITIES};
use crate::error::{Error, Result};
use crate::prandtl::{weighted_report, WeightedReport};
use crate::report::fmt_num;
use crate::scenario::Scenario;

/// Sweep-level knobs.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    /// Re-solve every point at doubled resolution and keep only quantities
    /// that changed by less than `audit_threshold`.
    pub audit: bool,
    pub audit_threshold: f64,
    pub weighted_l: Vec<u32>,
    pub weighted_i: Vec<u32>,
    pub weighted_ceiling: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            audit: true,
            audit_threshold: 0.1,
            weighted_l: (0..=4).collect(),
            weighted_i: vec![0, 1, 2],
            weighted_ceiling: 1e6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitRow {
    pub quantity: String,
    /// Viscosities that entered the fit.
    pub eps_used: Vec<f64>,
    pub fit: Option<RateFit>,
    /// Why no fit was produced.
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub eps_list: Vec<f64>,
    pub reports: Vec<ErrorReport>,
    pub fits: Vec<FitRow>,
    /// Every point used the same corrector series (pointer identity).
    pub corrector_reuse: bool,
    /// Weighted corrector norms of the lower and upper wall.
    pub weighted: [WeightedReport; 2],
    /// Weighted reports recomputed at every point agree bit for bit.
    pub weighted_identical: bool,
    /// Points where an error norm grew as the viscosity decreased.
    pub monotone_violations: Vec<String>,
}

impl SweepReport {
    pub fn fit(&self, quantity: &str) -> Option<&FitRow> {
        self.fits.iter().find(|f| f.quantity == quantity)
    }

    /// Largest over smallest anisotropic-inequality ratio along the sweep.
    pub fn sobolev_spread(&self) -> f64 {
        let r: Vec<f64> = self.reports.iter().map(|r| r.sobolev.ratio).collect();
        let hi = r.iter().copied().fold(0.0, f64::max);
        let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
        if lo > 0.0 { hi / lo } else { f64::INFINITY }
    }

    /// Columns `eps,quantity,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("eps,quantity,value\n");
        for r in &self.reports {
            r.write_rows(&mut s);
        }
        s
    }

    /// Columns `quantity,slope,intercept,r2,n_points`; empty fields when no fit exists.
    pub fn fits_csv(&self) -> String {
        let mut s = String::from("quantity,slope,intercept,r2,n_points\n");
        for f in &self.fits {
            match &f.fit {
                Some(r) => {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        f.quantity,
                        fmt_num(r.slope),
                        fmt_num(r.intercept),
                        fmt_num(r.r2),
                        r.n_points
                    );
                }
                None => {
                    let _ = writeln!(s, "{},,,,0", f.quantity);
                }
            }
        }
        s
    }

    /// Two-column `log eps, log norm` data for one quantity (all positive points).
    pub fn rate_data(&self, quantity: &str) -> String {
        let mut s = String::from("# log_eps log_norm\n");
        for r in &self.reports {
            if let Some(v) = r.quantity(quantity).filter(|v| *v > 0.0) {
                let _ = writeln!(s, "{} {}", fmt_num(r.epsilon.ln()), fmt_num(v.ln()));
            }
        }
        s
    }
}

fn check_eps_list(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::Config("eps_list is empty".into()));
    }
    if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::Config("eps_list entries must be positive".into()));
    }
    if eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Config("eps_list must be strictly decreasing".into()));
    }
    Ok(())
}

struct Point {
    report: ErrorReport,
    reused: bool,
    weighted: [WeightedReport; 2],
}

/// Solves the correctors once, runs every viscosity (concurrently), audits
/// each point against doubled resolution and fits a rate for every tracked
/// quantity over the audited points.
pub fn run_sweep(
    s: &Scenario,
    eps_list: &[f64],
    opts: &PipelineOptions,
    sweep: &SweepOptions,
) -> Result<SweepReport> {
    check_eps_list(eps_list)?;
    let shared = CorrectorPair::solve(s, opts)?;
    let fine_opts = opts.refined();
    let fine_shared = if sweep.audit { Some(CorrectorPair::solve(s, &fine_opts)?) } else { None };
    let weigh = |c: &CorrectorPair| -> [WeightedReport; 2] {
        [&c.lower, &c.upper].map(|side| weighted_report(side, &sweep.weighted_l, &sweep.weighted_i, sweep.weighted_ceiling))
    };
    let weighted = weigh(&shared);

    let points: Vec<Point> = eps_list
        .par_iter()
        .map(|&eps| -> Result<Point> {
            let pair = shared.clone();
            let mut report = solve_point(s, eps, opts, &pair)?.report;
            if let Some(f) = &fine_shared {
                let fine = solve_point(s, eps, &fine_opts, f)?.report;
                audit_against(&mut report, &fine);
            }
            for (q, r) in &report.audit.ratios {
                if *r >= sweep.audit_threshold {
                    log::warn!("eps = {eps:e}: {q} changes by {:.1}% under refinement", 100.0 * r);
                }
            }
            let reused = Arc::ptr_eq(&pair.lower, &shared.lower) && Arc::ptr_eq(&pair.upper, &shared.upper);
            Ok(Point { report, reused, weighted: weigh(&pair) })
        })
        .collect::<Result<Vec<_>>>()?;

    let corrector_reuse = points.iter().all(|p| p.reused);
    let weighted_identical = points.iter().all(|p| p.weighted == weighted);
    let reports: Vec<ErrorReport> = points.into_iter().map(|p| p.report).collect();
    let usable = |r: &ErrorReport, q: &str| !sweep.audit || r.audit.passes(q, sweep.audit_threshold);

    let mut fits = Vec::new();
    for q in QUANTITIES {
        let (eps, norms): (Vec<f64>, Vec<f64>) = reports
            .iter()
            .filter(|r| usable(r, q))
            .filter_map(|r| r.quantity(q).map(|v| (r.epsilon, v)))
            .unzip();
        let (fit, note) = match fit_rate(&eps, &norms) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        };
        fits.push(FitRow { quantity: q.to_string(), eps_used: eps, fit, note });
    }

    let mut monotone_violations = Vec::new();
    for q in ["l2_approx", "h1_approx", "linf_approx"] {
        let pts: Vec<(f64, f64)> = reports
            .iter()
            .filter(|r| usable(r, q))
            .filter_map(|r| r.quantity(q).map(|v| (r.epsilon, v)))
            .collect();
        for w in pts.windows(2) {
            if w[1].1 > w[0].1 {
                let msg = format!("{q} grows from {:.3e} at eps = {:e} to {:.3e} at eps = {:e}", w[0].1, w[0].0, w[1].1, w[1].0);
                log::warn!("{msg}");
                monotone_violations.push(msg);
            }
        }
    }

    Ok(SweepReport {
        eps_list: eps_list.to_vec(),
        reports,
        fits,
        corrector_reuse,
        weighted,
        weighted_identical,
        monotone_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::GridPolicy;
    use crate::scenario::catalog::{build, Params};

    #[test]
    fn eps_list_checks() {
        assert!(check_eps_list(&[]).is_err());
        assert!(check_eps_list(&[0.1, 0.2]).is_err());
        assert!(check_eps_list(&[0.1, 0.0]).is_err());
        assert!(check_eps_list(&[0.1, 0.05]).is_ok());
    }

    #[test]
    fn small_sweep_is_deterministic_and_reuses_correctors() {
        let s = build("channel", &Params::new(), None).unwrap();
        let opts = PipelineOptions {
            policy: GridPolicy { nz: 32, layer_nodes: 24, ..Default::default() },
            nt: 20,
            ..Default::default()
        };
        let sw = SweepOptions { audit: false, weighted_l: vec![0, 1], ..Default::default() };
        let eps = [2f64.powi(-6), 2f64.powi(-7), 2f64.powi(-8)];
        let a = run_sweep(&s, &eps, &opts, &sw).unwrap();
        let b = run_sweep(&s, &eps, &opts, &sw).unwrap();
        assert!(a.corrector_reuse && a.weighted_identical);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.fits_csv(), b.fits_csv());
        assert_eq!(a.fits.len(), QUANTITIES.len());
        assert!(a.fit("corrector_l2").unwrap().fit.is_some());
    }
}
