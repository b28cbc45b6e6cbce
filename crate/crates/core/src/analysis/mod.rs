//! Error fields, the norms tracked against the viscosity, and rate fits.

mod fit;
mod sweep;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::composer::{assemble_approximation, evaluate_remainders, ApproxSolution};
use crate::error::{Error, Result};
use crate::euler::{solve_euler, EulerSolution};
use crate::fields::{
    anisotropic_sobolev_series, interior_restrict, Field1D, Field2D, FieldNorms, GridPolicy, SobolevCheck,
    TimeSeries,
};
use crate::prandtl::{solve_correctors, CorrectorOptions, CorrectorSet};
use crate::report::fmt_num;
use crate::scenario::{Scenario, Side};
use crate::viscous::{solve_viscous, StepOptions, ViscousSolution};

pub use fit::{fit_rate, RateFit};
pub use sweep::{run_sweep, FitRow, SweepOptions, SweepReport};

/// Quantities tracked along a sweep, in report order.
pub const QUANTITIES: [&str; 12] = [
    "l2_approx",
    "h1_approx",
    "linf_approx",
    "l2_euler",
    "h1_interior",
    "linf_interior",
    "corrector_l2",
    "A",
    "B",
    "C",
    "D",
    "E",
];

/// Slope range a fitted rate must fall in, with the fit quality required.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeBar {
    pub quantity: &'static str,
    pub min: f64,
    pub max: f64,
}

/// Least fit quality and point count for an asserted slope.
pub const MIN_R2: f64 = 0.98;
pub const MIN_FIT_POINTS: usize = 5;

/// Rate bars checked by `sweep`.
pub const SLOPE_BARS: [SlopeBar; 12] = [
    SlopeBar { quantity: "l2_euler", min: 0.20, max: 0.35 },
    SlopeBar { quantity: "corrector_l2", min: 0.20, max: 0.30 },
    SlopeBar { quantity: "l2_approx", min: 0.70, max: f64::INFINITY },
    SlopeBar { quantity: "h1_approx", min: 0.20, max: f64::INFINITY },
    SlopeBar { quantity: "linf_approx", min: 0.45, max: f64::INFINITY },
    SlopeBar { quantity: "h1_interior", min: 0.20, max: f64::INFINITY },
    SlopeBar { quantity: "linf_interior", min: 0.45, max: f64::INFINITY },
    SlopeBar { quantity: "A", min: 0.70, max: f64::INFINITY },
    SlopeBar { quantity: "D", min: 0.70, max: f64::INFINITY },
    SlopeBar { quantity: "B", min: 1.0, max: f64::INFINITY },
    SlopeBar { quantity: "E", min: 1.0, max: f64::INFINITY },
    SlopeBar { quantity: "C", min: 1.5, max: f64::INFINITY },
];

impl SlopeBar {
    /// Pass/fail with a one-line explanation.
    pub fn check(&self, row: Option<&FitRow>) -> (bool, String) {
        let range = if self.max.is_finite() {
            format!("[{:.2}, {:.2}]", self.min, self.max)
        } else {
            format!(">= {:.2}", self.min)
        };
        let Some(fit) = row.and_then(|r| r.fit) else {
            let why = row.and_then(|r| r.note.clone()).unwrap_or_else(|| "not tracked".into());
            return (false, format!("{}: no fit ({why}), needs slope {range}", self.quantity));
        };
        let ok = fit.slope >= self.min
            && fit.slope <= self.max
            && fit.r2 >= MIN_R2
            && fit.n_points >= MIN_FIT_POINTS;
        (
            ok,
            format!(
                "{}: slope {:.3} (needs {range}), R2 {:.4} (needs >= {MIN_R2}), {} points (needs >= {MIN_FIT_POINTS})",
                self.quantity, fit.slope, fit.r2, fit.n_points
            ),
        )
    }
}

/// `L^inf`-in-time norms of one vector field `(u1, u2)` on the channel.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NormSet {
    pub l2: f64,
    pub h1: f64,
    pub linf: f64,
}

/// Relative change of each quantity against a run at doubled resolution.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResolutionAudit {
    pub ratios: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl ResolutionAudit {
    /// A quantity passes when it was audited and changed by less than `threshold`.
    pub fn passes(&self, quantity: &str, threshold: f64) -> bool {
        self.ratios.get(quantity).is_some_and(|r| *r < threshold)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub epsilon: f64,
    /// `u^eps - u~a`
    pub err_vs_approx: NormSet,
    /// `||u^eps - u^0||_{L^inf(L^2)}`
    pub err_vs_euler_l2: f64,
    pub delta: f64,
    /// `u^eps - u^0` on `z in [delta, 1 - delta]`.
    pub interior_h1: f64,
    pub interior_linf: f64,
    /// `||u~a - u^0||_{L^inf(L^2)}`, the composed layer terms in physical variables.
    pub corrector_l2: f64,
    /// `max_t ||R||_{L^2}` for `R = A, ..., E`.
    pub remainder_norms: Vec<(String, f64)>,
    /// Anisotropic interpolation check on `u2^eps - u2~a`.
    pub sobolev: SobolevCheck,
    /// Wall and initial identities of the composite approximation.
    pub boundary_defect: f64,
    pub audit: ResolutionAudit,
}

impl ErrorReport {
    pub fn quantity(&self, name: &str) -> Option<f64> {
        Some(match name {
            "l2_approx" => self.err_vs_approx.l2,
            "h1_approx" => self.err_vs_approx.h1,
            "linf_approx" => self.err_vs_approx.linf,
            "l2_euler" => self.err_vs_euler_l2,
            "h1_interior" => self.interior_h1,
            "linf_interior" => self.interior_linf,
            "corrector_l2" => self.corrector_l2,
            _ => return self.remainder_norms.iter().find(|(n, _)| n == name).map(|(_, v)| *v),
        })
    }

    /// Columns `eps,quantity,norm`; audit ratios appear as `audit.<quantity>`
    /// rows and the interpolation check as `sobolev_ratio`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("eps,quantity,norm\n");
        self.write_rows(&mut s);
        s
    }

    pub(crate) fn write_rows(&self, s: &mut String) {
        let e = fmt_num(self.epsilon);
        for q in QUANTITIES {
            if let Some(v) = self.quantity(q) {
                let _ = writeln!(s, "{e},{q},{}", fmt_num(v));
            }
        }
        let _ = writeln!(s, "{e},sobolev_ratio,{}", fmt_num(self.sobolev.ratio));
        let _ = writeln!(s, "{e},boundary_defect,{}", fmt_num(self.boundary_defect));
        for (q, r) in &self.audit.ratios {
            let _ = writeln!(s, "{e},audit.{q},{}", fmt_num(*r));
        }
    }
}

fn same_grid(a: &Field1D, b: &Field1D) -> bool {
    Arc::ptr_eq(&a.grid, &b.grid) || a.grid == b.grid
}

// Vector norms of (u1, u2) at one stamp; u1 is constant in x.
fn vector_norms(u1: &Field1D, u2: &Field2D) -> NormSet {
    let l1 = u1.lift();
    let sq = |a: f64, b: f64| (a * a + b * b).sqrt();
    NormSet {
        l2: sq(l1.l2_norm(), u2.l2_norm()),
        h1: sq(l1.h1_norm(), u2.h1_norm()),
        linf: u1.linf_norm().max(u2.linf_norm()),
    }
}

fn max_norms(a: NormSet, b: NormSet) -> NormSet {
    NormSet { l2: a.l2.max(b.l2), h1: a.h1.max(b.h1), linf: a.linf.max(b.linf) }
}

/// Error norms of one viscous run against the composite and outer solutions.
/// Remainder norms and the audit are filled in by the pipeline.
pub fn compute_errors(
    viscous: &ViscousSolution,
    approx: &ApproxSolution,
    euler: &EulerSolution,
    delta: f64,
) -> Result<ErrorReport> {
    if viscous.u1.times != approx.u1a.times || viscous.u1.times != euler.u1.times {
        return Err(Error::domain("viscous, composite and outer solutions have different stamps"));
    }
    if !same_grid(&viscous.u1.frames[0], &approx.u1a.frames[0]) || !same_grid(&viscous.u1.frames[0], &euler.u1.frames[0])
    {
        return Err(Error::domain("viscous, composite and outer solutions live on different grids"));
    }
    let mut approx_n = NormSet::default();
    let mut euler_l2: f64 = 0.0;
    let mut int_h1: f64 = 0.0;
    let mut int_linf: f64 = 0.0;
    let mut corr: f64 = 0.0;
    let mut u2_err = Vec::with_capacity(viscous.u1.len());
    for n in 0..viscous.u1.len() {
        let (v1, v2) = (&viscous.u1.frames[n], &viscous.u2.frames[n]);
        let (a1, a2) = (&approx.u1a.frames[n], &approx.u2a.frames[n]);
        let (o1, o2) = (&euler.u1.frames[n], &euler.u2.frames[n]);
        let e2 = v2.sub(a2)?;
        approx_n = max_norms(approx_n, vector_norms(&v1.sub(a1)?, &e2));
        u2_err.push(e2);
        let (d1, d2) = (v1.sub(o1)?, v2.sub(o2)?);
        euler_l2 = euler_l2.max(vector_norms(&d1, &d2).l2);
        let i1 = interior_restrict(&d1.lift(), delta)?;
        let i2 = interior_restrict(&d2, delta)?;
        let sq = |a: f64, b: f64| (a * a + b * b).sqrt();
        int_h1 = int_h1.max(sq(i1.h1_norm(), i2.h1_norm()));
        int_linf = int_linf.max(i1.linf_norm().max(i2.linf_norm()));
        corr = corr.max(vector_norms(&a1.sub(o1)?, &a2.sub(o2)?).l2);
    }
    let sobolev = anisotropic_sobolev_series(&TimeSeries::new(viscous.u2.times.clone(), u2_err)?)?;
    Ok(ErrorReport {
        epsilon: viscous.epsilon,
        err_vs_approx: approx_n,
        err_vs_euler_l2: euler_l2,
        delta,
        interior_h1: int_h1,
        interior_linf: int_linf,
        corrector_l2: corr,
        remainder_norms: Vec::new(),
        sobolev,
        boundary_defect: 0.0,
        audit: ResolutionAudit { ratios: BTreeMap::new(), warnings: viscous.diagnostics.warnings.clone() },
    })
}

/// Discretization knobs shared by every point of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOptions {
    pub policy: GridPolicy,
    /// Stamps per horizon.
    pub nt: usize,
    /// Viscous solver steps per stamp.
    pub substeps: usize,
    pub corrector: CorrectorOptions,
    /// Interior band half-width.
    pub delta: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { policy: GridPolicy::default(), nt: 200, substeps: 1, corrector: CorrectorOptions::default(), delta: 0.25 }
    }
}

impl PipelineOptions {
    /// Doubled resolution in `z`, `Z` and `t`.
    pub fn refined(&self) -> Self {
        Self {
            policy: self.policy.refined(),
            nt: 2 * self.nt,
            corrector: CorrectorOptions { dz: 0.5 * self.corrector.dz, ..self.corrector.clone() },
            ..self.clone()
        }
    }
}

/// Lower and upper correctors, solved once and shared by every viscosity.
#[derive(Clone, Debug)]
pub struct CorrectorPair {
    pub lower: Arc<CorrectorSet>,
    pub upper: Arc<CorrectorSet>,
}

impl CorrectorPair {
    /// Both walls, solved concurrently.
    pub fn solve(s: &Scenario, opts: &PipelineOptions) -> Result<Self> {
        let (lo, up) = rayon::join(
            || solve_correctors(s, Side::Lower, opts.policy.nx, opts.nt, &opts.corrector),
            || solve_correctors(s, Side::Upper, opts.policy.nx, opts.nt, &opts.corrector),
        );
        Ok(Self { lower: Arc::new(lo?), upper: Arc::new(up?) })
    }
}

/// Everything one viscosity produces.
#[derive(Clone, Debug)]
pub struct PointResult {
    pub report: ErrorReport,
    pub euler: EulerSolution,
    pub viscous: ViscousSolution,
    pub approx: ApproxSolution,
}

/// Outer, viscous and composite solutions at one viscosity, with all norms.
pub fn solve_point(
    s: &Scenario,
    eps: f64,
    opts: &PipelineOptions,
    correctors: &CorrectorPair,
) -> Result<PointResult> {
    let grid = Arc::new(opts.policy.build(eps, s.length)?);
    let euler = solve_euler(s, grid.clone(), opts.nt)?;
    let viscous = solve_viscous(s, eps, grid, opts.nt, StepOptions { substeps: opts.substeps })?;
    let approx = assemble_approximation(&euler, &correctors.lower, &correctors.upper, eps)?;
    let rem = evaluate_remainders(s, &euler, &correctors.lower, &correctors.upper, eps)?;
    let mut report = compute_errors(&viscous, &approx, &euler, opts.delta)?;
    report.boundary_defect = approx.boundary_defect(s, &euler);
    report.remainder_norms = rem.linf_l2().iter().map(|(n, v)| (n.to_string(), *v)).collect();
    Ok(PointResult { report, euler, viscous, approx })
}

/// Fills the audit of `base` with the relative change of every quantity
/// against `fine`.
pub fn audit_against(base: &mut ErrorReport, fine: &ErrorReport) {
    for q in QUANTITIES {
        let (Some(a), Some(b)) = (base.quantity(q), fine.quantity(q)) else { continue };
        let r = if b == 0.0 && a == 0.0 { 0.0 } else { (a - b).abs() / b.abs() };
        base.audit.ratios.insert(q.to_string(), r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::catalog::{build, Params};

    fn small() -> PipelineOptions {
        PipelineOptions {
            policy: GridPolicy { nz: 32, layer_nodes: 24, ..Default::default() },
            nt: 40,
            ..Default::default()
        }
    }

    #[test]
    fn zero_data_gives_zero_norms() {
        let s = build("zero", &Params::new(), None).unwrap();
        let o = small();
        let c = CorrectorPair::solve(&s, &o).unwrap();
        let p = solve_point(&s, 1e-3, &o, &c).unwrap();
        for q in QUANTITIES {
            assert_eq!(p.report.quantity(q), Some(0.0), "{q}");
        }
    }

    #[test]
    fn identical_fields_give_zero_approx_error() {
        let s = build("channel", &Params::new(), None).unwrap();
        let o = small();
        let c = CorrectorPair::solve(&s, &o).unwrap();
        let p = solve_point(&s, 2f64.powi(-8), &o, &c).unwrap();
        let mut v = p.viscous.clone();
        v.u1 = p.approx.u1a.clone();
        v.u2 = p.approx.u2a.clone();
        let r = compute_errors(&v, &p.approx, &p.euler, 0.25).unwrap();
        assert_eq!(r.err_vs_approx, NormSet::default());
        // and the composite beats the outer solution on the true run
        assert!(p.report.err_vs_approx.l2 < p.report.err_vs_euler_l2);
    }

    #[test]
    fn mismatched_stamps_rejected() {
        let s = build("channel", &Params::new(), None).unwrap();
        let o = small();
        let c = CorrectorPair::solve(&s, &o).unwrap();
        let p = solve_point(&s, 1e-3, &o, &c).unwrap();
        let other = solve_euler(&s, p.euler.grid.clone(), 20).unwrap();
        assert!(compute_errors(&p.viscous, &p.approx, &other, 0.25).is_err());
    }
}
