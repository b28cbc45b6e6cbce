//! Problem instances and their structural checks.

pub mod catalog;
pub mod func;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::EulerSolution;
pub use func::{SeparableFn, SpaceFactor, Term, TimeFactor};

/// Which wall a boundary quantity belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Lower, Side::Upper];

    pub fn index(self) -> usize {
        match self {
            Side::Lower => 0,
            Side::Upper => 1,
        }
    }

    /// `z` coordinate of the wall.
    pub fn wall(self) -> f64 {
        match self {
            Side::Lower => 0.0,
            Side::Upper => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Data of one channel-flow problem.
///
/// All slots are separable functions of `(t, x, z)`; the ones that may not
/// depend on a variable (`rho0(z)`, `a(z)`, `f1(t, z)`, `beta1(t)`, ...) are
/// checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub rho0: SeparableFn,
    pub a: SeparableFn,
    pub b: SeparableFn,
    pub f1: SeparableFn,
    pub f2: SeparableFn,
    /// `beta1[side.index()]`
    pub beta1: [SeparableFn; 2],
    pub beta2: [SeparableFn; 2],
    pub length: f64,
    pub horizon: f64,
    pub c0: f64,
}

#[derive(Clone, Copy)]
struct Deps {
    t: bool,
    x: bool,
    z: bool,
}

fn check_deps(name: &str, f: &SeparableFn, allowed: Deps) -> Result<()> {
    for term in f.terms() {
        let t_dep = term.time != TimeFactor::One;
        let x_dep = !matches!(term.x.fourier_mode(), Some((k, _)) if k == 0.0);
        let z_dep = !matches!(term.z.fourier_mode(), Some((k, _)) if k == 0.0);
        if (t_dep && !allowed.t) || (x_dep && !allowed.x) || (z_dep && !allowed.z) {
            return Err(Error::invalid(name, "depends on a variable it may not"));
        }
        if x_dep && term.x.fourier_mode().is_none() {
            return Err(Error::invalid(name, "x-dependence must be a Fourier mode"));
        }
    }
    Ok(())
}

impl Scenario {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        rho0: SeparableFn,
        a: SeparableFn,
        b: SeparableFn,
        f1: SeparableFn,
        f2: SeparableFn,
        beta1: [SeparableFn; 2],
        beta2: [SeparableFn; 2],
        length: f64,
        horizon: f64,
        c0: f64,
    ) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid("L", format!("period {length} must be positive")));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::invalid("T", format!("horizon {horizon} must be positive")));
        }
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::invalid("c0", format!("density floor {c0} must be positive")));
        }
        let z_only = Deps { t: false, x: false, z: true };
        check_deps("rho0", &rho0, z_only)?;
        check_deps("a", &a, z_only)?;
        check_deps("b", &b, Deps { t: false, x: true, z: true })?;
        check_deps("f1", &f1, Deps { t: true, x: false, z: true })?;
        check_deps("f2", &f2, Deps { t: true, x: true, z: true })?;
        for (i, name) in ["beta1_lower", "beta1_upper"].iter().enumerate() {
            check_deps(name, &beta1[i], Deps { t: true, x: false, z: false })?;
        }
        for (i, name) in ["beta2_lower", "beta2_upper"].iter().enumerate() {
            check_deps(name, &beta2[i], Deps { t: true, x: true, z: false })?;
        }
        Ok(Self { name: name.into(), rho0, a, b, f1, f2, beta1, beta2, length, horizon, c0 })
    }

    pub fn rho(&self, z: f64) -> f64 {
        self.rho0.eval(0.0, 0.0, z)
    }

    pub fn beta1_at(&self, side: Side, t: f64) -> f64 {
        self.beta1[side.index()].eval(t, 0.0, 0.0)
    }

    pub fn beta2_at(&self, side: Side, t: f64, x: f64) -> f64 {
        self.beta2[side.index()].eval(t, x, 0.0)
    }

    /// Every slot with its name, for diagnostics.
    pub fn slots(&self) -> [(&'static str, &SeparableFn); 9] {
        [
            ("rho0", &self.rho0),
            ("a", &self.a),
            ("b", &self.b),
            ("f1", &self.f1),
            ("f2", &self.f2),
            ("beta1_lower", &self.beta1[0]),
            ("beta1_upper", &self.beta1[1]),
            ("beta2_lower", &self.beta2[0]),
            ("beta2_upper", &self.beta2[1]),
        ]
    }
}

/// Residuals of one compatibility check on both walls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SideResiduals {
    pub lower: f64,
    pub upper: f64,
}

impl SideResiduals {
    pub fn max(&self) -> f64 {
        self.lower.max(self.upper)
    }

    fn set(&mut self, side: Side, v: f64) {
        match side {
            Side::Lower => self.lower = v,
            Side::Upper => self.upper = v,
        }
    }
}

/// Outcome of [`validate_scenario`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub density_ok: bool,
    pub min_density: f64,
    pub periodic_ok: bool,
    pub zero_order_ok: bool,
    pub zero_order: SideResiduals,
    pub first_order_ok: bool,
    pub first_order_residuals: SideResiduals,
    /// `|a''(i)|` per wall.
    pub eps_defect_a: SideResiduals,
    /// `max_x |Laplacian b(x, i)|` per wall.
    pub eps_defect_b: SideResiduals,
    pub messages: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.density_ok && self.periodic_ok && self.zero_order_ok && self.first_order_ok
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let flag = |ok: bool| if ok { "ok" } else { "FAILED" };
        let _ = writeln!(s, "density        {:<6} min rho0 = {:.6e}", flag(self.density_ok), self.min_density);
        let _ = writeln!(s, "periodicity    {}", flag(self.periodic_ok));
        let _ = writeln!(
            s,
            "zero order     {:<6} lower {:.3e}  upper {:.3e}",
            flag(self.zero_order_ok),
            self.zero_order.lower,
            self.zero_order.upper
        );
        let _ = writeln!(
            s,
            "first order    {:<6} lower {:.3e}  upper {:.3e}",
            flag(self.first_order_ok),
            self.first_order_residuals.lower,
            self.first_order_residuals.upper
        );
        let _ = writeln!(
            s,
            "eps defects    a'': {:.3e} / {:.3e}   lap b: {:.3e} / {:.3e}",
            self.eps_defect_a.lower,
            self.eps_defect_a.upper,
            self.eps_defect_b.lower,
            self.eps_defect_b.upper
        );
        for m in &self.messages {
            let _ = writeln!(s, "  - {m}");
        }
        s
    }

    /// `check,side,value,ok` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("check,side,value,ok\n");
        let tol = self.tolerance;
        let mut row = |check: &str, side: &str, v: f64, ok: bool| {
            let _ = writeln!(s, "{check},{side},{},{ok}", crate::report::fmt_num(v));
        };
        row("min_density", "all", self.min_density, self.density_ok);
        row("periodicity", "all", if self.periodic_ok { 0.0 } else { 1.0 }, self.periodic_ok);
        for side in Side::BOTH {
            let pick = |r: &SideResiduals| if side == Side::Lower { r.lower } else { r.upper };
            row("zero_order", side.name(), pick(&self.zero_order), pick(&self.zero_order) <= tol);
            let fo = pick(&self.first_order_residuals);
            row("first_order", side.name(), fo, fo <= tol);
            let da = pick(&self.eps_defect_a);
            row("eps_defect_a", side.name(), da, da <= tol);
            let db = pick(&self.eps_defect_b);
            row("eps_defect_b", side.name(), db, db <= tol);
        }
        s
    }
}

const VALIDATION_NX: usize = 64;
const VALIDATION_NZ: usize = 101;

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(name, "evaluates to a non-finite value"))
    }
}

/// Structural checks: density floor, periodicity, and the zero- and
/// first-order compatibility of boundary and initial data at `t = 0`.
/// Stand-in for `t -> 0+` when checking the zero-order condition.
const T0_PLUS: f64 = f64::MIN_POSITIVE;

pub fn validate_scenario(s: &Scenario, tol: f64) -> Result<ValidationReport> {
    if !(tol >= 0.0) {
        return Err(Error::domain(format!("tolerance {tol} must be nonnegative")));
    }
    let xs: Vec<f64> = (0..VALIDATION_NX).map(|i| s.length * i as f64 / VALIDATION_NX as f64).collect();
    let zs: Vec<f64> = (0..VALIDATION_NZ).map(|i| i as f64 / (VALIDATION_NZ - 1) as f64).collect();
    let mut messages = Vec::new();

    // every slot must be evaluable on the sampling
    for (name, f) in s.slots() {
        for &z in &zs {
            for &x in xs.iter().step_by(8) {
                finite(name, f.eval(0.0, x, z))?;
                finite(name, f.eval(s.horizon, x, z))?;
            }
        }
    }

    let mut min_density = f64::INFINITY;
    for &z in &zs {
        min_density = min_density.min(finite("rho0", s.rho(z))?);
    }
    let density_ok = min_density >= s.c0;
    if !density_ok {
        messages.push(format!("rho0 drops to {min_density:.6e} below the floor c0 = {}", s.c0));
    }

    let mut periodic_ok = true;
    for (name, f) in [("b", &s.b), ("f2", &s.f2), ("beta2_lower", &s.beta2[0]), ("beta2_upper", &s.beta2[1])] {
        let mut worst: f64 = 0.0;
        for &z in zs.iter().step_by(10) {
            for &x in &xs {
                for t in [0.0, 0.5 * s.horizon, s.horizon] {
                    let d = f.eval(t, x + s.length, z) - f.eval(t, x, z);
                    worst = worst.max(d.abs());
                }
            }
        }
        if worst > 1e-8 * (1.0 + s.length) {
            periodic_ok = false;
            messages.push(format!("{name} is not L-periodic (defect {worst:.3e})"));
        }
    }

    let mut zero_order = SideResiduals::default();
    let mut first = SideResiduals::default();
    let mut defect_a = SideResiduals::default();
    let mut defect_b = SideResiduals::default();
    for side in Side::BOTH {
        let i = side.wall();
        let b1 = &s.beta1[side.index()];
        let b2 = &s.beta2[side.index()];
        // data may jump right after t = 0, so check the right limit as well
        let mut r0: f64 = 0.0;
        for t in [0.0, T0_PLUS] {
            r0 = r0.max((b1.eval(t, 0.0, 0.0) - s.a.eval(0.0, 0.0, i)).abs());
            for &x in &xs {
                r0 = r0.max((b2.eval(t, x, 0.0) - s.b.eval(0.0, x, i)).abs());
            }
        }
        let b10 = b1.eval(0.0, 0.0, 0.0);
        let mut r1 = (b1.partial(1, 0, 0, 0.0, 0.0, 0.0) - s.f1.eval(0.0, 0.0, i)).abs();
        let mut db: f64 = 0.0;
        for &x in &xs {
            let v = b2.partial(1, 0, 0, 0.0, x, 0.0) + b10 * b2.partial(0, 1, 0, 0.0, x, 0.0)
                - s.f2.eval(0.0, x, i);
            r1 = r1.max(v.abs());
            let lap = s.b.partial(0, 2, 0, 0.0, x, i) + s.b.partial(0, 0, 2, 0.0, x, i);
            db = db.max(lap.abs());
        }
        zero_order.set(side, r0);
        first.set(side, r1);
        defect_a.set(side, s.a.partial(0, 0, 2, 0.0, 0.0, i).abs());
        defect_b.set(side, db);
        if r0 > tol {
            messages.push(format!("zero-order compatibility fails at the {side} wall (residual {r0:.3e})"));
        }
        if r1 > tol {
            messages.push(format!("first-order compatibility fails at the {side} wall (residual {r1:.3e})"));
        }
        if defect_a.max().max(db) > tol {
            messages.push(format!(
                "nonzero viscous compatibility defect at the {side} wall: the data are compatible only as eps -> 0"
            ));
        }
    }

    Ok(ValidationReport {
        tolerance: tol,
        density_ok,
        min_density,
        periodic_ok,
        zero_order_ok: zero_order.max() <= tol,
        zero_order,
        first_order_ok: first.max() <= tol,
        first_order_residuals: first,
        eps_defect_a: defect_a,
        eps_defect_b: defect_b,
        messages,
    })
}

/// Boundary data minus the Euler trace on one wall, sampled at the Euler
/// stamps and `x` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct MismatchTraces {
    pub side: Side,
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    /// `g1(t_n)`
    pub g1: Vec<f64>,
    /// `g2(t_n, x_j)`, one row per stamp.
    pub g2: Vec<Vec<f64>>,
}

/// `g1 = beta1 - u1^0` and `g2 = beta2 - u2^0` at the chosen wall.
pub fn boundary_mismatch(s: &Scenario, euler: &EulerSolution, side: Side) -> Result<MismatchTraces> {
    let times = &euler.u1.times;
    let end = *times.last().unwrap();
    if times[0] != 0.0 || (end - s.horizon).abs() > 1e-12 * s.horizon.max(1.0) {
        return Err(Error::domain(format!(
            "Euler solution covers [{}, {end}] but the horizon is {}",
            times[0], s.horizon
        )));
    }
    let grid = &euler.grid;
    let iz = match side {
        Side::Lower => 0,
        Side::Upper => grid.nz() - 1,
    };
    let x = grid.x_nodes();
    let g1 = times
        .iter()
        .zip(&euler.u1.frames)
        .map(|(&t, u)| s.beta1_at(side, t) - u.values[iz])
        .collect();
    let g2 = times
        .iter()
        .zip(&euler.u2.frames)
        .map(|(&t, u)| {
            u.row(iz).iter().zip(&x).map(|(&v, &xj)| s.beta2_at(side, t, xj) - v).collect()
        })
        .collect();
    Ok(MismatchTraces { side, times: times.clone(), x, g1, g2 })
}
