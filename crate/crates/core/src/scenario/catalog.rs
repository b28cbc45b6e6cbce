//! Built-in scenarios, selected by id and tuned by named numeric parameters.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::func::{SeparableFn, SpaceFactor as S, TimeFactor as T};
use super::Scenario;
use crate::error::{Error, Result};

pub type Params = BTreeMap<String, f64>;

/// Optional overrides of period, horizon and density floor.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Extent {
    pub length: Option<f64>,
    pub horizon: Option<f64>,
    pub c0: Option<f64>,
}

/// Catalog ids with a one-line description each.
pub const ENTRIES: &[(&str, &str)] = &[
    ("channel", "default sweep scenario: shear-driven channel with linear density and slipping walls"),
    ("uniform-stream", "z-independent outer flow; the remainder expansion is exact for it"),
    ("constant-state", "constant velocity everywhere; every solver must preserve it"),
    ("zero", "all data zero"),
    ("translation", "uniform drift carrying a single x-mode; no forcing"),
    ("heat-step", "impulsively started lower wall over fluid at rest (incompatible on purpose)"),
    ("manufactured-poly", "forcing built from u2 = sin(kx) z(1-z)(1+t) for a given eps"),
    ("manufactured-sine", "forcing built from u2 = sin(kx) sin(pi z)(1+t) for a given eps"),
];

struct Reader<'a> {
    id: &'a str,
    params: &'a Params,
    used: RefCell<Vec<&'static str>>,
}

impl<'a> Reader<'a> {
    fn get(&self, key: &'static str, default: f64) -> f64 {
        self.used.borrow_mut().push(key);
        self.params.get(key).copied().unwrap_or(default)
    }

    fn finish(self) -> Result<()> {
        let used = self.used.into_inner();
        for k in self.params.keys() {
            if !used.contains(&k.as_str()) {
                return Err(Error::Config(format!("scenario `{}` has no parameter `{k}`", self.id)));
            }
        }
        Ok(())
    }
}

fn linear(c0: f64, c1: f64) -> S {
    S::Poly(vec![c0, c1])
}

/// Builds a catalog scenario.
pub fn build(id: &str, params: &Params, extent: Option<&Extent>) -> Result<Scenario> {
    let p = Reader { id, params, used: RefCell::new(Vec::new()) };
    let e = extent.copied().unwrap_or_default();
    let length = e.length.unwrap_or(2.0 * PI);
    let horizon = e.horizon.unwrap_or(1.0);
    let c0 = e.c0.unwrap_or(1.0);
    let k1 = 2.0 * PI / length;
    let zero = SeparableFn::zero;
    let s = match id {
        "channel" => {
            let rho_base = p.get("rho_base", 1.0);
            let rho_slope = p.get("rho_slope", 6.0);
            let shear = p.get("shear", 1.0);
            let slip = [p.get("slip_lower", 1.0), p.get("slip_upper", 0.5)];
            let wave = p.get("wave", 1.0);
            let wall_wave = [p.get("wall_wave_lower", 1.0), p.get("wall_wave_upper", 0.5)];
            let omega = p.get("omega", 1.0);
            let bump = S::Poly(vec![0.0, 4.0, -4.0]);
            Scenario::new(
                id,
                SeparableFn::profile(linear(rho_base, rho_slope), 1.0),
                zero(),
                zero().with(wave, T::One, S::Cos(k1), S::Sin(PI)),
                zero().with(shear * omega, T::Sin(omega), S::One, bump),
                zero().with(wave * omega, T::Sin(omega), S::Sin(k1), S::Sin(PI)),
                [
                    zero().with(slip[0], T::OneMinusCos(omega), S::One, S::One),
                    zero().with(slip[1], T::OneMinusCos(omega), S::One, S::One),
                ],
                [
                    zero().with(wall_wave[0], T::OneMinusCos(omega), S::Cos(2.0 * k1), S::One),
                    zero().with(wall_wave[1], T::OneMinusCos(omega), S::Sin(2.0 * k1), S::One),
                ],
                length,
                horizon,
                c0,
            )
        }
        "uniform-stream" => {
            let rho_base = p.get("rho_base", 4.0);
            let rho_slope = p.get("rho_slope", 1.0);
            let stream = p.get("stream", 1.0);
            let slip = p.get("slip", 1.0);
            let wave = p.get("wave", 1.0);
            let wall_wave = p.get("wall_wave", 1.0);
            Scenario::new(
                id,
                SeparableFn::profile(linear(rho_base, rho_slope), 1.0),
                zero(),
                zero(),
                zero().with(stream, T::Sin(1.0), S::One, S::One),
                zero().with(wave, T::Sin(1.0), S::Sin(k1), S::One),
                [
                    zero().with(stream + slip, T::OneMinusCos(1.0), S::One, S::One),
                    zero().with(stream + 0.5 * slip, T::OneMinusCos(1.0), S::One, S::One),
                ],
                [
                    zero().with(wall_wave, T::OneMinusCos(1.0), S::Cos(2.0 * k1), S::One),
                    zero().with(0.5 * wall_wave, T::OneMinusCos(1.0), S::Sin(k1), S::One),
                ],
                length,
                horizon,
                c0,
            )
        }
        "constant-state" => {
            let rho_base = p.get("rho_base", 2.0);
            let rho_slope = p.get("rho_slope", 1.0);
            let u1 = p.get("u1", 1.0);
            let u2 = p.get("u2", 0.5);
            let c1 = SeparableFn::constant(u1);
            let c2 = SeparableFn::constant(u2);
            Scenario::new(
                id,
                SeparableFn::profile(linear(rho_base, rho_slope), 1.0),
                c1.clone(),
                c2.clone(),
                zero(),
                zero(),
                [c1.clone(), c1],
                [c2.clone(), c2],
                length,
                horizon,
                c0,
            )
        }
        "zero" => {
            let rho = p.get("rho", 1.0);
            Scenario::new(
                id,
                SeparableFn::constant(rho),
                zero(),
                zero(),
                zero(),
                zero(),
                [zero(), zero()],
                [zero(), zero()],
                length,
                horizon,
                c0,
            )
        }
        "translation" => {
            let speed = p.get("speed", 1.0);
            let mode = p.get("mode", 1.0);
            let rho = p.get("rho", 1.0);
            let k = mode * k1;
            let u1 = SeparableFn::constant(speed);
            // cos(k(x - c t)) = cos(kx)cos(kct) + sin(kx)sin(kct)
            let wall = zero()
                .with(1.0, T::Cos(k * speed), S::Cos(k), S::One)
                .with(1.0, T::Sin(k * speed), S::Sin(k), S::One);
            Scenario::new(
                id,
                SeparableFn::constant(rho),
                u1.clone(),
                zero().with(1.0, T::One, S::Cos(k), S::One),
                zero(),
                zero(),
                [u1.clone(), u1],
                [wall.clone(), wall],
                length,
                horizon,
                c0,
            )
        }
        "heat-step" => {
            let rho = p.get("rho", 1.0);
            let jump = p.get("jump", 1.0);
            Scenario::new(
                id,
                SeparableFn::constant(rho),
                zero(),
                zero(),
                zero(),
                zero(),
                [zero().with(jump, T::Step, S::One, S::One), zero()],
                [zero(), zero()],
                length,
                horizon,
                c0,
            )
        }
        "manufactured-poly" | "manufactured-sine" => {
            let eps = p.get("eps", 1e-2);
            let rho = p.get("rho", 1.0);
            let drift = p.get("drift", 0.5);
            let k = p.get("mode", 1.0) * k1;
            let u1 = SeparableFn::constant(drift);
            let lin = T::Poly(vec![1.0, 1.0]);
            let d = eps / rho;
            let f2 = if id == "manufactured-poly" {
                // u = sin(kx) q(z) (1+t), q = z - z^2, q'' = -2
                let q = S::Poly(vec![0.0, 1.0, -1.0]);
                zero()
                    .with(1.0, T::One, S::Sin(k), q.clone())
                    .with(d * k * k, lin.clone(), S::Sin(k), q.clone())
                    .with(2.0 * d, lin.clone(), S::Sin(k), S::One)
                    .with(drift * k, lin, S::Cos(k), q)
            } else {
                zero()
                    .with(1.0, T::One, S::Sin(k), S::Sin(PI))
                    .with(d * (k * k + PI * PI), lin.clone(), S::Sin(k), S::Sin(PI))
                    .with(drift * k, lin, S::Cos(k), S::Sin(PI))
            };
            let b = if id == "manufactured-poly" {
                zero().with(1.0, T::One, S::Sin(k), S::Poly(vec![0.0, 1.0, -1.0]))
            } else {
                zero().with(1.0, T::One, S::Sin(k), S::Sin(PI))
            };
            Scenario::new(
                id,
                SeparableFn::constant(rho),
                u1.clone(),
                b,
                zero(),
                f2,
                [u1.clone(), u1],
                [zero(), zero()],
                length,
                horizon,
                c0,
            )
        }
        other => {
            let known: Vec<&str> = ENTRIES.iter().map(|e| e.0).collect();
            return Err(Error::Config(format!(
                "unknown catalog id `{other}` (known: {})",
                known.join(", ")
            )));
        }
    }?;
    p.finish()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::validate_scenario;

    #[test]
    fn every_entry_builds() {
        for (id, _) in ENTRIES {
            build(id, &Params::new(), None).unwrap();
        }
        assert!(build("nope", &Params::new(), None).is_err());
    }

    #[test]
    fn unknown_parameter_is_rejected() {
        let mut p = Params::new();
        p.insert("shear".into(), 2.0);
        assert!(build("channel", &p, None).is_ok());
        p.insert("sheer".into(), 2.0);
        assert!(matches!(build("channel", &p, None), Err(Error::Config(_))));
    }

    #[test]
    fn compatible_entries_validate() {
        for id in ["channel", "uniform-stream", "constant-state", "zero", "translation"] {
            let s = build(id, &Params::new(), None).unwrap();
            let r = validate_scenario(&s, 1e-10).unwrap();
            assert!(r.passed(), "{id}: {r:?}");
        }
        let s = build("heat-step", &Params::new(), None).unwrap();
        // the step is zero at t = 0 but its derivative is not represented
        assert!(validate_scenario(&s, 1e-10).unwrap().density_ok);
    }
}
