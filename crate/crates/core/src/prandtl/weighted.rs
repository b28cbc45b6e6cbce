use std::fmt::Write as _;

use super::derivs::{d_dt, d_dz};
use super::CorrectorSet;
use crate::fields::{japanese_bracket, FieldNorms, HalfLineField, HalfLineField2D, TimeSeries};
use crate::report::fmt_num;
use crate::scenario::Side;
use crate::spectral::XTransform;

/// Norm kinds reported for every `(quantity, l, i)`:
/// `sup` is `||<Z>^l f||` over `(0,T) x half-line`, `linf_l2` the supremum in
/// time of the weighted `L^2` norm, `dz_l2_l2`/`dz_linf_l2` the same for
/// `d_Z f`, and `dt_l2_l2` the time-integrated weighted norm of `d_t f`.
pub const NORM_KINDS: [&str; 5] = ["sup", "linf_l2", "dz_l2_l2", "dz_linf_l2", "dt_l2_l2"];

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedEntry {
    pub side: Side,
    /// `theta1` or `theta2`
    pub quantity: &'static str,
    pub l: u32,
    /// Order of the `x`-derivative.
    pub i: u32,
    pub norm_kind: &'static str,
    pub value: f64,
    pub bounded: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedReport {
    pub ceiling: f64,
    pub entries: Vec<WeightedEntry>,
}

impl WeightedReport {
    pub fn all_bounded(&self) -> bool {
        self.entries.iter().all(|e| e.bounded)
    }

    /// Columns `side,quantity,l,i,norm_kind,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("side,quantity,l,i,norm_kind,value\n");
        for e in &self.entries {
            let _ = writeln!(s, "{},{},{},{},{},{}", e.side, e.quantity, e.l, e.i, e.norm_kind, fmt_num(e.value));
        }
        s
    }

    pub fn get(&self, quantity: &str, l: u32, i: u32, kind: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.quantity == quantity && e.l == l && e.i == i && e.norm_kind == kind)
            .map(|e| e.value)
    }
}

// Per-stamp profiles flattened as rows of `nx` values (nx = 1 for theta1),
// together with the measure of one x cell.
struct Profiles {
    frames: Vec<Vec<f64>>,
    nx: usize,
    dx: f64,
}

fn from_theta1(s: &TimeSeries<HalfLineField>) -> Profiles {
    Profiles { frames: s.frames.iter().map(|f| f.values.clone()).collect(), nx: 1, dx: 1.0 }
}

fn from_theta2(s: &TimeSeries<HalfLineField2D>, order: usize) -> Profiles {
    let f0 = &s.frames[0];
    let tr = XTransform::new(f0.nx, f0.length);
    Profiles {
        frames: s.frames.iter().map(|f| tr.derivative_rows(&f.values, order)).collect(),
        nx: f0.nx,
        dx: f0.length / f0.nx as f64,
    }
}

fn weighted_l2(values: &[f64], nx: usize, dx: f64, wz: &[f64], bracket: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..wz.len() {
        let row: f64 = values[j * nx..(j + 1) * nx].iter().map(|v| v * v).sum();
        s += wz[j] * bracket[j] * row;
    }
    (dx * s).sqrt()
}

fn trapezoid_in_time(times: &[f64], sq: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..times.len() - 1 {
        s += 0.5 * (times[k + 1] - times[k]) * (sq[k] + sq[k + 1]);
    }
    s.sqrt()
}

/// Weighted norms of the correctors for every `l` and every `x`-derivative
/// order `i` (`theta1` only for `i = 0`). Entries above `ceiling` or
/// non-finite are marked unbounded.
pub fn weighted_report(c: &CorrectorSet, l_list: &[u32], i_list: &[u32], ceiling: f64) -> WeightedReport {
    let nodes = c.zgrid.nodes();
    let wz = c.zgrid.weights();
    let times = &c.theta1.times;
    let mut entries = Vec::new();
    let mut jobs: Vec<(&'static str, u32, Profiles)> = Vec::new();
    if i_list.contains(&0) {
        jobs.push(("theta1", 0, from_theta1(&c.theta1)));
    }
    for &i in i_list {
        jobs.push(("theta2", i, from_theta2(&c.theta2, i as usize)));
    }
    for (quantity, i, p) in jobs {
        let dz: Vec<Vec<f64>> = p.frames.iter().map(|f| d_dz(f, p.nx, nodes)).collect();
        let dt = d_dt(&p.frames, times);
        for &l in l_list {
            let bracket_sq: Vec<f64> = nodes.iter().map(|&z| japanese_bracket(z).powi(2 * l as i32)).collect();
            let bracket: Vec<f64> = nodes.iter().map(|&z| japanese_bracket(z).powi(l as i32)).collect();
            let sup = p
                .frames
                .iter()
                .map(|f| {
                    f.iter().enumerate().fold(0.0f64, |m, (k, v)| m.max((bracket[k / p.nx] * v).abs()))
                })
                .fold(0.0, f64::max);
            let l2 = |f: &Vec<f64>| weighted_l2(f, p.nx, p.dx, &wz, &bracket_sq);
            let linf_l2 = p.frames.iter().map(l2).fold(0.0, f64::max);
            let dz_norms: Vec<f64> = dz.iter().map(l2).collect();
            let dz_linf_l2 = dz_norms.iter().copied().fold(0.0, f64::max);
            let dz_l2_l2 = trapezoid_in_time(times, &dz_norms.iter().map(|v| v * v).collect::<Vec<_>>());
            let dt_sq: Vec<f64> = dt.iter().map(|f| l2(f).powi(2)).collect();
            let dt_l2_l2 = trapezoid_in_time(times, &dt_sq);
            for (kind, value) in NORM_KINDS.iter().zip([sup, linf_l2, dz_l2_l2, dz_linf_l2, dt_l2_l2]) {
                entries.push(WeightedEntry {
                    side: c.side,
                    quantity,
                    l,
                    i,
                    norm_kind: kind,
                    value,
                    bounded: value.is_finite() && value <= ceiling,
                });
            }
        }
    }
    WeightedReport { ceiling, entries }
}

impl CorrectorSet {
    /// `max_t ||th1||_{L^2}` and `max_t ||th2||_{L^2}` on the half-line.
    pub fn l2_sizes(&self) -> (f64, f64) {
        let a = self.theta1.frames.iter().map(|f| f.l2_norm()).fold(0.0, f64::max);
        let b = self.theta2.frames.iter().map(|f| f.l2_norm()).fold(0.0, f64::max);
        (a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::WallTrace;
    use crate::fields::HalfLineGrid;
    use crate::fields::uniform_stamps;
    use std::sync::Arc;

    fn synthetic(f: impl Fn(f64, f64) -> f64, nx: usize) -> CorrectorSet {
        let zgrid = Arc::new(HalfLineGrid::new(20.0, 0.005).unwrap());
        let times = uniform_stamps(1.0, 10);
        let th1 = times.iter().map(|&t| HalfLineField::from_fn(zgrid.clone(), t, |z| f(t, z))).collect();
        let th2 = times
            .iter()
            .map(|&t| {
                let v = zgrid.nodes().iter().flat_map(|&z| vec![f(t, z); nx]).collect();
                HalfLineField2D::new(zgrid.clone(), nx, 1.0, v, t).unwrap()
            })
            .collect();
        CorrectorSet {
            side: Side::Lower,
            rho_wall: 1.0,
            rho_wall_slope: 0.0,
            zgrid,
            nx,
            length: 1.0,
            theta1: TimeSeries::new(times.clone(), th1).unwrap(),
            theta2: TimeSeries::new(times.clone(), th2).unwrap(),
            traces: WallTrace {
                side: Side::Lower,
                times,
                nx,
                length: 1.0,
                u1: vec![],
                u1_z: vec![],
                u2: vec![],
                u2_x: vec![],
                u2_xz: vec![],
            },
        }
    }

    #[test]
    fn zero_set_gives_zero_entries() {
        let c = synthetic(|_, _| 0.0, 4);
        let r = weighted_report(&c, &[0, 1, 2, 3, 4], &[0, 1, 2], 1e6);
        assert_eq!(r.entries.len(), 4 * 5 * 5);
        assert!(r.entries.iter().all(|e| e.value == 0.0 && e.bounded));
    }

    #[test]
    fn exponential_profile() {
        let c = synthetic(|_, z| (-z).exp(), 4);
        let r = weighted_report(&c, &[1], &[0], 1e6);
        let v = r.get("theta1", 1, 0, "linf_l2").unwrap();
        assert!((v - 0.75f64.sqrt()).abs() < 1e-5);
        // time-independent profile: d_t vanishes
        assert!(r.get("theta1", 1, 0, "dt_l2_l2").unwrap() < 1e-12);
        let csv = r.to_csv();
        assert!(csv.starts_with("side,quantity,l,i,norm_kind,value\n"));
    }
}
