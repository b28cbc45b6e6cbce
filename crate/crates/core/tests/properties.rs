use std::sync::Arc;

use proptest::prelude::*;

use prandtl_channel::analysis::fit_rate;
use prandtl_channel::composer::Cutoff;
use prandtl_channel::fields::{read_field_dump, write_field_dump, Field2D, Grid2D};
use prandtl_channel::linalg::thomas;
use prandtl_channel::spectral::XTransform;

fn diag_dominant(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(-1.0..1.0f64, n),
        prop::collection::vec(-1.0..1.0f64, n),
        prop::collection::vec(0.0..1.0f64, n),
        prop::collection::vec(-10.0..10.0f64, n),
    )
        .prop_map(|(lo, up, d, rhs)| {
            let diag = (0..lo.len()).map(|i| 2.5 + d[i]).collect();
            (lo, diag, up, rhs)
        })
}

proptest! {
    #[test]
    fn thomas_solves_the_system((lo, diag, up, rhs) in (2usize..40).prop_flat_map(diag_dominant)) {
        let n = rhs.len();
        let mut x = rhs.clone();
        let mut scratch = vec![0.0; n];
        thomas(&lo, &diag, &up, &mut x, &mut scratch).unwrap();
        for i in 0..n {
            let mut r = diag[i] * x[i];
            if i > 0 { r += lo[i] * x[i - 1]; }
            if i + 1 < n { r += up[i] * x[i + 1]; }
            prop_assert!((r - rhs[i]).abs() < 1e-10 * (1.0 + rhs[i].abs()));
        }
    }

    #[test]
    fn power_laws_are_fitted_exactly(slope in 0.05..3.0f64, c in 0.01..100.0f64, n in 3usize..10) {
        let eps: Vec<f64> = (0..n).map(|k| 2f64.powi(-(6 + k as i32))).collect();
        let norms: Vec<f64> = eps.iter().map(|e| c * e.powf(slope)).collect();
        let f = fit_rate(&eps, &norms).unwrap();
        prop_assert!((f.slope - slope).abs() < 1e-9);
        prop_assert!((f.intercept - c.ln()).abs() < 1e-8);
        prop_assert!(f.r2 > 1.0 - 1e-12);
        prop_assert_eq!(f.n_points, n);
    }

    #[test]
    fn cutoff_pair_never_overlaps(z in 0.0..=1.0f64) {
        let c = Cutoff::default();
        let p = c.eval(z, 0).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert_eq!(p * c.eval(1.0 - z, 0).unwrap(), 0.0);
    }

    #[test]
    fn spectral_derivative_of_a_mode(k in 1usize..4, phase in 0.0..6.3f64) {
        let nx = 16;
        let l = 2.0 * std::f64::consts::PI;
        let tr = XTransform::new(nx, l);
        let row: Vec<f64> = (0..nx).map(|j| (k as f64 * l * j as f64 / nx as f64 + phase).sin()).collect();
        let d = tr.derivative(&row, 1);
        for (j, v) in d.iter().enumerate() {
            let exact = k as f64 * (k as f64 * l * j as f64 / nx as f64 + phase).cos();
            prop_assert!((v - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn field_dump_round_trips(values in prop::collection::vec(-1e6..1e6f64, 4 * 9), t in 0.0..1.0f64) {
        let grid = Arc::new(Grid2D::uniform(4, 9, 1.0).unwrap());
        let f = Field2D::new(grid.clone(), values, t).unwrap();
        let mut buf = Vec::new();
        write_field_dump(&f, &mut buf).unwrap();
        let back = read_field_dump(&buf[..], grid).unwrap();
        prop_assert_eq!(back.values, f.values);
        prop_assert_eq!(back.t, f.t);
    }
}
