use prandtl_channel::analysis::{solve_point, CorrectorPair, PipelineOptions, QUANTITIES};
use prandtl_channel::fields::GridPolicy;
use prandtl_channel::scenario::catalog::{build, Params};

fn coarse() -> PipelineOptions {
    PipelineOptions { policy: GridPolicy { nz: 48, layer_nodes: 32, ..Default::default() }, nt: 40, ..Default::default() }
}

#[test]
fn zero_scenario_has_zero_norms() {
    let s = build("zero", &Params::new(), None).unwrap();
    let opts = coarse();
    let pair = CorrectorPair::solve(&s, &opts).unwrap();
    let p = solve_point(&s, 1e-3, &opts, &pair).unwrap();
    for q in QUANTITIES {
        assert_eq!(p.report.quantity(q), Some(0.0), "{q}");
    }
}

#[test]
fn channel_point_is_consistent() {
    let s = build("channel", &Params::new(), None).unwrap();
    let opts = coarse();
    let pair = CorrectorPair::solve(&s, &opts).unwrap();
    let eps = 2f64.powi(-8);
    let p = solve_point(&s, eps, &opts, &pair).unwrap();
    let r = &p.report;
    // the composite approximation beats the outer solution
    assert!(r.err_vs_approx.l2 < r.err_vs_euler_l2);
    assert!(r.boundary_defect < 1e-12);
    assert!(QUANTITIES.iter().all(|q| r.quantity(q).is_some_and(f64::is_finite)));
    let csv = r.to_csv();
    assert!(csv.starts_with("eps,quantity,norm\n"));
    assert!(csv.contains(",l2_approx,"));
}

#[test]
fn unresolved_grid_warns() {
    let s = build("channel", &Params::new(), None).unwrap();
    let opts = PipelineOptions { policy: GridPolicy { nz: 9, layer_nodes: 2, ..Default::default() }, nt: 10, ..Default::default() };
    let pair = CorrectorPair::solve(&s, &opts).unwrap();
    let p = solve_point(&s, 1e-6, &opts, &pair).unwrap();
    assert!(p.report.audit.warnings.iter().any(|w| w.contains("unresolved")), "{:?}", p.report.audit.warnings);
}
