use std::f64::consts::PI;

use maxgraph::report::{run_verification, RunConfig, RunOptions, CHECK_NAMES};
use maxgraph::SurfaceParams;

fn config(text: &str) -> RunConfig {
    RunConfig::from_json(text).unwrap()
}

#[test]
fn one_zero_passes_every_check() {
    let c = config(r#"{"m":1,"n":0,"a":[1,2],"b":[],"alpha":[1],"beta":[]}"#);
    let (report, mesh) = run_verification(&c, &RunOptions::default(), "verify").unwrap();
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
    assert!(report.passed, "{failed:#?}");
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, CHECK_NAMES.to_vec());
    let p = report.periods.as_ref().unwrap();
    assert!((p.around_zero[1] + 2.0 * PI).abs() <= 1e-8);
    assert!(p.around_zero[0].abs() <= 1e-8 && p.around_zero[2].abs() <= 1e-8);
    assert_eq!(mesh.unwrap().cone_vertices.len(), 1);
    assert_eq!(report.conventions.basepoint, 3.0);
}

#[test]
fn reports_differ_only_in_timestamp() {
    let c = config(r#"{"m":1,"n":1,"a":[1,2],"b":[-1,-3],"alpha":[1],"beta":[-1]}"#);
    let opts = RunOptions {
        grid_counts: Some((40, 16)),
        ..Default::default()
    };
    let (mut a, _) = run_verification(&c, &opts, "verify").unwrap();
    let (mut b, _) = run_verification(&c, &opts, "verify").unwrap();
    a.generated_at_unix = 0;
    b.generated_at_unix = 0;
    assert_eq!(a.to_json_pretty(), b.to_json_pretty());
}

#[test]
fn horizontal_requirement() {
    let all_up = SurfaceParams::new(
        vec![1.0, 2.0, 3.0, 4.0],
        vec![-1.0, -2.0],
        vec![-1, -1],
        vec![1],
    )
    .unwrap();
    let mut c = RunConfig::new(all_up);
    let opts = RunOptions {
        require_horizontal_ends: true,
        grid_counts: Some((30, 12)),
        ..Default::default()
    };
    let (report, _) = run_verification(&c, &opts, "verify").unwrap();
    assert!(!report.passed);
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(failed, vec!["horizontal_end"]);

    c.params = SurfaceParams::new(
        vec![1.0, 2.0, 3.0, 4.0],
        vec![-1.0, -2.0],
        vec![1, -1],
        vec![1],
    )
    .unwrap();
    let (report, _) = run_verification(&c, &opts, "verify").unwrap();
    assert!(report.passed);
    assert!(report.input_params.is_some());
    assert!((report.params.end_value_w0() - 1.0).abs() <= 1e-12);
}
