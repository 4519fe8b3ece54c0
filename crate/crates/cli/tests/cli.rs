use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const ONE_ZERO: &str = r#"{"m":1,"n":0,"a":[1,2],"b":[],"alpha":[1],"beta":[]}"#;

#[test]
fn verify_one_zero_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", ONE_ZERO);
    let out = dir.path().join("report.json");
    let o = run(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    let z = &report["periods"]["around_zero"];
    assert!((z[1].as_f64().unwrap() + 2.0 * PI).abs() <= 1e-8);
    assert!(z[0].as_f64().unwrap().abs() <= 1e-8 && z[2].as_f64().unwrap().abs() <= 1e-8);
    assert!(report["generated_at_unix"].as_u64().unwrap() > 0);
}

#[test]
fn json_flag_prints_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", ONE_ZERO);
    let o = run(&[
        "verify", "--config", &cfg, "--grid", "40x16", "--tol", "loose", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["tolerances"]["level"], "loose");
    assert_eq!(report["grid"]["radial_samples"], 40);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"m":1,"n":0,"a":[2,1],"alpha":[1]}"#,
    );
    let o = run(&["verify", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ordering violation"));

    let missing = dir.path().join("nope.json");
    assert_eq!(
        run(&["verify", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let good = write(dir.path(), "c.json", ONE_ZERO);
    assert_eq!(
        run(&["verify", "--config", &good, "--grid", "20"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--config", &good, "--tol", "tight"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "--cones", "0"]).status.code(), Some(2));
}

#[test]
fn all_up_cannot_have_horizontal_ends() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "up.json",
        r#"{"m":2,"n":1,"a":[1,2,3,4],"b":[-1,-2],"alpha":[-1,-1],"beta":[1]}"#,
    );
    let o = run(&[
        "verify",
        "--config",
        &cfg,
        "--grid",
        "30x12",
        "--require-horizontal-ends",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["verify", "--config", &cfg, "--grid", "30x12"]);
    assert_eq!(o.status.code(), Some(0));
}

fn cone_lines(obj: &str) -> Vec<String> {
    obj.lines()
        .filter(|l| l.starts_with("# cone "))
        .map(str::to_string)
        .collect()
}

#[test]
fn mesh_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", ONE_ZERO);
    let obj = dir.path().join("m.obj");
    let o = run(&[
        "mesh",
        "--config",
        &cfg,
        "--grid",
        "40x16",
        "--copies",
        "0",
        "--out",
        obj.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(cone_lines(&text).len(), 1);
    let report: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("m.obj.report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["graph"]["passed"], true);
    let e0 = &report["mesh"]["x2_extent"];
    let w0 = e0[1].as_f64().unwrap() - e0[0].as_f64().unwrap();

    let obj2 = dir.path().join("m2.obj");
    let o = run(&[
        "mesh",
        "--config",
        &cfg,
        "--grid",
        "40x16",
        "--copies",
        "2",
        "--out",
        obj2.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("m2.obj.report.json")).unwrap(),
    )
    .unwrap();
    let e2 = &report["mesh"]["x2_extent"];
    let w2 = e2[1].as_f64().unwrap() - e2[0].as_f64().unwrap();
    assert!((w2 - w0 - 4.0 * PI).abs() < 1e-9);

    let ply = dir.path().join("m.ply");
    let o = run(&[
        "mesh",
        "--config",
        &cfg,
        "--grid",
        "40x16",
        "--out",
        ply.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let bytes = std::fs::read(&ply).unwrap();
    assert!(bytes.starts_with(b"ply\nformat binary_little_endian 1.0\n"));
}

#[test]
fn mesh_two_two_class_one() {
    let catalog = run(&["catalog", "--cones", "4"]);
    let c: Value = serde_json::from_slice(&catalog.stdout).unwrap();
    let class = c["types"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["m"] == 2 && t["n"] == 2)
        .unwrap()["classes"][0]
        .clone();
    let up = |d: &Value| if d == "up" { 1 } else { -1 };
    let alpha: Vec<i32> = class["dirs_pos"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| -up(d))
        .collect();
    let beta: Vec<i32> = class["dirs_neg"]
        .as_array()
        .unwrap()
        .iter()
        .map(up)
        .collect();
    let cfg_text = serde_json::json!({
        "m": 2, "n": 2, "a": [1, 2, 3, 4], "b": [-1, -2, -3, -4], "alpha": alpha, "beta": beta
    })
    .to_string();
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &cfg_text);
    let obj = dir.path().join("m.obj");
    let o = run(&[
        "mesh",
        "--config",
        &cfg,
        "--grid",
        "60x20",
        "--out",
        obj.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&obj).unwrap();
    let lines = cone_lines(&text);
    assert_eq!(lines.len(), 4);
    // Two tags sit on x2 = 0 (positive axis), two on x2 = -pi.
    let verts: Vec<&str> = text.lines().filter(|l| l.starts_with("v ")).collect();
    let mut on_zero = 0;
    for l in &lines {
        let idx: usize = l.split(' ').nth(2).unwrap().parse().unwrap();
        let x2: f64 = verts[idx - 1].split(' ').nth(2).unwrap().parse().unwrap();
        if x2.abs() < 1e-9 {
            on_zero += 1;
        } else {
            assert!((x2 + PI).abs() < 1e-8);
        }
    }
    assert_eq!(on_zero, 2);
}

#[test]
fn catalog_counts() {
    let o = run(&["catalog", "--cones", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let c: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(c["counts"]["4,0"], 6);
    assert_eq!(c["counts"]["3,1"], 6);
    assert_eq!(c["counts"]["2,2"], 5);
    assert_eq!(c["total"], 17);

    let c: Value = serde_json::from_slice(&run(&["catalog", "--cones", "9"]).stdout).unwrap();
    assert_eq!(c["types"].as_array().unwrap().len(), 5);
    let c: Value = serde_json::from_slice(&run(&["catalog", "--cones", "1"]).stdout).unwrap();
    assert_eq!(c["types"].as_array().unwrap().len(), 1);
    assert_eq!(c["total"], 1);
}

#[test]
fn minimal_measure_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"m":1,"n":1,"a":[1,2],"b":[-1,-1.5],"alpha":[1],"beta":[1]}"#,
    );
    let o = run(&["minimal-measure", "--config", &cfg, "--json"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["normalized_params"]["b"][1], -2.0);
    assert!((r["gauss_at_zero"][0].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(r["lattices"].as_array().unwrap().len(), 2);
    assert_eq!(r["genus"], 1);
}
