//! End-to-end runs of the `poncelet` binary.

use std::path::Path;
use std::process::{Command, Output};

use nalgebra::Matrix3;
use poncelet::pencil::{Pencil, PencilSpec};
use serde_json::Value;

const REFERENCE: &str = "0.2,0.125,0.111111";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poncelet")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn points(attr: &str) -> Vec<(f64, f64)> {
    attr.split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    f64::hypot(p.0 - a.0 - t * dx, p.1 - a.1 - t * dy)
}

// Well-formed, one root, and every orbit vertex on the outer outline within 0.1% of the view box.
fn check_svg(path: &Path) {
    let text = std::fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed SVG");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(doc.root().children().filter(|n| n.is_element()).count(), 1);
    assert!(text.find("<script").is_none());
    let vb: Vec<f64> = root.attribute("viewBox").unwrap().split_whitespace().map(|v| v.parse().unwrap()).collect();
    let scale = vb[2].max(vb[3]);
    let outer = root.children().find(|n| n.has_tag_name("polygon")).expect("outer outline");
    let mut ring = points(outer.attribute("points").unwrap());
    ring.push(ring[0]);
    let orbit = root.children().find(|n| n.has_tag_name("polyline")).expect("orbit path");
    for v in points(orbit.attribute("points").unwrap()) {
        let d = ring.windows(2).map(|w| segment_distance(v, w[0], w[1])).fold(f64::INFINITY, f64::min);
        assert!(d < 1e-3 * scale, "vertex {v:?} is {d} from the outline");
        assert!(v.0 >= vb[0] && v.0 <= vb[0] + vb[2] && v.1 >= vb[1] && v.1 <= vb[1] + vb[3]);
    }
    for n in root.children().filter(|n| n.is_element()) {
        if n.has_tag_name("polygon") || n.has_tag_name("polyline") {
            assert_eq!(n.attribute("fill"), Some("none"));
        }
    }
}

// The reference pencil moved off the diagonal chart, written as a pencil file.
fn tilted_pencil_file(dir: &Path) -> std::path::PathBuf {
    let base = Pencil::from_lambdas(0.2, 0.125, 1.0 / 9.0).unwrap();
    let s = Matrix3::new(1.6, 0.4, 0.3, 0.0, 0.9, -0.5, 0.0, 0.0, 1.0).try_inverse().unwrap();
    let spec = PencilSpec::Conics { c1: base.outer().conic().congruent(&s), c2: base.inner().conic().congruent(&s) };
    let path = dir.join("tilted.json");
    std::fs::write(&path, serde_json::to_string(&spec).unwrap()).unwrap();
    path
}

#[test]
fn rotation_of_the_reference_pencil() {
    let v = json(&run(&["rotation", "--lambda", REFERENCE, "--nu", "0,1"]));
    // The truncated 0.111111 moves e off sqrt(27/32) in the seventh digit.
    let e = v["e"].as_f64().unwrap();
    assert!((e - ((0.2f64 - 0.125) / (0.2 - 0.111111)).sqrt()).abs() < 1e-15);
    assert!((e - 0.918_559).abs() < 1e-6);
    let rho = v["rho"].as_f64().unwrap();
    assert!((rho - 1.0 / 6.0).abs() < 1e-5);
    let v = json(&run(&["rotation", "--lambda", REFERENCE, "--nu", "0,1", "--steps", "10000"]));
    assert!(v["residual"].as_f64().unwrap() < 2e-4);
    assert_eq!(v["steps"], 10000);
}

#[test]
fn rotation_of_a_confocal_pair() {
    let v = json(&run(&["rotation", "--confocal", "0.8,0.572851"]));
    assert!((v["rho"].as_f64().unwrap() - 2.0 / 7.0).abs() < 5e-6);
    let out = run(&["rotation", "--confocal", "0.5,0.6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error[not_in_delta]"));
    assert!(stderr(&out).contains("not in Delta"));
}

#[test]
fn invert_writes_svg_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("out.svg");
    let out = run(&["invert", "--lambda", REFERENCE, "--ell", "1/4", "--svg", svg.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["ell"], "1/4");
    assert_eq!(v["orbit"]["steps"], 4);
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out.json")).unwrap()).unwrap();
    assert!(sidecar["closure_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(sidecar["points"].as_array().unwrap().len(), 5);
    check_svg(&svg);
}

#[test]
fn invert_confocal_heptagon() {
    let v = json(&run(&["invert", "--ell", "2/7", "--confocal-e", "0.8"]));
    assert!((v["f"].as_f64().unwrap() - 0.572_851).abs() < 5e-7);
    assert_eq!(v["orbit"]["steps"], 7);
    assert_eq!(v["orbit"]["winding"], 2);
}

#[test]
fn invalid_inputs_exit_two() {
    for args in [
        vec!["invert", "--ell", "0.6"],
        vec!["invert", "--lambda", REFERENCE, "--ell", "0.6"],
        vec!["invert", "--lambda", REFERENCE, "--ell", "1/2"],
        vec!["rotation", "--lambda", "0.1,0.2,0.3"],
        vec!["rotation", "--lambda", REFERENCE, "--nu", "-1,0.5"],
        vec!["verify", "--suite", "nonsense"],
        vec!["sweep", "--grid", "3x4"],
        vec!["bogus"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
    let out = run(&["invert", "--lambda", REFERENCE, "--ell", "0.6"]);
    assert!(stderr(&out).contains("error[invalid_rotation]"));
}

#[test]
fn polygon_and_pencil_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = tilted_pencil_file(dir.path());
    let f = file.to_str().unwrap();
    let v = json(&run(&["polygon", "--pencil", f, "--ell", "2/7"]));
    assert_eq!(v["steps"], 7);
    assert_eq!(v["winding"], 2);
    assert!(v["closure_residual"].as_f64().unwrap() < 1e-7);
    let r = json(&run(&["rotation", "--pencil", f, "--nu", "0,1"]));
    let d = json(&run(&["rotation", "--lambda", "0.2,0.125,0.1111111111111111", "--nu", "0,1"]));
    assert!((r["rho"].as_f64().unwrap() - d["rho"].as_f64().unwrap()).abs() < 1e-12);

    let lam = dir.path().join("lam.json");
    std::fs::write(&lam, r#"{"lambda": [0.2, 0.125, 0.1111111111111111]}"#).unwrap();
    let v = json(&run(&["rotation", "--pencil", lam.to_str().unwrap(), "--nu", "0,1"]));
    assert_eq!(v["rho"], d["rho"]);
    let out = run(&["rotation", "--pencil", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn render_tilted_pencil() {
    let dir = tempfile::tempdir().unwrap();
    let file = tilted_pencil_file(dir.path());
    let svg = dir.path().join("tilted.svg");
    let out = run(&["render", "--pencil", file.to_str().unwrap(), "--ell", "3/10", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    check_svg(&svg);
    let out = run(&["render", "--lambda", REFERENCE]);
    assert!(out.status.success());
    assert!(roxmltree::Document::parse(std::str::from_utf8(&out.stdout).unwrap()).is_ok());
}

#[test]
fn sweep_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&["sweep", "--grid", "4x4", "--steps", "2000", "--out", p.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("e,f,rho_closed_form,rho_numeric,residual"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 16);
    for r in rows {
        assert_eq!(r.len(), 5);
        assert!(r[1] < r[0] && r[0] < 1.0 && r[1] > 0.0);
        assert!((r[2] - r[3]).abs() - r[4] == 0.0);
        assert!(r[4] < 1e-3);
    }
}

#[test]
fn json_output_is_byte_stable() {
    let a = run(&["invert", "--lambda", REFERENCE, "--ell", "3/10"]);
    let b = run(&["invert", "--lambda", REFERENCE, "--ell", "3/10"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.status.success());
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--suite", "composition"]);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"cubic_field_z21_equals_z0"));
    let v = json(&run(&["verify", "--suite", "cayley"]));
    assert_eq!(v["passed"], true);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["residual"].is_number() || c["residual"].is_null());
    }
}

#[test]
fn verify_all_within_a_minute() {
    let t = std::time::Instant::now();
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(t.elapsed().as_secs_f64() < 60.0);
}

#[test]
fn out_flag_writes_file_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["rotation", "--confocal", "0.8,0.572851", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("rho = 0.285714"), "{stdout}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["f"].as_f64().unwrap() - 0.572851).abs() < 1e-15);
}
