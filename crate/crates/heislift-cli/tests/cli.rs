//! End-to-end tests of the command-line interface: exit-code contract,
//! report schema, curve lifting round trips, and byte-stable output.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heislift"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("heislift-cli-test-{}-{}", std::process::id(), name));
    p
}

fn write_circle_csv(path: &PathBuf, n: usize) {
    let mut text = String::from("s,re,im\n");
    for i in 0..n {
        let s = 2.0 * PI * i as f64 / (n - 1) as f64;
        text.push_str(&format!("{},{},{}\n", s, s.cos(), s.sin()));
    }
    std::fs::write(path, text).unwrap();
}

fn write_hyperbolic_circle_csv(path: &PathBuf, n: usize) {
    let mut text = String::from("s,re,im\n");
    for i in 0..n {
        let s = 2.0 * PI * i as f64 / (n - 1) as f64;
        text.push_str(&format!(
            "{},{},{}\n",
            s,
            -1.0 + 0.5 * s.cos(),
            0.5 * s.sin()
        ));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn lift_twist_passes_with_lambda_one() {
    let out = run(&["lift", "--map", r#"{"name":"twist","k":2.0,"c":0.0}"#]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["summary"]["pass"], true);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 400);
    for row in rows {
        let l = row["lambda_star"].as_f64().unwrap();
        assert!((l - 1.0).abs() < 1e-6, "λ* = {l}");
    }
}

#[test]
fn lift_identity_has_zero_mu() {
    let out = run(&["lift", "--map", "identity"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    for row in doc["rows"].as_array().unwrap() {
        let mu = (row["mu_re"].as_f64().unwrap().powi(2) + row["mu_im"].as_f64().unwrap().powi(2))
            .sqrt();
        assert!(mu < 1e-9);
    }
}

#[test]
fn lift_plain_stretch_exits_2() {
    let out = run(&["lift", "--map", "plainstretch"]);
    assert_eq!(out.status.code(), Some(2));
    // --force emits the (invalid) lift, tagged, and exits 1
    let forced = run(&["lift", "--map", "plainstretch", "--force"]);
    assert_eq!(forced.status.code(), Some(1));
    let doc = stdout_json(&forced);
    assert_eq!(doc["forced"], true);
}

#[test]
fn lift_output_is_deterministic() {
    let a = tmp_path("det-a.json");
    let b = tmp_path("det-b.json");
    for path in [&a, &b] {
        let out = run(&[
            "lift",
            "--map",
            r#"{"name":"su11","a":1.2,"b":0.3,"c":0.4,"d":0.7333333333333333}"#,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ba, bb, "reports differ between runs");
    std::fs::remove_file(a).ok();
    std::fs::remove_file(b).ok();
}

#[test]
fn check_contact_su11_is_conformal() {
    let out = run(&[
        "check-contact",
        "--map",
        r#"{"name":"su11","a":1.0,"b":0.5,"c":0.0,"d":1.0,"theta":0.3}"#,
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let max_k = doc["summary"]["max_K"].as_f64().unwrap();
    assert!((max_k - 1.0).abs() < 1e-6, "max K = {max_k}");
    assert_eq!(doc["summary"]["mu_within_bound"], true);
}

#[test]
fn distortion_twist_matches_extremal_bound() {
    let out = run(&[
        "distortion",
        "--map",
        r#"{"name":"twist","k":2.0,"c":0.0}"#,
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let cols: Vec<&str> = header.split(',').collect();
    let k_idx = cols.iter().position(|c| *c == "K").unwrap();
    let mu_re_idx = cols.iter().position(|c| *c == "mu_re").unwrap();
    let mu_im_idx = cols.iter().position(|c| *c == "mu_im").unwrap();
    let expect_mu = 2.0 / 8.0f64.sqrt();
    let expect_k = (1.0 + expect_mu) / (1.0 - expect_mu);
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((f[k_idx] - expect_k).abs() < 1e-6);
        let mu = (f[mu_re_idx].powi(2) + f[mu_im_idx].powi(2)).sqrt();
        assert!((mu - expect_mu).abs() < 1e-9);
    }
}

#[test]
fn check_contact_heis_isometry() {
    let out = run(&[
        "check-contact",
        "--map",
        r#"{"name":"dilation","delta":2.0}"#,
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["kind"], "heis");
    // λ = δ² = 4 for the dilation
    let row = &doc["rows"][0];
    assert!((row["lambda_star"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn curve_lift_heis_circle() {
    let input = tmp_path("circle.csv");
    write_circle_csv(&input, 512);
    let output = tmp_path("circle-lift.csv");
    let out = run(&[
        "curve-lift",
        "--in",
        input.to_str().unwrap(),
        "--kind",
        "heis",
        "--out",
        output.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&output).unwrap();
    assert!(text.starts_with("s,re,im,t\n"));
    let last = text.lines().last().unwrap();
    let t: f64 = last.split(',').nth(3).unwrap().parse().unwrap();
    assert!((t + 4.0 * PI).abs() < 1e-5, "Δt = {t}");
    std::fs::remove_file(input).ok();
    std::fs::remove_file(output).ok();
}

#[test]
fn curve_lift_star_circle() {
    let input = tmp_path("star-src.csv");
    write_hyperbolic_circle_csv(&input, 512);
    let out = run(&[
        "curve-lift",
        "--in",
        input.to_str().unwrap(),
        "--kind",
        "star",
        "--basepoint",
        "0.25",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "s,re,im,t");
    // the lift projects back onto the source circle: |z|² = −ξ, t = η
    for (line, i) in lines.zip(0..) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let s = 2.0 * PI * i as f64 / 511.0;
        let (xi, eta) = (-1.0 + 0.5 * s.cos(), 0.5 * s.sin());
        assert!((f[1] * f[1] + f[2] * f[2] + xi).abs() < 1e-9);
        assert!((f[3] - eta).abs() < 1e-9);
    }
    std::fs::remove_file(input).ok();
}

#[test]
fn holonomy_heis_circle() {
    let input = tmp_path("holo.csv");
    write_circle_csv(&input, 512);
    let out = run(&[
        "holonomy",
        "--in",
        input.to_str().unwrap(),
        "--kind",
        "heis",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let delta = doc["delta"].as_f64().unwrap();
    let area = doc["area_oracle"].as_f64().unwrap();
    assert!((delta + 4.0 * PI).abs() < 1e-5, "Δt = {delta}");
    assert!((area - PI).abs() < 1e-6);
    assert!(doc["residual"].as_f64().unwrap() < 1e-5);
    std::fs::remove_file(input).ok();
}

#[test]
fn holonomy_star_circle() {
    let input = tmp_path("holo-star.csv");
    write_hyperbolic_circle_csv(&input, 512);
    let out = run(&[
        "holonomy",
        "--in",
        input.to_str().unwrap(),
        "--kind",
        "star",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let exact_area = 0.5 * PI * (2.0 / 3.0f64.sqrt() - 1.0);
    assert!((doc["area_oracle"].as_f64().unwrap() - exact_area).abs() < 1e-6);
    assert!(doc["residual"].as_f64().unwrap() < 1e-6);
    std::fs::remove_file(input).ok();
}

#[test]
fn malformed_curve_exits_4() {
    let input = tmp_path("bad.csv");
    std::fs::write(&input, "x,y\n0,1\n").unwrap();
    let out = run(&[
        "holonomy",
        "--in",
        input.to_str().unwrap(),
        "--kind",
        "heis",
    ]);
    assert_eq!(out.status.code(), Some(4));
    // a missing file is also a curve-file failure
    let gone = tmp_path("missing.csv");
    let out = run(&[
        "curve-lift",
        "--in",
        gone.to_str().unwrap(),
        "--kind",
        "heis",
    ]);
    assert_eq!(out.status.code(), Some(4));
    // non-increasing parameters violate the curve invariants
    let dup = tmp_path("dup.csv");
    std::fs::write(&dup, "s,re,im\n0,1,0\n0,1,1\n1,1,2\n").unwrap();
    let out = run(&[
        "curve-lift",
        "--in",
        dup.to_str().unwrap(),
        "--kind",
        "heis",
    ]);
    assert_eq!(out.status.code(), Some(4));
    std::fs::remove_file(dup).ok();
    std::fs::remove_file(input).ok();
}

#[test]
fn catalog_list_names_every_family() {
    let out = run(&["catalog", "list"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let names: Vec<&str> = doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    for expected in [
        "identity",
        "su11",
        "twist",
        "spiral",
        "plainstretch",
        "inversion",
    ] {
        assert!(names.contains(&expected), "missing {expected}");
    }
}

#[test]
fn invalid_map_spec_exits_1() {
    let out = run(&["lift", "--map", r#"{"name":"nope"}"#]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn machine_output_goes_to_stdout_only() {
    let out = run(&["lift", "--map", "identity"]);
    assert!(out.status.success());
    assert!(
        out.stderr.is_empty(),
        "stderr should carry no machine output"
    );
    assert!(!out.stdout.is_empty());
}
