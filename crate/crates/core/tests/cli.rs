use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evanescent"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], config: Option<&Path>, out: Option<&Path>) -> Output {
    let mut c = bin();
    c.args(args);
    if let Some(p) = config {
        c.arg("--config").arg(p);
    }
    if let Some(p) = out {
        c.arg("--out").arg(p);
    }
    c.output().unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const GLASS_AIR_GLASS: &str = r#"{"entry":{"n":1.5},"layers":[{"n":1.0,"d":1.0}],"exit":{"n":1.5}}"#;

#[test]
fn dispersion_table() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "d.json",
        r#"{"mode":{"a":3.141592653589793,"b":3.141592653589793,"n1":1,"n2":1},
            "omega":{"start":0.1,"stop":10,"count":100}}"#,
    );
    let out = dir.path().join("d.csv");
    let o = run(&["dispersion"], Some(&cfg), Some(&out));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("omega,omega_c,k_re,k_im,v_p,v_g"));
    let r = rows(&text);
    assert_eq!(r.len(), 100);
    for row in &r {
        let omega: f64 = row[0].parse().unwrap();
        assert_eq!(omega < 2f64.sqrt(), row[4].is_empty() && row[5].is_empty());
        // 17 significant digits.
        assert_eq!(row[0].split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
    }
}

#[test]
fn minimal_scan_has_two_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "d.json",
        r#"{"mode":{"a":1,"b":2,"n1":1,"n2":1},"omega":{"start":1,"stop":10,"count":2}}"#,
    );
    let o = run(&["dispersion"], Some(&cfg), None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&String::from_utf8(o.stdout).unwrap()).len(), 2);
}

#[test]
fn malformed_config_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.json", r#"{"mode": {"a": 1,"#);
    let out = dir.path().join("never.csv");
    for cmd in ["dispersion", "tir", "ftir", "wkb"] {
        let o = run(&[cmd], Some(&cfg), Some(&out));
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(!out.exists(), "{cmd}");
    }
    let invalid_range = write(
        &dir,
        "range.json",
        r#"{"mode":{"a":1,"b":1,"n1":1,"n2":1},"omega":{"start":1,"stop":10,"count":1}}"#,
    );
    assert_eq!(run(&["dispersion"], Some(&invalid_range), Some(&out)).status.code(), Some(2));
    assert_eq!(run(&["dispersion"], None, Some(&out)).status.code(), Some(2));
    assert_eq!(run(&["dispersion"], Some(&dir.path().join("missing.json")), None).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"], None, None).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn domain_error_exits_3() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "t.json",
        r#"{"n1":-1.5,"n2":1.0,"omega":1.0,"theta":{"start":0,"stop":1,"count":5}}"#,
    );
    let out = dir.path().join("t.csv");
    assert_eq!(run(&["tir"], Some(&cfg), Some(&out)).status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn tir_summary_and_rows() {
    let dir = TempDir::new().unwrap();
    let glass = write(
        &dir,
        "g.json",
        r#"{"n1":1.5,"n2":1.0,"omega":6.283185307179586,"theta":{"start":0,"stop":1.5,"count":31}}"#,
    );
    let o = run(&["tir"], Some(&glass), None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("theta_c=0.729728"));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("theta0,theta2_re,theta2_im,abs_r,depth"));
    for row in rows(&text) {
        let theta: f64 = row[0].parse().unwrap();
        let abs_r: f64 = row[3].parse().unwrap();
        if theta > 0.7297276562269663 {
            assert!((abs_r - 1.0).abs() < 1e-12);
            assert!(!row[4].is_empty());
        } else {
            assert!(row[4].is_empty());
        }
    }

    let rare = write(
        &dir,
        "r.json",
        r#"{"n1":1.0,"n2":1.5,"omega":1.0,"theta":{"start":0,"stop":1.5,"count":10},"polarization":"p"}"#,
    );
    let o = run(&["tir"], Some(&rare), None);
    assert!(stderr(&o).contains("theta_c=none"));
    assert!(rows(&String::from_utf8(o.stdout).unwrap()).iter().all(|r| r[2].parse::<f64>().unwrap() == 0.0));
}

fn ftir_config(extra: &str, d: &str) -> String {
    format!(r#"{{"stack":{GLASS_AIR_GLASS},"d":{d},"d_unit":"wavelength","omega":6.283185307179586{extra}}}"#)
}

#[test]
fn ftir_decay_and_saturation_summary() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "f.json",
        &ftir_config(
            r#","theta_above_critical":0.1"#,
            r#"{"start":0.1,"stop":10,"count":50,"spacing":"log"}"#,
        ),
    );
    let out = dir.path().join("f.csv");
    let o = run(&["ftir"], Some(&cfg), Some(&out));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(!err.contains("warning"));
    assert!(err.contains("tau_g(d_max)="));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("d,abs_t2,phase_t,tau_g,v_eff"));
    let t2: Vec<f64> = rows(&text).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(t2.len(), 50);
    assert!(t2.windows(2).all(|w| w[1] < w[0]));

    // Identical bytes on a second run.
    let again = dir.path().join("f2.csv");
    run(&["ftir"], Some(&cfg), Some(&again));
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn ftir_thin_gap_matches_direct_interface() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "f.json",
        &ftir_config(r#","theta0":0.3"#, r#"{"start":0.0001,"stop":0.001,"count":5,"spacing":"log"}"#),
    );
    let o = run(&["ftir"], Some(&cfg), None);
    assert_eq!(o.status.code(), Some(0));
    // Same glass on both sides: the direct interface transmits fully.
    for r in rows(&String::from_utf8(o.stdout).unwrap()) {
        let t2: f64 = r[1].parse().unwrap();
        assert!((t2 - 1.0).abs() < 1e-4, "{t2}");
    }
}

#[test]
fn ftir_normal_incidence_warns_and_delay_grows() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "f.json",
        &ftir_config(r#","theta0":0.0"#, r#"{"start":1,"stop":20,"count":5}"#),
    );
    let o = run(&["ftir"], Some(&cfg), None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let tau: Vec<f64> = rows(&String::from_utf8(o.stdout).unwrap())
        .iter()
        .map(|r| r[3].parse().unwrap())
        .collect();
    assert!(tau[4] > 10.0 * tau[0]);
}

#[test]
fn wkb_report_from_potential_file() {
    let dir = TempDir::new().unwrap();
    let values = vec!["1.0"; 101].join(",");
    write(
        &dir,
        "barrier.json",
        &format!(r#"{{"grid":{{"x_min":0,"x_max":1,"n":101}},"V":[{values}]}}"#),
    );
    let cfg = write(&dir, "w.json", r#"{"potential":"barrier.json","energy":0.5}"#);
    let o = run(&["wkb"], Some(&cfg), None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let region = &v["regions"][0];
    assert_eq!(region["kind"], "forbidden");
    assert!((region["S_r"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((region["exp_neg_S_r"].as_f64().unwrap() - 0.367879).abs() < 1e-6);
    assert!((v["tau_im"][0].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let above = write(&dir, "a.json", r#"{"potential":"barrier.json","energy":2.0}"#);
    let v: serde_json::Value = serde_json::from_slice(&run(&["wkb"], Some(&above), None).stdout).unwrap();
    assert_eq!(v["regions"].as_array().unwrap().len(), 1);
    assert_eq!(v["regions"][0]["kind"], "allowed");
    assert!(v["tau_im"].as_array().unwrap().is_empty());
}

#[test]
fn verify_passes_and_detects_fault() {
    let o = run(&["verify"], None, None);
    let report = String::from_utf8(o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(0), "{report}");
    assert_eq!(report.lines().filter(|l| l.starts_with("PASS")).count(), 10);

    let o = bin().args(["verify", "--inject-fault", "branch-cut"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let report = String::from_utf8(o.stdout).unwrap();
    let failed: Vec<&str> = report.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("unitarity"));
}

#[test]
fn shipped_configs_run() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for cmd in ["dispersion", "tir", "ftir", "wkb"] {
        let o = run(&[cmd], Some(&configs.join(format!("{cmd}.json"))), None);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stderr(&o));
        assert!(!o.stdout.is_empty());
    }
}
