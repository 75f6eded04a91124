use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn circlerig(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circlerig"))
        .args(args)
        .current_dir(dir)
        .env_remove("CIRCLERIG_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn construct(dir: &TempDir, kind: &str, file: &str) {
    let o = circlerig(&["construct", "--kind", kind, "--genus", "2", "-o", file], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn fuchsian_invariants_report_minus_two() {
    let dir = TempDir::new().unwrap();
    construct(&dir, "fuchsian", "rep.json");
    let o = circlerig(&["invariants", "-i", "rep.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("eu = -2"));
    for g in ["a1", "b1", "a2", "b2"] {
        assert!(out.contains(&format!("{g}: hyperbolic")), "{out}");
    }
}

#[test]
fn trivial_invariants_report_zero() {
    let dir = TempDir::new().unwrap();
    construct(&dir, "trivial", "t.json");
    let o = circlerig(&["invariants", "-i", "t.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("eu = 0"));
}

#[test]
fn probes_file_adds_words() {
    let dir = TempDir::new().unwrap();
    construct(&dir, "fuchsian", "rep.json");
    std::fs::write(dir.path().join("w.txt"), "# commutator of the first handle\nb1' a1' b1 a1\n").unwrap();
    let o = circlerig(&["invariants", "-i", "rep.json", "--probes", "w.txt"], dir.path());
    let out = stdout(&o);
    assert!(out.contains("b1' a1' b1 a1: hyperbolic") && out.contains("rot~ = -1 (certified)"), "{out}");
}

#[test]
fn additivity_passes_with_sum_containing_euler_number() {
    let dir = TempDir::new().unwrap();
    construct(&dir, "fuchsian", "rep.json");
    let o = circlerig(&["verify", "-i", "rep.json", "--check", "additivity"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["pass"], true);
    let (lo, hi) = (v["result"]["sum"]["lo"].as_f64().unwrap(), v["result"]["sum"]["hi"].as_f64().unwrap());
    assert!(lo <= -2.0 && -2.0 <= hi, "[{lo}, {hi}]");
}

#[test]
fn every_check_passes_on_fuchsian() {
    let dir = TempDir::new().unwrap();
    construct(&dir, "fuchsian", "rep.json");
    for check in ["chain-order", "separation", "pants-bound", "additivity", "fuchsian-torus"] {
        let o = circlerig(&["verify", "-i", "rep.json", "--check", check], dir.path());
        assert_eq!(o.status.code(), Some(0), "{check}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    construct(&dir, "trivial", "t.json");
    // no Fuchsian torus in the trivial representation
    let o = circlerig(&["verify", "-i", "t.json", "--check", "fuchsian-torus"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(circlerig(&["invariants", "-i", "missing.json"], dir.path()).status.code(), Some(1));
    assert_eq!(circlerig(&["invariants", "-i", "t.json", "--bogus"], dir.path()).status.code(), Some(1));
    assert_eq!(circlerig(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(circlerig(&["verify", "-i", "t.json", "--check", "nope"], dir.path()).status.code(), Some(1));

    // an elliptic map whose rotation number 1/pi cannot be enclosed to 1e-15
    let (c, s) = (1f64.cos(), 1f64.sin());
    let rep = format!(
        r#"{{"genus": 1, "free": true, "tol": 1e-9, "assignment": {{
            "a1": {{"kind": "mobius", "matrix": [[{c}, {}], [{s}, {c}]], "branch": 0}},
            "b1": {{"kind": "rotation", "angle": "0"}}}}}}"#,
        -s
    );
    std::fs::write(dir.path().join("e.json"), rep).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_circlerig"))
        .args(["invariants", "-i", "e.json"])
        .current_dir(dir.path())
        .env("CIRCLERIG_TOL", "1e-15")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = circlerig(&["invariants", "-i", "e.json"], dir.path());
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let lo: f64 = line.split('[').next_back().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((lo - std::f64::consts::FRAC_1_PI).abs() < 1e-9, "{line}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    construct(&dir, "fuchsian", "rep.json");
    let bend = ["bend", "-i", "rep.json", "--curve", "a1", "--samples", "9", "--report", "x.csv", "--json", "x.json"];
    let run = |suffix: &str| {
        let o = circlerig(&bend, dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        for f in ["x.csv", "x.json"] {
            std::fs::rename(dir.path().join(f), dir.path().join(format!("{f}{suffix}"))).unwrap();
        }
        circlerig(&["verify", "-i", "rep.json", "--check", "pants-bound"], dir.path()).stdout
    };
    let (v1, v2) = (run(".1"), run(".2"));
    assert_eq!(v1, v2);
    for f in ["x.csv", "x.json"] {
        let a = std::fs::read(dir.path().join(format!("{f}.1"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("{f}.2"))).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("x.csv.1")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(1) == Some("-2")));
    let a = circlerig(&["construct", "--kind", "fuchsian", "--genus", "3"], dir.path()).stdout;
    assert_eq!(a, circlerig(&["construct", "--kind", "fuchsian", "--genus", "3"], dir.path()).stdout);
}

#[test]
fn separating_bend_and_svg() {
    let dir = TempDir::new().unwrap();
    construct(&dir, "fuchsian", "rep.json");
    let o = circlerig(&["bend", "-i", "rep.json", "--curve", "b1' a1' b1 a1", "--scale", "-1", "--samples", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("eu = -2 at all 5 samples"));
    let o = circlerig(&["svg", "-i", "rep.json", "--words", "a1,b1", "-o", "fig.svg"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    for l in ["a1+", "a1-", "b1+", "b1-"] {
        assert!(svg.contains(&format!(">{l}</text>")), "{l}");
    }
}
