use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn plcone(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plcone"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn constants_table_passes() {
    let d = tempfile::tempdir().unwrap();
    let out = plcone(d.path(), &["constants"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("a5"));
    let r = json(&d.path().join("constants.json"));
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["claim"], "constants");
    assert!(r.get("runtime_seconds").is_none());
}

#[test]
fn strict_profile_exits_with_failure() {
    let d = tempfile::tempdir().unwrap();
    let out = plcone(d.path(), &["--tolerance-profile", "strict", "constants"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&d.path().join("constants.json"))["tolerance_profile"], "strict");
}

#[test]
fn usage_errors_use_their_own_status() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(plcone(d.path(), &["verify", "no-such-claim"]).status.code(), Some(3));
    assert_eq!(plcone(d.path(), &["--tolerance-profile", "loose", "constants"]).status.code(), Some(3));
    assert_eq!(plcone(d.path(), &["export", "T4", "stl"]).status.code(), Some(3));
    assert_eq!(plcone(d.path(), &["frobnicate"]).status.code(), Some(3));
}

#[test]
fn claims_are_listed() {
    let d = tempfile::tempdir().unwrap();
    let out = plcone(d.path(), &["claims"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 22);
    assert!(text.lines().any(|l| l == "t8-elimination"));
}

#[test]
fn verify_reports_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = plcone(d.path(), &["--seed", "7", "--samples", "50000", "verify", "partition-vi"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let f = "verify-partition-vi.json";
    assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    let r = json(&a.path().join(f));
    assert_eq!(r["seed"], 7);
    assert_eq!(r["samples"], 50000);
}

#[test]
fn timings_are_opt_in() {
    let d = tempfile::tempdir().unwrap();
    plcone(d.path(), &["--timings", "verify", "t8-elimination"]);
    let r = json(&d.path().join("verify-t8-elimination.json"));
    assert!(r["runtime_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(r["verdict"], "pass");
}

#[test]
fn exports() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(plcone(d.path(), &["export", "T4", "off"]).status.code(), Some(0));
    let off = fs::read_to_string(d.path().join("skeleton-T4.off")).unwrap();
    assert!(off.lines().nth(2) == Some("5 10 0"));
    assert_eq!(plcone(d.path(), &["export", "C8", "json"]).status.code(), Some(0));
    let c8 = json(&d.path().join("cell-C8.json"));
    assert_eq!(c8["vertices"].as_array().unwrap().len(), 20);
    assert_eq!(c8["faces"].as_array().unwrap().len(), 12);
    assert!(c8["residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(plcone(d.path(), &["export", "empty", "off"]).status.code(), Some(0));
    let empty = fs::read_to_string(d.path().join("empty.off")).unwrap();
    assert!(empty.ends_with("0 0 0\n"));
    let first = fs::read(d.path().join("skeleton-T4.off")).unwrap();
    plcone(d.path(), &["export", "skeleton:T4", "off"]);
    assert_eq!(fs::read(d.path().join("skeleton-T4.off")).unwrap(), first);
}

#[test]
fn config_errors_name_the_line() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("bad.cfg");
    fs::write(&cfg, "partition = T5\nsteps = 10\nstepz = 3\n").unwrap();
    let out = plcone(d.path(), &["evolve", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn evolve_writes_traces_and_meshes() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("small.cfg");
    fs::write(&cfg, "partition = T7\nname = small\npop_cell = C7\nsteps = 5\nrefine_levels = 0\ngradient_probes = 10\n").unwrap();
    let out = plcone(d.path(), &["evolve", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["small-initial.off", "small-popped.off", "small-final-L0.off", "small-trace-L0.csv", "small-report.json"] {
        assert!(d.path().join(f).exists(), "{f}");
    }
    let csv = fs::read_to_string(d.path().join("small-trace-L0.csv")).unwrap();
    assert!(csv.starts_with("step,mass,step_size,max_disp\n"));
    let r = json(&d.path().join("small-report.json"));
    let cone = r["cone_mass"].as_f64().unwrap();
    let popped = r["popped_mass"].as_f64().unwrap();
    let fin = r["runs"][0]["final_mass"].as_f64().unwrap();
    assert!(popped > cone && fin < popped);
    let again = tempfile::tempdir().unwrap();
    plcone(again.path(), &["evolve", cfg.to_str().unwrap()]);
    for f in ["small-report.json", "small-trace-L0.csv", "small-final-L0.off"] {
        assert_eq!(fs::read(d.path().join(f)).unwrap(), fs::read(again.path().join(f)).unwrap(), "{f}");
    }
}
