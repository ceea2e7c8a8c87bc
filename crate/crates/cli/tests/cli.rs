use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn taco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taco"))
        .args(args)
        .env_remove("TACO_SYNTH_FILE")
        .output()
        .expect("run taco")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const BELL_T: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\nt q[1];\nrz(0.3) q[0];\n";

#[test]
fn run_writes_report_and_artifacts() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("bell.qasm");
    fs::write(&input, BELL_T).unwrap();
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let o = taco(&[
        "run",
        input.to_str().unwrap(),
        "--epsilon",
        "1e-2",
        "--verify",
        "--report",
        &p("report.json"),
        "--emit-reduced",
        &p("reduced.qasm"),
        "--emit-pbc",
        &p("pbc.json"),
        "--emit-schedule",
        &p("schedule.json"),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(p("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["circuit"], "bell");
    assert_eq!(report["verification"]["passed"], true);
    let pbc: serde_json::Value = serde_json::from_str(&fs::read_to_string(p("pbc.json")).unwrap()).unwrap();
    assert!(pbc["rotations"].as_array().unwrap().len() > 1);
    let sched: serde_json::Value = serde_json::from_str(&fs::read_to_string(p("schedule.json")).unwrap()).unwrap();
    assert!(sched["total_cycles"].as_f64().unwrap() > 0.0);
    assert!(fs::read_to_string(p("reduced.qasm")).unwrap().starts_with("OPENQASM 2.0;"));
}

#[test]
fn run_is_deterministic() {
    let args = ["run", "--gen", "qft:4", "--epsilon", "1e-2"];
    let (a, b) = (taco(&args), taco(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("taco.toml");
    fs::write(&cfg, "epsilon = 0.05\ncompute_blocks = 2\n[cost_model]\nh = 1.0\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = taco(&["run", "--gen", "qft:3", "--config", cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["synthesis"]["epsilon"], 0.05);
    assert_eq!(r["cost"]["compute_blocks"], 2);
    let o = taco(&["run", "--gen", "qft:3", "--config", cfg, "--epsilon", "0.02", "--compute-blocks", "1"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["synthesis"]["epsilon"], 0.02);
    assert_eq!(r["cost"]["compute_blocks"], 1);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.qasm");
    fs::write(&bad, "OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n").unwrap();
    assert_eq!(taco(&["stats", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(taco(&["stats", "--gen", "qft:x"]).status.code(), Some(2));
    // the external backend has nothing to read
    assert_eq!(taco(&["synth", "--backend", "external", "0.3"]).status.code(), Some(3));
    // search cannot reach this precision within two T gates
    assert_eq!(taco(&["synth", "--max-tcount", "2", "0.3"]).status.code(), Some(3));

    let a = dir.path().join("a.qasm");
    let b = dir.path().join("b.qasm");
    fs::write(&a, "OPENQASM 2.0;\nqreg q[1];\nt q[0];\n").unwrap();
    fs::write(&b, "OPENQASM 2.0;\nqreg q[1];\ntdg q[0];\n").unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    assert_eq!(taco(&["verify", a, b]).status.code(), Some(4));
    assert_eq!(taco(&["verify", a, a]).status.code(), Some(0));
}

#[test]
fn synth_reads_sidecar_from_env() {
    let dir = TempDir::new().unwrap();
    let side = dir.path().join("words.txt");
    fs::write(&side, "pi/8 1e-3 HTHTSHTSHTSHTHTSHTHTSHTHTSHTSHTHTHTSHTHTHTHTHTHTHTSHTHTHTHTHTSHTHTHTSSH\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_taco"))
        .args(["synth", "--backend", "external", "pi/8"])
        .env("TACO_SYNTH_FILE", &side)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "HTHTSHTSHTSHTHTSHTHTSHTHTSHTSHTHTHTSHTHTHTHTHTHTHTSHTHTHTHTHTSHTHTHTSSH");
}

#[test]
fn verify_accepts_a_frame() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.qasm");
    let b = dir.path().join("b.qasm");
    fs::write(&a, "OPENQASM 2.0;\nqreg q[2];\nh q[0];\nx q[1];\n").unwrap();
    fs::write(&b, "OPENQASM 2.0;\nqreg q[2];\nh q[0];\n").unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    assert_eq!(taco(&["verify", a, b]).status.code(), Some(4));
    assert_eq!(taco(&["verify", a, b, "--frame", "IX"]).status.code(), Some(0));
}

#[test]
fn subcommands_chain() {
    let dir = TempDir::new().unwrap();
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    assert!(taco(&["decompose", "--gen", "wstate:3", "-o", &p("d.qasm")]).status.success());
    assert!(taco(&["transform", &p("d.qasm"), "-o", &p("t.qasm")]).status.success());
    let o = taco(&["reduce", &p("t.qasm"), "--epsilon", "1e-2", "-o", &p("r.qasm"), "--stats", &p("s.json")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stats: serde_json::Value = serde_json::from_str(&fs::read_to_string(p("s.json")).unwrap()).unwrap();
    assert!(stats["stats"]["h"]["reduction"].as_f64().unwrap() > 0.0);
    let o = taco(&["schedule", &p("r.qasm")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = taco(&["pbc", &p("r.qasm"), "--parallelism"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let angles = taco(&["transform", "--gen", "qft:4", "--list-angles"]);
    assert_eq!(stdout(&angles).lines().count(), 4);
}
