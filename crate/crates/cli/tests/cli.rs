use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn iocode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iocode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_bundled_p5() {
    let out = iocode(&["solve", fixture("p5.edges").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["gamma"], 4);
    assert_eq!(v["method"], "branch_and_bound");
    let oracle = json(&iocode(&["solve", fixture("p5.edges").to_str().unwrap(), "--oracle"]));
    assert_eq!(oracle["gamma"], 4);
    assert_eq!(oracle["method"], "oracle");
}

#[test]
fn budget_decision() {
    let g = fixture("g5.edges");
    let none = json(&iocode(&["solve", g.to_str().unwrap(), "--budget", "24"]));
    assert_eq!(none["feasible"], false);
    let some = json(&iocode(&["solve", g.to_str().unwrap(), "--budget", "25"]));
    assert_eq!(some["feasible"], true);
}

#[test]
fn verify_exit_codes() {
    let ok = iocode(&[
        "verify",
        fixture("g5.edges").to_str().unwrap(),
        fixture("g5_sstar.code").to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["ok"], true);

    let bad = iocode(&["verify", fixture("p5.edges").to_str().unwrap(), "1,3"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["violation"]["kind"], "not_totally_dominated");

    let missing = iocode(&["verify", "/nonexistent/graph", "0"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn parse_errors_report_position() {
    let dir = std::env::temp_dir().join(format!("iocode-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.edges");
    std::fs::write(&path, "0 1\n1 q\n").unwrap();
    let out = iocode(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, byte 2"), "{err}");
}

#[test]
fn generate_subdivided_star() {
    let out = iocode(&["generate", "subdivided-star", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# order: 9\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 8);

    let g6 = iocode(&["generate", "star-plus-edge", "G2", "2", "--format", "g6"]);
    assert_eq!(String::from_utf8(g6.stdout).unwrap().trim().len(), 3);

    let rejected = iocode(&["generate", "family-t", "1", "0", "0", "0", "0", "0"]);
    assert_eq!(rejected.status.code(), Some(2));
    let rejected = iocode(&["generate", "subcubic-gp", "4"]);
    assert_eq!(rejected.status.code(), Some(2));
}

#[test]
fn generate_sidecar() {
    let dir = std::env::temp_dir().join(format!("iocode-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("pair.g6");
    let status = iocode(&[
        "generate",
        "tight-tree-pair",
        "3",
        "--format",
        "g6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("pair.g6.json")).unwrap()).unwrap();
    assert_eq!(side["order"], 12);
    assert_eq!(side["reference_code"].as_array().unwrap().len(), 10);
    let v = json(&iocode(&["construct", out.to_str().unwrap(), "--delta", "3"]));
    assert_eq!(v["bound_status"], "within_bound");
    assert!(v["size"].as_u64().unwrap() <= 10);
}

#[test]
fn construct_reports_trace() {
    let v = json(&iocode(&["construct", fixture("g5.edges").to_str().unwrap()]));
    assert_eq!(v["delta"], 3);
    assert!(v["size"].as_u64().unwrap() <= 25);
    assert!(!v["trace"]["steps"].as_array().unwrap().is_empty());
    let star = iocode(&["generate", "subdivided-star", "3"]);
    let dir = std::env::temp_dir().join(format!("iocode-con-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t3.edges");
    std::fs::write(&path, star.stdout).unwrap();
    let v = json(&iocode(&["construct", path.to_str().unwrap()]));
    assert_eq!(v["bound_status"], "exceptional_star");
    assert_eq!(v["trace"]["exceptional"], true);
}

#[test]
fn signature_table() {
    let out = iocode(&["signature", fixture("p5.edges").to_str().unwrap(), "0 1 3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("0\t{1, 3}"));
    let js = json(&iocode(&[
        "signature",
        fixture("p5.edges").to_str().unwrap(),
        "0,1,3",
        "--json",
    ]));
    assert_eq!(js[4], serde_json::json!([3]));
}

#[test]
fn audits_write_reports() {
    let dir = std::env::temp_dir().join(format!("iocode-audit-{}", std::process::id()));
    let out = iocode(&[
        "audit",
        "trees",
        "--n-max",
        "9",
        "--delta",
        "3",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&out);
    assert_eq!(summary["violations"], 0);
    assert_eq!(summary["exceptional"], 1);
    let csv = std::fs::read_to_string(dir.join("trees.csv")).unwrap();
    assert!(csv.starts_with("id,n,m,"));
    assert!(dir.join("trees_summary.json").is_file());

    let fam = iocode(&["audit", "families", "--delta-max", "3", "--p-max", "5"]);
    assert_eq!(fam.status.code(), Some(0));
    assert_eq!(json(&fam)["all_ok"], true);

    let bad = iocode(&["audit", "trees", "--n-max", "3"]);
    assert_eq!(bad.status.code(), Some(2));
}
