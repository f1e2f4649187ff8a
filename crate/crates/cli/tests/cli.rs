use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn multicover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multicover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_fano_matches_fixture() {
    let text = stdout(&multicover(&["gen", "fano"]));
    assert_eq!(
        text.trim(),
        r#"{"n":7,"edges":[[0,1,2],[0,3,4],[0,5,6],[1,3,5],[1,4,6],[2,3,6],[2,4,5]]}"#
    );
}

#[test]
fn gen_random_is_deterministic() {
    let args = ["gen", "random", "--n", "30", "--m", "50", "--seed", "1"];
    let a = stdout(&multicover(&args));
    assert_eq!(a, stdout(&multicover(&args)));
    let h: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(h["edges"].as_array().unwrap().len(), 50);
    let other = stdout(&multicover(&[
        "gen", "random", "--n", "30", "--m", "50", "--seed", "2",
    ]));
    assert_ne!(a, other);
}

#[test]
fn gen_complete_graph() {
    let h: Value = json(&multicover(&[
        "gen", "graph", "--family", "complete", "--n", "5",
    ]));
    let edges = h["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 10);
    assert!(edges.iter().all(|e| e.as_array().unwrap().len() == 2));
}

#[test]
fn solve_fano_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let fano = write(
        dir.path(),
        "fano.json",
        &stdout(&multicover(&["gen", "fano"])),
    );
    let out = json(&multicover(&[
        "solve", "--f", "2", "--lambda", "2/7", &fano,
    ]));
    assert_eq!(out["f"], 2);
    assert_eq!(out["lambda"], "2/7");
    assert_eq!(out["size"], 6);
    assert_eq!(out["picks"].as_array().unwrap().len(), 6);
    let groups = out["groups"].as_array().unwrap();
    let picks: u64 = groups.iter().map(|g| g[2].as_u64().unwrap()).sum();
    assert_eq!(picks, 6);
    // N = q^(f-1)Δ - p^(f-1) + 1 = 7·3 - 2 + 1
    assert_eq!(out["N"], 20);
}

#[test]
fn verify_fano_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let fano = write(
        dir.path(),
        "fano.json",
        &stdout(&multicover(&["gen", "fano"])),
    );
    let report = json(&multicover(&["verify", &fano, "--f", "1"]));
    assert_eq!(report["satisfied"], true);
    assert_eq!(report["all_hold"], true);
    assert_eq!(report["tau_star_exact"], "7/3");
}

#[test]
fn output_is_byte_identical_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(
        dir.path(),
        "h.json",
        &stdout(&multicover(&[
            "gen", "random", "--n", "12", "--m", "20", "--seed", "9",
        ])),
    );
    for args in [
        vec!["solve", "--f", "3", h.as_str()],
        vec!["lp", h.as_str()],
        vec!["verify", h.as_str(), "--f", "2", "--mode", "float"],
        vec!["exact", h.as_str(), "--f", "2", "--sandwich"],
    ] {
        assert_eq!(
            stdout(&multicover(&args)),
            stdout(&multicover(&args)),
            "{args:?}"
        );
    }
}

#[test]
fn lp_reports_rational_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(
        dir.path(),
        "tri.json",
        &stdout(&multicover(&["gen", "triangle"])),
    );
    let out = json(&multicover(&["lp", &tri, "--mode", "exact"]));
    assert_eq!(out["tau_star"], "3/2");
    assert_eq!(out["matching"]["objective"], "3/2");
    assert_eq!(out["gap"], "0/1");
    let float = json(&multicover(&["lp", &tri, "--mode", "float"]));
    assert!((float["tau_star"].as_f64().unwrap() - 1.5).abs() < 1e-9);
}

#[test]
fn exact_and_sandwich() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(
        dir.path(),
        "three.json",
        r#"{"n":2,"edges":[[0,1],[0],[1]]}"#,
    );
    let out = json(&multicover(&[
        "exact",
        &h,
        "--f",
        "2",
        "--sandwich",
        "--lambda",
        "1/2",
    ]));
    assert_eq!(out["tau_f"], 4);
    assert_eq!(out["sandwich"]["tau_f"], 4);
    assert_eq!(out["sandwich"]["greedy"], 4);
    assert_eq!(out["sandwich"]["f_tau_star"], "4/1");
}

#[test]
fn check_flags_undercovered_edge() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(
        dir.path(),
        "tri.json",
        &stdout(&multicover(&["gen", "triangle"])),
    );
    let good = write(dir.path(), "good.json", r#"{"picks":[[0,1],[1,1]]}"#);
    let bad = write(dir.path(), "bad.json", r#"{"picks":[[0,1]]}"#);
    assert_eq!(
        json(&multicover(&["check", &tri, &good]))["transversal"],
        true
    );
    let out = multicover(&["check", &tri, &bad]);
    assert_eq!(out.status.code(), Some(1));
    let oob = write(dir.path(), "oob.json", r#"{"picks":[[5,1]]}"#);
    assert_eq!(multicover(&["check", &tri, &oob]).status.code(), Some(3));
}

#[test]
fn parse_errors_exit_nonzero_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"n":2,"edges":[[0,5]]}"#);
    let out = multicover(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("edges[0][1]"), "{err}");
    let out = multicover(&["solve", "--lambda", "3/2", &bad]);
    assert!(!out.status.success());
}

#[test]
fn cover_square_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = stdout(&multicover(&[
        "gen",
        "geometric",
        "--a",
        "2",
        "--f",
        "2",
        "--grid-h",
        "0.1",
    ]));
    let path = write(dir.path(), "inst.json", &inst);
    let out = json(&multicover(&["cover", &path]));
    assert_eq!(out["verified"], true);
    assert_eq!(out["bound_holds"], true);
    let n_f = out["N_f"].as_u64().unwrap();
    let total: u64 = out["centers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c[2].as_u64().unwrap())
        .sum();
    assert_eq!(n_f, total);
    assert!(out["density"].as_f64().unwrap() >= 2.0);
}

#[test]
fn bench_small_suite_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("bench.csv");
    let out = multicover(&[
        "bench",
        "--suite",
        "small",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    stdout(&out);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("instance,n,m,Δ,f,λ,greedy_size,τ*,bound,time_ms")
    );
    // two instances × f ∈ {1, 2} × one λ
    assert_eq!(lines.count(), 4);
}
