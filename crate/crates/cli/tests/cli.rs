//! Runs the `signet` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const T1: &str = "signet-graph v1\nn 3\ndirected 0\n1 2 +1\n1 3 -1\n2 3 +1\n";
const T2: &str = "signet-graph v1\nn 3\ndirected 0\n1 2 +1\n1 3 -1\n2 3 -1\n";

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("signet-cli-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn signet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_signet")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn analyze_reports_the_bipartition() {
    let s = Scratch::new("analyze");
    let g = s.file("t2.graph", T2);
    let o = signet(&["analyze", "--graph", p(&g)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("verdict = StronglyBalanced"), "{text}");
    assert!(text.contains("partition = {1,2}|{3}"), "{text}");
}

#[test]
fn analyze_json_has_spectral_section() {
    let s = Scratch::new("analyze-json");
    let g = s.file("t2.graph", T2);
    let o = signet(&["analyze", "--graph", p(&g), "--json", "--rule", "opposing", "--alpha", "0.2", "--beta", "0.2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["balance"]["verdict"], "StronglyBalanced");
    assert_eq!(v["balance"]["partition"], serde_json::json!([[1, 2], [3]]));
    assert!(v.get("spectral").is_some_and(|s| !s.is_null()), "{v}");
}

#[test]
fn critical_beta_of_unbalanced_triangle() {
    let s = Scratch::new("beta");
    let g = s.file("t1.graph", T1);
    let o = signet(&["critical-beta", "--graph", p(&g), "--alpha", "0.2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("deterministic_beta_star = 0.1\n"), "{}", stdout(&o));
}

#[test]
fn simulate_writes_trajectory_and_prediction() {
    let s = Scratch::new("simulate");
    let g = s.file("t2.graph", T2);
    let out = s.0.join("out");
    let o = signet(&[
        "simulate", "--graph", p(&g), "--rule", "opposing", "--alpha", "0.2", "--beta", "0.2",
        "--x0", "1,0,0.5", "--steps", "200", "--out", p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,x1,x2,x3,h,spread,norm"));
    let pred = std::fs::read_to_string(out.join("prediction.txt")).unwrap();
    assert!(pred.contains("termination = Converged"), "{pred}");
}

#[test]
fn gossip_csv_artifacts() {
    let s = Scratch::new("gossip");
    let g = s.file("t1.graph", T1);
    let out = s.0.join("out");
    let o = signet(&[
        "gossip", "--graph", p(&g), "--rule", "repelling", "--alpha", "0.5", "--beta", "0.1",
        "--runs", "4", "--steps", "500", "--seed", "3", "--csv", "--out", p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    for key in ["runs", "verdicts", "outcomes", "terminal_states", "mse_curve", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["runs"], 4);
    let mse = std::fs::read_to_string(out.join("mse.csv")).unwrap();
    assert_eq!(mse.lines().next(), Some("t,mse"));
    assert!(out.join("terminal.csv").is_file());
}

#[test]
fn gossip_is_reproducible_across_processes() {
    let s = Scratch::new("repro");
    let g = s.file("t1.graph", T1);
    let run = |name: &str| {
        let out = s.0.join(name);
        let o = signet(&[
            "gossip", "--graph", p(&g), "--rule", "repelling", "--alpha", "0.3", "--beta", "10",
            "--bound", "1", "--runs", "20", "--steps", "5000", "--seed", "42", "--json", "--out", p(&out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out.join("summary.json")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn exit_codes() {
    let s = Scratch::new("exit");
    let t2 = s.file("t2.graph", T2);
    let looped = s.file("loop.graph", "signet-graph v1\nn 2\ndirected 0\n1 1 +1\n");
    let zero = s.file("zero.graph", "signet-graph v1\nn 2\ndirected 0\n1 2 0\n");
    assert_eq!(signet(&["analyze", "--graph", p(&looped)]).status.code(), Some(2));
    assert_eq!(signet(&["analyze", "--graph", p(&zero)]).status.code(), Some(2));
    assert_eq!(signet(&["analyze"]).status.code(), Some(1));
    assert_eq!(signet(&["analyze", "--graph", "/nonexistent/g"]).status.code(), Some(1));
    assert_eq!(signet(&["bogus"]).status.code(), Some(1));
    assert_eq!(signet(&["--help"]).status.code(), Some(0));
    // the positive part of T2 is disconnected, so no threshold exists
    assert_eq!(signet(&["critical-beta", "--graph", p(&t2), "--alpha", "0.2"]).status.code(), Some(3));
}
