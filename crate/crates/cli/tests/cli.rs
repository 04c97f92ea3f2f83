use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use difactor_cli::parse;
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_difactor")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn sharp7(dir: &Path) -> String {
    let out = bin(&["gen", "sharpness-degree", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    write(dir, "sharp7.dg", &stdout(&out)).display().to_string()
}

#[test]
fn solve_triangle() {
    let dir = TempDir::new().unwrap();
    let tri = write(dir.path(), "tri.dg", "digraph 3\narc 0 1\narc 1 2\narc 2 0\n");
    let out = bin(&["solve", "--k", "1", "--input", tri.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("status=solved"));
    assert!(text.contains("cycles=0 1 2"));
}

#[test]
fn solve_json_lines_is_stable() {
    let dir = TempDir::new().unwrap();
    let tri = write(dir.path(), "tri.dg", "digraph 3\narc 0 1\narc 1 2\narc 2 0\n");
    let args = ["solve", "--k", "1", "--input", tri.to_str().unwrap(), "--format", "json-lines"];
    let first = stdout(&bin(&args));
    assert_eq!(
        first,
        "{\"certified_infeasible\":false,\"command\":\"solve\",\"cycles\":[[0,1,2]],\"gate_met\":false,\"k\":1,\"route\":\"hamiltonian\",\"status\":\"solved\"}\n"
    );
    assert_eq!(first, stdout(&bin(&args)));
}

#[test]
fn check_sharpness_value() {
    let dir = TempDir::new().unwrap();
    let path = sharp7(dir.path());
    let out = bin(&["check", "--input", &path]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("woodall_value=6\n"));
    assert!(text.contains("satisfied=false\n"));
}

#[test]
fn oracle_and_solve_on_sharpness() {
    let dir = TempDir::new().unwrap();
    let path = sharp7(dir.path());
    let out = bin(&["oracle", "--k", "1", "--input", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("verdict=infeasible"));
    let out = bin(&["solve", "--k", "1", "--input", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("status=hypothesis-unmet"));
}

#[test]
fn oracle_budget_exit_code() {
    let dir = TempDir::new().unwrap();
    let gen = stdout(&bin(&["gen", "woodall", "--n", "12", "--seed", "4"]));
    let path = write(dir.path(), "w.dg", &gen);
    let out = bin(&["oracle", "--k", "3", "--input", path.to_str().unwrap(), "--budget-nodes", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("verdict=budget"));
}

#[test]
fn parse_errors_are_line_numbered() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.bp", "bipartite 2\nedge 0 1\nmatch 0 0\n");
    let out = bin(&["check", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3: matching edge absent"), "{err}");
    let out = bin(&["check", "--input", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_are_nonzero() {
    assert_ne!(bin(&["solve"]).status.code(), Some(0));
    assert_eq!(bin(&["gen", "woodall"]).status.code(), Some(2));
}

#[test]
fn gen_is_canonical_and_deterministic() {
    let a = stdout(&bin(&["gen", "woodall", "--n", "9", "--margin", "-1", "--seed", "11"]));
    let b = stdout(&bin(&["gen", "woodall", "--n", "9", "--margin", "-1", "--seed", "11"]));
    assert_eq!(a, b);
    let inst = parse(&a).unwrap();
    assert_eq!(difactor_cli::serialize(&inst), a);
}

#[test]
fn transform_round_trip() {
    let dir = TempDir::new().unwrap();
    let orig = stdout(&bin(&["gen", "woodall", "--n", "6", "--seed", "2"]));
    let dg = write(dir.path(), "a.dg", &orig);
    let split = stdout(&bin(&["transform", "--input", dg.to_str().unwrap()]));
    assert!(split.starts_with("bipartite 6\n"));
    let bp = write(dir.path(), "a.bp", &split);
    assert_eq!(stdout(&bin(&["transform", "--input", bp.to_str().unwrap()])), orig);
}

#[test]
fn bipartite_solve_verifies() {
    let dir = TempDir::new().unwrap();
    let g = stdout(&bin(&["gen", "lasvergnas", "--n", "7", "--seed", "5"]));
    let path = write(dir.path(), "l.bp", &g);
    let out = bin(&["solve", "--k", "1", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let cycle = stdout(&out).lines().find(|l| l.starts_with("cycles=")).unwrap().to_string();
    assert_eq!(cycle.split_whitespace().count(), 14);
}

#[test]
fn explore_reports_no_violations() {
    let out = bin(&["explore", "--mode", "bermond-thomassen", "--n-min", "2", "--n-max", "6", "--samples", "30", "--format", "json-lines"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["violations"], 0);
    assert_eq!(v["samples"], 30);
}

#[test]
fn dot_export() {
    let dir = TempDir::new().unwrap();
    let tri = write(dir.path(), "tri.dg", "digraph 3\narc 0 1\narc 1 2\narc 2 0\n");
    let plain = stdout(&bin(&["dot", "--input", tri.to_str().unwrap()]));
    assert!(plain.starts_with("digraph G {") && plain.contains("0 -> 1;"));
    let solved = stdout(&bin(&["dot", "--input", tri.to_str().unwrap(), "--k", "1"]));
    assert!(solved.contains("0 -> 1 [color=red, penwidth=2];"));
    let via_solve = stdout(&bin(&["solve", "--k", "1", "--input", tri.to_str().unwrap(), "--format", "dot"]));
    assert_eq!(via_solve, solved);
}
