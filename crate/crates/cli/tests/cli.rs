use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rtiling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtiling"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = rtiling(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).expect("JSON report")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_and_search_clique_extremal() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["construct", "clique-extremal", "--r", "3", "--m", "3", "--out", path(dir.path())]);
    let graph = dir.path().join("clique-extremal-3-3.ecg");
    assert!(std::fs::read_to_string(&graph).unwrap().starts_with("ecg 21\n"));
    let v = json(&["tiling", "perfect", "--input", path(&graph), "--r", "3"]);
    assert_eq!(v["answer"], "no");
    let v = json(&["roundtrip", "--input", path(&graph)]);
    assert_eq!(v["details"]["min_colour_degree"], 14);
}

#[test]
fn max_tiling_of_triangle_extremal() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&["construct", "triangle-extremal", "--n", "13", "--k", "3"]);
    let graph = dir.path().join("g.ecg");
    std::fs::write(&graph, text).unwrap();
    let v = json(&["tiling", "max", "--input", path(&graph), "--r", "3"]);
    assert_eq!(v["size"], 2);
    assert_eq!(v["optimal"], true);
}

#[test]
fn bounds() {
    let v = json(&["bound", "eg", "--n", "10", "--e", "21"]);
    assert_eq!(v["bound"], 3);
    let v = json(&["bound", "threshold", "--r", "4", "--n", "12"]);
    assert_eq!(v["proven_decimal"], "0.9099");
    assert_eq!(v["proven_degree"], 11);
    assert_eq!(v["conjectured"], "11/14");
    let csv = ok(&["bound", "eg", "--n", "10", "--e", "21", "--format", "csv"]);
    assert!(csv.lines().any(|l| l == "bound,3"));
    assert!(!rtiling(&["bound", "abhp", "--n", "12", "--alpha", "1/2"]).status.success());
}

#[test]
fn conversion_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("r.ecg");
    std::fs::write(&graph, ok(&["construct", "random", "--n", "12", "--p", "0.8", "--q", "20", "--seed", "9"])).unwrap();
    let v = json(&["convert", "--input", path(&graph), "--verify"]);
    assert_eq!(v["holds"], true);
    let dg = ok(&["convert", "--input", path(&graph)]);
    assert!(dg.starts_with("dg 12\n"));
}

#[test]
fn reduced_sampling_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.pdm");
    std::fs::write(&m, "pdm 3\nd 0 1 1/2\nd 1 0 1/2\ndpm 0 1 1/4\nd 0 2 1/1\nd 2 0 1/1\ndpm 0 2 1/1\nd 1 2 1/3\n").unwrap();
    let a = ok(&["convert", "--matrix", path(&m), "--seed", "5"]);
    let b = ok(&["convert", "--matrix", path(&m), "--seed", "5"]);
    assert_eq!(a, b);
    assert!(a.starts_with("dg 3\n"));
}

#[test]
fn certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    // a directed triangle plus a vertex that only points into it
    let dg = dir.path().join("d.dg");
    std::fs::write(&dg, "dg 6\na 0 1\na 1 2\na 2 0\na 3 0\na 4 0\na 5 0\n").unwrap();
    ok(&["lp", "certificate", "--input", path(&dg), "--out", path(dir.path())]);
    let cert = dir.path().join("certificate.cert");
    assert!(cert.exists());
    let v = json(&["lp", "check", "--input", path(&dg), "--cert", path(&cert)]);
    assert_eq!(v["valid"], true);
    let v = json(&["roundtrip", "--input", path(&cert)]);
    assert_eq!(v["kind"], "weights");

    // a zero weighting is not a certificate
    std::fs::write(&cert, "cert 6\n".to_string() + &(0..6).map(|v| format!("w {v} 0/1\n")).collect::<String>()).unwrap();
    assert!(!rtiling(&["lp", "check", "--input", path(&dg), "--cert", path(&cert)]).status.success());

    let complete = dir.path().join("k.dg");
    let arcs: String = (0..6)
        .flat_map(|u| (0..6).filter(move |&v| v != u).map(move |v| format!("a {u} {v}\n")))
        .collect();
    std::fs::write(&complete, format!("dg 6\n{arcs}")).unwrap();
    let v = json(&["lp", "certificate", "--input", path(&complete)]);
    assert_eq!(v["outcome"], "perfect");
}

#[test]
fn weak_closure_of_complete_digraph() {
    let dir = tempfile::tempdir().unwrap();
    let dg = dir.path().join("k.dg");
    let arcs: String = (0..5)
        .flat_map(|u| (0..5).filter(move |&v| v != u).map(move |v| format!("a {u} {v}\n")))
        .collect();
    std::fs::write(&dg, format!("dg 5\n{arcs}")).unwrap();
    let v = json(&["closed", "weak", "--input", path(&dg)]);
    assert_eq!(v["all_pairs"], true);
    let v = json(&["closed", "weak", "--input", path(&dg), "--pair", "0", "4", "--s", "1"]);
    assert_eq!(v["connected"], true);
    let csv = ok(&["closed", "weak", "--input", path(&dg), "--format", "csv"]);
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn connectors_of_rainbow_complete() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("k.ecg");
    std::fs::write(&g, ok(&["construct", "rainbow-complete", "--n", "5"])).unwrap();
    let v = json(&["closed", "connectors", "--input", path(&g), "--x", "0", "--y", "1"]);
    assert_eq!(v["count"], 3);
    let v = json(&["closed", "connectors", "--input", path(&g)]);
    assert_eq!(v["eta"], "3/25");
}

#[test]
fn experiment_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(
        &cfg,
        "name = \"sweep\"\nkind = \"lp\"\ntrials = 6\nseeds = [1, 2]\n[grid]\nr = [3]\nn = [6]\nmin_out = [1, 3, 5]\n",
    )
    .unwrap();
    let strip = |csv: &str| -> Vec<String> {
        csv.lines()
            .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
            .collect()
    };
    let a = ok(&["experiment", "--config", path(&cfg)]);
    let b = ok(&["experiment", "--config", path(&cfg)]);
    assert_eq!(strip(&a), strip(&b));
    assert!(a.starts_with("# schema "));

    let out = dir.path().join("results");
    ok(&["experiment", "--config", path(&cfg), "--out", path(&out)]);
    let summary = std::fs::read_to_string(out.join("sweep-summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 2 + 3);
    assert_eq!(std::fs::read_to_string(out.join("sweep.csv")).unwrap().lines().count(), 2 + 36);

    std::fs::write(&cfg, "kind = \"lp\"\n\ntrials = \"many\"\n").unwrap();
    let bad = rtiling(&["experiment", "--config", path(&cfg)]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 3"));
}

#[test]
fn malformed_input_is_reported_with_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("bad.ecg");
    std::fs::write(&g, "ecg 3\ne 0 1 2\ne 0 9 1\n").unwrap();
    let out = rtiling(&["rainbow", "find", "--input", path(&g)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn triangle_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("b.ecg");
    std::fs::write(&g, ok(&["construct", "bipartite", "--n", "6"])).unwrap();
    let v = json(&["rainbow", "triangle", "--input", path(&g)]);
    assert_eq!(v["verdict"], "exceptional");
    std::fs::write(&g, ok(&["construct", "rainbow-complete", "--n", "6"])).unwrap();
    let v = json(&["rainbow", "triangle", "--input", path(&g)]);
    assert_eq!(v["verdict"], "rainbow_triangle");
    assert_eq!(v["vertices"], serde_json::json!([0, 1, 2]));
}
