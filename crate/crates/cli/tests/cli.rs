use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use srcloc::graph::{load_edge_list, shortest_distances};
use srcloc::multi_source::MultiSourceRecord;
use srcloc::observations::load_observations;
use srcloc::single_source::{mle_tree, EstimateRecord};
use tempfile::TempDir;

fn srcloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srcloc"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = srcloc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

const SMOKE_SPEC: &str = r#"
family = "er-tree"
sizes = [40]
mu = 2.0
sigma2 = 1.0
fractions = [0.3]
trials = 2
algorithms = ["gssi", "bfs-mle", "scce"]
eta_modes = ["zero", "diameter"]
seed = 7
"#;

#[test]
fn generate_small_tree() {
    let dir = TempDir::new().unwrap();
    let a = p(&dir, "a.txt");
    let stdout = ok(&[
        "generate",
        "--family",
        "er-tree",
        "--nodes",
        "5",
        "--seed",
        "3",
        "--out",
        s(&a),
    ]);
    assert!(stdout.contains("edges 4"));
    let g = load_edge_list(&a).unwrap().graph;
    assert_eq!((g.node_count(), g.edge_count()), (5, 4));
    assert!(g.is_tree());

    let b = p(&dir, "b.txt");
    ok(&[
        "generate",
        "--family",
        "er-tree",
        "--nodes",
        "5",
        "--seed",
        "3",
        "--out",
        s(&b),
    ]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = srcloc(&["generate", "--family", "er-tree", "--out", s(&p(&dir, "x.txt"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--nodes"));
    assert_eq!(stderr(&out).lines().count(), 1);
    let out = srcloc(&[
        "generate",
        "--family",
        "ba",
        "--nodes",
        "9",
        "--out",
        s(&p(&dir, "x.txt")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = srcloc(&["generate", "--family", "oak", "--nodes", "9", "--out", "x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!p(&dir, "x.txt").exists());
}

#[test]
fn config_overrides_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "gen.toml");
    fs::write(&cfg, "nodes = 7\nfamily = \"ba-tree\"\n").unwrap();
    let out = p(&dir, "g.txt");
    ok(&[
        "--config",
        s(&cfg),
        "generate",
        "--family",
        "er-tree",
        "--nodes",
        "5",
        "--out",
        s(&out),
    ]);
    assert_eq!(load_edge_list(&out).unwrap().graph.node_count(), 7);

    fs::write(&cfg, "nodes = 7\ncolour = 1\n").unwrap();
    let bad = srcloc(&["--config", s(&cfg), "generate", "--out", s(&out)]);
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains("colour"), "{}", stderr(&bad));
}

#[test]
fn zero_noise_simulation_on_a_tree() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "g.txt");
    let obs = p(&dir, "obs.csv");
    ok(&[
        "generate",
        "--family",
        "er-tree",
        "--nodes",
        "30",
        "--seed",
        "1",
        "--out",
        s(&g),
    ]);
    let sim = [
        "simulate",
        "--graph",
        s(&g),
        "--sources",
        "4",
        "--start-times",
        "1.5",
        "--mu",
        "2",
        "--sigma2",
        "0",
        "--fraction",
        "0.5",
        "--seed",
        "9",
        "--out-obs",
        s(&obs),
    ];
    ok(&sim);
    let graph = load_edge_list(&g).unwrap().graph;
    let dist = shortest_distances(&graph, 4).unwrap();
    let o = load_observations(&obs).unwrap();
    assert_eq!(o.len(), 15);
    for (v, t) in o.iter() {
        assert!((t - (1.5 + 2.0 * dist[v].unwrap() as f64)).abs() < 1e-12);
    }
    let first = fs::read(&obs).unwrap();
    ok(&sim);
    assert_eq!(first, fs::read(&obs).unwrap());

    let bad = srcloc(&[
        "simulate",
        "--graph",
        s(&g),
        "--sources",
        "99",
        "--mu",
        "2",
        "--sigma2",
        "0",
        "--fraction",
        "0.5",
        "--out-obs",
        s(&p(&dir, "bad.csv")),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("99"));
    assert!(!p(&dir, "bad.csv").exists());
}

#[test]
fn estimate_matches_library_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "g.txt");
    let obs = p(&dir, "obs.csv");
    let est = p(&dir, "est.json");
    ok(&[
        "generate",
        "--family",
        "er-tree",
        "--nodes",
        "40",
        "--seed",
        "5",
        "--out",
        s(&g),
    ]);
    ok(&[
        "simulate",
        "--graph",
        s(&g),
        "--sources",
        "0",
        "--mu",
        "2",
        "--sigma2",
        "1",
        "--fraction",
        "0.3",
        "--seed",
        "2",
        "--out-obs",
        s(&obs),
    ]);
    ok(&[
        "estimate",
        "--graph",
        s(&g),
        "--obs",
        s(&obs),
        "--algorithm",
        "mle-tree",
        "--out",
        s(&est),
    ]);
    let record: EstimateRecord = serde_json::from_str(&fs::read_to_string(&est).unwrap()).unwrap();
    let lib = mle_tree(&load_edge_list(&g).unwrap().graph, &load_observations(&obs).unwrap()).unwrap();
    assert_eq!(record, lib.to_record(|v| v as u64));
    let again = serde_json::to_string_pretty(&record).unwrap();
    assert_eq!(again.trim_end(), fs::read_to_string(&est).unwrap().trim_end());
}

#[test]
fn estimate_errors_and_multi_mode() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "g.txt");
    let obs = p(&dir, "obs.csv");
    ok(&[
        "generate",
        "--family",
        "ba",
        "--nodes",
        "60",
        "--mean-degree",
        "4",
        "--seed",
        "5",
        "--out",
        s(&g),
    ]);
    ok(&[
        "simulate",
        "--graph",
        s(&g),
        "--sources",
        "3,40",
        "--mu",
        "3",
        "--sigma2",
        "1",
        "--fraction",
        "0.4",
        "--seed",
        "2",
        "--out-obs",
        s(&obs),
    ]);
    let out = p(&dir, "e.json");
    let bad = srcloc(&[
        "estimate",
        "--graph",
        s(&g),
        "--obs",
        s(&obs),
        "--algorithm",
        "mle-tree",
        "--out",
        s(&out),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("graph is not a tree"));
    assert!(!out.exists());

    ok(&[
        "estimate",
        "--mode",
        "multi",
        "--max-sources",
        "1",
        "--graph",
        s(&g),
        "--obs",
        s(&obs),
        "--out",
        s(&out),
    ]);
    let rec: MultiSourceRecord = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rec.l, 1);
    assert_eq!(rec.clusters.len(), 1);
    let observed: usize = rec.clusters.iter().map(|c| c.observations_size).sum();
    assert_eq!(observed, load_observations(&obs).unwrap().len());

    ok(&[
        "estimate",
        "--mode",
        "multi",
        "--graph",
        s(&g),
        "--obs",
        s(&obs),
        "--target",
        "diag",
        "--out",
        s(&out),
    ]);
    let rec: MultiSourceRecord = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rec.l, rec.clusters.len());
    assert!(rec.l >= 1);
}

#[test]
fn benchmark_smoke_and_worker_independence() {
    let dir = TempDir::new().unwrap();
    let spec = p(&dir, "spec.toml");
    fs::write(&spec, SMOKE_SPEC).unwrap();
    let started = Instant::now();
    ok(&[
        "benchmark",
        "--spec",
        s(&spec),
        "--workers",
        "1",
        "--out-dir",
        s(&p(&dir, "one")),
    ]);
    assert!(started.elapsed().as_secs_f64() < 10.0);
    ok(&[
        "benchmark",
        "--spec",
        s(&spec),
        "--workers",
        "8",
        "--out-dir",
        s(&p(&dir, "eight")),
    ]);
    let one = fs::read(p(&dir, "one/trials.csv")).unwrap();
    assert_eq!(one, fs::read(p(&dir, "eight/trials.csv")).unwrap());
    let text = String::from_utf8(one).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 3);
    let agg: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p(&dir, "one/aggregate.json")).unwrap()).unwrap();
    assert_eq!(agg["schema_version"], 1);
    assert_eq!(agg["groups"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_spec_reports_the_field() {
    let dir = TempDir::new().unwrap();
    let spec = p(&dir, "spec.toml");
    fs::write(&spec, SMOKE_SPEC.replace("trials = 2", "trials = \"two\"")).unwrap();
    let out = srcloc(&["benchmark", "--spec", s(&spec), "--out-dir", s(&p(&dir, "o"))]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("`trials`"), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert!(!p(&dir, "o").exists());

    fs::write(&spec, SMOKE_SPEC.replace("\"scce\"", "\"gau\"")).unwrap();
    let err = stderr(&srcloc(&[
        "benchmark",
        "--spec",
        s(&spec),
        "--out-dir",
        s(&p(&dir, "o")),
    ]));
    assert!(err.contains("`algorithms[2]`"), "{err}");

    let json = p(&dir, "spec.json");
    fs::write(&json, r#"{"family": "er-tree", "sizes": [40], "mu": "fast"}"#).unwrap();
    let err = stderr(&srcloc(&[
        "benchmark",
        "--spec",
        s(&json),
        "--out-dir",
        s(&p(&dir, "o")),
    ]));
    assert!(err.contains("`mu`"), "{err}");
}
