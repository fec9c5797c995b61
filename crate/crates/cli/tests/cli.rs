use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use connpart::generators::{ingest, shaved_grid, GraphFile};
use connpart::MultiGraph;
use connpart_cli::experiment::RunRecord;

fn connpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_connpart")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn theta_file(dir: &Path) -> PathBuf {
    let g = MultiGraph::from_edges(5, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 4), (4, 1)]);
    let p = dir.join("theta.json");
    fs::write(&p, GraphFile::from_graph(&g).to_json().unwrap()).unwrap();
    p
}

#[test]
fn built_graphs_reload_with_their_embedding() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("shaved.json");
    let o = connpart(&["build-graph", "shaved", "--n", "4", "--out", path(&f)]);
    assert!(o.status.success());
    let loaded = ingest(&f).unwrap();
    let (pg, layout) = shaved_grid(4).unwrap();
    assert!(loaded.require_plane().unwrap().same_embedding(&pg));
    assert_eq!(loaded.layout.unwrap(), layout);
    let f = dir.path().join("d2.json");
    assert!(connpart(&["build-graph", "gadget-family", "--gadget", "doubled-star-c4", "--d", "2", "--out", path(&f)])
        .status
        .success());
    let g = ingest(&f).unwrap().graph;
    assert_eq!((g.node_count(), g.edge_count()), (12, 16));
}

#[test]
fn gadget_writes_a_provenance_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let theta = theta_file(dir.path());
    let out = dir.path().join("bigons.json");
    assert!(connpart(&["gadget", "bigons", "--graph", path(&theta), "--d", "2", "--out", path(&out)]).status.success());
    let derived = ingest(&out).unwrap().graph;
    assert_eq!(derived.edge_count(), 6 * 2 * 2);
    let side = fs::read_to_string(dir.path().join("bigons.json.provenance.json")).unwrap();
    assert!(side.contains("per_base_edge"));
}

#[test]
fn counts_and_seeded_samples() {
    let dir = tempfile::tempdir().unwrap();
    let theta = theta_file(dir.path());
    let g = path(&theta);
    assert_eq!(stdout(&connpart(&["count", "sc", "--graph", g])), "3\n");
    assert_eq!(stdout(&connpart(&["count", "marginal", "--graph", g, "--j", "0", "--depth", "8"])), "2\n");
    assert_eq!(stdout(&connpart(&["count", "marginal", "--graph", g, "--j", "0", "--j2", "1", "--depth", "8"])), "1\n");
    let a = connpart(&["sample", "sc", "--graph", g, "--n", "5", "--seed", "3"]);
    let b = connpart(&["sample", "sc", "--graph", g, "--n", "5", "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let lines = stdout(&a);
    assert_eq!(lines.lines().count(), 5);
    for line in lines.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["seed"], 3);
        assert!(matches!(v["value"].as_array().map(Vec::len), Some(3..=5)));
    }
}

#[test]
fn exit_codes_separate_usage_from_assertions() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(connpart(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(connpart(&["count", "sc", "--graph", "/nonexistent/graph.json"]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"nodes": 2, "edges": [[0, 0, 7]]}"#).unwrap();
    let o = connpart(&["count", "sc", "--graph", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("edges[0]"));
    let k5 = dir.path().join("k5.json");
    let edges: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    fs::write(&k5, GraphFile::from_graph(&MultiGraph::from_edges(5, &edges)).to_json().unwrap()).unwrap();
    assert_eq!(connpart(&["count", "sc", "--graph", path(&k5)]).status.code(), Some(1));
    assert_eq!(connpart(&["verify", "quick", "--seed", "1"]).status.code(), Some(0));
}

#[test]
fn resumed_walk_matches_a_straight_run() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("grid.json");
    assert!(connpart(&["build-graph", "grid", "--n", "6", "--out", path(&f)]).status.success());
    let g = path(&f);
    let common = ["mcmc-run", "--graph", g, "--lambda", "1/2", "--seed", "9"];
    let straight = connpart(&[&common[..], &["--steps", "4000"]].concat());
    let cp = dir.path().join("cp.json");
    let first = connpart(&[&common[..], &["--steps", "1500", "--checkpoint", path(&cp)]].concat());
    assert!(first.status.success());
    let resumed = connpart(&[&common[..], &["--steps", "2500", "--resume", path(&cp)]].concat());
    assert!(straight.status.success() && resumed.status.success());
    assert_eq!(stdout(&straight), stdout(&resumed));
    let stats = dir.path().join("stats");
    fs::create_dir(&stats).unwrap();
    assert!(connpart(&[&common[..], &["--steps", "1000", "--stats-out", path(&stats)]].concat()).status.success());
    for name in ["heatmap.csv", "flips.pgm", "occupancy.pgm"] {
        assert!(stats.join(name).exists(), "{name} missing");
    }
}

fn experiment(args: &[&str], out: &Path) -> RunRecord {
    let o = connpart(&[&["experiment"], args, &["--out", path(out)]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(stdout(&o).trim()).unwrap()
}

fn run_dir(out: &Path, rec: &RunRecord) -> PathBuf {
    out.join(&rec.id).join(&rec.config_hash[..12])
}

#[test]
fn experiments_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["--preset", "gate-2", "--samples", "20"];
    let ra = experiment(&args, a.path());
    let rb = experiment(&[&args[..], &["--threads", "1"]].concat(), b.path());
    assert_eq!(ra.config_hash, rb.config_hash);
    let sa = fs::read(run_dir(a.path(), &ra).join("summary.csv")).unwrap();
    let sb = fs::read(run_dir(b.path(), &rb).join("summary.csv")).unwrap();
    assert_eq!(sa, sb);
    assert_eq!(String::from_utf8(sa).unwrap().lines().count(), 5);
    let log = fs::read_to_string(a.path().join("runs.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 1);
    assert!(ra.manifest.iter().any(|e| a.path().join(&e.path) == run_dir(a.path(), &ra).join("summary.csv")));
    for entry in &ra.manifest {
        assert_eq!(fs::metadata(a.path().join(&entry.path)).unwrap().len(), entry.bytes, "{}", entry.path);
        assert_eq!(entry.sha256.len(), 64);
    }
}

#[test]
fn sweep_writes_one_trace_per_fugacity() {
    let out = tempfile::tempdir().unwrap();
    let rec = experiment(&["--preset", "lambda-sweep", "--steps", "20000"], out.path());
    let dir = run_dir(out.path(), &rec);
    let traces: Vec<_> = fs::read_dir(dir.join("traces")).unwrap().collect();
    assert_eq!(traces.len(), 3);
    assert_eq!(rec.summary.len(), 3);
    assert!(dir.join("config.json").exists());
    assert!(connpart(&["experiment", "--preset", "no-such-preset"]).status.code() == Some(2));
}
