//! Experiment configs, presets and the run ledger.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use connpart::flip::{heatmap_export, run_chain, ChainConfig};
use connpart::generators::{
    assign_party, franken_graph, gate_graph, grid, ingest, initial_partition, seat_count, shaved_grid, InitialSplit,
    Layout, PartyMode,
};
use connpart::partition::{is_connected_partition, parse_rational};
use connpart::samplers::{seeded_stream, tree_partition, TreeKind, TreePartitionOptions};
use connpart::{Error, MultiGraph, Partition};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Grid { n: usize, m: usize },
    Shaved { n: usize },
    Gate { width: usize, #[serde(default)] strict_zero: bool },
    Franken { n: usize },
    File { path: PathBuf },
}

impl GraphSpec {
    pub fn build(&self) -> connpart::Result<(MultiGraph, Option<Layout>)> {
        Ok(match self {
            GraphSpec::Grid { n, m } => {
                let (pg, l) = grid(*n, *m)?;
                (pg.graph().clone(), Some(l))
            }
            GraphSpec::Shaved { n } => {
                let (pg, l) = shaved_grid(*n)?;
                (pg.graph().clone(), Some(l))
            }
            GraphSpec::Gate { width, strict_zero } => {
                let (g, l) = gate_graph(*width, *strict_zero)?;
                (g, Some(l))
            }
            GraphSpec::Franken { n } => {
                let (g, l) = franken_graph(*n)?;
                (g, Some(l))
            }
            GraphSpec::File { path } => {
                let loaded = ingest(path)?;
                (loaded.graph, loaded.layout)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitName {
    Diag,
    Horiz,
}

impl From<InitName> for InitialSplit {
    fn from(i: InitName) -> Self {
        match i {
            InitName::Diag => InitialSplit::Diagonal,
            InitName::Horiz => InitialSplit::Horizontal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeName {
    Ust,
    Mst,
}

impl From<TreeName> for TreeKind {
    fn from(t: TreeName) -> Self {
        match t {
            TreeName::Ust => TreeKind::Ust,
            TreeName::Mst => TreeKind::Mst,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VoteName {
    Left,
    Bottom,
}

impl From<VoteName> for PartyMode {
    fn from(v: VoteName) -> Self {
        match v {
            VoteName::Left => PartyMode::Left,
            VoteName::Bottom => PartyMode::Bottom,
        }
    }
}

fn name<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    /// Flip-walk runs, one per fugacity, with cut traces and heatmaps.
    Flips {
        lambdas: Vec<String>,
        #[serde(default)]
        apd: Option<String>,
        steps: u64,
        init: InitName,
        trace_stride: u64,
        /// Also run every 1/λ, covering both readings of the score sign.
        #[serde(default)]
        reciprocal: bool,
    },
    /// Seat totals of tree-cut partitions under two-party vote overlays.
    Seats { trees: Vec<TreeName>, votes: Vec<VoteName>, fraction: f64, eps: String, samples: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub graph: GraphSpec,
    pub task: Task,
    pub replicates: usize,
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// SHA-256 of the canonical JSON form, excluding the output directory.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        hex(&Sha256::digest(serde_json::to_vec(&c).expect("config serializes")))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub const PRESETS: &[&str] =
    &["grid-40-flips", "lambda-sweep", "franken-50", "kansas-substitute-flips", "gate-0", "gate-1", "gate-2", "gate-3"];

/// Inverse of the square-lattice connective constant, 1/2.63815853031.
pub const CRITICAL_LAMBDA: &str = "100000000000/263815853031";

fn flips(lambdas: &[&str], steps: u64, stride: u64) -> Task {
    Task::Flips {
        lambdas: lambdas.iter().map(|s| s.to_string()).collect(),
        apd: Some("90".into()),
        steps,
        init: InitName::Diag,
        trace_stride: stride,
        reciprocal: false,
    }
}

/// A named preset. `kansas-substitute-flips` runs on any ingested graph file
/// and stands in for the state dual graph experiment; it is not a reproduction.
pub fn preset(id: &str, graph_file: Option<&Path>) -> Option<ExperimentConfig> {
    let (graph, task, replicates) = match id {
        "grid-40-flips" => (GraphSpec::Grid { n: 40, m: 40 }, flips(&["1/10", CRITICAL_LAMBDA, "1"], 10_000_000, 1000), 1),
        "lambda-sweep" => (GraphSpec::Grid { n: 20, m: 20 }, flips(&["1/10", "379/1000", "1"], 10_000_000, 100), 1),
        "franken-50" => (GraphSpec::Franken { n: 50 }, flips(&["1/2"], 10_000_000, 1000), 1),
        "kansas-substitute-flips" => {
            (GraphSpec::File { path: graph_file?.to_path_buf() }, flips(&["1", "379/1000"], 10_000_000, 1000), 1)
        }
        _ => {
            let width: usize = id.strip_prefix("gate-")?.parse().ok().filter(|w| *w <= 3)?;
            let task = Task::Seats {
                trees: vec![TreeName::Mst, TreeName::Ust],
                votes: vec![VoteName::Left, VoteName::Bottom],
                fraction: 0.6,
                eps: "1/20".into(),
                samples: 1000,
            };
            (GraphSpec::Gate { width, strict_zero: false }, task, 1)
        }
    };
    Some(ExperimentConfig { id: id.into(), graph, task, replicates, seed: 2024, out: None })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub id: String,
    pub config_hash: String,
    pub started: u64,
    pub finished: u64,
    /// One row per replicate and setting, as in the summary CSV.
    pub summary: Vec<serde_json::Value>,
    pub manifest: Vec<ManifestEntry>,
}

#[derive(Debug, thiserror::Error)]
#[error("experiment {id}: {source}")]
pub struct ExperimentError {
    pub id: String,
    #[source]
    pub source: Error,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn ctx<T>(id: &str, r: connpart::Result<T>) -> Result<T, ExperimentError> {
    r.map_err(|source| ExperimentError { id: id.into(), source })
}

fn write_file(dir: &Path, rel: &str, contents: &str, manifest: &mut Vec<ManifestEntry>) -> connpart::Result<()> {
    let path = dir.join(rel);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(&path, contents)?;
    manifest.push(ManifestEntry {
        path: rel.into(),
        bytes: contents.len() as u64,
        sha256: hex(&Sha256::digest(contents.as_bytes())),
    });
    Ok(())
}

fn file_label(s: &str) -> String {
    s.replace('/', "_over_")
}

struct FlipJob {
    lambda: String,
    replicate: usize,
}

fn run_flips(
    cfg: &ExperimentConfig,
    g: &MultiGraph,
    layout: Option<&Layout>,
    dir: &Path,
    manifest: &mut Vec<ManifestEntry>,
) -> connpart::Result<Vec<serde_json::Value>> {
    let Task::Flips { lambdas, apd, steps, init, trace_stride, reciprocal } = &cfg.task else { unreachable!() };
    let layout = layout.ok_or_else(|| Error::InvalidInput("flip experiments need node coordinates".into()))?;
    let initial = initial_partition(layout, (*init).into());
    if !is_connected_partition(g, &initial) {
        return Err(Error::Inadmissible("initial split is not a connected partition".into()));
    }
    let mut all = Vec::new();
    for l in lambdas {
        all.push(l.clone());
        if *reciprocal {
            all.push(parse_rational(l)?.recip().to_string());
        }
    }
    let apd = apd.as_deref().map(parse_rational).transpose()?;
    let jobs: Vec<FlipJob> =
        all.iter().flat_map(|l| (0..cfg.replicates).map(move |r| FlipJob { lambda: l.clone(), replicate: r })).collect();
    let results: Vec<_> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| {
            let chain = ChainConfig {
                lambda: parse_rational(&job.lambda)?,
                apd_percent: apd.clone(),
                steps: *steps,
                seed: cfg.seed.wrapping_add(i as u64),
                trace_stride: *trace_stride,
                ..Default::default()
            };
            run_chain(g, &chain, initial.clone())
        })
        .collect();
    let mut summary = String::from("lambda,replicate,steps,accepted,self_loops,rejected,mean_cut,final_cut\n");
    let mut rows = Vec::new();
    for (job, res) in jobs.iter().zip(results) {
        let (state, stats) = res?;
        let label = format!("lambda_{}_rep{}", file_label(&job.lambda), job.replicate);
        let trace: String = std::iter::once("sample,cut\n".to_string())
            .chain(stats.cut_trace.iter().enumerate().map(|(i, c)| format!("{i},{c}\n")))
            .collect();
        write_file(dir, &format!("traces/{label}.csv"), &trace, manifest)?;
        let heat_dir = dir.join("heatmaps").join(&label);
        for p in heatmap_export(&stats, Some(layout), &heat_dir)? {
            let rel = p.strip_prefix(dir).expect("inside out dir").to_string_lossy().into_owned();
            let contents = fs::read_to_string(&p)?;
            manifest.push(ManifestEntry {
                path: rel,
                bytes: contents.len() as u64,
                sha256: hex(&Sha256::digest(contents.as_bytes())),
            });
        }
        let final_assign: String = state.partition.assign().iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",");
        write_file(dir, &format!("final/{label}.csv"), &(final_assign + "\n"), manifest)?;
        let mean = stats.mean_cut().unwrap_or(state.cut_size as f64);
        let _ = writeln!(
            summary,
            "{},{},{},{},{},{},{:.6},{}",
            job.lambda, job.replicate, stats.steps, stats.accepted, stats.self_loops, stats.rejected, mean, state.cut_size
        );
        rows.push(serde_json::json!({
            "lambda": job.lambda, "replicate": job.replicate, "steps": stats.steps,
            "accepted": stats.accepted, "mean_cut": format!("{mean:.6}"), "final_cut": state.cut_size,
        }));
    }
    write_file(dir, "summary.csv", &summary, manifest)?;
    Ok(rows)
}

/// The raw seat totals of one (tree, vote) setting: each replicate draws from its own stream.
pub fn seat_samples(
    g: &MultiGraph,
    party: &[u8],
    tree: TreeKind,
    eps: &str,
    samples: usize,
    seed: u64,
    stream: u64,
) -> connpart::Result<Vec<(usize, Partition)>> {
    let opts = TreePartitionOptions::new(parse_rational(eps)?, tree);
    let mut rng = seeded_stream(seed, stream);
    (0..samples)
        .map(|_| {
            let p = tree_partition(g, None, &opts, &mut rng)?;
            Ok((seat_count(&p, party)?, p))
        })
        .collect()
}

fn run_seats(
    cfg: &ExperimentConfig,
    g: &MultiGraph,
    layout: Option<&Layout>,
    dir: &Path,
    manifest: &mut Vec<ManifestEntry>,
) -> connpart::Result<Vec<serde_json::Value>> {
    let Task::Seats { trees, votes, fraction, eps, samples } = &cfg.task else { unreachable!() };
    let layout = layout.ok_or_else(|| Error::InvalidInput("seat experiments need node coordinates".into()))?;
    let width = match cfg.graph {
        GraphSpec::Gate { width, .. } => width.to_string(),
        _ => String::new(),
    };
    let mut jobs = Vec::new();
    for (ti, &t) in trees.iter().enumerate() {
        for (vi, &v) in votes.iter().enumerate() {
            for r in 0..cfg.replicates {
                jobs.push((t, v, r, ((ti * votes.len() + vi) * cfg.replicates + r) as u64));
            }
        }
    }
    let results: Vec<connpart::Result<Vec<usize>>> = jobs
        .par_iter()
        .map(|&(t, v, _, stream)| {
            let party = assign_party(layout, v.into(), *fraction)?;
            Ok(seat_samples(g, &party, t.into(), eps, *samples, cfg.seed, stream)?.into_iter().map(|s| s.0).collect())
        })
        .collect();
    let mut raw = String::from("tree,votes,replicate,sample,seats\n");
    let mut summary = String::from("width,tree,votes,replicate,samples,mean_seats\n");
    let mut rows = Vec::new();
    for (&(t, v, r, _), res) in jobs.iter().zip(results) {
        let seats = res?;
        for (i, s) in seats.iter().enumerate() {
            let _ = writeln!(raw, "{},{},{r},{i},{s}", name(&t), name(&v));
        }
        let mean = seats.iter().sum::<usize>() as f64 / seats.len().max(1) as f64;
        let _ = writeln!(summary, "{width},{},{},{r},{},{mean:.6}", name(&t), name(&v), seats.len());
        rows.push(serde_json::json!({
            "width": width, "tree": name(&t), "votes": name(&v), "replicate": r,
            "samples": seats.len(), "mean_seats": format!("{mean:.6}"),
        }));
    }
    write_file(dir, "raw.csv", &raw, manifest)?;
    write_file(dir, "summary.csv", &summary, manifest)?;
    Ok(rows)
}

/// Run an experiment, write its outputs under `out/<id>/<hash prefix>/`, and
/// append the record to `out/runs.jsonl`.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<RunRecord, ExperimentError> {
    let started = now();
    let hash = cfg.hash();
    let dir = out.join(&cfg.id).join(&hash[..12]);
    let (g, layout) = ctx(&cfg.id, cfg.graph.build())?;
    let mut manifest = Vec::new();
    ctx(&cfg.id, write_file(&dir, "config.json", &(serde_json::to_string_pretty(cfg).expect("serializes") + "\n"), &mut manifest))?;
    let summary = match cfg.task {
        Task::Flips { .. } => ctx(&cfg.id, run_flips(cfg, &g, layout.as_ref(), &dir, &mut manifest))?,
        Task::Seats { .. } => ctx(&cfg.id, run_seats(cfg, &g, layout.as_ref(), &dir, &mut manifest))?,
    };
    for m in &mut manifest {
        m.path = Path::new(&cfg.id).join(&hash[..12]).join(&m.path).to_string_lossy().into_owned();
    }
    let record = RunRecord { id: cfg.id.clone(), config_hash: hash, started, finished: now(), summary, manifest };
    let ledger = || -> connpart::Result<()> {
        let mut f = fs::OpenOptions::new().create(true).append(true).open(out.join("runs.jsonl"))?;
        writeln!(f, "{}", serde_json::to_string(&record)?)?;
        Ok(())
    };
    ctx(&cfg.id, ledger())?;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for id in PRESETS.iter().filter(|id| !id.starts_with("kansas")) {
            let cfg = preset(id, None).unwrap();
            let text = serde_json::to_string(&cfg).unwrap();
            assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
        }
        assert!(preset("kansas-substitute-flips", None).is_none());
        assert!(preset("gate-4", None).is_none());
        assert_ne!(preset("gate-1", None).unwrap().hash(), preset("gate-2", None).unwrap().hash());
    }

    #[test]
    fn hash_ignores_output_dir() {
        let mut a = preset("gate-0", None).unwrap();
        let h = a.hash();
        a.out = Some("/elsewhere".into());
        assert_eq!(a.hash(), h);
        a.seed += 1;
        assert_ne!(a.hash(), h);
    }
}
