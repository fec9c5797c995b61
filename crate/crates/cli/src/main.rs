use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use connpart::flip::{heatmap_export, Checkpoint, ChainConfig, FlipChain};
use connpart::gadgets::{build_rd, build_td, chain_of_bigons, chain_of_dipoles, doubled_star, vertex_replace_rd, GadgetMap};
use connpart::generators::{
    franken_graph, gadget_graph_file, gate_graph, grid, ingest, initial_partition, shaved_grid, GadgetSidecar, GraphFile,
    InitialSplit, LoadedGraph,
};
use connpart::partition::{is_connected_partition, parse_rational};
use connpart::samplers::{seeded_rng, tree_partition, BalancedSampler, CycleSampler, TreePartitionOptions};
use connpart::spdp::{balanced_count_remainder, count_balanced, count_sc, sc_count_remainder};
use connpart::{EdgeSet, Error, MultiGraph, Partition, PlaneGraph};
use connpart_cli::experiment::{preset, run_experiment, ExperimentConfig, TreeName, PRESETS};
use connpart_cli::verify::{verify_suite, Level};

#[derive(Parser)]
#[command(name = "connpart", version, about = "Connected graph partitions: counting, sampling and flip-walk MCMC")]
struct Cli {
    /// Random seed; drawn from the OS and reported when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel replicates.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file or directory (stdout when omitted, where applicable).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph family and write it in the JSON graph format.
    BuildGraph(BuildGraph),
    /// Apply a gadget construction to a graph file, writing a provenance sidecar.
    Gadget(GadgetCmd),
    /// Exact counts.
    Count(CountCmd),
    /// Exact or tree-based samples, one JSON record per line.
    Sample(SampleCmd),
    /// Run the flip walk.
    McmcRun(McmcCmd),
    /// Run a named preset or a config file.
    Experiment(ExperimentCmd),
    /// Run the oracle-equivalence batteries.
    Verify {
        #[arg(value_enum, default_value = "quick")]
        level: LevelArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Grid,
    Shaved,
    Gate,
    Franken,
    GadgetFamily,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetFamily {
    /// The R_d gadget itself.
    Rd,
    /// D_d(C₄).
    DoubledStarC4,
    /// T_d(K₄).
    TdK4,
}

#[derive(Args)]
struct BuildGraph {
    #[arg(value_enum)]
    family: Family,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    width: usize,
    #[arg(long)]
    strict_zero: bool,
    #[arg(long, value_enum, default_value = "rd")]
    gadget: GadgetFamily,
    #[arg(long, default_value_t = 1)]
    d: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKindArg {
    Bigons,
    Dipoles,
    DoubledStar,
    Rd,
    Td,
}

#[derive(Args)]
struct GadgetCmd {
    #[arg(value_enum)]
    kind: GadgetKindArg,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    r: usize,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum CountWhat {
    Sc,
    Balanced,
    Marginal,
}

#[derive(Args)]
struct CountCmd {
    #[arg(value_enum)]
    what: CountWhat,
    #[arg(long)]
    graph: PathBuf,
    /// Edge ids that must be in the cycle or cut (comma separated).
    #[arg(long, value_delimiter = ',')]
    j: Vec<usize>,
    /// Edge ids that must be avoided (comma separated).
    #[arg(long, value_delimiter = ',')]
    j2: Vec<usize>,
    /// Node weights (comma separated); defaults to the file's weights or 1.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u64>,
    /// For `marginal`: count balanced partitions instead of cycles.
    #[arg(long)]
    balanced: bool,
    /// Gadget depth for remainder extraction.
    #[arg(long)]
    depth: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleWhat {
    Sc,
    Balanced,
    TreePartition,
}

#[derive(Args)]
struct SampleCmd {
    #[arg(value_enum)]
    what: SampleWhat,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value = "1/20")]
    eps: String,
    #[arg(long, value_enum, default_value = "ust")]
    tree: TreeArg,
    /// JSON list of rational edge weights for ν_c.
    #[arg(long)]
    lambda_c: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeArg {
    Ust,
    Mst,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Diag,
    Horiz,
    File,
}

#[derive(Args)]
struct McmcCmd {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "1")]
    lambda: String,
    /// Allowed population deviation in percent.
    #[arg(long)]
    apd: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    steps: u64,
    #[arg(long, value_enum, default_value = "diag")]
    init: InitArg,
    /// Block assignment (comma separated) for `--init file`.
    #[arg(long)]
    init_file: Option<PathBuf>,
    #[arg(long)]
    stats_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    trace_stride: u64,
    /// Write a checkpoint here when the run ends.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from a checkpoint.
    #[arg(long)]
    resume: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentCmd {
    /// One of the shipped presets.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Graph file for presets that run on an ingested graph.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Override the chain length of flip presets.
    #[arg(long)]
    steps: Option<u64>,
    /// Override the sample count of seat presets.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    replicates: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

enum Failure {
    Assertion(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Schema { .. } | Error::Io(_) | Error::Json(_) => Failure::Usage(e.to_string()),
            _ => Failure::Assertion(e.to_string()),
        }
    }
}

type Out = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> Out {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<LoadedGraph, Failure> {
    ingest(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn edge_set(g: &MultiGraph, ids: &[usize]) -> Result<EdgeSet, Failure> {
    if let Some(e) = ids.iter().find(|&&e| e >= g.edge_count()) {
        return Err(Failure::Usage(format!("edge {e} out of range")));
    }
    Ok(EdgeSet::from_ids(g.edge_count(), ids.iter().copied()))
}

fn weights_for(g: &MultiGraph, given: &[u64]) -> Result<Vec<u64>, Failure> {
    if !given.is_empty() {
        if given.len() != g.node_count() {
            return Err(Failure::Usage("one weight per node required".into()));
        }
        return Ok(given.to_vec());
    }
    Ok(g.weights().map_or_else(|| vec![1; g.node_count()], <[u64]>::to_vec))
}

fn k4() -> connpart::Result<PlaneGraph> {
    PlaneGraph::from_coords(
        MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)]),
        &[(0.0, 0.0), (4.0, 0.0), (2.0, 3.5), (2.0, 1.2)],
    )
}

fn c4() -> MultiGraph {
    MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])
}

fn build_graph(b: &BuildGraph, out: Option<&Path>) -> Out {
    let file = match b.family {
        Family::Grid => {
            let (pg, l) = grid(b.n, b.m.unwrap_or(b.n))?;
            GraphFile::from_plane(&pg).with_layout(&l)
        }
        Family::Shaved => {
            let (pg, l) = shaved_grid(b.n)?;
            GraphFile::from_plane(&pg).with_layout(&l)
        }
        Family::Gate => {
            let (g, l) = gate_graph(b.width, b.strict_zero)?;
            GraphFile::from_plane(&PlaneGraph::from_coords(g, &l)?).with_layout(&l)
        }
        Family::Franken => {
            let (g, l) = franken_graph(b.n)?;
            GraphFile::from_plane(&PlaneGraph::from_coords(g, &l)?).with_layout(&l)
        }
        Family::GadgetFamily => match b.gadget {
            GadgetFamily::Rd => {
                let rd = build_rd(b.d)?;
                GraphFile::from_plane(&rd.plane).with_layout(&rd.coords)
            }
            GadgetFamily::DoubledStarC4 => gadget_graph_file(&doubled_star(&c4(), b.d)?),
            GadgetFamily::TdK4 => gadget_graph_file(&build_td(&k4()?, b.d)?),
        },
    };
    emit(out, &file.to_json()?)
}

fn gadget(cmd: &GadgetCmd, out: Option<&Path>) -> Out {
    let loaded = load(&cmd.graph)?;
    let map: GadgetMap = match cmd.kind {
        GadgetKindArg::Bigons => chain_of_bigons(&loaded.graph, cmd.d)?,
        GadgetKindArg::Dipoles => chain_of_dipoles(&loaded.graph, cmd.r, cmd.d)?,
        GadgetKindArg::DoubledStar => doubled_star(&loaded.graph, cmd.d)?,
        GadgetKindArg::Rd => vertex_replace_rd(loaded.require_plane()?, cmd.d)?,
        GadgetKindArg::Td => build_td(loaded.require_plane()?, cmd.d)?,
    };
    let mut side = GadgetSidecar::from_map(&map);
    side.base = GraphFile::from_json(&fs::read_to_string(&cmd.graph).map_err(Error::from)?)?;
    let text = gadget_graph_file(&map).to_json()?;
    let side_text = serde_json::to_string_pretty(&side).map_err(Error::from)? + "\n";
    match out {
        Some(p) => {
            emit(Some(p), &text)?;
            let mut side_path = p.as_os_str().to_owned();
            side_path.push(".provenance.json");
            emit(Some(Path::new(&side_path)), &side_text)
        }
        None => emit(None, &format!("{{\"graph\": {}, \"provenance\": {}}}\n", text.trim_end(), side_text.trim_end())),
    }
}

fn count(cmd: &CountCmd, out: Option<&Path>) -> Out {
    let g = load(&cmd.graph)?.graph;
    let j = edge_set(&g, &cmd.j)?;
    let j2 = edge_set(&g, &cmd.j2)?;
    let value = match cmd.what {
        CountWhat::Sc => count_sc(&g)?,
        CountWhat::Balanced => count_balanced(&g, Some(&weights_for(&g, &cmd.weights)?))?,
        CountWhat::Marginal if cmd.balanced => balanced_count_remainder(&g, &weights_for(&g, &cmd.weights)?, &j, &j2, cmd.depth)?,
        CountWhat::Marginal => sc_count_remainder(&g, &j, &j2, cmd.depth)?,
    };
    emit(out, &format!("{value}\n"))
}

fn sample(cmd: &SampleCmd, seed: u64, out: Option<&Path>) -> Out {
    let g = load(&cmd.graph)?.graph;
    let mut rng = seeded_rng(seed);
    let mut lines = String::new();
    let mut record = |i: usize, v: serde_json::Value| {
        lines.push_str(&serde_json::json!({"sample": i, "seed": seed, "value": v}).to_string());
        lines.push('\n');
    };
    match cmd.what {
        SampleWhat::Sc => {
            let mut s = match &cmd.lambda_c {
                None => CycleSampler::uniform(&g)?,
                Some(p) => {
                    let raw: Vec<String> =
                        serde_json::from_str(&fs::read_to_string(p).map_err(Error::from)?).map_err(Error::from)?;
                    let c = raw.iter().map(|s| parse_rational(s)).collect::<connpart::Result<Vec<_>>>()?;
                    if c.len() != g.edge_count() {
                        return Err(Failure::Usage("one weight per edge required".into()));
                    }
                    CycleSampler::new(&g, c)?
                }
            };
            for i in 0..cmd.n {
                record(i, serde_json::json!(s.sample(&mut rng)?.to_vec()));
            }
        }
        SampleWhat::Balanced => {
            let mut s = BalancedSampler::new(&g, &weights_for(&g, &cmd.weights)?)?;
            for i in 0..cmd.n {
                record(i, serde_json::json!(s.sample(&mut rng)?.assign()));
            }
        }
        SampleWhat::TreePartition => {
            let tree = match cmd.tree {
                TreeArg::Ust => TreeName::Ust,
                TreeArg::Mst => TreeName::Mst,
            };
            let opts = TreePartitionOptions::new(parse_rational(&cmd.eps)?, tree.into());
            let w = weights_for(&g, &cmd.weights)?;
            for i in 0..cmd.n {
                record(i, serde_json::json!(tree_partition(&g, Some(&w), &opts, &mut rng)?.assign()));
            }
        }
    }
    emit(out, &lines)
}

fn mcmc(cmd: &McmcCmd, seed: u64, out: Option<&Path>) -> Out {
    let loaded = load(&cmd.graph)?;
    let g = &loaded.graph;
    let cfg = ChainConfig {
        lambda: parse_rational(&cmd.lambda)?,
        apd_percent: cmd.apd.as_deref().map(parse_rational).transpose()?,
        steps: cmd.steps,
        seed,
        trace_stride: cmd.trace_stride,
        ..Default::default()
    };
    let mut chain = match &cmd.resume {
        Some(p) => {
            let cp: Checkpoint =
                serde_json::from_str(&fs::read_to_string(p).map_err(Error::from)?).map_err(Error::from)?;
            FlipChain::resume(g, ChainConfig { seed: cp.seed, ..cfg }, &cp)?
        }
        None => {
            let initial = match cmd.init {
                InitArg::File => {
                    let p = cmd.init_file.as_ref().ok_or_else(|| Failure::Usage("--init file needs --init-file".into()))?;
                    let text = fs::read_to_string(p).map_err(Error::from)?;
                    let assign = text
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<usize>().map_err(|_| Failure::Usage(format!("bad block label {s:?}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    Partition::new(2, assign, false)?
                }
                InitArg::Diag | InitArg::Horiz => {
                    let layout =
                        loaded.layout.as_ref().ok_or_else(|| Failure::Usage("graph file has no coordinates".into()))?;
                    let split = if matches!(cmd.init, InitArg::Diag) { InitialSplit::Diagonal } else { InitialSplit::Horizontal };
                    initial_partition(layout, split)
                }
            };
            if !is_connected_partition(g, &initial) {
                return Err(Failure::Usage("initial partition is not connected".into()));
            }
            FlipChain::new(g, cfg, initial)?
        }
    };
    chain.run(cmd.steps)?;
    chain.validate()?;
    let stats = chain.stats();
    if let Some(dir) = &cmd.stats_out {
        heatmap_export(&stats, loaded.layout.as_deref(), dir)?;
        let trace: String = stats.cut_trace.iter().map(|c| format!("{c}\n")).collect();
        fs::write(dir.join("cut_trace.txt"), trace).map_err(Error::from)?;
    }
    if let Some(p) = &cmd.checkpoint {
        fs::write(p, serde_json::to_string(&chain.checkpoint()).map_err(Error::from)?).map_err(Error::from)?;
    }
    let s = chain.state();
    let summary = serde_json::json!({
        "seed": seed, "steps": chain.step_count(), "accepted": stats.accepted, "self_loops": stats.self_loops,
        "rejected": stats.rejected, "cut_size": s.cut_size, "block_weights": s.block_weights,
        "mean_cut": stats.mean_cut(), "assign": s.partition.assign(),
    });
    emit(out, &(summary.to_string() + "\n"))
}

fn experiment(cmd: &ExperimentCmd, seed: Option<u64>, out: Option<&Path>) -> Out {
    let mut cfg: ExperimentConfig = match (&cmd.preset, &cmd.config) {
        (Some(id), _) => preset(id, cmd.graph.as_deref()).ok_or_else(|| {
            Failure::Usage(format!("unknown preset {id:?} (or missing --graph); presets: {}", PRESETS.join(", ")))
        })?,
        (None, Some(p)) => serde_json::from_str(&fs::read_to_string(p).map_err(Error::from)?).map_err(Error::from)?,
        (None, None) => return Err(Failure::Usage("give --preset or --config".into())),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(r) = cmd.replicates {
        cfg.replicates = r;
    }
    match &mut cfg.task {
        connpart_cli::experiment::Task::Flips { steps, .. } => *steps = cmd.steps.unwrap_or(*steps),
        connpart_cli::experiment::Task::Seats { samples, .. } => *samples = cmd.samples.unwrap_or(*samples),
    }
    let dir = out.map(Path::to_path_buf).or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("runs"));
    fs::create_dir_all(&dir).map_err(Error::from)?;
    let record = run_experiment(&cfg, &dir).map_err(|e| Failure::Assertion(e.to_string()))?;
    emit(None, &(serde_json::to_string(&record).map_err(Error::from)? + "\n"))
}

fn run(cli: Cli) -> Out {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let seed = || {
        cli.seed.unwrap_or_else(|| {
            let s = rand::random();
            eprintln!("seed: {s}");
            s
        })
    };
    let out = cli.out.as_deref();
    match &cli.command {
        Command::BuildGraph(b) => build_graph(b, out),
        Command::Gadget(g) => gadget(g, out),
        Command::Count(c) => count(c, out),
        Command::Sample(s) => sample(s, seed(), out),
        Command::McmcRun(m) => mcmc(m, seed(), out),
        Command::Experiment(e) => experiment(e, cli.seed, out),
        Command::Verify { level } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let report = verify_suite(level, cli.seed.unwrap_or(1));
            emit(out, &(serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n"))?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Assertion("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(Failure::Assertion(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            2
        }
    };
    let _ = std::io::stdout().flush();
    ExitCode::from(code)
}
