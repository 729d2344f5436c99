//! Command-line front end. Every command prints a JSON report on stdout and
//! writes data files only where asked.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bench::{cross_edge_fraction, generate_planted_overlap, write_lfr_dataset, BenchConfig};
use crate::clag::{fit_with_restarts, ClagConfig, Cost};
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, Graph};
use crate::io;
use crate::metrics;
use crate::overlap::{run_clago, MembershipSource, OverlapOptions};

#[derive(Debug, Parser)]
#[command(
    name = "clago",
    version,
    about = "Online overlapping community detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Disjoint communities.
    Detect(DetectArgs),
    /// Overlapping communities derived from a disjoint partition.
    Overlap(OverlapArgs),
    /// Compare two partition files (NMI) or two cover files (ENMI).
    Eval(EvalArgs),
    /// Generate a planted-overlap benchmark graph.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CostArg {
    Inner,
    Euclid,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Edge list, one whitespace-separated pair per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Number of components.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    #[arg(long, value_enum, default_value_t = CostArg::Inner)]
    pub cost: CostArg,
    /// Stop early once at most this fraction of nodes change component (0 = never).
    #[arg(long, default_value_t = 0.0, value_parser = unit_interval)]
    pub stop_fraction: f64,
}

impl FitArgs {
    fn config(&self) -> ClagConfig {
        ClagConfig {
            k: self.k as usize,
            max_iterations: self.iters as usize,
            stop_change_fraction: self.stop_fraction,
            cost: match self.cost {
                CostArg::Inner => Cost::InnerProduct,
                CostArg::Euclid => Cost::NegEuclidean,
            },
            seed: self.seed,
            restarts: self.restarts as usize,
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub fit: FitArgs,
    /// Ground-truth partition (`id<TAB>label`).
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Where to write the partition.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OverlapArgs {
    #[command(flatten)]
    pub fit: FitArgs,
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    pub alpha: f64,
    /// Drop communities with fewer members.
    #[arg(long, default_value_t = 0)]
    pub min_size: usize,
    /// Ground-truth cover in `community.dat` format.
    #[arg(long)]
    pub truth_cover: Option<PathBuf>,
    /// Cover, one line per node (`community.dat` format).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cover, one line per community. Defaults to `<out>.communities`.
    #[arg(long)]
    pub out_communities: Option<PathBuf>,
    /// Soft memberships as `node<TAB>community<TAB>gamma` lines.
    #[arg(long)]
    pub gamma_out: Option<PathBuf>,
    /// Use the fitted parameters instead of the partition's node sets.
    #[arg(long)]
    pub from_parameters: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub left: PathBuf,
    pub right: PathBuf,
    /// Treat both files as covers in `community.dat` format.
    #[arg(long)]
    pub covers: bool,
    /// Edge list used to report the modularity of the left partition.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Number of overlapping nodes.
    #[arg(long, default_value_t = 0)]
    pub overlap: usize,
    /// Memberships per overlapping node.
    #[arg(long, default_value_t = 2)]
    pub mm: usize,
    #[arg(long, default_value_t = 20.0)]
    pub avg_degree: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving network.dat, community.dat and config.json.
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn unit_interval(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1]"))
    }
}

/// Report printed by `detect` and `overlap`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub config: serde_json::Value,
    pub iterations: usize,
    pub best_restart: usize,
    pub restart_modularities: Vec<f64>,
    pub non_empty: usize,
    pub pruned: usize,
    pub uncovered: usize,
    pub wall_time_ms: f64,
    pub scores: BTreeMap<&'static str, f64>,
}

pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<()> {
    let report = match cli.command {
        Command::Detect(args) => serde_json::to_value(detect(&args)?),
        Command::Overlap(args) => serde_json::to_value(overlap(&args)?),
        Command::Eval(args) => Ok(eval(&args)?),
        Command::Gen(args) => Ok(gen(&args)?),
    }
    .map_err(|e| Error::InvalidConfig(format!("report serialization: {e}")))?;
    writeln!(out, "{report:#}")?;
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph> {
    Ok(load_edge_list(BufReader::new(File::open(path)?))?.graph)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn detect(args: &DetectArgs) -> Result<RunReport> {
    let start = Instant::now();
    let g = load_graph(&args.fit.input)?;
    let cfg = args.fit.config();
    let fitted = fit_with_restarts(&g, &cfg)?;
    let partition = &fitted.best.partition;

    if let Some(path) = &args.out {
        let mut w = create(path)?;
        io::write_partition(&mut w, g.external_ids(), partition)?;
        w.flush()?;
    }

    let mut scores = BTreeMap::new();
    scores.insert("modularity", metrics::modularity(&g, partition)?);
    if let Some(path) = &args.truth {
        let truth = io::read_partition_for_graph(BufReader::new(File::open(path)?), &g)?;
        if partition.is_complete() && truth.is_complete() {
            scores.insert("nmi", metrics::nmi(partition, &truth)?);
        }
        scores.insert(
            "misclassified",
            metrics::misclassified(partition, &truth)? as f64,
        );
    }

    Ok(RunReport {
        command: "detect",
        config: json!({
            "input": args.fit.input,
            "clag": cfg,
            "truth": args.truth,
            "out": args.out,
        }),
        iterations: fitted.best.iterations,
        best_restart: fitted.best_restart,
        restart_modularities: fitted.modularities,
        non_empty: partition.non_empty_count(),
        pruned: 0,
        uncovered: partition.unassigned_count(),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        scores,
    })
}

fn overlap(args: &OverlapArgs) -> Result<RunReport> {
    let start = Instant::now();
    let g = load_graph(&args.fit.input)?;
    let cfg = args.fit.config();
    let opts = OverlapOptions {
        alpha: args.alpha,
        min_size: args.min_size,
        source: if args.from_parameters {
            MembershipSource::FittedParameters
        } else {
            MembershipSource::Partition
        },
    };
    let run = run_clago(&g, &cfg, &opts)?;

    if let Some(path) = &args.out {
        let mut w = create(path)?;
        io::write_cover_by_node(&mut w, g.external_ids(), &run.cover)?;
        w.flush()?;
        let inverse = args.out_communities.clone().unwrap_or_else(|| {
            let mut p = path.clone().into_os_string();
            p.push(".communities");
            PathBuf::from(p)
        });
        let mut w = create(&inverse)?;
        io::write_cover_by_community(&mut w, g.external_ids(), &run.cover)?;
        w.flush()?;
    }
    if let Some(path) = &args.gamma_out {
        let mut w = create(path)?;
        run.model.write_gamma_tsv(&g, &mut w)?;
        w.flush()?;
    }

    let mut scores = BTreeMap::new();
    scores.insert("modularity", metrics::modularity(&g, &run.partition)?);
    scores.insert("surviving", run.report.surviving as f64);
    scores.insert("overlapping_nodes", run.report.overlapping_nodes as f64);
    if let Some(path) = &args.truth_cover {
        let truth = io::read_cover_for_graph(BufReader::new(File::open(path)?), &g)?;
        scores.insert("enmi", metrics::enmi(&run.cover, &truth)?);
    }

    Ok(RunReport {
        command: "overlap",
        config: json!({
            "input": args.fit.input,
            "clag": cfg,
            "overlap": opts,
            "truth_cover": args.truth_cover,
            "out": args.out,
        }),
        iterations: run.report.iterations,
        best_restart: run.report.best_restart,
        restart_modularities: run.report.modularities,
        non_empty: run.report.non_empty,
        pruned: run.report.pruned,
        uncovered: run.report.uncovered_nodes,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        scores,
    })
}

fn eval(args: &EvalArgs) -> Result<serde_json::Value> {
    let open = |p: &Path| -> Result<BufReader<File>> { Ok(BufReader::new(File::open(p)?)) };
    if args.covers {
        let (left_ids, left) = io::read_cover(open(&args.left)?)?;
        let (right_ids, right) = io::read_cover(open(&args.right)?)?;
        same_ids(&left_ids, &right_ids)?;
        return Ok(json!({ "nodes": left_ids.len(), "enmi": metrics::enmi(&left, &right)? }));
    }

    let (left_ids, left) = io::read_partition(open(&args.left)?)?;
    let (right_ids, right) = io::read_partition(open(&args.right)?)?;
    same_ids(&left_ids, &right_ids)?;
    let mut report = json!({
        "nodes": left_ids.len(),
        "misclassified": metrics::misclassified(&left, &right)?,
    });
    if left.is_complete() && right.is_complete() {
        report["nmi"] = json!(metrics::nmi(&left, &right)?);
    }
    if let Some(path) = &args.graph {
        let g = load_graph(path)?;
        let on_graph = io::read_partition_for_graph(open(&args.left)?, &g)?;
        report["modularity"] = json!(metrics::modularity(&g, &on_graph)?);
    }
    Ok(report)
}

fn same_ids(a: &[u64], b: &[u64]) -> Result<()> {
    if a != b {
        return Err(Error::UniverseMismatch(format!(
            "files list different node sets ({} and {} nodes)",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

fn gen(args: &GenArgs) -> Result<serde_json::Value> {
    let cfg = BenchConfig {
        n: args.n,
        k_true: args.k,
        overlap_nodes: args.overlap,
        memberships_per_overlap: args.mm,
        mixing: args.mu,
        avg_degree: args.avg_degree,
        seed: args.seed,
    };
    let (g, cover) = generate_planted_overlap(&cfg)?;
    fs::create_dir_all(&args.out_dir)?;
    write_lfr_dataset(&args.out_dir, &g, &cover)?;
    let config = serde_json::to_string_pretty(&cfg)
        .map_err(|e| Error::InvalidConfig(format!("config serialization: {e}")))?;
    fs::write(args.out_dir.join("config.json"), config + "\n")?;
    Ok(json!({
        "config": cfg,
        "nodes": g.num_nodes(),
        "edges": g.num_edges(),
        "isolated": g.isolated_nodes().len(),
        "cross_edge_fraction": cross_edge_fraction(&g, &cover),
        "overlapping_nodes": cover.overlap_count(),
    }))
}
