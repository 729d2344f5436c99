//! Benchmark graphs: a simplified planted-overlap generator and loaders for
//! LFR-tool output files.
//!
//! The generator keeps the LFR notions of mixing and overlap but not its
//! power laws: community sizes are near-equal and per-node degrees are
//! binomial around `avg_degree`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::clag::seeded_rng;
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, Graph};
use crate::io::{read_cover_for_graph, write_cover_by_node};

/// Attempts per endpoint before a rejection sampler gives up.
const MAX_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub n: usize,
    pub k_true: usize,
    /// Nodes belonging to several communities.
    pub overlap_nodes: usize,
    /// Communities each overlapping node belongs to.
    pub memberships_per_overlap: usize,
    /// Expected fraction of a node's edges leaving all of its communities.
    pub mixing: f64,
    pub avg_degree: f64,
    pub seed: u64,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.k_true == 0 || self.n == 0 {
            return fail("n and k_true must be positive".into());
        }
        if self.overlap_nodes > self.n {
            return fail(format!(
                "{} overlapping nodes exceed n = {}",
                self.overlap_nodes, self.n
            ));
        }
        if self.memberships_per_overlap < 2 {
            return fail("memberships_per_overlap must be at least 2".into());
        }
        if self.overlap_nodes > 0 && self.memberships_per_overlap > self.k_true {
            return fail(format!(
                "cannot place a node in {} of {} communities",
                self.memberships_per_overlap, self.k_true
            ));
        }
        if !(0.0..1.0).contains(&self.mixing) {
            return fail(format!("mixing must lie in [0, 1), got {}", self.mixing));
        }
        if !(self.avg_degree.is_finite() && self.avg_degree > 0.0) {
            return fail("avg_degree must be positive".into());
        }
        if (1.0 - self.mixing) * self.avg_degree < 1.0 {
            return fail("expected intra-community degree is below 1".into());
        }
        let singles = self.n - self.overlap_nodes;
        if singles / self.k_true < 2 {
            return fail(format!(
                "{} communities over {} single-membership nodes leaves some with fewer than 2",
                self.k_true, singles
            ));
        }
        if self.mixing > 0.0
            && (self.k_true < 2
                || (self.overlap_nodes > 0 && self.memberships_per_overlap == self.k_true))
        {
            return fail("mixing > 0 needs nodes outside every node's communities".into());
        }
        Ok(())
    }
}

/// Draws a graph with a planted overlapping cover; deterministic in
/// `cfg.seed`. Node `i` gets external id `i + 1`.
pub fn generate_planted_overlap(cfg: &BenchConfig) -> Result<(Graph, Cover)> {
    cfg.validate()?;
    let mut rng = seeded_rng(cfg.seed);
    let n = cfg.n;
    let k = cfg.k_true;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut memberships: Vec<Vec<u32>> = vec![Vec::new(); n];
    let (overlapping, single) = order.split_at(cfg.overlap_nodes);
    for (i, &x) in single.iter().enumerate() {
        memberships[x].push((i % k) as u32);
    }
    for &x in overlapping {
        memberships[x] = index::sample(&mut rng, k, cfg.memberships_per_overlap)
            .into_iter()
            .map(|j| j as u32)
            .collect();
    }
    let cover = Cover::from_memberships(memberships, k)?;

    let trials = cfg.avg_degree.round().max(1.0) as u64;
    let initiated = Binomial::new(trials, 0.5)
        .map_err(|e| Error::InvalidConfig(format!("degree distribution: {e}")))?;
    let mut edges = Vec::new();
    for x in 0..n {
        let owned = cover.memberships(x);
        let count = initiated.sample(&mut rng);
        for _ in 0..count {
            let y = if rng.random::<f64>() < cfg.mixing {
                sample_outside(&cover, owned, n, &mut rng)?
            } else {
                let j = owned[rng.random_range(0..owned.len())] as usize;
                sample_member(cover.community(j), x, &mut rng)?
            };
            edges.push((x, y));
        }
    }
    let graph = Graph::from_edges(n, edges)?.with_external_ids((1..=n as u64).collect())?;
    Ok((graph, cover))
}

fn sample_member<R: Rng>(members: &[usize], x: usize, rng: &mut R) -> Result<usize> {
    for _ in 0..MAX_REJECTIONS {
        let y = members[rng.random_range(0..members.len())];
        if y != x {
            return Ok(y);
        }
    }
    Err(Error::InvalidConfig(
        "community too small for intra edges".into(),
    ))
}

fn sample_outside<R: Rng>(cover: &Cover, owned: &[u32], n: usize, rng: &mut R) -> Result<usize> {
    for _ in 0..MAX_REJECTIONS {
        let y = rng.random_range(0..n);
        if !cover.memberships(y).iter().any(|j| owned.contains(j)) {
            return Ok(y);
        }
    }
    Err(Error::InvalidConfig(
        "no nodes outside a node's communities".into(),
    ))
}

/// Fraction of edges whose endpoints share no community.
pub fn cross_edge_fraction(g: &Graph, cover: &Cover) -> f64 {
    let mut cross = 0usize;
    for (u, v) in g.edges() {
        let mu = cover.memberships(u);
        if !cover.memberships(v).iter().any(|j| mu.contains(j)) {
            cross += 1;
        }
    }
    cross as f64 / g.num_edges().max(1) as f64
}

/// Loads an LFR `network.dat` / `community.dat` pair.
pub fn load_lfr_dataset(network: &Path, communities: &Path) -> Result<(Graph, Cover)> {
    let graph = load_edge_list(BufReader::new(File::open(network)?))?.graph;
    let cover = read_cover_for_graph(BufReader::new(File::open(communities)?), &graph)?;
    Ok((graph, cover))
}

/// Writes `network.dat` (every edge in both directions, as the LFR tool
/// does) and `community.dat` into `dir`.
pub fn write_lfr_dataset(dir: &Path, g: &Graph, cover: &Cover) -> Result<()> {
    let mut net = BufWriter::new(File::create(dir.join("network.dat"))?);
    for x in 0..g.num_nodes() {
        for &y in g.neighbors(x) {
            writeln!(net, "{}\t{}", g.external_id(x), g.external_id(y as usize))?;
        }
    }
    net.flush()?;
    let mut comm = BufWriter::new(File::create(dir.join("community.dat"))?);
    write_cover_by_node(&mut comm, g.external_ids(), cover)?;
    comm.flush()?;
    Ok(())
}
