//! Overlapping communities from a disjoint partition (CLAGO).
//!
//! Pick a community `C_j` with probability `π(C_j)` and take one walk step
//! from it; the hit distribution is `Σ_j π(C_j)·μ_{C_j} = π`. Conditioning on
//! the walk hitting `x` gives the soft membership
//!
//! ```text
//! γ_x(j) = π(C_j)·μ_{C_j}(x) / π(x)
//! ```
//!
//! and `x` joins every community with `γ_x(j) ≥ α·max_i γ_x(i)`.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::clag::{fit_with_restarts, ClagConfig, ClagState};
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::measure::{one_step_measure, stationary_measure, SparseMeasure};
use crate::partition::Partition;

/// Threshold used when none is given.
pub const DEFAULT_ALPHA: f64 = 0.5;

/// Where the community weights and measures come from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipSource {
    /// Recompute `π(C_j)` and `μ_{C_j}` from the partition's node sets.
    #[default]
    Partition,
    /// Reuse the fitted `p_j` as `μ_{C_j}` and `m_j / Σ m` as `π(C_j)`.
    FittedParameters,
}

/// Community weights, community measures and per-node membership
/// distributions.
#[derive(Debug, Clone)]
pub struct MembershipModel {
    weights: Vec<f64>,
    measures: Vec<SparseMeasure>,
    gamma: Vec<Vec<(u32, f64)>>,
}

impl MembershipModel {
    /// `π(C_j)`, zero for empty communities.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `μ_{C_j}`, empty for empty communities.
    pub fn measure(&self, j: usize) -> &SparseMeasure {
        &self.measures[j]
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    /// `γ_x` as `(community, probability)` pairs sorted by community; empty
    /// for nodes no community walk can reach.
    pub fn gamma(&self, x: usize) -> &[(u32, f64)] {
        &self.gamma[x]
    }

    /// Tab-separated `node community gamma` lines, communities 1-indexed.
    pub fn write_gamma_tsv<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        for (x, row) in self.gamma.iter().enumerate() {
            for &(j, p) in row {
                writeln!(out, "{}\t{}\t{p}", g.external_id(x), j + 1)?;
            }
        }
        Ok(())
    }
}

/// Builds `π(C_j)`, `μ_{C_j}` and `γ_x` from the node sets of `partition`.
/// Communities of zero total degree get weight zero and take no part in any
/// `γ_x`.
pub fn build_membership_model(g: &Graph, partition: &Partition) -> Result<MembershipModel> {
    if partition.num_nodes() != g.num_nodes() {
        return Err(Error::UniverseMismatch(format!(
            "partition has {} nodes, graph has {}",
            partition.num_nodes(),
            g.num_nodes()
        )));
    }
    let pi = stationary_measure(g)?;
    let d_v = g.total_degree() as f64;
    let mut weights = Vec::with_capacity(partition.k());
    let mut measures = Vec::with_capacity(partition.k());
    for members in partition.communities() {
        let d_c = g.total_degree_of_set(&members)?;
        if d_c == 0 {
            weights.push(0.0);
            measures.push(SparseMeasure::empty());
        } else {
            weights.push(d_c as f64 / d_v);
            measures.push(one_step_measure(g, &members)?);
        }
    }
    if weights.iter().all(|&w| w == 0.0) {
        return Err(Error::NoCommunities);
    }

    let mut gamma = vec![Vec::new(); g.num_nodes()];
    for (j, (w, mu)) in weights.iter().zip(&measures).enumerate() {
        for (x, mass) in mu.iter() {
            gamma[x].push((j as u32, w * mass / pi.get(x)));
        }
    }
    Ok(MembershipModel {
        weights,
        measures,
        gamma,
    })
}

/// Builds the model from fitted parameters instead of the node sets:
/// `π̂_j = m_j / Σ m` and `μ̂_j = p_j`, with `γ_x(j) ∝ π̂_j·p_j(x)`.
pub fn membership_from_parameters(g: &Graph, state: &ClagState) -> Result<MembershipModel> {
    let total = state.processed_mass();
    if total == 0 {
        return Err(Error::NoCommunities);
    }
    let mut weights = Vec::with_capacity(state.k());
    let mut measures = Vec::with_capacity(state.k());
    for (j, &m) in state.counters().iter().enumerate() {
        if m == 0 {
            weights.push(0.0);
            measures.push(SparseMeasure::empty());
        } else {
            weights.push(m as f64 / total as f64);
            measures.push(state.parameter(j));
        }
    }
    let mut gamma: Vec<Vec<(u32, f64)>> = vec![Vec::new(); g.num_nodes()];
    for (j, (w, mu)) in weights.iter().zip(&measures).enumerate() {
        for (x, mass) in mu.iter() {
            if x < gamma.len() {
                gamma[x].push((j as u32, w * mass));
            }
        }
    }
    for row in &mut gamma {
        let norm: f64 = row.iter().map(|&(_, v)| v).sum();
        if norm > 0.0 {
            row.iter_mut().for_each(|(_, v)| *v /= norm);
        }
    }
    Ok(MembershipModel {
        weights,
        measures,
        gamma,
    })
}

/// `Γ_x = { j : γ_x(j) ≥ α·γ_x(s) }` where `s` is the argmax (lowest index
/// on ties). Always contains `s`.
pub fn threshold_membership(gamma: &[(u32, f64)], alpha: f64) -> Result<Vec<u32>> {
    check_alpha(alpha)?;
    let mut best: Option<(u32, f64)> = None;
    for &(j, p) in gamma {
        match best {
            Some((bj, bp)) if p < bp || (p == bp && j > bj) => {}
            _ => best = Some((j, p)),
        }
    }
    let (_, top) = best.ok_or(Error::EmptyMembership)?;
    let cutoff = alpha * top;
    let mut out: Vec<u32> = gamma
        .iter()
        .filter(|&&(_, p)| p >= cutoff)
        .map(|&(j, _)| j)
        .collect();
    out.sort_unstable();
    Ok(out)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidConfig(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    Ok(())
}

/// Thresholds every node's `γ_x`. Nodes with no membership distribution
/// (isolated nodes) stay uncovered.
pub fn cover_from_model(model: &MembershipModel, alpha: f64) -> Result<Cover> {
    check_alpha(alpha)?;
    let memberships = model
        .gamma
        .iter()
        .map(|row| {
            if row.is_empty() {
                Ok(Vec::new())
            } else {
                threshold_membership(row, alpha)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cover = Cover::from_memberships(memberships, model.k())?;
    cover.alpha = Some(alpha);
    Ok(cover)
}

pub fn derive_cover(g: &Graph, partition: &Partition, alpha: f64) -> Result<Cover> {
    let model = build_membership_model(g, partition)?;
    cover_from_model(&model, alpha)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PruneReport {
    pub pruned_communities: usize,
    /// Nodes that lost their last membership.
    pub newly_uncovered: usize,
}

/// Empties every community with fewer than `min_size` members. Slots are
/// kept, so community indices are unchanged.
pub fn prune_cover(cover: &Cover, min_size: usize) -> (Cover, PruneReport) {
    let mut pruned = cover.clone();
    let before = cover.uncovered_count();
    let pruned_communities = pruned.retain_communities(|members| members.len() >= min_size);
    let report = PruneReport {
        pruned_communities,
        newly_uncovered: pruned.uncovered_count() - before,
    };
    (pruned, report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapOptions {
    pub alpha: f64,
    pub min_size: usize,
    pub source: MembershipSource,
}

impl Default for OverlapOptions {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            min_size: 0,
            source: MembershipSource::Partition,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClagoReport {
    pub iterations: usize,
    pub best_restart: usize,
    pub modularities: Vec<f64>,
    /// Non-empty components of the disjoint partition.
    pub non_empty: usize,
    pub pruned: usize,
    pub surviving: usize,
    pub overlapping_nodes: usize,
    pub uncovered_nodes: usize,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone)]
pub struct ClagoRun {
    pub partition: Partition,
    pub model: MembershipModel,
    pub cover: Cover,
    pub report: ClagoReport,
}

/// Partition with CLAG (best of `cfg.restarts`), derive the thresholded cover,
/// then prune small communities.
pub fn run_clago(g: &Graph, cfg: &ClagConfig, opts: &OverlapOptions) -> Result<ClagoRun> {
    check_alpha(opts.alpha)?;
    let start = Instant::now();
    let fitted = fit_with_restarts(g, cfg)?;
    let partition = fitted.best.partition;
    let model = match opts.source {
        MembershipSource::Partition => build_membership_model(g, &partition)?,
        MembershipSource::FittedParameters => membership_from_parameters(g, &fitted.best.state)?,
    };
    let raw = cover_from_model(&model, opts.alpha)?;
    let (cover, pruning) = prune_cover(&raw, opts.min_size);
    let report = ClagoReport {
        iterations: fitted.best.iterations,
        best_restart: fitted.best_restart,
        modularities: fitted.modularities,
        non_empty: partition.non_empty_count(),
        pruned: pruning.pruned_communities,
        surviving: cover.non_empty_count(),
        overlapping_nodes: cover.overlap_count(),
        uncovered_nodes: cover.uncovered_count(),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(ClagoRun {
        partition,
        model,
        cover,
        report,
    })
}
