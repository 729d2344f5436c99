//! Sparse probability measures on the node set and the random-walk
//! distributions built from a graph.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Absolute tolerance on the total mass of a normalized measure.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A non-negative measure with finite support, stored as entries sorted by
/// node. Zero masses are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseMeasure {
    entries: Vec<(NodeId, f64)>,
    total: f64,
}

impl SparseMeasure {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a measure from `(node, mass)` pairs. Repeated nodes are summed,
    /// and non-positive results are dropped.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, f64)>,
    {
        let mut merged: BTreeMap<NodeId, f64> = BTreeMap::new();
        for (node, mass) in entries {
            *merged.entry(node).or_insert(0.0) += mass;
        }
        let entries: Vec<_> = merged.into_iter().filter(|&(_, m)| m > 0.0).collect();
        let total = entries.iter().map(|&(_, m)| m).sum();
        Self { entries, total }
    }

    pub fn get(&self, node: NodeId) -> f64 {
        self.entries
            .binary_search_by_key(&node, |&(n, _)| n)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn is_normalized(&self) -> bool {
        (self.total - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }

    /// `Σ_y a(y)·b(y)`, iterating over the smaller support.
    pub fn inner(&self, other: &SparseMeasure) -> f64 {
        let (small, large) = if self.support_len() <= other.support_len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().map(|(y, m)| m * large.get(y)).sum()
    }

    /// Squared Euclidean norm.
    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|&(_, m)| m * m).sum()
    }

    /// Total-variation distance `½ Σ_y |a(y) - b(y)|`.
    pub fn total_variation(&self, other: &SparseMeasure) -> f64 {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        let mut l1 = 0.0;
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&(x, ma)), Some(&(y, mb))) if x == y => {
                    l1 += (ma - mb).abs();
                    i += 1;
                    j += 1;
                }
                (Some(&(x, ma)), Some(&(y, _))) if x < y => {
                    l1 += ma;
                    i += 1;
                }
                (Some(&(_, ma)), None) => {
                    l1 += ma;
                    i += 1;
                }
                (_, Some(&(_, mb))) => {
                    l1 += mb;
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        0.5 * l1
    }
}

/// `⟨a, b⟩` for two sparse measures.
pub fn inner_product(a: &SparseMeasure, b: &SparseMeasure) -> f64 {
    a.inner(b)
}

/// `w_x`: the uniform distribution on the neighbors of `x`.
pub fn walk_step_measure(g: &Graph, x: NodeId) -> Result<SparseMeasure> {
    check_node(g, x)?;
    let d = g.degree(x);
    if d == 0 {
        return Err(Error::IsolatedNode(x));
    }
    let mass = 1.0 / d as f64;
    Ok(SparseMeasure {
        entries: g.neighbors(x).iter().map(|&y| (y as usize, mass)).collect(),
        total: 1.0,
    })
}

/// `π(x) = d_x / d_V`, the stationary measure of the simple random walk.
/// Isolated nodes carry no mass.
pub fn stationary_measure(g: &Graph) -> Result<SparseMeasure> {
    let d_v = g.total_degree();
    if d_v == 0 {
        return Err(Error::NoEdges);
    }
    Ok(SparseMeasure::from_entries(
        g.degrees()
            .enumerate()
            .map(|(x, d)| (x, d as f64 / d_v as f64)),
    ))
}

/// `μ_C`: one walk step from the degree-weighted restriction of `π` to `set`,
/// so that `μ_C(y) = |n_y ∩ C| / d_C`.
pub fn one_step_measure(g: &Graph, set: &[NodeId]) -> Result<SparseMeasure> {
    let mut members = set.to_vec();
    members.sort_unstable();
    members.dedup();
    let d_c = g.total_degree_of_set(&members)?;
    if d_c == 0 {
        return Err(Error::ZeroDegreeSet);
    }
    let unit = 1.0 / d_c as f64;
    let mut counts: BTreeMap<NodeId, usize> = BTreeMap::new();
    for &x in &members {
        for &y in g.neighbors(x) {
            *counts.entry(y as usize).or_insert(0) += 1;
        }
    }
    Ok(SparseMeasure::from_entries(
        counts.into_iter().map(|(y, c)| (y, c as f64 * unit)),
    ))
}

fn check_node(g: &Graph, x: NodeId) -> Result<()> {
    if x >= g.num_nodes() {
        return Err(Error::NodeOutOfRange {
            node: x,
            num_nodes: g.num_nodes(),
        });
    }
    Ok(())
}
