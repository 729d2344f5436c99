//! Overlapping community assignments.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::partition::Partition;

/// A family of possibly overlapping communities over `0..num_nodes`, kept in
/// both directions: members per community and memberships per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    communities: Vec<Vec<NodeId>>,
    memberships: Vec<Vec<u32>>,
    /// Threshold the cover was derived with, if any.
    pub alpha: Option<f64>,
}

impl Cover {
    /// Builds a cover from per-node membership lists over `k` community slots.
    pub fn from_memberships(memberships: Vec<Vec<u32>>, k: usize) -> Result<Self> {
        let mut communities = vec![Vec::new(); k];
        let mut memberships = memberships;
        for (x, list) in memberships.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &j in list.iter() {
                let slot = communities.get_mut(j as usize).ok_or_else(|| {
                    Error::InvalidConfig(format!("community {j} out of range for k = {k}"))
                })?;
                slot.push(x);
            }
        }
        Ok(Self {
            communities,
            memberships,
            alpha: None,
        })
    }

    /// Builds a cover from community member lists.
    pub fn from_communities(num_nodes: usize, communities: &[Vec<NodeId>]) -> Result<Self> {
        let mut memberships = vec![Vec::new(); num_nodes];
        for (j, members) in communities.iter().enumerate() {
            for &x in members {
                if x >= num_nodes {
                    return Err(Error::NodeOutOfRange { node: x, num_nodes });
                }
                memberships[x].push(j as u32);
            }
        }
        Self::from_memberships(memberships, communities.len())
    }

    /// Every block of the partition becomes one community.
    pub fn from_partition(partition: &Partition) -> Self {
        let memberships = partition
            .labels()
            .iter()
            .map(|l| l.iter().copied().collect())
            .collect();
        Self::from_memberships(memberships, partition.k()).expect("labels are below k")
    }

    pub fn num_nodes(&self) -> usize {
        self.memberships.len()
    }

    /// Number of community slots, including empty ones.
    pub fn k(&self) -> usize {
        self.communities.len()
    }

    pub fn communities(&self) -> &[Vec<NodeId>] {
        &self.communities
    }

    pub fn community(&self, j: usize) -> &[NodeId] {
        &self.communities[j]
    }

    /// `Γ_x`: sorted community indices of `x`.
    pub fn memberships(&self, x: NodeId) -> &[u32] {
        &self.memberships[x]
    }

    pub fn all_memberships(&self) -> &[Vec<u32>] {
        &self.memberships
    }

    pub fn non_empty_count(&self) -> usize {
        self.communities.iter().filter(|c| !c.is_empty()).count()
    }

    /// Non-empty communities only.
    pub fn non_empty_communities(&self) -> impl Iterator<Item = &[NodeId]> {
        self.communities
            .iter()
            .filter(|c| !c.is_empty())
            .map(Vec::as_slice)
    }

    pub fn uncovered_count(&self) -> usize {
        self.memberships.iter().filter(|m| m.is_empty()).count()
    }

    /// Whether no node belongs to two communities.
    pub fn is_disjoint(&self) -> bool {
        self.memberships.iter().all(|m| m.len() <= 1)
    }

    pub fn overlap_count(&self) -> usize {
        self.memberships.iter().filter(|m| m.len() > 1).count()
    }

    /// Community slots that are empty are retained so indices stay aligned
    /// with the partition the cover came from.
    pub(crate) fn retain_communities<F>(&mut self, mut keep: F) -> usize
    where
        F: FnMut(&[NodeId]) -> bool,
    {
        let mut dropped = vec![false; self.k()];
        for (j, members) in self.communities.iter_mut().enumerate() {
            if !members.is_empty() && !keep(members) {
                dropped[j] = true;
                members.clear();
            }
        }
        for list in &mut self.memberships {
            list.retain(|&j| !dropped[j as usize]);
        }
        dropped.iter().filter(|&&d| d).count()
    }
}

/// Summary counts of a cover, for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverSummary {
    pub communities: usize,
    pub overlapping_nodes: usize,
    pub uncovered_nodes: usize,
}

impl From<&Cover> for CoverSummary {
    fn from(c: &Cover) -> Self {
        Self {
            communities: c.non_empty_count(),
            overlapping_nodes: c.overlap_count(),
            uncovered_nodes: c.uncovered_count(),
        }
    }
}
