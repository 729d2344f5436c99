//! Disjoint node-to-community assignments.

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Assignment of each node to at most one of `k` components. Components may
/// be empty; unassigned nodes (isolated nodes during fitting) carry `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<Option<u32>>,
    k: usize,
}

impl Partition {
    pub fn new(labels: Vec<Option<u32>>, k: usize) -> Result<Self> {
        if let Some(bad) = labels.iter().flatten().find(|&&l| l as usize >= k) {
            return Err(Error::InvalidConfig(format!(
                "label {bad} out of range for k = {k}"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Fully assigned partition from plain labels; `k` is one past the largest.
    pub fn from_labels(labels: &[u32]) -> Self {
        let k = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        Self {
            labels: labels.iter().map(|&l| Some(l)).collect(),
            k,
        }
    }

    /// Partition of `0..num_nodes` from explicit blocks. Nodes outside every
    /// block stay unassigned.
    pub fn from_blocks(num_nodes: usize, blocks: &[Vec<NodeId>]) -> Result<Self> {
        let mut labels = vec![None; num_nodes];
        for (j, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= num_nodes {
                    return Err(Error::NodeOutOfRange { node: x, num_nodes });
                }
                if labels[x].replace(j as u32).is_some() {
                    return Err(Error::InvalidConfig(format!(
                        "node {x} appears in more than one block"
                    )));
                }
            }
        }
        Ok(Self {
            labels,
            k: blocks.len(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, x: NodeId) -> Option<u32> {
        self.labels[x]
    }

    pub fn labels(&self) -> &[Option<u32>] {
        &self.labels
    }

    /// Node lists per component, `k` entries, possibly empty.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.k];
        for (x, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                out[*l as usize].push(x);
            }
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for l in self.labels.iter().flatten() {
            sizes[*l as usize] += 1;
        }
        sizes
    }

    pub fn non_empty_count(&self) -> usize {
        self.sizes().iter().filter(|&&s| s > 0).count()
    }

    pub fn unassigned_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.labels.iter().all(Option::is_some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_round_trip() {
        let p = Partition::from_blocks(5, &[vec![0, 1], vec![], vec![3]]).unwrap();
        assert_eq!(p.k(), 3);
        assert_eq!(p.communities(), vec![vec![0, 1], vec![], vec![3]]);
        assert_eq!(p.non_empty_count(), 2);
        assert_eq!(p.unassigned_count(), 2);
        assert!(!p.is_complete());
    }

    #[test]
    fn overlapping_blocks_rejected() {
        assert!(Partition::from_blocks(3, &[vec![0, 1], vec![1]]).is_err());
        assert!(Partition::new(vec![Some(2)], 2).is_err());
    }
}
