//! Partition and cover scoring.
//!
//! Entropies use natural logarithms and `0·ln 0 = 0` throughout.

use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Joint block counts `n_ij = |P_i ∩ Q_j|` over the nodes labeled in both
/// partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl ConfusionTable {
    pub fn new(p: &Partition, q: &Partition) -> Result<Self> {
        same_universe(p.num_nodes(), q.num_nodes())?;
        let (rows, cols) = (p.k(), q.k());
        let mut table = Self {
            rows,
            cols,
            counts: vec![0; rows * cols],
            row_sums: vec![0; rows],
            col_sums: vec![0; cols],
            total: 0,
        };
        for (a, b) in p.labels().iter().zip(q.labels()) {
            if let (Some(i), Some(j)) = (a, b) {
                let (i, j) = (*i as usize, *j as usize);
                table.counts[i * cols + j] += 1;
                table.row_sums[i] += 1;
                table.col_sums[j] += 1;
                table.total += 1;
            }
        }
        Ok(table)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

fn same_universe(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::UniverseMismatch(format!("{a} nodes versus {b}")));
    }
    Ok(())
}

/// `-p ln p`
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

fn entropy_of_counts(counts: &[u64], total: f64) -> f64 {
    counts.iter().map(|&c| plogp(c as f64 / total)).sum()
}

/// `2·I(P,Q) / (H(P) + H(Q))`. Both partitions must label every node. Two
/// single-block partitions score 1.
pub fn nmi(p: &Partition, q: &Partition) -> Result<f64> {
    same_universe(p.num_nodes(), q.num_nodes())?;
    if !p.is_complete() || !q.is_complete() {
        return Err(Error::UniverseMismatch(
            "nmi needs partitions that label every node".into(),
        ));
    }
    let table = ConfusionTable::new(p, q)?;
    let n = table.total as f64;
    if n == 0.0 {
        return Err(Error::NoCommunities);
    }
    let hp = entropy_of_counts(&table.row_sums, n);
    let hq = entropy_of_counts(&table.col_sums, n);
    if hp + hq == 0.0 {
        return Ok(1.0);
    }
    let mut mutual = 0.0;
    for i in 0..table.rows {
        for j in 0..table.cols {
            let c = table.get(i, j);
            if c > 0 {
                let c = c as f64;
                let expected = table.row_sums[i] as f64 * table.col_sums[j] as f64;
                mutual += c / n * (c * n / expected).ln();
            }
        }
    }
    Ok((2.0 * mutual / (hp + hq)).clamp(0.0, 1.0))
}

/// Overlapping NMI in the Lancichinetti–Fortunato–Kertész form.
///
/// Every community is a binary variable over the node universe. For each
/// community `X_i` the best `H(X_i | Y_j)` over `Y` is taken, counting only
/// pairs whose joint satisfies `h(a) + h(d) ≥ h(b) + h(c)` (otherwise
/// `H(X_i)` stands in), and normalized by `H(X_i)`:
///
/// ```text
/// ENMI = 1 - ½·[ mean_i min_j H(X_i|Y_j)/H(X_i) + mean_j min_i H(Y_j|X_i)/H(Y_j) ]
/// ```
///
/// A community spanning every node has zero entropy; its term is 0 when the
/// other cover contains the same set and 1 otherwise. Empty community slots
/// are ignored.
pub fn enmi(x: &Cover, y: &Cover) -> Result<f64> {
    same_universe(x.num_nodes(), y.num_nodes())?;
    let n = x.num_nodes();
    let xs = compact(x);
    let ys = compact(y);
    if xs.sizes.is_empty() || ys.sizes.is_empty() {
        return Err(Error::NoCommunities);
    }

    let (kx, ky) = (xs.sizes.len(), ys.sizes.len());
    let mut overlap = vec![0u64; kx * ky];
    for node in 0..n {
        for &i in x.memberships(node) {
            let Some(i) = xs.index[i as usize] else {
                continue;
            };
            for &j in y.memberships(node) {
                if let Some(j) = ys.index[j as usize] {
                    overlap[i * ky + j] += 1;
                }
            }
        }
    }

    let forward = normalized_conditional(&xs.sizes, &ys.sizes, n, |i, j| overlap[i * ky + j]);
    let backward = normalized_conditional(&ys.sizes, &xs.sizes, n, |j, i| overlap[i * ky + j]);
    Ok((1.0 - 0.5 * (forward + backward)).clamp(0.0, 1.0))
}

struct Compact {
    /// Original slot → dense index of non-empty communities.
    index: Vec<Option<usize>>,
    sizes: Vec<u64>,
}

fn compact(c: &Cover) -> Compact {
    let mut index = Vec::with_capacity(c.k());
    let mut sizes = Vec::new();
    for members in c.communities() {
        if members.is_empty() {
            index.push(None);
        } else {
            index.push(Some(sizes.len()));
            sizes.push(members.len() as u64);
        }
    }
    Compact { index, sizes }
}

/// `mean_i min_j H(X_i|Y_j) / H(X_i)` from community sizes and overlaps.
fn normalized_conditional<F>(xs: &[u64], ys: &[u64], n: usize, overlap: F) -> f64
where
    F: Fn(usize, usize) -> u64,
{
    let nf = n as f64;
    let binary = |size: u64| plogp(size as f64 / nf) + plogp((n as u64 - size) as f64 / nf);
    let mut sum = 0.0;
    for (i, &sx) in xs.iter().enumerate() {
        let hx = binary(sx);
        if hx == 0.0 {
            let matched = ys
                .iter()
                .enumerate()
                .any(|(j, &sy)| sy == sx && overlap(i, j) == sx);
            sum += if matched { 0.0 } else { 1.0 };
            continue;
        }
        let mut best = hx;
        for (j, &sy) in ys.iter().enumerate() {
            let both = overlap(i, j);
            let d = both as f64 / nf;
            let c = (sx - both) as f64 / nf;
            let b = (sy - both) as f64 / nf;
            let a = (n as u64 + both - sx - sy) as f64 / nf;
            if plogp(a) + plogp(d) >= plogp(b) + plogp(c) {
                let joint = plogp(a) + plogp(b) + plogp(c) + plogp(d);
                best = best.min(joint - binary(sy));
            }
        }
        sum += best / hx;
    }
    sum / xs.len() as f64
}

/// Newman–Girvan modularity `Σ_j [e_jj/m - (d_{C_j}/2m)²]`. Unassigned nodes
/// belong to no block.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    same_universe(g.num_nodes(), p.num_nodes())?;
    let m = g.num_edges();
    if m == 0 {
        return Err(Error::NoEdges);
    }
    let mut intra = vec![0u64; p.k()];
    let mut degree = vec![0u64; p.k()];
    for x in 0..g.num_nodes() {
        if let Some(l) = p.label(x) {
            degree[l as usize] += g.degree(x) as u64;
        }
    }
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (p.label(u), p.label(v)) {
            if a == b {
                intra[a as usize] += 1;
            }
        }
    }
    let m = m as f64;
    Ok(intra
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Nodes not covered by the best one-to-one matching of `p`'s blocks to
/// `truth`'s blocks, i.e. the minimum Hamming distance over relabelings.
/// The matching is solved exactly for any number of blocks.
pub fn misclassified(p: &Partition, truth: &Partition) -> Result<usize> {
    let table = ConfusionTable::new(p, truth)?;
    let size = table.rows.max(table.cols);
    let mut weights = vec![vec![0i64; size]; size];
    for (i, row) in weights.iter_mut().enumerate().take(table.rows) {
        for (j, w) in row.iter_mut().enumerate().take(table.cols) {
            *w = table.get(i, j) as i64;
        }
    }
    let matched = max_weight_assignment(&weights) as usize;
    Ok(p.num_nodes() - matched)
}

/// Hungarian algorithm (shortest augmenting paths with potentials) on a
/// square weight matrix; returns the maximal total weight.
fn max_weight_assignment(weights: &[Vec<i64>]) -> i64 {
    let n = weights.len();
    if n == 0 {
        return 0;
    }
    let cost = |i: usize, j: usize| -weights[i - 1][j - 1];
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    // column j is matched to row owner[j]; index 0 is the virtual column
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| weights[owner[j] - 1][j - 1]).sum()
}
