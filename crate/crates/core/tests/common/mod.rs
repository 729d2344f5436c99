//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clago::io::read_partition_for_graph;
use clago::{load_edge_list, Graph, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn karate() -> (Graph, Partition) {
    let g = load_edge_list(BufReader::new(File::open(fixture("karate.txt")).unwrap()))
        .unwrap()
        .graph;
    let truth = read_partition_for_graph(
        BufReader::new(File::open(fixture("karate_truth.tsv")).unwrap()),
        &g,
    )
    .unwrap();
    (g, truth)
}

pub fn barbell6() -> Graph {
    Graph::from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) with a guaranteed path through all nodes, so nobody is isolated.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (r.random_range(0..i), i)).collect();
    for u in 0..n {
        for v in u + 1..n {
            if r.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random complete labeling into at most `k` blocks.
pub fn random_partition(n: usize, k: usize, seed: u64) -> Partition {
    let mut r = rng(seed);
    let labels: Vec<u32> = (0..n).map(|_| r.random_range(0..k as u32)).collect();
    Partition::from_labels(&labels)
}

/// Number of walks `x - y - z` with `z ∈ set`.
pub fn two_paths_into(g: &Graph, x: usize, set: &BTreeSet<usize>) -> u64 {
    let mut count = 0;
    for &y in g.neighbors(x) {
        for &z in g.neighbors(y as usize) {
            if set.contains(&(z as usize)) {
                count += 1;
            }
        }
    }
    count
}

fn h(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// Overlapping NMI written from the definition with node sets and
/// conditional probabilities, independent of the library's count-based code.
pub fn enmi_oracle(n: usize, x: &[BTreeSet<usize>], y: &[BTreeSet<usize>]) -> f64 {
    let x: Vec<&BTreeSet<usize>> = x.iter().filter(|c| !c.is_empty()).collect();
    let y: Vec<&BTreeSet<usize>> = y.iter().filter(|c| !c.is_empty()).collect();
    0.5 * (2.0 - side(n, &x, &y) - side(n, &y, &x))
}

fn side(n: usize, x: &[&BTreeSet<usize>], y: &[&BTreeSet<usize>]) -> f64 {
    let nf = n as f64;
    let mut total = 0.0;
    for xi in x {
        let px = xi.len() as f64 / nf;
        let hx = h(px) + h(1.0 - px);
        if hx == 0.0 {
            total += if y.iter().any(|yj| yj == xi) {
                0.0
            } else {
                1.0
            };
            continue;
        }
        let mut best = f64::INFINITY;
        for yj in y {
            // joint[a][b] = P(node in xi == a, node in yj == b)
            let mut joint = [[0.0f64; 2]; 2];
            for v in 0..n {
                joint[xi.contains(&v) as usize][yj.contains(&v) as usize] += 1.0 / nf;
            }
            if h(joint[1][1]) + h(joint[0][0]) < h(joint[0][1]) + h(joint[1][0]) {
                continue;
            }
            let mut cond = 0.0;
            for b in 0..2 {
                let py = joint[0][b] + joint[1][b];
                for row in &joint {
                    if row[b] > 0.0 {
                        cond -= row[b] * (row[b] / py).ln();
                    }
                }
            }
            best = best.min(cond);
        }
        total += best.min(hx) / hx;
    }
    total / x.len() as f64
}

/// Largest connected component of a GML network with a `value` attribute per
/// node (the political blogs layout), with node values as the partition.
pub fn load_gml_lcc(path: &Path) -> (Graph, Partition) {
    let text = std::fs::read_to_string(path).unwrap();
    let tokens = gml_tokens(&text);
    let mut values: BTreeMap<u64, u32> = BTreeMap::new();
    let mut edges: Vec<(u64, u64)> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        match tokens[i].as_str() {
            "node" | "edge" => {
                let kind = tokens[i].clone();
                let mut attrs = HashMap::new();
                i += 2;
                while tokens[i] != "]" {
                    attrs.insert(tokens[i].clone(), tokens[i + 1].clone());
                    i += 2;
                }
                let num = |k: &str| attrs[k].parse::<u64>().unwrap();
                if kind == "node" {
                    values.insert(num("id"), num("value") as u32);
                } else {
                    edges.push((num("source"), num("target")));
                }
            }
            _ => {}
        }
        i += 1;
    }

    let ids: Vec<u64> = values.keys().copied().collect();
    let dense: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let full =
        Graph::from_edges(ids.len(), edges.iter().map(|(a, b)| (dense[a], dense[b]))).unwrap();

    let mut component = vec![usize::MAX; full.num_nodes()];
    let mut best: Vec<usize> = Vec::new();
    for s in 0..full.num_nodes() {
        if component[s] != usize::MAX {
            continue;
        }
        let mut members = vec![s];
        component[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in full.neighbors(u) {
                if component[v as usize] == usize::MAX {
                    component[v as usize] = s;
                    members.push(v as usize);
                    queue.push_back(v as usize);
                }
            }
        }
        if members.len() > best.len() {
            best = members;
        }
    }
    best.sort_unstable();
    let keep: HashMap<usize, usize> = best.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let lcc_edges = full
        .edges()
        .filter(|(u, _)| keep.contains_key(u))
        .map(|(u, v)| (keep[&u], keep[&v]));
    let g = Graph::from_edges(best.len(), lcc_edges)
        .unwrap()
        .with_external_ids(best.iter().map(|&x| ids[x]).collect())
        .unwrap();
    let labels: Vec<u32> = best.iter().map(|&x| values[&ids[x]]).collect();
    (g, Partition::from_labels(&labels))
}

fn gml_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let s: String = chars.by_ref().take_while(|&c| c != '"').collect();
            out.push(s);
        } else if c == '[' || c == ']' {
            out.push(c.to_string());
            chars.next();
        } else {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '[' || c == ']' {
                    break;
                }
                s.push(c);
                chars.next();
            }
            out.push(s);
        }
    }
    out
}
