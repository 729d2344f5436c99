//! Text formats for partitions and covers.
//!
//! * Partition: `external_id<TAB>community_index` per node, `-1` when
//!   unassigned.
//! * Cover, per node (LFR `community.dat`): `external_id<TAB>c1 c2 ...` with
//!   1-indexed community ids.
//! * Cover, per community: the member external ids of one community per line.
//!
//! Readers accept any whitespace as separator and skip blank lines and lines
//! starting with `#`. Community labels read from files are compacted to
//! `0..k` in ascending label order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

pub fn write_partition<W: Write>(mut out: W, ids: &[u64], p: &Partition) -> Result<()> {
    for (x, &id) in ids.iter().enumerate() {
        match p.label(x) {
            Some(l) => writeln!(out, "{id}\t{l}")?,
            None => writeln!(out, "{id}\t-1")?,
        }
    }
    Ok(())
}

pub fn write_cover_by_node<W: Write>(mut out: W, ids: &[u64], cover: &Cover) -> Result<()> {
    for (x, &id) in ids.iter().enumerate() {
        let list: Vec<String> = cover
            .memberships(x)
            .iter()
            .map(|j| (j + 1).to_string())
            .collect();
        writeln!(out, "{id}\t{}", list.join(" "))?;
    }
    Ok(())
}

/// One line per non-empty community.
pub fn write_cover_by_community<W: Write>(mut out: W, ids: &[u64], cover: &Cover) -> Result<()> {
    for members in cover.non_empty_communities() {
        let line: Vec<String> = members.iter().map(|&x| ids[x].to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// `(line number, node id, labels)` of every data line.
fn node_lines<R: BufRead>(reader: R) -> Result<Vec<(usize, u64, Vec<i64>)>> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |tok: &str| Error::Parse {
            line: i + 1,
            message: format!("invalid integer {tok:?}"),
        };
        let mut tokens = trimmed.split_whitespace();
        let id_tok = tokens.next().expect("non-empty line");
        let id = id_tok.parse::<u64>().map_err(|_| parse_err(id_tok))?;
        let labels = tokens
            .map(|t| t.parse::<i64>().map_err(|_| parse_err(t)))
            .collect::<Result<Vec<_>>>()?;
        rows.push((i + 1, id, labels));
    }
    Ok(rows)
}

fn check_unique(rows: &[(usize, u64, Vec<i64>)]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (line, id, _) in rows {
        if !seen.insert(*id) {
            return Err(Error::Parse {
                line: *line,
                message: format!("node {id} listed twice"),
            });
        }
    }
    Ok(())
}

/// Dense renumbering of labels in ascending order.
fn label_index<'a, I: IntoIterator<Item = &'a i64>>(labels: I) -> BTreeMap<i64, u32> {
    let set: BTreeSet<i64> = labels.into_iter().copied().collect();
    set.into_iter()
        .enumerate()
        .map(|(i, l)| (l, i as u32))
        .collect()
}

fn partition_from_rows(
    rows: &[(usize, u64, Vec<i64>)],
    num_nodes: usize,
    dense: impl Fn(u64) -> Result<usize>,
) -> Result<Partition> {
    for (line, _, labels) in rows {
        if labels.len() != 1 || labels[0] < -1 {
            return Err(Error::Parse {
                line: *line,
                message: "expected a node id and one label (>= -1)".into(),
            });
        }
    }
    let index = label_index(rows.iter().map(|r| &r.2[0]).filter(|&&l| l >= 0));
    let mut assigned = vec![None; num_nodes];
    for (_, id, labels) in rows {
        assigned[dense(*id)?] = index.get(&labels[0]).copied();
    }
    Partition::new(assigned, index.len())
}

fn cover_from_rows(
    rows: &[(usize, u64, Vec<i64>)],
    num_nodes: usize,
    dense: impl Fn(u64) -> Result<usize>,
) -> Result<Cover> {
    for (line, _, labels) in rows {
        if labels.iter().any(|&l| l < 0) {
            return Err(Error::Parse {
                line: *line,
                message: "negative community id".into(),
            });
        }
    }
    let index = label_index(rows.iter().flat_map(|r| r.2.iter()));
    let mut memberships = vec![Vec::new(); num_nodes];
    for (_, id, labels) in rows {
        memberships[dense(*id)?] = labels.iter().map(|l| index[l]).collect();
    }
    Cover::from_memberships(memberships, index.len())
}

/// Reads a partition over the nodes of `g`. Nodes missing from the file are
/// unassigned; ids unknown to the graph are an error.
pub fn read_partition_for_graph<R: BufRead>(reader: R, g: &Graph) -> Result<Partition> {
    let rows = node_lines(reader)?;
    check_unique(&rows)?;
    partition_from_rows(&rows, g.num_nodes(), |id| {
        g.node_of(id).ok_or(Error::UnknownNode(id))
    })
}

/// Reads a cover in per-node format over the nodes of `g`.
pub fn read_cover_for_graph<R: BufRead>(reader: R, g: &Graph) -> Result<Cover> {
    let rows = node_lines(reader)?;
    check_unique(&rows)?;
    cover_from_rows(&rows, g.num_nodes(), |id| {
        g.node_of(id).ok_or(Error::UnknownNode(id))
    })
}

/// Node universe of a standalone file: the listed ids in ascending order.
fn universe(rows: &[(usize, u64, Vec<i64>)]) -> (Vec<u64>, HashMap<u64, usize>) {
    let mut ids: Vec<u64> = rows.iter().map(|r| r.1).collect();
    ids.sort_unstable();
    let index = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    (ids, index)
}

/// Reads a partition file on its own; the universe is the set of listed ids,
/// returned in ascending order alongside the partition.
pub fn read_partition<R: BufRead>(reader: R) -> Result<(Vec<u64>, Partition)> {
    let rows = node_lines(reader)?;
    check_unique(&rows)?;
    let (ids, index) = universe(&rows);
    let p = partition_from_rows(&rows, ids.len(), |id| Ok(index[&id]))?;
    Ok((ids, p))
}

/// Reads a per-node cover file on its own, like [`read_partition`].
pub fn read_cover<R: BufRead>(reader: R) -> Result<(Vec<u64>, Cover)> {
    let rows = node_lines(reader)?;
    check_unique(&rows)?;
    let (ids, index) = universe(&rows);
    let c = cover_from_rows(&rows, ids.len(), |id| Ok(index[&id]))?;
    Ok((ids, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;

    fn graph() -> Graph {
        load_edge_list("1 2\n2 3\n3 4\n".as_bytes()).unwrap().graph
    }

    #[test]
    fn partition_round_trip() {
        let g = graph();
        let p = Partition::new(vec![Some(1), Some(1), None, Some(0)], 2).unwrap();
        let mut buf = Vec::new();
        write_partition(&mut buf, g.external_ids(), &p).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "1\t1\n2\t1\n3\t-1\n4\t0\n"
        );
        assert_eq!(read_partition_for_graph(buf.as_slice(), &g).unwrap(), p);
        let (ids, standalone) = read_partition(buf.as_slice()).unwrap();
        assert_eq!(ids, vec![1, 2, 3, 4]);
        assert_eq!(standalone, p);
    }

    #[test]
    fn cover_formats() {
        let g = graph();
        let c = Cover::from_communities(4, &[vec![0, 1], vec![1, 2, 3]]).unwrap();
        let mut by_node = Vec::new();
        write_cover_by_node(&mut by_node, g.external_ids(), &c).unwrap();
        assert_eq!(
            String::from_utf8(by_node.clone()).unwrap(),
            "1\t1\n2\t1 2\n3\t2\n4\t2\n"
        );
        assert_eq!(read_cover_for_graph(by_node.as_slice(), &g).unwrap(), c);
        let mut by_comm = Vec::new();
        write_cover_by_community(&mut by_comm, g.external_ids(), &c).unwrap();
        assert_eq!(String::from_utf8(by_comm).unwrap(), "1 2\n2 3 4\n");
    }

    #[test]
    fn multi_membership_line() {
        let g = load_edge_list("1 2\n2 3\n".as_bytes()).unwrap().graph;
        let c = read_cover_for_graph("1\t1\n2\t1\n3\t1 2\n".as_bytes(), &g).unwrap();
        assert_eq!(c.memberships(2), &[0, 1]);
    }

    #[test]
    fn unknown_node_is_named() {
        let g = graph();
        match read_cover_for_graph("9\t1\n".as_bytes(), &g) {
            Err(Error::UnknownNode(9)) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            read_partition_for_graph("9\t0\n".as_bytes(), &g),
            Err(Error::UnknownNode(9))
        ));
    }

    #[test]
    fn malformed_rows() {
        assert!(read_partition("1\t0 1\n".as_bytes()).is_err());
        assert!(read_partition("1\t-2\n".as_bytes()).is_err());
        assert!(read_partition("1\t0\n1\t1\n".as_bytes()).is_err());
        assert!(matches!(
            read_cover("1\tx\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
