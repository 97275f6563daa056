use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::l1;
use crate::error::{Error, Result};

/// How nodes are mapped to the integer identifiers `1..=n` that the
/// bandwidth test compares.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeOrdering {
    /// Node `v` gets identifier `v + 1`.
    #[default]
    InputOrder,
    /// Reverse Cuthill-McKee order of the unfiltered h-NN graph.
    #[serde(rename = "reverse_cuthill_mckee")]
    ReverseCuthillMcKee,
    /// Explicit identifiers, a permutation of `1..=n` indexed by node.
    Explicit(Vec<usize>),
}

/// Weighted undirected similarity graph over documents.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentGraph {
    identifiers: Vec<usize>,
    adjacency: Vec<Vec<(usize, f64)>>,
    h: usize,
    bandwidth: usize,
}

impl DocumentGraph {
    /// Builds a graph from explicit weighted edges. Identifiers follow input
    /// order; `h` and the bandwidth are recorded as zero.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n || u == v || !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "invalid edge ({u}, {v}, {w}) for {n} nodes"
                )));
            }
            if adjacency[u].iter().any(|&(x, _)| x == v) {
                continue;
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(Self {
            identifiers: (1..=n).collect(),
            adjacency,
            h: 0,
            bandwidth: 0,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Identifier `f(v)` of every node.
    pub fn identifiers(&self) -> &[usize] {
        &self.identifiers
    }

    /// Neighbours of `v` with edge weights, ascending by node.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    /// Each undirected edge once, as `(u, v, weight)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| {
                list.iter()
                    .filter(move |&&(v, _)| u < v)
                    .map(move |&(v, w)| (u, v, w))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn isolated(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&v| self.adjacency[v].is_empty())
            .collect()
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }
}

/// The `h` nearest nodes to `v` by L1 distance, ties broken by lower
/// identifier.
fn nearest(features: &[Vec<f64>], ids: &[usize], v: usize, h: usize) -> Vec<(usize, f64)> {
    let mut candidates: Vec<(usize, f64)> = (0..features.len())
        .filter(|&u| u != v)
        .map(|u| (u, l1(&features[v], &features[u])))
        .collect();
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1).then(ids[a.0].cmp(&ids[b.0])));
    candidates.truncate(h);
    candidates
}

fn reverse_cuthill_mckee(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let degree = |v: usize| adjacency[v].len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (degree(v), v))
            .expect("unvisited node remains");
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adjacency[v]
                .iter()
                .copied()
                .filter(|&u| !visited[u])
                .collect();
            next.sort_by_key(|&u| (degree(u), u));
            for u in next {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    let mut ids = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        ids[v] = pos + 1;
    }
    ids
}

fn resolve_identifiers(
    features: &[Vec<f64>],
    h: usize,
    ordering: &NodeOrdering,
) -> Result<Vec<usize>> {
    let n = features.len();
    match ordering {
        NodeOrdering::InputOrder => Ok((1..=n).collect()),
        NodeOrdering::Explicit(ids) => {
            let mut seen = vec![false; n + 1];
            let valid = ids.len() == n
                && ids
                    .iter()
                    .all(|&id| (1..=n).contains(&id) && !std::mem::replace(&mut seen[id], true));
            if !valid {
                return Err(Error::InvalidParameter(
                    "explicit node ordering must be a permutation of 1..=n".into(),
                ));
            }
            Ok(ids.clone())
        }
        NodeOrdering::ReverseCuthillMcKee => {
            let input: Vec<usize> = (1..=n).collect();
            let mut adjacency = vec![Vec::new(); n];
            for v in 0..n {
                for (u, _) in nearest(features, &input, v, h) {
                    if !adjacency[v].contains(&u) {
                        adjacency[v].push(u);
                        adjacency[u].push(v);
                    }
                }
            }
            Ok(reverse_cuthill_mckee(&adjacency))
        }
    }
}

/// Connects every node to those of its `h` nearest neighbours whose
/// identifier differs from its own by less than `bandwidth`. Edges are
/// undirected and weighted by `1 / (1 + L1)`.
///
/// `h` larger than `n - 1` is clamped.
pub fn build_graph(
    features: &[Vec<f64>],
    h: usize,
    bandwidth: usize,
    ordering: &NodeOrdering,
) -> Result<DocumentGraph> {
    let n = features.len();
    if n < 2 {
        return Err(Error::TooFewDocuments(n));
    }
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    if bandwidth == 0 {
        return Err(Error::InvalidParameter("T must be at least 1".into()));
    }
    let h = if h > n - 1 {
        log::warn!("neighbourhood size h={h} clamped to n-1={}", n - 1);
        n - 1
    } else {
        h
    };
    let ids = resolve_identifiers(features, h, ordering)?;

    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for v in 0..n {
        for (u, dist) in nearest(features, &ids, v, h) {
            if ids[u].abs_diff(ids[v]) >= bandwidth {
                continue;
            }
            if adjacency[v].iter().any(|&(x, _)| x == u) {
                continue;
            }
            let w = 1.0 / (1.0 + dist);
            adjacency[v].push((u, w));
            adjacency[u].push((v, w));
        }
    }
    for list in &mut adjacency {
        list.sort_by_key(|&(v, _)| v);
    }
    let graph = DocumentGraph {
        identifiers: ids,
        adjacency,
        h,
        bandwidth,
    };
    let isolated = graph.isolated();
    if !isolated.is_empty() {
        log::warn!(
            "degenerate graph: {} isolated node(s) {:?} will form singleton clusters",
            isolated.len(),
            isolated
        );
    }
    Ok(graph)
}
