//! Graph families, seeded random generators, and the labeled-graph
//! enumerator used by the exhaustive sweeps.

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

/// Star on n vertices: center 0, leaves 1..n.
pub fn star(n: usize) -> Graph {
    assert!(n >= 1);
    Graph::new(n, (1..n).map(|v| (0, v))).unwrap()
}

/// rows x cols grid, vertex r*cols + c.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let at = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((at(r, c), at(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((at(r, c), at(r + 1, c)));
            }
        }
    }
    Graph::new(rows * cols, edges).unwrap()
}

/// Erdos-Renyi G(n, p) with a fixed seed.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.random_bool(p))
        .collect::<Vec<_>>();
    Graph::new(n, edges).unwrap()
}

/// Near-d-regular graph from the pairing model: d stubs per vertex,
/// shuffled and paired. Pairings with self-loops or duplicate edges are
/// retried; after `MAX_ATTEMPTS` the offending pairs are dropped, leaving
/// a graph that may miss a few edges of the target degree.
pub fn random_regularish(n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    const MAX_ATTEMPTS: usize = 100;
    if d >= n {
        return Err(GenError::BadParams(format!("degree {d} needs more than {n} vertices")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(GenError::BadParams(format!("n*d = {} is odd", n * d)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut fallback: Option<Vec<(usize, usize)>> = None;
    for _ in 0..MAX_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * d / 2);
        let mut clean = true;
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || edges.iter().any(|&(a, b)| (a, b) == (u.min(v), u.max(v))) {
                clean = false;
                continue;
            }
            edges.push((u.min(v), u.max(v)));
        }
        if clean {
            return Ok(Graph::new(n, edges).unwrap());
        }
        fallback = Some(edges);
    }
    Ok(Graph::new(n, fallback.expect("at least one attempt ran")).unwrap())
}

/// All labeled graphs on exactly n vertices, in edge-mask order.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    assert!(pairs.len() < 63, "enumeration space too large");
    (0u64..1 << pairs.len()).map(move |mask| labeled_graph(n, &pairs, mask))
}

pub fn labeled_graph_count(n: usize) -> u64 {
    1 << (n * (n - 1) / 2)
}

fn labeled_graph(n: usize, pairs: &[(usize, usize)], mask: u64) -> Graph {
    let edges = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e);
    Graph::new(n, edges).unwrap()
}

/// The graph for one mask of the enumeration, for parallel chunking.
pub fn labeled_graph_by_mask(n: usize, mask: u64) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    labeled_graph(n, &pairs, mask)
}
