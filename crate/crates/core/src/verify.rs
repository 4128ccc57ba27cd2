//! The independent checker and the brute-force oracle. The checker is the
//! sole acceptance authority for the engine: it recomputes everything from
//! the graph and the raw weights.

use std::collections::BTreeSet;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{classify_components, ComponentClass, Edge, Graph};
use crate::weighting::EdgeWeighting;

/// Enumeration refusal bound: `k^|E|` assignments at most.
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("weighting domain mismatch: {missing} graph edges unweighted, {extra} weights on non-edges")]
    DomainMismatch { missing: usize, extra: usize },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration bound {bound} exceeds the budget {budget}")]
    BudgetExceeded { bound: u128, budget: u128 },
    #[error("K2 component {{{u},{v}}}: no vertex-coloring weighting exists")]
    K2Component { u: usize, v: usize },
}

/// Verdict of the vertex-coloring check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    /// Edges whose endpoints share a weighted degree, sorted.
    pub conflicts: Vec<Edge>,
}

/// Checks that adjacent vertices get distinct weighted degrees. The weight
/// map must cover exactly the edge set of the graph.
pub fn verify_weighting(g: &Graph, w: &EdgeWeighting) -> Result<Verdict, VerifyError> {
    let missing = g.edges().iter().filter(|&&e| w.get(e).is_none()).count();
    let extra = w.len() + missing - g.edge_count();
    if missing > 0 || extra > 0 {
        return Err(VerifyError::DomainMismatch { missing, extra });
    }
    let degrees = w.weighted_degrees(g.vertex_count());
    let conflicts: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|e| {
            let (u, v) = e.endpoints();
            degrees[u] == degrees[v]
        })
        .collect();
    Ok(Verdict {
        ok: conflicts.is_empty(),
        conflicts,
    })
}

/// Result of the exhaustive minimal-weight-set search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinKResult {
    Found { k: u32, witness: EdgeWeighting },
    NotFound,
}

/// Smallest k <= k_max such that some weighting E -> {1..k} is
/// vertex-coloring, found by exhaustive enumeration in lexicographic
/// order (so the witness is deterministic). Partial assignments are
/// pruned as soon as a vertex with all incident edges weighted collides
/// with a finished neighbor.
pub fn brute_force_min_k(g: &Graph, k_max: u32) -> Result<MinKResult, OracleError> {
    if let Some(c) = classify_components(g)
        .iter()
        .find(|c| c.class == ComponentClass::K2)
    {
        return Err(OracleError::K2Component {
            u: c.vertices[0],
            v: c.vertices[1],
        });
    }
    let m = g.edge_count() as u32;
    for k in 1..=k_max {
        let bound = (k as u128).saturating_pow(m);
        if bound > ENUMERATION_BUDGET {
            return Err(OracleError::BudgetExceeded {
                bound,
                budget: ENUMERATION_BUDGET,
            });
        }
        if let Some(witness) = search_weighting(g, k) {
            return Ok(MinKResult::Found { k, witness });
        }
    }
    Ok(MinKResult::NotFound)
}

fn search_weighting(g: &Graph, k: u32) -> Option<EdgeWeighting> {
    let n = g.vertex_count();
    let edges = g.edges();
    let mut degrees = vec![0i32; n];
    let mut remaining: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut assigned = vec![0i32; edges.len()];

    fn rec(
        idx: usize,
        g: &Graph,
        k: u32,
        edges: &[Edge],
        degrees: &mut Vec<i32>,
        remaining: &mut Vec<usize>,
        assigned: &mut Vec<i32>,
    ) -> bool {
        let Some(e) = edges.get(idx) else {
            return true;
        };
        let (u, v) = e.endpoints();
        remaining[u] -= 1;
        remaining[v] -= 1;
        for w in 1..=k as i32 {
            degrees[u] += w;
            degrees[v] += w;
            let ok = final_vertex_ok(g, u, degrees, remaining)
                && final_vertex_ok(g, v, degrees, remaining);
            if ok {
                assigned[idx] = w;
                if rec(idx + 1, g, k, edges, degrees, remaining, assigned) {
                    return true;
                }
            }
            degrees[u] -= w;
            degrees[v] -= w;
        }
        remaining[u] += 1;
        remaining[v] += 1;
        false
    }

    // A vertex whose incident edges are all weighted has its final degree;
    // compare it against every other finished neighbor.
    fn final_vertex_ok(g: &Graph, v: usize, degrees: &[i32], remaining: &[usize]) -> bool {
        if remaining[v] > 0 {
            return true;
        }
        g.neighbors(v)
            .iter()
            .all(|&u| remaining[u] > 0 || degrees[u] != degrees[v])
    }

    if rec(0, g, k, edges, &mut degrees, &mut remaining, &mut assigned) {
        let map = edges
            .iter()
            .zip(assigned.iter())
            .map(|(&e, &w)| (e, w))
            .collect();
        Some(EdgeWeighting::from_map(map))
    } else {
        None
    }
}

/// Sampling fallback for graphs above the exhaustive budget: tries random
/// weightings and reports the smallest k that produced a success. The
/// result is an upper bound on the true minimum, never an exact value.
pub fn sample_min_k(g: &Graph, k_max: u32, samples: usize, seed: u64) -> Result<Option<u32>, OracleError> {
    if let Some(c) = classify_components(g)
        .iter()
        .find(|c| c.class == ComponentClass::K2)
    {
        return Err(OracleError::K2Component {
            u: c.vertices[0],
            v: c.vertices[1],
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 1..=k_max {
        for _ in 0..samples {
            let map = g
                .edges()
                .iter()
                .map(|&e| (e, rng.random_range(1..=k) as i32))
                .collect();
            let w = EdgeWeighting::from_map(map);
            if verify_weighting(g, &w).expect("domain matches").ok {
                return Ok(Some(k));
            }
        }
    }
    Ok(None)
}

/// The side-parity audit: away from the special vertex, weighted degrees
/// must be even exactly on the S side.
pub fn parity_audit(g: &Graph, w: &EdgeWeighting, v0: usize, side_s: &BTreeSet<usize>) -> bool {
    let degrees = w.weighted_degrees(g.vertex_count());
    g.vertices()
        .filter(|&v| v != v0)
        .all(|v| (degrees[v] % 2 == 0) == side_s.contains(&v))
}
