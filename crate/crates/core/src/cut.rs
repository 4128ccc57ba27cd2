//! Cuts of the reduced graph and the strict-improvement loops that make a
//! heuristic cut "maximal enough": the cut graph must be connected and,
//! when the flow stage later falls short, the min-cut split yields a
//! strictly larger cut to restart from. Both repairs increase the cut size
//! by at least one edge, so at most `|E|` improvements can ever happen.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{connected_components, Edge, Graph};

/// Default vertex bound for the exhaustive max-cut search.
pub const DEFAULT_EXACT_CUT_THRESHOLD: usize = 20;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error("graph has {n} vertices, above the exhaustive threshold {threshold}")]
    TooLarge { n: usize, threshold: usize },
    #[error("min-cut improvement did not grow the cut ({old} -> {new}); upstream bug")]
    NotImproving { old: usize, new: usize },
}

/// A bipartition (S, T) of the vertices of one graph, with the cut edges
/// cached. `T` is the complement of `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    in_s: Vec<bool>,
    cut_edges: Vec<Edge>,
}

impl Cut {
    pub fn new(g: &Graph, in_s: Vec<bool>) -> Self {
        assert_eq!(in_s.len(), g.vertex_count());
        let cut_edges = g
            .edges()
            .iter()
            .copied()
            .filter(|e| {
                let (u, v) = e.endpoints();
                in_s[u] != in_s[v]
            })
            .collect();
        Cut { in_s, cut_edges }
    }

    pub fn ground_size(&self) -> usize {
        self.in_s.len()
    }

    pub fn is_s(&self, v: usize) -> bool {
        self.in_s[v]
    }

    pub fn side_s(&self) -> Vec<usize> {
        (0..self.in_s.len()).filter(|&v| self.in_s[v]).collect()
    }

    pub fn side_t(&self) -> Vec<usize> {
        (0..self.in_s.len()).filter(|&v| !self.in_s[v]).collect()
    }

    /// Cut edges in sorted order.
    pub fn cut_edges(&self) -> &[Edge] {
        &self.cut_edges
    }

    pub fn size(&self) -> usize {
        self.cut_edges.len()
    }

    pub fn is_cut_edge(&self, e: Edge) -> bool {
        let (u, v) = e.endpoints();
        self.in_s[u] != self.in_s[v]
    }

    /// True if the two endpoints lie on the same side.
    pub fn same_side(&self, u: usize, v: usize) -> bool {
        self.in_s[u] == self.in_s[v]
    }
}

/// One recorded step of the cut search.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum CutStep {
    LocalSearch,
    Exact,
    Provided,
    Repair,
    MinCutImprove,
}

impl CutStep {
    pub fn label(self) -> &'static str {
        match self {
            CutStep::LocalSearch => "local-search",
            CutStep::Exact => "exact",
            CutStep::Provided => "provided",
            CutStep::Repair => "repair",
            CutStep::MinCutImprove => "mincut-improve",
        }
    }
}

/// Current cut plus the history of how it was obtained. Every entry after
/// the first strictly increases the size.
#[derive(Clone, Debug)]
pub struct CutSearchState {
    pub cut: Cut,
    pub history: Vec<(CutStep, usize)>,
}

impl CutSearchState {
    pub fn new(step: CutStep, cut: Cut) -> Self {
        let size = cut.size();
        CutSearchState {
            cut,
            history: vec![(step, size)],
        }
    }

    /// Number of strict improvements performed after the initial cut.
    pub fn improvements(&self) -> usize {
        self.history.len() - 1
    }

    fn record(&mut self, step: CutStep, cut: Cut) {
        let size = cut.size();
        debug_assert!(size > self.cut.size());
        self.cut = cut;
        self.history.push((step, size));
    }

    /// Makes the cut graph connected, recording one entry per flip.
    pub fn repair(&mut self, g: &Graph) {
        loop {
            match repair_step(g, &self.cut) {
                Some(better) => self.record(CutStep::Repair, better),
                None => return,
            }
        }
    }

    /// Applies the min-cut improvement; the caller restarts the pipeline.
    pub fn improve_from_mincut(&mut self, g: &Graph, source_side: &[usize]) -> Result<(), CutError> {
        let better = improve_cut_from_mincut(g, &self.cut, source_side)?;
        self.record(CutStep::MinCutImprove, better);
        Ok(())
    }
}

/// A 1-flip-maximal cut: no single vertex swap increases the cut size.
///
/// Seed 0 starts from S = even ids (the canonical deterministic run);
/// any other seed starts from a random bipartition, which the batch
/// runner uses for randomized restarts.
pub fn local_search_cut(g: &Graph, seed: u64) -> Cut {
    let n = g.vertex_count();
    let mut in_s: Vec<bool> = if seed == 0 {
        (0..n).map(|v| v % 2 == 0).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_bool(0.5)).collect()
    };
    loop {
        let mut improved = false;
        for v in 0..n {
            let same = g.neighbors(v).iter().filter(|&&w| in_s[w] == in_s[v]).count();
            let cross = g.degree(v) - same;
            if same > cross {
                in_s[v] = !in_s[v];
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    Cut::new(g, in_s)
}

/// Exhaustive maximum cut; ties resolved toward the lexicographically
/// smallest S containing vertex 0.
pub fn exact_max_cut(g: &Graph, threshold: usize) -> Result<Cut, CutError> {
    let n = g.vertex_count();
    if n > threshold {
        return Err(CutError::TooLarge { n, threshold });
    }
    if n == 0 {
        return Ok(Cut::new(g, Vec::new()));
    }
    // Gray-code walk over the memberships of vertices 1..n, counting cut
    // size incrementally; vertex 0 is pinned to S.
    let mut in_s = vec![false; n];
    in_s[0] = true;
    let mut size: usize = g
        .edges()
        .iter()
        .filter(|e| {
            let (u, v) = e.endpoints();
            in_s[u] != in_s[v]
        })
        .count();
    let mut best_size = size;
    let mut best = in_s.clone();
    let total: u64 = 1u64 << (n - 1);
    for step in 1..total {
        let flip = 1 + step.trailing_zeros() as usize; // Gray code: vertex to toggle
        let cross_before = g
            .neighbors(flip)
            .iter()
            .filter(|&&w| in_s[w] != in_s[flip])
            .count();
        in_s[flip] = !in_s[flip];
        size = size + g.degree(flip) - 2 * cross_before;
        if size > best_size || (size == best_size && lex_smaller_s(&in_s, &best)) {
            best_size = size;
            best.copy_from_slice(&in_s);
        }
    }
    Ok(Cut::new(g, best))
}

/// Lexicographic comparison of the sorted S vertex lists.
fn lex_smaller_s(a: &[bool], b: &[bool]) -> bool {
    fn list(m: &[bool]) -> impl Iterator<Item = usize> + '_ {
        m.iter().enumerate().filter(|(_, &s)| s).map(|(v, _)| v)
    }
    list(a).lt(list(b))
}

/// One connectivity repair flip, or None when the cut graph is already
/// connected. Flipping the sides within one cut-graph component keeps all
/// existing cut edges and turns at least one same-side edge into a cut
/// edge, so the cut grows strictly.
fn repair_step(g: &Graph, cut: &Cut) -> Option<Cut> {
    let n = g.vertex_count();
    if n == 0 {
        return None;
    }
    let cut_graph = Graph::new(n, cut.cut_edges().iter().map(|e| e.endpoints()))
        .expect("cut edges form a valid graph");
    let components = connected_components(&cut_graph);
    if components.len() <= 1 {
        return None;
    }
    // Components are ordered by smallest vertex; the first one is a proper
    // subset, and g connected guarantees an edge leaving it. That edge is
    // same-side: a cross edge would have merged the components.
    let w = &components[0];
    let mut member = vec![false; n];
    for &v in w {
        member[v] = true;
    }
    debug_assert!(g
        .edges()
        .iter()
        .filter(|e| {
            let (u, v) = e.endpoints();
            member[u] != member[v]
        })
        .all(|e| {
            let (u, v) = e.endpoints();
            cut.same_side(u, v)
        }));
    let mut in_s: Vec<bool> = (0..n).map(|v| cut.is_s(v) ^ member[v]).collect();
    let flipped = Cut::new(g, std::mem::take(&mut in_s));
    if flipped.size() > cut.size() {
        Some(flipped)
    } else {
        // No edge leaves W, which contradicts g being connected; treat the
        // cut graph as unrepairable rather than loop forever.
        panic!("cut-graph component {w:?} has no outgoing edge; is the graph connected?");
    }
}

/// Makes the bipartite cut graph (all vertices, only cut edges) connected.
pub fn repair_cut_connectivity(g: &Graph, cut: &Cut) -> Cut {
    let mut current = cut.clone();
    while let Some(better) = repair_step(g, &current) {
        current = better;
    }
    current
}

/// True when the cut graph spans the vertices in one connected component.
pub fn cut_graph_connected(g: &Graph, cut: &Cut) -> bool {
    let n = g.vertex_count();
    let cut_graph = Graph::new(n, cut.cut_edges().iter().map(|e| e.endpoints()))
        .expect("cut edges form a valid graph");
    connected_components(&cut_graph).len() <= 1
}

/// Builds the strictly larger cut C'' = ((S∩A) ∪ (T∩B), (S∩B) ∪ (T∩A))
/// from the source-side vertex split of a min cut that proved the flow
/// demand unsatisfiable. `source_side` lists the original vertices on the
/// source side of the min cut.
pub fn improve_cut_from_mincut(g: &Graph, cut: &Cut, source_side: &[usize]) -> Result<Cut, CutError> {
    let n = g.vertex_count();
    let mut in_a = vec![false; n];
    for &v in source_side {
        in_a[v] = true;
    }
    let in_s: Vec<bool> = (0..n)
        .map(|v| (cut.is_s(v) && in_a[v]) || (!cut.is_s(v) && !in_a[v]))
        .collect();
    let improved = Cut::new(g, in_s);
    if improved.size() > cut.size() {
        Ok(improved)
    } else {
        Err(CutError::NotImproving {
            old: cut.size(),
            new: improved.size(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.iter().copied()).unwrap()
    }

    fn c4() -> Graph {
        graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    fn k3() -> Graph {
        graph(3, &[(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn local_search_cuts_all_of_c4() {
        let cut = local_search_cut(&c4(), 0);
        assert_eq!(cut.size(), 4);
        let exact = exact_max_cut(&c4(), DEFAULT_EXACT_CUT_THRESHOLD).unwrap();
        assert_eq!(exact.size(), 4);
    }

    #[test]
    fn local_search_on_k3() {
        let cut = local_search_cut(&k3(), 0);
        assert_eq!(cut.size(), 2);
        assert_eq!(exact_max_cut(&k3(), 20).unwrap().size(), 2);
    }

    #[test]
    fn local_search_on_single_edge() {
        let g = graph(2, &[(0, 1)]);
        assert_eq!(local_search_cut(&g, 0).size(), 1);
    }

    #[test]
    fn exact_max_cut_on_c5_and_k4() {
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(exact_max_cut(&c5, 20).unwrap().size(), 4);
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(exact_max_cut(&k4, 20).unwrap().size(), 4);
    }

    #[test]
    fn exact_max_cut_of_bipartite_graph_is_all_edges() {
        // C6 and a star are bipartite: the maximum cut takes every edge.
        let c6 = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert_eq!(exact_max_cut(&c6, 20).unwrap().size(), 6);
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(exact_max_cut(&star, 20).unwrap().size(), 4);
    }

    #[test]
    fn exact_max_cut_respects_threshold() {
        let g = graph(5, &[(0, 1)]);
        assert_eq!(
            exact_max_cut(&g, 4).unwrap_err(),
            CutError::TooLarge { n: 5, threshold: 4 }
        );
    }

    #[test]
    fn one_flip_maximality_holds_everywhere() {
        // Every vertex of a 1-flip-maximal cut has at least as many
        // cross-cut neighbors as same-side neighbors.
        for seed in 0..20u64 {
            let g = crate::generate::gnp(9, 0.45, seed + 1);
            let cut = local_search_cut(&g, seed);
            for v in g.vertices() {
                let same = g.neighbors(v).iter().filter(|&&w| cut.same_side(v, w)).count();
                assert!(same * 2 <= g.degree(v), "vertex {v} could flip");
            }
        }
    }

    #[test]
    fn exact_at_least_local_search() {
        for seed in 0..30u64 {
            let g = crate::generate::gnp(8, 0.5, seed);
            let ls = local_search_cut(&g, 0);
            let ex = exact_max_cut(&g, 20).unwrap();
            assert!(ex.size() >= ls.size());
        }
    }

    #[test]
    fn repair_keeps_connected_cut_untouched() {
        let g = c4();
        let cut = Cut::new(&g, vec![true, false, true, false]);
        assert!(cut_graph_connected(&g, &cut));
        assert_eq!(repair_cut_connectivity(&g, &cut), cut);
    }

    #[test]
    fn repair_on_p4_bipartition_is_identity() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let cut = Cut::new(&g, vec![true, false, true, false]);
        assert_eq!(repair_cut_connectivity(&g, &cut), cut);
    }

    #[test]
    fn repair_fixes_every_disconnected_cut_graph_on_small_graphs() {
        // Brute-force search over all connected graphs on <= 5 vertices and
        // all cuts: wherever the cut graph is disconnected, the repair must
        // strictly grow the cut and end connected.
        let mut repaired = 0usize;
        for n in 2..=5usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = graph(n, &edges);
                if !crate::graph::is_connected(&g) {
                    continue;
                }
                for smask in 0u32..1 << n {
                    let in_s: Vec<bool> = (0..n).map(|v| smask >> v & 1 == 1).collect();
                    let cut = Cut::new(&g, in_s);
                    if cut_graph_connected(&g, &cut) {
                        continue;
                    }
                    let fixed = repair_cut_connectivity(&g, &cut);
                    assert!(fixed.size() > cut.size());
                    assert!(cut_graph_connected(&g, &fixed));
                    repaired += 1;
                }
            }
        }
        assert!(repaired > 0, "search found no disconnected cut graphs");
    }

    #[test]
    fn search_state_history_is_strictly_increasing() {
        let g = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]);
        let cut = Cut::new(&g, vec![true; 6]); // everything on one side
        let mut state = CutSearchState::new(CutStep::Provided, cut);
        state.repair(&g);
        assert!(cut_graph_connected(&g, &state.cut));
        for w in state.history.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
        assert!(state.improvements() >= 1);
    }
}
