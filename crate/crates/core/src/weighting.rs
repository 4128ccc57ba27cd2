//! The weighting pipeline, one connected component at a time:
//!
//! 1. pick the special vertex v0 (a spanning-tree leaf) and cut the
//!    reduced graph H = G - v0,
//! 2. parity pass: provisional weight 2 everywhere, then fix spanning-tree
//!    edges of the cut graph to {2,3} leaf-to-root (and the edge {v0,r} to
//!    {1,2}) so weighted degrees are even on S and odd on T,
//! 3. greedily pick designated colors f(v) = s(v) + 2k(v) that properly
//!    color the graph, splicing the star colorizer around v0,
//! 4. encode the 2k(v) deficits as oriented same-side demand edges F,
//!    route them as unit flows across the cut, and shift weights by +-1
//!    along the resulting paths,
//! 5. bump every F edge by one, landing each vertex exactly on its
//!    designated color with all weights in {1,2,3,4}.
//!
//! If the flow stage cannot satisfy |F|, the min cut yields a strictly
//! larger cut of H and the pipeline restarts from the parity pass; this
//! can happen at most |E(H)| times.
//!
//! Every stage postcondition is checked at runtime; a failure is reported
//! as an invariant violation naming the stage rather than silently
//! producing a bad certificate.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::certificate::{Certificate, ComponentReport};
use crate::cut::{
    exact_max_cut, local_search_cut, Cut, CutError, CutSearchState, CutStep,
    DEFAULT_EXACT_CUT_THRESHOLD,
};
use crate::flow::{
    build_network, cancel_opposite_arcs, decompose_paths, max_flow, FlowNetwork, OrientedDemand,
};
use crate::graph::{
    classify_components, find_non_articulation_vertex, induced_subgraph, ComponentClass, Edge,
    Graph, GraphError, InducedSubgraph,
};
use crate::star::{compute_h, StarInstance};
use crate::verify::verify_weighting;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("K2 component {{{u},{v}}}")]
    K2Component { u: usize, v: usize },
    #[error("{0}")]
    CutTooLarge(CutError),
    #[error("cut graph is disconnected; repair the cut first")]
    CutGraphDisconnected,
    #[error("vertex {vertex} needs {need} earlier same-side neighbors, found {have}; upstream bug")]
    InsufficientNeighbors {
        vertex: usize,
        need: usize,
        have: usize,
    },
    #[error("edge {edge} reached weight {weight}, outside 1..=4; upstream bug")]
    WeightOutOfRange { edge: Edge, weight: i32 },
    #[error("stage `{stage}` invariant violated: {detail}")]
    InvariantViolation { stage: &'static str, detail: String },
}

fn violated(stage: &'static str, detail: impl Into<String>) -> PipelineError {
    PipelineError::InvariantViolation {
        stage,
        detail: detail.into(),
    }
}

/// A weight per edge. Stages of the pipeline keep different invariants on
/// the range; the final weighting maps into {1,2,3,4}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeWeighting {
    weights: BTreeMap<Edge, i32>,
}

impl EdgeWeighting {
    pub fn uniform(g: &Graph, w: i32) -> Self {
        EdgeWeighting {
            weights: g.edges().iter().map(|&e| (e, w)).collect(),
        }
    }

    pub fn from_map(weights: BTreeMap<Edge, i32>) -> Self {
        EdgeWeighting { weights }
    }

    pub fn weight(&self, e: Edge) -> i32 {
        self.weights[&e]
    }

    pub fn get(&self, e: Edge) -> Option<i32> {
        self.weights.get(&e).copied()
    }

    pub fn set(&mut self, e: Edge, w: i32) {
        *self.weights.get_mut(&e).expect("edge in weighting") = w;
    }

    pub fn add(&mut self, e: Edge, delta: i32) {
        *self.weights.get_mut(&e).expect("edge in weighting") += delta;
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Entries in sorted edge order.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, i32)> + '_ {
        self.weights.iter().map(|(&e, &w)| (e, w))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.weights.keys().copied()
    }

    /// Weighted degree of every vertex.
    pub fn weighted_degrees(&self, n: usize) -> Vec<i32> {
        let mut deg = vec![0i32; n];
        for (&e, &w) in &self.weights {
            let (u, v) = e.endpoints();
            deg[u] += w;
            deg[v] += w;
        }
        deg
    }

    pub fn weighted_degree(&self, g: &Graph, v: usize) -> i32 {
        g.neighbors(v)
            .iter()
            .map(|&u| self.weight(Edge::new(u, v)))
            .sum()
    }

    pub fn distinct_values(&self) -> BTreeSet<i32> {
        self.weights.values().copied().collect()
    }
}

/// Designated colors and the bookkeeping that produced them. Vertices are
/// processed neighbors-of-v0 first (ascending id), then the rest
/// (ascending id); `position` is the index in that order.
#[derive(Clone, Debug)]
pub struct TargetAssignment {
    pub v0: usize,
    /// All vertices except v0 in processing order.
    pub order: Vec<usize>,
    /// Vertex -> index in `order`; `usize::MAX` for v0.
    pub position: Vec<usize>,
    /// Color deficit counters: f(v) - t(v) = 2 k(v).
    pub k: Vec<u32>,
    /// Pre-colors g(v), defined on N(v0) and v0.
    pub g_value: Vec<Option<i32>>,
    /// Weighted degree at the moment v received its color.
    pub targeted: Vec<Option<i32>>,
    /// Designated colors f(v).
    pub color: Vec<Option<i32>>,
}

impl TargetAssignment {
    pub fn color_of(&self, v: usize) -> i32 {
        self.color[v].expect("color assigned")
    }
}

/// How the pipeline obtains the initial cut of the reduced graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutSource {
    /// 1-flip local search (the default).
    LocalSearch,
    /// Exhaustive maximum cut, limited by the threshold option.
    Exact,
    /// A caller-supplied bipartition of the reduced graph (side flags
    /// indexed by its local vertex ids). Used to exercise the improvement
    /// loop on deliberately bad cuts.
    Provided(Vec<bool>),
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub seed: u64,
    pub cut_source: CutSource,
    pub exact_cut_threshold: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            seed: 0,
            cut_source: CutSource::LocalSearch,
            exact_cut_threshold: DEFAULT_EXACT_CUT_THRESHOLD,
        }
    }
}

/// Result of weighting one connected component (component-local ids).
#[derive(Clone, Debug)]
pub struct ComponentOutcome {
    pub weighting: EdgeWeighting,
    pub colors: Vec<i32>,
    pub v0: usize,
    pub side_s: Vec<usize>,
    pub side_t: Vec<usize>,
    pub cut_history: Vec<(CutStep, usize)>,
    pub h_edge_count: usize,
    pub demand_size: usize,
    pub flow_value: usize,
    pub path_count: usize,
}

/// Provisional weighting: 2 everywhere, then spanning-tree edges of the
/// cut graph adjusted to {2,3} processing children before parents, and
/// finally the edge {v0, r} adjusted to {1,2}, so that every vertex of the
/// reduced graph has even weighted degree iff it lies in S.
pub fn initial_parity_weighting(
    g: &Graph,
    v0: usize,
    hsub: &InducedSubgraph,
    cut: &Cut,
    r: usize,
) -> Result<EdgeWeighting, PipelineError> {
    let h = &hsub.graph;
    let n_h = h.vertex_count();
    let cut_graph = Graph::new(n_h, cut.cut_edges().iter().map(|e| e.endpoints()))
        .expect("cut edges form a valid graph");
    let r_h = hsub.from_parent(r).expect("r lies in the reduced graph");

    // Breadth-first spanning tree of the cut graph rooted at r.
    let mut parent = vec![usize::MAX; n_h];
    let mut bfs_order = Vec::with_capacity(n_h);
    let mut seen = vec![false; n_h];
    seen[r_h] = true;
    bfs_order.push(r_h);
    let mut head = 0;
    while head < bfs_order.len() {
        let v = bfs_order[head];
        head += 1;
        for &w in cut_graph.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                bfs_order.push(w);
            }
        }
    }
    if bfs_order.len() != n_h {
        return Err(PipelineError::CutGraphDisconnected);
    }

    let mut mu = EdgeWeighting::uniform(g, 2);
    // Children appear after their parent in BFS order, so the reverse
    // order handles every child before its parent.
    for &v_h in bfs_order.iter().rev() {
        if v_h == r_h {
            continue;
        }
        let v_g = hsub.to_parent(v_h);
        let tree_edge = Edge::new(v_g, hsub.to_parent(parent[v_h]));
        let s = mu.weighted_degree(g, v_g);
        let wants_even = cut.is_s(v_h);
        if (s % 2 == 0) != wants_even {
            mu.set(tree_edge, 3);
        }
    }
    let e0 = Edge::new(v0, r);
    let s_r = mu.weighted_degree(g, r);
    if (s_r % 2 == 0) != cut.is_s(r_h) {
        mu.set(e0, 1);
    }
    Ok(mu)
}

/// Pre-colors g(v) = s(v) + 2k(v) for the neighbors of v0, k minimal so
/// that g differs from every earlier-indexed adjacent neighbor, plus
/// g(v0) = s(v0). The remaining vertices keep k = 0 until
/// [`greedy_remaining_targets`].
pub fn greedy_targets(g: &Graph, v0: usize, mu: &EdgeWeighting) -> TargetAssignment {
    let n = g.vertex_count();
    let nbrs = g.neighbors(v0);
    let mut order: Vec<usize> = nbrs.to_vec();
    order.extend((0..n).filter(|&v| v != v0 && !nbrs.contains(&v)));
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let s_mu = mu.weighted_degrees(n);
    let mut targets = TargetAssignment {
        v0,
        order,
        position,
        k: vec![0; n],
        g_value: vec![None; n],
        targeted: vec![None; n],
        color: vec![None; n],
    };
    targets.g_value[v0] = Some(s_mu[v0]);
    for &vi in nbrs {
        let blocked: BTreeSet<i32> = g
            .neighbors(vi)
            .iter()
            .filter(|&&vj| vj != v0 && targets.position[vj] < targets.position[vi])
            .filter_map(|&vj| targets.g_value[vj])
            .collect();
        let mut k = 0u32;
        while blocked.contains(&(s_mu[vi] + 2 * k as i32)) {
            k += 1;
        }
        targets.k[vi] = k;
        targets.g_value[vi] = Some(s_mu[vi] + 2 * k as i32);
    }
    targets
}

/// Splices the star colorizer into the weighting: omega = mu + h on the
/// closed neighborhood of v0, and f = g + s_h there. With a single
/// neighbor r the colorizer is bypassed; s(r) > s(v0) holds because r has
/// another edge.
pub fn splice_star_colorizer(
    g: &Graph,
    v0: usize,
    mu: &EdgeWeighting,
    targets: &mut TargetAssignment,
) -> Result<EdgeWeighting, PipelineError> {
    if g.degree(v0) == 1 {
        let omega = mu.clone();
        let r = g.neighbors(v0)[0];
        let s_r = omega.weighted_degree(g, r);
        targets.color[v0] = Some(omega.weighted_degree(g, v0));
        targets.color[r] = Some(s_r);
        targets.targeted[r] = Some(s_r);
        return Ok(omega);
    }
    let mut star_vs: Vec<usize> = g.neighbors(v0).to_vec();
    star_vs.push(v0);
    star_vs.sort_unstable();
    let sub = induced_subgraph(g, &star_vs);
    let precolors: Vec<i32> = (0..sub.graph.vertex_count())
        .map(|lv| targets.g_value[sub.to_parent(lv)].expect("g assigned on the star"))
        .collect();
    let center = sub.from_parent(v0).expect("v0 in its own star");
    let inst = StarInstance::new(sub.graph.clone(), center, precolors)
        .map_err(|e| violated("star-colorizer", e.to_string()))?;
    let hfun = compute_h(&inst);
    let mut w = mu.clone();
    for (e_local, value) in hfun.entries() {
        w.add(sub.parent_edge(e_local), value);
    }
    for lv in 0..sub.graph.vertex_count() {
        let v = sub.to_parent(lv);
        targets.color[v] = Some(hfun.color(lv));
        if v != v0 {
            targets.targeted[v] = Some(hfun.color(lv) - 2 * targets.k[v] as i32);
        }
    }
    Ok(w)
}

/// Colors for the vertices outside the closed neighborhood of v0:
/// f(v) = s(v) + 2k(v), k minimal so that f differs from every
/// earlier-indexed adjacent neighbor's color.
pub fn greedy_remaining_targets(
    g: &Graph,
    v0: usize,
    omega: &EdgeWeighting,
    targets: &mut TargetAssignment,
) {
    let s_omega = omega.weighted_degrees(g.vertex_count());
    let first_rest = g.degree(v0);
    let rest: Vec<usize> = targets.order[first_rest..].to_vec();
    for vi in rest {
        let blocked: BTreeSet<i32> = g
            .neighbors(vi)
            .iter()
            .filter(|&&vj| vj != v0 && targets.position[vj] < targets.position[vi])
            .map(|&vj| targets.color[vj].expect("earlier vertex colored"))
            .collect();
        let mut k = 0u32;
        while blocked.contains(&(s_omega[vi] + 2 * k as i32)) {
            k += 1;
        }
        targets.k[vi] = k;
        targets.targeted[vi] = Some(s_omega[vi]);
        targets.color[vi] = Some(s_omega[vi] + 2 * k as i32);
    }
}

/// Encodes the color deficits as oriented demand edges over the reduced
/// graph: each vertex picks its k smallest-indexed earlier same-side
/// neighbors; S-side edges point high-to-low index, T-side edges
/// low-to-high.
pub fn build_f_sigma(
    g: &Graph,
    v0: usize,
    hsub: &InducedSubgraph,
    cut: &Cut,
    targets: &TargetAssignment,
) -> Result<OrientedDemand, PipelineError> {
    let mut demand = OrientedDemand::new();
    for &vi in &targets.order {
        let need = targets.k[vi] as usize;
        if need == 0 {
            continue;
        }
        let vi_h = hsub.from_parent(vi).expect("order excludes v0");
        let mut eligible: Vec<usize> = g
            .neighbors(vi)
            .iter()
            .copied()
            .filter(|&vj| {
                vj != v0
                    && targets.position[vj] < targets.position[vi]
                    && cut.same_side(hsub.from_parent(vj).expect("not v0"), vi_h)
            })
            .collect();
        eligible.sort_by_key(|&vj| targets.position[vj]);
        if eligible.len() < need {
            return Err(PipelineError::InsufficientNeighbors {
                vertex: vi,
                need,
                have: eligible.len(),
            });
        }
        for &vj in &eligible[..need] {
            let vj_h = hsub.from_parent(vj).expect("not v0");
            if cut.is_s(vi_h) {
                demand.insert(vi_h, vj_h);
            } else {
                demand.insert(vj_h, vi_h);
            }
        }
    }
    Ok(demand)
}

/// Shifts weights by +-1 along each flow path: the edge {u_i, u_{i+1}}
/// gains one if u_i lies in S and loses one otherwise. Internal vertices
/// keep their weighted degree; only the endpoints move. Single-vertex
/// paths change nothing.
pub fn apply_path_modifications(
    omega: &EdgeWeighting,
    cut: &Cut,
    hsub: &InducedSubgraph,
    net: &FlowNetwork,
    paths: &[Vec<usize>],
) -> Result<EdgeWeighting, PipelineError> {
    let mut w = omega.clone();
    for path in paths {
        debug_assert!(path.first() == Some(&net.source) && path.last() == Some(&net.sink));
        let inner = &path[1..path.len() - 1];
        if inner.len() <= 1 {
            continue;
        }
        for pair in inner.windows(2) {
            let (u_h, x_h) = (pair[0], pair[1]);
            let e = Edge::new(hsub.to_parent(u_h), hsub.to_parent(x_h));
            let delta = if cut.is_s(u_h) { 1 } else { -1 };
            w.add(e, delta);
            let now = w.weight(e);
            if !(1..=4).contains(&now) {
                return Err(PipelineError::WeightOutOfRange { edge: e, weight: now });
            }
        }
    }
    Ok(w)
}

/// The closing move: every demand edge gains one, which adds the missing
/// +2 to each deficit counter on both sides of the orientation.
pub fn finalize_f_increment(
    omega: &EdgeWeighting,
    f_edges: &[Edge],
) -> Result<EdgeWeighting, PipelineError> {
    let mut w = omega.clone();
    for &e in f_edges {
        w.add(e, 1);
        let now = w.weight(e);
        if !(1..=4).contains(&now) {
            return Err(PipelineError::WeightOutOfRange { edge: e, weight: now });
        }
    }
    Ok(w)
}

/// Weights one connected component with at least three vertices.
pub fn weight_component(g: &Graph, opts: &PipelineOptions) -> Result<ComponentOutcome, PipelineError> {
    let n = g.vertex_count();
    assert!(n >= 3, "component pipeline needs >= 3 vertices");
    let v0 = find_non_articulation_vertex(g);
    let rest: Vec<usize> = (0..n).filter(|&v| v != v0).collect();
    let hsub = induced_subgraph(g, &rest);
    let h = &hsub.graph;
    let r = g.neighbors(v0)[0];

    let (step, initial) = match &opts.cut_source {
        CutSource::LocalSearch => (CutStep::LocalSearch, local_search_cut(h, opts.seed)),
        CutSource::Exact => (
            CutStep::Exact,
            exact_max_cut(h, opts.exact_cut_threshold).map_err(PipelineError::CutTooLarge)?,
        ),
        CutSource::Provided(sides) => (CutStep::Provided, Cut::new(h, sides.clone())),
    };
    let mut state = CutSearchState::new(step, initial);
    state.repair(h);

    // Each pass either finishes or strictly grows the cut, so |E(H)| + 1
    // passes always suffice.
    for _ in 0..=h.edge_count() {
        let cut = state.cut.clone();
        let mu = initial_parity_weighting(g, v0, &hsub, &cut, r)?;
        check_parity_stage(g, v0, &hsub, &cut, &mu, r)?;

        let mut targets = greedy_targets(g, v0, &mu);
        let omega = splice_star_colorizer(g, v0, &mu, &mut targets)?;
        check_splice_stage(g, v0, &omega, &targets)?;

        greedy_remaining_targets(g, v0, &omega, &mut targets);
        check_targets_stage(g, &hsub, &cut, &omega, &targets)?;

        let demand = build_f_sigma(g, v0, &hsub, &cut, &targets)?;
        let total_k: u32 = targets.k.iter().sum();
        if demand.len() != total_k as usize {
            return Err(violated(
                "build-f-sigma",
                format!("|F| = {} but sum of k = {total_k}", demand.len()),
            ));
        }

        let net = build_network(h, &cut, &demand).map_err(|e| violated("build-network", e.to_string()))?;
        let flow = max_flow(&net);
        if flow.value < demand.len() {
            state
                .improve_from_mincut(h, &flow.min_cut_sides.0)
                .map_err(|e| violated("improve-cut", e.to_string()))?;
            state.repair(h);
            continue;
        }

        let flow = cancel_opposite_arcs(&flow, &net);
        let paths = decompose_paths(&flow, &net).map_err(|e| violated("decompose-paths", e.to_string()))?;
        let shifted = apply_path_modifications(&omega, &cut, &hsub, &net, &paths)?;
        check_path_stage(g, v0, &hsub, &cut, &shifted, &targets, &demand)?;

        let f_edges: Vec<Edge> = demand.edges().map(|e| hsub.parent_edge(e)).collect();
        let final_weighting = finalize_f_increment(&shifted, &f_edges)?;
        check_final_stage(g, v0, &final_weighting, &targets)?;

        let colors = (0..n).map(|v| targets.color_of(v)).collect();
        return Ok(ComponentOutcome {
            weighting: final_weighting,
            colors,
            v0,
            side_s: cut.side_s().iter().map(|&v| hsub.to_parent(v)).collect(),
            side_t: cut.side_t().iter().map(|&v| hsub.to_parent(v)).collect(),
            cut_history: state.history.clone(),
            h_edge_count: h.edge_count(),
            demand_size: demand.len(),
            flow_value: flow.value,
            path_count: paths.len(),
        });
    }
    Err(violated(
        "cut-loop",
        format!(
            "no satisfying flow after {} improvements on {} reduced edges",
            state.improvements(),
            h.edge_count()
        ),
    ))
}

fn check_parity_stage(
    g: &Graph,
    v0: usize,
    hsub: &InducedSubgraph,
    cut: &Cut,
    mu: &EdgeWeighting,
    r: usize,
) -> Result<(), PipelineError> {
    let e0 = Edge::new(v0, r);
    for (e, w) in mu.iter() {
        let range_ok = if e == e0 { (1..=2).contains(&w) } else { (2..=3).contains(&w) };
        if !range_ok {
            return Err(violated("parity", format!("mu({e}) = {w}")));
        }
    }
    let deg = mu.weighted_degrees(g.vertex_count());
    for v_h in 0..hsub.graph.vertex_count() {
        let v = hsub.to_parent(v_h);
        if (deg[v] % 2 == 0) != cut.is_s(v_h) {
            return Err(violated(
                "parity",
                format!("vertex {v} has degree {} on side {}", deg[v], if cut.is_s(v_h) { "S" } else { "T" }),
            ));
        }
    }
    Ok(())
}

fn check_splice_stage(
    g: &Graph,
    v0: usize,
    omega: &EdgeWeighting,
    targets: &TargetAssignment,
) -> Result<(), PipelineError> {
    for (e, w) in omega.iter() {
        let range_ok = if e.touches(v0) { (1..=4).contains(&w) } else { (2..=3).contains(&w) };
        if !range_ok {
            return Err(violated("star-splice", format!("omega({e}) = {w}")));
        }
    }
    let deg = omega.weighted_degrees(g.vertex_count());
    let f_v0 = targets.color[v0].ok_or_else(|| violated("star-splice", "v0 uncolored"))?;
    if f_v0 != deg[v0] {
        return Err(violated(
            "star-splice",
            format!("f(v0) = {f_v0} but s(v0) = {}", deg[v0]),
        ));
    }
    for &vi in g.neighbors(v0) {
        let f = targets.color[vi].ok_or_else(|| violated("star-splice", "neighbor uncolored"))?;
        if f - deg[vi] != 2 * targets.k[vi] as i32 {
            return Err(violated(
                "star-splice",
                format!("vertex {vi}: f = {f}, s = {}, k = {}", deg[vi], targets.k[vi]),
            ));
        }
    }
    Ok(())
}

fn check_targets_stage(
    g: &Graph,
    hsub: &InducedSubgraph,
    cut: &Cut,
    omega: &EdgeWeighting,
    targets: &TargetAssignment,
) -> Result<(), PipelineError> {
    let deg = omega.weighted_degrees(g.vertex_count());
    for &v in &targets.order {
        let f = targets.color[v].ok_or_else(|| violated("targets", format!("vertex {v} uncolored")))?;
        let t = targets.targeted[v].ok_or_else(|| violated("targets", format!("vertex {v} untargeted")))?;
        if t != deg[v] {
            return Err(violated("targets", format!("t({v}) = {t} but s = {}", deg[v])));
        }
        if f - t != 2 * targets.k[v] as i32 {
            return Err(violated("targets", format!("f({v}) - t({v}) != 2k")));
        }
        let v_h = hsub.from_parent(v).expect("not v0");
        if (f % 2 == 0) != cut.is_s(v_h) {
            return Err(violated("targets", format!("f({v}) = {f} has the wrong parity")));
        }
    }
    for e in g.edges() {
        let (u, v) = e.endpoints();
        if targets.color[u] == targets.color[v] {
            return Err(violated(
                "targets",
                format!("designated colors collide on {e}"),
            ));
        }
    }
    Ok(())
}

/// The per-side transfer balance after the path pass: on S the weighted
/// degree moved by out-degree minus in-degree of the orientation, on T by
/// the negation.
fn check_path_stage(
    g: &Graph,
    v0: usize,
    hsub: &InducedSubgraph,
    cut: &Cut,
    omega: &EdgeWeighting,
    targets: &TargetAssignment,
    demand: &OrientedDemand,
) -> Result<(), PipelineError> {
    let deg = omega.weighted_degrees(g.vertex_count());
    for v in g.vertices().filter(|&v| v != v0) {
        let v_h = hsub.from_parent(v).expect("not v0");
        let out = demand.out_degree(v_h) as i32;
        let inc = demand.in_degree(v_h) as i32;
        let expected = if cut.is_s(v_h) { out - inc } else { inc - out };
        let t = targets.targeted[v].expect("targeted");
        if deg[v] - t != expected {
            return Err(violated(
                "path-modifications",
                format!("vertex {v}: s - t = {} but sigma balance = {expected}", deg[v] - t),
            ));
        }
    }
    Ok(())
}

fn check_final_stage(
    g: &Graph,
    v0: usize,
    omega: &EdgeWeighting,
    targets: &TargetAssignment,
) -> Result<(), PipelineError> {
    for (e, w) in omega.iter() {
        if !(1..=4).contains(&w) {
            return Err(violated("finalize", format!("omega({e}) = {w}")));
        }
    }
    let deg = omega.weighted_degrees(g.vertex_count());
    for v in g.vertices() {
        let f = targets.color_of(v);
        if deg[v] != f {
            let which = if v == v0 { "v0" } else { "vertex" };
            return Err(violated(
                "finalize",
                format!("{which} {v}: s = {} but f = {f}", deg[v]),
            ));
        }
    }
    Ok(())
}

/// Weights a whole graph: components with at least three vertices run the
/// pipeline, isolated vertices pass through, and a K2 component aborts.
/// The certificate's verdict comes from the independent verifier, never
/// from the pipeline's own bookkeeping.
pub fn weight_graph(g: &Graph, opts: &PipelineOptions) -> Result<Certificate, PipelineError> {
    let components = classify_components(g);
    for c in &components {
        if c.class == ComponentClass::K2 {
            return Err(PipelineError::K2Component {
                u: c.vertices[0],
                v: c.vertices[1],
            });
        }
    }
    let n = g.vertex_count();
    let mut weights: BTreeMap<Edge, i32> = BTreeMap::new();
    let mut colors = vec![0i32; n];
    let mut reports = Vec::new();
    for (index, comp) in components.into_iter().enumerate() {
        match comp.class {
            ComponentClass::IsolatedVertex => {
                reports.push(ComponentReport {
                    index,
                    vertices: comp.vertices,
                    class: comp.class,
                    v0: None,
                    side_s: Vec::new(),
                    side_t: Vec::new(),
                    cut_history: Vec::new(),
                    h_edge_count: 0,
                    demand_size: 0,
                    flow_value: 0,
                    path_count: 0,
                });
            }
            ComponentClass::Weightable => {
                let sub = induced_subgraph(g, &comp.vertices);
                let outcome = weight_component(&sub.graph, opts)?;
                for (e_local, w) in outcome.weighting.iter() {
                    weights.insert(sub.parent_edge(e_local), w);
                }
                for (local, &color) in outcome.colors.iter().enumerate() {
                    colors[sub.to_parent(local)] = color;
                }
                reports.push(ComponentReport {
                    index,
                    vertices: comp.vertices,
                    class: comp.class,
                    v0: Some(sub.to_parent(outcome.v0)),
                    side_s: outcome.side_s.iter().map(|&v| sub.to_parent(v)).collect(),
                    side_t: outcome.side_t.iter().map(|&v| sub.to_parent(v)).collect(),
                    cut_history: outcome.cut_history,
                    h_edge_count: outcome.h_edge_count,
                    demand_size: outcome.demand_size,
                    flow_value: outcome.flow_value,
                    path_count: outcome.path_count,
                });
            }
            ComponentClass::K2 => unreachable!("rejected above"),
        }
    }
    let weighting = EdgeWeighting::from_map(weights);
    let degrees = weighting.weighted_degrees(n);
    let verdict = verify_weighting(g, &weighting)
        .map_err(|e| violated("verify", e.to_string()))?;
    Ok(Certificate {
        tool: "vcew",
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: opts.seed,
        n,
        edges: g.edges().to_vec(),
        weights: weighting,
        degrees,
        colors,
        components: reports,
        verdict,
    })
}

impl From<GraphError> for PipelineError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::K2Component { u, v } => PipelineError::K2Component { u, v },
            other => violated("graph", other.to_string()),
        }
    }
}
