//! The auxiliary flow network for the weighted-degree transfers: both
//! orientations of every cut edge, plus one source arc and one sink arc
//! per oriented demand edge, all with capacity 1 (parallel source/sink
//! arcs are kept distinct on purpose). Max flow runs shortest augmenting
//! paths; the min-cut split comes from residual reachability.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use thiserror::Error;

use crate::cut::Cut;
use crate::graph::{Edge, Graph};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("demand edge {0} crosses the cut")]
    DemandNotSameSide(Edge),
    #[error("flow decomposition got stuck at node {node} with {paths_done} paths done; upstream bug")]
    DecompositionShortfall { node: usize, paths_done: usize },
}

/// Same-side edges that need a weighted-degree transfer, each with the
/// orientation (tail, head) that decides which endpoint's degree rises.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrientedDemand {
    oriented: BTreeMap<Edge, (usize, usize)>,
}

impl OrientedDemand {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the edge {tail, head} oriented tail -> head.
    pub fn insert(&mut self, tail: usize, head: usize) {
        let prev = self.oriented.insert(Edge::new(tail, head), (tail, head));
        debug_assert!(prev.is_none(), "duplicate demand edge");
    }

    pub fn len(&self) -> usize {
        self.oriented.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oriented.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.oriented.contains_key(&e)
    }

    /// Demand edges in sorted order with their orientations.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, (usize, usize))> + '_ {
        self.oriented.iter().map(|(&e, &o)| (e, o))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.oriented.keys().copied()
    }

    /// Out-degree of `v` in the orientation.
    pub fn out_degree(&self, v: usize) -> usize {
        self.oriented.values().filter(|&&(tail, _)| tail == v).count()
    }

    /// In-degree of `v` in the orientation.
    pub fn in_degree(&self, v: usize) -> usize {
        self.oriented.values().filter(|&&(_, head)| head == v).count()
    }
}

/// A directed arc with capacity 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub tail: usize,
    pub head: usize,
}

/// Unit-capacity directed multigraph with designated source and sink.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    /// Vertices of the underlying graph plus source and sink.
    pub node_count: usize,
    pub arcs: Vec<FlowArc>,
    pub source: usize,
    pub sink: usize,
    /// Indices of the antiparallel arc pairs created per cut edge.
    cut_arc_pairs: Vec<(usize, usize)>,
}

impl FlowNetwork {
    /// Number of demand arcs leaving the source.
    pub fn source_arc_count(&self) -> usize {
        self.arcs.iter().filter(|a| a.tail == self.source).count()
    }

    /// Debug dump: one `tail head` line per arc in network order, with
    /// the source and sink printed as `s` and `t`.
    pub fn dump(&self) -> String {
        let name = |v: usize| {
            if v == self.source {
                "s".to_string()
            } else if v == self.sink {
                "t".to_string()
            } else {
                v.to_string()
            }
        };
        let mut out = format!("network nodes {} arcs {}\n", self.node_count, self.arcs.len());
        for a in &self.arcs {
            out.push_str(&format!("{} {}\n", name(a.tail), name(a.head)));
        }
        out
    }
}

/// An integral flow with the residual min-cut vertex split.
#[derive(Clone, Debug)]
pub struct FlowResult {
    pub value: usize,
    /// 0/1 flow per arc, indexed like `FlowNetwork::arcs`.
    pub arc_flow: Vec<u8>,
    /// Vertices of the underlying graph on the source/sink side of the
    /// residual min cut (source and sink themselves excluded). Meaningful
    /// when the flow value falls short of the demand size.
    pub min_cut_sides: (Vec<usize>, Vec<usize>),
}

/// Builds the auxiliary network: per cut edge {u,v} the arcs (u,v) and
/// (v,u); per demand edge oriented (u,v) the arcs (source,u) and (v,sink).
/// Arc order is deterministic: cut arcs first, sorted by edge, then demand
/// arcs sorted by edge.
pub fn build_network(g: &Graph, cut: &Cut, demand: &OrientedDemand) -> Result<FlowNetwork, FlowError> {
    let n = g.vertex_count();
    let source = n;
    let sink = n + 1;
    let mut arcs = Vec::with_capacity(2 * cut.size() + 2 * demand.len());
    let mut cut_arc_pairs = Vec::with_capacity(cut.size());
    for e in cut.cut_edges() {
        let (u, v) = e.endpoints();
        cut_arc_pairs.push((arcs.len(), arcs.len() + 1));
        arcs.push(FlowArc { tail: u, head: v });
        arcs.push(FlowArc { tail: v, head: u });
    }
    for (e, (tail, head)) in demand.iter() {
        if cut.is_cut_edge(e) {
            return Err(FlowError::DemandNotSameSide(e));
        }
        arcs.push(FlowArc { tail: source, head: tail });
        arcs.push(FlowArc { tail: head, head: sink });
    }
    Ok(FlowNetwork {
        node_count: n + 2,
        arcs,
        source,
        sink,
        cut_arc_pairs,
    })
}

/// Integral maximum flow via shortest augmenting paths.
pub fn max_flow(net: &FlowNetwork) -> FlowResult {
    let mut out_arcs = vec![Vec::new(); net.node_count];
    let mut in_arcs = vec![Vec::new(); net.node_count];
    for (i, a) in net.arcs.iter().enumerate() {
        out_arcs[a.tail].push(i);
        in_arcs[a.head].push(i);
    }
    let mut flow = vec![0u8; net.arcs.len()];
    let mut value = 0usize;
    // parent[v] = (arc index, arc traversed forward?)
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; net.node_count];
    loop {
        parent.iter_mut().for_each(|p| *p = None);
        parent[net.source] = Some((usize::MAX, true));
        let mut queue = VecDeque::from([net.source]);
        'bfs: while let Some(v) = queue.pop_front() {
            for &i in &out_arcs[v] {
                let head = net.arcs[i].head;
                if flow[i] == 0 && parent[head].is_none() {
                    parent[head] = Some((i, true));
                    if head == net.sink {
                        break 'bfs;
                    }
                    queue.push_back(head);
                }
            }
            for &i in &in_arcs[v] {
                let tail = net.arcs[i].tail;
                if flow[i] == 1 && parent[tail].is_none() {
                    parent[tail] = Some((i, false));
                    if tail == net.sink {
                        break 'bfs;
                    }
                    queue.push_back(tail);
                }
            }
        }
        if parent[net.sink].is_none() {
            break;
        }
        let mut v = net.sink;
        while v != net.source {
            let (i, forward) = parent[v].expect("path back to source");
            if forward {
                flow[i] = 1;
                v = net.arcs[i].tail;
            } else {
                flow[i] = 0;
                v = net.arcs[i].head;
            }
        }
        value += 1;
    }
    let reachable = residual_reachable(net, &flow);
    let mut side_a = Vec::new();
    let mut side_b = Vec::new();
    for (v, &in_a) in reachable.iter().enumerate() {
        if v == net.source || v == net.sink {
            continue;
        }
        if in_a {
            side_a.push(v);
        } else {
            side_b.push(v);
        }
    }
    FlowResult {
        value,
        arc_flow: flow,
        min_cut_sides: (side_a, side_b),
    }
}

fn residual_reachable(net: &FlowNetwork, flow: &[u8]) -> Vec<bool> {
    let mut out_arcs = vec![Vec::new(); net.node_count];
    let mut in_arcs = vec![Vec::new(); net.node_count];
    for (i, a) in net.arcs.iter().enumerate() {
        out_arcs[a.tail].push(i);
        in_arcs[a.head].push(i);
    }
    let mut seen = vec![false; net.node_count];
    seen[net.source] = true;
    let mut queue = VecDeque::from([net.source]);
    while let Some(v) = queue.pop_front() {
        for &i in &out_arcs[v] {
            if flow[i] == 0 && !seen[net.arcs[i].head] {
                seen[net.arcs[i].head] = true;
                queue.push_back(net.arcs[i].head);
            }
        }
        for &i in &in_arcs[v] {
            if flow[i] == 1 && !seen[net.arcs[i].tail] {
                seen[net.arcs[i].tail] = true;
                queue.push_back(net.arcs[i].tail);
            }
        }
    }
    seen
}

/// Zeroes every antiparallel cut-arc pair that carries flow in both
/// directions. The two arcs form a circulation, so the value and the
/// conservation law are untouched; afterwards each cut edge carries flow
/// in at most one direction.
pub fn cancel_opposite_arcs(flow: &FlowResult, net: &FlowNetwork) -> FlowResult {
    let mut result = flow.clone();
    for &(i, j) in &net.cut_arc_pairs {
        if result.arc_flow[i] == 1 && result.arc_flow[j] == 1 {
            result.arc_flow[i] = 0;
            result.arc_flow[j] = 0;
        }
    }
    result
}

/// Splits a canceled flow of value k into exactly k arc-disjoint simple
/// source-sink paths (node sequences including source and sink). Each walk
/// follows the smallest-head flow-carrying arc; closed sub-walks are
/// excised and their flow discarded, as are cycles never reached.
pub fn decompose_paths(flow: &FlowResult, net: &FlowNetwork) -> Result<Vec<Vec<usize>>, FlowError> {
    // Flow-carrying out-arcs per node, sorted by (head, arc index), each
    // consumed at most once.
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); net.node_count];
    for (i, a) in net.arcs.iter().enumerate() {
        if flow.arc_flow[i] == 1 {
            out[a.tail].push(i);
        }
    }
    for list in &mut out {
        list.sort_by_key(|&i| (net.arcs[i].head, i));
    }
    let mut cursor = vec![0usize; net.node_count];
    let mut take_next = |v: usize, out: &[Vec<usize>]| -> Option<usize> {
        let idx = cursor[v];
        if idx < out[v].len() {
            cursor[v] = idx + 1;
            Some(out[v][idx])
        } else {
            None
        }
    };
    let mut paths = Vec::with_capacity(flow.value);
    let mut on_path = vec![false; net.node_count];
    for _ in 0..flow.value {
        let mut path = vec![net.source];
        on_path[net.source] = true;
        let mut v = net.source;
        while v != net.sink {
            let Some(arc) = take_next(v, &out) else {
                return Err(FlowError::DecompositionShortfall {
                    node: v,
                    paths_done: paths.len(),
                });
            };
            let next = net.arcs[arc].head;
            if next != net.sink && on_path[next] {
                // Closed sub-walk: drop the loop, keep its arcs consumed.
                while *path.last().expect("path starts at source") != next {
                    on_path[path.pop().expect("loop head on path")] = false;
                }
            } else {
                path.push(next);
                if next != net.sink {
                    on_path[next] = true;
                }
            }
            v = next;
        }
        for &u in &path {
            on_path[u] = false;
        }
        paths.push(path);
    }
    Ok(paths)
}
