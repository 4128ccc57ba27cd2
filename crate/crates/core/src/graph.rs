//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! Adjacency is kept twice: a hash set for O(1) edge queries and sorted
//! neighbor lists so that every iteration order is deterministic. All
//! tie-breaks elsewhere in the crate rely on the sorted order.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// An undirected edge, stored with `u < v`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop {a}");
        Edge {
            u: a.min(b),
            v: a.max(b),
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            assert_eq!(self.v, x, "vertex {x} not on edge {self}");
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edge endpoint {vertex} out of range for {n} vertices")]
    EndpointOutOfRange { vertex: usize, n: usize },
    #[error("K2 component {{{u},{v}}}")]
    K2Component { u: usize, v: usize },
}

/// A simple undirected graph: no self-loops, no duplicate edges.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    edge_set: HashSet<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edge_pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut edge_set = HashSet::new();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edge_pairs {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::EndpointOutOfRange { vertex: x, n });
                }
            }
            let e = Edge::new(a, b);
            if !edge_set.insert(e) {
                return Err(GraphError::DuplicateEdge(e));
            }
            edges.push(e);
            adj[a].push(b);
            adj[b].push(a);
        }
        edges.sort_unstable();
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            edge_set,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edges, sorted by endpoints.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edge_set.contains(&Edge::new(a, b))
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }
}

/// Classification of a connected component.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ComponentClass {
    /// A single vertex with no edges; trivially colorable.
    IsolatedVertex,
    /// A single edge; no vertex-coloring weighting exists.
    K2,
    /// At least three vertices (hence at least two edges).
    Weightable,
}

#[derive(Clone, Debug)]
pub struct Component {
    /// Vertices in ascending order.
    pub vertices: Vec<usize>,
    pub class: ComponentClass,
}

/// Partition of the vertex set into maximal connected sets, ordered by
/// smallest contained vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).len() <= 1
}

/// Tags every connected component with its [`ComponentClass`].
pub fn classify_components(g: &Graph) -> Vec<Component> {
    connected_components(g)
        .into_iter()
        .map(|vertices| {
            let class = match vertices.len() {
                1 => ComponentClass::IsolatedVertex,
                2 => ComponentClass::K2,
                _ => ComponentClass::Weightable,
            };
            Component { vertices, class }
        })
        .collect()
}

/// Classifies the components and rejects the graph if any component is a
/// single edge, the sole obstruction to a vertex-coloring weighting.
pub fn validate(g: &Graph) -> Result<Vec<Component>, GraphError> {
    let components = classify_components(g);
    for c in &components {
        if c.class == ComponentClass::K2 {
            return Err(GraphError::K2Component {
                u: c.vertices[0],
                v: c.vertices[1],
            });
        }
    }
    Ok(components)
}

/// A vertex whose removal keeps the graph connected: the smallest-id leaf
/// of the DFS tree rooted at vertex 0.
///
/// Requires `g` connected with at least two vertices.
pub fn find_non_articulation_vertex(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n >= 2, "need at least two vertices");
    // Iterative DFS from 0 with sorted neighbor exploration; tree_degree
    // counts tree edges only. A leaf of the DFS tree (tree degree 1) is
    // never an articulation vertex.
    let mut visited = vec![false; n];
    let mut tree_degree = vec![0usize; n];
    let mut stack = vec![(0usize, 0usize)]; // (vertex, next neighbor index)
    visited[0] = true;
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        if let Some(&w) = g.neighbors(v).get(*idx) {
            *idx += 1;
            if !visited[w] {
                visited[w] = true;
                tree_degree[v] += 1;
                tree_degree[w] += 1;
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }
    debug_assert!(visited.iter().all(|&s| s), "graph must be connected");
    (0..n)
        .find(|&v| tree_degree[v] == 1)
        .expect("a spanning tree of >=2 vertices always has a leaf")
}

/// An induced subgraph together with the id mapping in both directions.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    to_parent: Vec<usize>,
}

impl InducedSubgraph {
    pub fn to_parent(&self, local: usize) -> usize {
        self.to_parent[local]
    }

    pub fn from_parent(&self, parent: usize) -> Option<usize> {
        self.to_parent.binary_search(&parent).ok()
    }

    pub fn parent_edge(&self, e: Edge) -> Edge {
        let (a, b) = e.endpoints();
        Edge::new(self.to_parent[a], self.to_parent[b])
    }

    pub fn local_edge(&self, e: Edge) -> Option<Edge> {
        let (a, b) = e.endpoints();
        Some(Edge::new(self.from_parent(a)?, self.from_parent(b)?))
    }
}

/// The subgraph induced by `vs`, with local ids assigned in ascending order
/// of the parent ids.
pub fn induced_subgraph(g: &Graph, vs: &[usize]) -> InducedSubgraph {
    let mut to_parent: Vec<usize> = vs.to_vec();
    to_parent.sort_unstable();
    to_parent.dedup();
    let mut local_of = vec![usize::MAX; g.vertex_count()];
    for (local, &parent) in to_parent.iter().enumerate() {
        assert!(parent < g.vertex_count(), "vertex {parent} out of range");
        local_of[parent] = local;
    }
    let edges = g
        .edges()
        .iter()
        .filter_map(|e| {
            let (a, b) = e.endpoints();
            if local_of[a] != usize::MAX && local_of[b] != usize::MAX {
                Some((local_of[a], local_of[b]))
            } else {
                None
            }
        })
        .collect::<Vec<_>>();
    let graph = Graph::new(to_parent.len(), edges).expect("induced subgraph of a valid graph is valid");
    InducedSubgraph { graph, to_parent }
}
