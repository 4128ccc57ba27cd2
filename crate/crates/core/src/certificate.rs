//! The exchange format: everything a third party needs to re-check a run.
//! Rendered as structured text with a stable key order so certificates
//! diff cleanly; the per-edge weight lines are bare `u v w` triples, which
//! the weight-file parser accepts directly.

use std::fmt::Write as _;

use crate::cut::CutStep;
use crate::graph::{ComponentClass, Edge};
use crate::verify::Verdict;
use crate::weighting::EdgeWeighting;

/// Per-component metadata of one pipeline run.
#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub index: usize,
    /// Vertices in ascending global ids.
    pub vertices: Vec<usize>,
    pub class: ComponentClass,
    /// The special vertex; None for isolated vertices.
    pub v0: Option<usize>,
    pub side_s: Vec<usize>,
    pub side_t: Vec<usize>,
    /// Cut search history: (step, size after the step).
    pub cut_history: Vec<(CutStep, usize)>,
    /// Edge count of the reduced graph H; bounds the improvements.
    pub h_edge_count: usize,
    pub demand_size: usize,
    pub flow_value: usize,
    pub path_count: usize,
}

impl ComponentReport {
    /// Strict cut improvements performed after the initial cut.
    pub fn improvements(&self) -> usize {
        self.cut_history.len().saturating_sub(1)
    }

    pub fn final_cut_size(&self) -> Option<usize> {
        self.cut_history.last().map(|&(_, size)| size)
    }
}

/// A complete, verifiable weighting certificate.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub tool: &'static str,
    pub version: String,
    pub seed: u64,
    pub n: usize,
    pub edges: Vec<Edge>,
    pub weights: EdgeWeighting,
    pub degrees: Vec<i32>,
    /// Designated colors; equal to the weighted degrees on success.
    pub colors: Vec<i32>,
    pub components: Vec<ComponentReport>,
    pub verdict: Verdict,
}

fn class_label(c: ComponentClass) -> &'static str {
    match c {
        ComponentClass::IsolatedVertex => "isolated-vertex",
        ComponentClass::K2 => "k2",
        ComponentClass::Weightable => "weightable",
    }
}

fn id_list(ids: &[usize]) -> String {
    if ids.is_empty() {
        "-".to_string()
    } else {
        ids.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Certificate {
    /// Re-runs the side-parity audit per weightable component from the
    /// certificate's own weights.
    pub fn parity_ok(&self) -> bool {
        let degrees = self.weights.weighted_degrees(self.n);
        self.components.iter().all(|c| {
            let Some(v0) = c.v0 else { return true };
            c.side_s
                .iter()
                .all(|&v| degrees[v] % 2 == 0)
                && c.side_t.iter().all(|&v| degrees[v] % 2 != 0)
                && c.vertices
                    .iter()
                    .all(|&v| v == v0 || c.side_s.contains(&v) || c.side_t.contains(&v))
        })
    }

    pub fn render(&self, trace: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "certificate v1");
        let _ = writeln!(out, "tool {} {}", self.tool, self.version);
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "graph {} {}", self.n, self.edges.len());
        for (e, w) in self.weights.iter() {
            let (u, v) = e.endpoints();
            let _ = writeln!(out, "{u} {v} {w}");
        }
        for v in 0..self.n {
            let _ = writeln!(out, "vertex {v} wdeg {} color {}", self.degrees[v], self.colors[v]);
        }
        for c in &self.components {
            let _ = writeln!(
                out,
                "component {} class {} vertices {} v0 {} s {} t {} cut-size {} improvements {} F {} flow {} paths {} h-edges {}",
                c.index,
                class_label(c.class),
                id_list(&c.vertices),
                c.v0.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                id_list(&c.side_s),
                id_list(&c.side_t),
                c.final_cut_size().map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
                c.improvements(),
                c.demand_size,
                c.flow_value,
                c.path_count,
                c.h_edge_count,
            );
            if trace {
                for (step, size) in &c.cut_history {
                    let _ = writeln!(out, "trace {} cut {}:{}", c.index, step.label(), size);
                }
            }
        }
        if self.verdict.ok {
            let _ = writeln!(out, "verdict ok");
        } else {
            let _ = writeln!(out, "verdict fail");
            for e in &self.verdict.conflicts {
                let (u, v) = e.endpoints();
                let _ = writeln!(out, "conflict {u} {v}");
            }
        }
        out
    }

    /// Human-oriented one-paragraph summary.
    pub fn summary(&self) -> String {
        let values = self.weights.distinct_values();
        let values: Vec<String> = values.iter().map(|w| w.to_string()).collect();
        format!(
            "{} vertices, {} edges, {} component(s); weights used: {{{}}}; verdict: {}",
            self.n,
            self.edges.len(),
            self.components.len(),
            values.join(","),
            if self.verdict.ok { "ok" } else { "fail" }
        )
    }
}

#[cfg(test)]
mod tests {
    use crate::graph::Graph;
    use crate::io::parse_weights;
    use crate::weighting::{weight_graph, PipelineOptions};

    #[test]
    fn rendered_certificate_is_a_valid_weight_file() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let cert = weight_graph(&g, &PipelineOptions::default()).unwrap();
        let doc = cert.render(true);
        let weights = parse_weights(&doc).unwrap();
        assert_eq!(weights.len(), 5);
        for (e, w) in cert.weights.iter() {
            assert_eq!(weights[&e], w);
        }
        assert!(doc.contains("verdict ok"));
        assert!(doc.contains("trace 0 cut"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let opts = PipelineOptions::default();
        let a = weight_graph(&g, &opts).unwrap().render(false);
        let b = weight_graph(&g, &opts).unwrap().render(false);
        assert_eq!(a, b);
    }

    #[test]
    fn parity_ok_on_engine_output() {
        let g = Graph::new(7, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (4, 6)]).unwrap();
        let cert = weight_graph(&g, &PipelineOptions::default()).unwrap();
        assert!(cert.parity_ok());
    }
}
