//! Exhaustive validation harness: weight every labeled graph up to a
//! vertex bound, re-verify each certificate independently, and aggregate.
//! Graphs are distributed over a thread pool; the merge is
//! order-independent, so the report is deterministic.

use std::time::{Duration, Instant};

use crate::generate::{labeled_graph_by_mask, labeled_graph_count};
use crate::graph::{classify_components, ComponentClass, Graph};
use crate::verify::verify_weighting;
use crate::weighting::{weight_graph, PipelineOptions};

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Worker threads; 0 means all available.
    pub jobs: usize,
    pub pipeline: PipelineOptions,
    /// Test hook: corrupt the first edge weight of every certificate
    /// before re-verification, to prove the harness notices failures.
    pub sabotage_first_edge: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SweepRow {
    pub n: usize,
    pub graphs: u64,
    pub weighted: u64,
    pub skipped_k2: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub graphs_total: u64,
    pub weighted: u64,
    pub skipped_k2: u64,
    pub verify_failures: u64,
    pub parity_failures: u64,
    /// Improvement counts above the |E(H)| bound (must stay zero).
    pub bound_violations: u64,
    pub max_improvements: usize,
    /// How many edges carried weight value 1, 2, 3, 4.
    pub weight_histogram: [u64; 4],
    /// Up to a handful of failing graphs, as `n=<n> mask=<mask>: reason`.
    pub failure_samples: Vec<String>,
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn failures(&self) -> u64 {
        self.verify_failures + self.parity_failures + self.bound_violations
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("n graphs weighted skipped-k2 failures\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                r.n, r.graphs, r.weighted, r.skipped_k2, r.failures
            ));
        }
        out.push_str(&format!(
            "total {} weighted {} skipped-k2 {} failures {}\n",
            self.graphs_total,
            self.weighted,
            self.skipped_k2,
            self.failures()
        ));
        out.push_str(&format!("max-improvements {}\n", self.max_improvements));
        out.push_str(&format!(
            "weights 1:{} 2:{} 3:{} 4:{}\n",
            self.weight_histogram[0],
            self.weight_histogram[1],
            self.weight_histogram[2],
            self.weight_histogram[3]
        ));
        for s in &self.failure_samples {
            out.push_str(&format!("failure {s}\n"));
        }
        out.push_str(&format!("elapsed-ms {}\n", self.elapsed.as_millis()));
        out.push_str(if self.failures() == 0 { "result ok\n" } else { "result FAIL\n" });
        out
    }
}

#[derive(Default)]
struct Partial {
    graphs: u64,
    weighted: u64,
    skipped_k2: u64,
    verify_failures: u64,
    parity_failures: u64,
    bound_violations: u64,
    max_improvements: usize,
    weight_histogram: [u64; 4],
    failure_samples: Vec<String>,
}

const FAILURE_SAMPLE_CAP: usize = 20;

impl Partial {
    fn merge(&mut self, other: Partial) {
        self.graphs += other.graphs;
        self.weighted += other.weighted;
        self.skipped_k2 += other.skipped_k2;
        self.verify_failures += other.verify_failures;
        self.parity_failures += other.parity_failures;
        self.bound_violations += other.bound_violations;
        self.max_improvements = self.max_improvements.max(other.max_improvements);
        for i in 0..4 {
            self.weight_histogram[i] += other.weight_histogram[i];
        }
        self.failure_samples.extend(other.failure_samples);
        self.failure_samples.truncate(FAILURE_SAMPLE_CAP);
    }

    fn note_failure(&mut self, n: usize, mask: u64, reason: &str) {
        if self.failure_samples.len() < FAILURE_SAMPLE_CAP {
            self.failure_samples.push(format!("n={n} mask={mask}: {reason}"));
        }
    }
}

fn process_graph(n: usize, mask: u64, g: &Graph, opts: &SweepOptions, acc: &mut Partial) {
    acc.graphs += 1;
    let classes = classify_components(g);
    if classes.iter().any(|c| c.class == ComponentClass::K2) {
        acc.skipped_k2 += 1;
        return;
    }
    let cert = match weight_graph(g, &opts.pipeline) {
        Ok(cert) => cert,
        Err(e) => {
            acc.verify_failures += 1;
            acc.note_failure(n, mask, &e.to_string());
            return;
        }
    };
    acc.weighted += 1;
    for (_, w) in cert.weights.iter() {
        if (1..=4).contains(&w) {
            acc.weight_histogram[(w - 1) as usize] += 1;
        } else {
            acc.verify_failures += 1;
            acc.note_failure(n, mask, &format!("weight {w} out of range"));
        }
    }
    let mut checked = cert.weights.clone();
    if opts.sabotage_first_edge {
        let first = checked.edges().next();
        if let Some(e) = first {
            let w = checked.weight(e);
            checked.set(e, w % 4 + 1);
        }
    }
    match verify_weighting(g, &checked) {
        Ok(verdict) if verdict.ok => {}
        Ok(_) | Err(_) => {
            acc.verify_failures += 1;
            acc.note_failure(n, mask, "verifier rejected the weighting");
        }
    }
    if !cert.parity_ok() {
        acc.parity_failures += 1;
        acc.note_failure(n, mask, "side parity audit failed");
    }
    for c in &cert.components {
        acc.max_improvements = acc.max_improvements.max(c.improvements());
        if c.improvements() > c.h_edge_count {
            acc.bound_violations += 1;
            acc.note_failure(n, mask, "cut improvements exceeded |E(H)|");
        }
    }
}

/// Weights all labeled graphs on 1..=n_max vertices and aggregates.
pub fn run_sweep(n_max: usize, opts: &SweepOptions) -> SweepReport {
    let started = Instant::now();
    let jobs = if opts.jobs == 0 {
        std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
    } else {
        opts.jobs
    };
    let mut report = SweepReport::default();
    let mut total = Partial::default();
    for n in 1..=n_max {
        let count = labeled_graph_count(n);
        let chunk = count.div_ceil(jobs as u64).max(1);
        let mut partials: Vec<Partial> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs as u64)
                .map(|j| {
                    let lo = j * chunk;
                    let hi = ((j + 1) * chunk).min(count);
                    scope.spawn(move || {
                        let mut acc = Partial::default();
                        for mask in lo..hi {
                            let g = labeled_graph_by_mask(n, mask);
                            process_graph(n, mask, &g, opts, &mut acc);
                        }
                        acc
                    })
                })
                .collect();
            for h in handles {
                partials.push(h.join().expect("sweep worker panicked"));
            }
        });
        let mut row_acc = Partial::default();
        for p in partials {
            row_acc.merge(p);
        }
        report.rows.push(SweepRow {
            n,
            graphs: row_acc.graphs,
            weighted: row_acc.weighted,
            skipped_k2: row_acc.skipped_k2,
            failures: row_acc.verify_failures + row_acc.parity_failures + row_acc.bound_violations,
        });
        total.merge(row_acc);
    }
    report.graphs_total = total.graphs;
    report.weighted = total.weighted;
    report.skipped_k2 = total.skipped_k2;
    report.verify_failures = total.verify_failures;
    report.parity_failures = total.parity_failures;
    report.bound_violations = total.bound_violations;
    report.max_improvements = total.max_improvements;
    report.weight_histogram = total.weight_histogram;
    report.failure_samples = total.failure_samples;
    report.failure_samples.sort();
    report.elapsed = started.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_up_to_four_vertices_is_clean() {
        let report = run_sweep(4, &SweepOptions::default());
        assert_eq!(report.graphs_total, 1 + 2 + 8 + 64);
        assert_eq!(report.failures(), 0, "{:?}", report.failure_samples);
        assert!(report.weighted > 0);
        assert!(report.skipped_k2 > 0);
    }

    #[test]
    fn sabotaged_verifier_reports_failures() {
        let opts = SweepOptions {
            sabotage_first_edge: true,
            ..Default::default()
        };
        let report = run_sweep(4, &opts);
        assert!(report.verify_failures > 0, "sabotage went unnoticed");
    }
}
