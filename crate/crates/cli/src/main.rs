//! Command-line surface: weight graphs into certificates, verify weight
//! files, search minimal weight sets, generate inputs, and run exhaustive
//! sweeps.
//!
//! Exit codes: 0 ok, 1 failed verification, 2 K2 component, 3 parse or
//! parameter error, 4 enumeration budget, 5 internal invariant violation.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vcew_core::cut::DEFAULT_EXACT_CUT_THRESHOLD;
use vcew_core::generate;
use vcew_core::graph::Graph;
use vcew_core::io::{format_canonical, parse_graph, parse_weights};
use vcew_core::sweep::{run_sweep, SweepOptions};
use vcew_core::verify::{brute_force_min_k, sample_min_k, verify_weighting, MinKResult, OracleError};
use vcew_core::weighting::{weight_graph, CutSource, EdgeWeighting, PipelineError, PipelineOptions};

const EXIT_VERDICT_FAIL: u8 = 1;
const EXIT_K2: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(name = "vcew", version, about = "Vertex-coloring edge-weightings with weights {1,2,3,4}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Full certificate document.
    Structured,
    /// One-line human summary.
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a vertex-coloring edge-weighting and print the certificate.
    Weight {
        /// Graph file (canonical edge list or DIMACS).
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the exhaustive maximum cut instead of local search.
        #[arg(long)]
        exact_cut: bool,
        #[arg(long, default_value_t = DEFAULT_EXACT_CUT_THRESHOLD)]
        exact_cut_threshold: usize,
        /// Include per-stage cut history in the certificate.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Structured)]
        format: Format,
    },
    /// Check a weight file (`u v w` lines) against a graph.
    Verify {
        graph: PathBuf,
        weights: PathBuf,
    },
    /// Smallest k such that weights {1..k} admit a vertex-coloring
    /// weighting, by exhaustive enumeration.
    Mink {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_k: u32,
        /// Sample random weightings instead of enumerating; the result is
        /// only an upper bound.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a graph file: path N | cycle N | complete N | star N |
    /// grid R C | gnp N P | regularish N D.
    Gen {
        family: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weight every labeled graph on up to N_MAX vertices and summarize.
    Sweep {
        n_max: usize,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        exact_cut: bool,
        #[arg(long, default_value_t = DEFAULT_EXACT_CUT_THRESHOLD)]
        exact_cut_threshold: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Writes to stdout, exiting quietly when the reader closed the pipe.
fn emit(text: impl AsRef<str>) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_ref().as_bytes()).is_err() || stdout.flush().is_err() {
        std::process::exit(0);
    }
}

fn load_graph(path: &PathBuf) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn pipeline_options(seed: u64, exact_cut: bool, threshold: usize) -> PipelineOptions {
    PipelineOptions {
        seed,
        cut_source: if exact_cut { CutSource::Exact } else { CutSource::LocalSearch },
        exact_cut_threshold: threshold,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Weight {
            input,
            seed,
            exact_cut,
            exact_cut_threshold,
            trace,
            format,
        } => {
            let g = load_graph(&input)?;
            let opts = pipeline_options(seed, exact_cut, exact_cut_threshold);
            let cert = weight_graph(&g, &opts).map_err(|e| match e {
                PipelineError::K2Component { u, v } => fail(EXIT_K2, format!("K2 component {{{u},{v}}}")),
                PipelineError::CutTooLarge(inner) => fail(EXIT_BUDGET, inner.to_string()),
                other => fail(EXIT_INTERNAL, other.to_string()),
            })?;
            match format {
                Format::Structured => emit(cert.render(trace)),
                Format::Text => emit(format!("{}\n", cert.summary())),
            }
            if cert.verdict.ok {
                Ok(())
            } else {
                Err(fail(EXIT_INTERNAL, "verifier rejected the engine's weighting"))
            }
        }
        Command::Verify { graph, weights } => {
            let g = load_graph(&graph)?;
            let text = fs::read_to_string(&weights)
                .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", weights.display())))?;
            let map = parse_weights(&text)
                .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", weights.display())))?;
            let w = EdgeWeighting::from_map(map);
            let verdict = verify_weighting(&g, &w).map_err(|e| fail(EXIT_PARSE, e.to_string()))?;
            if verdict.ok {
                emit("ok\n");
                Ok(())
            } else {
                let degrees = w.weighted_degrees(g.vertex_count());
                let mut lines = String::new();
                for e in &verdict.conflicts {
                    let (u, v) = e.endpoints();
                    lines.push_str(&format!("conflict {u} {v} wdeg {}\n", degrees[u]));
                }
                emit(lines);
                Err(fail(
                    EXIT_VERDICT_FAIL,
                    format!("{} conflicting edge(s)", verdict.conflicts.len()),
                ))
            }
        }
        Command::Mink {
            input,
            max_k,
            sample,
            seed,
        } => {
            let g = load_graph(&input)?;
            if let Some(samples) = sample {
                let bound = sample_min_k(&g, max_k, samples, seed).map_err(oracle_failure)?;
                match bound {
                    Some(k) => emit(format!("sampled-upper-bound {k}\n")),
                    None => emit(format!("none within {samples} samples up to k={max_k}\n")),
                }
                return Ok(());
            }
            match brute_force_min_k(&g, max_k).map_err(oracle_failure)? {
                MinKResult::Found { k, witness } => {
                    let mut doc = format!("min-k {k}\n");
                    for (e, w) in witness.iter() {
                        let (u, v) = e.endpoints();
                        doc.push_str(&format!("{u} {v} {w}\n"));
                    }
                    emit(doc);
                    Ok(())
                }
                MinKResult::NotFound => {
                    emit(format!("none up to k={max_k}\n"));
                    Ok(())
                }
            }
        }
        Command::Gen {
            family,
            params,
            seed,
            out,
        } => {
            let g = generate_family(&family, &params, seed)?;
            let comment = format!("gen {family} {} seed {seed}", params.join(" "));
            let text = format_canonical(&g, Some(&comment));
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| fail(EXIT_PARSE, format!("cannot write {}: {e}", path.display())))?,
                None => emit(text),
            }
            Ok(())
        }
        Command::Sweep {
            n_max,
            jobs,
            seed,
            exact_cut,
            exact_cut_threshold,
        } => {
            if n_max == 0 || n_max > 7 {
                return Err(fail(EXIT_PARSE, "sweep supports 1 <= N_MAX <= 7"));
            }
            let opts = SweepOptions {
                jobs,
                pipeline: pipeline_options(seed, exact_cut, exact_cut_threshold),
                sabotage_first_edge: false,
            };
            let report = run_sweep(n_max, &opts);
            emit(report.render());
            if report.failures() == 0 {
                Ok(())
            } else {
                Err(fail(EXIT_INTERNAL, format!("{} failure(s)", report.failures())))
            }
        }
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::K2Component { u, v } => {
            emit("none\n");
            fail(EXIT_K2, format!("K2 component {{{u},{v}}}"))
        }
        OracleError::BudgetExceeded { bound, budget } => fail(
            EXIT_BUDGET,
            format!("enumeration bound {bound} exceeds budget {budget}"),
        ),
    }
}

fn generate_family(family: &str, params: &[String], seed: u64) -> Result<Graph, Failure> {
    let bad = |msg: String| fail(EXIT_PARSE, msg);
    let arg = |i: usize| -> Result<usize, Failure> {
        params
            .get(i)
            .ok_or_else(|| bad(format!("{family} needs parameter {}", i + 1)))?
            .parse()
            .map_err(|_| bad(format!("invalid parameter `{}`", params[i])))
    };
    match family {
        "path" => Ok(generate::path(arg(0)?)),
        "cycle" => {
            let n = arg(0)?;
            if n < 3 {
                return Err(bad("cycle needs N >= 3".into()));
            }
            Ok(generate::cycle(n))
        }
        "complete" => Ok(generate::complete(arg(0)?)),
        "star" => {
            let n = arg(0)?;
            if n == 0 {
                return Err(bad("star needs N >= 1".into()));
            }
            Ok(generate::star(n))
        }
        "grid" => Ok(generate::grid(arg(0)?, arg(1)?)),
        "gnp" => {
            let n = arg(0)?;
            let p: f64 = params
                .get(1)
                .ok_or_else(|| bad("gnp needs N and P".into()))?
                .parse()
                .map_err(|_| bad(format!("invalid probability `{}`", params[1])))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(bad(format!("probability {p} outside [0,1]")));
            }
            Ok(generate::gnp(n, p, seed))
        }
        "regularish" | "random-regular-ish" => generate::random_regularish(arg(0)?, arg(1)?, seed)
            .map_err(|e| bad(e.to_string())),
        other => Err(bad(format!(
            "unknown family `{other}` (path, cycle, complete, star, grid, gnp, regularish)"
        ))),
    }
}
