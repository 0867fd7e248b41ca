//! `ghmst` command-line interface.
//!
//! Every command prints one JSON report on stdout and exits 0, or prints a
//! JSON error record on stderr and exits with 2 (invalid metric), 3 (size
//! limit), 4 (precondition or usage) or 5 (I/O or parse failure).

pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ghmst::filling::{mf_upper_bound_search, mf_with};
use ghmst::gh::{self, gh_exact_with, gh_to_simplex_with, Algorithm};
use ghmst::io::{self, Format};
use ghmst::partitions::spectrum_vector_via_partitions;
use ghmst::steiner::{smt_finite_ambient, smt_via_gh, SteinerInstance};
use ghmst::{diameter, minimum_spanning_tree, mst_spectrum, simplex, Error, FiniteMetricSpace, Limits, SimplexSpec};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "ghmst", version, about = "MST spectra and Gromov-Hausdorff distances of finite metric spaces")]
pub struct Cli {
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, global = true, value_enum)]
    pub format: Option<InputFormat>,
    /// TOML file with size limits (`max_n`, `max_exhaustive_product`, ...).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    #[arg(long, global = true)]
    pub max_exhaustive: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpectrumMethod {
    Mst,
    Partitions,
    Gh,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GhAlgorithm {
    Exhaustive,
    Bnb,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SmtMethod {
    Enumerate,
    GhSum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MfMethod {
    Lp,
    Search,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the metric axioms.
    Validate { space: PathBuf },
    /// Minimum spanning tree: edges, length, spectrum.
    Mst { space: PathBuf },
    /// The mst-spectrum by one of the three routes.
    Spectrum {
        space: PathBuf,
        #[arg(long, value_enum, default_value = "mst")]
        method: SpectrumMethod,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Exact Gromov-Hausdorff distance between two spaces.
    Gh {
        space_a: PathBuf,
        space_b: PathBuf,
        #[arg(long, value_enum, default_value = "bnb")]
        algorithm: GhAlgorithm,
    },
    /// Distance from a space to the simplex lambda * Delta_m.
    GhSimplex {
        space: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        lambda: Option<f64>,
        /// Re-verify the closed form by correspondence search.
        #[arg(long)]
        check: bool,
    },
    /// Steiner minimal tree length for terminals inside a finite ambient space.
    Smt {
        ambient: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        terminals: Vec<String>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_enum, default_value = "enumerate")]
        method: SmtMethod,
    },
    /// Minimal filling length.
    Mf {
        space: PathBuf,
        #[arg(long, value_enum, default_value = "lp")]
        method: MfMethod,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every cross-check on one space.
    Verify {
        space: PathBuf,
        #[arg(long)]
        lambda: Option<f64>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    max_exhaustive_product: Option<usize>,
    max_n: Option<usize>,
    max_partition_n: Option<usize>,
    max_topology_leaves: Option<usize>,
}

/// Defaults, then environment, then config file, then flags.
fn resolve_limits(cli: &Cli) -> Result<Limits, Error> {
    let mut limits = Limits::from_env();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let cfg: ConfigFile = toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        limits.max_exhaustive_product = cfg.max_exhaustive_product.unwrap_or(limits.max_exhaustive_product);
        limits.max_n = cfg.max_n.unwrap_or(limits.max_n);
        limits.max_partition_n = cfg.max_partition_n.unwrap_or(limits.max_partition_n);
        limits.max_topology_leaves = cfg.max_topology_leaves.unwrap_or(limits.max_topology_leaves);
    }
    if let Some(v) = cli.max_n {
        limits.max_n = v;
    }
    if let Some(v) = cli.max_exhaustive {
        limits.max_exhaustive_product = v;
    }
    Ok(limits)
}

fn read(cli: &Cli, path: &Path) -> Result<FiniteMetricSpace, Error> {
    let format = cli.format.map(|f| match f {
        InputFormat::Json => Format::Json,
        InputFormat::Csv => Format::Csv,
    });
    io::read_space(path, format)
}

fn labeled_edges(x: &FiniteMetricSpace, edges: &[ghmst::Edge]) -> Value {
    let labels = x.labels();
    edges
        .iter()
        .map(|e| json!({"u": labels[e.u], "v": labels[e.v], "length": e.length}))
        .collect()
}

fn check_lambda(lambda: Option<f64>) -> Result<(), Error> {
    match lambda {
        Some(l) if l.is_nan() || l <= 0.0 || l.is_infinite() => Err(Error::NonpositiveLambda(l)),
        _ => Ok(()),
    }
}

fn dispatch(cli: &Cli, limits: &Limits, started: Instant) -> Result<Report, Error> {
    match &cli.command {
        Command::Validate { space } => {
            let x = read(cli, space)?;
            let payload = json!({
                "valid": true,
                "size": x.size(),
                "labels": x.labels(),
                "diameter": diameter(&x),
            });
            Ok(Report::new("validate", io::digest(&x), payload, json!({}), started))
        }
        Command::Mst { space } => {
            let x = read(cli, space)?;
            let tree = minimum_spanning_tree(&x);
            let payload = json!({
                "edges": labeled_edges(&x, &tree.edges),
                "length": tree.total_length,
                "spectrum": tree.sorted_lengths(),
            });
            Ok(Report::new("mst", io::digest(&x), payload, json!({"mst": "kruskal"}), started))
        }
        Command::Spectrum { space, method, lambda } => {
            check_lambda(*lambda)?;
            let x = read(cli, space)?;
            let (values, methods) = match method {
                SpectrumMethod::Mst => (mst_spectrum(&x).0, json!({"spectrum": "mst"})),
                SpectrumMethod::Partitions => (
                    spectrum_vector_via_partitions(&x, limits)?,
                    json!({"spectrum": "partitions"}),
                ),
                SpectrumMethod::Gh => {
                    let lam = lambda.unwrap_or_else(|| verify::default_lambda(&x));
                    (gh::spectrum_via_gh(&x, lam)?.0, json!({"spectrum": "gh", "lambda": lam}))
                }
            };
            Ok(Report::new("spectrum", io::digest(&x), json!({"spectrum": values}), methods, started))
        }
        Command::Gh { space_a, space_b, algorithm } => {
            let a = read(cli, space_a)?;
            let b = read(cli, space_b)?;
            let alg = match algorithm {
                GhAlgorithm::Exhaustive => Algorithm::Exhaustive,
                GhAlgorithm::Bnb => Algorithm::BranchAndBound,
            };
            let r = gh_exact_with(&a, &b, alg, limits)?;
            let witness: Vec<[&str; 2]> = r
                .witness
                .pairs()
                .iter()
                .map(|&(i, j)| [a.labels()[i].as_str(), b.labels()[j].as_str()])
                .collect();
            let payload = json!({
                "distance": r.distance,
                "witness": witness,
                "nodes_explored": r.nodes_explored,
            });
            let digest = format!("{},{}", io::digest(&a), io::digest(&b));
            Ok(Report::new("gh", digest, payload, json!({"gh": r.method.as_str()}), started))
        }
        Command::GhSimplex { space, m, lambda, check } => {
            check_lambda(*lambda)?;
            let x = read(cli, space)?;
            let lam = lambda.unwrap_or_else(|| verify::default_lambda(&x));
            let r = gh_to_simplex_with(&x, *m, lam, limits)?;
            let mut payload = json!({"distance": r.distance, "m": m, "lambda": lam});
            if *check {
                let target = simplex(SimplexSpec::new(*m, lam)?);
                let exact = gh_exact_with(&x, &target, Algorithm::BranchAndBound, limits)?;
                let diff = (exact.distance - r.distance).abs();
                payload["check"] = json!({
                    "exact": exact.distance,
                    "abs_diff": diff,
                    "pass": diff <= 1e-12 * lam.max(1.0),
                });
            }
            Ok(Report::new("gh-simplex", io::digest(&x), payload, json!({"gh": r.method.as_str()}), started))
        }
        Command::Smt { ambient, terminals, d, lambda, method } => {
            check_lambda(*lambda)?;
            let x = read(cli, ambient)?;
            let names: Vec<&str> = terminals.iter().map(String::as_str).collect();
            let inst = SteinerInstance::from_labels(x.clone(), &names)?;
            let exact = smt_finite_ambient(&inst);
            let subset: Vec<&str> = exact.vertex_set.indices.iter().map(|&i| x.labels()[i].as_str()).collect();
            let payload = match method {
                SmtMethod::Enumerate => json!({
                    "length": exact.length,
                    "vertex_set": subset,
                    "edges": labeled_edges(&x, &exact.tree.edges),
                }),
                SmtMethod::GhSum => {
                    let d = d.unwrap_or_else(|| inst.default_d());
                    let lam = lambda.unwrap_or(if d > 0.0 { 2.0 * d } else { 1.0 });
                    json!({"length": smt_via_gh(&inst, Some(d), Some(lam))?, "d": d, "lambda": lam})
                }
            };
            let methods = json!({"smt": match method { SmtMethod::Enumerate => "enumerate", SmtMethod::GhSum => "gh-sum" }});
            Ok(Report::new("smt", io::digest(&x), payload, methods, started))
        }
        Command::Mf { space, method, iterations, seed } => {
            let x = read(cli, space)?;
            let (payload, methods) = match method {
                MfMethod::Lp => {
                    let r = mf_with(&x, limits)?;
                    let labels = x.labels();
                    let name = |v: usize| {
                        if v < labels.len() { labels[v].clone() } else { format!("#{}", v - labels.len() + 1) }
                    };
                    let edges: Vec<Value> = r
                        .topology
                        .edges
                        .iter()
                        .zip(&r.weights)
                        .map(|(&(a, b), w)| json!({"u": name(a), "v": name(b), "weight": w}))
                        .collect();
                    (json!({"length": r.length, "edges": edges}), json!({"mf": "lp"}))
                }
                MfMethod::Search => {
                    let r = mf_upper_bound_search(&x, None, *iterations, *seed)?;
                    (
                        json!({
                            "value": r.value,
                            "mst_value": r.mst_value,
                            "extension": serde_json::from_str::<Value>(&io::to_json(&r.extension)).expect("valid JSON"),
                            "d": r.d,
                            "lambda": r.lambda,
                        }),
                        json!({"mf": "search", "iterations": iterations, "seed": seed}),
                    )
                }
            };
            Ok(Report::new("mf", io::digest(&x), payload, methods, started))
        }
        Command::Verify { space, lambda } => {
            check_lambda(*lambda)?;
            let x = read(cli, space)?;
            let v = verify::verify(&x, *lambda, limits)?;
            let payload = serde_json::to_value(&v).expect("verification serializes");
            Ok(Report::new("verify", io::digest(&x), payload, json!({"gh": "branch_and_bound"}), started))
        }
    }
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Outcome {
                    code: 4,
                    stdout: String::new(),
                    stderr: report::to_string(&report::usage_record(&e.to_string()), false),
                },
            };
        }
    };
    let started = Instant::now();
    let result = resolve_limits(&cli).and_then(|limits| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            pool = pool.num_threads(n.max(1));
        }
        let pool = pool.build().map_err(|e| Error::Io(e.to_string()))?;
        pool.install(|| dispatch(&cli, &limits, started))
    });
    match result {
        Ok(r) => Outcome { code: 0, stdout: report::to_string(&r, cli.pretty), stderr: String::new() },
        Err(e) => Outcome {
            code: report::exit_code(e.category()),
            stdout: String::new(),
            stderr: report::to_string(&report::error_record(&e), cli.pretty),
        },
    }
}
