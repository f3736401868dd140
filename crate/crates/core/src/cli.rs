//! Command-line front end.
//!
//! Exit codes: 0 success, 1 semantic failure (rejected certificate,
//! exhausted search, missing sums form, method mismatch), 2 malformed input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::exact_bounds;
use crate::certificate::{compress, verify, CompressedPoset};
use crate::constructions::{as_shifted_sums, sums_construction, trivial_construction};
use crate::poset::Poset;
use crate::profile::{max_chain, profile_enumerate, profile_matrix, ChainProfile};
use crate::search::{SearchStatus, Searcher, DEFAULT_CLASS_BUDGET};

const PROFILE_HELP: &str = "Profiles are comma-separated positive integers; `5x2` means two copies of 5 \
                            (so `2,3x2,5x2` is the multiset {2,3,3,5,5}).";

#[derive(Debug, Parser)]
#[command(
    name = "chainprofile",
    version,
    about = "Posets with a prescribed multiset of maximal-chain cardinalities",
    after_help = PROFILE_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the maximal-chain profile of a poset file as `cardinality:multiplicity` pairs.
    Profile {
        poset: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Matrix)]
        method: Method,
        /// Maximal-chain budget for the enumeration method.
        #[arg(long, default_value_t = 10_000_000)]
        path_budget: u64,
    },
    /// Print lower/upper bounds and the exact minimum when a known rule applies.
    Bounds { profile: String },
    /// Write a witness poset for a profile.
    Construct {
        kind: ConstructKind,
        profile: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find a minimum-size poset by exhaustive search.
    Search {
        profile: String,
        #[arg(long)]
        size_cap: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
        class_budget: u64,
        /// Write the witness here instead of after the summary on stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the compressed certificate of a poset, built around its maximum chain.
    Compress {
        poset: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate against a profile and a size bound.
    Verify { cert: PathBuf, profile: String, t: u64 },
    /// Emit the Hasse diagram as a Graphviz digraph.
    ExportDot {
        poset: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Matrix,
    Enumerate,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructKind {
    Trivial,
    Sums,
}

enum Failure {
    Semantic(String),
    Malformed(String),
}

type Outcome = Result<(), Failure>;

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Semantic(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(Failure::Malformed(msg)) => {
            let _ = writeln!(err, "{msg}");
            2
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Profile {
            poset,
            method,
            path_budget,
        } => {
            let poset = read_poset(&poset)?;
            let matrix = || profile_matrix(&poset).map_err(semantic);
            let enumerate = || profile_enumerate(&poset, path_budget).map_err(semantic);
            let profile = match method {
                Method::Matrix => matrix()?,
                Method::Enumerate => enumerate()?,
                Method::Both => {
                    let (a, b) = (matrix()?, enumerate()?);
                    if a != b {
                        return Err(Failure::Semantic(format!(
                            "methods disagree: matrix {a}, enumerate {b}"
                        )));
                    }
                    a
                }
            };
            emit(out, None, &format!("{profile}\n"))
        }
        Command::Bounds { profile } => {
            let profile = parse_profile(&profile)?;
            emit(out, None, &format!("{}\n", exact_bounds(&profile)))
        }
        Command::Construct { kind, profile, output } => {
            let profile = parse_profile(&profile)?;
            let poset = match kind {
                ConstructKind::Trivial => trivial_construction(&profile).map_err(semantic)?,
                ConstructKind::Sums => {
                    let d = as_shifted_sums(&profile)
                        .ok_or_else(|| Failure::Semantic(format!("{profile} is not a shifted subset-sums profile")))?;
                    sums_construction(&d)
                }
            };
            emit(out, output.as_deref(), &poset.to_text())
        }
        Command::Search {
            profile,
            size_cap,
            class_budget,
            output,
        } => {
            let profile = parse_profile(&profile)?;
            let cap = size_cap.unwrap_or_else(|| {
                use num_traits::ToPrimitive;
                crate::bounds::upper_bound(&profile).to_usize().unwrap_or(usize::MAX)
            });
            let result = Searcher::new()
                .minimal_poset(&profile, cap, class_budget)
                .map_err(semantic)?;
            let mut summary = format!("status={}", result.status);
            if let Some(size) = result.size {
                summary.push_str(&format!(" size={size}"));
            }
            summary.push_str(&format!(" explored={}\n", result.explored));
            emit(out, None, &summary)?;
            match (result.status, result.witness) {
                (SearchStatus::Exact, Some(witness)) => emit(out, output.as_deref(), &witness.to_text()),
                _ => Err(Failure::Semantic(format!(
                    "no witness: search ended with status {}",
                    result.status
                ))),
            }
        }
        Command::Compress { poset, output } => {
            let poset = read_poset(&poset)?;
            let chain = max_chain(&poset).map_err(semantic)?;
            let cert = compress(&poset, &chain).map_err(semantic)?;
            emit(out, output.as_deref(), &cert.to_text())
        }
        Command::Verify { cert, profile, t } => {
            let text = read(&cert)?;
            let cert = CompressedPoset::parse(&text).map_err(|e| malformed(&cert, e))?;
            let profile = parse_profile(&profile)?;
            match verify(&cert, &profile, t) {
                Ok(()) => emit(out, None, "verified\n"),
                Err(reason) => Err(Failure::Semantic(format!("rejected: {reason}"))),
            }
        }
        Command::ExportDot { poset, output } => {
            let poset = read_poset(&poset)?;
            emit(out, output.as_deref(), &to_dot(&poset))
        }
    }
}

/// Graphviz digraph: one node per element, one arc per cover edge, drawn
/// bottom to top.
pub fn to_dot(poset: &Poset) -> String {
    let mut dot = String::from("digraph hasse {\n    rankdir=BT;\n    node [shape=circle];\n");
    for v in 0..poset.len() {
        dot.push_str(&format!("    n{v} [label=\"{v}\"];\n"));
    }
    for &(i, j) in poset.cover_edges() {
        dot.push_str(&format!("    n{i} -> n{j};\n"));
    }
    dot.push_str("}\n");
    dot
}

fn semantic(e: impl std::fmt::Display) -> Failure {
    Failure::Semantic(e.to_string())
}

fn malformed(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Malformed(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| malformed(path, e))
}

fn read_poset(path: &Path) -> Result<Poset, Failure> {
    Poset::parse(&read(path)?).map_err(|e| malformed(path, e))
}

fn parse_profile(text: &str) -> Result<ChainProfile, Failure> {
    text.parse()
        .map_err(|e| Failure::Malformed(format!("profile `{text}`: {e}")))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Semantic(format!("cannot write {}: {e}", path.display())))
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Semantic(format!("cannot write output: {e}"))),
    }
}
