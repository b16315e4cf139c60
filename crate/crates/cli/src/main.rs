use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use bglr::chain::{chain_fiber, enumerate_chain_types, enumerate_gi_types, strata_poset, ChainType};
use bglr::decorated::{enumerate_gi_graphs_over, gi_graph_to_chain_graph, DecoratedError};
use bglr::document::{parse, serialize, serialize_many, ContractionDocument, Document, DocumentError, PosetDocument};
use bglr::dot;
use bglr::modular::enumerate_stable_graphs;
use bglr::sampling::roundtrip_suite;
use bglr::stable_map::{clutch, combinatorial_type, stabilize, StableMapError};

/// Enumeration, validation and clutching tools for decorated graphs of
/// stable maps to BGL_r.
#[derive(Debug, Parser)]
#[command(name = "bglr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ListOrCount {
    /// Print only the number of items.
    #[arg(long, conflicts_with = "list")]
    count: bool,
    /// Print the items (the default).
    #[arg(long)]
    list: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List all chain-types of degree at most r.
    EnumerateChainTypes {
        #[arg(long)]
        rank: u32,
        #[command(flatten)]
        output: ListOrCount,
    },
    /// List all GI-types (I, J) of rank r.
    EnumerateGiTypes {
        #[arg(long)]
        rank: u32,
        #[command(flatten)]
        output: ListOrCount,
    },
    /// List the GI-types mapping to a chain-type.
    Fiber {
        #[arg(long)]
        rank: u32,
        /// Comma-separated positive entries; empty for the empty chain.
        #[arg(long, allow_hyphen_values = true)]
        chain: String,
    },
    /// Print the poset of boundary strata.
    Poset {
        #[arg(long)]
        rank: u32,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// List stable graphs of genus g with the given tails.
    StableGraphs {
        #[arg(long)]
        genus: u32,
        /// Comma-separated tail labels.
        #[arg(long, default_value = "")]
        tails: String,
        #[command(flatten)]
        output: ListOrCount,
    },
    /// Parse a document and run the validator of its kind.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Stabilize a stable-map model and write the contraction data.
    Stabilize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the combinatorial type (chain-graph) of a stable-map model.
    CombType {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the GI-graphs over a chain-graph.
    GiGraphs {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        output: ListOrCount,
    },
    /// Print the chain-graph associated with a GI-graph.
    ToChainGraph {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Write the stable-map model obtained by clutching along a chain-graph.
    Clutch {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export a document as a DOT digraph.
    Dot {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run the clutch/extract property suite and report pass/fail counts.
    RoundtripCheck {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        max_vertices: usize,
        /// Random cases on top of the exhaustive ones.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Argument(String),
    #[error("expected a {expected} document, got {got}")]
    WrongKind { expected: &'static str, got: &'static str },
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Decorated(#[from] DecoratedError),
    #[error(transparent)]
    StableMap(#[from] StableMapError),
    #[error("{failed} of {} checks failed; first failures: {}", passed + failed, failures.join(" | "))]
    Property {
        passed: usize,
        failed: usize,
        failures: Vec<String>,
    },
}

impl CliError {
    fn class(&self) -> &'static str {
        match self {
            CliError::Read { .. } | CliError::Write { .. } => "io-error",
            CliError::Argument(_) => "invalid-argument",
            CliError::WrongKind { .. } => "wrong-kind",
            CliError::Document(e) => e.class(),
            CliError::Decorated(DecoratedError::InvalidChainGraph(_)) => "invalid-chain-graph",
            CliError::Decorated(DecoratedError::InvalidGiGraph(_)) => "invalid-gi-graph",
            CliError::StableMap(StableMapError::Decorated(DecoratedError::InvalidChainGraph(_))) => {
                "invalid-chain-graph"
            }
            CliError::StableMap(_) => "invalid-stable-map",
            CliError::Property { .. } => "property-violation",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Document(DocumentError::Invalid { .. }) | CliError::Decorated(_) | CliError::StableMap(_) => 3,
            CliError::Property { .. } => 4,
            CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}

fn kind_name(doc: &Document) -> &'static str {
    match doc {
        Document::Graph(_) => "graph",
        Document::Modular(_) => "modular",
        Document::ChainGraph(_) => "chain-graph",
        Document::GiGraph(_) => "gi-graph",
        Document::StableMap(_) => "stable-map-model",
    }
}

fn read(path: &Path) -> Result<Document, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse(&text)?)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn wrong_kind(expected: &'static str, doc: &Document) -> CliError {
    CliError::WrongKind {
        expected,
        got: kind_name(doc),
    }
}

fn listing<T>(items: Vec<T>, output: &ListOrCount, render: impl FnOnce(Vec<T>) -> String) -> String {
    if output.count {
        format!("{}\n", items.len())
    } else {
        render(items)
    }
}

fn lines<T: ToString>(items: Vec<T>) -> String {
    items.iter().map(|x| format!("{}\n", x.to_string())).collect()
}

fn parse_chain(text: &str) -> Result<ChainType, CliError> {
    let entries = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u32>()
                .map_err(|e| CliError::Argument(format!("bad chain entry {s:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ChainType::new(entries).map_err(|e| CliError::Argument(e.to_string()))
}

fn run(command: Command) -> Result<String, CliError> {
    Ok(match command {
        Command::EnumerateChainTypes { rank, output } => listing(enumerate_chain_types(rank), &output, lines),
        Command::EnumerateGiTypes { rank, output } => listing(enumerate_gi_types(rank), &output, lines),
        Command::Fiber { rank, chain } => {
            let d = parse_chain(&chain)?;
            lines(chain_fiber(&d, rank).map_err(|e| CliError::Argument(e.to_string()))?)
        }
        Command::Poset { rank, dot, json } => {
            if rank == 0 {
                return Err(CliError::Argument("rank must be positive".into()));
            }
            let poset = strata_poset(rank);
            if dot {
                dot::poset_to_dot(&poset)
            } else if json {
                PosetDocument::from_poset(&poset).to_json()
            } else {
                let mut out = String::new();
                for (k, t) in poset.nodes().iter().enumerate() {
                    out.push_str(&format!("{k} {t} codim={}\n", t.codim()));
                }
                for (a, b) in poset.covers() {
                    out.push_str(&format!("{a} < {b}\n"));
                }
                out
            }
        }
        Command::StableGraphs { genus, tails, output } => {
            let labels: Vec<String> = tails
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            let mut unique = labels.clone();
            unique.sort();
            unique.dedup();
            if unique.len() != labels.len() {
                return Err(CliError::Argument("tail labels must be distinct".into()));
            }
            listing(enumerate_stable_graphs(genus, &labels), &output, |graphs| {
                serialize_many(&graphs.into_iter().map(Document::Modular).collect::<Vec<_>>())
            })
        }
        Command::Validate { input } => {
            let doc = read(&input)?;
            format!("valid {}\n", kind_name(&doc))
        }
        Command::Stabilize { input, out } => match read(&input)? {
            Document::StableMap(m) => {
                write(&out, &ContractionDocument::from_contraction(&stabilize(&m)?).to_json())?;
                String::new()
            }
            other => return Err(wrong_kind("stable-map-model", &other)),
        },
        Command::CombType { input, out } => match read(&input)? {
            Document::StableMap(m) => {
                write(&out, &serialize(&Document::ChainGraph(combinatorial_type(&m)?)))?;
                String::new()
            }
            other => return Err(wrong_kind("stable-map-model", &other)),
        },
        Command::GiGraphs { input, output } => match read(&input)? {
            Document::ChainGraph(c) => listing(enumerate_gi_graphs_over(&c)?, &output, |graphs| {
                serialize_many(&graphs.into_iter().map(Document::GiGraph).collect::<Vec<_>>())
            }),
            other => return Err(wrong_kind("chain-graph", &other)),
        },
        Command::ToChainGraph { input } => match read(&input)? {
            Document::GiGraph(g) => serialize(&Document::ChainGraph(gi_graph_to_chain_graph(&g)?)),
            other => return Err(wrong_kind("gi-graph", &other)),
        },
        Command::Clutch { input, out } => match read(&input)? {
            Document::ChainGraph(c) => {
                write(&out, &serialize(&Document::StableMap(clutch(&c)?)))?;
                String::new()
            }
            other => return Err(wrong_kind("chain-graph", &other)),
        },
        Command::Dot { input } => match read(&input)? {
            Document::Modular(m) => dot::modular_to_dot(&m),
            Document::ChainGraph(c) => dot::chain_graph_to_dot(&c),
            Document::GiGraph(g) => dot::gi_graph_to_dot(&g),
            Document::StableMap(m) => dot::model_to_dot(&m),
            other => return Err(wrong_kind("modular, chain-graph, gi-graph or stable-map-model", &other)),
        },
        Command::RoundtripCheck {
            rank,
            max_vertices,
            samples,
            seed,
        } => {
            if rank == 0 || max_vertices == 0 {
                return Err(CliError::Argument("rank and max-vertices must be positive".into()));
            }
            let report = roundtrip_suite(rank, max_vertices, samples, seed);
            if report.failed > 0 {
                return Err(CliError::Property {
                    passed: report.passed,
                    failed: report.failed,
                    failures: report.failures,
                });
            }
            format!("passed {}\nfailed 0\n", report.passed)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", e.class());
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
