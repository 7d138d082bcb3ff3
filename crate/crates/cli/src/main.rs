//! `gog`: decide hierarchical hyperbolicity of graphs of free and infinite
//! dihedral groups with cyclic edge groups.
//!
//! Every command prints one JSON object. Exit status 0 for any verdict, 2
//! for unreadable or invalid input, 1 for internal failures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gog_core::balance::edge_balanced;
use gog_core::certify::distortion_certificate;
use gog_core::conj_graph::{build_conjugacy_graph, class_of, edge_classes};
use gog_core::model::GraphOfGroups;
use gog_core::parametrize::{hhg_verdict, Verdict};
use gog_core::text::{parse, parse_word, serialize};
use gog_core::word::{britton_reduce, is_trivial, to_path_form};
use gog_core::{par, report};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "gog", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a graph file.
    Check { file: PathBuf },
    /// Britton-reduce a word.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        word: String,
        /// Vertex the word starts at (default: least vertex name).
        #[arg(long)]
        base: Option<String>,
    },
    /// Balancedness of every edge, or of one.
    Balance {
        file: PathBuf,
        #[arg(long)]
        edge: Option<String>,
    },
    /// Conjugacy graph of the class of an edge.
    Conjgraph {
        file: PathBuf,
        #[arg(long = "class-of")]
        class_of: String,
        /// Also write the conjugacy graph in input format to this path.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Parametrizations of all conjugacy graphs, or a witness.
    Parametrize { file: PathBuf },
    /// HHG or NotHHG with certificates.
    Verdict { file: PathBuf },
    /// An almost Baumslag–Solitar witness.
    Witness { file: PathBuf },
    /// Distortion table of the witness up to depth K.
    Distortion {
        file: PathBuf,
        #[arg(long)]
        depth: u32,
    },
}

enum Failure {
    Input(Value),
    Internal(String),
}

fn input_error(msg: impl ToString) -> Failure {
    Failure::Input(report::error(&msg.to_string(), None))
}

fn load(path: &Path) -> Result<GraphOfGroups, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::Input(report::text_error(&e)))
}

fn edge_by_name(g: &GraphOfGroups, name: &str) -> Result<usize, Failure> {
    g.edge_index(name).ok_or_else(|| input_error(format!("unknown edge {name}")))
}

fn verdict(g: &GraphOfGroups) -> Result<Verdict, Failure> {
    hhg_verdict(g).map_err(|e| Failure::Internal(e.to_string()))
}

fn run(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Check { file } => Ok(report::check(&load(&file)?)),
        Command::Reduce { file, word, base } => {
            let g = load(&file)?;
            let base = match base {
                Some(v) => g.vertex_index(&v).ok_or_else(|| input_error(format!("unknown vertex {v}")))?,
                None => 0,
            };
            let letters = parse_word(&word).map_err(|e| Failure::Input(report::text_error(&e)))?;
            let w = to_path_form(&g, &letters, base).map_err(input_error)?;
            Ok(serde_json::json!({
                "input": word,
                "reduced": britton_reduce(&g, &w).render(&g),
                "trivial": is_trivial(&g, &w),
            }))
        }
        Command::Balance { file, edge } => {
            let g = load(&file)?;
            let edges: Vec<usize> = match edge {
                Some(name) => vec![edge_by_name(&g, &name)?],
                None => (0..g.edges().len()).collect(),
            };
            let verdicts = par::map_slice(&edges, |&e| (e, edge_balanced(&g, e)));
            Ok(report::balance(&g, &verdicts))
        }
        Command::Conjgraph { file, class_of: name, emit } => {
            let g = load(&file)?;
            let e = edge_by_name(&g, &name)?;
            let classes = edge_classes(&g);
            let cg = build_conjugacy_graph(&g, &classes, class_of(&classes, e));
            if let Some(path) = emit {
                std::fs::write(&path, serialize(&cg.delta))
                    .map_err(|err| Failure::Internal(format!("{}: {err}", path.display())))?;
            }
            Ok(report::conjugacy_graph(&g, &cg))
        }
        Command::Parametrize { file } => {
            let g = load(&file)?;
            Ok(report::verdict(&g, &verdict(&g)?, true))
        }
        Command::Verdict { file } => {
            let g = load(&file)?;
            Ok(report::verdict(&g, &verdict(&g)?, false))
        }
        Command::Witness { file } => {
            let g = load(&file)?;
            Ok(match verdict(&g)? {
                Verdict::NotHhg { edge, witness, .. } => report::witness(&g, edge, &witness),
                Verdict::Hhg { .. } => report::no_witness(),
            })
        }
        Command::Distortion { file, depth } => {
            let g = load(&file)?;
            Ok(match verdict(&g)? {
                Verdict::NotHhg { edge, witness, .. } => {
                    let c = distortion_certificate(&g, &witness, depth);
                    report::distortion(&g, edge, &witness, &c)
                }
                Verdict::Hhg { .. } => report::no_witness(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(v)) => {
            println!("{v}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            println!("{}", report::error(&msg, None));
            ExitCode::from(1)
        }
    }
}
