//! `corolla compute`: one graph in, one canonical polynomial out.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use corolla_core::corolla::{
    corolla, corolla_by_definition, corolla_by_recurrence, corolla_by_subsets, corolla_restricted,
};
use corolla_core::genvalence::general_corolla;
use corolla_core::universal::{universal_poly, universal_tilde};
use corolla_core::{HalfEdgeGraph, HalfEdgeId, Poly};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Alternating sum over families of disjoint cycles.
    Definition,
    /// Scan over one-per-vertex selections with acyclic remainder.
    Subsets,
    /// Memoized vertex-removal recurrence.
    Recurrence,
    /// Arbitrary-valence generalization (all-but-two selections).
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable lines.
    Text,
    /// A single machine-readable JSON document.
    Json,
}

#[derive(Args)]
pub struct ComputeArgs {
    /// Graph JSON file: {"halfedges": n, "vertices": [[ids..]..], "pairs": [[h,k]..]}.
    #[arg(long)]
    pub input: PathBuf,
    /// Algorithm; the default picks the selection scan for small graphs and
    /// the recurrence above thirteen vertices.
    #[arg(long, value_enum, conflicts_with_all = ["universal", "tilde", "restrict"])]
    pub method: Option<Method>,
    /// Compute the universal polynomial (adds the cycle-counting variable r).
    #[arg(long)]
    pub universal: bool,
    /// Compute the q-refined universal polynomial (adds the component
    /// variable q on top of r; implies --universal).
    #[arg(long)]
    pub tilde: bool,
    /// Restrict to cycles avoiding these internal edges; JSON such as [[2,5],[0,3]].
    #[arg(long, conflicts_with_all = ["universal", "tilde"])]
    pub restrict: Option<String>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Allow the selection scan on graphs with more than sixteen vertices.
    #[arg(long)]
    pub force: bool,
}

/// Reads and validates a graph JSON file; unreadable or malformed files are
/// invalid input (exit 2).
pub fn load_graph(path: &Path) -> Result<HalfEdgeGraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::invalid(format!("cannot read {}: {err}", path.display())))?;
    HalfEdgeGraph::from_json_str(&text)
        .map_err(|err| CliError::invalid(format!("invalid graph in {}: {err}", path.display())))
}

/// Runs the named (or default) plain-corolla method. Errors are
/// method/graph mismatches: a violated precondition of the chosen
/// algorithm on this particular graph (exit 3).
pub fn method_polynomial(
    graph: &HalfEdgeGraph,
    method: Option<Method>,
    force: bool,
) -> Result<Poly, CliError> {
    let mismatch = |err: corolla_core::corolla::CorollaError| CliError::mismatch(err.to_string());
    match method {
        None => corolla(graph).map_err(|err| {
            CliError::mismatch(format!("{err}; use --method general for arbitrary valences"))
        }),
        Some(Method::Definition) => corolla_by_definition(graph).map_err(mismatch),
        Some(Method::Subsets) => {
            let v = graph.vertex_count();
            if v > 16 && !force {
                return Err(CliError::mismatch(format!(
                    "the subsets scan refuses {v} vertices (3^{v} selections) without --force"
                )));
            }
            corolla_by_subsets(graph).map_err(mismatch)
        }
        Some(Method::Recurrence) => corolla_by_recurrence(graph).map_err(mismatch),
        Some(Method::General) => general_corolla(graph).map_err(mismatch),
    }
}

fn restricted_polynomial(graph: &HalfEdgeGraph, spec: &str) -> Result<Poly, CliError> {
    let edges: Vec<(HalfEdgeId, HalfEdgeId)> = serde_json::from_str(spec)
        .map_err(|err| CliError::invalid(format!("bad --restrict edge list: {err}")))?;
    corolla_restricted(graph, &edges).map_err(|err| CliError::mismatch(err.to_string()))
}

pub fn run(args: ComputeArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.input)?;
    let poly: Poly = if args.tilde {
        universal_tilde(&graph).map_err(|err| CliError::mismatch(err.to_string()))?
    } else if args.universal {
        universal_poly(&graph).map_err(|err| CliError::mismatch(err.to_string()))?
    } else if let Some(spec) = &args.restrict {
        restricted_polynomial(&graph, spec)?
    } else {
        method_polynomial(&graph, args.method, args.force)?
    };
    let line = match args.format {
        Format::Text => poly.canonical_text(),
        Format::Json => poly.to_json_string(),
    };
    write_line(args.output.as_deref(), &line)
}

/// Writes one line to the path or stdout, byte-identically either way.
pub fn write_line(output: Option<&Path>, line: &str) -> Result<(), CliError> {
    match output {
        None => {
            crate::emit(line);
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{line}\n"))
            .map_err(|err| CliError::invalid(format!("cannot write {}: {err}", path.display()))),
    }
}
