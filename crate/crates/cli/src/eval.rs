//! `corolla eval`: exact rational evaluation of a graph's polynomial.
//!
//! By default evaluates the q-refined universal polynomial, whose r = 0,
//! q = 1 specialization (the flag defaults) is the plain corolla
//! polynomial; `--method` instead evaluates that method's polynomial,
//! which has no r or q dependence.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use corolla_core::universal::universal_tilde;
use corolla_core::{HalfEdgeId, Int, Poly, Rat};

use crate::compute::{load_graph, method_polynomial, Method};
use crate::CliError;

#[derive(Args)]
pub struct EvalArgs {
    /// Graph JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// JSON object mapping every half-edge id to a rational,
    /// e.g. {"0": 1, "1": "2/3", "2": "-3"}.
    #[arg(long)]
    pub assign: String,
    /// Value for r; the default 0 keeps only acyclic selections.
    #[arg(long, default_value = "0", conflicts_with = "method")]
    pub r: String,
    /// Value for q; the default 1 ignores the component grading.
    #[arg(long, default_value = "1", conflicts_with = "method")]
    pub q: String,
    /// Evaluate this method's polynomial instead of the universal one.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
}

/// Parses a rational from a JSON string ("2/3", "-3") or integer literal.
fn parse_rational(text: &str, what: &str) -> Result<Rat, CliError> {
    text.trim()
        .parse::<Rat>()
        .map_err(|err| CliError::invalid(format!("bad {what} '{text}': {err}")))
}

fn parse_assignment(spec: &str) -> Result<BTreeMap<HalfEdgeId, Rat>, CliError> {
    let raw: BTreeMap<String, serde_json::Value> = serde_json::from_str(spec)
        .map_err(|err| CliError::invalid(format!("bad --assign JSON: {err}")))?;
    let mut out = BTreeMap::new();
    for (key, value) in raw {
        let id: HalfEdgeId = key
            .parse()
            .map_err(|_| CliError::invalid(format!("bad --assign key '{key}': not a half-edge id")))?;
        let rational = match &value {
            serde_json::Value::String(s) => parse_rational(s, "assignment value")?,
            serde_json::Value::Number(n) => parse_rational(&n.to_string(), "assignment value")?,
            other => {
                return Err(CliError::invalid(format!(
                    "bad --assign value for id {id}: {other} is not a rational"
                )))
            }
        };
        out.insert(id, rational);
    }
    Ok(out)
}

pub fn run(args: EvalArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.input)?;
    let assignment = parse_assignment(&args.assign)?;
    let missing: Vec<HalfEdgeId> = graph
        .half_edges()
        .into_iter()
        .filter(|h| !assignment.contains_key(h))
        .collect();
    if !missing.is_empty() {
        return Err(CliError::mismatch(format!(
            "missing assignment for half-edge id(s) {}",
            missing.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    let poly: Poly = match args.method {
        Some(method) => method_polynomial(&graph, Some(method), false)?,
        None => universal_tilde(&graph).map_err(|err| {
            CliError::mismatch(format!("{err}; use --method general for arbitrary valences"))
        })?,
    };
    let r_value = parse_rational(&args.r, "--r value")?;
    let q_value = parse_rational(&args.q, "--q value")?;
    let value: Rat = poly.evaluate(
        |h| assignment.get(&h).cloned().unwrap_or_else(|| Rat::from_integer(Int::from(0))),
        &r_value,
        &q_value,
    );
    crate::emit(&value.to_string());
    Ok(())
}
