//! Corpus selection for `verify` and family selection for `gen`.

use std::str::FromStr;

use corolla_core::generators::{
    enumerate_small, fixture, random_graph, FixtureName, RandomGraphOptions, ALL_FIXTURES,
};
use corolla_core::HalfEdgeGraph;

use crate::CliError;

/// A graph with the name that keys report records and generated files.
pub struct NamedGraph {
    pub name: String,
    pub graph: HalfEdgeGraph,
}

/// Verification corpus: `fixtures`, `small:<n>` (every three-regular graph
/// with at most `n` vertices, external legs allowed), or
/// `random:<seed>:<count>` (seeded random connected three-regular graphs
/// with four to ten vertices).
pub enum Corpus {
    Fixtures,
    Small(usize),
    Random { seed: u64, count: usize },
}

impl FromStr for Corpus {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "fixtures" {
            return Ok(Corpus::Fixtures);
        }
        if let Some(rest) = s.strip_prefix("small:") {
            let n: usize = rest
                .parse()
                .map_err(|_| CliError::invalid(format!("bad corpus '{s}': small:<n> needs an integer bound")))?;
            return Ok(Corpus::Small(n));
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let (seed, count) = rest
                .split_once(':')
                .ok_or_else(|| CliError::invalid(format!("bad corpus '{s}': expected random:<seed>:<count>")))?;
            let seed: u64 = seed
                .parse()
                .map_err(|_| CliError::invalid(format!("bad corpus '{s}': seed must be an integer")))?;
            let count: usize = count
                .parse()
                .map_err(|_| CliError::invalid(format!("bad corpus '{s}': count must be an integer")))?;
            return Ok(Corpus::Random { seed, count });
        }
        Err(CliError::invalid(format!(
            "bad corpus '{s}': expected fixtures, small:<n>, or random:<seed>:<count>"
        )))
    }
}

impl Corpus {
    /// Materializes the corpus in its deterministic order.
    pub fn graphs(&self) -> Result<Vec<NamedGraph>, CliError> {
        match self {
            Corpus::Fixtures => Ok(ALL_FIXTURES
                .into_iter()
                .map(|name| NamedGraph { name: name.to_string(), graph: fixture(name) })
                .collect()),
            Corpus::Small(n) => {
                let graphs = enumerate_small(*n, true)
                    .map_err(|err| CliError::invalid(err.to_string()))?;
                Ok(graphs
                    .into_iter()
                    .enumerate()
                    .map(|(i, graph)| NamedGraph { name: format!("small{n}-{i:03}"), graph })
                    .collect())
            }
            Corpus::Random { seed, count } => Ok((0..*count)
                .map(|i| NamedGraph {
                    name: format!("random-{seed}-{i:03}"),
                    graph: random_graph(
                        seed + i as u64,
                        RandomGraphOptions {
                            vertices: 4 + (i % 7),
                            valence_range: (3, 3),
                            external_fraction: 0.25,
                            connected: true,
                        },
                    ),
                })
                .collect()),
        }
    }
}

/// Generation family: a fixture name (case-insensitive), `small:<n>` (every
/// closed three-regular graph with at most `n` vertices), or `random`.
pub enum Family {
    Fixture(FixtureName),
    Small(usize),
    Random,
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(name) = s.to_lowercase().parse::<FixtureName>() {
            return Ok(Family::Fixture(name));
        }
        if let Some(rest) = s.strip_prefix("small:") {
            let n: usize = rest
                .parse()
                .map_err(|_| CliError::invalid(format!("unknown family '{s}': small:<n> needs an integer bound")))?;
            return Ok(Family::Small(n));
        }
        if s == "random" {
            return Ok(Family::Random);
        }
        Err(CliError::invalid(format!(
            "unknown family '{s}': expected a fixture name ({}), small:<n>, or random",
            ALL_FIXTURES.map(|f| f.as_str()).join(", ")
        )))
    }
}
