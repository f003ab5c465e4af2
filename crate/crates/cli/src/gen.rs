//! `corolla gen`: write graphs as JSON files with deterministic names.

use std::path::PathBuf;

use clap::Args;
use corolla_core::generators::{enumerate_small, fixture, random_graph, RandomGraphOptions};
use corolla_core::HalfEdgeGraph;

use crate::corpus::Family;
use crate::CliError;

#[derive(Args)]
pub struct GenArgs {
    /// Family: a fixture name (vertex3, tadpole1, hgraph, theta, dumbbell,
    /// triangle3, k4, prism), small:<n> for every closed three-regular graph
    /// with at most n vertices, or random.
    #[arg(long)]
    pub family: String,
    /// Seed for the random family; graph i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// How many random graphs to write.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Directory for the emitted files, created if absent.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

pub fn run(args: GenArgs) -> Result<(), CliError> {
    let family: Family = args.family.parse()?;
    let files: Vec<(String, HalfEdgeGraph)> = match family {
        Family::Fixture(name) => vec![(format!("{name}.json"), fixture(name))],
        Family::Small(n) => enumerate_small(n, false)
            .map_err(|err| CliError::invalid(err.to_string()))?
            .into_iter()
            .enumerate()
            .map(|(i, graph)| (format!("small{n}-{i:03}.json"), graph))
            .collect(),
        Family::Random => (0..args.count)
            .map(|i| {
                let graph = random_graph(
                    args.seed + i as u64,
                    RandomGraphOptions {
                        vertices: 4 + (i % 5),
                        valence_range: (3, 3),
                        external_fraction: 0.25,
                        connected: true,
                    },
                );
                (format!("random-{}-{i:03}.json", args.seed), graph)
            })
            .collect(),
    };
    std::fs::create_dir_all(&args.out_dir).map_err(|err| {
        CliError::invalid(format!("cannot create {}: {err}", args.out_dir.display()))
    })?;
    for (name, graph) in files {
        let path = args.out_dir.join(&name);
        let body = format!("{}\n", graph.to_json_string_pretty());
        std::fs::write(&path, body)
            .map_err(|err| CliError::invalid(format!("cannot write {}: {err}", path.display())))?;
        crate::emit(&path.display().to_string());
    }
    Ok(())
}
