//! Backtracking scan over per-vertex half-edge selections.
//!
//! Every polynomial in this crate is a sum over selections that pick, at each
//! vertex, a fixed-size subset of its half-edges (one for the three-regular
//! polynomials, all-but-two in general). The scan walks vertices in index
//! order, maintains which half-edges are kept (not selected), and tracks the
//! structure of the remainder graph incrementally with a rollback union-find:
//! a kept edge either merges two remainder components or closes an
//! independent cycle. Callers that only want acyclic remainders prune the
//! instant a cycle closes, cutting the search space well below the full
//! product of per-vertex option counts.

use crate::graph::{HalfEdgeGraph, HalfEdgeId, VertexId};
use crate::unionfind::RollbackUnionFind;

/// One way to select half-edges at a single vertex. `chosen` and `kept`
/// partition the vertex's half-edges.
#[derive(Debug, Clone)]
pub(crate) struct VertexOption {
    pub chosen: Vec<HalfEdgeId>,
    pub kept: Vec<HalfEdgeId>,
}

/// Snapshot handed to the leaf callback for each completed selection.
pub(crate) struct Leaf<'a> {
    /// All chosen half-edges, in vertex order.
    pub chosen: &'a [HalfEdgeId],
    /// Independent cycles of the remainder graph, `ℓ(G∖T)`.
    pub remainder_cycles: u32,
    /// Connected components of the remainder graph (every vertex counts).
    pub remainder_components: usize,
    /// Chosen half-edges that are external in the graph.
    pub chosen_externals: usize,
    /// Internal edges with both half-edges chosen.
    pub chosen_internal_edges: usize,
}

/// Enumerates the cartesian product of `options[v]` over all vertices,
/// invoking `leaf` once per complete selection. With `prune_cycles` set,
/// branches whose remainder already contains a cycle are abandoned early and
/// every reported leaf has `remainder_cycles == 0`.
pub(crate) fn scan_selections(
    graph: &HalfEdgeGraph,
    options: &[Vec<VertexOption>],
    prune_cycles: bool,
    leaf: &mut impl FnMut(&Leaf),
) {
    debug_assert_eq!(options.len(), graph.vertex_count());
    let mut state = ScanState {
        vertex_of: graph.vertex_of_table(),
        partner: graph.partner_table(),
        kept: vec![false; graph.id_bound() as usize],
        chosen: Vec::new(),
        uf: RollbackUnionFind::new(graph.vertex_count()),
        cycles: 0,
        externals: 0,
        inside: 0,
    };
    descend(options, prune_cycles, 0, &mut state, leaf);
}

struct ScanState {
    vertex_of: Vec<Option<VertexId>>,
    partner: Vec<Option<HalfEdgeId>>,
    kept: Vec<bool>,
    chosen: Vec<HalfEdgeId>,
    uf: RollbackUnionFind,
    cycles: u32,
    externals: usize,
    inside: usize,
}

fn descend(
    options: &[Vec<VertexOption>],
    prune_cycles: bool,
    v: VertexId,
    state: &mut ScanState,
    leaf: &mut impl FnMut(&Leaf),
) {
    if v == options.len() {
        leaf(&Leaf {
            chosen: &state.chosen,
            remainder_cycles: state.cycles,
            remainder_components: state.uf.components(),
            chosen_externals: state.externals,
            chosen_internal_edges: state.inside,
        });
        return;
    }
    for option in &options[v] {
        let mark = state.uf.mark();
        let chosen_len = state.chosen.len();
        let mut d_cycles = 0u32;
        let mut d_ext = 0usize;
        let mut d_inside = 0usize;
        for &h in &option.kept {
            state.kept[h as usize] = true;
        }
        let mut pruned = false;
        // Account for every internal edge whose second endpoint is now
        // decided: edges to earlier vertices and edges inside v itself
        // (tadpoles, counted once via the id ordering).
        for &h in &option.kept {
            let Some(k) = state.partner[h as usize] else {
                continue;
            };
            let u = state.vertex_of[k as usize].expect("paired id is live");
            if u == v {
                if h < k && state.kept[k as usize] {
                    // A kept tadpole is a cycle of the remainder.
                    if prune_cycles {
                        pruned = true;
                        break;
                    }
                    d_cycles += 1;
                }
            } else if u < v && state.kept[k as usize] {
                if !state.uf.union(u, v) {
                    if prune_cycles {
                        pruned = true;
                        break;
                    }
                    d_cycles += 1;
                }
            }
        }
        if !pruned {
            for &h in &option.chosen {
                state.chosen.push(h);
                match state.partner[h as usize] {
                    None => d_ext += 1,
                    Some(k) => {
                        let u = state.vertex_of[k as usize].expect("paired id is live");
                        let counted = if u == v { h < k } else { u < v };
                        if counted && !state.kept[k as usize] {
                            d_inside += 1;
                        }
                    }
                }
            }
            state.cycles += d_cycles;
            state.externals += d_ext;
            state.inside += d_inside;
            descend(options, prune_cycles, v + 1, state, leaf);
            state.cycles -= d_cycles;
            state.externals -= d_ext;
            state.inside -= d_inside;
        }
        state.chosen.truncate(chosen_len);
        for &h in &option.kept {
            state.kept[h as usize] = false;
        }
        state.uf.rollback_to(mark);
    }
}

/// Options choosing exactly one half-edge per vertex (the selections of the
/// three-regular polynomials). Half-edges are tried in ascending id order.
pub(crate) fn one_per_vertex_options(graph: &HalfEdgeGraph) -> Vec<Vec<VertexOption>> {
    graph
        .vertices()
        .map(|list| {
            let mut sorted: Vec<HalfEdgeId> = list.to_vec();
            sorted.sort_unstable();
            sorted
                .iter()
                .map(|&h| VertexOption {
                    chosen: vec![h],
                    kept: sorted.iter().copied().filter(|&x| x != h).collect(),
                })
                .collect()
        })
        .collect()
}

/// Options choosing all but two half-edges per vertex (the general-valence
/// selections). At a split vertex the kept pair must take one half-edge from
/// each endpoint block. Vertices with fewer than two half-edges admit no
/// option, making every polynomial over these selections zero.
pub(crate) fn all_but_two_options(graph: &HalfEdgeGraph) -> Vec<Vec<VertexOption>> {
    (0..graph.vertex_count())
        .map(|v| {
            let mut sorted: Vec<HalfEdgeId> = graph.vertex(v).expect("index in range").to_vec();
            sorted.sort_unstable();
            if sorted.len() < 2 {
                return Vec::new();
            }
            let split = graph.split(v);
            let mut options = Vec::new();
            for i in 0..sorted.len() {
                for j in i + 1..sorted.len() {
                    let (a, b) = (sorted[i], sorted[j]);
                    if let Some(split) = split {
                        let crosses = (split.left.contains(&a) && split.right.contains(&b))
                            || (split.right.contains(&a) && split.left.contains(&b));
                        if !crosses {
                            continue;
                        }
                    }
                    options.push(VertexOption {
                        chosen: sorted
                            .iter()
                            .copied()
                            .filter(|&x| x != a && x != b)
                            .collect(),
                        kept: vec![a, b],
                    });
                }
            }
            options
        })
        .collect()
}
