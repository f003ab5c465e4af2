//! Simple cycles of a half-edge multigraph and pairwise vertex-disjoint
//! families of them.
//!
//! A cycle is a closed walk through internal edges visiting no vertex twice.
//! Multigraph small cases count: a tadpole is a 1-cycle and a pair of
//! parallel edges is a 2-cycle. Cycles are identified by their internal edge
//! sets, so traversal direction and starting point do not matter.

use crate::graph::{HalfEdgeGraph, HalfEdgeId, VertexId};
use std::collections::BTreeSet;

/// A simple cycle, stored as its set of internal edges (normalized pairs)
/// plus the set of vertices it visits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cycle {
    pub edges: BTreeSet<(HalfEdgeId, HalfEdgeId)>,
    pub vertices: BTreeSet<VertexId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// All half-edge ids lying on the cycle (both halves of each edge).
    pub fn half_edges(&self) -> BTreeSet<HalfEdgeId> {
        self.edges.iter().flat_map(|&(h, k)| [h, k]).collect()
    }

    pub fn shares_vertex(&self, other: &Cycle) -> bool {
        self.vertices.intersection(&other.vertices).next().is_some()
    }
}

/// Enumerates every simple cycle, deterministically ordered (sorted by edge
/// set). Each cycle appears once regardless of direction or starting vertex.
pub fn enumerate_cycles(graph: &HalfEdgeGraph) -> Vec<Cycle> {
    let vertex_of = graph.vertex_of_table();
    let n = graph.vertex_count();
    // Adjacency: per vertex the incident internal edges and their far end.
    let mut incident: Vec<Vec<((HalfEdgeId, HalfEdgeId), VertexId)>> = vec![Vec::new(); n];
    for (h, k) in graph.internal_edges() {
        let u = vertex_of[h as usize].expect("paired id is live");
        let w = vertex_of[k as usize].expect("paired id is live");
        incident[u].push(((h, k), w));
        if u != w {
            incident[w].push(((h, k), u));
        }
    }
    let mut found: BTreeSet<BTreeSet<(HalfEdgeId, HalfEdgeId)>> = BTreeSet::new();
    let mut cycles = Vec::new();
    // Pin each cycle at its least vertex: start the walk there and never
    // descend below it, so every cycle is discovered exactly once (up to
    // direction, removed by the edge-set dedup).
    for root in 0..n {
        // Tadpoles at the root are 1-cycles.
        for &((h, k), far) in &incident[root] {
            if far == root && found.insert(BTreeSet::from([(h, k)])) {
                cycles.push(Cycle {
                    edges: BTreeSet::from([(h, k)]),
                    vertices: BTreeSet::from([root]),
                });
            }
        }
        let mut path_edges: Vec<(HalfEdgeId, HalfEdgeId)> = Vec::new();
        let mut on_path = vec![false; n];
        on_path[root] = true;
        walk(
            root,
            root,
            &incident,
            &mut path_edges,
            &mut on_path,
            &mut found,
            &mut cycles,
        );
    }
    cycles.sort_by(|a, b| a.edges.cmp(&b.edges));
    cycles
}

fn walk(
    root: VertexId,
    at: VertexId,
    incident: &[Vec<((HalfEdgeId, HalfEdgeId), VertexId)>],
    path_edges: &mut Vec<(HalfEdgeId, HalfEdgeId)>,
    on_path: &mut Vec<bool>,
    found: &mut BTreeSet<BTreeSet<(HalfEdgeId, HalfEdgeId)>>,
    cycles: &mut Vec<Cycle>,
) {
    for &(edge, far) in &incident[at] {
        if far == at {
            // Tadpole mid-path never closes a longer simple cycle.
            continue;
        }
        if path_edges.last() == Some(&edge) {
            continue;
        }
        if far == root {
            // Closing the cycle needs length at least two here; a 1-cycle is
            // a tadpole, handled separately, and going straight back along
            // the same edge is excluded above. Parallel edges legitimately
            // close 2-cycles.
            if !path_edges.is_empty() || at != root {
                let mut edges: BTreeSet<_> = path_edges.iter().copied().collect();
                edges.insert(edge);
                if edges.len() >= 2 && found.insert(edges.clone()) {
                    let vertices = on_path
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| v)
                        .map(|(i, _)| i)
                        .collect();
                    cycles.push(Cycle { edges, vertices });
                }
            }
            continue;
        }
        if far < root || on_path[far] {
            continue;
        }
        on_path[far] = true;
        path_edges.push(edge);
        walk(root, far, incident, path_edges, on_path, found, cycles);
        path_edges.pop();
        on_path[far] = false;
    }
}

/// All families of pairwise vertex-disjoint cycles with exactly `size`
/// members, as index sets into `cycles`, lexicographically ordered.
pub fn disjoint_families(cycles: &[Cycle], size: usize) -> Vec<Vec<usize>> {
    let mut result = Vec::new();
    let mut current = Vec::new();
    pick_family(cycles, size, 0, &mut current, &mut result);
    result
}

fn pick_family(
    cycles: &[Cycle],
    size: usize,
    from: usize,
    current: &mut Vec<usize>,
    result: &mut Vec<Vec<usize>>,
) {
    if current.len() == size {
        result.push(current.clone());
        return;
    }
    if cycles.len() - from < size - current.len() {
        return;
    }
    for i in from..cycles.len() {
        if current.iter().any(|&j| cycles[i].shares_vertex(&cycles[j])) {
            continue;
        }
        current.push(i);
        pick_family(cycles, size, i + 1, current, result);
        current.pop();
    }
}

/// All families of pairwise vertex-disjoint cycles of every positive size,
/// each as a sorted index set.
pub fn all_disjoint_families(cycles: &[Cycle]) -> Vec<Vec<usize>> {
    let mut result = Vec::new();
    for size in 1..=cycles.len() {
        let of_size = disjoint_families(cycles, size);
        if of_size.is_empty() {
            break;
        }
        result.extend(of_size);
    }
    result
}

/// The half-edge at the same vertex as `h` that is *not* on the given cycle,
/// for a three-regular vertex lying on a cycle. On a cycle through a
/// three-valent vertex exactly two of its halves are cycle halves; this
/// returns the third.
pub fn opposite_half_edge(
    graph: &HalfEdgeGraph,
    cycle: &Cycle,
    vertex: VertexId,
) -> Option<HalfEdgeId> {
    let list = graph.vertex(vertex)?;
    let on_cycle = cycle.half_edges();
    let free: Vec<HalfEdgeId> = list
        .iter()
        .copied()
        .filter(|h| !on_cycle.contains(h))
        .collect();
    match free.as_slice() {
        [h] => Some(*h),
        _ => None,
    }
}

/// For each vertex of the cycle, the half-edge not on the cycle (one per
/// vertex when the graph is three-regular), ascending by vertex.
pub fn off_cycle_half_edges(graph: &HalfEdgeGraph, cycle: &Cycle) -> Option<Vec<HalfEdgeId>> {
    cycle
        .vertices
        .iter()
        .map(|&v| opposite_half_edge(graph, cycle, v))
        .collect()
}

/// All half-edges at `v` that do not lie on the cycle, for a vertex of any
/// valence. `None` when `v` is not on the cycle.
pub fn complement_half_edges(
    graph: &HalfEdgeGraph,
    cycle: &Cycle,
    vertex: VertexId,
) -> Option<BTreeSet<HalfEdgeId>> {
    if !cycle.vertices.contains(&vertex) {
        return None;
    }
    let list = graph.vertex(vertex)?;
    let on_cycle = cycle.half_edges();
    Some(
        list.iter()
            .copied()
            .filter(|h| !on_cycle.contains(h))
            .collect(),
    )
}

/// The number of independent cycles `ℓ(G∖S)` of the graph left after
/// deleting the half-edges in `S` (their partners dangle): internal edges
/// minus vertices plus components of the remainder.
pub fn remainder_cycle_count(graph: &HalfEdgeGraph, removed: &BTreeSet<HalfEdgeId>) -> usize {
    let vertex_of = graph.vertex_of_table();
    let mut uf = crate::unionfind::UnionFind::new(graph.vertex_count());
    let mut edges = 0usize;
    for (h, k) in graph.internal_edges() {
        if !removed.contains(&h) && !removed.contains(&k) {
            edges += 1;
            uf.union(
                vertex_of[h as usize].expect("paired id is live"),
                vertex_of[k as usize].expect("paired id is live"),
            );
        }
    }
    edges + uf.components() - graph.vertex_count()
}
