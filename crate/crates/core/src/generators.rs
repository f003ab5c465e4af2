//! Named fixtures, parametric families, exhaustive small-graph enumeration,
//! and seeded random graphs.
//!
//! Fixture labelings are frozen: tests and the command-line interface rely on
//! the exact half-edge ids, so never renumber them.

use crate::graph::{GraphError, HalfEdgeGraph, HalfEdgeId};
use rand::prelude::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// The named fixture graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FixtureName {
    /// Single vertex, three external edges.
    Vertex3,
    /// Single vertex, one loop, one external edge.
    Tadpole1,
    /// Two vertices joined by one edge, four external edges.
    HGraph,
    /// Two vertices joined by three parallel edges.
    Theta,
    /// Two loops joined by a bridge.
    Dumbbell,
    /// Triangle of three vertices, three external edges.
    Triangle3,
    /// Complete graph on four vertices.
    K4,
    /// Triangular prism: two triangles joined by a matching.
    Prism,
}

pub const ALL_FIXTURES: [FixtureName; 8] = [
    FixtureName::Vertex3,
    FixtureName::Tadpole1,
    FixtureName::HGraph,
    FixtureName::Theta,
    FixtureName::Dumbbell,
    FixtureName::Triangle3,
    FixtureName::K4,
    FixtureName::Prism,
];

impl FixtureName {
    pub fn as_str(self) -> &'static str {
        match self {
            FixtureName::Vertex3 => "vertex3",
            FixtureName::Tadpole1 => "tadpole1",
            FixtureName::HGraph => "hgraph",
            FixtureName::Theta => "theta",
            FixtureName::Dumbbell => "dumbbell",
            FixtureName::Triangle3 => "triangle3",
            FixtureName::K4 => "k4",
            FixtureName::Prism => "prism",
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_FIXTURES
            .into_iter()
            .find(|name| name.as_str() == s)
            .ok_or_else(|| format!("unknown fixture '{s}'"))
    }
}

/// Returns the named fixture with its frozen labeling.
pub fn fixture(name: FixtureName) -> HalfEdgeGraph {
    let (halfedges, vertices, pairs): (u32, Vec<Vec<HalfEdgeId>>, Vec<(HalfEdgeId, HalfEdgeId)>) =
        match name {
            FixtureName::Vertex3 => (3, vec![vec![0, 1, 2]], vec![]),
            FixtureName::Tadpole1 => (3, vec![vec![0, 1, 2]], vec![(0, 1)]),
            FixtureName::HGraph => (6, vec![vec![0, 1, 2], vec![3, 4, 5]], vec![(2, 5)]),
            FixtureName::Theta => (
                6,
                vec![vec![0, 1, 2], vec![3, 4, 5]],
                vec![(0, 3), (1, 4), (2, 5)],
            ),
            FixtureName::Dumbbell => (
                6,
                vec![vec![0, 1, 2], vec![3, 4, 5]],
                vec![(0, 1), (3, 4), (2, 5)],
            ),
            FixtureName::Triangle3 => (
                9,
                vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]],
                vec![(1, 3), (4, 6), (7, 0)],
            ),
            FixtureName::K4 => (
                12,
                vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![9, 10, 11]],
                vec![(0, 3), (1, 6), (2, 9), (4, 7), (5, 10), (8, 11)],
            ),
            FixtureName::Prism => (
                18,
                vec![
                    vec![0, 1, 2],
                    vec![3, 4, 5],
                    vec![6, 7, 8],
                    vec![9, 10, 11],
                    vec![12, 13, 14],
                    vec![15, 16, 17],
                ],
                vec![
                    (0, 3),
                    (4, 6),
                    (7, 1),
                    (9, 12),
                    (13, 15),
                    (16, 10),
                    (2, 11),
                    (5, 14),
                    (8, 17),
                ],
            ),
        };
    HalfEdgeGraph::build(halfedges, vertices, pairs).expect("fixtures are valid")
}

/// Cycle of `n` three-valent vertices, each with one external leg.
/// Vertex `i` carries half-edges `3i, 3i+1, 3i+2`: id `3i+1` pairs with
/// `3((i+1) mod n)` around the cycle and `3i+2` is the leg. `n = 1` is a
/// tadpole with its loop on `{0, 1}`; `n = 3` reproduces the triangle
/// fixture's labeling exactly.
pub fn cycle_with_legs(n: usize) -> HalfEdgeGraph {
    assert!(n >= 1, "cycle needs at least one vertex");
    let vertices: Vec<Vec<HalfEdgeId>> = (0..n)
        .map(|i| vec![3 * i as u32, 3 * i as u32 + 1, 3 * i as u32 + 2])
        .collect();
    let pairs: Vec<(HalfEdgeId, HalfEdgeId)> = (0..n)
        .map(|i| (3 * i as u32 + 1, 3 * (((i + 1) % n) as u32)))
        .collect();
    HalfEdgeGraph::build(3 * n as u32, vertices, pairs).expect("cycle family is valid")
}

/// Ladder with `n` rungs and `2n` vertices, open at both ends. Rail vertices
/// `i` (top) and `n + i` (bottom) share rung `i`; the four rail ends are
/// external. Vertex `v` carries half-edges `3v, 3v+1, 3v+2`; id `3v+2` is the
/// rung half. `n = 1` is the h-shaped graph up to relabeling.
pub fn ladder(n: usize) -> HalfEdgeGraph {
    assert!(n >= 1, "ladder needs at least one rung");
    let vertices: Vec<Vec<HalfEdgeId>> = (0..2 * n)
        .map(|v| vec![3 * v as u32, 3 * v as u32 + 1, 3 * v as u32 + 2])
        .collect();
    let mut pairs: Vec<(HalfEdgeId, HalfEdgeId)> = Vec::new();
    for i in 0..n {
        // Rung between top vertex i and bottom vertex n + i.
        pairs.push((3 * i as u32 + 2, 3 * (n + i) as u32 + 2));
    }
    for i in 0..n.saturating_sub(1) {
        // Rails: right half of vertex i to left half of vertex i + 1.
        pairs.push((3 * i as u32 + 1, 3 * (i + 1) as u32));
        pairs.push((3 * (n + i) as u32 + 1, 3 * (n + i + 1) as u32));
    }
    HalfEdgeGraph::build(6 * n as u32, vertices, pairs).expect("ladder family is valid")
}

/// One shape from the exhaustive enumeration: vertex degree sequence plus a
/// sorted multiset of internal edges over vertex indices (loops as `(v, v)`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Shape {
    degrees: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Shape {
    /// Minimum over all vertex permutations of the relabeled (degree
    /// sequence, sorted edge multiset) pair; two shapes are isomorphic
    /// exactly when their canonical forms agree. Brute force over `n!`
    /// permutations, acceptable at the enumeration bound of eight vertices.
    fn canonical(&self) -> Shape {
        let n = self.degrees.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<(Vec<usize>, Vec<(usize, usize)>)> = None;
        loop {
            let mut degrees = vec![0usize; n];
            for (i, &p) in perm.iter().enumerate() {
                degrees[p] = self.degrees[i];
            }
            let mut mapped: Vec<(usize, usize)> = self
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a], perm[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            mapped.sort_unstable();
            let candidate = (degrees, mapped);
            if best.as_ref().map_or(true, |b| candidate < *b) {
                best = Some(candidate);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let (degrees, edges) = best.expect("at least the identity permutation");
        Shape { degrees, edges }
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Enumerates all connected three-regular half-edge graphs with at most
/// `max_vertices` vertices (capped at 8), one representative per isomorphism
/// class, in a deterministic order. With `allow_external` every vertex still
/// has valence three but unpaired halves are permitted; without it all halves
/// are paired.
///
/// Representatives use the standard labeling: vertex `i` carries half-edges
/// `3i, 3i+1, 3i+2`, and each vertex's loop/edge halves are assigned in
/// ascending partner-vertex order.
pub fn enumerate_small(
    max_vertices: usize,
    allow_external: bool,
) -> Result<Vec<HalfEdgeGraph>, GraphError> {
    if max_vertices > 8 {
        return Err(GraphError::EnumerationBoundExceeded(max_vertices));
    }
    let mut result = Vec::new();
    for n in 1..=max_vertices {
        let mut seen: BTreeSet<Shape> = BTreeSet::new();
        let mut shapes: Vec<Shape> = Vec::new();
        let mut degrees = vec![0usize; n];
        let mut edges: Vec<(usize, usize)> = Vec::new();
        enumerate_shapes(
            n,
            allow_external,
            (0, 0),
            &mut degrees,
            &mut edges,
            &mut |shape: &Shape| {
                let canon = shape.canonical();
                if seen.insert(canon) {
                    shapes.push(shape.clone());
                }
            },
        );
        for shape in shapes {
            result.push(realize_shape(&shape));
        }
    }
    Ok(result)
}

/// Backtracking over edge slots `(a, b)` with `a <= b` in lexicographic
/// order, allowing multiplicity, keeping every degree at most three and the
/// final graph connected.
fn enumerate_shapes(
    n: usize,
    allow_external: bool,
    from: (usize, usize),
    degrees: &mut Vec<usize>,
    edges: &mut Vec<(usize, usize)>,
    emit: &mut impl FnMut(&Shape),
) {
    // Accept the current edge multiset when complete.
    let complete = allow_external || degrees.iter().all(|&d| d == 3);
    if complete && is_connected_shape(n, edges) {
        emit(&Shape {
            degrees: degrees.clone(),
            edges: edges.clone(),
        });
    }
    let mut slot = from;
    loop {
        let (a, b) = slot;
        if a >= n {
            break;
        }
        let cost_a = if a == b { 2 } else { 1 };
        let fits = if a == b {
            degrees[a] + 2 <= 3
        } else {
            degrees[a] < 3 && degrees[b] < 3
        };
        if fits {
            degrees[a] += cost_a;
            if a != b {
                degrees[b] += 1;
            }
            edges.push((a, b));
            enumerate_shapes(n, allow_external, slot, degrees, edges, emit);
            edges.pop();
            degrees[a] -= cost_a;
            if a != b {
                degrees[b] -= 1;
            }
        }
        slot = if b + 1 < n { (a, b + 1) } else { (a + 1, a + 1) };
    }
}

fn is_connected_shape(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut uf = crate::unionfind::UnionFind::new(n);
    for &(a, b) in edges {
        uf.union(a, b);
    }
    uf.components() == 1
}

/// Turns a shape into a half-edge graph with the standard labeling.
fn realize_shape(shape: &Shape) -> HalfEdgeGraph {
    let n = shape.degrees.len();
    let vertices: Vec<Vec<HalfEdgeId>> = (0..n)
        .map(|i| vec![3 * i as u32, 3 * i as u32 + 1, 3 * i as u32 + 2])
        .collect();
    let mut next_free: Vec<u32> = (0..n).map(|i| 3 * i as u32).collect();
    let mut sorted_edges = shape.edges.clone();
    sorted_edges.sort_unstable();
    let pairs: Vec<(HalfEdgeId, HalfEdgeId)> = sorted_edges
        .iter()
        .map(|&(a, b)| {
            let h = next_free[a];
            next_free[a] += 1;
            let k = next_free[b];
            next_free[b] += 1;
            (h, k)
        })
        .collect();
    HalfEdgeGraph::build(3 * n as u32, vertices, pairs).expect("realized shape is valid")
}

/// Options for [`random_graph`].
#[derive(Debug, Clone, Copy)]
pub struct RandomGraphOptions {
    pub vertices: usize,
    /// Per-vertex valence is drawn uniformly from this inclusive range;
    /// `(3, 3)` gives three-regular graphs.
    pub valence_range: (usize, usize),
    /// Probability that a half-edge slot stays external rather than being
    /// paired; `0.0` pairs everything possible.
    pub external_fraction: f64,
    /// Require the result to be connected (resampled until it is, with a
    /// forced-connection fallback after many attempts).
    pub connected: bool,
}

impl Default for RandomGraphOptions {
    fn default() -> Self {
        RandomGraphOptions {
            vertices: 4,
            valence_range: (3, 3),
            external_fraction: 0.25,
            connected: true,
        }
    }
}

/// Deterministic seeded random half-edge graph. Vertex valences are drawn
/// from the configured range, half-edges are numbered consecutively per
/// vertex, and the free pool is greedily paired: draw a random half, keep it
/// external with probability `external_fraction`, otherwise pair it with
/// another random free half. The same seed and options always give the same
/// graph.
pub fn random_graph(seed: u64, options: RandomGraphOptions) -> HalfEdgeGraph {
    assert!(options.vertices >= 1, "need at least one vertex");
    let (lo, hi) = options.valence_range;
    assert!(1 <= lo && lo <= hi, "bad valence range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let valences: Vec<usize> = (0..options.vertices)
        .map(|_| rng.random_range(lo..=hi))
        .collect();
    let total: usize = valences.iter().sum();
    let mut vertices: Vec<Vec<HalfEdgeId>> = Vec::with_capacity(valences.len());
    let mut next = 0u32;
    for &val in &valences {
        vertices.push((next..next + val as u32).collect());
        next += val as u32;
    }
    for _ in 0..1000 {
        let mut free: Vec<HalfEdgeId> = (0..total as u32).collect();
        let mut pairs = Vec::new();
        while free.len() >= 2 {
            let i = rng.random_range(0..free.len());
            let h = free.swap_remove(i);
            if options.external_fraction > 0.0 && rng.random_bool(options.external_fraction) {
                continue;
            }
            let j = rng.random_range(0..free.len());
            let k = free.swap_remove(j);
            pairs.push((h, k));
        }
        let graph =
            HalfEdgeGraph::build(total as u32, vertices.clone(), pairs).expect("pairing is valid");
        if !options.connected || graph.stats().components == 1 {
            return graph;
        }
    }
    // A high external fraction can starve connectivity; force a pairing that
    // chains the pool in order, which connects consecutive vertices.
    let mut free: Vec<HalfEdgeId> = (0..total as u32).collect();
    let mut pairs = Vec::new();
    while free.len() >= 2 {
        let h = free.remove(0);
        let j = rng.random_range(0..free.len());
        let k = free.swap_remove(j);
        pairs.push((h, k));
    }
    HalfEdgeGraph::build(total as u32, vertices, pairs).expect("pairing is valid")
}

/// Uniformly picks one of the enumerated small graphs. Helper for randomized
/// identity sweeps.
pub fn random_small_graph(seed: u64, max_vertices: usize, allow_external: bool) -> HalfEdgeGraph {
    let pool = enumerate_small(max_vertices, allow_external).expect("bound respected");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.as_slice()
        .choose(&mut rng)
        .expect("enumeration is never empty")
        .clone()
}
