//! The corolla polynomial of three-regular half-edge graphs, by three
//! independent algorithms, plus the edge-restricted variant and the
//! component statistic `c(T)`.
//!
//! The three algorithms are deliberately algorithmically unrelated — an
//! alternating sum over disjoint cycle families, a pruned scan over
//! one-per-vertex selections with acyclic remainder, and a memoized
//! vertex-removal recurrence — so their agreement is strong evidence of
//! correctness.

use crate::cycles::{self, Cycle};
use crate::graph::{GraphError, HalfEdgeGraph, HalfEdgeId, VertexId};
use crate::poly::{Monomial, PolyError, Polynomial, Scalar};
use crate::selscan::{one_per_vertex_options, scan_selections};
use crate::unionfind::UnionFind;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorollaError {
    #[error("vertex {vertex} has {valence} half-edges; this polynomial needs exactly three per vertex")]
    NotThreeRegular { vertex: VertexId, valence: usize },
    #[error("{states}^{cycles} cycle colorings exceed the enumeration limit of {limit}")]
    ColoringGuardExceeded { states: u64, cycles: usize, limit: u64 },
    #[error("vertex {vertex} has valence {valence}; the pair sum needs at least two half-edges")]
    PairSumUndefined { vertex: VertexId, valence: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub(crate) fn ensure_three_regular(graph: &HalfEdgeGraph) -> Result<(), CorollaError> {
    match graph.non_three_regular_vertex() {
        None => Ok(()),
        Some((vertex, valence)) => Err(CorollaError::NotThreeRegular { vertex, valence }),
    }
}

/// `D_v`: the sum of the half-edge variables at vertex `v`.
pub fn vertex_sum<C: Scalar>(
    graph: &HalfEdgeGraph,
    v: VertexId,
) -> Result<Polynomial<C>, CorollaError> {
    let list = graph
        .vertex(v)
        .ok_or(GraphError::InvalidVertex(v))?;
    Ok(Polynomial::var_sum(list.iter().copied()))
}

/// Vertex subsets covered by a family of cycles (given by indices).
fn covered_vertices(cycles: &[Cycle], family: &[usize]) -> BTreeSet<VertexId> {
    family
        .iter()
        .flat_map(|&i| cycles[i].vertices.iter().copied())
        .collect()
}

/// The corolla polynomial as the alternating sum over pairwise disjoint
/// cycle families: the empty family contributes the product of all vertex
/// sums, and a family of `j` cycles contributes with sign `(−1)^j` the
/// product, over each cycle vertex, of the one incident half-edge variable
/// off the cycle, times the vertex sums of uncovered vertices.
pub fn corolla_by_definition<C: Scalar>(
    graph: &HalfEdgeGraph,
) -> Result<Polynomial<C>, CorollaError> {
    ensure_three_regular(graph)?;
    let all_cycles = cycles::enumerate_cycles(graph);
    alternating_family_sum(graph, &all_cycles, &(0..graph.vertex_count()).collect())
}

/// Shared alternating-sum core: families drawn from `usable` cycles, vertex
/// sums over `active` vertices not covered by the family.
fn alternating_family_sum<C: Scalar>(
    graph: &HalfEdgeGraph,
    usable: &[Cycle],
    active: &BTreeSet<VertexId>,
) -> Result<Polynomial<C>, CorollaError> {
    let mut out = Polynomial::zero();
    for size in 0..=usable.len() {
        let families = cycles::disjoint_families(usable, size);
        if families.is_empty() {
            break;
        }
        for family in families {
            let mut term = Polynomial::one();
            for &ci in &family {
                let cycle = &usable[ci];
                for &v in &cycle.vertices {
                    let off = cycles::opposite_half_edge(graph, cycle, v).ok_or(
                        CorollaError::NotThreeRegular {
                            vertex: v,
                            valence: graph.valence(v).unwrap_or(0),
                        },
                    )?;
                    term = term
                        .try_mul(&Polynomial::var(off))
                        .expect("cycle vertices are distinct");
                }
            }
            let covered = covered_vertices(usable, &family);
            for &v in active.difference(&covered) {
                term = term
                    .try_mul(&vertex_sum(graph, v)?)
                    .expect("vertex supports are disjoint");
            }
            if size % 2 == 1 {
                term = term.negate();
            }
            out += term;
        }
    }
    Ok(out)
}

/// The corolla polynomial as the sum, over selections of one half-edge per
/// vertex whose removal leaves an acyclic remainder, of the product of the
/// selected variables. Every coefficient is one.
pub fn corolla_by_subsets<C: Scalar>(
    graph: &HalfEdgeGraph,
) -> Result<Polynomial<C>, CorollaError> {
    ensure_three_regular(graph)?;
    let options = one_per_vertex_options(graph);
    let mut out = Polynomial::zero();
    scan_selections(graph, &options, true, &mut |leaf| {
        out.add_term(Monomial::from_vars(leaf.chosen.iter().copied()), C::one());
    });
    Ok(out)
}

/// The admissible selections themselves (the set usually written 𝒯): one
/// half-edge per vertex, acyclic remainder, in scan order.
pub fn admissible_selections(
    graph: &HalfEdgeGraph,
) -> Result<Vec<BTreeSet<HalfEdgeId>>, CorollaError> {
    ensure_three_regular(graph)?;
    let options = one_per_vertex_options(graph);
    let mut out = Vec::new();
    scan_selections(graph, &options, true, &mut |leaf| {
        out.push(leaf.chosen.iter().copied().collect());
    });
    Ok(out)
}

/// How the recurrence picks the vertex to decompose at. Any rule gives the
/// same polynomial; two are provided so tests can vary the decomposition
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Lowest-index vertex among those with the fewest external half-edges.
    #[default]
    FewestExternals,
    /// Highest-index vertex among those with the most external half-edges.
    MostExternals,
}

/// The corolla polynomial by the vertex-removal recurrence with
/// memoization, using the default pivot rule.
pub fn corolla_by_recurrence<C: Scalar>(
    graph: &HalfEdgeGraph,
) -> Result<Polynomial<C>, CorollaError> {
    corolla_by_recurrence_with_pivot(graph, PivotRule::default())
}

/// The recurrence with an explicit pivot rule.
pub fn corolla_by_recurrence_with_pivot<C: Scalar>(
    graph: &HalfEdgeGraph,
    rule: PivotRule,
) -> Result<Polynomial<C>, CorollaError> {
    ensure_three_regular(graph)?;
    let mut memo: HashMap<Vec<u8>, Polynomial<C>> = HashMap::new();
    recurrence(graph, rule, &mut memo)
}

fn pick_pivot(graph: &HalfEdgeGraph, rule: PivotRule) -> VertexId {
    let externals_at = |v: VertexId| {
        graph
            .vertex(v)
            .expect("index in range")
            .iter()
            .filter(|&&h| graph.partner(h).is_none())
            .count()
    };
    let indices = 0..graph.vertex_count();
    match rule {
        PivotRule::FewestExternals => indices
            .min_by_key(|&v| (externals_at(v), v))
            .expect("graph has a vertex"),
        PivotRule::MostExternals => indices
            .max_by_key(|&v| (externals_at(v), v))
            .expect("graph has a vertex"),
    }
}

fn recurrence<C: Scalar>(
    graph: &HalfEdgeGraph,
    rule: PivotRule,
    memo: &mut HashMap<Vec<u8>, Polynomial<C>>,
) -> Result<Polynomial<C>, CorollaError> {
    if graph.vertex_count() == 0 {
        return Ok(Polynomial::one());
    }
    let key = graph.canonical_key();
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let components = graph.component_subgraphs();
    let result = if components.len() > 1 {
        // The polynomial is multiplicative over disjoint unions.
        let mut product = Polynomial::one();
        for component in components {
            product = product
                .try_mul(&recurrence(&component, rule, memo)?)
                .expect("components have disjoint half-edges");
        }
        product
    } else {
        decompose_at(graph, pick_pivot(graph, rule), rule, memo)?
    };
    memo.insert(key, result.clone());
    Ok(result)
}

/// One step of the recurrence at vertex `v`. The cases follow the selection
/// semantics: each choice of the half-edge selected at `v` reduces the
/// acyclicity condition to a smaller graph.
fn decompose_at<C: Scalar>(
    graph: &HalfEdgeGraph,
    v: VertexId,
    rule: PivotRule,
    memo: &mut HashMap<Vec<u8>, Polynomial<C>>,
) -> Result<Polynomial<C>, CorollaError> {
    let halves: Vec<HalfEdgeId> = graph.vertex(v).expect("index in range").to_vec();
    let removed = graph.remove_vertex(v)?;

    // A tadpole at v: selecting the third half-edge would keep the loop (a
    // cycle), so only the loop halves contribute, each freeing the rest.
    let tadpole = halves.iter().copied().find(|&h| {
        graph
            .partner(h)
            .is_some_and(|k| halves.contains(&k))
    });
    if let Some(l1) = tadpole {
        let l2 = graph.partner(l1).expect("tadpole half is paired");
        let loop_sum: Polynomial<C> = Polynomial::var_sum([l1, l2]);
        return Ok(recurrence(&removed, rule, memo)?
            .try_mul(&loop_sum)
            .expect("removed vertex variables are fresh"));
    }

    let externals: Vec<HalfEdgeId> = halves
        .iter()
        .copied()
        .filter(|&h| graph.partner(h).is_none())
        .collect();
    let internals: Vec<HalfEdgeId> = halves
        .iter()
        .copied()
        .filter(|&h| graph.partner(h).is_some())
        .collect();

    match internals.len() {
        // At most one internal edge: whichever half-edge is selected at v,
        // the rest of v dangles without closing a cycle, so v contributes its
        // whole vertex sum as a free factor.
        0 | 1 => {
            let d_v: Polynomial<C> = Polynomial::var_sum(halves.iter().copied());
            Ok(recurrence(&removed, rule, memo)?
                .try_mul(&d_v)
                .expect("removed vertex variables are fresh"))
        }
        // One external x, two internal with partners p and q: selecting x
        // keeps both internal edges, threading a path through v — the same
        // constraint as a direct edge {p,q}; selecting an internal half-edge
        // cuts its edge and v hangs off the other.
        2 => {
            let x = externals[0];
            let (p, q) = (
                graph.partner(internals[0]).expect("internal half is paired"),
                graph.partner(internals[1]).expect("internal half is paired"),
            );
            let threaded = removed.join_external(p, q)?;
            let through: Polynomial<C> = recurrence(&threaded, rule, memo)?
                .try_mul(&Polynomial::var(x))
                .expect("x was removed with v");
            let cut_sum: Polynomial<C> = Polynomial::var_sum(internals.iter().copied());
            let cut = recurrence(&removed, rule, memo)?
                .try_mul(&cut_sum)
                .expect("removed vertex variables are fresh");
            Ok(through + cut)
        }
        // Three internal edges, no tadpole: selecting half-edge i keeps the
        // other two edges, threading their far ends together.
        _ => {
            let mut total = Polynomial::zero();
            for i in 0..3 {
                let (j, k) = match i {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let p = graph.partner(internals[j]).expect("internal half is paired");
                let q = graph.partner(internals[k]).expect("internal half is paired");
                let threaded = removed.join_external(p, q)?;
                let branch = recurrence(&threaded, rule, memo)?
                    .try_mul(&Polynomial::var(internals[i]))
                    .expect("selected half was removed with v");
                total += branch;
            }
            Ok(total)
        }
    }
}

/// The default compute path: the pruned selection scan up to thirteen
/// vertices, the memoized recurrence beyond.
pub fn corolla<C: Scalar>(graph: &HalfEdgeGraph) -> Result<Polynomial<C>, CorollaError> {
    if graph.vertex_count() <= 13 {
        corolla_by_subsets(graph)
    } else {
        corolla_by_recurrence(graph)
    }
}

/// The edge-restricted corolla polynomial `C_E`: the alternating cycle-family
/// sum with families forbidden from touching the vertices of `E` and vertex
/// sums skipped there. Equals the corolla polynomial of the graph with `E`'s
/// edges and endpoint vertices removed.
pub fn corolla_restricted<C: Scalar>(
    graph: &HalfEdgeGraph,
    edges: &[(HalfEdgeId, HalfEdgeId)],
) -> Result<Polynomial<C>, CorollaError> {
    ensure_three_regular(graph)?;
    // Validate that the edges are internal and pairwise vertex-disjoint.
    graph.remove_edge_set(edges)?;
    let mut banned: BTreeSet<VertexId> = BTreeSet::new();
    for &(h, k) in edges {
        banned.insert(graph.vertex_of(h).expect("edge endpoint is live"));
        banned.insert(graph.vertex_of(k).expect("edge endpoint is live"));
    }
    let usable: Vec<Cycle> = cycles::enumerate_cycles(graph)
        .into_iter()
        .filter(|c| c.vertices.is_disjoint(&banned))
        .collect();
    let active: BTreeSet<VertexId> = (0..graph.vertex_count())
        .filter(|v| !banned.contains(v))
        .collect();
    alternating_family_sum(graph, &usable, &active)
}

/// The component statistic `c(T)`: connected components of the graph after
/// deleting the half-edges in `T` (every vertex counts, isolated or not),
/// plus the external half-edges in `T`, plus the internal edges with both
/// half-edges in `T`.
pub fn component_count_c(graph: &HalfEdgeGraph, t: &BTreeSet<HalfEdgeId>) -> usize {
    let vertex_of = graph.vertex_of_table();
    let mut uf = UnionFind::new(graph.vertex_count());
    let mut fully_inside = 0usize;
    for (h, k) in graph.internal_edges() {
        let h_in = t.contains(&h);
        let k_in = t.contains(&k);
        if h_in && k_in {
            fully_inside += 1;
        }
        if !h_in && !k_in {
            uf.union(
                vertex_of[h as usize].expect("paired id is live"),
                vertex_of[k as usize].expect("paired id is live"),
            );
        }
    }
    let externals_in_t = t.iter().filter(|&&h| graph.is_external(h)).count();
    uf.components() + externals_in_t + fully_inside
}

/// Substitution map sending every variable of `map` to its image; convenience
/// for relabeling polynomial variables after [`HalfEdgeGraph::relabel_dense`].
pub fn relabel_polynomial<C: Scalar>(
    poly: &Polynomial<C>,
    map: &BTreeMap<HalfEdgeId, HalfEdgeId>,
) -> Result<Polynomial<C>, PolyError> {
    let substitution: BTreeMap<HalfEdgeId, Polynomial<C>> = map
        .iter()
        .map(|(&old, &new)| (old, Polynomial::var(new)))
        .collect();
    poly.substitute(&substitution)
}
