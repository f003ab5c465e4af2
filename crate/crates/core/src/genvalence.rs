//! The corolla polynomial at arbitrary valences, by the same two routes as
//! the three-regular case — an alternating cycle-family sum and a pruned
//! selection scan — plus the contraction–deletion residual that probes the
//! identity `C(G) = C(G/e) + a_h C(G∖h) + a_k C(G∖k) − a_h a_k C(G∖hk)`
//! under two contraction semantics.

use crate::corolla::CorollaError;
use crate::cycles::{self, Cycle};
use crate::graph::{ContractionMode, GraphError, HalfEdgeGraph, HalfEdgeId, VertexId};
use crate::poly::{Monomial, Polynomial, Scalar};
use crate::selscan::{all_but_two_options, scan_selections};
use std::collections::BTreeSet;

/// `E_v`: the sum over unordered pairs of half-edges kept at `v` of the
/// product of all other half-edge variables there. At a three-valent vertex
/// this is the vertex sum `D_v`; at a two-valent vertex it is one. At a
/// split vertex only pairs taking one half-edge from each block count.
pub fn vertex_pair_sum<C: Scalar>(
    graph: &HalfEdgeGraph,
    v: VertexId,
) -> Result<Polynomial<C>, CorollaError> {
    let valence = graph.valence(v).ok_or(GraphError::InvalidVertex(v))?;
    if valence < 2 {
        return Err(CorollaError::PairSumUndefined { vertex: v, valence });
    }
    Ok(pair_sum_or_zero(graph, v))
}

/// As [`vertex_pair_sum`], but an empty sum (the zero polynomial) below
/// valence two — the form the family sum needs.
fn pair_sum_or_zero<C: Scalar>(graph: &HalfEdgeGraph, v: VertexId) -> Polynomial<C> {
    let halves: Vec<HalfEdgeId> = graph.vertex(v).expect("index in range").to_vec();
    let mut out = Polynomial::zero();
    for i in 0..halves.len() {
        for j in i + 1..halves.len() {
            if !kept_pair_allowed(graph, v, halves[i], halves[j]) {
                continue;
            }
            let chosen = halves
                .iter()
                .copied()
                .filter(|&x| x != halves[i] && x != halves[j]);
            out.add_term(Monomial::from_vars(chosen), C::one());
        }
    }
    out
}

/// Whether `{a, b}` may be the kept pair at `v`: unrestricted unless `v` is
/// a split vertex, where the pair must cross the two blocks.
fn kept_pair_allowed(graph: &HalfEdgeGraph, v: VertexId, a: HalfEdgeId, b: HalfEdgeId) -> bool {
    match graph.split(v) {
        None => true,
        Some(split) => {
            (split.left.contains(&a) && split.right.contains(&b))
                || (split.right.contains(&a) && split.left.contains(&b))
        }
    }
}

/// The general corolla polynomial: the sum, over selections keeping exactly
/// two half-edges per vertex (crossing the blocks at split vertices) with
/// the kept remainder acyclic, of the product of the selected variables.
/// Vertices below valence two admit no selection, so their presence makes
/// the polynomial zero. On three-regular graphs this is the corolla
/// polynomial.
pub fn general_corolla<C: Scalar>(graph: &HalfEdgeGraph) -> Result<Polynomial<C>, CorollaError> {
    let options = all_but_two_options(graph);
    let mut out = Polynomial::zero();
    scan_selections(graph, &options, true, &mut |leaf| {
        out.add_term(Monomial::from_vars(leaf.chosen.iter().copied()), C::one());
    });
    Ok(out)
}

/// The same polynomial as the alternating sum over families of pairwise
/// vertex-disjoint cycles: a family of `j` cycles contributes with sign
/// `(−1)^j` the product of the off-cycle variables at covered vertices and
/// of `E_v` at uncovered ones. At split vertices only block-crossing cycles
/// and pairs participate.
pub fn general_corolla_by_families<C: Scalar>(
    graph: &HalfEdgeGraph,
) -> Result<Polynomial<C>, CorollaError> {
    let admissible: Vec<Cycle> = cycles::enumerate_cycles(graph)
        .into_iter()
        .filter(|c| cycle_respects_splits(graph, c))
        .collect();
    let mut out = Polynomial::zero();
    for size in 0..=admissible.len() {
        let families = cycles::disjoint_families(&admissible, size);
        if families.is_empty() {
            break;
        }
        for family in families {
            let mut covered: BTreeSet<VertexId> = BTreeSet::new();
            let mut term = Polynomial::one();
            for &i in &family {
                let cycle = &admissible[i];
                for &v in &cycle.vertices {
                    let off = cycles::complement_half_edges(graph, cycle, v)
                        .expect("cycle vertex lies on its cycle");
                    term = term
                        .try_mul(&Polynomial::from_monomial(
                            Monomial::from_vars(off),
                            C::one(),
                        ))
                        .expect("family cycles are vertex-disjoint");
                }
                covered.extend(cycle.vertices.iter().copied());
            }
            for v in 0..graph.vertex_count() {
                if covered.contains(&v) {
                    continue;
                }
                term = term
                    .try_mul(&pair_sum_or_zero(graph, v))
                    .expect("vertex supports are disjoint");
                if term.is_zero() {
                    break;
                }
            }
            if size % 2 == 1 {
                term = term.negate();
            }
            out += term;
        }
    }
    Ok(out)
}

/// Whether every split vertex the cycle passes through is crossed from one
/// block to the other.
fn cycle_respects_splits(graph: &HalfEdgeGraph, cycle: &Cycle) -> bool {
    if !graph.has_splits() {
        return true;
    }
    let on_cycle = cycle.half_edges();
    for &v in &cycle.vertices {
        if graph.split(v).is_none() {
            continue;
        }
        let here: Vec<HalfEdgeId> = graph
            .vertex(v)
            .expect("index in range")
            .iter()
            .copied()
            .filter(|h| on_cycle.contains(h))
            .collect();
        debug_assert_eq!(here.len(), 2, "a cycle uses two half-edges per vertex");
        if !kept_pair_allowed(graph, v, here[0], here[1]) {
            return false;
        }
    }
    true
}

/// `RHS − LHS` of the contraction–deletion identity at the internal
/// non-tadpole edge `{h, k}`: the zero polynomial exactly when the identity
/// holds for this graph, edge, and contraction semantics.
pub fn contraction_deletion_residual<C: Scalar>(
    graph: &HalfEdgeGraph,
    edge: (HalfEdgeId, HalfEdgeId),
    mode: ContractionMode,
) -> Result<Polynomial<C>, CorollaError> {
    let (h, k) = edge;
    let contracted = graph.contract_edge(h, k, mode)?;
    let minus_h = graph.delete_half_edge(h)?;
    let minus_k = graph.delete_half_edge(k)?;
    let minus_both = graph.delete_half_edges(&BTreeSet::from([h, k]))?;
    let lhs = general_corolla::<C>(graph)?;
    let rhs = general_corolla::<C>(&contracted)?
        + general_corolla::<C>(&minus_h)?
            .try_mul(&Polynomial::var(h))
            .map_err(CorollaError::Poly)?
        + general_corolla::<C>(&minus_k)?
            .try_mul(&Polynomial::var(k))
            .map_err(CorollaError::Poly)?
        - general_corolla::<C>(&minus_both)?
            .try_mul(&Polynomial::var_product([h, k]))
            .map_err(CorollaError::Poly)?;
    Ok(rhs - lhs)
}
