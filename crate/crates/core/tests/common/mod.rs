//! Brute-force oracles for the integration tests.
//!
//! Selections are enumerated by a plain index odometer and the remainder is
//! analyzed by an explicit depth-first search, so these share no algorithmic
//! machinery with the library's scan, cycle, or union-find code paths.
// Each integration test binary compiles this module separately and uses a
// different subset of it.
#![allow(dead_code)]

use corolla_core::graph::{HalfEdgeGraph, HalfEdgeId};
use corolla_core::poly::Monomial;
use corolla_core::{Int, Poly};
use std::collections::BTreeSet;

/// Every way of picking exactly one half-edge per vertex, odometer order.
pub fn every_selection(graph: &HalfEdgeGraph) -> Vec<Vec<HalfEdgeId>> {
    let lists: Vec<Vec<HalfEdgeId>> = graph.vertices().map(|l| l.to_vec()).collect();
    if lists.iter().any(|l| l.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; lists.len()];
    loop {
        out.push(
            lists
                .iter()
                .zip(&digits)
                .map(|(list, &d)| list[d])
                .collect(),
        );
        let mut place = 0;
        while place < lists.len() {
            digits[place] += 1;
            if digits[place] < lists[place].len() {
                break;
            }
            digits[place] = 0;
            place += 1;
        }
        if place == lists.len() {
            return out;
        }
    }
}

/// Census of the graph left after deleting the chosen half-edges: surviving
/// internal edges, connected components over all vertices, and the cycle
/// rank `edges − vertices + components`.
pub struct RemainderShape {
    pub edge_count: usize,
    pub components: usize,
    pub cycle_rank: usize,
}

pub fn remainder_shape(graph: &HalfEdgeGraph, chosen: &[HalfEdgeId]) -> RemainderShape {
    let gone: BTreeSet<HalfEdgeId> = chosen.iter().copied().collect();
    let n = graph.vertex_count();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edge_count = 0usize;
    for (h, k) in graph.internal_edges() {
        if gone.contains(&h) || gone.contains(&k) {
            continue;
        }
        edge_count += 1;
        let (u, v) = (
            graph.vertex_of(h).expect("paired half is live"),
            graph.vertex_of(k).expect("paired half is live"),
        );
        adjacency[u].push(v);
        if u != v {
            adjacency[v].push(u);
        }
    }
    let mut seen = vec![false; n];
    let mut components = 0usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    RemainderShape {
        edge_count,
        components,
        cycle_rank: edge_count + components - n,
    }
}

pub fn is_acyclic_after(graph: &HalfEdgeGraph, chosen: &[HalfEdgeId]) -> bool {
    remainder_shape(graph, chosen).cycle_rank == 0
}

/// The component statistic: remainder components plus chosen externals plus
/// internal edges with both half-edges chosen.
pub fn oracle_component_statistic(graph: &HalfEdgeGraph, chosen: &[HalfEdgeId]) -> usize {
    let set: BTreeSet<HalfEdgeId> = chosen.iter().copied().collect();
    let externals = set.iter().filter(|&&h| graph.is_external(h)).count();
    let both_in = graph
        .internal_edges()
        .filter(|&(h, k)| set.contains(&h) && set.contains(&k))
        .count();
    remainder_shape(graph, chosen).components + externals + both_in
}

/// The corolla polynomial by raw enumeration.
pub fn oracle_corolla(graph: &HalfEdgeGraph) -> Poly {
    let mut out = Poly::zero();
    for selection in every_selection(graph) {
        if is_acyclic_after(graph, &selection) {
            out.add_term(Monomial::from_vars(selection.iter().copied()), Int::from(1));
        }
    }
    out
}

/// The universal polynomial by raw enumeration.
pub fn oracle_universal(graph: &HalfEdgeGraph) -> Poly {
    let mut out = Poly::zero();
    for selection in every_selection(graph) {
        let shape = remainder_shape(graph, &selection);
        let mut m = Monomial::from_vars(selection.iter().copied());
        m.r_exp = shape.cycle_rank as u32;
        out.add_term(m, Int::from(1));
    }
    out
}

/// The tilde polynomial by raw enumeration.
pub fn oracle_tilde(graph: &HalfEdgeGraph) -> Poly {
    let mut out = Poly::zero();
    for selection in every_selection(graph) {
        let shape = remainder_shape(graph, &selection);
        let mut m = Monomial::from_vars(selection.iter().copied());
        m.r_exp = shape.cycle_rank as u32;
        m.q_exp = oracle_component_statistic(graph, &selection) as u32;
        out.add_term(m, Int::from(1));
    }
    out
}

/// Every simple cycle as an internal-edge subset: connected and two incident
/// half-edges at each touched vertex (a loop counting twice).
pub fn oracle_cycle_edge_sets(graph: &HalfEdgeGraph) -> BTreeSet<BTreeSet<(HalfEdgeId, HalfEdgeId)>> {
    let edges: Vec<(HalfEdgeId, HalfEdgeId)> = graph.internal_edges().collect();
    let mut out = BTreeSet::new();
    for mask in 1u64..(1 << edges.len()) {
        let subset: Vec<(HalfEdgeId, HalfEdgeId)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if subset_is_simple_cycle(graph, &subset) {
            out.insert(subset.into_iter().collect());
        }
    }
    out
}

fn subset_is_simple_cycle(graph: &HalfEdgeGraph, subset: &[(HalfEdgeId, HalfEdgeId)]) -> bool {
    let n = graph.vertex_count();
    let mut degree = vec![0usize; n];
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(h, k) in subset {
        let (u, v) = (
            graph.vertex_of(h).expect("paired half is live"),
            graph.vertex_of(k).expect("paired half is live"),
        );
        degree[u] += if u == v { 2 } else { 1 };
        if u != v {
            degree[v] += 1;
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    let touched: Vec<usize> = (0..n).filter(|&v| degree[v] > 0).collect();
    if touched.is_empty() || touched.iter().any(|&v| degree[v] != 2) {
        return false;
    }
    // Connectivity over the touched vertices.
    let mut seen = vec![false; n];
    let mut stack = vec![touched[0]];
    seen[touched[0]] = true;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    touched.iter().all(|&v| seen[v])
}
