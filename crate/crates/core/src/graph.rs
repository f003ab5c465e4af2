//! Immutable half-edge multigraph model.
//!
//! A graph is a list of vertices, each an ordered list of half-edge ids, plus
//! a partial pairing of ids. A pair of half-edges is an internal edge; an
//! unpaired half-edge is an external edge. Tadpoles (both halves of a pair at
//! one vertex) and parallel edges are allowed.
//!
//! Every surgery returns a new graph. Half-edge ids are stable: a surgery
//! never renames or reuses an id, so polynomial variables keep their identity
//! through recursive decompositions.

use crate::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Identifier of a half-edge. Ids are dense `0..halfedges` on ingestion and
/// become sparse after surgeries (removed ids are retired, never reused).
pub type HalfEdgeId = u32;

/// Index of a vertex in a specific graph. Indices shift when a vertex is
/// removed; they are not stable across surgeries the way half-edge ids are.
pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("half-edge id {0} listed twice in one vertex")]
    DuplicateId(HalfEdgeId),
    #[error("half-edge id {0} belongs to two vertices")]
    IdInTwoVertices(HalfEdgeId),
    #[error("half-edge id {0} appears in two pairs")]
    IdInTwoPairs(HalfEdgeId),
    #[error("half-edge id {0} paired with itself")]
    SelfPaired(HalfEdgeId),
    #[error("half-edge id {id} out of range 0..{bound}")]
    IdOutOfRange { id: HalfEdgeId, bound: u32 },
    #[error("pair references half-edge id {0} which is not at any vertex")]
    PairedIdMissing(HalfEdgeId),
    #[error("ids are not dense: expected 0..{expected}, id {missing} is missing (relabel first)")]
    NotDense { expected: u32, missing: HalfEdgeId },
    #[error("unknown half-edge id {0}")]
    UnknownHalfEdge(HalfEdgeId),
    #[error("invalid vertex index {0}")]
    InvalidVertex(VertexId),
    #[error("half-edge {0} is already paired")]
    AlreadyPaired(HalfEdgeId),
    #[error("cannot pair half-edge {0} with itself")]
    JoinWithItself(HalfEdgeId),
    #[error("{{{0}, {1}}} is not an internal edge of the graph")]
    NotAnEdge(HalfEdgeId, HalfEdgeId),
    #[error("edge {{{0}, {1}}} is a tadpole; contracting it is not defined")]
    TadpoleContraction(HalfEdgeId, HalfEdgeId),
    #[error("edges {{{0}, {1}}} and {{{2}, {3}}} share a vertex")]
    EdgesShareVertex(HalfEdgeId, HalfEdgeId, HalfEdgeId, HalfEdgeId),
    #[error("exhaustive enumeration capped at 8 vertices; {0} requested")]
    EnumerationBoundExceeded(usize),
    #[error("split blocks at vertex {0} do not partition its half-edges")]
    BadSplit(VertexId),
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

/// How [`HalfEdgeGraph::contract_edge`] treats the merged vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionMode {
    /// Plain merge; the merged vertex is an ordinary vertex.
    Naive,
    /// The merged vertex remembers which half-edges came from which endpoint.
    /// Selection-based polynomials restrict kept pairs to one half-edge per
    /// block (see the general-valence module).
    Split,
}

/// Bipartition of a merged vertex's half-edges by original endpoint,
/// recorded by split-mode contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSplit {
    pub left: BTreeSet<HalfEdgeId>,
    pub right: BTreeSet<HalfEdgeId>,
}

/// Basic counts of a graph. `cycle_rank` is the first Betti number
/// `internal_edges - vertices + components`; components are taken over
/// internal edges only (a vertex with no internal edges is its own
/// component).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub vertices: usize,
    pub internal_edges: usize,
    pub external_edges: usize,
    pub components: usize,
    pub cycle_rank: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    halfedges: u32,
    vertices: Vec<Vec<HalfEdgeId>>,
    pairs: Vec<(HalfEdgeId, HalfEdgeId)>,
}

/// An immutable half-edge multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdgeGraph {
    /// All ids are `< id_bound`. The bound never shrinks, so retired ids stay
    /// retired; `disjoint_union` shifts the right operand by the left bound.
    id_bound: u32,
    vertices: Vec<Vec<HalfEdgeId>>,
    /// Internal edges, normalized `h < k`.
    pairs: BTreeSet<(HalfEdgeId, HalfEdgeId)>,
    /// Endpoint bipartitions recorded by split-mode contraction, keyed by
    /// vertex index. Empty for ordinary graphs.
    splits: BTreeMap<VertexId, VertexSplit>,
}

fn normalize_pair(h: HalfEdgeId, k: HalfEdgeId) -> (HalfEdgeId, HalfEdgeId) {
    if h <= k {
        (h, k)
    } else {
        (k, h)
    }
}

impl HalfEdgeGraph {
    /// Builds a graph from raw vertex lists and pairs, validating the
    /// invariants. Ingestion requires dense ids `0..halfedges`; use
    /// [`HalfEdgeGraph::relabel_dense`] for sparse inputs.
    pub fn build(
        halfedges: u32,
        vertices: Vec<Vec<HalfEdgeId>>,
        pairs: Vec<(HalfEdgeId, HalfEdgeId)>,
    ) -> Result<Self, GraphError> {
        let mut seen = vec![false; halfedges as usize];
        for list in &vertices {
            let mut local = BTreeSet::new();
            for &h in list {
                if h >= halfedges {
                    return Err(GraphError::IdOutOfRange {
                        id: h,
                        bound: halfedges,
                    });
                }
                if !local.insert(h) {
                    return Err(GraphError::DuplicateId(h));
                }
                if seen[h as usize] {
                    return Err(GraphError::IdInTwoVertices(h));
                }
                seen[h as usize] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|present| !present) {
            return Err(GraphError::NotDense {
                expected: halfedges,
                missing: missing as HalfEdgeId,
            });
        }
        let mut normalized = BTreeSet::new();
        let mut paired = BTreeSet::new();
        for &(h, k) in &pairs {
            if h == k {
                return Err(GraphError::SelfPaired(h));
            }
            for id in [h, k] {
                if id >= halfedges {
                    return Err(GraphError::IdOutOfRange {
                        id,
                        bound: halfedges,
                    });
                }
                if !paired.insert(id) {
                    return Err(GraphError::IdInTwoPairs(id));
                }
            }
            normalized.insert(normalize_pair(h, k));
        }
        let graph = HalfEdgeGraph {
            id_bound: halfedges,
            vertices,
            pairs: normalized,
            splits: BTreeMap::new(),
        };
        graph.validate()?;
        Ok(graph)
    }

    /// Checks the structural invariants: every id below the bound and at
    /// exactly one vertex, pairs disjoint and non-self, paired ids live,
    /// split blocks partitioning their vertex. Density is not required here;
    /// surgeries leave retired ids behind.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut owner: BTreeMap<HalfEdgeId, VertexId> = BTreeMap::new();
        for (v, list) in self.vertices.iter().enumerate() {
            for &h in list {
                if h >= self.id_bound {
                    return Err(GraphError::IdOutOfRange {
                        id: h,
                        bound: self.id_bound,
                    });
                }
                match owner.insert(h, v) {
                    None => {}
                    Some(prev) if prev == v => return Err(GraphError::DuplicateId(h)),
                    Some(_) => return Err(GraphError::IdInTwoVertices(h)),
                }
            }
        }
        let mut paired = BTreeSet::new();
        for &(h, k) in &self.pairs {
            if h == k {
                return Err(GraphError::SelfPaired(h));
            }
            for id in [h, k] {
                if !owner.contains_key(&id) {
                    return Err(GraphError::PairedIdMissing(id));
                }
                if !paired.insert(id) {
                    return Err(GraphError::IdInTwoPairs(id));
                }
            }
        }
        for (&v, split) in &self.splits {
            let list = self
                .vertices
                .get(v)
                .ok_or(GraphError::InvalidVertex(v))?;
            let all: BTreeSet<_> = list.iter().copied().collect();
            if split.left.intersection(&split.right).next().is_some() {
                return Err(GraphError::BadSplit(v));
            }
            let union: BTreeSet<_> = split.left.union(&split.right).copied().collect();
            if union != all {
                return Err(GraphError::BadSplit(v));
            }
        }
        Ok(())
    }

    // ---- accessors ----

    pub fn id_bound(&self) -> u32 {
        self.id_bound
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, v: VertexId) -> Option<&[HalfEdgeId]> {
        self.vertices.get(v).map(|list| list.as_slice())
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[HalfEdgeId]> {
        self.vertices.iter().map(|list| list.as_slice())
    }

    pub fn valence(&self, v: VertexId) -> Option<usize> {
        self.vertices.get(v).map(|list| list.len())
    }

    /// Internal edges, normalized `(min, max)`, in sorted order.
    pub fn internal_edges(&self) -> impl Iterator<Item = (HalfEdgeId, HalfEdgeId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn internal_edge_count(&self) -> usize {
        self.pairs.len()
    }

    /// All live half-edge ids in ascending order.
    pub fn half_edges(&self) -> Vec<HalfEdgeId> {
        let mut ids: Vec<_> = self.vertices.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids
    }

    pub fn half_edge_count(&self) -> usize {
        self.vertices.iter().map(|list| list.len()).sum()
    }

    pub fn contains_half_edge(&self, h: HalfEdgeId) -> bool {
        self.vertex_of(h).is_some()
    }

    pub fn vertex_of(&self, h: HalfEdgeId) -> Option<VertexId> {
        self.vertices
            .iter()
            .position(|list| list.contains(&h))
    }

    pub fn partner(&self, h: HalfEdgeId) -> Option<HalfEdgeId> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == h {
                Some(b)
            } else if b == h {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn is_external(&self, h: HalfEdgeId) -> bool {
        self.contains_half_edge(h) && self.partner(h).is_none()
    }

    pub fn external_half_edges(&self) -> Vec<HalfEdgeId> {
        self.half_edges()
            .into_iter()
            .filter(|&h| self.partner(h).is_none())
            .collect()
    }

    pub fn is_internal_edge(&self, h: HalfEdgeId, k: HalfEdgeId) -> bool {
        self.pairs.contains(&normalize_pair(h, k))
    }

    pub fn is_tadpole_edge(&self, h: HalfEdgeId, k: HalfEdgeId) -> bool {
        self.is_internal_edge(h, k)
            && self.vertex_of(h).is_some()
            && self.vertex_of(h) == self.vertex_of(k)
    }

    /// Every vertex incident to exactly three half-edges (external edges
    /// count toward valence).
    pub fn is_three_regular(&self) -> bool {
        self.vertices.iter().all(|list| list.len() == 3)
    }

    /// First vertex with a valence other than three, if any.
    pub fn non_three_regular_vertex(&self) -> Option<(VertexId, usize)> {
        self.vertices
            .iter()
            .enumerate()
            .find(|(_, list)| list.len() != 3)
            .map(|(v, list)| (v, list.len()))
    }

    pub fn split(&self, v: VertexId) -> Option<&VertexSplit> {
        self.splits.get(&v)
    }

    pub fn has_splits(&self) -> bool {
        !self.splits.is_empty()
    }

    /// Lookup table id -> vertex index, indexed by id (`None` for retired ids).
    pub fn vertex_of_table(&self) -> Vec<Option<VertexId>> {
        let mut table = vec![None; self.id_bound as usize];
        for (v, list) in self.vertices.iter().enumerate() {
            for &h in list {
                table[h as usize] = Some(v);
            }
        }
        table
    }

    /// Lookup table id -> partner id (`None` for externals and retired ids).
    pub fn partner_table(&self) -> Vec<Option<HalfEdgeId>> {
        let mut table = vec![None; self.id_bound as usize];
        for &(h, k) in &self.pairs {
            table[h as usize] = Some(k);
            table[k as usize] = Some(h);
        }
        table
    }

    // ---- statistics ----

    pub fn stats(&self) -> GraphStats {
        let vertices = self.vertices.len();
        let internal_edges = self.pairs.len();
        let external_edges = self.half_edge_count() - 2 * internal_edges;
        let components = self.component_vertex_sets().len();
        GraphStats {
            vertices,
            internal_edges,
            external_edges,
            components,
            cycle_rank: internal_edges + components - vertices,
        }
    }

    /// Vertex index groups of the connected components (internal edges only),
    /// each sorted, ordered by smallest member.
    pub fn component_vertex_sets(&self) -> Vec<Vec<VertexId>> {
        let mut uf = UnionFind::new(self.vertices.len());
        let vertex_of = self.vertex_of_table();
        for &(h, k) in &self.pairs {
            let (u, w) = (
                vertex_of[h as usize].expect("paired id is live"),
                vertex_of[k as usize].expect("paired id is live"),
            );
            uf.union(u, w);
        }
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut result: Vec<Vec<VertexId>> = groups.into_values().collect();
        result.sort_by_key(|group| group[0]);
        result
    }

    /// The induced subgraphs of the connected components. Ids keep their
    /// global values, so component polynomials multiply into the whole.
    pub fn component_subgraphs(&self) -> Vec<HalfEdgeGraph> {
        self.component_vertex_sets()
            .into_iter()
            .map(|group| self.vertex_induced_subgraph(&group))
            .collect()
    }

    fn vertex_induced_subgraph(&self, group: &[VertexId]) -> HalfEdgeGraph {
        let keep: BTreeSet<VertexId> = group.iter().copied().collect();
        let vertices: Vec<Vec<HalfEdgeId>> = group
            .iter()
            .map(|&v| self.vertices[v].clone())
            .collect();
        let ids: BTreeSet<HalfEdgeId> = vertices.iter().flatten().copied().collect();
        let pairs = self
            .pairs
            .iter()
            .filter(|(h, _)| ids.contains(h))
            .copied()
            .collect();
        let splits = self
            .splits
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, split)| {
                let new_index = group.iter().position(|&g| g == v).expect("member");
                (new_index, split.clone())
            })
            .collect();
        let sub = HalfEdgeGraph {
            id_bound: self.id_bound,
            vertices,
            pairs,
            splits,
        };
        debug_assert!(sub.validate().is_ok());
        sub
    }

    // ---- surgeries ----

    /// Removes a vertex and all its half-edges. Partners of the removed
    /// half-edges become external ("remove the half edges incident to the
    /// vertex, but leave the other half").
    pub fn remove_vertex(&self, v: VertexId) -> Result<HalfEdgeGraph, GraphError> {
        if v >= self.vertices.len() {
            return Err(GraphError::InvalidVertex(v));
        }
        let removed: BTreeSet<HalfEdgeId> = self.vertices[v].iter().copied().collect();
        let vertices: Vec<Vec<HalfEdgeId>> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, list)| list.clone())
            .collect();
        let pairs = self
            .pairs
            .iter()
            .filter(|(h, k)| !removed.contains(h) && !removed.contains(k))
            .copied()
            .collect();
        let splits = self
            .splits
            .iter()
            .filter(|(&sv, _)| sv != v)
            .map(|(&sv, split)| (if sv > v { sv - 1 } else { sv }, split.clone()))
            .collect();
        let out = HalfEdgeGraph {
            id_bound: self.id_bound,
            vertices,
            pairs,
            splits,
        };
        debug_assert!(out.validate().is_ok());
        Ok(out)
    }

    /// Deletes a single half-edge. If it was paired, the partner stays and
    /// dangles as a new external edge.
    pub fn delete_half_edge(&self, h: HalfEdgeId) -> Result<HalfEdgeGraph, GraphError> {
        if !self.contains_half_edge(h) {
            return Err(GraphError::UnknownHalfEdge(h));
        }
        self.delete_half_edges(&BTreeSet::from([h]))
    }

    /// Deletes a set of half-edges at once; each surviving partner dangles.
    pub fn delete_half_edges(
        &self,
        ids: &BTreeSet<HalfEdgeId>,
    ) -> Result<HalfEdgeGraph, GraphError> {
        for &h in ids {
            if !self.contains_half_edge(h) {
                return Err(GraphError::UnknownHalfEdge(h));
            }
        }
        let vertices: Vec<Vec<HalfEdgeId>> = self
            .vertices
            .iter()
            .map(|list| {
                list.iter()
                    .copied()
                    .filter(|h| !ids.contains(h))
                    .collect()
            })
            .collect();
        let pairs = self
            .pairs
            .iter()
            .filter(|(h, k)| !ids.contains(h) && !ids.contains(k))
            .copied()
            .collect();
        let splits = self
            .splits
            .iter()
            .map(|(&v, split)| {
                let strip = |block: &BTreeSet<HalfEdgeId>| {
                    block.iter().copied().filter(|h| !ids.contains(h)).collect()
                };
                (
                    v,
                    VertexSplit {
                        left: strip(&split.left),
                        right: strip(&split.right),
                    },
                )
            })
            .collect();
        let out = HalfEdgeGraph {
            id_bound: self.id_bound,
            vertices,
            pairs,
            splits,
        };
        debug_assert!(out.validate().is_ok());
        Ok(out)
    }

    /// Pairs two external half-edges into a new internal edge (possibly a
    /// tadpole or a parallel edge).
    pub fn join_external(
        &self,
        h: HalfEdgeId,
        k: HalfEdgeId,
    ) -> Result<HalfEdgeGraph, GraphError> {
        if h == k {
            return Err(GraphError::JoinWithItself(h));
        }
        for id in [h, k] {
            if !self.contains_half_edge(id) {
                return Err(GraphError::UnknownHalfEdge(id));
            }
            if self.partner(id).is_some() {
                return Err(GraphError::AlreadyPaired(id));
            }
        }
        let mut out = self.clone();
        out.pairs.insert(normalize_pair(h, k));
        debug_assert!(out.validate().is_ok());
        Ok(out)
    }

    /// Contracts a non-tadpole internal edge, merging its endpoints. The
    /// merged vertex sits at the lower endpoint index and lists the lower
    /// endpoint's surviving half-edges first. In split mode it records the
    /// endpoint bipartition.
    pub fn contract_edge(
        &self,
        h: HalfEdgeId,
        k: HalfEdgeId,
        mode: ContractionMode,
    ) -> Result<HalfEdgeGraph, GraphError> {
        if !self.is_internal_edge(h, k) {
            return Err(GraphError::NotAnEdge(h, k));
        }
        let (hu, hw) = (h, k);
        let u = self.vertex_of(hu).expect("edge endpoint is live");
        let w = self.vertex_of(hw).expect("edge endpoint is live");
        if u == w {
            return Err(GraphError::TadpoleContraction(h, k));
        }
        let (lo, lo_half, hi, hi_half) = if u < w { (u, hu, w, hw) } else { (w, hw, u, hu) };
        let lo_rest: Vec<HalfEdgeId> = self.vertices[lo]
            .iter()
            .copied()
            .filter(|&x| x != lo_half)
            .collect();
        let hi_rest: Vec<HalfEdgeId> = self.vertices[hi]
            .iter()
            .copied()
            .filter(|&x| x != hi_half)
            .collect();
        let mut merged = lo_rest.clone();
        merged.extend(hi_rest.iter().copied());

        let mut vertices = Vec::with_capacity(self.vertices.len() - 1);
        for (i, list) in self.vertices.iter().enumerate() {
            if i == hi {
                continue;
            }
            if i == lo {
                vertices.push(merged.clone());
            } else {
                vertices.push(list.clone());
            }
        }
        let mut pairs = self.pairs.clone();
        pairs.remove(&normalize_pair(h, k));
        let mut splits: BTreeMap<VertexId, VertexSplit> = self
            .splits
            .iter()
            .filter(|(&v, _)| v != lo && v != hi)
            .map(|(&v, split)| (if v > hi { v - 1 } else { v }, split.clone()))
            .collect();
        if mode == ContractionMode::Split {
            splits.insert(
                lo,
                VertexSplit {
                    left: lo_rest.into_iter().collect(),
                    right: hi_rest.into_iter().collect(),
                },
            );
        }
        let out = HalfEdgeGraph {
            id_bound: self.id_bound,
            vertices,
            pairs,
            splits,
        };
        debug_assert!(out.validate().is_ok());
        Ok(out)
    }

    /// Removes a set of pairwise vertex-disjoint internal edges together with
    /// both endpoint vertices of each (remove-vertex semantics per endpoint).
    pub fn remove_edge_set(
        &self,
        edges: &[(HalfEdgeId, HalfEdgeId)],
    ) -> Result<HalfEdgeGraph, GraphError> {
        let mut claimed: BTreeMap<VertexId, (HalfEdgeId, HalfEdgeId)> = BTreeMap::new();
        for &(h, k) in edges {
            if !self.is_internal_edge(h, k) {
                return Err(GraphError::NotAnEdge(h, k));
            }
            let endpoints: BTreeSet<VertexId> = [h, k]
                .iter()
                .map(|&x| self.vertex_of(x).expect("edge endpoint is live"))
                .collect();
            for v in endpoints {
                if let Some(&(ph, pk)) = claimed.get(&v) {
                    return Err(GraphError::EdgesShareVertex(ph, pk, h, k));
                }
                claimed.insert(v, normalize_pair(h, k));
            }
        }
        let mut out = self.clone();
        // Remove by descending index so earlier indices stay valid.
        for &v in claimed.keys().rev() {
            out = out.remove_vertex(v)?;
        }
        Ok(out)
    }

    /// Disjoint union; the right operand's ids are shifted by the left
    /// operand's id bound.
    pub fn disjoint_union(&self, other: &HalfEdgeGraph) -> HalfEdgeGraph {
        let shift = self.id_bound;
        let mut vertices = self.vertices.clone();
        vertices.extend(
            other
                .vertices
                .iter()
                .map(|list| list.iter().map(|&h| h + shift).collect::<Vec<_>>()),
        );
        let mut pairs = self.pairs.clone();
        pairs.extend(other.pairs.iter().map(|&(h, k)| (h + shift, k + shift)));
        let mut splits = self.splits.clone();
        let offset = self.vertices.len();
        splits.extend(other.splits.iter().map(|(&v, split)| {
            let shift_block =
                |block: &BTreeSet<HalfEdgeId>| block.iter().map(|&h| h + shift).collect();
            (
                v + offset,
                VertexSplit {
                    left: shift_block(&split.left),
                    right: shift_block(&split.right),
                },
            )
        }));
        let out = HalfEdgeGraph {
            id_bound: self.id_bound + other.id_bound,
            vertices,
            pairs,
            splits,
        };
        debug_assert!(out.validate().is_ok());
        out
    }

    /// Returns a dense relabeling of this graph together with the old-to-new
    /// id map. New ids follow ascending old ids.
    pub fn relabel_dense(&self) -> (HalfEdgeGraph, BTreeMap<HalfEdgeId, HalfEdgeId>) {
        let ids = self.half_edges();
        let map: BTreeMap<HalfEdgeId, HalfEdgeId> = ids
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new as HalfEdgeId))
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|list| list.iter().map(|h| map[h]).collect())
            .collect();
        let pairs = self
            .pairs
            .iter()
            .map(|&(h, k)| normalize_pair(map[&h], map[&k]))
            .collect();
        let splits = self
            .splits
            .iter()
            .map(|(&v, split)| {
                let remap = |block: &BTreeSet<HalfEdgeId>| block.iter().map(|h| map[h]).collect();
                (
                    v,
                    VertexSplit {
                        left: remap(&split.left),
                        right: remap(&split.right),
                    },
                )
            })
            .collect();
        let out = HalfEdgeGraph {
            id_bound: ids.len() as u32,
            vertices,
            pairs,
            splits,
        };
        debug_assert!(out.validate().is_ok());
        (out, map)
    }

    // ---- keys and serialization ----

    /// Deterministic byte key of the labeled graph: vertex lists sorted
    /// inside and out, pairs normalized, split blocks appended. Equal
    /// labeled graphs give equal keys; isomorphic but differently labeled
    /// graphs do not (labels carry variable identity). Vertex list order and
    /// the id bound do not affect the key.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut entries: Vec<(Vec<HalfEdgeId>, Option<(Vec<HalfEdgeId>, Vec<HalfEdgeId>)>)> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(v, list)| {
                let mut ids = list.clone();
                ids.sort_unstable();
                let split = self.splits.get(&v).map(|s| {
                    (
                        s.left.iter().copied().collect::<Vec<_>>(),
                        s.right.iter().copied().collect::<Vec<_>>(),
                    )
                });
                (ids, split)
            })
            .collect();
        entries.sort();
        let mut key = String::new();
        for (ids, split) in entries {
            key.push('[');
            for (i, id) in ids.iter().enumerate() {
                if i > 0 {
                    key.push(',');
                }
                key.push_str(&id.to_string());
            }
            if let Some((left, right)) = split {
                key.push('{');
                for (i, id) in left.iter().enumerate() {
                    if i > 0 {
                        key.push(',');
                    }
                    key.push_str(&id.to_string());
                }
                key.push('|');
                for (i, id) in right.iter().enumerate() {
                    if i > 0 {
                        key.push(',');
                    }
                    key.push_str(&id.to_string());
                }
                key.push('}');
            }
            key.push(']');
        }
        key.push(';');
        for &(h, k) in &self.pairs {
            key.push_str(&format!("({h},{k})"));
        }
        key.into_bytes()
    }

    fn graph_json(&self) -> GraphJson {
        let mut vertices: Vec<Vec<HalfEdgeId>> = self.vertices.clone();
        for list in &mut vertices {
            list.sort_unstable();
        }
        GraphJson {
            halfedges: self.id_bound,
            vertices,
            pairs: self.pairs.iter().copied().collect(),
        }
    }

    /// Sorted-normalized JSON value: `{"halfedges": H, "vertices": [[..]],
    /// "pairs": [[h,k],..]}` with ascending vertex lists and pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.graph_json()).expect("graph serialization cannot fail")
    }

    /// The JSON form as one line, fields in the order halfedges, vertices,
    /// pairs.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.graph_json()).expect("graph serialization cannot fail")
    }

    pub fn to_json_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.graph_json()).expect("graph serialization cannot fail")
    }

    /// Parses and validates the graph JSON format (dense ids required).
    pub fn from_json_str(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::build(raw.halfedges, raw.vertices, raw.pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixture;
    use crate::generators::FixtureName::*;

    #[test]
    fn build_smallest_fixtures() {
        let vertex3 = HalfEdgeGraph::build(3, vec![vec![0, 1, 2]], vec![]).unwrap();
        assert_eq!(vertex3.external_half_edges(), vec![0, 1, 2]);
        let tadpole = HalfEdgeGraph::build(3, vec![vec![0, 1, 2]], vec![(0, 1)]).unwrap();
        assert!(tadpole.is_tadpole_edge(0, 1));
        assert_eq!(tadpole.external_half_edges(), vec![2]);
    }

    #[test]
    fn build_rejects_id_in_two_vertices() {
        let err = HalfEdgeGraph::build(3, vec![vec![0, 1], vec![1, 2]], vec![]).unwrap_err();
        assert_eq!(err, GraphError::IdInTwoVertices(1));
    }

    #[test]
    fn build_rejects_bad_pairs() {
        let err = HalfEdgeGraph::build(3, vec![vec![0, 1, 2]], vec![(0, 0)]).unwrap_err();
        assert_eq!(err, GraphError::SelfPaired(0));
        let err =
            HalfEdgeGraph::build(3, vec![vec![0, 1, 2]], vec![(0, 1), (1, 2)]).unwrap_err();
        assert_eq!(err, GraphError::IdInTwoPairs(1));
        let err = HalfEdgeGraph::build(3, vec![vec![0, 1, 2]], vec![(0, 7)]).unwrap_err();
        assert_eq!(err, GraphError::IdOutOfRange { id: 7, bound: 3 });
    }

    #[test]
    fn build_rejects_sparse_ids() {
        let err = HalfEdgeGraph::build(4, vec![vec![0, 1, 3]], vec![]).unwrap_err();
        assert_eq!(err, GraphError::NotDense { expected: 4, missing: 2 });
    }

    #[test]
    fn remove_vertex_examples() {
        let theta = fixture(Theta);
        let rest = theta.remove_vertex(0).unwrap();
        assert_eq!(rest.vertex_count(), 1);
        assert_eq!(rest.vertex(0).unwrap(), &[3, 4, 5]);
        assert_eq!(rest.internal_edge_count(), 0);

        let dumbbell = fixture(Dumbbell);
        let rest = dumbbell.remove_vertex(0).unwrap();
        assert_eq!(rest.vertex(0).unwrap(), &[3, 4, 5]);
        assert!(rest.is_tadpole_edge(3, 4));
        assert!(rest.is_external(5));

        let triangle = fixture(Triangle3);
        let rest = triangle.remove_vertex(0).unwrap();
        assert_eq!(rest.vertex(0).unwrap(), &[3, 4, 5]);
        assert_eq!(rest.vertex(1).unwrap(), &[6, 7, 8]);
        assert_eq!(rest.internal_edges().collect::<Vec<_>>(), vec![(4, 6)]);
        for h in [3, 5, 7, 8] {
            assert!(rest.is_external(h));
        }
        assert!(rest.remove_vertex(5).is_err());
    }

    #[test]
    fn remove_vertex_partners_become_external() {
        let k4 = fixture(K4);
        let rest = k4.remove_vertex(0).unwrap();
        assert_eq!(rest.vertex_count(), 3);
        for h in [3, 6, 9] {
            assert!(rest.is_external(h));
        }
        assert!(!rest.contains_half_edge(0));
    }

    #[test]
    fn delete_half_edge_examples() {
        let hgraph = fixture(HGraph);
        let rest = hgraph.delete_half_edge(2).unwrap();
        assert_eq!(rest.vertex(0).unwrap(), &[0, 1]);
        assert_eq!(rest.vertex(1).unwrap(), &[3, 4, 5]);
        assert!(rest.is_external(5));

        let tadpole = fixture(Tadpole1);
        let rest = tadpole.delete_half_edge(0).unwrap();
        assert_eq!(rest.vertex(0).unwrap(), &[1, 2]);
        assert!(rest.is_external(1) && rest.is_external(2));

        let twice = hgraph
            .delete_half_edge(2)
            .unwrap()
            .delete_half_edge(5)
            .unwrap();
        assert_eq!(twice.vertex(0).unwrap(), &[0, 1]);
        assert_eq!(twice.vertex(1).unwrap(), &[3, 4]);
        assert_eq!(twice.internal_edge_count(), 0);
        assert!(twice.delete_half_edge(2).is_err());
    }

    #[test]
    fn join_external_examples() {
        let vertex3 = fixture(Vertex3);
        let joined = vertex3.join_external(0, 1).unwrap();
        assert!(joined.is_tadpole_edge(0, 1));
        assert!(joined.join_external(2, 2).is_err());
        assert!(joined.join_external(0, 2).is_err());

        let two = fixture(Vertex3).disjoint_union(&fixture(Vertex3));
        assert_eq!(two.stats().components, 2);
        let joined = two.join_external(0, 3).unwrap();
        assert_eq!(joined.stats().components, 1);
    }

    #[test]
    fn contract_edge_examples() {
        let hgraph = fixture(HGraph);
        let merged = hgraph.contract_edge(2, 5, ContractionMode::Naive).unwrap();
        assert_eq!(merged.vertex_count(), 1);
        assert_eq!(merged.vertex(0).unwrap(), &[0, 1, 3, 4]);
        assert_eq!(merged.internal_edge_count(), 0);

        let triangle = fixture(Triangle3);
        let merged = triangle.contract_edge(1, 3, ContractionMode::Naive).unwrap();
        assert_eq!(merged.vertex(0).unwrap(), &[0, 2, 4, 5]);
        assert_eq!(merged.vertex(1).unwrap(), &[6, 7, 8]);
        assert_eq!(
            merged.internal_edges().collect::<Vec<_>>(),
            vec![(0, 7), (4, 6)]
        );

        let dumbbell = fixture(Dumbbell);
        assert_eq!(
            dumbbell.contract_edge(0, 1, ContractionMode::Naive).unwrap_err(),
            GraphError::TadpoleContraction(0, 1)
        );
        assert!(matches!(
            hgraph.contract_edge(0, 1, ContractionMode::Naive),
            Err(GraphError::NotAnEdge(0, 1))
        ));
    }

    #[test]
    fn contract_edge_split_records_blocks() {
        let hgraph = fixture(HGraph);
        let merged = hgraph.contract_edge(2, 5, ContractionMode::Split).unwrap();
        let split = merged.split(0).unwrap();
        assert_eq!(split.left, BTreeSet::from([0, 1]));
        assert_eq!(split.right, BTreeSet::from([3, 4]));
        assert_ne!(
            merged.canonical_key(),
            hgraph
                .contract_edge(2, 5, ContractionMode::Naive)
                .unwrap()
                .canonical_key()
        );
    }

    #[test]
    fn remove_edge_set_examples() {
        let theta = fixture(Theta);
        assert_eq!(theta.remove_edge_set(&[]).unwrap(), theta);
        let empty = theta.remove_edge_set(&[(0, 3)]).unwrap();
        assert_eq!(empty.vertex_count(), 0);

        let triangle = fixture(Triangle3);
        let rest = triangle.remove_edge_set(&[(1, 3)]).unwrap();
        assert_eq!(rest.vertex_count(), 1);
        assert_eq!(rest.vertex(0).unwrap(), &[6, 7, 8]);
        assert!(rest.external_half_edges() == vec![6, 7, 8]);

        let err = triangle.remove_edge_set(&[(1, 3), (4, 6)]).unwrap_err();
        assert!(matches!(err, GraphError::EdgesShareVertex(..)));
    }

    #[test]
    fn remove_edge_set_matches_iterated_remove_vertex() {
        let k4 = fixture(K4);
        let via_set = k4.remove_edge_set(&[(0, 3)]).unwrap();
        // Endpoints are vertices 0 and 1; remove in both orders.
        let a = k4.remove_vertex(1).unwrap().remove_vertex(0).unwrap();
        let b = k4.remove_vertex(0).unwrap().remove_vertex(0).unwrap();
        assert_eq!(via_set, a);
        assert_eq!(via_set.canonical_key(), b.canonical_key());
    }

    #[test]
    fn disjoint_union_shifts_ids() {
        let a = fixture(Vertex3);
        let b = fixture(Vertex3);
        let both = a.disjoint_union(&b);
        assert_eq!(both.vertex_count(), 2);
        assert_eq!(both.vertex(1).unwrap(), &[3, 4, 5]);
        assert_eq!(both.external_half_edges().len(), 6);

        let theta_dumbbell = fixture(Theta).disjoint_union(&fixture(Dumbbell));
        assert_eq!(theta_dumbbell.stats().components, 2);
        assert_eq!(
            theta_dumbbell.stats().cycle_rank,
            fixture(Theta).stats().cycle_rank + fixture(Dumbbell).stats().cycle_rank
        );
    }

    #[test]
    fn stats_examples() {
        let theta = fixture(Theta).stats();
        assert_eq!(
            (theta.vertices, theta.internal_edges, theta.external_edges),
            (2, 3, 0)
        );
        assert_eq!((theta.components, theta.cycle_rank), (1, 2));

        let v3 = fixture(Vertex3).stats();
        assert_eq!((v3.vertices, v3.internal_edges, v3.external_edges), (1, 0, 3));
        assert_eq!((v3.components, v3.cycle_rank), (1, 0));

        let dumbbell = fixture(Dumbbell).stats();
        assert_eq!((dumbbell.vertices, dumbbell.internal_edges), (2, 3));
        assert_eq!(dumbbell.cycle_rank, 2);
    }

    #[test]
    fn canonical_key_is_label_sensitive() {
        let v3 = fixture(Vertex3);
        assert_eq!(v3.canonical_key(), fixture(Vertex3).canonical_key());
        assert_ne!(v3.canonical_key(), fixture(Tadpole1).canonical_key());
        // Isomorphic but relabeled: cycle_with_legs(1) is a tadpole with the
        // loop on {0,1}; pairing {1,2} instead gives a different key.
        let relabeled = HalfEdgeGraph::build(3, vec![vec![0, 1, 2]], vec![(1, 2)]).unwrap();
        assert_ne!(relabeled.canonical_key(), fixture(Tadpole1).canonical_key());
    }

    #[test]
    fn canonical_key_ignores_presentation_order() {
        let a = HalfEdgeGraph::build(6, vec![vec![0, 1, 2], vec![3, 4, 5]], vec![(2, 5)]).unwrap();
        let b = HalfEdgeGraph::build(6, vec![vec![5, 4, 3], vec![2, 1, 0]], vec![(5, 2)]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn json_round_trip_is_sorted_normalized() {
        let text = r#"{"halfedges":6,"vertices":[[2,0,1],[3,4,5]],"pairs":[[5,2]]}"#;
        let graph = HalfEdgeGraph::from_json_str(text).unwrap();
        assert_eq!(
            graph.to_json_string(),
            r#"{"halfedges":6,"vertices":[[0,1,2],[3,4,5]],"pairs":[[2,5]]}"#
        );
        let again = HalfEdgeGraph::from_json_str(&graph.to_json_string()).unwrap();
        assert_eq!(again.to_json_string(), graph.to_json_string());
    }

    #[test]
    fn relabel_dense_compacts_ids() {
        let theta = fixture(Theta);
        let sparse = theta.remove_vertex(0).unwrap();
        let (dense, map) = sparse.relabel_dense();
        assert_eq!(dense.id_bound(), 3);
        assert_eq!(dense.vertex(0).unwrap(), &[0, 1, 2]);
        assert_eq!(map[&3], 0);
        assert_eq!(map[&5], 2);
        assert!(dense.validate().is_ok());
        // Dense output is ingestable again.
        assert!(HalfEdgeGraph::from_json_str(&dense.to_json_string()).is_ok());
    }

    #[test]
    fn surgery_outputs_validate() {
        for name in [Vertex3, Tadpole1, HGraph, Theta, Dumbbell, Triangle3, K4, Prism] {
            let g = fixture(name);
            assert!(g.validate().is_ok());
            for v in 0..g.vertex_count() {
                assert!(g.remove_vertex(v).unwrap().validate().is_ok());
            }
            for h in g.half_edges() {
                assert!(g.delete_half_edge(h).unwrap().validate().is_ok());
            }
            for (h, k) in g.internal_edges() {
                if !g.is_tadpole_edge(h, k) {
                    for mode in [ContractionMode::Naive, ContractionMode::Split] {
                        assert!(g.contract_edge(h, k, mode).unwrap().validate().is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn remove_vertex_drops_count_and_dangles_partners() {
        let prism = fixture(Prism);
        let before = prism.stats();
        let rest = prism.remove_vertex(2).unwrap();
        let after = rest.stats();
        assert_eq!(after.vertices, before.vertices - 1);
        for h in prism.vertex(2).unwrap() {
            let partner = prism.partner(*h).unwrap();
            assert!(rest.is_external(partner));
        }
    }
}
