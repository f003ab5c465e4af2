//! The universal corolla polynomial `𝐂(G,r,a)`, its `q`-extension `𝐂̃`, the
//! Potts-type coloring formulation, and the constrained evaluation over
//! spanning disjoint cycle families.

use crate::corolla::{ensure_three_regular, CorollaError};
use crate::cycles::{self, Cycle};
use crate::graph::{HalfEdgeGraph, HalfEdgeId};
use crate::poly::{Monomial, Polynomial, Scalar};
use crate::selscan::{one_per_vertex_options, scan_selections};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Colorings beyond this count are refused rather than enumerated.
pub const COLORING_LIMIT: u64 = 10_000_000;

/// The universal polynomial: the sum over all one-half-edge-per-vertex
/// selections `H` of `r^{ℓ(G∖H)} ∏_{h∈H} a_h`, where `ℓ` counts independent
/// cycles of the remainder. Setting `r = 0` recovers the corolla polynomial;
/// `r = 1` gives the product of the vertex sums.
pub fn universal_poly<C: Scalar>(graph: &HalfEdgeGraph) -> Result<Polynomial<C>, CorollaError> {
    ensure_three_regular(graph)?;
    let options = one_per_vertex_options(graph);
    let mut out = Polynomial::zero();
    scan_selections(graph, &options, false, &mut |leaf| {
        let mut m = Monomial::from_vars(leaf.chosen.iter().copied());
        m.r_exp = leaf.remainder_cycles;
        out.add_term(m, C::one());
    });
    Ok(out)
}

/// The `q`-extension: each selection additionally weighted by `q^{c(H)}`
/// with `c` the component statistic of [`component_count_c`].
pub fn universal_tilde<C: Scalar>(graph: &HalfEdgeGraph) -> Result<Polynomial<C>, CorollaError> {
    ensure_three_regular(graph)?;
    let options = one_per_vertex_options(graph);
    let mut out = Polynomial::zero();
    scan_selections(graph, &options, false, &mut |leaf| {
        let c = leaf.remainder_components + leaf.chosen_externals + leaf.chosen_internal_edges;
        let mut m = Monomial::from_vars(leaf.chosen.iter().copied());
        m.r_exp = leaf.remainder_cycles;
        m.q_exp = c as u32;
        out.add_term(m, C::one());
    });
    Ok(out)
}

/// All one-per-vertex selections (the set usually written ℋ), in scan order.
pub fn all_selections(
    graph: &HalfEdgeGraph,
) -> Result<Vec<std::collections::BTreeSet<HalfEdgeId>>, CorollaError> {
    ensure_three_regular(graph)?;
    let options = one_per_vertex_options(graph);
    let mut out = Vec::new();
    scan_selections(graph, &options, false, &mut |leaf| {
        out.push(leaf.chosen.iter().copied().collect());
    });
    Ok(out)
}

/// The Potts-type formulation: the sum over all colorings `f` of the cycle
/// set by `states` colors of `∏_v Σ_{h∈n(v)} a_h·ε(h,f)`, where `ε(h,f)` is
/// one exactly when every cycle through `h` carries the first color. Equals
/// the universal polynomial evaluated at `r = states`.
pub fn potts_poly<C: Scalar>(
    graph: &HalfEdgeGraph,
    states: u64,
) -> Result<Polynomial<C>, CorollaError> {
    ensure_three_regular(graph)?;
    let all_cycles = cycles::enumerate_cycles(graph);
    let n = all_cycles.len();
    match (states as u128).checked_pow(n as u32) {
        Some(count) if count <= COLORING_LIMIT as u128 => {}
        _ => {
            return Err(CorollaError::ColoringGuardExceeded {
                states,
                cycles: n,
                limit: COLORING_LIMIT,
            })
        }
    }
    if states == 0 {
        // No colorings exist unless the cycle set is empty.
        return Ok(if n == 0 { product_of_vertex_sums(graph) } else { Polynomial::zero() });
    }
    // For each half-edge, the cycles running through it.
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); graph.id_bound() as usize];
    for (i, cycle) in all_cycles.iter().enumerate() {
        for h in cycle.half_edges() {
            through[h as usize].push(i);
        }
    }
    let mut out = Polynomial::zero();
    let mut digits = vec![0u64; n];
    loop {
        let mut term = Polynomial::one();
        for v in 0..graph.vertex_count() {
            let live = graph
                .vertex(v)
                .expect("index in range")
                .iter()
                .copied()
                .filter(|&h| through[h as usize].iter().all(|&ci| digits[ci] == 0));
            let s: Polynomial<C> = Polynomial::var_sum(live);
            if s.is_zero() {
                term = Polynomial::zero();
                break;
            }
            term = term.try_mul(&s).expect("vertex supports are disjoint");
        }
        out += term;
        let mut place = 0;
        while place < n {
            digits[place] += 1;
            if digits[place] < states {
                break;
            }
            digits[place] = 0;
            place += 1;
        }
        if place == n {
            break;
        }
    }
    Ok(out)
}

fn product_of_vertex_sums<C: Scalar>(graph: &HalfEdgeGraph) -> Polynomial<C> {
    let mut out = Polynomial::one();
    for list in graph.vertices() {
        out = out
            .try_mul(&Polynomial::var_sum(list.iter().copied()))
            .expect("vertex supports are disjoint");
    }
    out
}

/// The spanning-cycle sum: over families of pairwise vertex-disjoint cycles
/// covering every vertex, `(r−1)^k` times the product of the off-cycle
/// variables at each covered vertex, `k` the family size. Under the
/// per-vertex constraint `Σ_{h∈n(v)} a_h = 0` this equals the universal
/// polynomial.
pub fn spanning_cycle_sum<C: Scalar>(
    graph: &HalfEdgeGraph,
) -> Result<Polynomial<C>, CorollaError> {
    ensure_three_regular(graph)?;
    let all_cycles = cycles::enumerate_cycles(graph);
    let r_minus_one = Polynomial::<C>::r() - Polynomial::one();
    let mut out = Polynomial::zero();
    for size in 0..=all_cycles.len() {
        let families = cycles::disjoint_families(&all_cycles, size);
        if families.is_empty() {
            break;
        }
        for family in families {
            let covered: usize = family.iter().map(|&i| all_cycles[i].vertices.len()).sum();
            if covered != graph.vertex_count() {
                continue;
            }
            let mut term = Polynomial::one();
            for &i in &family {
                term = term
                    .try_mul(&off_cycle_product(graph, &all_cycles[i])?)
                    .expect("family cycles are vertex-disjoint");
            }
            for _ in 0..size {
                term = term.mul_aux(&r_minus_one);
            }
            out += term;
        }
    }
    Ok(out)
}

fn off_cycle_product<C: Scalar>(
    graph: &HalfEdgeGraph,
    cycle: &Cycle,
) -> Result<Polynomial<C>, CorollaError> {
    let mut term = Polynomial::one();
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
    Ok(term)
}

/// Which half-edge variable each vertex eliminates when imposing the
/// per-vertex constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Elimination {
    /// Replace the highest id at each vertex by minus the sum of the others.
    #[default]
    HighestId,
    /// Replace the lowest id instead.
    LowestId,
}

/// The substitution sending each vertex's dependent variable to minus the
/// sum of the other variables at that vertex.
pub fn elimination_map<C: Scalar>(
    graph: &HalfEdgeGraph,
    rule: Elimination,
) -> BTreeMap<HalfEdgeId, Polynomial<C>> {
    let mut map = BTreeMap::new();
    for list in graph.vertices() {
        if list.is_empty() {
            continue;
        }
        let dependent = match rule {
            Elimination::HighestId => *list.iter().max().expect("nonempty"),
            Elimination::LowestId => *list.iter().min().expect("nonempty"),
        };
        let others = list.iter().copied().filter(|&h| h != dependent);
        map.insert(dependent, Polynomial::<C>::var_sum(others).negate());
    }
    map
}

/// Outcome of the constrained-evaluation identity check: both sides after
/// eliminating one variable per vertex, plus an independent numeric
/// comparison of the uneliminated sides at random constrained points.
#[derive(Debug, Clone)]
pub struct ConstrainedCheck {
    /// The universal polynomial after elimination.
    pub lhs: Polynomial<BigInt>,
    /// The spanning-cycle sum after elimination.
    pub rhs: Polynomial<BigInt>,
    pub symbolic_equal: bool,
    pub numeric_points: usize,
    pub numeric_failures: usize,
    /// Description of the first failing numeric point, if any.
    pub first_numeric_failure: Option<String>,
}

impl ConstrainedCheck {
    pub fn passed(&self) -> bool {
        self.symbolic_equal && self.numeric_failures == 0
    }

    /// A monomial whose coefficients differ between the two sides, if any.
    pub fn first_symbolic_difference(&self) -> Option<Monomial> {
        let difference = self.lhs.clone() - self.rhs.clone();
        let first = difference.terms().next().map(|(m, _)| m.clone());
        first
    }
}

/// Runs the constrained-evaluation check with the default elimination rule,
/// seed, and twenty numeric points.
pub fn constrained_identity_check(
    graph: &HalfEdgeGraph,
) -> Result<ConstrainedCheck, CorollaError> {
    constrained_identity_check_with(graph, Elimination::HighestId, 17, 20)
}

/// The check with explicit elimination rule, random seed, and point count.
///
/// Symbolically, both sides are reduced by the elimination substitution and
/// compared. Numerically, the *unsubstituted* sides are evaluated at random
/// rational points chosen to satisfy every per-vertex constraint, so the two
/// halves of the check share no algebra.
pub fn constrained_identity_check_with(
    graph: &HalfEdgeGraph,
    rule: Elimination,
    seed: u64,
    points: usize,
) -> Result<ConstrainedCheck, CorollaError> {
    let universal: Polynomial<BigInt> = universal_poly(graph)?;
    let spanning: Polynomial<BigInt> = spanning_cycle_sum(graph)?;
    let map = elimination_map::<BigInt>(graph, rule);
    let lhs = universal.substitute(&map).map_err(CorollaError::Poly)?;
    let rhs = spanning.substitute(&map).map_err(CorollaError::Poly)?;
    let symbolic_equal = lhs == rhs;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut numeric_failures = 0usize;
    let mut first_numeric_failure = None;
    for point in 0..points {
        let mut assignment: Vec<Option<BigRational>> = vec![None; graph.id_bound() as usize];
        for v in 0..graph.vertex_count() {
            let list = graph.vertex(v).expect("index in range");
            let dependent = match rule {
                Elimination::HighestId => *list.iter().max().expect("nonempty"),
                Elimination::LowestId => *list.iter().min().expect("nonempty"),
            };
            let mut sum = BigRational::zero();
            for &h in list.iter().filter(|&&h| h != dependent) {
                let value = random_rational(&mut rng);
                sum += &value;
                assignment[h as usize] = Some(value);
            }
            assignment[dependent as usize] = Some(-sum);
        }
        let r_value = random_rational(&mut rng);
        let q_value = BigRational::one();
        let at = |h: HalfEdgeId| {
            assignment[h as usize]
                .clone()
                .expect("every live half-edge was assigned")
        };
        let left = universal.evaluate(at, &r_value, &q_value);
        let right = spanning.evaluate(at, &r_value, &q_value);
        if left != right {
            numeric_failures += 1;
            if first_numeric_failure.is_none() {
                first_numeric_failure = Some(format!(
                    "point {point}: r = {r_value}, universal side {left}, spanning side {right}"
                ));
            }
        }
    }
    Ok(ConstrainedCheck {
        lhs,
        rhs,
        symbolic_equal,
        numeric_points: points,
        numeric_failures,
        first_numeric_failure,
    })
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let numerator: i64 = rng.random_range(-12..=12);
    let denominator: i64 = rng.random_range(1..=9);
    BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// The exponent `v − ℓ(G) + c` relating `𝐂̃` to `𝐂`: with `v` vertices,
/// cycle rank `ℓ`, and `c` components, `𝐂̃(G,q,r,a) = q^{v−ℓ+c}·𝐂(G,qr,a)`.
pub fn tilde_exponent(graph: &HalfEdgeGraph) -> u32 {
    let stats = graph.stats();
    (stats.vertices + stats.components - stats.cycle_rank) as u32
}

/// Per-selection counting data for the identity
/// `(ℓ(G) − ℓ(G∖H)) + c(H) − c = v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionCount {
    pub selection: std::collections::BTreeSet<HalfEdgeId>,
    pub remainder_cycle_rank: u32,
    pub component_statistic: usize,
}

/// The counting data for every selection in ℋ.
pub fn selection_counts(graph: &HalfEdgeGraph) -> Result<Vec<SelectionCount>, CorollaError> {
    ensure_three_regular(graph)?;
    let options = one_per_vertex_options(graph);
    let mut out = Vec::new();
    scan_selections(graph, &options, false, &mut |leaf| {
        out.push(SelectionCount {
            selection: leaf.chosen.iter().copied().collect(),
            remainder_cycle_rank: leaf.remainder_cycles,
            component_statistic: leaf.remainder_components
                + leaf.chosen_externals
                + leaf.chosen_internal_edges,
        });
    });
    Ok(out)
}
