//! The acceptance gate: one test per criterion, numbered. Each runs its
//! full corpus and enforces the stated runtime budget where one is given.

mod common;

use corolla_core::corolla::{
    admissible_selections, component_count_c, corolla_by_definition, corolla_by_recurrence,
    corolla_by_subsets, relabel_polynomial, vertex_sum,
};
use corolla_core::cycles::enumerate_cycles;
use corolla_core::generators::FixtureName::{self, *};
use corolla_core::generators::{
    enumerate_small, fixture, random_graph, RandomGraphOptions, ALL_FIXTURES,
};
use corolla_core::genvalence::{
    contraction_deletion_residual, general_corolla, general_corolla_by_families,
};
use corolla_core::graph::ContractionMode;
use corolla_core::universal::{
    constrained_identity_check, potts_poly, selection_counts, tilde_exponent, universal_poly,
    universal_tilde,
};
use corolla_core::{HalfEdgeGraph, HalfEdgeId, Int, Monomial, Poly};
use rand::prelude::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

/// Fixtures, the exhaustive corpus to six vertices, and two hundred seeded
/// random three-regular graphs with at most ten vertices.
fn three_regular_corpus() -> Vec<HalfEdgeGraph> {
    let mut graphs: Vec<HalfEdgeGraph> = ALL_FIXTURES.into_iter().map(fixture).collect();
    graphs.extend(enumerate_small(6, true).expect("bound respected"));
    for seed in 0..200u64 {
        graphs.push(random_graph(
            seed,
            RandomGraphOptions {
                vertices: 4 + (seed as usize % 7),
                valence_range: (3, 3),
                external_fraction: 0.25,
                connected: true,
            },
        ));
    }
    graphs
}

/// One hundred seeded mixed-valence graphs, at most eight vertices with
/// valences two through five.
fn mixed_valence_corpus() -> Vec<HalfEdgeGraph> {
    (0..100u64)
        .map(|seed| {
            random_graph(
                1_000 + seed,
                RandomGraphOptions {
                    vertices: 3 + (seed as usize % 6),
                    valence_range: (2, 5),
                    external_fraction: 0.25,
                    connected: true,
                },
            )
        })
        .collect()
}

fn all_ones(value: &Poly) -> corolla_core::Rat {
    let one = corolla_core::Rat::from_integer(Int::from(1));
    value.evaluate(|_| one.clone(), &one, &one)
}

#[test]
fn criterion_01_cross_method_equality() {
    let start = Instant::now();
    for g in three_regular_corpus() {
        let by_definition = corolla_by_definition::<Int>(&g).unwrap();
        let by_subsets = corolla_by_subsets::<Int>(&g).unwrap();
        let by_recurrence = corolla_by_recurrence::<Int>(&g).unwrap();
        assert_eq!(by_definition, by_subsets, "{}", g.to_json_string());
        assert_eq!(by_subsets, by_recurrence, "{}", g.to_json_string());
    }
    assert!(
        start.elapsed().as_secs() < 60,
        "cross-method corpus exceeded its 60-second budget: {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_02_unit_coefficients_one_variable_per_vertex() {
    for g in three_regular_corpus() {
        let c = corolla_by_subsets::<Int>(&g).unwrap();
        let vertex_of = g.vertex_of_table();
        for (m, coeff) in c.terms() {
            assert_eq!(coeff, &Int::from(1), "{}", g.to_json_string());
            assert_eq!(m.r_exp, 0);
            assert_eq!(m.q_exp, 0);
            assert_eq!(m.vars.len(), g.vertex_count());
            let vertices: BTreeSet<usize> = m
                .vars
                .iter()
                .map(|&h| vertex_of[h as usize].expect("live id"))
                .collect();
            assert_eq!(vertices.len(), g.vertex_count(), "{}", g.to_json_string());
        }
    }
}

#[test]
fn criterion_03_base_cases_byte_exact() {
    let vertex = corolla_by_subsets::<Int>(&fixture(Vertex3)).unwrap();
    assert_eq!(vertex.canonical_text(), "+1*a0 +1*a1 +1*a2");
    let tadpole = corolla_by_subsets::<Int>(&fixture(Tadpole1)).unwrap();
    assert_eq!(tadpole.canonical_text(), "+1*a0 +1*a1");
}

#[test]
fn criterion_04_derived_counts_oracle_first() {
    // Brute-force numbers first, independent of the library's scan.
    let k4 = fixture(K4);
    let selections = common::every_selection(&k4);
    assert_eq!(selections.len(), 81);
    let mut rank_histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for s in &selections {
        *rank_histogram
            .entry(common::remainder_shape(&k4, s).cycle_rank)
            .or_insert(0) += 1;
    }
    assert_eq!(rank_histogram, BTreeMap::from([(0, 66), (1, 15)]));

    // Main build must reproduce them.
    let c = corolla_by_subsets::<Int>(&k4).unwrap();
    assert_eq!(c.term_count(), 66);
    assert_eq!(all_ones(&c), corolla_core::Rat::from_integer(Int::from(66)));

    // 𝐂(K4, r, 1) = 66 + 15r.
    let ones: BTreeMap<HalfEdgeId, Poly> =
        k4.half_edges().into_iter().map(|h| (h, Poly::one())).collect();
    let at_one_vars = universal_poly::<Int>(&k4).unwrap().substitute(&ones).unwrap();
    let mut from_histogram = Poly::zero();
    for (&rank, &count) in &rank_histogram {
        from_histogram.add_term(Monomial::r_pow(rank as u32), Int::from(count as i64));
    }
    assert_eq!(at_one_vars, from_histogram);
    assert_eq!(at_one_vars.canonical_text(), "+66 +15*r");

    // 𝐂(THETA): the six acyclic terms plus r times the three matched pairs.
    let theta = fixture(Theta);
    let oracle = common::oracle_universal(&theta);
    let mut literal = corolla_by_subsets::<Int>(&theta).unwrap();
    for pair in [[0u32, 3], [1, 4], [2, 5]] {
        literal += Poly::var_product(pair).mul_aux(&Poly::r());
    }
    assert_eq!(oracle, literal);
    assert_eq!(universal_poly::<Int>(&theta).unwrap(), oracle);
}

#[test]
fn criterion_05_multiplicativity_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for round in 0..50 {
        let a = fixture(*ALL_FIXTURES.as_slice().choose(&mut rng).unwrap());
        let b = fixture(*ALL_FIXTURES.as_slice().choose(&mut rng).unwrap());
        let union = a.disjoint_union(&b);
        let whole = corolla_by_subsets::<Int>(&union).unwrap();
        let shift: BTreeMap<HalfEdgeId, HalfEdgeId> = b
            .half_edges()
            .into_iter()
            .map(|h| (h, h + a.id_bound()))
            .collect();
        let shifted_b =
            relabel_polynomial(&corolla_by_subsets::<Int>(&b).unwrap(), &shift).unwrap();
        let product = corolla_by_subsets::<Int>(&a)
            .unwrap()
            .try_mul(&shifted_b)
            .unwrap();
        assert_eq!(whole, product, "round {round}");
    }
}

#[test]
fn criterion_06_restriction_equals_removal() {
    use corolla_core::corolla::corolla_restricted;
    for name in ALL_FIXTURES {
        let g = fixture(name);
        let edges: Vec<(HalfEdgeId, HalfEdgeId)> = g.internal_edges().collect();
        let mut edge_sets: Vec<Vec<(HalfEdgeId, HalfEdgeId)>> =
            edges.iter().map(|&e| vec![e]).collect();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                edge_sets.push(vec![edges[i], edges[j]]);
            }
        }
        for set in edge_sets {
            let removed = match g.remove_edge_set(&set) {
                Ok(removed) => removed,
                // Edges sharing a vertex are inadmissible for restriction.
                Err(_) => continue,
            };
            let restricted = corolla_restricted::<Int>(&g, &set).unwrap();
            let direct = corolla_by_subsets::<Int>(&removed).unwrap();
            assert_eq!(restricted, direct, "{name} E={set:?}");
        }
    }
}

#[test]
fn criterion_07_component_statistic_law() {
    for name in ALL_FIXTURES {
        let g = fixture(name);
        let stats = g.stats();
        assert_eq!(stats.components, 1, "{name} is connected");
        let expected = (stats.vertices + stats.external_edges) / 2;
        for t in admissible_selections(&g).unwrap() {
            assert_eq!(component_count_c(&g, &t), expected, "{name} T={t:?}");
        }
    }
}

#[test]
fn criterion_08_universal_identities() {
    let start = Instant::now();
    let q_times_r = Poly::from_monomial(
        Monomial { vars: Vec::new(), r_exp: 1, q_exp: 1 },
        Int::from(1),
    );
    for g in three_regular_corpus() {
        let universal = universal_poly::<Int>(&g).unwrap();
        assert_eq!(
            universal.substitute_r(&Poly::zero()),
            corolla_by_subsets::<Int>(&g).unwrap(),
            "{}",
            g.to_json_string()
        );
        let mut product = Poly::one();
        for v in 0..g.vertex_count() {
            product = product.try_mul(&vertex_sum::<Int>(&g, v).unwrap()).unwrap();
        }
        assert_eq!(universal.substitute_r(&Poly::one()), product, "{}", g.to_json_string());

        let tilde = universal_tilde::<Int>(&g).unwrap();
        let reweighted = universal
            .substitute_r(&q_times_r)
            .mul_aux(&Poly::from_monomial(
                Monomial::q_pow(tilde_exponent(&g)),
                Int::from(1),
            ));
        assert_eq!(tilde, reweighted, "{}", g.to_json_string());

        let stats = g.stats();
        for count in selection_counts(&g).unwrap() {
            let balance = stats.cycle_rank as i64 - count.remainder_cycle_rank as i64
                + count.component_statistic as i64
                - stats.components as i64;
            assert_eq!(balance, stats.vertices as i64, "{}", g.to_json_string());
        }
    }
    assert!(
        start.elapsed().as_secs() < 120,
        "universal-identity corpus exceeded its 120-second budget: {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_09_potts_oracle() {
    for name in ALL_FIXTURES {
        let g = fixture(name);
        if enumerate_cycles(&g).len() > 7 {
            continue;
        }
        let universal = universal_poly::<Int>(&g).unwrap();
        for states in 1..=3u64 {
            let potts = potts_poly::<Int>(&g, states).unwrap();
            let at_states = universal.substitute_r(&Poly::constant(Int::from(states)));
            assert_eq!(potts, at_states, "{name} at r = {states}");
        }
    }
}

#[test]
fn criterion_10_constrained_evaluation() {
    for g in enumerate_small(6, true).expect("bound respected") {
        let check = constrained_identity_check(&g).unwrap();
        assert!(
            check.passed(),
            "{}: symbolic {}, numeric failures {}/{}",
            g.to_json_string(),
            check.symbolic_equal,
            check.numeric_failures,
            check.numeric_points
        );
        assert_eq!(check.numeric_points, 20);
    }
    let dumbbell = constrained_identity_check(&fixture(Dumbbell)).unwrap();
    assert!(dumbbell.passed());
    let r_minus_one = Poly::r() - Poly::one();
    let closed_form = Poly::var_sum([0, 1])
        .try_mul(&Poly::var_sum([3, 4]))
        .unwrap()
        .mul_aux(&r_minus_one)
        .mul_aux(&r_minus_one);
    assert_eq!(dumbbell.lhs, closed_form);
    assert_eq!(dumbbell.rhs, closed_form);
}

#[test]
fn criterion_11_general_valence_paths_agree() {
    for g in mixed_valence_corpus() {
        assert_eq!(
            general_corolla::<Int>(&g).unwrap(),
            general_corolla_by_families::<Int>(&g).unwrap(),
            "{}",
            g.to_json_string()
        );
    }
    for name in ALL_FIXTURES {
        let g = fixture(name);
        assert_eq!(
            general_corolla::<Int>(&g).unwrap(),
            corolla_by_subsets::<Int>(&g).unwrap(),
            "{name}"
        );
    }
    for seed in 0..20u64 {
        let g = random_graph(
            2_000 + seed,
            RandomGraphOptions { vertices: 4 + (seed as usize % 4), ..Default::default() },
        );
        assert_eq!(
            general_corolla::<Int>(&g).unwrap(),
            corolla_by_subsets::<Int>(&g).unwrap(),
            "seed {seed}"
        );
    }
}

#[test]
fn criterion_12_contraction_deletion() {
    for g in mixed_valence_corpus() {
        let edges: Vec<(HalfEdgeId, HalfEdgeId)> = g
            .internal_edges()
            .filter(|&(h, k)| !g.is_tadpole_edge(h, k))
            .collect();
        for (h, k) in edges {
            let residual =
                contraction_deletion_residual::<Int>(&g, (h, k), ContractionMode::Split).unwrap();
            assert!(
                residual.is_zero(),
                "split residual nonzero at ({h},{k}) of {}: {residual}",
                g.to_json_string()
            );
        }
    }
    let frozen = contraction_deletion_residual::<Int>(
        &fixture(FixtureName::HGraph),
        (2, 5),
        ContractionMode::Naive,
    )
    .unwrap();
    assert_eq!(frozen.canonical_text(), "+1*a0*a1 +1*a3*a4");
}
