mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use hyperchip::counting::*;
use hyperchip::digraph::*;
use hyperchip::firing::*;
use hyperchip::ideal::*;
use hyperchip::parking::*;
use hyperchip::trees::*;
use hyperchip::{catalog, Configuration, Error, Hypergraph, VertexSet};
use num_bigint::BigInt;
use proptest::prelude::*;

const GUARD: u64 = 1 << 24;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 256, ..ProptestConfig::default() }
}

/// A random cycling: one arbitrary permutation per edge.
fn shuffled_cycling(h: &Hypergraph, seeds: &[u64]) -> Cycling {
    let cycles = h
        .edges()
        .iter()
        .zip(seeds.iter().cycle())
        .map(|(e, &s)| {
            let mut c = e.clone();
            let mut x = s;
            for i in (1..c.len()).rev() {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                c.swap(i, (x >> 33) as usize % (i + 1));
            }
            c
        })
        .collect();
    Cycling::new(h, cycles).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn burning_matches_bruteforce(h in hypergraph(6, 6)) {
        for c in test_box(&h) {
            let expected = oracle_parking(&h, &c);
            prop_assert_eq!(is_parking_burn(&h, &c), expected, "{}", c);
            prop_assert_eq!(is_parking_bruteforce(&h, &c), expected, "{}", c);
        }
    }

    #[test]
    fn enumeration_matches_oracle(h in hypergraph(6, 6)) {
        let want = oracle_parking_set(&h);
        prop_assert_eq!(enumerate_parking(&h, GUARD).unwrap(), want.clone());
        prop_assert_eq!(enumerate_parking_box(&h, GUARD).unwrap(), want);
    }

    #[test]
    fn superstable_by_cancellative_firing_is_parking(h in hypergraph(5, 5), pick in any::<u64>()) {
        let box_ = test_box(&h);
        let c = &box_[pick as usize % box_.len()];
        let mut superstable = true;
        for t in VertexSet::nonempty_subsets(h.n()) {
            match ready_to_fire_oracle(&h, c, t, GUARD) {
                Ok(ready) => superstable &= !ready,
                Err(Error::SizeGuard { .. }) => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
        prop_assert_eq!(superstable, oracle_parking(&h, c));
        prop_assert_eq!(is_superstable(&h, c), oracle_parking(&h, c));
    }

    #[test]
    fn ready_to_fire_matches_exhaustive_choices(h in hypergraph(6, 6), pick in any::<u64>(), mask in any::<u64>()) {
        let box_ = test_box(&h);
        let c = &box_[pick as usize % box_.len()];
        let t = VertexSet::from_bits(mask & ((1u64 << h.n()) - 1));
        prop_assume!(!t.is_empty());
        match ready_to_fire_oracle(&h, c, t, GUARD) {
            Ok(oracle) => prop_assert_eq!(ready_to_fire(&h, c, t), oracle),
            Err(Error::SizeGuard { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn draining_choice_realises_the_bound(h in hypergraph(6, 6), mask in any::<u64>(), pick in any::<u64>()) {
        let t = VertexSet::from_bits(mask & ((1u64 << h.n()) - 1));
        prop_assume!(!t.is_empty());
        let members: Vec<usize> = t.sites().collect();
        let site = members[pick as usize % members.len()];
        let choice = draining_choice(&h, t, site).unwrap();
        prop_assert!(is_cancellative(&h, t, &choice));
        let zero = ChipVector(vec![0; h.n()]);
        let out = fire_set(&h, &zero, t, &choice).unwrap();
        let set: Vec<usize> = t.sites().map(|s| h.site_vertex(s)).collect();
        prop_assert_eq!(out.0[site], -i64::from(t_degree(&h, &set, h.site_vertex(site))));
    }

    #[test]
    fn cycling_digraphs_are_eulerian_and_park_inside(h in hypergraph(6, 6), seeds in prop::collection::vec(any::<u64>(), 6)) {
        let c = shuffled_cycling(&h, &seeds);
        let d = digraph_from_cycling(&h, &c);
        prop_assert!(d.is_eulerian());
        prop_assert!(d.reduced_laplacian().row_sums().iter().all(|&s| s >= 0));
        let parking = d.parking_functions(GUARD).unwrap();
        let all = oracle_parking_set(&h);
        prop_assert!(parking.iter().all(|p| all.contains(p)));
        prop_assert_eq!(d.superstables(GUARD).unwrap(), parking);
    }

    #[test]
    fn standard_monomials_are_parking(h in hypergraph(6, 6)) {
        let gens: Vec<_> = cut_ideal_generators(&h, GUARD).unwrap().into_iter().map(|(_, m)| m).collect();
        let min = minimal_generators(&gens);
        for (i, a) in min.iter().enumerate() {
            for (j, b) in min.iter().enumerate() {
                prop_assert!(i == j || !a.divides(b));
            }
        }
        for c in test_box(&h) {
            let p = oracle_parking(&h, &c);
            prop_assert_eq!(is_standard_monomial(&gens, &c), p);
            prop_assert_eq!(is_standard_monomial(&min, &c), p);
        }
    }

    #[test]
    fn maximal_degrees_are_constant(h in hypergraph(6, 6)) {
        let max = maximal_parking(&h, GUARD).unwrap();
        prop_assert_eq!(&max, &maximal_elements(&oracle_parking_set(&h)));
        let degrees: BTreeSet<u64> = max.iter().map(Configuration::degree).collect();
        prop_assert_eq!(degrees.len(), 1);
        let expected = h.edges().iter().map(|e| e.len() as u64 - 1).sum::<u64>() - h.n() as u64;
        prop_assert_eq!(*degrees.iter().next().unwrap(), expected);
        for o in enumerate_acyclic_orientations(&h, GUARD).unwrap() {
            prop_assert!(max.contains(&orientation_to_config(&h, &o).unwrap()));
        }
    }

    #[test]
    fn graphs_reproduce_classical_parking(h in graph(5, 7)) {
        let d = graph_digraph(&h).unwrap();
        let classical = d.parking_functions(GUARD).unwrap();
        prop_assert_eq!(enumerate_parking(&h, GUARD).unwrap(), classical.clone());
        let pairs: Vec<(usize, usize)> = h.edges().iter().map(|e| (e[0], e[1])).collect();
        let trees = oracle_spanning_tree_count(h.vertex_count(), &pairs);
        prop_assert_eq!(classical.len(), trees);
        prop_assert_eq!(laplacian_determinant(&d.reduced_laplacian()), BigInt::from(trees));
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn hypertree_constant_on_classes(h in hypergraph(4, 4)) {
        let b = h.bipartite_incidence();
        let mut seen: BTreeMap<TreeClass, Hypertree> = BTreeMap::new();
        for t in all_spanning_trees(&b, 14).unwrap() {
            let f = hypertree_of(&b, &t);
            let class = tree_class_of(&b, &t);
            if let Some(prev) = seen.get(&class) {
                prop_assert_eq!(prev, &f);
            } else {
                seen.insert(class, f);
            }
        }
        prop_assert_eq!(seen.len(), oracle_parking_set(&h).len());
    }

    #[test]
    fn bijection_round_trips(h in hypergraph(5, 4), seed in any::<u64>()) {
        let b = h.bipartite_incidence();
        let mut seq: Vec<usize> = (0..b.node_count()).filter(|&x| x != b.root()).collect();
        let mut x = seed;
        for i in (1..seq.len()).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            seq.swap(i, (x >> 33) as usize % (i + 1));
        }
        seq.insert(0, b.root());
        let order = TreeOrder::from_sequence(&b, &seq).unwrap();
        let (rows, distinct) = audit_bijection(&h, &order, GUARD).unwrap();
        prop_assert!(distinct);
        prop_assert!(rows.iter().all(|r| r.passed()));
        for r in &rows {
            let back = tree_to_parking(&h, &r.canonical, &order);
            prop_assert_eq!(&back.vertices, &r.config);
            prop_assert_eq!(tree_class_of(&b, &r.canonical), r.class.clone());
        }
    }

    #[test]
    fn stars_count_by_degree_product(h in star(5, 4)) {
        let count: u64 = (0..h.vertex_count()).filter(|&v| v != h.sink()).map(|v| h.degree(v) as u64).product();
        let d = star_digraph(&h).unwrap();
        prop_assert_eq!(laplacian_determinant(&d.reduced_laplacian()), BigInt::from(count));
        prop_assert_eq!(enumerate_parking(&h, GUARD).unwrap().len() as u64, count);
        prop_assert_eq!(tree_classes(&h, 14).unwrap().len() as u64, count);
        let max = maximal_parking(&h, GUARD).unwrap();
        let top: Vec<u32> = h.site_degrees().iter().map(|d| d - 1).collect();
        prop_assert_eq!(max, vec![Configuration(top)]);
    }

    #[test]
    fn union_over_cyclings_is_parking(h in hypergraph(5, 4)) {
        let u = union_over_cyclings(&h, GUARD).unwrap();
        prop_assert_eq!(&u.union, &oracle_parking_set(&h));
        prop_assert_eq!(&u.sink_first_union, &u.union);
    }

    #[test]
    fn steck_counts_u_parking(mut u in prop::collection::vec(0u32..=6, 1..=4)) {
        u.sort_unstable();
        let top = *u.last().unwrap();
        let houses = UVector::new(u.clone()).unwrap();
        let brute = grid(&vec![top.saturating_sub(1); u.len()])
            .into_iter()
            .filter(|c| top > 0 && is_u_parking(&houses, c))
            .count();
        prop_assert_eq!(steck_count(&houses), BigInt::from(brute));
    }
}

#[test]
fn complete_hypergraphs_park_by_houses() {
    for (n, d) in [(3, 2), (3, 3), (4, 3)] {
        let h = catalog::complete(n + 1, d);
        let u = u_vector_complete(n, d).unwrap();
        let houses = grid(&vec![u.as_slice()[n - 1]; n]);
        let by_houses: Vec<Configuration> = houses.into_iter().filter(|c| is_u_parking(&u, c)).collect();
        let parking = enumerate_parking(&h, GUARD).unwrap();
        assert_eq!(parking, by_houses, "n={n} d={d}");
        assert_eq!(BigInt::from(parking.len()), steck_count(&u));
        let fact = |k: usize| (1..=k).product::<usize>();
        let max = maximal_parking(&h, GUARD).unwrap();
        assert_eq!(max.len(), fact(n) / fact(d - 1));
        assert_eq!(max, maximal_u_parking(&u));
        assert_eq!(maximal_elements(&by_houses), max);
    }
}

#[test]
fn classical_steck_is_cayley() {
    for n in 1..=5u32 {
        let u = UVector::new((1..=n).collect()).unwrap();
        let brute = grid(&vec![n - 1; n as usize]).into_iter().filter(|c| is_u_parking(&u, c)).count();
        assert_eq!(BigInt::from(brute), BigInt::from(n + 1).pow(n - 1));
        assert_eq!(steck_count(&u), BigInt::from(brute));
    }
}

#[test]
fn bipartite_acyclic_counts_match_bruteforce() {
    for (m, n) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)] {
        let edges: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, m + j))).collect();
        let brute = oracle_acyclic_orientations(m + n, &edges);
        assert_eq!(acyclic_count_complete_bipartite(m, n).unwrap(), BigInt::from(brute), "K_{m},{n}");
    }
    assert_eq!(acyclic_count_complete_bipartite(2, 2).unwrap(), BigInt::from(14));
}

#[test]
fn k4_matrix_tree() {
    let h = catalog::complete(4, 2);
    let pairs: Vec<(usize, usize)> = h.edges().iter().map(|e| (e[0], e[1])).collect();
    assert_eq!(oracle_spanning_tree_count(4, &pairs), 16);
    let d = graph_digraph(&h).unwrap();
    assert_eq!(d.parking_functions(GUARD).unwrap().len(), 16);
    assert_eq!(laplacian_determinant(&d.reduced_laplacian()), BigInt::from(16));
}
