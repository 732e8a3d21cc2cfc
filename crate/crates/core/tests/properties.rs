use proptest::prelude::*;

use housealloc::connected::solve_connected;
use housealloc::dispatch::{local_search, solve, SolveOptions};
use housealloc::instance::Instance;
use housealloc::oracle::{brute_force, canonicalize, Symmetry, DEFAULT_BUDGET};
use housealloc::union::{
    solve_cliques_xp, solve_matching_graph, solve_union_by_ordering, DEFAULT_UNION_BUDGET,
};
use housealloc::{invert_profile, total_envy, Allocation, Graph, Rational, ValueProfile};

fn values(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..40, n)
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

/// Any simple graph on 1..=7 vertices with values and an allocation.
fn instance() -> impl Strategy<Value = (Graph, Vec<i64>, Vec<usize>)> {
    (1usize..=7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let m = pairs.len();
        (
            prop::collection::vec(any::<bool>(), m).prop_map(move |keep| {
                let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e);
                Graph::new(n, edges).unwrap()
            }),
            values(n),
            permutation(n),
        )
    })
}

fn connected_closed_form() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (1usize..=7).prop_map(Graph::path),
        (3usize..=7).prop_map(|n| Graph::cycle(n).unwrap()),
        (0usize..=6).prop_map(Graph::star),
        (1usize..=7).prop_map(Graph::complete),
        (1usize..=3, 1usize..=4).prop_map(|(s, r)| Graph::complete_bipartite(r, s)),
    ]
}

fn profile(v: &[i64]) -> ValueProfile {
    ValueProfile::from_ints(v).unwrap()
}

fn oracle(g: &Graph, p: &ValueProfile) -> Rational {
    brute_force(g, p, DEFAULT_BUDGET).unwrap().envy
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_forms_match_oracle(
        (g, perm, vals) in connected_closed_form()
            .prop_flat_map(|g| { let n = g.vertex_count(); (Just(g), permutation(n), values(n)) })
    ) {
        let g = g.relabel(&perm).unwrap();
        let p = profile(&vals);
        let r = solve_connected(&g, &p).unwrap();
        prop_assert_eq!(&r.envy, &oracle(&g, &p));
        prop_assert_eq!(total_envy(&r.allocation, &g, &p).unwrap(), r.envy);
    }

    #[test]
    fn union_solvers_match_oracle(
        sizes in prop::collection::vec(1usize..=3, 1..=3),
        vals in values(9),
        family in 0u8..3,
    ) {
        let parts: Vec<Graph> = sizes.iter().map(|&q| match family {
            0 => Graph::path(q),
            1 => Graph::complete(q),
            _ => Graph::star(q - 1),
        }).collect();
        let g = Graph::disjoint_union(&parts);
        let p = profile(&vals[..g.vertex_count()]);
        let want = oracle(&g, &p);
        if family == 1 {
            // unequal cliques are outside ordering enumeration
            prop_assert_eq!(&solve_cliques_xp(&g, &p, DEFAULT_UNION_BUDGET).unwrap().envy, &want);
        } else {
            prop_assert_eq!(&solve_union_by_ordering(&g, &p, DEFAULT_UNION_BUDGET).unwrap().envy, &want);
        }
        let auto = solve(&g, &p, &SolveOptions::default()).unwrap();
        prop_assert_eq!(&auto.envy, &want);
    }

    #[test]
    fn matching_dp_matches_oracle(pairs in 0usize..=3, isolated in 0usize..=2, vals in values(8)) {
        let mut parts = vec![Graph::path(2); pairs];
        parts.push(Graph::empty(isolated));
        let g = Graph::disjoint_union(&parts);
        let p = profile(&vals[..g.vertex_count()]);
        prop_assert_eq!(solve_matching_graph(&g, &p).unwrap().envy, oracle(&g, &p));
    }

    #[test]
    fn envy_is_invariant_under_relabelling((g, vals, alloc) in instance(), seed in any::<u64>()) {
        let n = g.vertex_count();
        let p = profile(&vals);
        let a = Allocation::new(alloc.clone()).unwrap();
        // rotate as a cheap permutation derived from the seed
        let shift = (seed as usize) % n;
        let perm: Vec<usize> = (0..n).map(|v| (v + shift) % n).collect();
        let h = g.relabel(&perm).unwrap();
        let mut moved = vec![0; n];
        for v in 0..n {
            moved[perm[v]] = alloc[v];
        }
        let b = Allocation::new(moved).unwrap();
        prop_assert_eq!(total_envy(&a, &g, &p).unwrap(), total_envy(&b, &h, &p).unwrap());
    }

    #[test]
    fn envy_ignores_shift_and_scales((g, vals, alloc) in instance(), c in 0i64..50, k in 1i64..6) {
        let p = profile(&vals);
        let a = Allocation::new(alloc).unwrap();
        let base = total_envy(&a, &g, &p).unwrap();
        let shifted = profile(&vals.iter().map(|v| v + c).collect::<Vec<_>>());
        let scaled = profile(&vals.iter().map(|v| v * k).collect::<Vec<_>>());
        prop_assert_eq!(total_envy(&a, &g, &shifted).unwrap(), base.clone());
        prop_assert_eq!(total_envy(&a, &g, &scaled).unwrap(), base * Rational::from_integer(k));
    }

    #[test]
    fn inverting_values_keeps_the_optimum((g, vals, _) in instance()) {
        let p = profile(&vals);
        prop_assert_eq!(oracle(&g, &p), oracle(&g, &invert_profile(&p)));
    }

    #[test]
    fn instances_round_trip((g, vals, _) in instance()) {
        let inst = Instance::identical(g, profile(&vals)).unwrap();
        let back = Instance::from_json(&inst.to_json()).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn canonicalize_is_idempotent(perm in (3usize..=7).prop_flat_map(permutation)) {
        let n = perm.len();
        let a = Allocation::new(perm).unwrap();
        let cycle = Symmetry::cycle(n);
        let once = canonicalize(&a, &cycle).unwrap();
        prop_assert_eq!(canonicalize(&once, &cycle).unwrap(), once);
        let bip = Symmetry::bipartite(n - 1, 1);
        let once = canonicalize(&a, &bip).unwrap();
        prop_assert_eq!(canonicalize(&once, &bip).unwrap(), once);
    }

    #[test]
    fn local_search_never_beats_the_oracle((g, vals, _) in instance()) {
        let p = profile(&vals);
        let r = local_search(&g, &p, None).unwrap();
        prop_assert!(r.envy >= oracle(&g, &p));
        prop_assert_eq!(total_envy(&r.allocation, &g, &p).unwrap(), r.envy);
    }
}
