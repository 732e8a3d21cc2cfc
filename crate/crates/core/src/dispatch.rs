//! Solver selection.
//!
//! [`solve`] inspects the component mix and runs the cheapest exact solver
//! that applies, falling back to exhaustive search within the budget and
//! finally to swap-based local search (reported as heuristic).

use std::collections::VecDeque;

use crate::allocation::{Allocation, Guarantee, SolveResult};
use crate::connected::{place_block, solve_complete_general, solve_connected};
use crate::envy::total_envy;
use crate::error::{input, Error, Result};
use crate::graph::{binary_tree_root, classify_component, ComponentClass, Graph, RootedTree};
use crate::instance::{Instance, Valuation};
use crate::oracle::{brute_force, DEFAULT_BUDGET};
use crate::profile::{ValueMatrix, ValueProfile};
use crate::scaled::{cubic_growth, with_scaled, Cost, Scale, ScaledTask};
use crate::tree::local_median_fixpoint;
use crate::union::{
    classified_components, solve_cliques_xp, solve_equal_cliques, solve_matching_graph,
    solve_union_by_ordering, solve_union_paths_dp, strongly_separable_family, Family,
    DEFAULT_UNION_BUDGET,
};

/// Every name accepted by [`SolveOptions::solver`].
pub const SOLVERS: &[&str] = &[
    "auto",
    "path",
    "cycle",
    "star",
    "clique",
    "complete_bipartite",
    "complete_general",
    "union_ordering",
    "union_paths_dp",
    "matching_dp",
    "equal_cliques",
    "cliques_xp",
    "brute_force",
    "local_median_fixpoint",
    "local_search",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// A name from [`SOLVERS`]; `None` means `auto`.
    pub solver: Option<String>,
    /// Cap on exhaustive permutations.
    pub budget: u128,
    /// Cap on orderings, DP states and window choices.
    pub union_budget: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            solver: None,
            budget: DEFAULT_BUDGET,
            union_budget: DEFAULT_UNION_BUDGET,
        }
    }
}

/// Solves an instance, routing per-agent valuations to the assignment
/// solver (complete graphs only).
pub fn solve_instance(inst: &Instance, opts: &SolveOptions) -> Result<SolveResult> {
    match &inst.valuation {
        Valuation::Identical(profile) => {
            if opts.solver.as_deref() == Some("local_median_fixpoint") {
                if let Some(root) = inst.root {
                    let tree = RootedTree::new(inst.graph.clone(), root)?;
                    return local_median_fixpoint(&tree, &Allocation::identity(inst.n()), profile);
                }
            }
            solve(&inst.graph, profile, opts)
        }
        Valuation::General(matrix) => match opts.solver.as_deref() {
            None | Some("auto") | Some("complete_general") => solve_general(&inst.graph, matrix),
            Some(other) => Err(Error::Dispatch(format!(
                "solver `{other}` needs identical valuations"
            ))),
        },
    }
}

fn solve_general(graph: &Graph, matrix: &ValueMatrix) -> Result<SolveResult> {
    let n = graph.vertex_count();
    if graph.edge_count() != n * n.saturating_sub(1) / 2 {
        return Err(Error::Dispatch(
            "per-agent valuations are only solved on complete graphs".into(),
        ));
    }
    solve_complete_general(matrix)
}

/// Solves with identical valuations.
pub fn solve(graph: &Graph, profile: &ValueProfile, opts: &SolveOptions) -> Result<SolveResult> {
    if graph.vertex_count() != profile.len() {
        return input(format!(
            "graph has {} vertices but {} values were given",
            graph.vertex_count(),
            profile.len()
        ));
    }
    let name = opts.solver.as_deref().unwrap_or("auto");
    match name {
        "auto" => solve_auto(graph, profile, opts),
        "path" | "cycle" | "star" | "clique" | "complete_bipartite" => {
            expect_class(graph, name)?;
            solve_connected(graph, profile)
        }
        "complete_general" => solve_general(graph, &ValueMatrix::identical(profile)),
        "union_ordering" => solve_union_by_ordering(graph, profile, opts.union_budget),
        "union_paths_dp" => solve_union_paths_dp(graph, profile, opts.union_budget),
        "matching_dp" => solve_matching_graph(graph, profile),
        "equal_cliques" => solve_equal_cliques(graph, profile),
        "cliques_xp" => solve_cliques_xp(graph, profile, opts.union_budget),
        "brute_force" => brute_force(graph, profile, opts.budget),
        "local_median_fixpoint" => {
            let root = binary_tree_root(graph)
                .ok_or_else(|| Error::Dispatch("graph is not a full binary tree".into()))?;
            let tree = RootedTree::new(graph.clone(), root)?;
            local_median_fixpoint(&tree, &Allocation::identity(graph.vertex_count()), profile)
        }
        "local_search" => local_search(graph, profile, None),
        other => Err(Error::Dispatch(format!(
            "unknown solver `{other}` (known: {})",
            SOLVERS.join(", ")
        ))),
    }
}

fn expect_class(graph: &Graph, name: &str) -> Result<()> {
    if !graph.is_connected() {
        return Err(Error::Dispatch(format!(
            "solver `{name}` needs a connected graph"
        )));
    }
    let class = classify_component(graph);
    let ok = match name {
        "path" => matches!(class, ComponentClass::Path(_)),
        "cycle" => matches!(class, ComponentClass::Cycle(_)),
        "star" => matches!(class, ComponentClass::Star(_)),
        "clique" => matches!(class, ComponentClass::Clique(_)),
        _ => matches!(class, ComponentClass::CompleteBipartite(..)),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Dispatch(format!(
            "solver `{name}` does not apply to a {} graph",
            class.name()
        )))
    }
}

fn solve_auto(graph: &Graph, profile: &ValueProfile, opts: &SolveOptions) -> Result<SolveResult> {
    let n = graph.vertex_count();
    if n > 0 && graph.is_connected() {
        let class = classify_component(graph);
        if !matches!(class, ComponentClass::BinaryTree | ComponentClass::Generic) {
            return solve_connected(graph, profile);
        }
        return exhaustive_or_heuristic(graph, profile, opts);
    }
    let classes: Vec<ComponentClass> = classified_components(graph)
        .into_iter()
        .map(|p| p.1)
        .collect();
    let attempt = if classes
        .iter()
        .all(|c| matches!(c, ComponentClass::Path(1..=2)))
    {
        Some(solve_matching_graph(graph, profile))
    } else {
        match strongly_separable_family(&classes) {
            Some(Family::Paths) => Some(
                solve_union_paths_dp(graph, profile, opts.union_budget)
                    .or_else(|_| solve_union_by_ordering(graph, profile, opts.union_budget)),
            ),
            Some(Family::Cycles) | Some(Family::Stars) => {
                Some(solve_union_by_ordering(graph, profile, opts.union_budget))
            }
            Some(Family::EqualCliques) => Some(solve_equal_cliques(graph, profile)),
            None if classes.iter().all(|c| c.clique_size().is_some()) => {
                Some(solve_cliques_xp(graph, profile, opts.union_budget))
            }
            None => None,
        }
    };
    match attempt {
        Some(Ok(res)) => Ok(res),
        Some(Err(Error::Budget { .. })) | None => exhaustive_or_heuristic(graph, profile, opts),
        Some(Err(e)) => Err(e),
    }
}

fn exhaustive_or_heuristic(
    graph: &Graph,
    profile: &ValueProfile,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    match brute_force(graph, profile, opts.budget) {
        Err(Error::Budget { .. }) => local_search(graph, profile, None),
        other => other,
    }
}

/// Pairwise-swap descent from `start`, or from a block layout when `start`
/// is `None`. Always reported as heuristic.
///
/// The start layout gives each component a consecutive rank range (in
/// component order); closed-form components are placed optimally inside
/// their range and the rest in breadth-first order. Swaps are tried between
/// vertices whose ranks differ by at most a window that shrinks as `n`
/// grows, and improving swaps are applied until a pass finds none.
pub fn local_search(
    graph: &Graph,
    profile: &ValueProfile,
    start: Option<&Allocation>,
) -> Result<SolveResult> {
    let n = graph.vertex_count();
    if n != profile.len() {
        return input("graph and profile sizes differ");
    }
    let start = match start {
        Some(a) if a.len() != n => return input("start allocation has the wrong size"),
        Some(a) => a.clone(),
        None => block_layout(graph, profile)?,
    };
    let ranks: Vec<usize> = start
        .as_slice()
        .iter()
        .map(|&h| profile.rank_of(h))
        .collect();
    let ranks = with_scaled(profile, cubic_growth(n), Descent { graph, ranks });
    let allocation = Allocation::new(ranks.into_iter().map(|r| profile.house_at(r)).collect())?;
    let envy = total_envy(&allocation, graph, profile)?;
    Ok(SolveResult {
        allocation,
        envy,
        solver: "local_search".into(),
        guarantee: Guarantee::Heuristic,
    })
}

fn block_layout(graph: &Graph, profile: &ValueProfile) -> Result<Allocation> {
    let mut assignment = vec![0; graph.vertex_count()];
    let mut next = 0;
    for (comp, class) in classified_components(graph) {
        let ranks: Vec<usize> = (next..next + comp.len()).collect();
        next += comp.len();
        let local = match place_block(&comp.graph, class, &ranks, profile) {
            Ok(local) => local,
            Err(_) => {
                let mut local = vec![0; comp.len()];
                for (i, v) in bfs_from_min_degree(&comp.graph).into_iter().enumerate() {
                    local[v] = profile.house_at(ranks[i]);
                }
                local
            }
        };
        for (i, &v) in comp.vertices.iter().enumerate() {
            assignment[v] = local[i];
        }
    }
    Allocation::new(assignment)
}

fn bfs_from_min_degree(graph: &Graph) -> Vec<usize> {
    let n = graph.vertex_count();
    let Some(start) = (0..n).min_by_key(|&v| (graph.degree(v), v)) else {
        return Vec::new();
    };
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in graph.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    order
}

const MAX_PASSES: usize = 100;
const WORK_PER_PASS: usize = 2_000_000;
const TOTAL_WORK: usize = 20_000_000;

struct Descent<'a> {
    graph: &'a Graph,
    ranks: Vec<usize>,
}

impl ScaledTask for Descent<'_> {
    type Output = Vec<usize>;

    fn run<T: Cost>(self, values: &[T], _scale: &Scale) -> Vec<usize> {
        let Descent { graph, mut ranks } = self;
        let n = ranks.len();
        if n < 2 {
            return ranks;
        }
        let mut at = vec![0; n];
        for (v, &r) in ranks.iter().enumerate() {
            at[r] = v;
        }
        let window = (WORK_PER_PASS / n).clamp(1, n - 1);
        // change in envy when a and b trade ranks
        let delta = |ranks: &[usize], a: usize, b: usize| -> (T, T) {
            let (x, y) = (&values[ranks[a]], &values[ranks[b]]);
            let mut gain = T::zero();
            let mut loss = T::zero();
            for (me, mine, theirs, other) in [(a, x, y, b), (b, y, x, a)] {
                for &u in graph.neighbors(me) {
                    if u == other {
                        continue;
                    }
                    let vu = &values[ranks[u]];
                    loss = loss.plus(&theirs.abs_diff(vu));
                    gain = gain.plus(&mine.abs_diff(vu));
                }
            }
            (loss, gain)
        };
        let passes = (TOTAL_WORK / (n * window)).clamp(1, MAX_PASSES);
        for _ in 0..passes {
            let mut improved = false;
            for r in 0..n {
                for d in 1..=window.min(n - 1 - r) {
                    let (a, b) = (at[r], at[r + d]);
                    let (after, before) = delta(&ranks, a, b);
                    if after < before {
                        ranks.swap(a, b);
                        at.swap(r, r + d);
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        ranks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{
        random_connected_graph, random_disconnected_graph, random_values, seeded,
    };
    use crate::oracle::brute_force;
    use crate::rational::Rational;

    fn ints(v: &[i64]) -> ValueProfile {
        ValueProfile::from_ints(v).unwrap()
    }

    fn auto(g: &Graph, p: &ValueProfile) -> SolveResult {
        solve(g, p, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn routes_by_structure() {
        let p = ints(&[1, 2, 4, 5, 6]);
        assert_eq!(auto(&Graph::path(5), &p).solver, "path");
        assert_eq!(auto(&Graph::cycle(5).unwrap(), &p).solver, "cycle");
        let matching = Graph::new(5, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(auto(&matching, &p).solver, "matching_dp");
        let paths = Graph::disjoint_union(&[Graph::path(3), Graph::path(2)]);
        assert_eq!(auto(&paths, &p).solver, "union_paths_dp");
        let mixed = Graph::disjoint_union(&[Graph::complete(3), Graph::path(2)]);
        assert_eq!(auto(&mixed, &p).solver, "cliques_xp");
        let cliques = Graph::disjoint_union(&[Graph::complete(2), Graph::complete(2)]);
        assert_eq!(auto(&cliques, &ints(&[1, 2, 3, 4])).solver, "matching_dp");
        let generic = Graph::new(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let r = auto(&generic, &p);
        assert_eq!(r.solver, "brute_force");
        assert_eq!(r.guarantee, Guarantee::Exact);
    }

    #[test]
    fn falls_back_to_heuristic_over_budget() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let opts = SolveOptions {
            budget: 10,
            ..SolveOptions::default()
        };
        let r = solve(&g, &ints(&[1, 2, 4, 5, 6]), &opts).unwrap();
        assert_eq!(r.guarantee, Guarantee::Heuristic);
        assert_eq!(
            total_envy(&r.allocation, &g, &ints(&[1, 2, 4, 5, 6])).unwrap(),
            r.envy
        );
    }

    #[test]
    fn named_solvers_check_applicability() {
        let p = ints(&[1, 2, 4, 5, 6]);
        let named = |s: &str| SolveOptions {
            solver: Some(s.into()),
            ..SolveOptions::default()
        };
        assert!(solve(&Graph::path(5), &p, &named("cycle")).is_err());
        assert!(solve(&Graph::path(5), &p, &named("nope")).is_err());
        let r = solve(&Graph::complete(5), &p, &named("complete_general")).unwrap();
        assert_eq!(r.envy, auto(&Graph::complete(5), &p).envy);
        let t = RootedTree::complete_binary(3);
        let r = solve(
            t.graph(),
            &ints(&[0, 1, 2, 3, 4, 5, 6]),
            &named("local_median_fixpoint"),
        )
        .unwrap();
        assert_eq!(r.guarantee, Guarantee::Heuristic);
    }

    #[test]
    fn auto_matches_oracle_on_random_graphs() {
        let mut rng = seeded(5);
        for i in 0..40 {
            let n = 2 + i % 6;
            let g = if i % 2 == 0 {
                random_connected_graph(n, 0.3, &mut rng)
            } else {
                random_disconnected_graph(n, 0.5, &mut rng).unwrap()
            };
            let p = random_values(n, &mut rng);
            let got = auto(&g, &p);
            let want = brute_force(&g, &p, DEFAULT_BUDGET).unwrap();
            assert_eq!(got.envy, want.envy, "{g:?} {p:?} via {}", got.solver);
            assert_eq!(total_envy(&got.allocation, &g, &p).unwrap(), got.envy);
        }
    }

    #[test]
    fn local_search_never_worsens_its_start() {
        let mut rng = seeded(9);
        for _ in 0..20 {
            let g = random_connected_graph(9, 0.4, &mut rng);
            let p = random_values(9, &mut rng);
            let start = Allocation::identity(9);
            let before = total_envy(&start, &g, &p).unwrap();
            let r = local_search(&g, &p, Some(&start)).unwrap();
            assert!(r.envy <= before);
            assert!(r.envy >= brute_force(&g, &p, DEFAULT_BUDGET).unwrap().envy);
        }
        assert_eq!(
            local_search(&Graph::empty(0), &ValueProfile::new(vec![]).unwrap(), None)
                .unwrap()
                .envy,
            Rational::zero()
        );
    }

    #[test]
    fn general_valuations_need_complete_graphs() {
        let m = ValueMatrix::from_ints(&[&[5, 0], &[0, 5]]).unwrap();
        let inst = Instance::general(Graph::complete(2), m.clone()).unwrap();
        assert_eq!(
            solve_instance(&inst, &SolveOptions::default())
                .unwrap()
                .envy,
            Rational::zero()
        );
        let inst = Instance::general(Graph::empty(2), m).unwrap();
        assert!(solve_instance(&inst, &SolveOptions::default()).is_err());
    }
}
