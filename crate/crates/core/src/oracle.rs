//! Exhaustive ground truth.
//!
//! Permutations are explored in lexicographic order (vertex 0 first, houses
//! by ascending id) with branch-and-bound on the partial envy, which is
//! monotone because every edge term is non-negative. The first choice is
//! split across threads; results are merged by `(envy, branch)` so the
//! outcome never depends on scheduling.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::{Allocation, Guarantee, SolveResult};
use crate::envy::total_envy;
use crate::error::{input, Error, Result};
use crate::graph::{bipartition, Graph};
use crate::profile::ValueProfile;
use crate::rational::Rational;
use crate::scaled::{cubic_growth, with_scaled, Cost, Scale, ScaledTask};

/// `10!`
pub const DEFAULT_BUDGET: u128 = 3_628_800;

/// Cap on how many optimal allocations [`enumerate_optima`] keeps in memory.
pub const DEFAULT_MAX_STORED: usize = 1 << 20;

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

pub(crate) fn check_budget(n: usize, budget: u128) -> Result<()> {
    let needed = factorial(n);
    if needed > budget {
        return Err(Error::Budget {
            what: format!("exhaustive search over {n}! allocations"),
            needed: needed.to_string(),
            budget,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalSet {
    pub envy: Rational,
    /// Optimal allocations in lexicographic order.
    pub allocations: Vec<Allocation>,
    /// Total number of optimal allocations, stored or not.
    pub count: u64,
    pub truncated: bool,
}

/// Minimum envy with the lexicographically smallest optimal assignment.
pub fn brute_force(graph: &Graph, profile: &ValueProfile, budget: u128) -> Result<SolveResult> {
    let set = search(graph, profile, budget, Mode::First)?;
    let allocation = set
        .allocations
        .into_iter()
        .next()
        .expect("at least one allocation");
    Ok(SolveResult {
        allocation,
        envy: set.envy,
        solver: "brute_force".into(),
        guarantee: Guarantee::Exact,
    })
}

/// Every allocation attaining the minimum envy.
pub fn enumerate_optima(graph: &Graph, profile: &ValueProfile, budget: u128) -> Result<OptimalSet> {
    search(
        graph,
        profile,
        budget,
        Mode::All {
            max_stored: DEFAULT_MAX_STORED,
        },
    )
}

pub fn enumerate_optima_capped(
    graph: &Graph,
    profile: &ValueProfile,
    budget: u128,
    max_stored: usize,
) -> Result<OptimalSet> {
    search(graph, profile, budget, Mode::All { max_stored })
}

#[derive(Clone, Copy)]
enum Mode {
    First,
    All { max_stored: usize },
}

fn search(graph: &Graph, profile: &ValueProfile, budget: u128, mode: Mode) -> Result<OptimalSet> {
    let n = profile.len();
    if graph.vertex_count() != n {
        return input(format!(
            "graph has {} vertices but the profile has {n} values",
            graph.vertex_count()
        ));
    }
    check_budget(n, budget)?;
    if n > 64 {
        return input("exhaustive search supports at most 64 vertices");
    }
    if n == 0 {
        return Ok(OptimalSet {
            envy: Rational::zero(),
            allocations: vec![Allocation::identity(0)],
            count: 1,
            truncated: false,
        });
    }
    let upper = upper_bound(graph, profile)?;
    let growth = cubic_growth(n);
    Ok(with_scaled(
        profile,
        growth,
        SearchTask {
            graph,
            profile,
            mode,
            upper: &upper,
        },
    ))
}

/// A cheap feasible envy: houses in ascending order along a BFS.
fn upper_bound(graph: &Graph, profile: &ValueProfile) -> Result<Allocation> {
    let n = graph.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut i = order.len();
        order.push(s);
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &w in graph.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    let mut assignment = vec![0; n];
    for (rank, &v) in order.iter().enumerate() {
        assignment[v] = profile.house_at(rank);
    }
    let a = Allocation::new(assignment)?;
    let id = Allocation::identity(n);
    if total_envy(&id, graph, profile)? <= total_envy(&a, graph, profile)? {
        Ok(id)
    } else {
        Ok(a)
    }
}

struct SearchTask<'a> {
    graph: &'a Graph,
    profile: &'a ValueProfile,
    mode: Mode,
    upper: &'a Allocation,
}

struct Branch<T> {
    best: Option<T>,
    found: Vec<Vec<usize>>,
    count: u64,
}

struct Searcher<'a, T> {
    n: usize,
    /// Scaled value of each house id.
    value: &'a [T],
    /// Neighbours of `v` with smaller id.
    back: &'a [Vec<usize>],
    all: bool,
    max_stored: usize,
    bound: T,
}

impl<T: Cost> Searcher<'_, T> {
    fn run(&self, first_house: usize) -> Branch<T> {
        let mut out = Branch {
            best: None,
            found: Vec::new(),
            count: 0,
        };
        let mut assign = vec![usize::MAX; self.n];
        assign[0] = first_house;
        let used = 1u64 << first_house;
        self.descend(1, used, T::zero(), &mut assign, &mut out);
        out
    }

    fn descend(&self, v: usize, used: u64, partial: T, assign: &mut [usize], out: &mut Branch<T>) {
        if v == self.n {
            match &out.best {
                Some(b) if partial > *b => {}
                Some(b) if partial == *b => {
                    if self.all {
                        out.count += 1;
                        if out.found.len() < self.max_stored {
                            out.found.push(assign.to_vec());
                        }
                    }
                }
                _ => {
                    out.best = Some(partial);
                    out.count = 1;
                    out.found.clear();
                    out.found.push(assign.to_vec());
                }
            }
            return;
        }
        for h in 0..self.n {
            if used & (1u64 << h) != 0 {
                continue;
            }
            let mut cost = partial.clone();
            for &u in &self.back[v] {
                cost = cost.plus(&self.value[h].abs_diff(&self.value[assign[u]]));
            }
            let limit = out.best.as_ref().unwrap_or(&self.bound);
            let prune = if self.all {
                cost > *limit
            } else {
                cost >= *limit && out.best.is_some() || cost > *limit
            };
            if prune {
                continue;
            }
            assign[v] = h;
            self.descend(v + 1, used | (1u64 << h), cost, assign, out);
            assign[v] = usize::MAX;
        }
    }
}

impl ScaledTask for SearchTask<'_> {
    type Output = OptimalSet;

    fn run<T: Cost>(self, values: &[T], scale: &Scale) -> OptimalSet {
        let n = self.profile.len();
        let value: Vec<T> = (0..n)
            .map(|h| values[self.profile.rank_of(h)].clone())
            .collect();
        let back: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                self.graph
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| u < v)
                    .collect()
            })
            .collect();
        let bound = self.graph.edges().iter().fold(T::zero(), |acc, &(u, v)| {
            acc.plus(&value[self.upper.house(u)].abs_diff(&value[self.upper.house(v)]))
        });
        let (all, max_stored) = match self.mode {
            Mode::First => (false, 1),
            Mode::All { max_stored } => (true, max_stored),
        };
        let searcher = Searcher {
            n,
            value: &value,
            back: &back,
            all,
            max_stored,
            bound,
        };
        let branches: Vec<Branch<T>> = (0..n).into_par_iter().map(|h| searcher.run(h)).collect();

        let best = branches
            .iter()
            .filter_map(|b| b.best.clone())
            .min()
            .expect("some branch reaches a leaf");
        let mut allocations = Vec::new();
        let mut count = 0u64;
        for b in branches
            .into_iter()
            .filter(|b| b.best.as_ref() == Some(&best))
        {
            count += b.count;
            for a in b.found {
                if allocations.len() < max_stored {
                    allocations.push(Allocation::from_vec_unchecked(a));
                }
            }
            if !all && !allocations.is_empty() {
                break;
            }
        }
        let truncated = all && (allocations.len() as u64) < count;
        OptimalSet {
            envy: scale.unscale(&best),
            allocations,
            count: if all { count } else { 1 },
            truncated,
        }
    }
}

/// Symmetries used to count optimal allocations up to equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    /// Rotations and reflections of the cycle visiting `order`.
    CycleDihedral {
        order: Vec<usize>,
    },
    /// Permutations of houses within each side of a bipartite graph.
    BipartiteSides {
        left: Vec<usize>,
        right: Vec<usize>,
    },
}

impl Symmetry {
    /// Dihedral symmetry of the standard cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Self {
        Symmetry::CycleDihedral {
            order: (0..n).collect(),
        }
    }

    /// Side symmetry of the standard `K_{r,s}` (sides `0..r`, `r..r+s`).
    pub fn bipartite(r: usize, s: usize) -> Self {
        Symmetry::BipartiteSides {
            left: (0..r).collect(),
            right: (r..r + s).collect(),
        }
    }

    /// Derives the symmetry from the graph itself.
    pub fn cycle_of(graph: &Graph) -> Result<Self> {
        let n = graph.vertex_count();
        if n < 3
            || graph.edge_count() != n
            || !(0..n).all(|v| graph.degree(v) == 2)
            || !graph.is_connected()
        {
            return input("cycle symmetry requires a cycle graph");
        }
        match crate::graph::layout(graph, crate::graph::ComponentClass::Cycle(n)) {
            crate::graph::Layout::Sequence(order) => Ok(Symmetry::CycleDihedral { order }),
            _ => unreachable!("cycle layout is a sequence"),
        }
    }

    pub fn bipartite_of(graph: &Graph) -> Result<Self> {
        match bipartition(graph) {
            Some((left, right))
                if left.len() * right.len() == graph.edge_count() && graph.is_connected() =>
            {
                Ok(Symmetry::BipartiteSides { left, right })
            }
            _ => input("side symmetry requires a complete bipartite graph"),
        }
    }
}

/// Lexicographically smallest member of the allocation's orbit.
pub fn canonicalize(alloc: &Allocation, symmetry: &Symmetry) -> Result<Allocation> {
    let n = alloc.len();
    match symmetry {
        Symmetry::None => Ok(alloc.clone()),
        Symmetry::CycleDihedral { order } => {
            if !is_permutation(order, n) {
                return input("cycle order does not match the allocation size");
            }
            let seq: Vec<usize> = order.iter().map(|&v| alloc.house(v)).collect();
            let mut best: Option<Vec<usize>> = None;
            for reflect in [false, true] {
                for shift in 0..n {
                    let cand: Vec<usize> = (0..n)
                        .map(|i| {
                            let j = if reflect {
                                (shift + n - i) % n
                            } else {
                                (shift + i) % n
                            };
                            seq[j]
                        })
                        .collect();
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
            let best = best.unwrap_or_default();
            let mut assignment = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                assignment[v] = best[i];
            }
            Allocation::new(assignment)
        }
        Symmetry::BipartiteSides { left, right } => {
            let mut all: Vec<usize> = left.iter().chain(right).copied().collect();
            if !is_permutation(&all, n) {
                return input("bipartite sides do not partition the vertices");
            }
            let mut assignment = vec![0; n];
            for side in [left, right] {
                let mut verts = side.clone();
                verts.sort_unstable();
                let mut houses: Vec<usize> = verts.iter().map(|&v| alloc.house(v)).collect();
                houses.sort_unstable();
                for (v, h) in verts.into_iter().zip(houses) {
                    assignment[v] = h;
                }
            }
            all.clear();
            Allocation::new(assignment)
        }
    }
}

/// Number of distinct orbits among the allocations.
pub fn count_classes(allocations: &[Allocation], symmetry: &Symmetry) -> Result<usize> {
    let mut seen = BTreeSet::new();
    for a in allocations {
        seen.insert(canonicalize(a, symmetry)?);
    }
    Ok(seen.len())
}

fn is_permutation(xs: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    xs.len() == n
        && xs
            .iter()
            .all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> ValueProfile {
        ValueProfile::from_ints(v).unwrap()
    }

    #[test]
    fn path_and_cycle_minima() {
        let p = ints(&[1, 2, 4, 5, 6]);
        let r = brute_force(&Graph::path(5), &p, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.envy, Rational::from_integer(5));
        assert_eq!(r.allocation.as_slice(), &[0, 1, 2, 3, 4]);
        let c = brute_force(&Graph::cycle(5).unwrap(), &p, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.envy, Rational::from_integer(10));
    }

    #[test]
    fn single_vertex() {
        let r = brute_force(&Graph::empty(1), &ints(&[7]), DEFAULT_BUDGET).unwrap();
        assert!(r.envy.is_zero());
    }

    #[test]
    fn budget_refusal_names_the_bound() {
        let err = brute_force(&Graph::path(11), &ints(&[0; 11]), DEFAULT_BUDGET).unwrap_err();
        match err {
            Error::Budget { needed, budget, .. } => {
                assert_eq!(needed, "39916800");
                assert_eq!(budget, DEFAULT_BUDGET);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn path_has_two_optima() {
        let set =
            enumerate_optima(&Graph::path(5), &ints(&[1, 2, 4, 5, 6]), DEFAULT_BUDGET).unwrap();
        assert_eq!(set.count, 2);
        assert_eq!(set.allocations[0].as_slice(), &[0, 1, 2, 3, 4]);
        assert_eq!(set.allocations[1].as_slice(), &[4, 3, 2, 1, 0]);
    }

    #[test]
    fn edgeless_graph_every_allocation_optimal() {
        let set =
            enumerate_optima(&Graph::empty(5), &ints(&[1, 2, 3, 4, 5]), DEFAULT_BUDGET).unwrap();
        assert_eq!(set.count, 120);
        assert_eq!(set.allocations.len(), 120);
        assert!(!set.truncated);
        let capped = enumerate_optima_capped(
            &Graph::empty(5),
            &ints(&[1, 2, 3, 4, 5]),
            DEFAULT_BUDGET,
            10,
        )
        .unwrap();
        assert_eq!(capped.count, 120);
        assert!(capped.truncated);
    }

    #[test]
    fn cycle_classes() {
        let set = enumerate_optima(
            &Graph::cycle(5).unwrap(),
            &ints(&[1, 2, 3, 4, 5]),
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(
            count_classes(&set.allocations, &Symmetry::cycle(5)).unwrap(),
            4
        );
    }

    #[test]
    fn canonical_forms() {
        let a = Allocation::new(vec![2, 0, 3, 1, 4]).unwrap();
        let rotated = Allocation::new(vec![4, 2, 0, 3, 1]).unwrap();
        let sym = Symmetry::cycle(5);
        assert_eq!(
            canonicalize(&a, &sym).unwrap(),
            canonicalize(&rotated, &sym).unwrap()
        );
        let reversed = Allocation::new(vec![4, 1, 3, 0, 2]).unwrap();
        assert_eq!(
            canonicalize(&a, &sym).unwrap(),
            canonicalize(&reversed, &sym).unwrap()
        );

        let bi = Symmetry::bipartite(2, 2);
        let x = Allocation::new(vec![3, 0, 1, 2]).unwrap();
        let y = Allocation::new(vec![0, 3, 2, 1]).unwrap();
        assert_eq!(
            canonicalize(&x, &bi).unwrap(),
            canonicalize(&y, &bi).unwrap()
        );

        assert_eq!(canonicalize(&a, &Symmetry::None).unwrap(), a);
        assert!(canonicalize(&a, &Symmetry::cycle(4)).is_err());
    }

    #[test]
    fn symmetry_from_graph() {
        let g = Graph::new(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(
            Symmetry::cycle_of(&g).unwrap(),
            Symmetry::CycleDihedral {
                order: vec![0, 2, 1, 3]
            }
        );
        assert!(Symmetry::cycle_of(&Graph::path(4)).is_err());
        assert!(Symmetry::bipartite_of(&Graph::complete_bipartite(2, 3)).is_ok());
        assert!(Symmetry::bipartite_of(&Graph::path(4)).is_err());
    }
}
