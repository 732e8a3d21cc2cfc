//! Exact solvers for disjoint unions.
//!
//! Unions of paths, of cycles, of stars and of equal-size cliques always have
//! an optimum that gives every component a contiguous run of values, so it
//! is enough to choose the order of the blocks. Unions of arbitrary cliques
//! keep a weaker structure: the largest clique still takes a contiguous run
//! of whatever values remain, which gives an XP recursion in the number of
//! cliques. Block costs come from prefix sums over the sorted values and cost
//! `O(1)` each.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::{Allocation, Guarantee, SolveResult};
use crate::connected::place_block;
use crate::error::{input, Error, Result};
use crate::graph::{classify_component, connected_components, Component, ComponentClass, Graph};
use crate::profile::ValueProfile;
use crate::rational::Rational;
use crate::scaled::{cubic_growth, with_scaled, Cost, Scale, ScaledTask};

/// Default cap on orderings, DP states and window choices.
pub const DEFAULT_UNION_BUDGET: u128 = 10_000_000;

/// The component each rank range belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockAssignment {
    /// Component ids in ascending value order.
    pub ordering: Vec<usize>,
    /// `blocks[c]` is the half-open rank range of component `c`.
    pub blocks: Vec<(usize, usize)>,
}

impl BlockAssignment {
    fn from_starts(starts: &[usize], sizes: &[usize]) -> Self {
        let mut ordering: Vec<usize> = (0..starts.len()).collect();
        ordering.sort_by_key(|&c| starts[c]);
        let blocks = starts
            .iter()
            .zip(sizes)
            .map(|(&a, &q)| (a, a + q))
            .collect();
        BlockAssignment { ordering, blocks }
    }
}

/// Families whose unions are solved by block ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Paths,
    Cycles,
    Stars,
    EqualCliques,
}

/// The first family (in the order paths, cycles, stars, equal cliques)
/// containing every class, if any.
pub fn strongly_separable_family(classes: &[ComponentClass]) -> Option<Family> {
    if classes.iter().all(|c| c.is_path_like()) {
        return Some(Family::Paths);
    }
    if classes
        .iter()
        .all(|c| matches!(c, ComponentClass::Cycle(_)))
    {
        return Some(Family::Cycles);
    }
    if classes.iter().all(|c| c.is_star_like()) {
        return Some(Family::Stars);
    }
    let first = classes.first()?.clique_size()?;
    if classes.iter().all(|c| c.clique_size() == Some(first)) {
        return Some(Family::EqualCliques);
    }
    None
}

/// Components of a graph with their classes.
pub fn classified_components(graph: &Graph) -> Vec<(Component, ComponentClass)> {
    connected_components(graph)
        .into_iter()
        .map(|c| {
            let class = classify_component(&c.graph);
            (c, class)
        })
        .collect()
}

fn check_size(graph: &Graph, profile: &ValueProfile) -> Result<()> {
    if graph.vertex_count() != profile.len() {
        return input(format!(
            "graph has {} vertices but the profile has {} values",
            graph.vertex_count(),
            profile.len()
        ));
    }
    Ok(())
}

/// Prefix sums of `v` and of `j * v_j` over a value sequence.
struct Prefix<T> {
    s1: Vec<T>,
    s2: Vec<T>,
}

impl<T: Cost> Prefix<T> {
    fn new(values: &[T]) -> Self {
        let mut s1 = Vec::with_capacity(values.len() + 1);
        let mut s2 = Vec::with_capacity(values.len() + 1);
        s1.push(T::zero());
        s2.push(T::zero());
        for (j, v) in values.iter().enumerate() {
            s1.push(s1[j].plus(v));
            s2.push(s2[j].plus(&v.times_i64(j as i64)));
        }
        Prefix { s1, s2 }
    }

    fn sum(&self, a: usize, b: usize) -> T {
        self.s1[b].minus(&self.s1[a])
    }

    /// Envy of a clique on the values `a..b`.
    fn clique(&self, a: usize, b: usize) -> T {
        if b <= a + 1 {
            return T::zero();
        }
        let q = (b - a) as i64;
        let sum = self.sum(a, b);
        let weighted = self.s2[b]
            .minus(&self.s2[a])
            .minus(&sum.times_i64(a as i64));
        weighted.times_i64(2).minus(&sum.times_i64(q - 1))
    }
}

/// Optimal envy of a closed-form class on the sorted values `a..a+q`.
fn block_cost<T: Cost>(class: ComponentClass, values: &[T], prefix: &Prefix<T>, a: usize) -> T {
    let q = class.vertex_count().expect("closed-form class");
    if q == 0 {
        return T::zero();
    }
    let spread = values[a + q - 1].minus(&values[a]);
    match class {
        ComponentClass::Path(_) => spread,
        ComponentClass::Cycle(_) => spread.times_i64(2),
        ComponentClass::Star(spokes) => {
            let c = a + spokes / 2;
            let below = values[c].times_i64((c - a) as i64).minus(&prefix.sum(a, c));
            let above = prefix
                .sum(c + 1, a + q)
                .minus(&values[c].times_i64((a + q - c - 1) as i64));
            below.plus(&above)
        }
        ComponentClass::Clique(_) => prefix.clique(a, a + q),
        _ => unreachable!("block costs exist only for paths, cycles, stars and cliques"),
    }
}

/// Builds the allocation by solving each component on its rank set.
fn assemble(
    parts: &[(Component, ComponentClass)],
    ranks_of: &[Vec<usize>],
    profile: &ValueProfile,
) -> Result<Allocation> {
    let mut assignment = vec![0; profile.len()];
    for ((comp, class), ranks) in parts.iter().zip(ranks_of) {
        let local = place_block(&comp.graph, *class, ranks, profile)?;
        for (i, &v) in comp.vertices.iter().enumerate() {
            assignment[v] = local[i];
        }
    }
    Allocation::new(assignment)
}

fn result(allocation: Allocation, envy: Rational, solver: &str) -> SolveResult {
    SolveResult {
        allocation,
        envy,
        solver: solver.to_string(),
        guarantee: Guarantee::Exact,
    }
}

/// Number of distinct orderings of a multiset with the given multiplicities,
/// saturating.
fn multinomial(counts: &[usize]) -> u128 {
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for &c in counts {
        for i in 1..=c {
            total += 1;
            // acc * total / i stays integral at every step
            acc = match acc.checked_mul(total as u128) {
                Some(x) => x / i as u128,
                None => return u128::MAX,
            };
        }
    }
    acc
}

/// Best contiguous-block allocation over all orderings of the components.
///
/// Components must all come from one of the [`Family`] classes; orderings of
/// identical shapes are enumerated once.
pub fn solve_union_by_ordering(
    graph: &Graph,
    profile: &ValueProfile,
    budget: u128,
) -> Result<SolveResult> {
    check_size(graph, profile)?;
    let parts = classified_components(graph);
    let classes: Vec<ComponentClass> = parts.iter().map(|p| p.1).collect();
    if strongly_separable_family(&classes).is_none() {
        return Err(Error::Dispatch(
            "ordering enumeration needs a union of paths, cycles, stars or equal cliques".into(),
        ));
    }
    let mut groups: BTreeMap<ComponentClass, Vec<usize>> = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        groups.entry(*c).or_default().push(i);
    }
    let shapes: Vec<(ComponentClass, Vec<usize>)> = groups.into_iter().collect();
    let counts: Vec<usize> = shapes.iter().map(|s| s.1.len()).collect();
    let needed = multinomial(&counts);
    if needed > budget {
        return Err(Error::Budget {
            what: format!("ordering enumeration over {} components", classes.len()),
            needed: if needed == u128::MAX {
                "more than 2^128".into()
            } else {
                needed.to_string()
            },
            budget,
        });
    }
    let (envy, starts) = with_scaled(
        profile,
        cubic_growth(profile.len()),
        OrderingTask {
            shapes: &shapes,
            components: classes.len(),
        },
    );
    let sizes: Vec<usize> = parts.iter().map(|p| p.0.len()).collect();
    let ranks_of: Vec<Vec<usize>> = starts
        .iter()
        .zip(&sizes)
        .map(|(&a, &q)| (a..a + q).collect())
        .collect();
    let allocation = assemble(&parts, &ranks_of, profile)?;
    Ok(result(allocation, envy, "union_ordering"))
}

/// Block layout chosen by [`solve_union_by_ordering`].
pub fn ordering_blocks(
    graph: &Graph,
    profile: &ValueProfile,
    budget: u128,
) -> Result<BlockAssignment> {
    let res = solve_union_by_ordering(graph, profile, budget)?;
    let parts = connected_components(graph);
    let starts: Vec<usize> = parts
        .iter()
        .map(|c| {
            c.vertices
                .iter()
                .map(|&v| profile.rank_of(res.allocation.house(v)))
                .min()
                .unwrap_or(0)
        })
        .collect();
    let sizes: Vec<usize> = parts.iter().map(|c| c.len()).collect();
    Ok(BlockAssignment::from_starts(&starts, &sizes))
}

struct OrderingTask<'a> {
    shapes: &'a [(ComponentClass, Vec<usize>)],
    components: usize,
}

struct Best<T> {
    cost: Option<T>,
    starts: Vec<usize>,
}

impl<T: Cost> Best<T> {
    fn offer(&mut self, cost: &T, starts: &[usize]) {
        let better = match &self.cost {
            None => true,
            Some(c) => cost < c || (cost == c && starts < self.starts.as_slice()),
        };
        if better {
            self.cost = Some(cost.clone());
            self.starts = starts.to_vec();
        }
    }
}

struct OrderingSearch<'a, T> {
    shapes: &'a [(ComponentClass, Vec<usize>)],
    values: &'a [T],
    prefix: Prefix<T>,
}

impl<T: Cost> OrderingSearch<'_, T> {
    fn descend(
        &self,
        used: &mut [usize],
        starts: &mut [usize],
        a: usize,
        cost: T,
        best: &mut Best<T>,
    ) {
        if a == self.values.len() {
            best.offer(&cost, starts);
            return;
        }
        for (s, (class, members)) in self.shapes.iter().enumerate() {
            if used[s] == members.len() {
                continue;
            }
            let q = class.vertex_count().expect("closed-form class");
            let c = block_cost(*class, self.values, &self.prefix, a).plus(&cost);
            if best.cost.as_ref().is_some_and(|b| c > *b) {
                continue;
            }
            starts[members[used[s]]] = a;
            used[s] += 1;
            self.descend(used, starts, a + q, c, best);
            used[s] -= 1;
        }
    }
}

impl ScaledTask for OrderingTask<'_> {
    type Output = (Rational, Vec<usize>);

    fn run<T: Cost>(self, values: &[T], scale: &Scale) -> Self::Output {
        let search = OrderingSearch {
            shapes: self.shapes,
            values,
            prefix: Prefix::new(values),
        };
        if values.is_empty() {
            return (Rational::zero(), Vec::new());
        }
        let branches: Vec<Best<T>> = (0..self.shapes.len())
            .into_par_iter()
            .map(|first| {
                let mut used = vec![0; self.shapes.len()];
                let mut starts = vec![0; self.components];
                let mut best = Best {
                    cost: None,
                    starts: Vec::new(),
                };
                let (class, members) = &self.shapes[first];
                let q = class.vertex_count().expect("closed-form class");
                let c = block_cost(*class, values, &search.prefix, 0);
                starts[members[0]] = 0;
                used[first] = 1;
                search.descend(&mut used, &mut starts, q, c, &mut best);
                best
            })
            .collect();
        let mut best = Best {
            cost: None,
            starts: Vec::new(),
        };
        for b in branches {
            if let Some(c) = &b.cost {
                best.offer(c, &b.starts);
            }
        }
        (
            scale.unscale(&best.cost.expect("some ordering")),
            best.starts,
        )
    }
}

/// Dynamic program over the number of remaining paths of each distinct
/// length. The lowest values still unassigned always form a prefix whose
/// length is fixed by those counts, and its top `L` values go to a path of
/// length `L`.
pub fn solve_union_paths_dp(
    graph: &Graph,
    profile: &ValueProfile,
    budget: u128,
) -> Result<SolveResult> {
    check_size(graph, profile)?;
    let parts = classified_components(graph);
    let mut by_length: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, (_, class)) in parts.iter().enumerate() {
        match class {
            ComponentClass::Path(len) => by_length.entry(*len).or_default().push(i),
            other => {
                return Err(Error::Dispatch(format!(
                    "path DP needs only paths, found {}",
                    other.name()
                )))
            }
        }
    }
    let groups: Vec<(usize, Vec<usize>)> = by_length.into_iter().collect();
    let states = groups
        .iter()
        .try_fold(1u128, |acc, g| acc.checked_mul(g.1.len() as u128 + 1))
        .unwrap_or(u128::MAX);
    if states > budget || groups.len() >= u8::MAX as usize {
        return Err(Error::Budget {
            what: format!("path DP over {} distinct lengths", groups.len()),
            needed: states.to_string(),
            budget,
        });
    }
    let lengths: Vec<usize> = groups.iter().map(|g| g.0).collect();
    let counts: Vec<usize> = groups.iter().map(|g| g.1.len()).collect();
    let (envy, picks) = with_scaled(
        profile,
        cubic_growth(profile.len()),
        PathsDp {
            lengths: &lengths,
            counts: &counts,
        },
    );
    // picks[k] = length group used for the block ending at the k-th cut
    // from the top; hand out components of each group in ascending order.
    let mut next = vec![0; groups.len()];
    let mut ranks_of = vec![Vec::new(); parts.len()];
    let mut top = profile.len();
    for g in picks {
        let comp = groups[g].1[next[g]];
        next[g] += 1;
        ranks_of[comp] = (top - lengths[g]..top).collect();
        top -= lengths[g];
    }
    let allocation = assemble(&parts, &ranks_of, profile)?;
    Ok(result(allocation, envy, "union_paths_dp"))
}

struct PathsDp<'a> {
    lengths: &'a [usize],
    counts: &'a [usize],
}

impl ScaledTask for PathsDp<'_> {
    type Output = (Rational, Vec<usize>);

    fn run<T: Cost>(self, values: &[T], scale: &Scale) -> Self::Output {
        let t = self.lengths.len();
        let mut stride = vec![1usize; t];
        for i in 1..t {
            stride[i] = stride[i - 1] * (self.counts[i - 1] + 1);
        }
        let total = if t == 0 {
            1
        } else {
            stride[t - 1] * (self.counts[t - 1] + 1)
        };
        let mut phi: Vec<T> = Vec::with_capacity(total);
        let mut choice: Vec<u8> = Vec::with_capacity(total);
        let mut digits = vec![0usize; t];
        let mut ell = 0usize;
        for idx in 0..total {
            if idx > 0 {
                // odometer increment
                let mut i = 0;
                loop {
                    if digits[i] < self.counts[i] {
                        digits[i] += 1;
                        ell += self.lengths[i];
                        break;
                    }
                    ell -= digits[i] * self.lengths[i];
                    digits[i] = 0;
                    i += 1;
                }
            }
            let mut best: Option<(T, u8)> = None;
            for i in 0..t {
                if digits[i] == 0 {
                    continue;
                }
                let len = self.lengths[i];
                let c = phi[idx - stride[i]].plus(&values[ell - 1].minus(&values[ell - len]));
                if best.as_ref().is_none_or(|(b, _)| c < *b) {
                    best = Some((c, i as u8));
                }
            }
            let (c, i) = best.unwrap_or((T::zero(), u8::MAX));
            phi.push(c);
            choice.push(i);
        }
        let mut picks = Vec::new();
        let mut idx = total - 1;
        while choice[idx] != u8::MAX {
            let g = choice[idx] as usize;
            picks.push(g);
            idx -= stride[g];
        }
        (scale.unscale(&phi[total - 1]), picks)
    }
}

/// Graphs of maximum degree 1: `k` disjoint edges and `m` isolated vertices.
///
/// `phi(k', m')` is the best envy on the lowest `2k' + m'` values; the top
/// one is either isolated or shares an edge with the one below it.
pub fn solve_matching_graph(graph: &Graph, profile: &ValueProfile) -> Result<SolveResult> {
    check_size(graph, profile)?;
    let parts = classified_components(graph);
    let mut edges = Vec::new();
    let mut isolated = Vec::new();
    for (i, (_, class)) in parts.iter().enumerate() {
        match class {
            ComponentClass::Path(1) => isolated.push(i),
            ComponentClass::Path(2) => edges.push(i),
            other => {
                return Err(Error::Dispatch(format!(
                    "matching DP needs maximum degree 1, found {}",
                    other.name()
                )))
            }
        }
    }
    let (envy, takes_edge) = with_scaled(
        profile,
        cubic_growth(profile.len()),
        MatchingDp {
            k: edges.len(),
            m: isolated.len(),
        },
    );
    let mut ranks_of = vec![Vec::new(); parts.len()];
    let (mut e, mut s) = (0, 0);
    let mut top = profile.len();
    for take in takes_edge {
        if take {
            ranks_of[edges[e]] = vec![top - 2, top - 1];
            e += 1;
            top -= 2;
        } else {
            ranks_of[isolated[s]] = vec![top - 1];
            s += 1;
            top -= 1;
        }
    }
    let allocation = assemble(&parts, &ranks_of, profile)?;
    Ok(result(allocation, envy, "matching_dp"))
}

struct MatchingDp {
    k: usize,
    m: usize,
}

impl ScaledTask for MatchingDp {
    /// Envy and, from the top value down, whether each step took an edge.
    type Output = (Rational, Vec<bool>);

    fn run<T: Cost>(self, values: &[T], scale: &Scale) -> Self::Output {
        let (k, m) = (self.k, self.m);
        let width = m + 1;
        let mut edge_choice = vec![false; (k + 1) * width];
        let mut prev: Vec<T> = vec![T::zero(); width];
        let mut cur: Vec<T> = vec![T::zero(); width];
        for kk in 0..=k {
            for mm in 0..=m {
                let ell = 2 * kk + mm;
                let skip = (mm > 0).then(|| cur[mm - 1].clone());
                let pair =
                    (kk > 0).then(|| prev[mm].plus(&values[ell - 1].minus(&values[ell - 2])));
                cur[mm] = match (skip, pair) {
                    (None, None) => T::zero(),
                    (Some(a), None) => a,
                    (None, Some(b)) => {
                        edge_choice[kk * width + mm] = true;
                        b
                    }
                    (Some(a), Some(b)) => {
                        if b < a {
                            edge_choice[kk * width + mm] = true;
                            b
                        } else {
                            a
                        }
                    }
                };
            }
            std::mem::swap(&mut prev, &mut cur);
        }
        let best = prev[m].clone();
        let mut steps = Vec::with_capacity(k + m);
        let (mut kk, mut mm) = (k, m);
        while kk + mm > 0 {
            let take = edge_choice[kk * width + mm];
            steps.push(take);
            if take {
                kk -= 1;
            } else {
                mm -= 1;
            }
        }
        (scale.unscale(&best), steps)
    }
}

/// Cliques of one common size: consecutive blocks in component order.
pub fn solve_equal_cliques(graph: &Graph, profile: &ValueProfile) -> Result<SolveResult> {
    check_size(graph, profile)?;
    let parts = classified_components(graph);
    let size = parts.first().and_then(|p| p.1.clique_size()).unwrap_or(0);
    if parts.iter().any(|p| p.1.clique_size() != Some(size)) {
        return Err(Error::Dispatch(
            "equal-clique solver needs cliques of one size".into(),
        ));
    }
    let ranks_of: Vec<Vec<usize>> = (0..parts.len())
        .map(|i| (i * size..(i + 1) * size).collect())
        .collect();
    let values = profile.sorted_values();
    let envy = ranks_of
        .iter()
        .map(|r| crate::connected::clique_envy(&values[r[0]..r[0] + size]))
        .sum();
    let allocation = assemble(&parts, &ranks_of, profile)?;
    Ok(result(allocation, envy, "equal_cliques"))
}

/// Number of window choices the clique recursion explores, saturating.
pub fn cliques_xp_cost(sizes_desc: &[usize]) -> u128 {
    let mut remaining: usize = sizes_desc.iter().sum();
    let mut acc: u128 = 1;
    for &q in sizes_desc.iter().take(sizes_desc.len().saturating_sub(1)) {
        acc = acc.saturating_mul((remaining - q + 1) as u128);
        remaining -= q;
    }
    acc
}

/// Unions of cliques of arbitrary sizes.
///
/// The largest clique left tries every contiguous window of the remaining
/// (possibly gapped) value sequence and the rest is solved recursively. With
/// two cliques left, every window is scored in `O(1)` from prefix sums, since
/// the smaller clique gets a prefix `P` and a suffix `S` of the sequence and
/// `envy(P u S) = envy(P) + envy(S) + |P| sum(S) - |S| sum(P)`.
pub fn solve_cliques_xp(
    graph: &Graph,
    profile: &ValueProfile,
    budget: u128,
) -> Result<SolveResult> {
    check_size(graph, profile)?;
    let parts = classified_components(graph);
    let mut sizes = Vec::with_capacity(parts.len());
    for (c, class) in &parts {
        if class.clique_size().is_none() {
            return Err(Error::Dispatch(format!(
                "clique recursion needs only cliques, found {}",
                class.name()
            )));
        }
        sizes.push(c.len());
    }
    let (envy, ranks_of) = cliques_xp_by_sizes(&sizes, profile, budget)?;
    let allocation = assemble(&parts, &ranks_of, profile)?;
    Ok(result(allocation, envy, "cliques_xp"))
}

/// The clique recursion on sizes alone: the optimal envy and the ranks
/// given to each clique (in input order). Useful when the cliques are too
/// large to materialise as edge lists.
pub fn cliques_xp_by_sizes(
    sizes: &[usize],
    profile: &ValueProfile,
    budget: u128,
) -> Result<(Rational, Vec<Vec<usize>>)> {
    if sizes.iter().sum::<usize>() != profile.len() {
        return input("clique sizes must add up to the number of values");
    }
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let sizes_desc: Vec<usize> = order.iter().map(|&c| sizes[c]).collect();
    let needed = cliques_xp_cost(&sizes_desc);
    if needed > budget {
        return Err(Error::Budget {
            what: format!("clique window recursion over {} cliques", sizes_desc.len()),
            needed: needed.to_string(),
            budget,
        });
    }
    let (envy, sets) = with_scaled(
        profile,
        cubic_growth(profile.len()),
        XpTask { sizes: &sizes_desc },
    );
    let mut ranks_of = vec![Vec::new(); sizes.len()];
    for (level, ranks) in sets.into_iter().enumerate() {
        ranks_of[order[level]] = ranks;
    }
    Ok((envy, ranks_of))
}

struct XpTask<'a> {
    sizes: &'a [usize],
}

impl ScaledTask for XpTask<'_> {
    /// Envy and the rank set of each clique, largest first.
    type Output = (Rational, Vec<Vec<usize>>);

    fn run<T: Cost>(self, values: &[T], scale: &Scale) -> Self::Output {
        let all: Vec<usize> = (0..values.len()).collect();
        let (cost, windows) = xp_search(self.sizes, &all, values, true);
        let mut remaining = all;
        let mut sets = Vec::with_capacity(self.sizes.len());
        for (level, &q) in self.sizes.iter().enumerate() {
            if level + 1 == self.sizes.len() {
                sets.push(remaining.clone());
                break;
            }
            let i = windows[level];
            sets.push(remaining[i..i + q].to_vec());
            remaining.drain(i..i + q);
        }
        (scale.unscale(&cost), sets)
    }
}

/// Minimum cost and the window start (index into the remaining sequence)
/// chosen at each level; earlier windows win ties.
fn xp_search<T: Cost>(
    sizes: &[usize],
    remaining: &[usize],
    values: &[T],
    parallel: bool,
) -> (T, Vec<usize>) {
    let w: Vec<T> = remaining.iter().map(|&r| values[r].clone()).collect();
    let prefix = Prefix::new(&w);
    let m = w.len();
    match sizes {
        [] => (T::zero(), Vec::new()),
        [_] => (prefix.clique(0, m), Vec::new()),
        [a, _] => {
            let a = *a;
            let mut best: Option<(T, usize)> = None;
            for i in 0..=m - a {
                let window = prefix.clique(i, i + a);
                let (p, s) = (i, m - i - a);
                let rest = prefix
                    .clique(0, i)
                    .plus(&prefix.clique(i + a, m))
                    .plus(&prefix.sum(i + a, m).times_i64(p as i64))
                    .minus(&prefix.sum(0, i).times_i64(s as i64));
                let c = window.plus(&rest);
                if best.as_ref().is_none_or(|(b, _)| c < *b) {
                    best = Some((c, i));
                }
            }
            let (c, i) = best.expect("at least one window");
            (c, vec![i])
        }
        [a, rest @ ..] => {
            let a = *a;
            let branch = |i: usize| {
                let window = prefix.clique(i, i + a);
                let sub: Vec<usize> = remaining[..i]
                    .iter()
                    .chain(&remaining[i + a..])
                    .copied()
                    .collect();
                let (c, mut tail) = xp_search(rest, &sub, values, false);
                tail.insert(0, i);
                (window.plus(&c), tail)
            };
            let candidates: Vec<(T, Vec<usize>)> = if parallel {
                (0..=m - a).into_par_iter().map(branch).collect()
            } else {
                (0..=m - a).map(branch).collect()
            };
            candidates
                .into_iter()
                .reduce(|x, y| if y.0 < x.0 { y } else { x })
                .expect("at least one window")
        }
    }
}
