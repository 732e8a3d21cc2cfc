//! Splitting and separability of disconnected graphs, checked empirically.
//!
//! Component `A` *splits* component `B` under an allocation when `A`'s values
//! form an uninterrupted run inside the sorted values of `A` and `B` together.
//! Everything here works per value profile: it exhausts the optimal
//! allocations of one instance and reports which contiguity patterns occur.

use serde::{Deserialize, Serialize};

use crate::allocation::Allocation;
use crate::envy::total_envy;
use crate::error::{input, Result};
use crate::graph::{connected_components, Graph};
use crate::instance::Instance;
use crate::oracle::{enumerate_optima, OptimalSet};
use crate::profile::ValueProfile;
use crate::rational::Rational;

/// Whether `comp_a`'s houses form a contiguous run within the houses of
/// `comp_a` and `comp_b` together.
pub fn splits(
    alloc: &Allocation,
    comp_a: &[usize],
    comp_b: &[usize],
    profile: &ValueProfile,
) -> Result<bool> {
    let n = alloc.len();
    let mut mark = vec![0u8; n];
    for &v in comp_a {
        if v >= n {
            return input(format!("vertex {v} out of range"));
        }
        mark[v] = 1;
    }
    for &v in comp_b {
        if v >= n {
            return input(format!("vertex {v} out of range"));
        }
        if mark[v] != 0 {
            return input(format!("vertex {v} belongs to both components"));
        }
        mark[v] = 2;
    }
    Ok(run_count(&labelled_ranks(alloc, comp_a, comp_b, profile), 0) <= 1)
}

/// Labels (0 for `a`, 1 for `b`) of the union in ascending value order.
fn labelled_ranks(
    alloc: &Allocation,
    a: &[usize],
    b: &[usize],
    profile: &ValueProfile,
) -> Vec<(usize, u8)> {
    let mut out: Vec<(usize, u8)> = a
        .iter()
        .map(|&v| (profile.rank_of(alloc.house(v)), 0))
        .chain(b.iter().map(|&v| (profile.rank_of(alloc.house(v)), 1)))
        .collect();
    out.sort_unstable();
    out
}

fn run_count(labels: &[(usize, u8)], label: u8) -> usize {
    let mut runs = 0;
    let mut prev = None;
    for &(_, l) in labels {
        if l == label && prev != Some(label) {
            runs += 1;
        }
        prev = Some(l);
    }
    runs
}

/// Every component holds a contiguous run of ranks.
pub fn is_contiguous_blocks(alloc: &Allocation, graph: &Graph, profile: &ValueProfile) -> bool {
    connected_components(graph).iter().all(|c| {
        let mut ranks: Vec<usize> = c
            .vertices
            .iter()
            .map(|&v| profile.rank_of(alloc.house(v)))
            .collect();
        ranks.sort_unstable();
        ranks
            .last()
            .is_none_or(|&hi| hi - ranks[0] + 1 == ranks.len())
    })
}

/// Values `u < v < u' < v'` with `u, u'` in one component and `v, v'` in
/// another.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interleaving {
    /// Component indices (ordered by smallest vertex), first holds `u, u'`.
    pub components: (usize, usize),
    pub values: [Rational; 4],
}

/// The first interleaving pair of components under `alloc`, if any.
pub fn find_interleaving(
    alloc: &Allocation,
    graph: &Graph,
    profile: &ValueProfile,
) -> Option<Interleaving> {
    let comps = connected_components(graph);
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            let labels = labelled_ranks(alloc, &comps[i].vertices, &comps[j].vertices, profile);
            // run starts; four alternating runs give the pattern
            let mut starts = Vec::new();
            let mut prev = None;
            for &(r, l) in &labels {
                if prev != Some(l) {
                    starts.push((r, l));
                }
                prev = Some(l);
            }
            if starts.len() >= 4 {
                let first = if starts[0].1 == 0 { (i, j) } else { (j, i) };
                let values = [0, 1, 2, 3].map(|k| profile.at_rank(starts[k].0).clone());
                return Some(Interleaving {
                    components: first,
                    values,
                });
            }
        }
    }
    None
}

/// One ordering of the components and an optimum respecting it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingWitness {
    pub ordering: Vec<usize>,
    pub allocation: Allocation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    pub optimum: Rational,
    pub optima: u64,
    pub components: usize,
    /// An optimum giving every component a contiguous block.
    pub strongly_separable_witness: Option<Allocation>,
    /// For each ordering `G_1, ..., G_k` that works, an optimum in which
    /// `G_i` splits `G_j` whenever `i < j`.
    pub separable_witness_per_ordering: Vec<OrderingWitness>,
    /// No optimum gives every component a contiguous block.
    pub every_optimum_noncontiguous: bool,
    /// Present when every optimum contains an interleaving quadruple; the
    /// one reported comes from the first optimum.
    pub inseparable_evidence: Option<Interleaving>,
    /// Orderings were not examined because there were too many components.
    pub orderings_skipped: bool,
}

/// Orderings are examined for at most this many components.
pub const MAX_ORDERING_COMPONENTS: usize = 7;

fn respects(
    alloc: &Allocation,
    comps: &[Vec<usize>],
    ordering: &[usize],
    profile: &ValueProfile,
) -> bool {
    for (x, &i) in ordering.iter().enumerate() {
        for &j in &ordering[x + 1..] {
            if !splits(alloc, &comps[i], &comps[j], profile).unwrap_or(false) {
                return false;
            }
        }
    }
    true
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..k)
            .rev()
            .find(|&j| cur[i] < cur[j])
            .expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// Exhausts the optima of one instance and classifies their contiguity.
pub fn classify_separability_empirical(
    graph: &Graph,
    profile: &ValueProfile,
    budget: u128,
) -> Result<SeparabilityReport> {
    let set = enumerate_optima(graph, profile, budget)?;
    Ok(classify_optima(graph, profile, &set))
}

/// Same as [`classify_separability_empirical`] on an already computed set.
pub fn classify_optima(
    graph: &Graph,
    profile: &ValueProfile,
    set: &OptimalSet,
) -> SeparabilityReport {
    let comps: Vec<Vec<usize>> = connected_components(graph)
        .into_iter()
        .map(|c| c.vertices)
        .collect();
    let strong = set
        .allocations
        .iter()
        .find(|a| is_contiguous_blocks(a, graph, profile))
        .cloned();
    let orderings_skipped = comps.len() > MAX_ORDERING_COMPONENTS;
    let mut per_ordering = Vec::new();
    if !orderings_skipped {
        for ordering in permutations(comps.len()) {
            if let Some(a) = set
                .allocations
                .iter()
                .find(|a| respects(a, &comps, &ordering, profile))
            {
                per_ordering.push(OrderingWitness {
                    ordering,
                    allocation: a.clone(),
                });
            }
        }
    }
    let all_interleave = !set.allocations.is_empty()
        && set
            .allocations
            .iter()
            .all(|a| find_interleaving(a, graph, profile).is_some());
    let evidence = if all_interleave {
        find_interleaving(&set.allocations[0], graph, profile)
    } else {
        None
    };
    SeparabilityReport {
        optimum: set.envy.clone(),
        optima: set.count,
        components: comps.len(),
        every_optimum_noncontiguous: strong.is_none(),
        strongly_separable_witness: strong,
        separable_witness_per_ordering: per_ordering,
        inseparable_evidence: evidence,
        orderings_skipped,
    }
}

/// With values `1..n`, some optimum gives every component a contiguous
/// block of values.
pub fn check_mla_contiguity(graph: &Graph, budget: u128) -> Result<bool> {
    let n = graph.vertex_count();
    let profile = ValueProfile::from_ints(&(1..=n as i64).collect::<Vec<_>>())?;
    let set = enumerate_optima(graph, &profile, budget)?;
    Ok(set
        .allocations
        .iter()
        .any(|a| is_contiguous_blocks(a, graph, &profile)))
}

/// The counterexample instances of the disconnected case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "figure")]
pub enum Figure {
    /// `K_2 + K_3` with values `0, eps, C, C + eps, C + 2 eps`.
    Fig3Top { epsilon: Rational, c: Rational },
    /// `K_2 + K_3` with values `0, M - delta, M, M + delta, 2M`.
    Fig3Bottom { m: Rational, delta: Rational },
    /// Two 2-leaf stars joined at their centers plus an isolated vertex, with
    /// values `0, eps, 2eps, D, 2D - 2eps, 2D - eps, 2D`.
    Fig4 { epsilon: Rational, d: Rational },
    /// Two double stars with `s1, s3` and `s2, s4` leaves; four clusters of
    /// `s_i + 1` values spaced `delta` apart, cluster `i` starting at
    /// `(i - 1) * gap`.
    Fig5 {
        s: [usize; 4],
        gap: Rational,
        delta: Rational,
    },
}

impl Figure {
    pub fn fig3_top() -> Self {
        Figure::Fig3Top {
            epsilon: Rational::frac(1, 100),
            c: Rational::from_integer(100),
        }
    }

    pub fn fig3_bottom() -> Self {
        Figure::Fig3Bottom {
            m: Rational::from_integer(50),
            delta: Rational::one(),
        }
    }

    pub fn fig4() -> Self {
        Figure::Fig4 {
            epsilon: Rational::one(),
            d: Rational::from_integer(20),
        }
    }

    pub fn fig5(s: [usize; 4]) -> Self {
        Figure::Fig5 {
            s,
            gap: Rational::from_integer(1_000_000),
            delta: Rational::one(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig3Top { .. } => "fig3-top",
            Figure::Fig3Bottom { .. } => "fig3-bottom",
            Figure::Fig4 { .. } => "fig4",
            Figure::Fig5 { .. } => "fig5",
        }
    }
}

/// Smallest leaf counts that satisfy the constraints of the fifth figure.
pub const FIG5_DEFAULT: [usize; 4] = [9, 12, 15, 18];

/// Checks `s1 < s2 < s3 < s4`, `|s_i - s_j| >= 3` and
/// `s_i + s_j > s_k + 2` for distinct `i, j, k`.
pub fn validate_fig5(s: &[usize; 4]) -> Result<()> {
    if !s.windows(2).all(|w| w[0] < w[1]) {
        return input(format!("fig5 needs s1 < s2 < s3 < s4, got {s:?}"));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if s[j] - s[i] < 3 {
                return input(format!(
                    "fig5 needs |s_i - s_j| >= 3, violated by s{} = {} and s{} = {}",
                    i + 1,
                    s[i],
                    j + 1,
                    s[j]
                ));
            }
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for k in 0..4 {
                if k != i && k != j && s[i] + s[j] <= s[k] + 2 {
                    return input(format!(
                        "fig5 needs s_i + s_j > s_k + 2, violated by s{} + s{} = {} <= s{} + 2 = {}",
                        i + 1,
                        j + 1,
                        s[i] + s[j],
                        k + 1,
                        s[k] + 2
                    ));
                }
            }
        }
    }
    Ok(())
}

fn positive(x: &Rational, name: &str) -> Result<()> {
    if x.is_negative() || x.is_zero() {
        return input(format!("{name} must be positive"));
    }
    Ok(())
}

/// Vertex layout of the fifth figure's forest: `(centers, leaves)` with
/// `centers[i]` the center of the star with `s[i]` leaves.
pub fn fig5_layout(s: &[usize; 4]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut next = 0;
    let mut centers = Vec::new();
    let mut leaves = Vec::new();
    for &k in s {
        centers.push(next);
        leaves.push((next + 1..next + 1 + k).collect());
        next += k + 1;
    }
    (centers, leaves)
}

/// Builds a figure's graph and values.
pub fn make_figure_instance(figure: &Figure) -> Result<Instance> {
    let k2k3 = || Graph::disjoint_union(&[Graph::complete(2), Graph::complete(3)]);
    let (graph, values) = match figure {
        Figure::Fig3Top { epsilon, c } => {
            positive(epsilon, "epsilon")?;
            if c <= &(epsilon + epsilon) {
                return input("fig3-top needs C > 2 epsilon");
            }
            let vals = vec![
                Rational::zero(),
                epsilon.clone(),
                c.clone(),
                c + epsilon,
                &(c + epsilon) + epsilon,
            ];
            (k2k3(), vals)
        }
        Figure::Fig3Bottom { m, delta } => {
            positive(delta, "delta")?;
            if m <= delta {
                return input("fig3-bottom needs M > delta");
            }
            let vals = vec![Rational::zero(), m - delta, m.clone(), m + delta, m + m];
            (k2k3(), vals)
        }
        Figure::Fig4 { epsilon, d } => {
            positive(epsilon, "epsilon")?;
            let two_eps = epsilon + epsilon;
            if d <= &two_eps {
                return input("fig4 needs D > 2 epsilon");
            }
            let top = d + d;
            let vals = vec![
                Rational::zero(),
                epsilon.clone(),
                two_eps.clone(),
                d.clone(),
                &top - &two_eps,
                &top - epsilon,
                top,
            ];
            let g = Graph::new(7, [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)])?;
            (g, vals)
        }
        Figure::Fig5 { s, gap, delta } => {
            validate_fig5(s)?;
            positive(gap, "gap")?;
            positive(delta, "delta")?;
            let widest = s[3] as i64;
            if gap <= &(delta * &Rational::from_integer(widest)) {
                return input("fig5 needs the gap to exceed the widest cluster");
            }
            let (centers, leaves) = fig5_layout(s);
            let n = s.iter().sum::<usize>() + 4;
            let mut edges = Vec::new();
            for (c, ls) in centers.iter().zip(&leaves) {
                edges.extend(ls.iter().map(|&l| (*c, l)));
            }
            // double stars: (s1, s3) and (s2, s4)
            edges.push((centers[0], centers[2]));
            edges.push((centers[1], centers[3]));
            let mut vals = Vec::with_capacity(n);
            for (i, &k) in s.iter().enumerate() {
                let base = gap * &Rational::from_integer(i as i64);
                for j in 0..=k {
                    vals.push(&base + &(delta * &Rational::from_integer(j as i64)));
                }
            }
            (Graph::new(n, edges)?, vals)
        }
    };
    let profile = ValueProfile::new(values)?;
    let meta = serde_json::to_value(figure).expect("figure serializes");
    Ok(Instance::identical(graph, profile)?.with_metadata("figure", meta))
}

/// Comparison between the interleaved allocation of the fifth figure and
/// the best contiguous-block allocation found by a star heuristic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fig5Check {
    pub interleaved: Allocation,
    pub interleaved_envy: Rational,
    pub best_contiguous_envy: Rational,
    pub best_contiguous: Allocation,
    pub interleaved_strictly_better: bool,
}

/// Cluster `i` (ranks) goes to star `i`: highest value of cluster 1 and 2
/// on their centers, lowest of clusters 3 and 4, so that the joining edges
/// are as short as possible.
fn fig5_interleaved(s: &[usize; 4], profile: &ValueProfile) -> Allocation {
    let (centers, leaves) = fig5_layout(s);
    let n = profile.len();
    let mut assignment = vec![0; n];
    let mut start = 0;
    for i in 0..4 {
        let ranks: Vec<usize> = (start..start + s[i] + 1).collect();
        let (center_rank, rest): (usize, Vec<usize>) = if i < 2 {
            (ranks[s[i]], ranks[..s[i]].to_vec())
        } else {
            (ranks[0], ranks[1..].to_vec())
        };
        assignment[centers[i]] = profile.house_at(center_rank);
        for (&leaf, r) in leaves[i].iter().zip(rest) {
            assignment[leaf] = profile.house_at(r);
        }
        start += s[i] + 1;
    }
    Allocation::from_vec_unchecked(assignment)
}

/// Best placement of a double star on a contiguous rank range: one star
/// takes the lower part and the other the upper part, in either order, and
/// each center tries every rank of its part.
fn place_double_star(
    graph: &Graph,
    stars: [(usize, &[usize]); 2],
    ranks: &[usize],
    profile: &ValueProfile,
    assignment: &mut [usize],
) {
    let mut best: Option<(Rational, Vec<(usize, usize)>)> = None;
    for (lo, hi) in [(0, 1), (1, 0)] {
        let lo_size = stars[lo].1.len() + 1;
        let (lo_ranks, hi_ranks) = ranks.split_at(lo_size);
        for c_lo in 0..lo_ranks.len() {
            for c_hi in 0..hi_ranks.len() {
                let mut pairs = Vec::new();
                for (star, part, c) in [(stars[lo], lo_ranks, c_lo), (stars[hi], hi_ranks, c_hi)] {
                    pairs.push((star.0, part[c]));
                    let others = part
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != c)
                        .map(|(_, &r)| r);
                    pairs.extend(star.1.iter().copied().zip(others));
                }
                let value =
                    |v: usize| profile.at_rank(pairs.iter().find(|p| p.0 == v).expect("placed").1);
                let envy: Rational = graph
                    .edges()
                    .iter()
                    .filter(|(u, w)| {
                        pairs.iter().any(|p| p.0 == *u) && pairs.iter().any(|p| p.0 == *w)
                    })
                    .map(|&(u, w)| value(u).abs_diff(value(w)))
                    .sum();
                if best.as_ref().is_none_or(|(b, _)| &envy < b) {
                    best = Some((envy, pairs));
                }
            }
        }
    }
    for (v, r) in best.expect("some placement").1 {
        assignment[v] = profile.house_at(r);
    }
}

/// Structural check on the fifth figure: the interleaved allocation against
/// both contiguous-block layouts of the two double stars.
pub fn check_fig5(s: [usize; 4]) -> Result<Fig5Check> {
    let inst = make_figure_instance(&Figure::fig5(s))?;
    let profile = inst.profile()?;
    let graph = &inst.graph;
    let interleaved = fig5_interleaved(&s, profile);
    let interleaved_envy = total_envy(&interleaved, graph, profile)?;
    let (centers, leaves) = fig5_layout(&s);
    let a_stars = [
        (centers[0], leaves[0].as_slice()),
        (centers[2], leaves[2].as_slice()),
    ];
    let b_stars = [
        (centers[1], leaves[1].as_slice()),
        (centers[3], leaves[3].as_slice()),
    ];
    let a_size = s[0] + s[2] + 2;
    let n = profile.len();
    let mut best: Option<(Rational, Allocation)> = None;
    for a_first in [true, false] {
        let mut assignment = vec![0; n];
        let (a_ranks, b_ranks): (Vec<usize>, Vec<usize>) = if a_first {
            ((0..a_size).collect(), (a_size..n).collect())
        } else {
            ((n - a_size..n).collect(), (0..n - a_size).collect())
        };
        place_double_star(graph, a_stars, &a_ranks, profile, &mut assignment);
        place_double_star(graph, b_stars, &b_ranks, profile, &mut assignment);
        let alloc = Allocation::new(assignment)?;
        let envy = total_envy(&alloc, graph, profile)?;
        if best.as_ref().is_none_or(|(b, _)| &envy < b) {
            best = Some((envy, alloc));
        }
    }
    let (best_contiguous_envy, best_contiguous) = best.expect("two layouts");
    Ok(Fig5Check {
        interleaved_strictly_better: interleaved_envy < best_contiguous_envy,
        interleaved,
        interleaved_envy,
        best_contiguous_envy,
        best_contiguous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DEFAULT_BUDGET;

    fn ints(v: &[i64]) -> ValueProfile {
        ValueProfile::from_ints(v).unwrap()
    }

    #[test]
    fn splits_examples() {
        // vertices 0, 1 in A and 2, 3, 4 in B; values are 1..7 minus gaps
        let p = ints(&[1, 2, 3, 4, 5, 6, 7]);
        let a = Allocation::new(vec![0, 1, 4, 5, 6, 2, 3]).unwrap();
        assert!(splits(&a, &[0, 1], &[2, 3, 4], &p).unwrap());
        assert!(splits(&a, &[2, 3, 4], &[0, 1], &p).unwrap());
        // A holds {1, 7}, B holds {3, 4, 5}
        let b = Allocation::new(vec![0, 6, 2, 3, 4, 1, 5]).unwrap();
        assert!(splits(&b, &[2, 3, 4], &[0, 1], &p).unwrap());
        assert!(!splits(&b, &[0, 1], &[2, 3, 4], &p).unwrap());
        assert!(splits(&b, &[5], &[6], &p).unwrap());
        assert!(splits(&b, &[0, 1], &[1], &p).is_err());
    }

    #[test]
    fn separable_union_of_paths() {
        let g = Graph::disjoint_union(&[Graph::path(2), Graph::path(3)]);
        let r =
            classify_separability_empirical(&g, &ints(&[3, 9, 1, 4, 7]), DEFAULT_BUDGET).unwrap();
        assert!(r.strongly_separable_witness.is_some());
        assert_eq!(r.separable_witness_per_ordering.len(), 2);
        assert!(r.inseparable_evidence.is_none());
    }

    #[test]
    fn fig3_bottom_has_no_contiguous_optimum() {
        let inst = make_figure_instance(&Figure::fig3_bottom()).unwrap();
        let r =
            classify_separability_empirical(&inst.graph, inst.profile().unwrap(), DEFAULT_BUDGET)
                .unwrap();
        assert_eq!(r.optimum, Rational::from_integer(104));
        assert!(r.every_optimum_noncontiguous);
        // the triangle (component 1) splits the edge
        assert!(r
            .separable_witness_per_ordering
            .iter()
            .any(|w| w.ordering == vec![1, 0]));
        assert!(!r
            .separable_witness_per_ordering
            .iter()
            .any(|w| w.ordering == vec![0, 1]));
    }

    #[test]
    fn fig3_top_is_contiguous() {
        let inst = make_figure_instance(&Figure::fig3_top()).unwrap();
        let r =
            classify_separability_empirical(&inst.graph, inst.profile().unwrap(), DEFAULT_BUDGET)
                .unwrap();
        assert!(r.strongly_separable_witness.is_some());
    }

    #[test]
    fn fig4_extremes_go_to_the_double_star() {
        let inst = make_figure_instance(&Figure::fig4()).unwrap();
        let p = inst.profile().unwrap();
        let r = classify_separability_empirical(&inst.graph, p, DEFAULT_BUDGET).unwrap();
        assert!(r.every_optimum_noncontiguous);
        let set = enumerate_optima(&inst.graph, p, DEFAULT_BUDGET).unwrap();
        for a in &set.allocations {
            assert_eq!(p.value(a.house(6)), &Rational::from_integer(20));
        }
        assert!(check_mla_contiguity(&inst.graph, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn interleaving_detection() {
        let g = Graph::disjoint_union(&[Graph::path(2), Graph::path(2)]);
        let p = ints(&[1, 2, 3, 4]);
        let a = Allocation::new(vec![0, 2, 1, 3]).unwrap();
        let found = find_interleaving(&a, &g, &p).unwrap();
        assert_eq!(found.components, (0, 1));
        assert_eq!(found.values, [1, 2, 3, 4].map(Rational::from_integer));
        assert!(find_interleaving(&Allocation::identity(4), &g, &p).is_none());
    }

    #[test]
    fn mla_contiguity_examples() {
        let g = Graph::disjoint_union(&[Graph::complete(2), Graph::complete(3)]);
        assert!(check_mla_contiguity(&g, DEFAULT_BUDGET).unwrap());
        assert!(check_mla_contiguity(&Graph::cycle(5).unwrap(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn fig5_constraints() {
        assert!(validate_fig5(&FIG5_DEFAULT).is_ok());
        assert!(validate_fig5(&[8, 11, 14, 17]).is_err());
        assert!(validate_fig5(&[9, 11, 15, 18]).is_err());
        let err = make_figure_instance(&Figure::fig5([1, 2, 3, 4]))
            .unwrap_err()
            .to_string();
        assert!(err.contains(">= 3"), "{err}");
    }

    #[test]
    fn fig5_interleaved_beats_blocks() {
        let check = check_fig5(FIG5_DEFAULT).unwrap();
        assert!(check.interleaved_strictly_better, "{check:?}");
        let inst = make_figure_instance(&Figure::fig5(FIG5_DEFAULT)).unwrap();
        assert_eq!(inst.n(), 58);
        assert!(!is_contiguous_blocks(
            &check.interleaved,
            &inst.graph,
            inst.profile().unwrap()
        ));
    }
}
