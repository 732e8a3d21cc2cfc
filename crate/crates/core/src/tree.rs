//! Median properties on binary trees and experiments on general trees.
//!
//! All comparisons between houses use ranks, so tied values behave as if
//! broken by house id.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::allocation::{Allocation, Guarantee, SolveResult};
use crate::envy::total_envy;
use crate::error::{input, Error, Result};
use crate::graph::{validate_binary_tree, Graph, RootedTree};
use crate::oracle::enumerate_optima;
use crate::profile::{invert_profile, ValueProfile};
use crate::rational::Rational;

fn require_binary(tree: &RootedTree, alloc: &Allocation, profile: &ValueProfile) -> Result<()> {
    if !validate_binary_tree(tree) {
        return input("tree is not binary: some vertex has exactly one or more than two children");
    }
    if alloc.len() != tree.len() || profile.len() != tree.len() {
        return input(format!(
            "tree has {} vertices, allocation {} and profile {}",
            tree.len(),
            alloc.len(),
            profile.len()
        ));
    }
    Ok(())
}

fn rank(alloc: &Allocation, profile: &ValueProfile, v: usize) -> usize {
    profile.rank_of(alloc.house(v))
}

fn is_local_median_at(
    tree: &RootedTree,
    alloc: &Allocation,
    profile: &ValueProfile,
    v: usize,
) -> bool {
    let y = rank(alloc, profile, v);
    let below = tree
        .children(v)
        .iter()
        .filter(|&&c| rank(alloc, profile, c) < y)
        .count();
    tree.is_leaf(v) || below == 1
}

/// Every internal node holds the median of itself and its two children.
pub fn check_local_median(
    tree: &RootedTree,
    alloc: &Allocation,
    profile: &ValueProfile,
) -> Result<bool> {
    require_binary(tree, alloc, profile)?;
    Ok((0..tree.len()).all(|v| is_local_median_at(tree, alloc, profile, v)))
}

/// At every internal node one child subtree lies entirely below the node's
/// value and the other entirely above.
pub fn check_global_median(
    tree: &RootedTree,
    alloc: &Allocation,
    profile: &ValueProfile,
) -> Result<bool> {
    require_binary(tree, alloc, profile)?;
    let n = tree.len();
    // (min rank, max rank) per subtree, children before parents
    let mut span = vec![(usize::MAX, 0usize); n];
    for &v in tree.bfs_order().iter().rev() {
        let y = rank(alloc, profile, v);
        let mut lo = y;
        let mut hi = y;
        for &c in tree.children(v) {
            lo = lo.min(span[c].0);
            hi = hi.max(span[c].1);
        }
        span[v] = (lo, hi);
        if let [a, b] = tree.children(v) {
            let (a, b) = (span[*a], span[*b]);
            let split = (a.1 < y && y < b.0) || (b.1 < y && y < a.0);
            if !split {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The violating internal node furthest from the root (smallest id among
/// equally deep ones).
pub fn deepest_violation(
    tree: &RootedTree,
    alloc: &Allocation,
    profile: &ValueProfile,
) -> Option<usize> {
    (0..tree.len())
        .filter(|&v| !is_local_median_at(tree, alloc, profile, v))
        .max_by(|&a, &b| tree.depth(a).cmp(&tree.depth(b)).then(b.cmp(&a)))
}

/// Envy of the edges inside the subtree rooted at `v`.
pub fn subtree_envy(
    tree: &RootedTree,
    v: usize,
    alloc: &Allocation,
    profile: &ValueProfile,
) -> Rational {
    let mut total = Rational::zero();
    for u in tree.subtree(v) {
        for &c in tree.children(u) {
            total += profile
                .value(alloc.house(u))
                .abs_diff(profile.value(alloc.house(c)));
        }
    }
    total
}

/// One improving move at the deepest violating node.
///
/// If the node's value is below both children, the value is pushed down
/// along least-valued children until it reaches a leaf or a node with a
/// child below it, and the houses on that path rotate up by one. If it is
/// above both children, the same move runs on the inverted profile. Returns
/// [`Error::NoViolation`] when the allocation is already local-median.
pub fn local_median_step(
    tree: &RootedTree,
    alloc: &Allocation,
    profile: &ValueProfile,
) -> Result<Allocation> {
    require_binary(tree, alloc, profile)?;
    let node = deepest_violation(tree, alloc, profile).ok_or(Error::NoViolation)?;
    let y = rank(alloc, profile, node);
    let below_both = tree
        .children(node)
        .iter()
        .all(|&c| rank(alloc, profile, c) > y);
    let inverted;
    let view = if below_both {
        profile
    } else {
        inverted = invert_profile(profile);
        &inverted
    };
    Ok(push_down(tree, alloc, view, node))
}

fn push_down(
    tree: &RootedTree,
    alloc: &Allocation,
    profile: &ValueProfile,
    node: usize,
) -> Allocation {
    let y = rank(alloc, profile, node);
    let mut path = vec![node];
    let mut cur = node;
    loop {
        let children = tree.children(cur);
        if children.is_empty() || children.iter().any(|&c| rank(alloc, profile, c) < y) {
            break;
        }
        let next = *children
            .iter()
            .min_by_key(|&&c| rank(alloc, profile, c))
            .expect("non-empty");
        path.push(next);
        cur = next;
    }
    let mut out = alloc.as_slice().to_vec();
    for w in path.windows(2) {
        out[w[0]] = alloc.house(w[1]);
    }
    out[*path.last().expect("non-empty")] = alloc.house(node);
    Allocation::from_vec_unchecked(out)
}

/// Applies [`local_median_step`] until the local median property holds, at
/// most `n^3` times.
pub fn local_median_fixpoint(
    tree: &RootedTree,
    alloc: &Allocation,
    profile: &ValueProfile,
) -> Result<SolveResult> {
    require_binary(tree, alloc, profile)?;
    let n = tree.len();
    let cap = (n as u64).pow(3).max(1);
    let inverted = invert_profile(profile);
    let up: Vec<usize> = (0..n).map(|h| profile.rank_of(h)).collect();
    let down: Vec<usize> = (0..n).map(|h| inverted.rank_of(h)).collect();
    let mut houses = alloc.as_slice().to_vec();

    // Same order as repeated `local_median_step`: deepest first, then smallest id.
    let key = |v: usize| (Reverse(tree.depth(v)), v);
    let violates = |houses: &[usize], v: usize| {
        let y = up[houses[v]];
        !tree.is_leaf(v)
            && tree
                .children(v)
                .iter()
                .filter(|&&c| up[houses[c]] < y)
                .count()
                != 1
    };
    let mut pending: BTreeSet<(Reverse<usize>, usize)> =
        (0..n).filter(|&v| violates(&houses, v)).map(key).collect();

    let mut steps = 0u64;
    while let Some((_, node)) = pending.pop_first() {
        let below_both = tree
            .children(node)
            .iter()
            .all(|&c| up[houses[c]] > up[houses[node]]);
        let ranks = if below_both { &up } else { &down };
        let y = ranks[houses[node]];
        let mut path = vec![node];
        let mut cur = node;
        loop {
            let children = tree.children(cur);
            if children.is_empty() || children.iter().any(|&c| ranks[houses[c]] < y) {
                break;
            }
            cur = *children
                .iter()
                .min_by_key(|&&c| ranks[houses[c]])
                .expect("non-empty");
            path.push(cur);
        }
        let moving = houses[node];
        for w in path.windows(2) {
            houses[w[0]] = houses[w[1]];
        }
        houses[cur] = moving;

        let mut touched = path.clone();
        touched.extend(tree.parent(node));
        for v in touched {
            if violates(&houses, v) {
                pending.insert(key(v));
            } else {
                pending.remove(&key(v));
            }
        }
        steps += 1;
        if steps > cap {
            return Err(Error::IterationLimit(format!(
                "local median fixpoint exceeded {cap} steps"
            )));
        }
    }
    let cur = Allocation::from_vec_unchecked(houses);
    let envy = total_envy(&cur, tree.graph(), profile)?;
    Ok(SolveResult {
        allocation: cur,
        envy,
        solver: "local_median_fixpoint".into(),
        guarantee: Guarantee::Heuristic,
    })
}

/// Outcome of checking the two descent properties of a single step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepAudit {
    pub node: usize,
    pub before: Rational,
    pub after: Rational,
    /// Subtree envy at the violating node strictly decreased.
    pub strict_decrease: bool,
    /// No subtree rooted outside the violating subtree got worse.
    pub others_weakly_decrease: bool,
}

/// Runs one step and measures subtree envies on both sides of it.
pub fn audit_step(
    tree: &RootedTree,
    alloc: &Allocation,
    profile: &ValueProfile,
) -> Result<(Allocation, StepAudit)> {
    require_binary(tree, alloc, profile)?;
    let node = deepest_violation(tree, alloc, profile).ok_or(Error::NoViolation)?;
    let next = local_median_step(tree, alloc, profile)?;
    let before = subtree_envy(tree, node, alloc, profile);
    let after = subtree_envy(tree, node, &next, profile);
    let others_weakly_decrease = (0..tree.len())
        .filter(|&u| !tree.is_descendant(u, node))
        .all(|u| subtree_envy(tree, u, &next, profile) <= subtree_envy(tree, u, alloc, profile));
    let audit = StepAudit {
        node,
        strict_decrease: after < before,
        before,
        after,
        others_weakly_decrease,
    };
    Ok((next, audit))
}

/// Whether some optimal allocation satisfies the local median property.
pub fn local_median_among_optima(
    tree: &RootedTree,
    profile: &ValueProfile,
    budget: u128,
) -> Result<bool> {
    let set = enumerate_optima(tree.graph(), profile, budget)?;
    for a in &set.allocations {
        if check_local_median(tree, a, profile)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether some optimal allocation satisfies the global median property.
pub fn global_median_among_optima(
    tree: &RootedTree,
    profile: &ValueProfile,
    budget: u128,
) -> Result<bool> {
    let set = enumerate_optima(tree.graph(), profile, budget)?;
    for a in &set.allocations {
        if check_global_median(tree, a, profile)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Result of the extreme-values experiment on one tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeExtremesReport {
    pub optimum: Rational,
    pub optima: u64,
    /// Some optimum has the lowest and highest houses on leaves, joined by a
    /// path along which values increase.
    pub holds: bool,
    pub witness: Option<Allocation>,
}

/// True when the lowest and highest ranked houses sit on leaves and the
/// tree path between them is monotone.
pub fn extremes_on_monotone_leaves(
    graph: &Graph,
    alloc: &Allocation,
    profile: &ValueProfile,
) -> bool {
    let n = graph.vertex_count();
    if n <= 1 {
        return true;
    }
    let owners = alloc.owners();
    let lo = owners[profile.house_at(0)];
    let hi = owners[profile.house_at(n - 1)];
    if graph.degree(lo) != 1 || graph.degree(hi) != 1 {
        return false;
    }
    let Ok(rooted) = RootedTree::new(graph.clone(), lo) else {
        return false;
    };
    let mut cur = hi;
    let mut last = profile.rank_of(alloc.house(hi));
    while let Some(p) = rooted.parent(cur) {
        let r = profile.rank_of(alloc.house(p));
        if r >= last {
            return false;
        }
        last = r;
        cur = p;
    }
    true
}

/// Exhausts a tree's optima and checks [`extremes_on_monotone_leaves`].
pub fn experiment_tree_extremes(
    graph: &Graph,
    profile: &ValueProfile,
    budget: u128,
) -> Result<TreeExtremesReport> {
    if !graph.is_tree() {
        return input("tree experiment needs a tree");
    }
    let set = enumerate_optima(graph, profile, budget)?;
    let witness = set
        .allocations
        .iter()
        .find(|a| extremes_on_monotone_leaves(graph, a, profile))
        .cloned();
    Ok(TreeExtremesReport {
        optimum: set.envy,
        optima: set.count,
        holds: witness.is_some(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force, DEFAULT_BUDGET};

    fn cherry() -> RootedTree {
        RootedTree::new(Graph::new(3, [(0, 1), (0, 2)]).unwrap(), 0).unwrap()
    }

    fn p123() -> ValueProfile {
        ValueProfile::from_ints(&[1, 2, 3]).unwrap()
    }

    #[test]
    fn fixpoint_matches_repeated_steps() {
        use rand::seq::SliceRandom;
        let mut rng = crate::generate::seeded(5);
        for n in [3, 5, 9, 15, 31] {
            let tree = crate::generate::random_binary_tree(n, &mut rng).unwrap();
            let p = crate::generate::random_values(n, &mut rng);
            let mut start: Vec<usize> = (0..n).collect();
            start.shuffle(&mut rng);
            let start = Allocation::new(start).unwrap();
            let mut cur = start.clone();
            while let Ok(next) = local_median_step(&tree, &cur, &p) {
                cur = next;
            }
            let fast = local_median_fixpoint(&tree, &start, &p).unwrap();
            assert_eq!(fast.allocation, cur);
            assert!(check_local_median(&tree, &cur, &p).unwrap());
        }
    }

    #[test]
    fn local_median_examples() {
        let t = cherry();
        let p = p123();
        // root holds value 2
        assert!(check_local_median(&t, &Allocation::new(vec![1, 0, 2]).unwrap(), &p).unwrap());
        assert!(!check_local_median(&t, &Allocation::new(vec![0, 1, 2]).unwrap(), &p).unwrap());
        let t7 = RootedTree::complete_binary(3);
        let p7 = ValueProfile::from_ints(&[1, 2, 3, 4, 5, 6, 7]).unwrap();
        assert!(!check_local_median(&t7, &Allocation::identity(7), &p7).unwrap());
        let single = RootedTree::new(Graph::empty(1), 0).unwrap();
        let one = ValueProfile::from_ints(&[4]).unwrap();
        assert!(check_local_median(&single, &Allocation::identity(1), &one).unwrap());
    }

    #[test]
    fn non_binary_is_rejected() {
        let t = RootedTree::new(Graph::path(3), 0).unwrap();
        assert!(check_local_median(&t, &Allocation::identity(3), &p123()).is_err());
    }

    #[test]
    fn global_median_examples() {
        let t = cherry();
        let p = p123();
        assert!(check_global_median(&t, &Allocation::new(vec![1, 0, 2]).unwrap(), &p).unwrap());
        // heap tree: root 4, left child 2 but a left leaf holds 5
        let t7 = RootedTree::complete_binary(3);
        let p7 = ValueProfile::from_ints(&[1, 2, 3, 4, 5, 6, 7]).unwrap();
        let a = Allocation::new(vec![3, 1, 5, 0, 4, 6, 2]).unwrap();
        assert!(check_local_median(&t7, &a, &p7).unwrap());
        assert!(!check_global_median(&t7, &a, &p7).unwrap());
    }

    #[test]
    fn step_examples() {
        let t = cherry();
        let p = p123();
        let a = Allocation::new(vec![0, 1, 2]).unwrap();
        let b = local_median_step(&t, &a, &p).unwrap();
        assert_eq!(b.as_slice(), &[1, 0, 2]);
        assert_eq!(
            total_envy(&b, t.graph(), &p).unwrap(),
            Rational::from_integer(2)
        );

        let a = Allocation::new(vec![2, 0, 1]).unwrap();
        let b = local_median_step(&t, &a, &p).unwrap();
        assert_eq!(b.house(0), 1);
        assert_eq!(
            total_envy(&b, t.graph(), &p).unwrap(),
            Rational::from_integer(2)
        );
        assert_eq!(
            brute_force(t.graph(), &p, DEFAULT_BUDGET).unwrap().envy,
            Rational::from_integer(2)
        );

        let good = Allocation::new(vec![1, 0, 2]).unwrap();
        assert!(matches!(
            local_median_step(&t, &good, &p),
            Err(Error::NoViolation)
        ));
    }

    #[test]
    fn fixpoint_on_small_trees() {
        let t = cherry();
        let p = p123();
        for a in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            let r = local_median_fixpoint(&t, &Allocation::new(a.to_vec()).unwrap(), &p).unwrap();
            assert_eq!(r.envy, Rational::from_integer(2));
            assert_eq!(r.guarantee, Guarantee::Heuristic);
        }
    }

    #[test]
    fn audited_steps_on_heap_tree() {
        let t = RootedTree::complete_binary(3);
        let p = ValueProfile::from_ints(&[3, 9, 4, 1, 7, 12, 5]).unwrap();
        let mut a = Allocation::identity(7);
        while let Ok((next, audit)) = audit_step(&t, &a, &p) {
            assert!(
                audit.strict_decrease && audit.others_weakly_decrease,
                "{audit:?}"
            );
            a = next;
        }
        assert!(check_local_median(&t, &a, &p).unwrap());
    }

    #[test]
    fn extremes_examples() {
        let p4 = ValueProfile::from_ints(&[1, 2, 3, 4]).unwrap();
        assert!(
            experiment_tree_extremes(&Graph::path(4), &p4, DEFAULT_BUDGET)
                .unwrap()
                .holds
        );
        assert!(
            experiment_tree_extremes(&Graph::star(3), &p4, DEFAULT_BUDGET)
                .unwrap()
                .holds
        );
        assert!(experiment_tree_extremes(&Graph::cycle(4).unwrap(), &p4, DEFAULT_BUDGET).is_err());
        // the min on the center of a star is not a leaf
        let center_min = Allocation::new(vec![0, 1, 2, 3]).unwrap();
        assert!(!extremes_on_monotone_leaves(
            &Graph::star(3),
            &center_min,
            &p4
        ));
    }

    #[test]
    fn optima_include_local_median() {
        let t = RootedTree::complete_binary(3);
        let p = ValueProfile::from_ints(&[2, 11, 3, 8, 5, 13, 1]).unwrap();
        assert!(local_median_among_optima(&t, &p, DEFAULT_BUDGET).unwrap());
    }
}
