//! Instance generators from minimum bisection and unary bin packing, with
//! exhaustive checks that the constructions preserve the answer on small
//! inputs.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::graph::Graph;
use crate::instance::Instance;
use crate::oracle::brute_force;
use crate::profile::ValueProfile;
use crate::rational::Rational;

/// `1 / n^3`.
pub fn default_epsilon(n: usize) -> Rational {
    let n = n.max(1) as i64;
    Rational::frac(1, n * n * n)
}

/// Same graph; `n/2` values `k eps / n` and `n/2` values `1 + k eps / n`.
pub fn gen_from_bisection(graph: &Graph, epsilon: Option<Rational>) -> Result<Instance> {
    let n = graph.vertex_count();
    if n % 2 == 1 {
        return input(format!(
            "bisection needs an even number of vertices, got {n}"
        ));
    }
    let eps = epsilon.unwrap_or_else(|| default_epsilon(n));
    if eps.is_negative() || eps.is_zero() {
        return input("epsilon must be positive");
    }
    let step = &eps / &Rational::from_integer(n.max(1) as i64);
    let half = n / 2;
    let mut values = Vec::with_capacity(n);
    for base in [Rational::zero(), Rational::one()] {
        for k in 0..half {
            values.push(&base + &(&step * &Rational::from_integer(k as i64)));
        }
    }
    let inst = Instance::identical(graph.clone(), ValueProfile::new(values)?)?
        .with_metadata("source", "minimum_bisection")
        .with_metadata("epsilon", eps.to_string());
    Ok(inst)
}

/// Fewest edges crossing a balanced partition, by exhaustion.
pub fn min_bisection(graph: &Graph) -> Result<usize> {
    let n = graph.vertex_count();
    if n % 2 == 1 {
        return input("bisection needs an even number of vertices");
    }
    if n > 30 {
        return input("exhaustive bisection supports at most 30 vertices");
    }
    if n == 0 {
        return Ok(0);
    }
    let mut best = usize::MAX;
    // vertex 0 stays on side A to skip mirrored partitions
    for mask in 0u32..(1u32 << (n - 1)) {
        let side = (mask << 1) | 1;
        if side.count_ones() as usize != n / 2 {
            continue;
        }
        let cut = graph
            .edges()
            .iter()
            .filter(|&&(u, v)| (side >> u & 1) != (side >> v & 1))
            .count();
        best = best.min(cut);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisectionCheck {
    pub k: usize,
    pub min_bisection: usize,
    pub envy: Rational,
    /// `k + n^2 eps`.
    pub threshold: Rational,
    pub bisection_at_most_k: bool,
    pub envy_within_threshold: bool,
    pub holds: bool,
}

/// Compares `(bisection <= k)` with `(envy <= k + n^2 eps)` on the generated
/// instance with the default `eps`.
pub fn verify_bisection_small(graph: &Graph, k: usize, budget: u128) -> Result<BisectionCheck> {
    let inst = gen_from_bisection(graph, None)?;
    let n = graph.vertex_count();
    let eps = default_epsilon(n);
    let envy = brute_force(&inst.graph, inst.profile()?, budget)?.envy;
    let bis = min_bisection(graph)?;
    let threshold =
        &Rational::from_integer(k as i64) + &(&eps * &Rational::from_integer((n * n) as i64));
    let bisection_at_most_k = bis <= k;
    let envy_within_threshold = envy <= threshold;
    Ok(BisectionCheck {
        k,
        min_bisection: bis,
        envy,
        threshold,
        bisection_at_most_k,
        envy_within_threshold,
        holds: bisection_at_most_k == envy_within_threshold,
    })
}

/// Items with sizes, `bins` bins of capacity `capacity`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinPackingInput {
    pub sizes: Vec<usize>,
    pub capacity: usize,
    pub bins: usize,
}

/// Largest `k B` accepted; sizes are encoded in unary as vertices.
pub const MAX_UNARY_TOTAL: usize = 1 << 20;

impl BinPackingInput {
    pub fn new(sizes: Vec<usize>, capacity: usize, bins: usize) -> Result<Self> {
        if capacity == 0 || bins == 0 {
            return input("capacity and bin count must be positive");
        }
        if let Some(&s) = sizes.iter().find(|&&s| s == 0 || s > capacity) {
            return input(format!("item size {s} must lie in 1..={capacity}"));
        }
        let total = capacity.checked_mul(bins).filter(|&t| t <= MAX_UNARY_TOTAL);
        let Some(total) = total else {
            return input(format!("k B must be at most {MAX_UNARY_TOTAL}"));
        };
        if sizes.iter().sum::<usize>() > total {
            return input("item sizes exceed the total capacity k B");
        }
        Ok(BinPackingInput {
            sizes,
            capacity,
            bins,
        })
    }

    pub fn total(&self) -> usize {
        self.capacity * self.bins
    }

    /// Exhaustive feasibility: largest items first, identical bins
    /// deduplicated.
    pub fn feasible(&self) -> bool {
        let mut items = self.sizes.clone();
        items.sort_unstable_by(|a, b| b.cmp(a));
        let mut load = vec![0usize; self.bins];
        fn place(items: &[usize], load: &mut [usize], cap: usize) -> bool {
            let Some((&first, rest)) = items.split_first() else {
                return true;
            };
            for b in 0..load.len() {
                if load[b] + first > cap || load[..b].contains(&load[b]) {
                    continue;
                }
                load[b] += first;
                let ok = place(rest, load, cap);
                load[b] -= first;
                if ok {
                    return true;
                }
            }
            false
        }
        place(&items, &mut load, self.capacity)
    }
}

/// Connected graph used for an item of size `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinFamily {
    Paths,
    Cycles,
    /// A star with `t - 1` spokes.
    Stars,
    Cliques,
}

impl BinFamily {
    pub fn graph(self, t: usize) -> Result<Graph> {
        Ok(match self {
            BinFamily::Paths => Graph::path(t),
            BinFamily::Cycles => {
                if t < 3 {
                    return input(format!(
                        "the cycle family needs item sizes of at least 3, got {t}"
                    ));
                }
                Graph::cycle(t)?
            }
            BinFamily::Stars => Graph::star(t - 1),
            BinFamily::Cliques => Graph::complete(t),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            BinFamily::Paths => "paths",
            BinFamily::Cycles => "cycles",
            BinFamily::Stars => "stars",
            BinFamily::Cliques => "cliques",
        }
    }
}

/// `C = 4 n (spread + 1)` where `spread = (B - 1) eps / n` is the width of
/// one cluster.
pub fn default_gap(n: usize, capacity: usize, epsilon: &Rational) -> Rational {
    let n_r = Rational::from_integer(n.max(1) as i64);
    let spread = &(epsilon * &Rational::from_integer(capacity as i64 - 1)) / &n_r;
    &Rational::from_integer(4 * n.max(1) as i64) * &(&spread + &Rational::one())
}

/// One component per item, padded with isolated vertices to `k B`; `k`
/// clusters of `B` values, spaced `eps / n` inside a cluster and `C` apart.
pub fn gen_from_binpacking(
    bp: &BinPackingInput,
    family: BinFamily,
    c: Option<Rational>,
    epsilon: Option<Rational>,
) -> Result<Instance> {
    let n = bp.total();
    let eps = epsilon.unwrap_or_else(|| default_epsilon(n));
    if eps.is_negative() || eps.is_zero() {
        return input("epsilon must be positive");
    }
    let c = c.unwrap_or_else(|| default_gap(n, bp.capacity, &eps));
    if c.is_negative() || c.is_zero() {
        return input("C must be positive");
    }
    let mut parts = Vec::with_capacity(bp.sizes.len() + 1);
    for &t in &bp.sizes {
        parts.push(family.graph(t)?);
    }
    let used: usize = bp.sizes.iter().sum();
    parts.push(Graph::empty(n - used));
    let graph = Graph::disjoint_union(&parts);
    let step = &eps / &Rational::from_integer(n as i64);
    let pitch = &c + &eps;
    let mut values = Vec::with_capacity(n);
    for j in 0..bp.bins {
        let base = &pitch * &Rational::from_integer(j as i64);
        for t in 0..bp.capacity {
            values.push(&base + &(&step * &Rational::from_integer(t as i64)));
        }
    }
    let inst = Instance::identical(graph, ValueProfile::new(values)?)?
        .with_metadata("source", "unary_bin_packing")
        .with_metadata("family", family.name())
        .with_metadata("items", serde_json::json!(bp.sizes))
        .with_metadata("capacity", bp.capacity)
        .with_metadata("bins", bp.bins)
        .with_metadata("c", c.to_string())
        .with_metadata("epsilon", eps.to_string());
    Ok(inst)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinPackingCheck {
    pub packable: bool,
    pub envy: Rational,
    pub c: Rational,
    pub envy_below_c: bool,
    pub holds: bool,
}

/// Compares exhaustive packability with `(optimal envy < C)`.
pub fn verify_binpacking_small(
    bp: &BinPackingInput,
    family: BinFamily,
    c: Option<Rational>,
    epsilon: Option<Rational>,
    budget: u128,
) -> Result<BinPackingCheck> {
    let n = bp.total();
    let eps = epsilon.unwrap_or_else(|| default_epsilon(n));
    let c = c.unwrap_or_else(|| default_gap(n, bp.capacity, &eps));
    let inst = gen_from_binpacking(bp, family, Some(c.clone()), Some(eps))?;
    let envy = brute_force(&inst.graph, inst.profile()?, budget)?.envy;
    let packable = bp.feasible();
    let envy_below_c = envy < c;
    Ok(BinPackingCheck {
        holds: packable == envy_below_c,
        packable,
        envy,
        c,
        envy_below_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DEFAULT_BUDGET;

    #[test]
    fn bisection_values() {
        let inst =
            gen_from_bisection(&Graph::cycle(4).unwrap(), Some(Rational::frac(1, 64))).unwrap();
        let want = [
            Rational::zero(),
            Rational::frac(1, 256),
            Rational::one(),
            Rational::frac(257, 256),
        ];
        assert_eq!(inst.profile().unwrap().sorted_values(), &want);
        assert!(gen_from_bisection(&Graph::path(3), None).is_err());
    }

    #[test]
    fn bisection_small_cases() {
        let k2 = gen_from_bisection(&Graph::path(2), None).unwrap();
        let envy = brute_force(&k2.graph, k2.profile().unwrap(), DEFAULT_BUDGET)
            .unwrap()
            .envy;
        assert!(envy >= Rational::one() && envy <= &Rational::one() + &Rational::frac(2, 8));

        let empty = gen_from_bisection(&Graph::empty(4), None).unwrap();
        assert!(
            brute_force(&empty.graph, empty.profile().unwrap(), DEFAULT_BUDGET)
                .unwrap()
                .envy
                < default_epsilon(4)
        );

        let c4 = verify_bisection_small(&Graph::cycle(4).unwrap(), 2, DEFAULT_BUDGET).unwrap();
        assert!(c4.holds && c4.bisection_at_most_k);
        assert_eq!(c4.min_bisection, 2);
        let c6 = verify_bisection_small(&Graph::cycle(6).unwrap(), 1, DEFAULT_BUDGET).unwrap();
        assert!(c6.holds && !c6.bisection_at_most_k && !c6.envy_within_threshold);
        let k4 = verify_bisection_small(&Graph::complete(4), 4, DEFAULT_BUDGET).unwrap();
        assert!(k4.holds && k4.bisection_at_most_k);
        assert_eq!(k4.min_bisection, 4);
    }

    #[test]
    fn binpacking_generation() {
        let bp = BinPackingInput::new(vec![2, 2, 2], 3, 2).unwrap();
        let inst = gen_from_binpacking(&bp, BinFamily::Paths, None, None).unwrap();
        assert_eq!(inst.n(), 6);
        assert_eq!(inst.graph.edge_count(), 3);
        assert!(gen_from_binpacking(&bp, BinFamily::Cycles, None, None).is_err());
        let single = BinPackingInput::new(vec![1], 1, 1).unwrap();
        let inst = gen_from_binpacking(&single, BinFamily::Stars, None, None).unwrap();
        assert_eq!(inst.n(), 1);
        assert!(brute_force(&inst.graph, inst.profile().unwrap(), 10)
            .unwrap()
            .envy
            .is_zero());
        assert!(BinPackingInput::new(vec![4], 3, 2).is_err());
        assert!(BinPackingInput::new(vec![3, 3, 3], 3, 2).is_err());
    }

    #[test]
    fn binpacking_verification() {
        let no = BinPackingInput::new(vec![2, 2, 2], 3, 2).unwrap();
        let r = verify_binpacking_small(&no, BinFamily::Paths, None, None, DEFAULT_BUDGET).unwrap();
        assert!(r.holds && !r.packable);
        let yes = BinPackingInput::new(vec![3, 3], 3, 2).unwrap();
        let r =
            verify_binpacking_small(&yes, BinFamily::Paths, None, None, DEFAULT_BUDGET).unwrap();
        assert!(r.holds && r.packable);
        let mixed = BinPackingInput::new(vec![2, 1, 3], 3, 2).unwrap();
        for fam in [BinFamily::Paths, BinFamily::Stars, BinFamily::Cliques] {
            let r = verify_binpacking_small(&mixed, fam, None, None, DEFAULT_BUDGET).unwrap();
            assert!(r.holds && r.packable, "{fam:?}");
        }
        let tiny = BinPackingInput::new(vec![1, 1], 2, 1).unwrap();
        assert!(
            verify_binpacking_small(&tiny, BinFamily::Cliques, None, None, DEFAULT_BUDGET)
                .unwrap()
                .holds
        );
    }
}
