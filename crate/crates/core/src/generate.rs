//! Seeded random instances and named graph families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::allocation::Allocation;
use crate::error::{input, Error, Result};
use crate::graph::{Graph, RootedTree};
use crate::instance::Instance;
use crate::profile::ValueProfile;
use crate::rational::Rational;

/// The generator used everywhere a seed is accepted.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct non-negative rationals `p/q` with `q <= 8` and value below
/// 100, listed in random order.
pub fn random_values<R: Rng>(n: usize, rng: &mut R) -> ValueProfile {
    let mut seen = std::collections::BTreeSet::new();
    let mut values = Vec::with_capacity(n);
    while values.len() < n {
        let q = rng.gen_range(1..=8i64);
        let p = rng.gen_range(0..100 * q);
        let v = Rational::frac(p, q);
        if seen.insert(v.clone()) {
            values.push(v);
        }
    }
    ValueProfile::new(values).expect("non-negative values")
}

/// Integer values drawn with replacement from `0..range`; ties allowed.
pub fn random_int_values<R: Rng>(n: usize, range: i64, rng: &mut R) -> ValueProfile {
    let values: Vec<i64> = (0..n).map(|_| rng.gen_range(0..range.max(1))).collect();
    ValueProfile::from_ints(&values).expect("non-negative values")
}

/// Erdos-Renyi graph: each pair independently with probability `p`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("simple graph")
}

/// Uniform labelled tree via a random Pruefer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    if n <= 2 {
        return Graph::path(n);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &seq {
        let leaf = *leaves.iter().next().expect("a leaf exists");
        leaves.remove(&leaf);
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges).expect("tree")
}

/// Connected graph: a random tree plus each remaining pair with
/// probability `p`.
pub fn random_connected_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let tree = random_tree(n, rng);
    let mut edges = tree.edges().to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("simple graph")
}

/// Random full binary tree on `n` vertices (`n` odd): leaves are expanded
/// uniformly at random. Vertex 0 is the root.
pub fn random_binary_tree<R: Rng>(n: usize, rng: &mut R) -> Result<RootedTree> {
    if n.is_multiple_of(2) {
        return input(format!(
            "a full binary tree has an odd number of vertices, got {n}"
        ));
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut leaves = vec![0usize];
    let mut next = 1;
    while next < n {
        let i = rng.gen_range(0..leaves.len());
        let leaf = leaves.swap_remove(i);
        edges.push((leaf, next));
        edges.push((leaf, next + 1));
        leaves.push(next);
        leaves.push(next + 1);
        next += 2;
    }
    RootedTree::new(Graph::new(n, edges)?, 0)
}

/// Graph on `n >= 2` vertices with at least two components: vertices are
/// shuffled into `2..=min(n, 4)` groups, each a random connected graph.
pub fn random_disconnected_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return input("a disconnected graph needs at least 2 vertices");
    }
    let k = rng.gen_range(2..=n.min(4));
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    let mut start = 0;
    for end in cuts.into_iter().chain(std::iter::once(n)) {
        let part = random_connected_graph(end - start, p, rng);
        edges.extend(
            part.edges()
                .iter()
                .map(|&(u, v)| (perm[start + u], perm[start + v])),
        );
        start = end;
    }
    Graph::new(n, edges)
}

/// The five-agent example of the valuation interval: edges
/// `0-1, 1-2, 2-3, 0-4, 1-4`, values `(1, 2, 4, 5, 6)` and the drawn
/// allocation `[0, 3, 1, 4, 2]`, whose envy is 15.
pub fn fig1_instance() -> (Instance, Allocation) {
    let graph = Graph::new(5, [(0, 1), (1, 2), (2, 3), (0, 4), (1, 4)]).expect("simple graph");
    let profile = ValueProfile::from_ints(&[1, 2, 4, 5, 6]).expect("non-negative values");
    let alloc = Allocation::new(vec![0, 3, 1, 4, 2]).expect("permutation");
    let inst = Instance::identical(graph, profile)
        .expect("sizes agree")
        .with_metadata("figure", "fig1")
        .with_metadata("depicted_allocation", serde_json::json!(alloc.as_slice()));
    (inst, alloc)
}

/// Parses a family description such as `path:5`, `cycle:4`, `star:3`
/// (spokes), `clique:4`, `bipartite:3x2`, `binary:7` (complete binary tree
/// on 7 vertices), `empty:3`, or a union joined with `+`.
pub fn parse_family(spec: &str) -> Result<Graph> {
    let parts: Result<Vec<Graph>> = spec.split('+').map(|p| parse_one(p.trim())).collect();
    let parts = parts?;
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().expect("one part"));
    }
    Ok(Graph::disjoint_union(&parts))
}

fn parse_one(spec: &str) -> Result<Graph> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("family `{spec}` needs the form kind:size")))?;
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Parse(format!("`{s}` is not a vertex count")))
    };
    match kind {
        "path" => Ok(Graph::path(num(arg)?)),
        "cycle" => Graph::cycle(num(arg)?),
        "star" => Ok(Graph::star(num(arg)?)),
        "clique" => Ok(Graph::complete(num(arg)?)),
        "empty" => Ok(Graph::empty(num(arg)?)),
        "bipartite" => {
            let (r, s) = arg.split_once('x').ok_or_else(|| {
                Error::Parse(format!("bipartite sizes `{arg}` need the form RxS"))
            })?;
            Ok(Graph::complete_bipartite(num(r)?, num(s)?))
        }
        "binary" => {
            let n = num(arg)?;
            if !(n + 1).is_power_of_two() {
                return input(format!(
                    "a complete binary tree has 2^k - 1 vertices, got {n}"
                ));
            }
            Ok(RootedTree::complete_binary((n + 1).trailing_zeros())
                .graph()
                .clone())
        }
        other => Err(Error::Parse(format!("unknown family `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_values(6, &mut seeded(3));
        let b = random_values(6, &mut seeded(3));
        assert_eq!(a, b);
        assert!(a.is_strict());
        assert_eq!(
            random_tree(9, &mut seeded(1)),
            random_tree(9, &mut seeded(1))
        );
    }

    #[test]
    fn shapes() {
        let mut rng = seeded(11);
        for n in 1..12 {
            assert!(random_tree(n, &mut rng).is_tree());
            assert!(random_connected_graph(n, 0.3, &mut rng).is_connected());
        }
        for n in [1, 3, 5, 7, 9] {
            let t = random_binary_tree(n, &mut rng).unwrap();
            assert!(crate::graph::validate_binary_tree(&t));
        }
        assert!(random_binary_tree(4, &mut rng).is_err());
        for n in 2..9 {
            assert!(!random_disconnected_graph(n, 0.5, &mut rng)
                .unwrap()
                .is_connected());
        }
    }

    #[test]
    fn fig1_envy_is_15() {
        let (inst, alloc) = fig1_instance();
        let envy = crate::envy::total_envy(&alloc, &inst.graph, inst.profile().unwrap()).unwrap();
        assert_eq!(envy, Rational::from_integer(15));
    }

    #[test]
    fn families() {
        assert_eq!(parse_family("path:5").unwrap(), Graph::path(5));
        let g = parse_family("path:2 + clique:3").unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(parse_family("bipartite:3x2").unwrap().edge_count(), 6);
        assert_eq!(parse_family("binary:7").unwrap().edge_count(), 6);
        assert!(parse_family("cycle:2").is_err());
        assert!(parse_family("wheel:5").is_err());
        assert!(parse_family("binary:6").is_err());
    }
}
