//! Closed-form solvers for connected graph classes.
//!
//! Each solver returns an allocation on the class's canonical labelling (see
//! the constructors on [`Graph`]): vertex `i` of `P_n` and `C_n` is the
//! `i`-th vertex along the path or cycle, the star center is vertex 0, and
//! `K_{r,s}` has its larger side on `0..r`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::allocation::{Allocation, Guarantee, SolveResult};
use crate::envy::total_envy;
use crate::error::{input, Error, Result};
use crate::graph::{classify_component, layout, ComponentClass, Graph, Layout};
use crate::matching::min_cost_assignment;
use crate::profile::{ValueMatrix, ValueProfile};
use crate::rational::Rational;
use crate::scaled::Cost;

fn exact(allocation: Allocation, envy: Rational, solver: &str) -> SolveResult {
    SolveResult {
        allocation,
        envy,
        solver: solver.to_string(),
        guarantee: Guarantee::Exact,
    }
}

fn check_len(profile: &ValueProfile, n: usize, what: &str) -> Result<()> {
    if profile.len() != n {
        return input(format!("{what} needs {n} values, got {}", profile.len()));
    }
    Ok(())
}

/// Spread of the profile, `v(h_n) - v(h_1)`.
fn spread(profile: &ValueProfile) -> Rational {
    match (profile.min(), profile.max()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => Rational::zero(),
    }
}

fn by_rank(profile: &ValueProfile, ranks: impl IntoIterator<Item = usize>) -> Allocation {
    Allocation::from_vec_unchecked(ranks.into_iter().map(|r| profile.house_at(r)).collect())
}

/// Houses in sorted order along the path.
pub fn solve_path(n: usize, profile: &ValueProfile) -> Result<SolveResult> {
    check_len(profile, n, "P_n")?;
    Ok(exact(by_rank(profile, 0..n), spread(profile), "path"))
}

/// Houses ascending all the way around the cycle. Any optimum has envy
/// `2 (v(h_n) - v(h_1))`.
pub fn solve_cycle(n: usize, profile: &ValueProfile) -> Result<SolveResult> {
    if n < 3 {
        return input(format!("a cycle needs at least 3 vertices, got {n}"));
    }
    check_len(profile, n, "C_n")?;
    let envy = &spread(profile) + &spread(profile);
    Ok(exact(by_rank(profile, 0..n), envy, "cycle"))
}

/// Rank of the house a star with `spokes` spokes puts at its center: the
/// median, or the lower median when there are two.
pub fn star_center_rank(spokes: usize) -> usize {
    spokes / 2
}

/// Median at the center, remaining houses on the spokes by ascending id.
pub fn solve_star(spokes: usize, profile: &ValueProfile) -> Result<SolveResult> {
    check_len(profile, spokes + 1, "K_1,n")?;
    let center_rank = star_center_rank(spokes);
    let center = profile.house_at(center_rank);
    let mut assignment = vec![center];
    assignment.extend((0..=spokes).filter(|&h| h != center));
    let c = profile.at_rank(center_rank);
    let envy = profile.sorted_values().iter().map(|v| v.abs_diff(c)).sum();
    Ok(exact(
        Allocation::from_vec_unchecked(assignment),
        envy,
        "star",
    ))
}

/// Which side (`true` = larger) each rank goes to in the optimal structure
/// for `K_{r,s}`, `r >= s`: the `m` lowest and the top `m` (`m + 1` when
/// `r - s` is odd) houses go to the larger side and the rest alternate in
/// consecutive pairs, lower house to the larger side.
pub fn bipartite_sides(r: usize, s: usize) -> Vec<bool> {
    let n = r + s;
    let d = r - s;
    let m = d / 2;
    let top = d - m;
    (0..n)
        .map(|k| k < m || k >= n - top || (k - m).is_multiple_of(2))
        .collect()
}

/// Places houses on `K_{r,s}` following [`bipartite_sides`].
pub fn solve_complete_bipartite(r: usize, s: usize, profile: &ValueProfile) -> Result<SolveResult> {
    if r < s || s == 0 {
        return input(format!(
            "K_r,s solver needs r >= s >= 1, got r = {r}, s = {s}"
        ));
    }
    check_len(profile, r + s, "K_r,s")?;
    let sides = bipartite_sides(r, s);
    let mut assignment = Vec::with_capacity(r + s);
    assignment.extend(
        (0..r + s)
            .filter(|&k| sides[k])
            .map(|k| profile.house_at(k)),
    );
    assignment.extend(
        (0..r + s)
            .filter(|&k| !sides[k])
            .map(|k| profile.house_at(k)),
    );
    let envy = bipartite_envy(profile, &sides);
    Ok(exact(
        Allocation::from_vec_unchecked(assignment),
        envy,
        "complete_bipartite",
    ))
}

/// `sum_{x in L, y in R} |x - y|` where `sides[rank]` marks membership of L,
/// in one sweep over the sorted values.
pub fn bipartite_envy(profile: &ValueProfile, sides: &[bool]) -> Rational {
    let values = profile.sorted_values();
    let mut total = Rational::zero();
    // running (count, sum) of each side below the current value
    let mut below = [(0i64, Rational::zero()), (0i64, Rational::zero())];
    for (k, v) in values.iter().enumerate() {
        let other = if sides[k] { 1 } else { 0 };
        let (cnt, sum) = &below[other];
        total += &(v * &Rational::from_integer(*cnt)) - sum;
        let mine = &mut below[1 - other];
        mine.0 += 1;
        mine.1 += v;
    }
    total
}

/// Checks the pairing structure of optimal `K_{r,s}` allocations (`r >= s`)
/// on the canonical labelling: the `m` outer houses at each end lie on the
/// larger side, and each consecutive pair after them is split (odd `r - s`:
/// lower house on the larger side).
pub fn satisfies_bipartite_pairing(
    alloc: &Allocation,
    r: usize,
    s: usize,
    profile: &ValueProfile,
) -> bool {
    if alloc.len() != r + s || profile.len() != r + s || r < s {
        return false;
    }
    let n = r + s;
    let mut on_larger = vec![false; n];
    for v in 0..r {
        on_larger[profile.rank_of(alloc.house(v))] = true;
    }
    let d = r - s;
    let m = d / 2;
    let top = d - m;
    if !(0..m).chain(n - top..n).all(|k| on_larger[k]) {
        return false;
    }
    (0..s).all(|i| {
        let (a, b) = (m + 2 * i, m + 2 * i + 1);
        if d % 2 == 1 {
            on_larger[a] && !on_larger[b]
        } else {
            on_larger[a] != on_larger[b]
        }
    })
}

/// Every allocation with the pairing structure, up to permutations within
/// a side (`2^s` of them for even `r - s`, one for odd).
pub fn bipartite_witnesses(r: usize, s: usize, profile: &ValueProfile) -> Result<Vec<Allocation>> {
    if r < s || s == 0 || s > 20 {
        return input(format!(
            "witness enumeration needs r >= s >= 1 and s <= 20, got ({r}, {s})"
        ));
    }
    check_len(profile, r + s, "K_r,s")?;
    let base = bipartite_sides(r, s);
    let m = (r - s) / 2;
    let flips = if (r - s).is_multiple_of(2) {
        1usize << s
    } else {
        1
    };
    let mut out = Vec::with_capacity(flips);
    for mask in 0..flips {
        let mut sides = base.clone();
        for i in 0..s {
            if mask >> i & 1 == 1 {
                sides.swap(m + 2 * i, m + 2 * i + 1);
            }
        }
        let mut assignment: Vec<usize> = (0..r + s)
            .filter(|&k| sides[k])
            .map(|k| profile.house_at(k))
            .collect();
        assignment.extend(
            (0..r + s)
                .filter(|&k| !sides[k])
                .map(|k| profile.house_at(k)),
        );
        out.push(Allocation::from_vec_unchecked(assignment));
    }
    Ok(out)
}

/// Number of optimal `K_{r,s}` allocations up to permutations within a side.
pub fn count_optima_bipartite(r: usize, s: usize) -> Result<BigInt> {
    if r < s || s == 0 {
        return input(format!("needs r >= s >= 1, got r = {r}, s = {s}"));
    }
    Ok(if (r - s).is_even() {
        BigInt::one() << s
    } else {
        BigInt::one()
    })
}

/// `sum_{i<j} (v(h_j) - v(h_i)) = sum_k (2k - n - 1) v(h_k)` for sorted values.
pub fn clique_envy(sorted: &[Rational]) -> Rational {
    let n = sorted.len() as i64;
    sorted
        .iter()
        .enumerate()
        .map(|(k, v)| v * &Rational::from_integer(2 * (k as i64 + 1) - n - 1))
        .sum()
}

/// Every allocation on `K_n` has the same envy; returns the sorted one.
pub fn solve_clique(n: usize, profile: &ValueProfile) -> Result<SolveResult> {
    check_len(profile, n, "K_n")?;
    Ok(exact(
        by_rank(profile, 0..n),
        clique_envy(profile.sorted_values()),
        "clique",
    ))
}

/// `K_n` under per-agent valuations, via a minimum-weight perfect matching
/// between agents and houses where agent `i` taking house `h` costs
/// `sum_{h' != h} max(v_i(h') - v_i(h), 0)`.
pub fn solve_complete_general(matrix: &ValueMatrix) -> Result<SolveResult> {
    let n = matrix.len();
    let mut weights = vec![vec![Rational::zero(); n]; n];
    for (i, row) in matrix.rows().iter().enumerate() {
        for h in 0..n {
            let own = &row[h];
            weights[i][h] = row.iter().filter(|x| *x > own).map(|x| x - own).sum();
        }
    }
    let mut denom = BigInt::one();
    for w in weights.iter().flatten() {
        denom = denom.lcm(w.denom());
    }
    let ints: Vec<Vec<BigInt>> = weights
        .iter()
        .map(|row| {
            row.iter()
                .map(|w| w.numer() * (&denom / w.denom()))
                .collect()
        })
        .collect();
    let max_bits = ints.iter().flatten().map(|x| x.bits()).max().unwrap_or(0);
    let growth_bits = 64 - (n as u64 + 1).leading_zeros() as u64;
    let assignment = if max_bits + growth_bits + 2 < 126 {
        let small: Vec<Vec<i128>> = ints
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128().expect("fits")).collect())
            .collect();
        min_cost_assignment(&small)
    } else {
        min_cost_assignment(&ints)
    };
    let total: BigInt = (0..n).map(|i| ints[i][assignment[i]].to_bigint()).sum();
    let envy = Rational::new(total, denom)?;
    Ok(exact(
        Allocation::new(assignment)?,
        envy,
        "complete_general",
    ))
}

/// Canonical graph for each connected solver, for evaluating results.
pub fn canonical_graph(class: ComponentClass) -> Result<Graph> {
    use ComponentClass::*;
    Ok(match class {
        Path(n) => Graph::path(n),
        Cycle(n) => Graph::cycle(n)?,
        Star(s) => Graph::star(s),
        Clique(n) => Graph::complete(n),
        CompleteBipartite(r, s) => Graph::complete_bipartite(r, s),
        BinaryTree | Generic => return input("no canonical graph for this class"),
    })
}

/// Solves one component on the houses of the given ranks (ascending) and
/// returns the house of each local vertex.
///
/// Only classes with a closed form are accepted.
pub fn place_block(
    graph: &Graph,
    class: ComponentClass,
    ranks: &[usize],
    profile: &ValueProfile,
) -> Result<Vec<usize>> {
    if graph.vertex_count() != ranks.len() {
        return input("block size does not match the component");
    }
    let sub = profile.restrict_to_ranks(ranks);
    let canonical = match class {
        ComponentClass::Path(n) => solve_path(n, &sub)?,
        ComponentClass::Cycle(n) => solve_cycle(n, &sub)?,
        ComponentClass::Star(s) => solve_star(s, &sub)?,
        ComponentClass::Clique(n) => solve_clique(n, &sub)?,
        ComponentClass::CompleteBipartite(r, s) => solve_complete_bipartite(r, s, &sub)?,
        other => {
            return Err(Error::Dispatch(format!(
                "no closed form for component class {}",
                other.name()
            )))
        }
    };
    let order: Vec<usize> = match layout(graph, class) {
        Layout::Sequence(seq) => seq,
        Layout::Star { center, spokes } => std::iter::once(center).chain(spokes).collect(),
        Layout::Sides { larger, smaller } => larger.into_iter().chain(smaller).collect(),
        Layout::Any => (0..ranks.len()).collect(),
        Layout::None => {
            return Err(Error::Dispatch(format!(
                "no closed form for component class {}",
                class.name()
            )))
        }
    };
    let mut out = vec![0; ranks.len()];
    for (canon_vertex, &local) in order.iter().enumerate() {
        out[local] = profile.house_at(ranks[canonical.allocation.house(canon_vertex)]);
    }
    Ok(out)
}

/// Solves a connected graph of a closed-form class in its own labelling.
pub fn solve_connected(graph: &Graph, profile: &ValueProfile) -> Result<SolveResult> {
    if !graph.is_connected() {
        return input("graph is not connected");
    }
    let class = classify_component(graph);
    let ranks: Vec<usize> = (0..profile.len()).collect();
    let assignment = place_block(graph, class, &ranks, profile)?;
    let allocation = Allocation::new(assignment)?;
    let envy = total_envy(&allocation, graph, profile)?;
    let solver = match class {
        ComponentClass::Path(_) => "path",
        ComponentClass::Cycle(_) => "cycle",
        ComponentClass::Star(_) => "star",
        ComponentClass::Clique(_) => "clique",
        _ => "complete_bipartite",
    };
    Ok(exact(allocation, envy, solver))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envy::total_envy_general;
    use crate::oracle::{brute_force, enumerate_optima, DEFAULT_BUDGET};

    fn ints(v: &[i64]) -> ValueProfile {
        ValueProfile::from_ints(v).unwrap()
    }

    fn consistent(res: &SolveResult, g: &Graph, p: &ValueProfile) {
        assert_eq!(total_envy(&res.allocation, g, p).unwrap(), res.envy);
    }

    #[test]
    fn path_examples() {
        let p = ints(&[1, 2, 4, 5, 6]);
        let r = solve_path(5, &p).unwrap();
        assert_eq!(r.envy, Rational::from_integer(5));
        consistent(&r, &Graph::path(5), &p);
        assert!(solve_path(1, &ints(&[3])).unwrap().envy.is_zero());
        let q = ints(&[100, 0, 10]);
        let r = solve_path(3, &q).unwrap();
        assert_eq!(r.envy, Rational::from_integer(100));
        assert_eq!(r.allocation.as_slice(), &[1, 2, 0]);
    }

    #[test]
    fn cycle_examples() {
        let p = ints(&[1, 2, 4, 5, 6]);
        let r = solve_cycle(5, &p).unwrap();
        assert_eq!(r.envy, Rational::from_integer(10));
        consistent(&r, &Graph::cycle(5).unwrap(), &p);
        assert_eq!(
            solve_cycle(3, &ints(&[0, 3, 7])).unwrap().envy,
            Rational::from_integer(14)
        );
        assert!(solve_cycle(2, &ints(&[0, 1])).is_err());
        // a second witness on C_4
        let q = ints(&[1, 2, 3, 4]);
        let c4 = Graph::cycle(4).unwrap();
        let alt = Allocation::new(vec![0, 1, 3, 2]).unwrap();
        assert_eq!(
            total_envy(&alt, &c4, &q).unwrap(),
            Rational::from_integer(6)
        );
        assert_eq!(
            brute_force(&c4, &q, DEFAULT_BUDGET).unwrap().envy,
            Rational::from_integer(6)
        );
    }

    #[test]
    fn star_examples() {
        let p = ints(&[1, 2, 4, 5, 6]);
        let r = solve_star(4, &p).unwrap();
        assert_eq!(p.value(r.allocation.house(0)), &Rational::from_integer(4));
        assert_eq!(r.envy, Rational::from_integer(8));
        consistent(&r, &Graph::star(4), &p);
        let k11 = solve_star(1, &ints(&[3, 10])).unwrap();
        assert_eq!(k11.envy, Rational::from_integer(7));
    }

    #[test]
    fn star_median_tie() {
        let p = ints(&[1, 2, 3, 10]);
        let g = Graph::star(3);
        let lower = solve_star(3, &p).unwrap();
        assert_eq!(
            p.value(lower.allocation.house(0)),
            &Rational::from_integer(2)
        );
        assert_eq!(lower.envy, Rational::from_integer(10));
        let upper = Allocation::new(vec![2, 0, 1, 3]).unwrap();
        assert_eq!(
            total_envy(&upper, &g, &p).unwrap(),
            Rational::from_integer(10)
        );
        assert_eq!(
            brute_force(&g, &p, DEFAULT_BUDGET).unwrap().envy,
            Rational::from_integer(10)
        );
    }

    #[test]
    fn bipartite_examples() {
        let p = ints(&[1, 2, 3, 4, 5, 6]);
        let g = Graph::complete_bipartite(3, 3);
        let r = solve_complete_bipartite(3, 3, &p).unwrap();
        assert_eq!(r.envy, Rational::from_integer(19));
        consistent(&r, &g, &p);
        assert_eq!(
            brute_force(&g, &p, DEFAULT_BUDGET).unwrap().envy,
            Rational::from_integer(19)
        );
        let sides = Allocation::new(vec![0, 2, 4, 1, 3, 5]).unwrap();
        assert_eq!(
            total_envy(&sides, &g, &p).unwrap(),
            Rational::from_integer(19)
        );

        assert_eq!(
            solve_complete_bipartite(1, 1, &ints(&[4, 9])).unwrap().envy,
            Rational::from_integer(5)
        );
        assert!(solve_complete_bipartite(1, 3, &ints(&[1, 2, 3, 4])).is_err());
    }

    #[test]
    fn bipartite_generalizes_star() {
        let p = ints(&[1, 2, 3, 10]);
        assert_eq!(bipartite_sides(3, 1), vec![true, true, false, true]);
        let k31 = solve_complete_bipartite(3, 1, &p).unwrap();
        let star = solve_star(3, &p).unwrap();
        assert_eq!(k31.envy, star.envy);
    }

    #[test]
    fn bipartite_counts() {
        assert_eq!(count_optima_bipartite(3, 3).unwrap(), BigInt::from(8));
        assert_eq!(count_optima_bipartite(4, 3).unwrap(), BigInt::from(1));
        assert_eq!(count_optima_bipartite(2, 2).unwrap(), BigInt::from(4));
        assert!(count_optima_bipartite(2, 3).is_err());
    }

    #[test]
    fn witnesses_all_share_the_optimum() {
        for (r, s) in [(2, 2), (3, 1), (4, 2), (3, 2), (5, 1), (4, 4)] {
            let p = ValueProfile::from_ints(
                &(0..(r + s) as i64).map(|k| k * k + 1).collect::<Vec<_>>(),
            )
            .unwrap();
            let g = Graph::complete_bipartite(r, s);
            let opt = brute_force(&g, &p, DEFAULT_BUDGET).unwrap().envy;
            let ws = bipartite_witnesses(r, s, &p).unwrap();
            assert_eq!(
                ws.len() as u64,
                count_optima_bipartite(r, s).unwrap().to_u64().unwrap()
            );
            for w in ws {
                assert!(satisfies_bipartite_pairing(&w, r, s, &p));
                assert_eq!(total_envy(&w, &g, &p).unwrap(), opt);
            }
        }
    }

    #[test]
    fn clique_examples() {
        let p = ints(&[49, 50, 51]);
        assert_eq!(solve_clique(3, &p).unwrap().envy, Rational::from_integer(4));
        assert!(solve_clique(1, &ints(&[9])).unwrap().envy.is_zero());
        let q = ints(&[4, 5, 6]);
        let set = enumerate_optima(&Graph::complete(3), &q, DEFAULT_BUDGET).unwrap();
        assert_eq!(set.count, 6);
    }

    #[test]
    fn complete_general_examples() {
        let p = ints(&[3, 1, 4, 1]);
        let same = ValueMatrix::identical(&p);
        let r = solve_complete_general(&same).unwrap();
        assert_eq!(r.envy, solve_clique(4, &p).unwrap().envy);

        let m = ValueMatrix::from_ints(&[&[5, 0], &[0, 5]]).unwrap();
        let r = solve_complete_general(&m).unwrap();
        assert!(r.envy.is_zero());
        assert_eq!(r.allocation.as_slice(), &[0, 1]);
        assert_eq!(
            total_envy_general(&r.allocation, &Graph::complete(2), &m).unwrap(),
            r.envy
        );
    }

    #[test]
    fn relabelled_classes_solve_in_place() {
        let p = ints(&[9, 1, 5, 3, 7, 2]);
        let perm = [3, 0, 5, 1, 4, 2];
        for g in [
            Graph::path(6),
            Graph::cycle(6).unwrap(),
            Graph::star(5),
            Graph::complete(6),
            Graph::complete_bipartite(4, 2),
            Graph::complete_bipartite(3, 3),
        ] {
            let h = g.relabel(&perm).unwrap();
            let r = solve_connected(&h, &p).unwrap();
            consistent(&r, &h, &p);
            assert_eq!(r.envy, brute_force(&h, &p, DEFAULT_BUDGET).unwrap().envy);
        }
    }
}
