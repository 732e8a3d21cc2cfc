//! Envy along edges and in total.

use crate::allocation::Allocation;
use crate::error::{input, Result};
use crate::graph::Graph;
use crate::profile::{ValueMatrix, ValueProfile};
use crate::rational::Rational;

fn check_sizes(alloc: &Allocation, n: usize) -> Result<()> {
    if alloc.len() != n {
        return input(format!(
            "allocation covers {} agents, instance has {n}",
            alloc.len()
        ));
    }
    Ok(())
}

/// `|v(pi(u)) - v(pi(v))|` for one edge.
pub fn edge_envy(
    alloc: &Allocation,
    edge: (usize, usize),
    profile: &ValueProfile,
) -> Result<Rational> {
    check_sizes(alloc, profile.len())?;
    let (u, v) = edge;
    let n = alloc.len();
    if u >= n || v >= n {
        return input(format!("edge ({u}, {v}) out of range for {n} vertices"));
    }
    Ok(profile
        .value(alloc.house(u))
        .abs_diff(profile.value(alloc.house(v))))
}

/// Sum of edge envies under identical valuations.
pub fn total_envy(alloc: &Allocation, graph: &Graph, profile: &ValueProfile) -> Result<Rational> {
    if graph.vertex_count() != profile.len() {
        return input(format!(
            "graph has {} vertices but the profile has {} values",
            graph.vertex_count(),
            profile.len()
        ));
    }
    check_sizes(alloc, profile.len())?;
    let mut total = Rational::zero();
    for &(u, v) in graph.edges() {
        total += profile
            .value(alloc.house(u))
            .abs_diff(profile.value(alloc.house(v)));
    }
    Ok(total)
}

/// Total envy under per-agent valuations: for every edge `(i, j)`,
/// `max(v_i(pi(j)) - v_i(pi(i)), 0) + max(v_j(pi(i)) - v_j(pi(j)), 0)`.
pub fn total_envy_general(
    alloc: &Allocation,
    graph: &Graph,
    matrix: &ValueMatrix,
) -> Result<Rational> {
    if graph.vertex_count() != matrix.len() {
        return input(format!(
            "graph has {} vertices but the value matrix is {}x{}",
            graph.vertex_count(),
            matrix.len(),
            matrix.len()
        ));
    }
    check_sizes(alloc, matrix.len())?;
    let one_way = |i: usize, j: usize| {
        let own = matrix.get(i, alloc.house(i));
        let other = matrix.get(i, alloc.house(j));
        if other > own {
            other - own
        } else {
            Rational::zero()
        }
    };
    let mut total = Rational::zero();
    for &(i, j) in graph.edges() {
        total += one_way(i, j);
        total += one_way(j, i);
    }
    Ok(total)
}
