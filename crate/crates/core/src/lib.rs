//! Minimum-envy house allocation on social graphs.
//!
//! `n` houses with values shared by all agents are placed on the `n` vertices
//! of an undirected graph; the cost of an allocation is the sum over edges of
//! the absolute value difference across the edge. The crate provides exact
//! solvers for the graph classes where the optimum has a known structure
//! (paths, cycles, stars, complete and complete bipartite graphs, and
//! disjoint unions of paths, cycles, stars and cliques), a brute-force oracle
//! used to check all of them, tools for studying binary and general trees,
//! separability predicates for disconnected graphs, and generators for the
//! hardness constructions.
//!
//! All arithmetic is exact: values and envies are [`Rational`]s.

pub mod allocation;
pub mod connected;
pub mod dispatch;
pub mod envy;
pub mod error;
pub mod experiments;
pub mod generate;
pub mod graph;
pub mod instance;
mod matching;
pub mod oracle;
pub mod profile;
pub mod rational;
pub mod reductions;
pub mod render;
mod scaled;
pub mod separability;
pub mod tree;
pub mod union;

pub use allocation::{Allocation, Guarantee, SolveResult};
pub use envy::{edge_envy, total_envy, total_envy_general};
pub use error::{Error, Result};
pub use graph::{
    classify_component, connected_components, Component, ComponentClass, Graph, RootedTree,
};
pub use profile::{invert_profile, perturb_distinct, ValueMatrix, ValueProfile};
pub use rational::Rational;
