use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::rational::Rational;

/// A bijection from agents (graph vertices) to houses.
///
/// `assignment[v]` is the id of the house given to vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Allocation {
    assignment: Vec<usize>,
}

impl Allocation {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let n = assignment.len();
        let mut seen = vec![false; n];
        for &h in &assignment {
            if h >= n {
                return input(format!("house {h} out of range for {n} agents"));
            }
            if std::mem::replace(&mut seen[h], true) {
                return input(format!("house {h} assigned twice"));
            }
        }
        Ok(Allocation { assignment })
    }

    pub fn identity(n: usize) -> Self {
        Allocation {
            assignment: (0..n).collect(),
        }
    }

    pub(crate) fn from_vec_unchecked(assignment: Vec<usize>) -> Self {
        debug_assert!(Allocation::new(assignment.clone()).is_ok());
        Allocation { assignment }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn house(&self, vertex: usize) -> usize {
        self.assignment[vertex]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.assignment
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.assignment
    }

    /// `owner[h]` is the vertex holding house `h`.
    pub fn owners(&self) -> Vec<usize> {
        let mut owner = vec![0; self.len()];
        for (v, &h) in self.assignment.iter().enumerate() {
            owner[h] = v;
        }
        owner
    }

    pub fn swap_vertices(&mut self, a: usize, b: usize) {
        self.assignment.swap(a, b);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub allocation: Allocation,
    pub envy: Rational,
    pub solver: String,
    pub guarantee: Guarantee,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_permutations() {
        assert!(Allocation::new(vec![0, 0]).is_err());
        assert!(Allocation::new(vec![0, 2]).is_err());
        assert!(Allocation::new(vec![1, 0]).is_ok());
    }

    #[test]
    fn owners_inverts() {
        let a = Allocation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(a.owners(), vec![1, 2, 0]);
    }
}
