//! House values under identical and non-identical valuations.
//!
//! A house is identified by its position in the input value list. A
//! [`ValueProfile`] additionally records the ascending order of the houses
//! (their *ranks*); equal values are ordered by house id, which acts as a
//! symbolic tie-break so that every algorithm can treat the profile as
//! strictly increasing.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueProfile {
    /// Values in ascending rank order.
    values: Vec<Rational>,
    /// `original_index[rank]` is the house id holding that rank.
    original_index: Vec<usize>,
    /// Inverse of `original_index`.
    rank: Vec<usize>,
}

impl ValueProfile {
    /// Builds a profile from values listed by house id. Ties are broken by id.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return input(format!("house values must be non-negative, got {v}"));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
        Ok(Self::from_parts(values, order))
    }

    /// Convenience constructor for integer literals.
    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    fn from_parts(by_house: Vec<Rational>, order: Vec<usize>) -> Self {
        let mut rank = vec![0; order.len()];
        for (r, &h) in order.iter().enumerate() {
            rank[h] = r;
        }
        let mut by_house = by_house.into_iter().map(Some).collect::<Vec<_>>();
        let values = order
            .iter()
            .map(|&h| by_house[h].take().expect("permutation"))
            .collect();
        ValueProfile {
            values,
            original_index: order,
            rank,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values sorted ascending (`v(h_1) <= ... <= v(h_n)`).
    pub fn sorted_values(&self) -> &[Rational] {
        &self.values
    }

    /// Value at a given rank.
    pub fn at_rank(&self, rank: usize) -> &Rational {
        &self.values[rank]
    }

    /// Value of a house by id.
    pub fn value(&self, house: usize) -> &Rational {
        &self.values[self.rank[house]]
    }

    pub fn rank_of(&self, house: usize) -> usize {
        self.rank[house]
    }

    pub fn house_at(&self, rank: usize) -> usize {
        self.original_index[rank]
    }

    pub fn original_index(&self) -> &[usize] {
        &self.original_index
    }

    /// Values listed by house id, i.e. the input order.
    pub fn values_by_house(&self) -> Vec<Rational> {
        (0..self.len()).map(|h| self.value(h).clone()).collect()
    }

    /// True when no two houses share a value.
    pub fn is_strict(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn min(&self) -> Option<&Rational> {
        self.values.first()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.values.last()
    }

    /// Sub-profile on the houses with the given ranks (ascending). House `j`
    /// of the result is the `j`-th listed rank.
    pub fn restrict_to_ranks(&self, ranks: &[usize]) -> ValueProfile {
        debug_assert!(ranks.windows(2).all(|w| w[0] < w[1]));
        let values: Vec<Rational> = ranks.iter().map(|&r| self.values[r].clone()).collect();
        let order = (0..values.len()).collect();
        Self::from_parts(values, order)
    }

    /// Adds `c` to every value, keeping house ids and ranks.
    pub fn shifted(&self, c: &Rational) -> Result<ValueProfile> {
        let values: Vec<Rational> = self.values.iter().map(|v| v + c).collect();
        if values.iter().any(|v| v.is_negative()) {
            return input("shift would make a value negative");
        }
        Ok(ValueProfile {
            values,
            original_index: self.original_index.clone(),
            rank: self.rank.clone(),
        })
    }
}

/// Mirrors the profile through `x -> max - x`.
///
/// House ids are kept, so any allocation has the same envy on every edge
/// under the result. Ranks reverse: the old top house becomes rank 0.
pub fn invert_profile(profile: &ValueProfile) -> ValueProfile {
    let Some(max) = profile.max().cloned() else {
        return profile.clone();
    };
    let values = profile.values.iter().rev().map(|v| &max - v).collect();
    let original_index: Vec<usize> = profile.original_index.iter().rev().copied().collect();
    let mut rank = vec![0; original_index.len()];
    for (r, &h) in original_index.iter().enumerate() {
        rank[h] = r;
    }
    ValueProfile {
        values,
        original_index,
        rank,
    }
}

/// Numerically separates tied values.
///
/// The house of rank `k` (1-based) receives `epsilon / (n^2 2^k)` on top of its
/// value, and the result is re-sorted. For every graph and allocation the
/// total envy moves by less than `epsilon`. Fails if two perturbed values
/// collide, which can only happen when `epsilon` exceeds the gaps it is meant
/// to sit below.
pub fn perturb_distinct(profile: &ValueProfile, epsilon: &Rational) -> Result<ValueProfile> {
    if epsilon.is_negative() || epsilon.is_zero() {
        return input("epsilon must be positive");
    }
    let n = profile.len();
    let n2 = Rational::from_integer((n * n) as i64);
    let mut by_house = vec![Rational::zero(); n];
    for rank in 0..n {
        let bump = &(epsilon / &n2) * &Rational::pow2_recip(rank as u32 + 1);
        by_house[profile.house_at(rank)] = profile.at_rank(rank) + &bump;
    }
    let out = ValueProfile::new(by_house)?;
    if !out.is_strict() {
        return input("perturbation produced a collision; choose a smaller epsilon");
    }
    Ok(out)
}

/// Per-agent valuations `entries[agent][house]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueMatrix {
    entries: Vec<Vec<Rational>>,
}

impl ValueMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return input(format!(
                    "value matrix row {i} has {} entries, expected {n}",
                    row.len()
                ));
            }
            if row.iter().any(|v| v.is_negative()) {
                return input(format!("value matrix row {i} has a negative entry"));
            }
        }
        Ok(ValueMatrix { entries })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
        )
    }

    /// Every agent valuing houses according to `profile`.
    pub fn identical(profile: &ValueProfile) -> Self {
        let row = profile.values_by_house();
        ValueMatrix {
            entries: vec![row; profile.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, agent: usize, house: usize) -> &Rational {
        &self.entries[agent][house]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }
}
