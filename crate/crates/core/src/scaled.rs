//! Integer images of a profile for the hot loops.
//!
//! Every value is multiplied by the least common denominator so inner loops
//! run on integers. When the scaled magnitudes leave enough headroom they are
//! stored as `i128`, otherwise as `BigInt`; algorithms are written once,
//! generic over [`Cost`], and results are divided back into [`Rational`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::profile::ValueProfile;
use crate::rational::Rational;

pub(crate) trait Cost: Clone + Ord + Debug + Send + Sync + Zero + 'static {
    fn from_i64(v: i64) -> Self;
    fn to_bigint(&self) -> BigInt;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.minus(other)
        } else {
            other.minus(self)
        }
    }

    fn times_i64(&self, k: i64) -> Self {
        self.times(&Self::from_i64(k))
    }
}

impl Cost for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl Cost for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

/// Work parameterised over the integer representation.
pub(crate) trait ScaledTask {
    type Output;
    /// `values` are in ascending rank order, each multiplied by `scale.denom`.
    fn run<T: Cost>(self, values: &[T], scale: &Scale) -> Self::Output;
}

#[derive(Clone, Debug)]
pub(crate) struct Scale {
    pub denom: BigInt,
}

impl Scale {
    pub fn unscale<T: Cost>(&self, x: &T) -> Rational {
        Rational::new(x.to_bigint(), self.denom.clone()).expect("positive denominator")
    }
}

/// Runs `task` on the integer image of `profile`.
///
/// `growth` bounds how many values may be summed or multiplied by an index
/// in the task (e.g. `n^3`); it picks the representation.
pub(crate) fn with_scaled<R, K: ScaledTask<Output = R>>(
    profile: &ValueProfile,
    growth: u128,
    task: K,
) -> R {
    let values = profile.sorted_values();
    let mut denom = BigInt::one();
    for v in values {
        denom = denom.lcm(v.denom());
    }
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&denom / v.denom()))
        .collect();
    let scale = Scale { denom };
    let max_bits = ints.iter().map(|x| x.abs().bits()).max().unwrap_or(0);
    let growth_bits = 128 - growth.max(1).leading_zeros() as u64;
    if max_bits + growth_bits + 2 < 126 {
        let small: Vec<i128> = ints.iter().map(|x| x.to_i128().expect("fits")).collect();
        task.run(&small, &scale)
    } else {
        task.run(&ints, &scale)
    }
}

/// `n^3` with saturation, the default growth bound.
pub(crate) fn cubic_growth(n: usize) -> u128 {
    (n as u128)
        .saturating_mul(n as u128)
        .saturating_mul(n as u128)
        .max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct SumTask;
    impl ScaledTask for SumTask {
        type Output = Rational;
        fn run<T: Cost>(self, values: &[T], scale: &Scale) -> Rational {
            let total = values.iter().fold(T::zero(), |acc, x| acc.plus(x));
            scale.unscale(&total)
        }
    }

    #[test]
    fn scaling_round_trips() {
        let p = ValueProfile::new(vec![
            Rational::frac(1, 2),
            Rational::frac(1, 3),
            Rational::frac(5, 6),
        ])
        .unwrap();
        assert_eq!(with_scaled(&p, 8, SumTask), Rational::frac(5, 3));
    }

    #[test]
    fn huge_values_use_bigint() {
        let big = Rational::new(BigInt::one() << 130usize, 7).unwrap();
        let p = ValueProfile::new(vec![big.clone(), Rational::frac(1, 3)]).unwrap();
        assert_eq!(with_scaled(&p, 8, SumTask), big + Rational::frac(1, 3));
    }
}
