//! Exact evaluation of the counting recursions.
//!
//! All three share one shape: split on the spot `i + 1` taken by the last
//! car, choose which `i` earlier cars fill the spots to its left, let the
//! remaining `n - i - 1` cars form a classic parking function on the right
//! (`(n - i)^(n - i - 2)` ways), and weight by the preferences that send the
//! last car to `i + 1`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{ParkError, Result};

/// `m^(m-2)`, the number of ways `m - 1` cars fill `m - 1` spots as a
/// parking function. At `m = 1` the exponent is `-1`; the factor is 1.
fn right_block_weight(m: usize) -> BigUint {
    match m {
        0 => unreachable!("right block always has at least the last car's spot"),
        1 => BigUint::one(),
        _ => BigUint::from(m).pow((m - 2) as u32),
    }
}

/// Row `m` of Pascal's triangle.
fn binomial_row(m: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(m + 1);
    let mut c = BigUint::one();
    for i in 0..=m {
        row.push(c.clone());
        c = c * BigUint::from(m - i) / BigUint::from(i + 1);
    }
    row
}

fn check_probability(p: &BigRational) -> Result<()> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(ParkError::ProbabilityOutOfRange(p.to_string()));
    }
    Ok(())
}

/// Memo tables for `P(n)`, `N_k(n)` and `T_{k,p}(n)` at fixed `(k, p)`.
///
/// Index 0 holds the base case 1. Tables only grow.
#[derive(Clone, Debug)]
pub struct RecursionCache {
    k: u32,
    p: BigRational,
    parking: Vec<BigUint>,
    naples: Vec<BigUint>,
    expected: Vec<BigRational>,
}

impl RecursionCache {
    pub fn new(k: u32, p: BigRational) -> Result<Self> {
        check_probability(&p)?;
        Ok(Self {
            k,
            p,
            parking: vec![BigUint::one()],
            naples: vec![BigUint::one()],
            expected: vec![BigRational::one()],
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    /// Largest `n` currently stored.
    pub fn filled_to(&self) -> usize {
        self.parking.len() - 1
    }

    /// Extends every table through `n_max`.
    pub fn fill(&mut self, n_max: usize) {
        for n in self.parking.len()..=n_max {
            let binom = binomial_row(n - 1);
            let mut parking = BigUint::zero();
            let mut naples = BigUint::zero();
            let mut expected = BigRational::zero();
            for (i, c) in binom.iter().enumerate() {
                let shared = c * right_block_weight(n - i);
                let reach_back = (self.k as usize).min(n - i - 1);
                parking += &shared * &self.parking[i] * BigUint::from(i + 1);
                naples += &shared * &self.naples[i] * BigUint::from(i + 1 + reach_back);
                let last_car = BigRational::from_integer((i + 1).into())
                    + &self.p * BigRational::from_integer(reach_back.into());
                expected += BigRational::from_integer(shared.into()) * &self.expected[i] * last_car;
            }
            self.parking.push(parking);
            self.naples.push(naples);
            self.expected.push(expected);
        }
    }

    /// `P(n)` from the parking recursion.
    pub fn parking(&mut self, n: usize) -> &BigUint {
        self.fill(n);
        &self.parking[n]
    }

    /// `N_k(n)`.
    pub fn naples(&mut self, n: usize) -> &BigUint {
        self.fill(n);
        &self.naples[n]
    }

    /// `T_{k,p}(n)`.
    pub fn expected(&mut self, n: usize) -> &BigRational {
        self.fill(n);
        &self.expected[n]
    }
}

/// `(n + 1)^(n - 1)`.
fn cayley(n: usize) -> BigUint {
    BigUint::from(n + 1).pow(n.saturating_sub(1) as u32)
}

/// Number of classic parking functions of length `n`. The closed form is
/// checked against the recursion on every call.
pub fn parking_count(n: usize) -> BigUint {
    let closed = cayley(n);
    let mut cache = RecursionCache::new(0, BigRational::zero()).expect("p = 0 is valid");
    assert_eq!(
        cache.parking(n),
        &closed,
        "parking recursion disagrees with (n+1)^(n-1) at n = {n}"
    );
    closed
}

/// Number of k-Naples parking functions of length `n`.
pub fn naples_count(n: usize, k: u32) -> BigUint {
    let mut cache = RecursionCache::new(k, BigRational::one()).expect("p = 1 is valid");
    cache.naples(n).clone()
}

/// Expected number of tuples that park under the random k-Naples model.
pub fn expected_random_naples(n: usize, k: u32, p: &BigRational) -> Result<BigRational> {
    let mut cache = RecursionCache::new(k, p.clone())?;
    Ok(cache.expected(n).clone())
}

/// Expected number of tuples that park under the random-direction model;
/// independent of `p`.
pub fn expected_random_direction(n: usize) -> BigUint {
    cayley(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binomials() {
        let row: Vec<u32> = binomial_row(5)
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        assert_eq!(row, vec![1, 5, 10, 10, 5, 1]);
        assert_eq!(binomial_row(0), vec![BigUint::one()]);
    }

    #[test]
    fn base_cases() {
        let mut c = RecursionCache::new(1, q(1, 2)).unwrap();
        assert_eq!(c.filled_to(), 0);
        assert_eq!(c.expected(0), &BigRational::one());
        assert_eq!(c.naples(1), &BigUint::one());
        assert_eq!(naples_count(1, 7), BigUint::one());
        assert_eq!(parking_count(1), BigUint::one());
    }

    #[test]
    fn small_values() {
        assert_eq!(parking_count(3), BigUint::from(16u32));
        assert_eq!(parking_count(8), BigUint::from(4_782_969u32));
        assert_eq!(naples_count(4, 1), BigUint::from(203u32));
        assert_eq!(naples_count(8, 1), BigUint::from(9_057_316u32));
        assert_eq!(expected_random_naples(4, 1, &q(1, 2)).unwrap(), q(653, 4));
        assert_eq!(
            expected_random_naples(8, 1, &q(1, 2)).unwrap(),
            q(108_464_465, 16)
        );
        assert_eq!(expected_random_direction(2), BigUint::from(3u32));
        assert_eq!(expected_random_direction(5), BigUint::from(1296u32));
    }

    #[test]
    fn k_zero_is_classic() {
        for n in 1..=9 {
            assert_eq!(naples_count(n, 0), parking_count(n));
        }
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(matches!(
            expected_random_naples(3, 1, &q(3, 2)),
            Err(ParkError::ProbabilityOutOfRange(_))
        ));
        assert!(RecursionCache::new(1, q(-1, 4)).is_err());
    }
}
