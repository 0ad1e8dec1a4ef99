//! Exhaustive distribution of parking probabilities in the random k-Naples
//! model at `p = 1/2`, and constructive witnesses for every dyadic value.

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::enumerate::{fold_tuples, tuple_count, DEFAULT_PARTITIONS};
use crate::error::{ParkError, Result};
use crate::park::{Lot, NaplesSemantics, PreferenceTuple, Rule, MAX_CARS};
use crate::prob::{naples_choice_count, profile_of};
use crate::recursion::RecursionCache;
use crate::staircase::odd_tuple_for;

/// Largest `n` a census runs without the large-census override.
pub const DEFAULT_CENSUS_MAX: usize = 7;
/// Largest `n` a census runs at all.
pub const LARGE_CENSUS_MAX: usize = 8;
/// Constructed witnesses are re-counted up to this many cars.
pub const WITNESS_CHECK_MAX: usize = 20;

/// How each tuple's choice count is obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CensusKernel {
    /// Walk the decision tree, doubling for unread bits.
    #[default]
    DecisionTree,
    /// Replay all `2^(n-1)` choice vectors.
    Replay,
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub k: u32,
    pub semantics: NaplesSemantics,
    pub allow_large: bool,
    pub partitions: usize,
    pub kernel: CensusKernel,
}

impl Default for CensusConfig {
    fn default() -> Self {
        Self {
            k: 1,
            semantics: NaplesSemantics::default(),
            allow_large: false,
            partitions: DEFAULT_PARTITIONS,
            kernel: CensusKernel::DecisionTree,
        }
    }
}

/// `f(a / 2^(n-1))`: how many `n`-tuples have exactly `a` parking choice
/// vectors. Numerators are kept unreduced over the fixed denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    n: usize,
    k: u32,
    semantics: NaplesSemantics,
    counts: Vec<u64>,
}

impl DistributionTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn semantics(&self) -> NaplesSemantics {
        self.semantics
    }

    pub fn denominator(&self) -> u64 {
        1 << (self.n - 1)
    }

    /// `f(a / 2^(n-1))`; zero for numerators out of range.
    pub fn count(&self, numerator: u64) -> u64 {
        self.counts.get(numerator as usize).copied().unwrap_or(0)
    }

    /// `(numerator, count)` for every numerator `0..=2^(n-1)`, ascending.
    pub fn rows(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().enumerate().map(|(a, &c)| (a as u64, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `sum_a (a / 2^(n-1)) f(a)`: the expected number of parking tuples.
    pub fn expectation(&self) -> BigRational {
        let weighted: BigUint = self
            .rows()
            .map(|(a, c)| BigUint::from(a) * BigUint::from(c))
            .sum();
        BigRational::new(weighted.into(), BigUint::from(self.denominator()).into())
    }

    /// Cross-checks against the recursions. Empty when every invariant holds.
    pub fn invariant_violations(&self) -> Vec<String> {
        let n = self.n;
        let mut out = Vec::new();
        let expected_total = (n as u64).pow(n as u32);
        if self.total() != expected_total {
            out.push(format!(
                "sum f = {} but n^n = {expected_total}",
                self.total()
            ));
        }
        let half = BigRational::new(1.into(), 2.into());
        let mut cache = RecursionCache::new(self.k, half).expect("1/2 is a probability");
        let parking = cache.parking(n).clone();
        if BigUint::from(self.count(self.denominator())) != parking {
            out.push(format!(
                "f(1) = {} but the parking count is {parking}",
                self.count(self.denominator())
            ));
        }
        // jump-back parking drifts from the recursions once k >= 2
        if self.k <= 1 || self.semantics == NaplesSemantics::FirstFitBackward {
            let naples = cache.naples(n).clone();
            let zero = BigUint::from(expected_total) - &naples;
            if BigUint::from(self.count(0)) != zero {
                out.push(format!("f(0) = {} but n^n - N(n) = {zero}", self.count(0)));
            }
            let t = cache.expected(n).clone();
            if self.expectation() != t {
                out.push(format!("expectation {} but T(n) = {t}", self.expectation()));
            }
        }
        out
    }
}

fn census_size_check(n: usize, allow_large: bool) -> Result<()> {
    if n == 0 || n > LARGE_CENSUS_MAX {
        return Err(ParkError::ParameterOutOfRange {
            what: "n",
            value: n.to_string(),
            range: format!("1..={LARGE_CENSUS_MAX}"),
        });
    }
    if n > DEFAULT_CENSUS_MAX && !allow_large {
        let tuples = tuple_count(n, n)?;
        let choices = 1u64 << (n - 1);
        return Err(ParkError::CensusTooLarge {
            n,
            tuples,
            choices,
            work: tuples as f64 * choices as f64,
        });
    }
    Ok(())
}

/// Census of `{1..=n}^n` under the random k-Naples model at `p = 1/2`.
pub fn full_census(n: usize, k: u32) -> Result<DistributionTable> {
    full_census_with(
        n,
        &CensusConfig {
            k,
            ..CensusConfig::default()
        },
    )
}

pub fn full_census_with(n: usize, config: &CensusConfig) -> Result<DistributionTable> {
    census_size_check(n, config.allow_large)?;
    let slots = (1usize << (n - 1)) + 1;
    let (k, semantics, kernel) = (config.k, config.semantics, config.kernel);
    let rule = Rule::RandomNaples { k, semantics };
    let counts = fold_tuples(
        n,
        n,
        config.partitions,
        || vec![0u64; slots],
        |acc, t| {
            let g = match kernel {
                CensusKernel::DecisionTree => naples_choice_count(t, k, semantics),
                CensusKernel::Replay => profile_of(t, rule).iter().sum(),
            };
            acc[g as usize] += 1;
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    )?;
    Ok(DistributionTable {
        n,
        k,
        semantics,
        counts,
    })
}

/// A tuple whose random 1-Naples parking probability at `p = 1/2` is
/// exactly `a / 2^(n-1)`.
///
/// Odd `a` has a unique staircase witness. `a = 0` uses `(n, ..., n)`,
/// which strands spot 1 for `n >= 3`; for `n <= 2` no such tuple exists.
/// `a = 2^(n-1)` uses `(1, ..., 1)`. Other even `a` prefix a car claiming
/// spot 1 to a witness for `a / 2` on `n - 1` cars.
pub fn tuple_for_dyadic(n: usize, a: u64) -> Result<PreferenceTuple> {
    if n == 0 || n > MAX_CARS {
        return Err(ParkError::ParameterOutOfRange {
            what: "n",
            value: n.to_string(),
            range: format!("1..={MAX_CARS}"),
        });
    }
    let denominator = 1u64 << (n - 1);
    if a > denominator {
        return Err(ParkError::ParameterOutOfRange {
            what: "a",
            value: a.to_string(),
            range: format!("0..={denominator}"),
        });
    }
    let alpha = if a == denominator {
        PreferenceTuple::from_raw(vec![1; n], Lot::Linear)
    } else if a == 0 {
        if n < 3 {
            return Err(ParkError::NoWitness { n, a, denominator });
        }
        PreferenceTuple::from_raw(vec![n as u8; n], Lot::Linear)
    } else if a % 2 == 1 {
        odd_tuple_for(n, a.div_ceil(2))?
    } else {
        tuple_for_dyadic(n - 1, a / 2)?.prefixed_shift()?
    };
    if n <= WITNESS_CHECK_MAX {
        assert_eq!(
            naples_choice_count(alpha.prefs(), 1, NaplesSemantics::JumpBackThenForward),
            a,
            "dyadic witness {alpha} is wrong for a = {a}"
        );
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::g_count;

    #[test]
    fn tiny_census() {
        let t = full_census(2, 1).unwrap();
        assert_eq!(t.rows().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 3)]);
        assert!(t.invariant_violations().is_empty());
        let t1 = full_census(1, 1).unwrap();
        assert_eq!(t1.rows().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn census_kernels_agree() {
        for n in 1..=5 {
            let tree = full_census(n, 1).unwrap();
            let replay = full_census_with(
                n,
                &CensusConfig {
                    kernel: CensusKernel::Replay,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(tree, replay);
            assert!(tree.invariant_violations().is_empty(), "n = {n}");
        }
    }

    #[test]
    fn census_independent_of_partitioning() {
        let base = full_census(5, 1).unwrap();
        for partitions in [1, 2, 13, 3125, 10_000] {
            let t = full_census_with(
                5,
                &CensusConfig {
                    partitions,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(t, base);
        }
    }

    #[test]
    fn large_census_is_gated() {
        assert!(matches!(
            full_census(8, 1),
            Err(ParkError::CensusTooLarge { n: 8, .. })
        ));
        assert!(full_census(9, 1).is_err());
        assert!(full_census(0, 1).is_err());
    }

    #[test]
    fn dyadic_examples() {
        assert_eq!(tuple_for_dyadic(3, 2).unwrap().to_vec(), vec![1, 3, 3]);
        assert_eq!(tuple_for_dyadic(4, 8).unwrap().to_vec(), vec![1, 1, 1, 1]);
        assert_eq!(tuple_for_dyadic(3, 0).unwrap().to_vec(), vec![3, 3, 3]);
        assert_eq!(g_count(&tuple_for_dyadic(3, 2).unwrap()).unwrap(), 2);
        assert!(matches!(
            tuple_for_dyadic(2, 0),
            Err(ParkError::NoWitness { .. })
        ));
        assert!(matches!(
            tuple_for_dyadic(1, 0),
            Err(ParkError::NoWitness { .. })
        ));
        assert!(tuple_for_dyadic(3, 5).is_err());
        assert_eq!(tuple_for_dyadic(1, 1).unwrap().to_vec(), vec![1]);
    }
}
