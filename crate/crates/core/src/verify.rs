//! Exhaustive and sampled checks of the model's structural properties. Each
//! verifier returns a report; `passed()` is the pass/fail verdict.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::census::tuple_for_dyadic;
use crate::enumerate::{fold_tuples, DEFAULT_PARTITIONS};
use crate::error::{ParkError, Result};
use crate::park::{parks_with_bits, replay, Lot, Model, NaplesSemantics, PreferenceTuple, Rule};
use crate::poly::PolyP;
use crate::prob::{expected_total_poly, g_count, poly_from_profile, profile_of};
use crate::recursion::{expected_random_naples, naples_count, RecursionCache};
use crate::staircase::{all_staircases, runs_if_staircase, staircase_g, StaircaseShape};

/// Largest `n` for the `n^n`-tuple verifiers.
pub const EXHAUSTIVE_MAX: usize = 7;
/// Up to this `n` the monotonicity check is exhaustive.
pub const MONOTONICITY_EXHAUSTIVE_MAX: usize = 5;

const JUMP: NaplesSemantics = NaplesSemantics::JumpBackThenForward;
const NAPLES_1: Rule = Rule::RandomNaples {
    k: 1,
    semantics: JUMP,
};

fn check_n(n: usize, lo: usize, hi: usize) -> Result<()> {
    if n < lo || n > hi {
        return Err(ParkError::ParameterOutOfRange {
            what: "n",
            value: n.to_string(),
            range: format!("{lo}..={hi}"),
        });
    }
    Ok(())
}

fn raw(prefs: &[u8]) -> PreferenceTuple {
    PreferenceTuple::from_raw(prefs.to_vec(), Lot::Linear)
}

fn concat<T>(mut a: Vec<T>, b: Vec<T>) -> Vec<T> {
    a.extend(b);
    a
}

#[derive(Clone, Debug, Default)]
pub struct OddCensusReport {
    pub n: usize,
    /// Every staircase tuple with its choice count, ascending by count.
    pub staircases: Vec<(PreferenceTuple, u64)>,
    /// Non-staircase tuples with an odd count.
    pub odd_outside: Vec<PreferenceTuple>,
    /// Staircase tuples with an even count.
    pub even_staircases: Vec<PreferenceTuple>,
}

impl OddCensusReport {
    /// Staircase counts are exactly `1, 3, ..., 2^(n-1) - 1`, once each.
    pub fn bijective(&self) -> bool {
        let expected = 1u64 << (self.n - 2);
        self.staircases.len() as u64 == expected
            && self
                .staircases
                .iter()
                .enumerate()
                .all(|(i, (_, g))| *g == 2 * i as u64 + 1)
    }

    pub fn passed(&self) -> bool {
        self.odd_outside.is_empty() && self.even_staircases.is_empty() && self.bijective()
    }
}

/// Checks over all of `{1..=n}^n` that the count `g` is odd exactly on
/// staircase tuples and that staircases hit each odd value once.
pub fn verify_odd_census(n: usize) -> Result<OddCensusReport> {
    check_n(n, 2, EXHAUSTIVE_MAX)?;
    let mut report = fold_tuples(
        n,
        n,
        DEFAULT_PARTITIONS,
        || OddCensusReport {
            n,
            ..Default::default()
        },
        |acc, t| {
            let g = crate::prob::naples_choice_count(t, 1, JUMP);
            let stair = runs_if_staircase(t).is_some();
            match (stair, g % 2 == 1) {
                (true, true) => acc.staircases.push((raw(t), g)),
                (true, false) => acc.even_staircases.push(raw(t)),
                (false, true) => acc.odd_outside.push(raw(t)),
                (false, false) => {}
            }
        },
        |a, b| OddCensusReport {
            n,
            staircases: concat(a.staircases, b.staircases),
            odd_outside: concat(a.odd_outside, b.odd_outside),
            even_staircases: concat(a.even_staircases, b.even_staircases),
        },
    )?;
    report.staircases.sort_by_key(|(_, g)| *g);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichRow {
    pub n: usize,
    pub parking: BigUint,
    pub expected: BigRational,
    pub half_sum: BigRational,
    pub naples: BigUint,
}

impl SandwichRow {
    pub fn holds(&self) -> bool {
        BigRational::from_integer(self.parking.clone().into()) <= self.expected
            && self.expected <= self.half_sum
    }
}

#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub rows: Vec<SandwichRow>,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(SandwichRow::holds)
    }
}

/// `P(n) <= T(n) <= (N(n) + P(n)) / 2` at `k = 1`, `p = 1/2`, for
/// `1 <= n <= n_max`.
pub fn verify_sandwich(n_max: usize) -> Result<SandwichReport> {
    check_n(n_max, 1, usize::MAX)?;
    let mut cache = RecursionCache::new(1, BigRational::new(1.into(), 2.into()))?;
    let rows = (1..=n_max)
        .map(|n| {
            let parking = cache.parking(n).clone();
            let naples = cache.naples(n).clone();
            let expected = cache.expected(n).clone();
            let half_sum = BigRational::new(BigInt::from(&naples + &parking), 2.into());
            SandwichRow {
                n,
                parking,
                expected,
                half_sum,
                naples,
            }
        })
        .collect();
    Ok(SandwichReport { rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub alpha: PreferenceTuple,
    pub beta: u64,
    pub car: usize,
}

#[derive(Clone, Debug, Default)]
pub struct MonotonicityReport {
    pub n: usize,
    pub exhaustive: bool,
    /// `(tuple, choice vector, car)` triples (exhaustive) or sampled parking
    /// pairs (sampled).
    pub cases: u64,
    /// Forward bits flipped to backward on a parking run and re-checked.
    pub flips_checked: u64,
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn flip_check(prefs: &[u8], bits: u64, report: &mut MonotonicityReport) {
    let n = prefs.len();
    for j in 0..n - 1 {
        if bits >> j & 1 == 1 {
            report.flips_checked += 1;
            let flipped = bits & !(1 << j);
            if !parks_with_bits(prefs, NAPLES_1, flipped) {
                report.violations.push(MonotonicityViolation {
                    alpha: raw(prefs),
                    beta: bits,
                    car: j + 2,
                });
            }
        }
    }
}

/// Random 1-Naples: turning any forward decision of a parking run into a
/// backward one keeps every car parked. Exhaustive for `n <= 5`; above that
/// `samples` parking `(tuple, choice vector)` pairs are drawn with `seed`.
pub fn verify_monotonicity(n: usize, samples: u64, seed: u64) -> Result<MonotonicityReport> {
    check_n(n, 2, crate::park::MAX_CARS)?;
    let bits_len = n - 1;
    if n <= MONOTONICITY_EXHAUSTIVE_MAX {
        return fold_tuples(
            n,
            n,
            DEFAULT_PARTITIONS,
            || MonotonicityReport {
                n,
                exhaustive: true,
                ..Default::default()
            },
            |acc, t| {
                for bits in 0..1u64 << bits_len {
                    acc.cases += bits_len as u64;
                    if parks_with_bits(t, NAPLES_1, bits) {
                        flip_check(t, bits, acc);
                    }
                }
            },
            |mut a, b| {
                a.cases += b.cases;
                a.flips_checked += b.flips_checked;
                a.violations.extend(b.violations);
                a
            },
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = MonotonicityReport {
        n,
        exhaustive: false,
        ..Default::default()
    };
    let mut prefs = vec![0u8; n];
    let mask = crate::park::low_mask(bits_len as u32);
    while report.cases < samples {
        for p in prefs.iter_mut() {
            *p = rng.random_range(1..=n as u8);
        }
        let bits = rng.random::<u64>() & mask;
        if parks_with_bits(&prefs, NAPLES_1, bits) {
            report.cases += 1;
            flip_check(&prefs, bits, &mut report);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default)]
pub struct CharacterizationReport {
    pub n: usize,
    pub tuples: u64,
    pub certain: u64,
    pub impossible: u64,
    /// Probability is 1 but the tuple is not a classic parking function, or
    /// the reverse.
    pub certain_mismatches: Vec<PreferenceTuple>,
    /// Probability is 0 but the tuple parks under deterministic 1-Naples, or
    /// the reverse.
    pub impossible_mismatches: Vec<PreferenceTuple>,
}

impl CharacterizationReport {
    pub fn passed(&self) -> bool {
        self.certain_mismatches.is_empty() && self.impossible_mismatches.is_empty()
    }
}

/// Random 1-Naples probability is the constant 1 exactly on classic parking
/// functions and the zero polynomial exactly on tuples that fail
/// deterministic 1-Naples parking.
pub fn verify_characterizations(n: usize) -> Result<CharacterizationReport> {
    check_n(n, 1, EXHAUSTIVE_MAX)?;
    let naples = Rule::Naples {
        k: 1,
        semantics: JUMP,
    };
    fold_tuples(
        n,
        n,
        DEFAULT_PARTITIONS,
        || CharacterizationReport {
            n,
            ..Default::default()
        },
        |acc, t| {
            acc.tuples += 1;
            let poly = poly_from_profile(&profile_of(t, NAPLES_1), n - 1, Model::RandomNaples);
            let classic = replay(t, Rule::Forward, |_| true, None).is_ok();
            let det = replay(t, naples, |_| false, None).is_ok();
            acc.certain += u64::from(poly.is_one());
            acc.impossible += u64::from(poly.is_zero());
            if poly.is_one() != classic {
                acc.certain_mismatches.push(raw(t));
            }
            if poly.is_zero() == det {
                acc.impossible_mismatches.push(raw(t));
            }
        },
        |mut a, b| {
            a.tuples += b.tuples;
            a.certain += b.certain;
            a.impossible += b.impossible;
            a.certain_mismatches.extend(b.certain_mismatches);
            a.impossible_mismatches.extend(b.impossible_mismatches);
            a
        },
    )
}

#[derive(Clone, Debug)]
pub struct DirectionTotalReport {
    pub n: usize,
    pub total: PolyP,
    pub expected: BigUint,
}

impl DirectionTotalReport {
    pub fn passed(&self) -> bool {
        self.total.is_constant(&BigInt::from(self.expected.clone()))
    }
}

/// Sum of random-direction parking probabilities over `{1..=n}^n`, which
/// should be the constant polynomial `(n + 1)^(n - 1)`.
pub fn verify_direction_total(n: usize) -> Result<DirectionTotalReport> {
    check_n(n, 1, EXHAUSTIVE_MAX)?;
    Ok(DirectionTotalReport {
        n,
        total: expected_total_poly(n, Model::RandomDirection, 0, JUMP, DEFAULT_PARTITIONS)?,
        expected: crate::recursion::expected_random_direction(n),
    })
}

#[derive(Clone, Debug)]
pub struct StaircaseFormulaReport {
    pub n: usize,
    pub shapes: u64,
    /// `(tuple, closed form, replayed count)` for every disagreement.
    pub mismatches: Vec<(PreferenceTuple, BigUint, u64)>,
}

impl StaircaseFormulaReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// The staircase closed form against replayed counts for every shape of
/// length `n`.
pub fn verify_staircase_formula(n: usize) -> Result<StaircaseFormulaReport> {
    check_n(n, 2, 20)?;
    let mut report = StaircaseFormulaReport {
        n,
        shapes: 0,
        mismatches: Vec::new(),
    };
    for alpha in all_staircases(n) {
        report.shapes += 1;
        let closed = staircase_g(&StaircaseShape::from_tuple(&alpha).expect("staircase"));
        let replayed = g_count(&alpha)?;
        if closed != BigUint::from(replayed) {
            report.mismatches.push((alpha, closed, replayed));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct DyadicReport {
    pub n: usize,
    pub witnesses: Vec<(u64, PreferenceTuple)>,
    /// Numerators with no witness, or whose witness has the wrong count.
    pub failures: Vec<u64>,
}

impl DyadicReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builds a witness for every numerator `0..=2^(n-1)` and recounts it by
/// replay.
pub fn verify_dyadic(n: usize) -> Result<DyadicReport> {
    check_n(n, 3, 16)?;
    let mut report = DyadicReport {
        n,
        witnesses: Vec::new(),
        failures: Vec::new(),
    };
    for a in 0..=1u64 << (n - 1) {
        match tuple_for_dyadic(n, a) {
            Ok(alpha) if g_count(&alpha)? == a => report.witnesses.push((a, alpha)),
            _ => report.failures.push(a),
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionCheckRow {
    pub n: usize,
    pub p: BigRational,
    pub brute_force: BigRational,
    pub recursion: BigRational,
}

impl RecursionCheckRow {
    pub fn agrees(&self) -> bool {
        self.brute_force == self.recursion
    }
}

/// Sum over all tuples of the exact random k-Naples probability, evaluated
/// at each `p`, against the expected-value recursion.
pub fn verify_recursion_brute_force(
    n_max: usize,
    k: u32,
    semantics: NaplesSemantics,
    ps: &[BigRational],
) -> Result<Vec<RecursionCheckRow>> {
    check_n(n_max, 1, EXHAUSTIVE_MAX)?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let total = expected_total_poly(n, Model::RandomNaples, k, semantics, DEFAULT_PARTITIONS)?;
        for p in ps {
            rows.push(RecursionCheckRow {
                n,
                p: p.clone(),
                brute_force: total.eval(p),
                recursion: expected_random_naples(n, k, p)?,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticsRow {
    pub n: usize,
    pub recursion: BigUint,
    pub jump_back: u64,
    pub first_fit: u64,
}

/// Counts deterministic k-Naples parking functions under both backing-up
/// readings and sets them beside the counting recursion.
pub fn compare_naples_semantics(n_max: usize, k: u32) -> Result<Vec<SemanticsRow>> {
    check_n(n_max, 1, EXHAUSTIVE_MAX)?;
    (1..=n_max)
        .map(|n| {
            let rules = [
                Rule::Naples {
                    k,
                    semantics: NaplesSemantics::JumpBackThenForward,
                },
                Rule::Naples {
                    k,
                    semantics: NaplesSemantics::FirstFitBackward,
                },
            ];
            let [jump_back, first_fit] = fold_tuples(
                n,
                n,
                DEFAULT_PARTITIONS,
                || [0u64; 2],
                |acc, t| {
                    for (c, rule) in acc.iter_mut().zip(rules) {
                        *c += u64::from(replay(t, rule, |_| false, None).is_ok());
                    }
                },
                |a, b| [a[0] + b[0], a[1] + b[1]],
            )?;
            Ok(SemanticsRow {
                n,
                recursion: naples_count(n, k),
                jump_back,
                first_fit,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_census_small() {
        let r = verify_odd_census(2).unwrap();
        assert!(r.passed());
        assert_eq!(r.staircases, vec![(raw(&[2, 2]), 1)]);
        let r = verify_odd_census(4).unwrap();
        assert!(r.passed());
        assert_eq!(r.staircases.len(), 4);
        assert!(verify_odd_census(1).is_err());
    }

    #[test]
    fn sandwich_rows() {
        let r = verify_sandwich(5).unwrap();
        assert!(r.passed());
        let five = &r.rows[4];
        assert_eq!(five.parking, BigUint::from(1296u32));
        assert_eq!(five.expected, BigRational::new(6977.into(), 4.into()));
        assert_eq!(five.half_sum, BigRational::new(3521.into(), 2.into()));
        assert!(verify_sandwich(0).is_err());
    }

    #[test]
    fn monotonicity_small() {
        let r = verify_monotonicity(3, 0, 0).unwrap();
        assert!(r.exhaustive && r.passed());
        assert_eq!(r.cases, 27 * 4 * 2);
        let r = verify_monotonicity(7, 500, 3).unwrap();
        assert!(!r.exhaustive && r.passed());
        assert_eq!(r.cases, 500);
    }

    #[test]
    fn characterizations_small() {
        let r = verify_characterizations(3).unwrap();
        assert!(r.passed());
        // Table-2 style counts for n = 3
        assert_eq!(r.certain, 16);
        assert_eq!(r.impossible, 3);
    }

    #[test]
    fn direction_total_small() {
        for n in 1..=3 {
            assert!(verify_direction_total(n).unwrap().passed());
        }
    }
}
