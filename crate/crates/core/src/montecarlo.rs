//! Seeded simulation of both random models.
//!
//! Generator: ChaCha8 (`rand_chacha`), seeded with `seed_from_u64(seed)`.
//! Trials are cut into fixed blocks of [`BLOCK_TRIALS`]; block `b` draws
//! from ChaCha stream `b`. Blocks run in parallel and their integer tallies
//! are summed, so an estimate depends only on `(inputs, seed, trials)` and
//! never on the thread count.
//!
//! Branch draw: a blocked car draws one `u64` `x` and takes the branch that
//! has probability `p` iff `x < floor(p * 2^64)`. The realized probability
//! is within `2^-64` of `p`, and exact for `p = 0` and `p = 1`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{ParkError, Result};
use crate::park::{replay, Lot, Model, NaplesSemantics, PreferenceTuple, Rule, MAX_CARS};

/// Trials per RNG stream.
pub const BLOCK_TRIALS: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Distance from `exact` in standard errors; 0 when both agree exactly.
    pub fn z_score(&self, exact: f64) -> f64 {
        let gap = (self.mean - exact).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.stderr
        }
    }
}

/// `floor(p * 2^64)` as a 65-bit threshold.
fn threshold(p: &BigRational) -> Result<u128> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(ParkError::ProbabilityOutOfRange(p.to_string()));
    }
    let scaled = (p.numer().to_biguint().expect("nonnegative") << 64u32)
        / p.denom().to_biguint().expect("positive");
    Ok(scaled.to_u128().expect("at most 2^64"))
}

struct Sampler {
    rule: Rule,
    /// True when the `p` branch is "forward".
    p_means_forward: bool,
    threshold: u128,
}

impl Sampler {
    fn new(model: Model, k: u32, semantics: NaplesSemantics, p: &BigRational) -> Result<Self> {
        Ok(Self {
            rule: Rule::for_model(model, k, semantics),
            p_means_forward: model == Model::RandomDirection,
            threshold: threshold(p)?,
        })
    }

    fn parks(&self, prefs: &[u8], rng: &mut ChaCha8Rng) -> bool {
        replay(
            prefs,
            self.rule,
            |_| {
                let hit = (rng.random::<u64>() as u128) < self.threshold;
                hit == self.p_means_forward
            },
            None,
        )
        .is_ok()
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn blocks(total: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let count = total.div_ceil(BLOCK_TRIALS) as usize;
    (0..count).into_par_iter().map(move |b| {
        let b = b as u64;
        let len = BLOCK_TRIALS.min(total - b * BLOCK_TRIALS);
        (b, len)
    })
}

/// Empirical parking frequency of `alpha` over `trials` simulated runs.
pub fn estimate_prob(
    alpha: &PreferenceTuple,
    model: Model,
    k: u32,
    semantics: NaplesSemantics,
    p: &BigRational,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    alpha.require(Lot::Linear)?;
    if trials == 0 {
        return Err(ParkError::ParameterOutOfRange {
            what: "trials",
            value: "0".into(),
            range: ">= 1".into(),
        });
    }
    let sampler = Sampler::new(model, k, semantics, p)?;
    let successes: u64 = blocks(trials)
        .map(|(b, len)| {
            let mut rng = block_rng(seed, b);
            (0..len)
                .filter(|_| sampler.parks(alpha.prefs(), &mut rng))
                .count() as u64
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let mean = successes as f64 / trials as f64;
    Ok(McEstimate {
        mean,
        stderr: (mean * (1.0 - mean) / trials as f64).sqrt(),
        trials,
        seed,
    })
}

/// Mean parking probability over uniformly drawn tuples of `{1..=n}^n`;
/// `n^n * mean` estimates the expected number of parking tuples.
///
/// Each sampled tuple runs `trials_per_tuple` times. The standard error is
/// taken from the spread of the per-tuple frequencies, which covers both
/// the tuple draw and the branch draws.
#[allow(clippy::too_many_arguments)]
pub fn estimate_expected_total(
    n: usize,
    model: Model,
    k: u32,
    semantics: NaplesSemantics,
    p: &BigRational,
    tuple_samples: u64,
    trials_per_tuple: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n == 0 || n > MAX_CARS {
        return Err(ParkError::ParameterOutOfRange {
            what: "n",
            value: n.to_string(),
            range: format!("1..={MAX_CARS}"),
        });
    }
    if tuple_samples == 0 || trials_per_tuple == 0 {
        return Err(ParkError::ParameterOutOfRange {
            what: "samples",
            value: format!("{tuple_samples} x {trials_per_tuple}"),
            range: ">= 1 each".into(),
        });
    }
    let sampler = Sampler::new(model, k, semantics, p)?;
    // per block: (sum of successes, sum of squared successes)
    let tallies: Vec<(u64, u128)> = blocks(tuple_samples)
        .map(|(b, len)| {
            let mut rng = block_rng(seed, b);
            let mut prefs = vec![0u8; n];
            let (mut sum, mut sq) = (0u64, 0u128);
            for _ in 0..len {
                for p in prefs.iter_mut() {
                    *p = rng.random_range(1..=n as u8);
                }
                let s = (0..trials_per_tuple)
                    .filter(|_| sampler.parks(&prefs, &mut rng))
                    .count() as u64;
                sum += s;
                sq += (s as u128) * (s as u128);
            }
            (sum, sq)
        })
        .collect();
    let (sum, sq) = tallies
        .into_iter()
        .fold((0u64, 0u128), |(a, b), (x, y)| (a + x, b + y));
    let samples = tuple_samples as f64;
    let m = trials_per_tuple as f64;
    let mean = sum as f64 / (samples * m);
    let stderr = if tuple_samples > 1 {
        let mean_sq = sq as f64 / (samples * m * m);
        let var = (mean_sq - mean * mean).max(0.0) * samples / (samples - 1.0);
        (var / samples).sqrt()
    } else {
        (mean * (1.0 - mean) / m).sqrt()
    };
    Ok(McEstimate {
        mean,
        stderr,
        trials: tuple_samples * trials_per_tuple,
        seed,
    })
}

/// `n^n` as a float, for scaling [`estimate_expected_total`].
pub fn tuple_space_size(n: usize) -> f64 {
    BigUint::from(n)
        .pow(n as u32)
        .to_f64()
        .expect("finite for supported n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    const JUMP: NaplesSemantics = NaplesSemantics::JumpBackThenForward;

    #[test]
    fn thresholds() {
        assert_eq!(threshold(&q(0, 1)).unwrap(), 0);
        assert_eq!(threshold(&q(1, 1)).unwrap(), 1u128 << 64);
        assert_eq!(threshold(&q(1, 2)).unwrap(), 1u128 << 63);
        assert_eq!(threshold(&q(1, 3)).unwrap(), (1u128 << 64) / 3);
        assert!(threshold(&q(5, 4)).is_err());
    }

    #[test]
    fn permutation_is_certain() {
        let a = PreferenceTuple::linear(&[3, 1, 2]).unwrap();
        for model in [Model::RandomDirection, Model::RandomNaples] {
            let est = estimate_prob(&a, model, 1, JUMP, &q(1, 2), 5000, 9).unwrap();
            assert_eq!(est.mean, 1.0);
            assert_eq!(est.stderr, 0.0);
        }
    }

    #[test]
    fn degenerate_p_is_deterministic() {
        // p = 1 in model 2 is deterministic Naples; (4,3,3,1) parks
        let a = PreferenceTuple::linear(&[4, 3, 3, 1]).unwrap();
        let est = estimate_prob(&a, Model::RandomNaples, 1, JUMP, &q(1, 1), 1000, 1).unwrap();
        assert_eq!(est.mean, 1.0);
        let est = estimate_prob(&a, Model::RandomNaples, 1, JUMP, &q(0, 1), 1000, 1).unwrap();
        assert_eq!(est.mean, 0.0);
    }

    #[test]
    fn reproducible() {
        let a = PreferenceTuple::linear(&[2, 2, 2, 1]).unwrap();
        let run =
            || estimate_prob(&a, Model::RandomDirection, 0, JUMP, &q(1, 3), 200_000, 42).unwrap();
        assert_eq!(run(), run());
        let other =
            estimate_prob(&a, Model::RandomDirection, 0, JUMP, &q(1, 3), 200_000, 43).unwrap();
        assert_ne!(run().mean, other.mean);
    }

    #[test]
    fn rejects_bad_input() {
        let a = PreferenceTuple::linear(&[1]).unwrap();
        assert!(estimate_prob(&a, Model::RandomNaples, 1, JUMP, &q(1, 2), 0, 0).is_err());
        assert!(
            estimate_expected_total(0, Model::RandomNaples, 1, JUMP, &q(1, 2), 1, 1, 0).is_err()
        );
        assert!(
            estimate_expected_total(3, Model::RandomNaples, 1, JUMP, &q(1, 2), 0, 1, 0).is_err()
        );
    }
}
