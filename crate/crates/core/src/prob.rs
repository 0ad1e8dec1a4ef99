//! Exact parking probabilities as polynomials in `p`.
//!
//! A tuple's probability is the weighted sum, over all `2^(n-1)` choice
//! vectors, of the indicator that every car parks. Bits that are never read
//! still carry their weight; `p + (1 - p) = 1` makes that harmless. The
//! enumeration is first reduced to a *success profile*: `profile[j]` counts
//! the parking choice vectors with exactly `j` forward bits. Every weighting
//! in this module is a linear function of the profile.

use std::ops::Range;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::enumerate::{fold_tuples, split_range, DEFAULT_PARTITIONS};
use crate::error::{ParkError, Result};
use crate::park::{
    blocked_spot, parks_with_bits, Lot, Model, NaplesSemantics, Occupancy, PreferenceTuple, Rule,
};
use crate::poly::PolyP;

/// Largest `n` accepted by the `2^(n-1)` enumeration kernels.
pub const MAX_ENUMERATED_CARS: usize = 30;

fn check_enumerable(alpha: &PreferenceTuple) -> Result<()> {
    alpha.require(Lot::Linear)?;
    if alpha.len() > MAX_ENUMERATED_CARS {
        return Err(ParkError::TooManyCars {
            cars: alpha.len(),
            max: MAX_ENUMERATED_CARS,
        });
    }
    Ok(())
}

pub(crate) fn profile_range(prefs: &[u8], rule: Rule, bits: Range<u64>) -> Vec<u64> {
    let mut profile = vec![0u64; prefs.len()];
    for b in bits {
        if parks_with_bits(prefs, rule, b) {
            profile[b.count_ones() as usize] += 1;
        }
    }
    profile
}

pub(crate) fn profile_of(prefs: &[u8], rule: Rule) -> Vec<u64> {
    profile_range(prefs, rule, 0..1u64 << (prefs.len() - 1))
}

/// Success profile of `alpha` under `model`: entry `j` counts the choice
/// vectors with `j` one-bits (forward decisions) under which every car parks.
pub fn success_profile(
    alpha: &PreferenceTuple,
    model: Model,
    k: u32,
    semantics: NaplesSemantics,
) -> Result<Vec<u64>> {
    success_profile_partitioned(alpha, model, k, semantics, 1)
}

/// Same as [`success_profile`], with the choice vectors split into `parts`
/// ascending bitmask ranges that are counted in parallel and summed.
pub fn success_profile_partitioned(
    alpha: &PreferenceTuple,
    model: Model,
    k: u32,
    semantics: NaplesSemantics,
    parts: usize,
) -> Result<Vec<u64>> {
    check_enumerable(alpha)?;
    let rule = Rule::for_model(model, k, semantics);
    let prefs = alpha.prefs();
    if parts <= 1 {
        return Ok(profile_of(prefs, rule));
    }
    let partials: Vec<Vec<u64>> = split_range(1u64 << (prefs.len() - 1), parts)
        .into_par_iter()
        .map(|r| profile_range(prefs, rule, r))
        .collect();
    Ok(partials
        .into_iter()
        .fold(vec![0; prefs.len()], add_profiles))
}

pub(crate) fn add_profiles(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Turns a success profile over `bits` decision bits into a polynomial.
/// Under the random-direction model a forward bit has weight `p`; under
/// random Naples a backward bit has weight `p`.
pub fn poly_from_profile(profile: &[u64], bits: usize, model: Model) -> PolyP {
    profile
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(ones, &c)| {
            let c = BigInt::from(c);
            let zeros = bits - ones;
            match model {
                Model::RandomDirection => PolyP::bernstein_term(&c, ones, zeros),
                Model::RandomNaples => PolyP::bernstein_term(&c, zeros, ones),
            }
        })
        .sum()
}

/// Parking probability under the random-direction model.
pub fn prob_model1(alpha: &PreferenceTuple) -> Result<PolyP> {
    let profile = success_profile(alpha, Model::RandomDirection, 0, NaplesSemantics::default())?;
    Ok(poly_from_profile(
        &profile,
        alpha.len() - 1,
        Model::RandomDirection,
    ))
}

/// Parking probability under the random k-Naples model.
pub fn prob_model2(alpha: &PreferenceTuple, k: u32, semantics: NaplesSemantics) -> Result<PolyP> {
    let profile = success_profile(alpha, Model::RandomNaples, k, semantics)?;
    Ok(poly_from_profile(
        &profile,
        alpha.len() - 1,
        Model::RandomNaples,
    ))
}

/// Number of choice vectors under which `alpha` parks in the random
/// 1-Naples model, by direct replay of all `2^(n-1)` vectors. At `p = 1/2`
/// the parking probability is `g / 2^(n-1)`.
pub fn g_count(alpha: &PreferenceTuple) -> Result<u64> {
    let profile = success_profile(
        alpha,
        Model::RandomNaples,
        1,
        NaplesSemantics::JumpBackThenForward,
    )?;
    Ok(profile.iter().sum())
}

fn count_subtree(prefs: &[u8], car: usize, occ: Occupancy, rule: Rule) -> u64 {
    let Some(&pref) = prefs.get(car) else {
        return 1;
    };
    let pref = pref as u32;
    let capacity = prefs.len() as u32;
    let descend = |spot: Option<u32>| match spot {
        Some(s) => {
            let mut next = occ;
            next.take(s);
            count_subtree(prefs, car + 1, next, rule)
        }
        None => 0,
    };
    if !occ.is_taken(pref) {
        let below = descend(Some(pref));
        // car 1 has no bit; later cars leave theirs unread
        return if car == 0 { below } else { 2 * below };
    }
    let forward = blocked_spot(occ, pref, capacity, rule, true);
    let backward = blocked_spot(occ, pref, capacity, rule, false);
    if forward == backward {
        2 * descend(forward)
    } else {
        descend(forward) + descend(backward)
    }
}

/// Counts parking choice vectors by walking the decision tree: a car whose
/// decision cannot matter contributes a factor of two instead of a branch.
/// Agrees with [`g_count`] (and its k-Naples generalization) but only
/// explores distinct outcomes.
pub fn count_parking_choices(
    alpha: &PreferenceTuple,
    model: Model,
    k: u32,
    semantics: NaplesSemantics,
) -> Result<u64> {
    alpha.require(Lot::Linear)?;
    Ok(count_subtree(
        alpha.prefs(),
        0,
        Occupancy::empty(),
        Rule::for_model(model, k, semantics),
    ))
}

pub(crate) fn naples_choice_count(prefs: &[u8], k: u32, semantics: NaplesSemantics) -> u64 {
    count_subtree(
        prefs,
        0,
        Occupancy::empty(),
        Rule::RandomNaples { k, semantics },
    )
}

/// `sum over all a in {1..=n}^n` of the model's parking probability, as one
/// polynomial. Tuples are split into `parts` index ranges.
pub fn expected_total_poly(
    n: usize,
    model: Model,
    k: u32,
    semantics: NaplesSemantics,
    parts: usize,
) -> Result<PolyP> {
    if n == 0 || n > MAX_ENUMERATED_CARS {
        return Err(ParkError::ParameterOutOfRange {
            what: "n",
            value: n.to_string(),
            range: format!("1..={MAX_ENUMERATED_CARS}"),
        });
    }
    let rule = Rule::for_model(model, k, semantics);
    let profile = fold_tuples(
        n,
        n,
        parts,
        || vec![0u64; n],
        |acc, t| {
            let p = profile_of(t, rule);
            for (a, c) in acc.iter_mut().zip(p) {
                *a += c;
            }
        },
        add_profiles,
    )?;
    Ok(poly_from_profile(&profile, n - 1, model))
}

/// [`expected_total_poly`] with the default partitioning.
pub fn expected_total(n: usize, model: Model, k: u32, semantics: NaplesSemantics) -> Result<PolyP> {
    expected_total_poly(n, model, k, semantics, DEFAULT_PARTITIONS)
}
