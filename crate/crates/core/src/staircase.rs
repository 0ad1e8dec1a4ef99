//! Staircase tuples: `a_1 = a_2 >= a_3 >= ... >= a_n = 2` with every step
//! in `{0, -1}`. These are exactly the tuples with an odd number of parking
//! choice vectors in the random 1-Naples model, and the counts are distinct.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{ParkError, Result};
use crate::park::NaplesSemantics;
use crate::park::{Lot, PreferenceTuple, MAX_CARS};
use crate::prob::naples_choice_count;

/// Up to this many cars, [`odd_tuple_for`] scans every staircase.
pub const EXHAUSTIVE_INVERSE_MAX: usize = 24;

/// Run lengths of a staircase tuple, lowest value first: `m_2, m_3, ..., m_t`
/// where `m_v` cars prefer spot `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StaircaseShape {
    multiplicities: Vec<usize>,
}

impl StaircaseShape {
    /// `multiplicities[0]` is `m_2`. Every run is nonempty and the top run
    /// `m_t` has at least two cars.
    pub fn new(multiplicities: Vec<usize>) -> Result<Self> {
        let Some(&top) = multiplicities.last() else {
            return Err(ParkError::InvalidShape("no runs".into()));
        };
        if multiplicities.contains(&0) {
            return Err(ParkError::InvalidShape("empty run".into()));
        }
        if top < 2 {
            return Err(ParkError::InvalidShape(format!(
                "top run has {top} car; the first two cars share a preference"
            )));
        }
        let n: usize = multiplicities.iter().sum();
        if n > MAX_CARS {
            return Err(ParkError::TooManyCars {
                cars: n,
                max: MAX_CARS,
            });
        }
        Ok(Self { multiplicities })
    }

    /// Shape of `alpha`, if it is a linear staircase tuple.
    pub fn from_tuple(alpha: &PreferenceTuple) -> Option<Self> {
        if alpha.lot() != Lot::Linear {
            return None;
        }
        runs_if_staircase(alpha.prefs()).map(|multiplicities| Self { multiplicities })
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Number of cars.
    pub fn len(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Highest preferred spot `t`.
    pub fn top(&self) -> usize {
        self.multiplicities.len() + 1
    }

    /// `(t, ..., t, t-1, ..., 2, ..., 2)`.
    pub fn expand(&self) -> PreferenceTuple {
        let mut prefs = Vec::with_capacity(self.len());
        for (i, &m) in self.multiplicities.iter().enumerate().rev() {
            prefs.extend(std::iter::repeat_n((i + 2) as u8, m));
        }
        PreferenceTuple::from_raw(prefs, Lot::Linear)
    }
}

/// Run lengths (lowest value first) of a staircase tuple, `None` otherwise.
pub(crate) fn runs_if_staircase(prefs: &[u8]) -> Option<Vec<usize>> {
    let n = prefs.len();
    if n < 2 || prefs[0] != prefs[1] || prefs[n - 1] != 2 {
        return None;
    }
    let mut runs = vec![1usize];
    for w in prefs.windows(2).rev() {
        match w[0].checked_sub(w[1]) {
            Some(0) => *runs.last_mut().unwrap() += 1,
            Some(1) => runs.push(1),
            _ => return None,
        }
    }
    // windows give n - 1 steps; the last car opened the first run
    Some(runs)
}

/// The alternating closed form
/// `2^(n-1) - 2^(n-m_2) + 2^(n-m_2-1) - 2^(n-m_2-m_3) + ... + 2^(m_t-1) - 1`.
pub fn staircase_g(shape: &StaircaseShape) -> BigUint {
    let pow = |e: usize| BigUint::one() << e;
    let (top, lower) = shape.multiplicities.split_last().expect("validated shape");
    let mut rest = shape.len();
    let mut g = BigUint::zero();
    for &m in lower {
        g += pow(rest - 1);
        rest -= m;
        g -= pow(rest);
    }
    debug_assert_eq!(rest, *top);
    g + pow(top - 1) - 1u32
}

/// Word-sized version of [`staircase_g`] for the search loops.
fn staircase_g_word(runs: &[usize]) -> u64 {
    let (top, lower) = runs.split_last().expect("nonempty runs");
    let mut rest: usize = runs.iter().sum();
    let mut g = 0u64;
    for &m in lower {
        g += 1 << (rest - 1);
        rest -= m;
        g -= 1 << rest;
    }
    g + (1 << (top - 1)) - 1
}

/// The staircase tuple selected by `steps`: reading from car `n - 1` down to
/// car 2, bit `j` says whether car `n - 1 - j` prefers one spot more than the
/// car after it. Car `n` prefers 2 and car 1 copies car 2.
pub fn staircase_from_steps(n: usize, steps: u64) -> PreferenceTuple {
    assert!((2..=MAX_CARS).contains(&n) && steps >> (n - 2) == 0);
    let mut prefs = vec![2u8; n];
    for car in (1..n - 1).rev() {
        let j = n - 2 - car;
        prefs[car] = prefs[car + 1] + (steps >> j & 1) as u8;
    }
    prefs[0] = prefs[1];
    PreferenceTuple::from_raw(prefs, Lot::Linear)
}

/// All `2^(n-2)` staircase tuples of length `n`.
pub fn all_staircases(n: usize) -> impl Iterator<Item = PreferenceTuple> {
    assert!(n >= 2, "staircases need at least two cars");
    (0..1u64 << (n - 2)).map(move |s| staircase_from_steps(n, s))
}

fn check_odd_target(n: usize, t: u64) -> Result<()> {
    if !(2..=MAX_CARS).contains(&n) {
        return Err(ParkError::ParameterOutOfRange {
            what: "n",
            value: n.to_string(),
            range: format!("2..={MAX_CARS}"),
        });
    }
    let max = 1u64 << (n - 2);
    if t == 0 || t > max {
        return Err(ParkError::ParameterOutOfRange {
            what: "t",
            value: t.to_string(),
            range: format!("1..={max}"),
        });
    }
    Ok(())
}

/// Peels runs off the bottom: `g = 2^(n-1) - 2^(n-m_2) + g'` where `g'` is
/// the count for the remaining `n - m_2` cars shifted down one spot.
fn descend_runs(n: usize, g: u64) -> Vec<usize> {
    let mut runs = Vec::new();
    let (mut n, mut g) = (n, g);
    loop {
        let deficit = (1u64 << (n - 1)) - g;
        if deficit == 1 {
            runs.push(n);
            return runs;
        }
        let rest = (64 - deficit.leading_zeros()) as usize;
        runs.push(n - rest);
        g = (1u64 << rest) - deficit;
        n = rest;
    }
}

/// The unique staircase search by scanning every shape.
fn scan_runs(n: usize, g: u64) -> Option<Vec<usize>> {
    (0..1u64 << (n - 2))
        .map(|s| runs_if_staircase(staircase_from_steps(n, s).prefs()).expect("staircase"))
        .find(|runs| staircase_g_word(runs) == g)
}

/// The unique `n`-tuple parking with probability `(2t - 1) / 2^(n-1)` in
/// the random 1-Naples model at `p = 1/2`.
pub fn odd_tuple_for(n: usize, t: u64) -> Result<PreferenceTuple> {
    check_odd_target(n, t)?;
    let g = 2 * t - 1;
    let runs = if n <= EXHAUSTIVE_INVERSE_MAX {
        scan_runs(n, g).expect("every odd count has a staircase")
    } else {
        descend_runs(n, g)
    };
    let alpha = StaircaseShape::new(runs).expect("valid runs").expand();
    if n <= crate::census::WITNESS_CHECK_MAX {
        assert_eq!(
            naples_choice_count(alpha.prefs(), 1, NaplesSemantics::JumpBackThenForward),
            g,
            "staircase inverse produced a wrong tuple for n = {n}, t = {t}"
        );
    }
    Ok(alpha)
}

/// [`odd_tuple_for`] through run peeling only, no scan.
pub fn odd_tuple_by_descent(n: usize, t: u64) -> Result<PreferenceTuple> {
    check_odd_target(n, t)?;
    Ok(StaircaseShape::new(descend_runs(n, 2 * t - 1))
        .expect("valid runs")
        .expand())
}
