//! Deterministic parking semantics.
//!
//! Spots are 1-based. A lot holds at most 64 spots, so occupancy is a single
//! machine word and a tuple has at most [`MAX_CARS`] cars (the circular lot
//! needs one spot more than there are cars).
//!
//! Every random model is replayed from an explicit [`ChoiceVector`]: bit 1
//! means "search forward only", bit 0 means "take the backward branch". Car 1
//! always finds the lot empty and has no bit; a car whose preferred spot is
//! free never reads its bit.

use std::fmt;
use std::str::FromStr;

use crate::error::{ParkError, Result};

/// Largest number of cars any tuple may hold.
pub const MAX_CARS: usize = 63;

/// Which lot a tuple was validated against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lot {
    /// `n` spots in a row; preferences in `1..=n`.
    Linear,
    /// `n + 1` spots in a circle; preferences in `1..=n+1`.
    Circular,
}

impl Lot {
    fn name(self) -> &'static str {
        match self {
            Lot::Linear => "linear",
            Lot::Circular => "circular",
        }
    }

    fn capacity(self, cars: usize) -> usize {
        match self {
            Lot::Linear => cars,
            Lot::Circular => cars + 1,
        }
    }
}

/// The preference list `(a_1, ..., a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceTuple {
    prefs: Vec<u8>,
    lot: Lot,
}

impl PreferenceTuple {
    /// Validates a tuple for the `n`-spot linear lot.
    pub fn linear(prefs: &[u32]) -> Result<Self> {
        Self::validated(prefs, Lot::Linear)
    }

    /// Validates a tuple for the `n + 1`-spot circular lot.
    pub fn circular(prefs: &[u32]) -> Result<Self> {
        Self::validated(prefs, Lot::Circular)
    }

    fn validated(prefs: &[u32], lot: Lot) -> Result<Self> {
        if prefs.is_empty() {
            return Err(ParkError::EmptyTuple);
        }
        if prefs.len() > MAX_CARS {
            return Err(ParkError::TooManyCars {
                cars: prefs.len(),
                max: MAX_CARS,
            });
        }
        let capacity = lot.capacity(prefs.len());
        for (i, &pref) in prefs.iter().enumerate() {
            if pref == 0 || pref as usize > capacity {
                return Err(ParkError::PreferenceOutOfRange {
                    car: i + 1,
                    pref,
                    capacity,
                });
            }
        }
        Ok(Self {
            prefs: prefs.iter().map(|&p| p as u8).collect(),
            lot,
        })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_raw(prefs: Vec<u8>, lot: Lot) -> Self {
        debug_assert!(!prefs.is_empty() && prefs.len() <= MAX_CARS);
        debug_assert!(prefs
            .iter()
            .all(|&p| p >= 1 && p as usize <= lot.capacity(prefs.len())));
        Self { prefs, lot }
    }

    pub fn len(&self) -> usize {
        self.prefs.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.prefs.is_empty()
    }

    pub fn prefs(&self) -> &[u8] {
        &self.prefs
    }

    pub fn lot(&self) -> Lot {
        self.lot
    }

    pub fn capacity(&self) -> usize {
        self.lot.capacity(self.prefs.len())
    }

    /// Preference of car `car` (1-based).
    pub fn pref(&self, car: usize) -> u32 {
        self.prefs[car - 1] as u32
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.prefs.iter().map(|&p| p as u32).collect()
    }

    /// True when the tuple is a permutation of `1..=n`.
    pub fn is_permutation(&self) -> bool {
        let mut seen = 0u64;
        for &p in &self.prefs {
            seen |= 1 << (p - 1);
        }
        seen.count_ones() as usize == self.prefs.len() && self.lot == Lot::Linear
    }

    /// `(1, a_1 + 1, ..., a_n + 1)`: a linear `(n + 1)`-tuple whose first car
    /// claims spot 1 and whose remaining cars replay this tuple one spot up.
    pub fn prefixed_shift(&self) -> Result<Self> {
        self.require(Lot::Linear)?;
        let mut prefs = Vec::with_capacity(self.len() + 1);
        prefs.push(1);
        prefs.extend(self.prefs.iter().map(|&p| p as u32 + 1));
        Self::linear(&prefs)
    }

    pub(crate) fn require(&self, lot: Lot) -> Result<()> {
        if self.lot == lot {
            Ok(())
        } else {
            Err(ParkError::WrongLot {
                expected: lot.name(),
                got: self.lot.name(),
            })
        }
    }
}

impl fmt::Display for PreferenceTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.prefs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses `"a1,a2,...,an"` as a linear tuple.
impl FromStr for PreferenceTuple {
    type Err = ParkError;

    fn from_str(s: &str) -> Result<Self> {
        let prefs = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| ParkError::ParameterOutOfRange {
                        what: "preference",
                        value: part.trim().to_string(),
                        range: "positive integers".to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::linear(&prefs)
    }
}

/// Decision bits `(b_2, ..., b_n)`. Bit `j` (0-based) belongs to car `j + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChoiceVector {
    bits: u64,
    len: usize,
}

impl ChoiceVector {
    /// Bits above `len` must be clear.
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len >= 64 || bits >> len != 0 {
            return Err(ParkError::ParameterOutOfRange {
                what: "choice bits",
                value: format!("{bits:#x}"),
                range: format!("{len}-bit masks"),
            });
        }
        Ok(Self { bits, len })
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let mask = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &b)| acc | ((b as u64) << j));
        Self::new(mask, bits.len())
    }

    pub fn all_ones(len: usize) -> Self {
        Self {
            bits: low_mask(len as u32),
            len,
        }
    }

    pub fn all_zeros(len: usize) -> Self {
        Self { bits: 0, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Decision of car `car` (1-based, `car >= 2`); `true` = forward only.
    pub fn forward(&self, car: usize) -> bool {
        self.bits >> (car - 2) & 1 == 1
    }

    /// Copy with car `car`'s bit set to `forward`.
    pub fn with_car(&self, car: usize, forward: bool) -> Self {
        let bit = 1u64 << (car - 2);
        let bits = if forward {
            self.bits | bit
        } else {
            self.bits & !bit
        };
        Self {
            bits,
            len: self.len,
        }
    }

    pub(crate) fn check_for(&self, alpha: &PreferenceTuple) -> Result<()> {
        let expected = alpha.len() - 1;
        if self.len != expected {
            return Err(ParkError::ChoiceLengthMismatch {
                expected,
                got: self.len,
            });
        }
        Ok(())
    }
}

/// Set of taken spots over `1..=64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Occupancy(u64);

#[inline]
pub(crate) fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl Occupancy {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_taken(self, spot: u32) -> bool {
        self.0 >> (spot - 1) & 1 == 1
    }

    #[inline]
    pub fn take(&mut self, spot: u32) {
        debug_assert!(!self.is_taken(spot));
        self.0 |= 1 << (spot - 1);
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    /// Smallest free spot in `from..=capacity`.
    #[inline]
    pub fn first_free_from(self, from: u32, capacity: u32) -> Option<u32> {
        if from > capacity {
            return None;
        }
        let free = !self.0 & low_mask(capacity);
        let ahead = free >> (from - 1);
        if ahead == 0 {
            None
        } else {
            Some(from + ahead.trailing_zeros())
        }
    }

    /// Largest free spot in `lo..=hi`.
    #[inline]
    pub fn last_free_in(self, lo: u32, hi: u32) -> Option<u32> {
        if lo > hi || hi == 0 {
            return None;
        }
        let window = low_mask(hi) & !low_mask(lo - 1);
        let free = !self.0 & window;
        if free == 0 {
            None
        } else {
            Some(64 - free.leading_zeros())
        }
    }
}

/// Outcome of one deterministic run.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParkingResult {
    /// `spots[i]` is where car `i + 1` parked.
    Parked { spots: Vec<u8> },
    /// `car` (1-based) was the first car that found no spot.
    Failed { car: usize },
}

impl ParkingResult {
    pub fn parked_all(&self) -> bool {
        matches!(self, ParkingResult::Parked { .. })
    }

    pub fn assignment(&self) -> Option<&[u8]> {
        match self {
            ParkingResult::Parked { spots } => Some(spots),
            ParkingResult::Failed { .. } => None,
        }
    }

    pub fn first_failed_car(&self) -> Option<usize> {
        match self {
            ParkingResult::Parked { .. } => None,
            ParkingResult::Failed { car } => Some(*car),
        }
    }
}

/// How a k-Naples car backs up. Both readings agree for `k <= 1`.
///
/// The default is [`FirstFitBackward`](Self::FirstFitBackward): it is the
/// reading under which exhaustive counts match the `N_k` and `T_{k,p}`
/// recursions for `k >= 2` (see `verify::compare_naples_semantics`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum NaplesSemantics {
    /// Move to `max(a_i - k, 1)` and search forward from there.
    JumpBackThenForward,
    /// Try `a_i - 1, ..., max(a_i - k, 1)` in turn, then search forward from
    /// `a_i + 1`.
    #[default]
    FirstFitBackward,
}

/// The two randomized models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// Blocked cars search forward with probability `p`, backward otherwise.
    RandomDirection,
    /// Blocked cars back up `k` spots with probability `p` before searching
    /// forward, otherwise search forward at once.
    RandomNaples,
}

/// What a blocked car does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rule {
    Forward,
    Naples { k: u32, semantics: NaplesSemantics },
    Direction,
    RandomNaples { k: u32, semantics: NaplesSemantics },
}

impl Rule {
    pub(crate) fn for_model(model: Model, k: u32, semantics: NaplesSemantics) -> Self {
        match model {
            Model::RandomDirection => Rule::Direction,
            Model::RandomNaples => Rule::RandomNaples { k, semantics },
        }
    }
}

#[inline]
fn naples_backup(
    occ: Occupancy,
    pref: u32,
    capacity: u32,
    k: u32,
    semantics: NaplesSemantics,
) -> Option<u32> {
    let lo = pref.saturating_sub(k).max(1);
    match semantics {
        NaplesSemantics::JumpBackThenForward => occ.first_free_from(lo, capacity),
        NaplesSemantics::FirstFitBackward => occ
            .last_free_in(lo, pref - 1)
            .or_else(|| occ.first_free_from(pref + 1, capacity)),
    }
}

/// Spot taken by a car preferring `pref` that finds `pref` occupied.
/// `forward` is the car's decision bit; deterministic rules ignore it.
#[inline]
pub(crate) fn blocked_spot(
    occ: Occupancy,
    pref: u32,
    capacity: u32,
    rule: Rule,
    forward: bool,
) -> Option<u32> {
    match rule {
        Rule::Forward => occ.first_free_from(pref, capacity),
        Rule::Naples { k, semantics } => naples_backup(occ, pref, capacity, k, semantics),
        Rule::Direction => {
            if forward {
                occ.first_free_from(pref, capacity)
            } else {
                occ.last_free_in(1, pref - 1)
            }
        }
        Rule::RandomNaples { k, semantics } => {
            if forward {
                occ.first_free_from(pref, capacity)
            } else {
                naples_backup(occ, pref, capacity, k, semantics)
            }
        }
    }
}

/// Runs the cars in order. `decide(car)` is only called for blocked cars.
/// Returns the final occupancy, or the first car that failed.
#[inline]
pub(crate) fn replay<F: FnMut(usize) -> bool>(
    prefs: &[u8],
    rule: Rule,
    mut decide: F,
    mut spots: Option<&mut Vec<u8>>,
) -> std::result::Result<Occupancy, usize> {
    let capacity = prefs.len() as u32;
    let mut occ = Occupancy::empty();
    for (i, &pref) in prefs.iter().enumerate() {
        let pref = pref as u32;
        let spot = if !occ.is_taken(pref) {
            Some(pref)
        } else {
            blocked_spot(occ, pref, capacity, rule, decide(i + 1))
        };
        match spot {
            Some(s) => {
                occ.take(s);
                if let Some(out) = spots.as_deref_mut() {
                    out.push(s as u8);
                }
            }
            None => return Err(i + 1),
        }
    }
    Ok(occ)
}

/// Bitmask replay used by the enumeration kernels: true when every car parks.
#[inline]
pub(crate) fn parks_with_bits(prefs: &[u8], rule: Rule, bits: u64) -> bool {
    replay(prefs, rule, |car| bits >> (car - 2) & 1 == 1, None).is_ok()
}

fn run(alpha: &PreferenceTuple, rule: Rule, bits: Option<ChoiceVector>) -> ParkingResult {
    let mut spots = Vec::with_capacity(alpha.len());
    let outcome = replay(
        alpha.prefs(),
        rule,
        |car| bits.is_none_or(|b| b.forward(car)),
        Some(&mut spots),
    );
    match outcome {
        Ok(_) => ParkingResult::Parked { spots },
        Err(car) => ParkingResult::Failed { car },
    }
}

/// Classic parking: a blocked car takes the first free spot ahead of it.
pub fn park_forward(alpha: &PreferenceTuple) -> Result<ParkingResult> {
    alpha.require(Lot::Linear)?;
    Ok(run(alpha, Rule::Forward, None))
}

/// Deterministic k-Naples parking: every blocked car takes the backward
/// branch. `k = 0` is classic parking.
pub fn park_naples_det(
    alpha: &PreferenceTuple,
    k: u32,
    semantics: NaplesSemantics,
) -> Result<ParkingResult> {
    alpha.require(Lot::Linear)?;
    Ok(run(alpha, Rule::Naples { k, semantics }, None))
}

/// Replays a random model with every decision fixed by `beta`. `k` and
/// `semantics` are ignored for [`Model::RandomDirection`].
pub fn park_with_choices(
    alpha: &PreferenceTuple,
    beta: &ChoiceVector,
    model: Model,
    k: u32,
    semantics: NaplesSemantics,
) -> Result<ParkingResult> {
    alpha.require(Lot::Linear)?;
    beta.check_for(alpha)?;
    Ok(run(
        alpha,
        Rule::for_model(model, k, semantics),
        Some(*beta),
    ))
}
