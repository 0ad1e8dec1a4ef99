//! The random-direction model on a circle of `n + 1` spots.
//!
//! On a circle a blocked car always finds a spot in whichever direction it
//! searches, so exactly one spot stays empty. Summing the empty-spot
//! distribution over all `(n + 1)^n` tuples gives the same polynomial in
//! every coordinate, by rotation symmetry.

use num_bigint::BigInt;

use crate::enumerate::TupleCursor;
use crate::error::{ParkError, Result};
use crate::park::{ChoiceVector, Lot, Model, Occupancy, PreferenceTuple};
use crate::poly::PolyP;
use crate::prob::{poly_from_profile, prob_model1, MAX_ENUMERATED_CARS};

/// `probs[i]` is the probability that spot `i + 1` is the one left empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptySpotDistribution {
    n: usize,
    probs: Vec<PolyP>,
}

impl EmptySpotDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[PolyP] {
        &self.probs
    }

    /// Probability that `spot` (1-based) is empty.
    pub fn prob(&self, spot: usize) -> &PolyP {
        &self.probs[spot - 1]
    }

    pub fn total(&self) -> PolyP {
        self.probs.iter().cloned().sum()
    }

    /// Entry `i` moves to `i + 1`, wrapping.
    pub fn rotated(&self) -> Self {
        let mut probs = self.probs.clone();
        probs.rotate_right(1);
        Self { n: self.n, probs }
    }
}

fn circular_empty_spot(prefs: &[u8], bits: u64) -> u32 {
    let capacity = prefs.len() as u32 + 1;
    let mut occ = Occupancy::empty();
    for (i, &pref) in prefs.iter().enumerate() {
        let pref = pref as u32;
        let spot = if !occ.is_taken(pref) {
            pref
        } else if bits >> (i - 1) & 1 == 1 {
            occ.first_free_from(pref + 1, capacity)
                .or_else(|| occ.first_free_from(1, capacity))
                .expect("a circle with a free spot")
        } else {
            occ.last_free_in(1, pref - 1)
                .or_else(|| occ.last_free_in(pref + 1, capacity))
                .expect("a circle with a free spot")
        };
        occ.take(spot);
    }
    let free = !occ.bits() & crate::park::low_mask(capacity);
    debug_assert_eq!(free.count_ones(), 1);
    free.trailing_zeros() + 1
}

/// Runs the cars on the circle and returns the spot left empty. A blocked
/// car searches forward (bit 1) or backward (bit 0), wrapping around.
pub fn circular_park(alpha: &PreferenceTuple, beta: &ChoiceVector) -> Result<u32> {
    alpha.require(Lot::Circular)?;
    beta.check_for(alpha)?;
    Ok(circular_empty_spot(alpha.prefs(), beta.bits()))
}

fn distribution_of(prefs: &[u8]) -> EmptySpotDistribution {
    let n = prefs.len();
    let mut profiles = vec![vec![0u64; n]; n + 1];
    for bits in 0..1u64 << (n - 1) {
        let spot = circular_empty_spot(prefs, bits);
        profiles[spot as usize - 1][bits.count_ones() as usize] += 1;
    }
    EmptySpotDistribution {
        n,
        probs: profiles
            .iter()
            .map(|p| poly_from_profile(p, n - 1, Model::RandomDirection))
            .collect(),
    }
}

/// Exact empty-spot distribution under random-direction weights (a forward
/// bit has weight `p`).
pub fn empty_spot_distribution(alpha: &PreferenceTuple) -> Result<EmptySpotDistribution> {
    alpha.require(Lot::Circular)?;
    if alpha.len() > MAX_ENUMERATED_CARS {
        return Err(ParkError::TooManyCars {
            cars: alpha.len(),
            max: MAX_ENUMERATED_CARS,
        });
    }
    Ok(distribution_of(alpha.prefs()))
}

/// Largest `n` accepted by [`verify_circular`].
pub const CIRCULAR_VERIFY_MAX: usize = 6;

/// Outcome of the exhaustive circular checks for one `n`.
#[derive(Clone, Debug)]
pub struct CircularReport {
    pub n: usize,
    pub tuples: u64,
    /// Tuples whose distribution does not sum to 1.
    pub normalization_failures: Vec<PreferenceTuple>,
    /// Tuples whose shifted tuple does not have the rotated distribution.
    pub shift_failures: Vec<PreferenceTuple>,
    /// Coordinate-wise sum of all distributions.
    pub column_sums: Vec<PolyP>,
    /// Tuples containing `n + 1` that still leave spot `n + 1` empty.
    pub top_spot_failures: Vec<PreferenceTuple>,
    /// Linear tuples where the linear parking probability equals the
    /// probability that spot `n + 1` stays empty on the circle.
    pub linear_agreements: u64,
    pub linear_disagreements: Vec<PreferenceTuple>,
}

impl CircularReport {
    pub fn column_sums_uniform(&self) -> bool {
        let target = PolyP::constant(BigInt::from(self.n + 1).pow(self.n as u32 - 1));
        self.column_sums.iter().all(|c| *c == target)
    }

    /// The checked invariants; linear agreement is reported separately.
    pub fn passed(&self) -> bool {
        self.normalization_failures.is_empty()
            && self.shift_failures.is_empty()
            && self.top_spot_failures.is_empty()
            && self.column_sums_uniform()
    }
}

/// Exhaustive shift-equivariance, normalization and column-sum checks over
/// `{1..=n+1}^n`, plus the linear/circular comparison over `{1..=n}^n`.
pub fn verify_circular(n: usize) -> Result<CircularReport> {
    if n == 0 || n > CIRCULAR_VERIFY_MAX {
        return Err(ParkError::ParameterOutOfRange {
            what: "n",
            value: n.to_string(),
            range: format!("1..={CIRCULAR_VERIFY_MAX}"),
        });
    }
    let spots = n + 1;
    let tuples = crate::enumerate::tuple_count(n, spots)?;
    let one = PolyP::constant(1);
    let mut report = CircularReport {
        n,
        tuples,
        normalization_failures: Vec::new(),
        shift_failures: Vec::new(),
        column_sums: vec![PolyP::zero(); spots],
        top_spot_failures: Vec::new(),
        linear_agreements: 0,
        linear_disagreements: Vec::new(),
    };
    let mut cursor = TupleCursor::new(n, spots, 0..tuples);
    while let Some(prefs) = cursor.next_tuple() {
        let alpha = PreferenceTuple::from_raw(prefs.to_vec(), Lot::Circular);
        let dist = distribution_of(prefs);
        if dist.total() != one {
            report.normalization_failures.push(alpha.clone());
        }
        let shifted: Vec<u8> = prefs.iter().map(|&p| p % spots as u8 + 1).collect();
        if distribution_of(&shifted) != dist.rotated() {
            report.shift_failures.push(alpha.clone());
        }
        for (sum, p) in report.column_sums.iter_mut().zip(&dist.probs) {
            *sum += p;
        }
        let top = dist.prob(spots);
        if prefs.iter().any(|&p| p as usize == spots) {
            if !top.is_zero() {
                report.top_spot_failures.push(alpha);
            }
        } else {
            let linear = PreferenceTuple::from_raw(prefs.to_vec(), Lot::Linear);
            if prob_model1(&linear)? == *top {
                report.linear_agreements += 1;
            } else {
                report.linear_disagreements.push(linear);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: &[u32]) -> PreferenceTuple {
        PreferenceTuple::circular(p).unwrap()
    }

    #[test]
    fn no_conflicts_leaves_top_empty() {
        let alpha = c(&[1, 2, 3, 4]);
        for bits in 0..8 {
            let beta = ChoiceVector::new(bits, 3).unwrap();
            assert_eq!(circular_park(&alpha, &beta).unwrap(), 5);
        }
        let d = empty_spot_distribution(&alpha).unwrap();
        assert!(d.prob(5).is_one());
        assert!(d.probs()[..4].iter().all(PolyP::is_zero));
    }

    #[test]
    fn wraps_backward() {
        let alpha = c(&[1, 1]);
        let fwd = ChoiceVector::new(1, 1).unwrap();
        let back = ChoiceVector::new(0, 1).unwrap();
        assert_eq!(circular_park(&alpha, &fwd).unwrap(), 3);
        // car 2 backs from 1 around to 3, leaving 2 empty
        assert_eq!(circular_park(&alpha, &back).unwrap(), 2);
    }

    #[test]
    fn wraps_forward() {
        let alpha = c(&[3, 3]);
        let fwd = ChoiceVector::new(1, 1).unwrap();
        assert_eq!(circular_park(&alpha, &fwd).unwrap(), 2);
    }

    #[test]
    fn shift_rotates_distribution() {
        let a = empty_spot_distribution(&c(&[1, 1])).unwrap();
        let b = empty_spot_distribution(&c(&[2, 2])).unwrap();
        assert_eq!(a.rotated(), b);
        assert_eq!(a.prob(2), &PolyP::from_i64s(&[1, -1]));
        assert_eq!(a.prob(3), &PolyP::from_i64s(&[0, 1]));
    }

    #[test]
    fn rejects_linear_tuples() {
        let lin = PreferenceTuple::linear(&[1, 1]).unwrap();
        assert!(empty_spot_distribution(&lin).is_err());
        assert!(verify_circular(0).is_err());
    }
}
