//! Exact computation for two randomized parking models.
//!
//! `n` cars with preferences `(a_1, ..., a_n)` arrive in order at a lot with
//! spots `1..=n`. A car whose preferred spot is taken either
//!
//! * searches forward with probability `p` and backward otherwise
//!   ([`Model::RandomDirection`]), or
//! * backs up `k` spots with probability `p` before searching forward, and
//!   searches forward at once otherwise ([`Model::RandomNaples`]).
//!
//! Per-tuple parking probabilities come out as exact polynomials in `p`
//! ([`prob_model1`], [`prob_model2`]); expected counts come from exact
//! recursions ([`recursion`]); [`census`] and [`verify`] enumerate whole
//! tuple spaces to tabulate and check the structure of the `k = 1`,
//! `p = 1/2` distribution.

pub mod census;
pub mod circular;
pub mod enumerate;
pub mod error;
pub mod montecarlo;
pub mod park;
pub mod poly;
pub mod prob;
pub mod recursion;
pub mod staircase;
pub mod verify;

pub use census::{
    full_census, full_census_with, tuple_for_dyadic, CensusConfig, CensusKernel, DistributionTable,
};
pub use circular::{circular_park, empty_spot_distribution, EmptySpotDistribution};
pub use error::{ParkError, Result};
pub use montecarlo::{estimate_expected_total, estimate_prob, McEstimate};
pub use park::{
    park_forward, park_naples_det, park_with_choices, ChoiceVector, Model, NaplesSemantics,
    Occupancy, ParkingResult, PreferenceTuple,
};
pub use poly::{eval_poly, PolyP};
pub use prob::{count_parking_choices, g_count, prob_model1, prob_model2};
pub use recursion::{
    expected_random_direction, expected_random_naples, naples_count, parking_count, RecursionCache,
};
pub use staircase::{odd_tuple_for, staircase_g, StaircaseShape};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
