use thiserror::Error;

/// Errors raised by the library. All of them describe bad input; none are
/// transient.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParkError {
    #[error("preference tuple must contain at least one car")]
    EmptyTuple,

    #[error("{cars} cars exceed the supported maximum of {max}")]
    TooManyCars { cars: usize, max: usize },

    #[error("car {car} prefers spot {pref}, outside 1..={capacity}")]
    PreferenceOutOfRange {
        car: usize,
        pref: u32,
        capacity: usize,
    },

    #[error("operation needs a {expected} tuple, got a {got} tuple")]
    WrongLot {
        expected: &'static str,
        got: &'static str,
    },

    #[error("choice vector has {got} bits, expected {expected}")]
    ChoiceLengthMismatch { expected: usize, got: usize },

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),

    #[error("invalid staircase shape: {0}")]
    InvalidShape(String),

    #[error("{what} = {value} is outside {range}")]
    ParameterOutOfRange {
        what: &'static str,
        value: String,
        range: String,
    },

    #[error("no {n}-tuple parks with probability {a}/{denominator}")]
    NoWitness { n: usize, a: u64, denominator: u64 },

    #[error(
        "census for n = {n} needs {tuples} tuples x {choices} choice vectors \
         (about {work:.1e} replays); pass the large-census override to run it"
    )]
    CensusTooLarge {
        n: usize,
        tuples: u64,
        choices: u64,
        work: f64,
    },
}

pub type Result<T> = std::result::Result<T, ParkError>;
