use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient set is empty")]
    EmptyCoefficientSet,
    #[error("coefficient {0} appears more than once")]
    DuplicateCoefficient(String),
    #[error("coefficient set {{0}} defines no hyperplanes")]
    ZeroOnlyCoefficientSet,
    #[error("arrangement rank must be at least 1")]
    ZeroRank,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("invalid surjection {map:?} onto [{target}]")]
    InvalidSurjection { map: Vec<usize>, target: usize },
    #[error("invalid partition {0:?}")]
    InvalidPartition(String),

    #[error("prime {prime} changes the matroid: {reason}")]
    BadPrime { prime: u64, reason: String },
    #[error("point count {count} at q = {prime} is off the interpolated polynomial (expected {expected})")]
    InterpolationMismatch {
        prime: u64,
        count: String,
        expected: String,
    },
    #[error("need at least {needed} primes, got {supplied}")]
    NotEnoughPrimes { needed: usize, supplied: usize },
    #[error("characteristic polynomial coefficient of t^{exponent} has the wrong sign")]
    NonAlternating { exponent: usize },

    #[error("{hyperplanes} hyperplanes exceed the limit of {limit}")]
    LimitExceeded { hyperplanes: usize, limit: usize },
    #[error("no circuit available to straighten monomial {monomial:?} (relations cover circuits of size <= {max_size})")]
    MissingCircuit { monomial: Vec<usize>, max_size: usize },
    #[error("algebra elements disagree on convention or degree")]
    ConventionMismatch,

    #[error("class function is not a character: multiplicity of {partition} is {value}")]
    NonCharacter { partition: String, value: String },
    #[error("n = {n} is too small to pad the partition (need n >= {needed})")]
    PadTooSmall { n: usize, needed: usize },

    #[error("no consistent fit within the data; at least {additional} more terms are needed")]
    InsufficientData { additional: usize },
    #[error("fit found but the coefficient of {pole_bound}^n has degree {degree}")]
    LeadingNotConstant {
        pole_bound: usize,
        degree: usize,
        form: Box<crate::genfun::ExpPolyForm>,
    },

    #[error("store conflict for {key}: existing {existing} ({existing_provenance}) vs new {incoming} ({incoming_provenance})")]
    StoreConflict {
        key: String,
        existing: String,
        existing_provenance: String,
        incoming: String,
        incoming_provenance: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
