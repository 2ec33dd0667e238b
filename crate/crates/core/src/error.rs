use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variant names are part of the command-line contract: the CLI prints them
/// verbatim in its error JSON, so renaming one is a breaking change.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    ParseError(String),
    #[error("generator `{0}` is not in the alphabet")]
    UnknownGenerator(String),
    #[error("word uses generators outside the presentation: {0}")]
    AlphabetMismatch(String),

    #[error("surface genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("mirrored form needs an even genus, got {0}")]
    MirroredOddGenus(usize),
    #[error("relator fails the C'(1/6) condition: piece of length {piece} in relator of length {relator}")]
    SmallCancellationViolated { piece: usize, relator: usize },
    #[error("operation needs a surface presentation")]
    NotSurface,
    #[error("operation needs a free presentation")]
    NotFree,

    #[error("relator image is nontrivial: {0}")]
    NotWellDefined(String),
    #[error("cannot compose: inner target differs from outer source")]
    ChainMismatch,
    #[error("elements commute: {0}")]
    CommutingPair(String),
    #[error("family index must be nonnegative, got {0}")]
    BadIndex(i64),
    #[error("element is trivial in the source group: {0}")]
    TrivialElementInK(String),
    #[error("no separating index up to horizon {horizon} (window {window})")]
    HorizonExhausted { horizon: usize, window: usize },

    #[error("expected {expected} exponents, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("exponent box has {size} vectors, budget is {budget}")]
    BoxTooLarge { size: u128, budget: u128 },
    #[error("no threshold found up to {0}")]
    NotFoundWithin(i64),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("word ball has {size} elements, budget is {budget}")]
    BallTooLarge { size: u128, budget: u128 },
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),
    #[error("degenerate element: {0}")]
    DegenerateElement(String),
    #[error("degenerate product of commutators: {0}")]
    DegenerateGamma(String),
    #[error("no grid point passes; best margin {best_margin:e} at t = {best_t}")]
    NoGridPointPasses { best_margin: f64, best_t: f64 },
    #[error("margin vanishes at every grid point; best {best_margin:e} at t = {best_t}, killed by `{word}`")]
    MarginZeroEverywhere {
        best_margin: f64,
        best_t: f64,
        word: String,
    },
    #[error("relator residual {residual:e} exceeds {bound:e} at t = {t}")]
    ResidualTooLarge { residual: f64, bound: f64, t: f64 },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ParseError(_) => "ParseError",
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::AlphabetMismatch(_) => "AlphabetMismatch",
            Error::GenusTooSmall(_) => "GenusTooSmall",
            Error::MirroredOddGenus(_) => "MirroredOddGenus",
            Error::SmallCancellationViolated { .. } => "SmallCancellationViolated",
            Error::NotSurface => "NotSurface",
            Error::NotFree => "NotFree",
            Error::NotWellDefined(_) => "NotWellDefined",
            Error::ChainMismatch => "ChainMismatch",
            Error::CommutingPair(_) => "CommutingPair",
            Error::BadIndex(_) => "BadIndex",
            Error::TrivialElementInK(_) => "TrivialElementInK",
            Error::HorizonExhausted { .. } => "HorizonExhausted",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::BoxTooLarge { .. } => "BoxTooLarge",
            Error::NotFoundWithin(_) => "NotFoundWithin",
            Error::InvalidInstance(_) => "InvalidInstance",
            Error::BallTooLarge { .. } => "BallTooLarge",
            Error::RankTooSmall(_) => "RankTooSmall",
            Error::NotInGroup(_) => "NotInGroup",
            Error::DegenerateElement(_) => "DegenerateElement",
            Error::DegenerateGamma(_) => "DegenerateGamma",
            Error::NoGridPointPasses { .. } => "NoGridPointPasses",
            Error::MarginZeroEverywhere { .. } => "MarginZeroEverywhere",
            Error::ResidualTooLarge { .. } => "ResidualTooLarge",
            Error::GroupMismatch(_) => "GroupMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
