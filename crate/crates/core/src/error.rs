use thiserror::Error;

/// Errors raised across the crate.
///
/// Every variant has a stable machine-readable [`Error::code`], used for
/// error rows in sweeps and for CLI diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("DivisionByZeroDivisor: divisor {0} lies in the zero-divisor set (a component is 0)")]
    DivisionByZeroDivisor(String),

    #[error("NonFinite: {0} is not a finite number")]
    NonFinite(f64),

    #[error("DomainError: {0}")]
    Domain(String),

    #[error("InvalidInterval: {0}")]
    InvalidInterval(String),

    #[error("Parse: cannot parse {input:?} as a hyperbolic number ({reason})")]
    Parse { input: String, reason: String },

    #[error("InvalidFormat: {0}")]
    InvalidFormat(String),

    #[error("OutsideDomain: point {0} is not interior to the function domain")]
    OutsideDomain(String),

    #[error("NonConvergent: {0}")]
    NonConvergent(String),

    #[error("HypothesisViolated: {0}")]
    HypothesisViolated(String),

    #[error("EmptyDomain: {0}")]
    EmptyDomain(String),

    #[error("EmptyDistribution: a distribution needs at least one state")]
    EmptyDistribution,

    #[error("NegativeComponent: entry {index} has component {component} = {value} < 0")]
    NegativeComponent {
        index: usize,
        component: usize,
        value: f64,
    },

    #[error("ComponentExceedsOne: entry {index} has component {component} = {value} > 1")]
    ComponentExceedsOne {
        index: usize,
        component: usize,
        value: f64,
    },

    #[error(
        "SumInvalid: component sums are e1 = {sum1}, e2 = {sum2}; expected 1e1+1e2, 1e1 or 1e2"
    )]
    SumInvalid { sum1: f64, sum2: f64 },

    #[error("SumInvalid: probabilities sum to {0}, expected 1")]
    RealSumInvalid(f64),

    #[error("MixedZeroDivisors: entries {e1_index} (pure e1) and {e2_index} (pure e2) mix zero-divisor forms")]
    MixedZeroDivisors { e1_index: usize, e2_index: usize },

    #[error("CaseMismatch: {0}")]
    CaseMismatch(String),

    #[error("UnsupportedCase: {0}")]
    UnsupportedCase(String),

    #[error("LambdaOutOfRange: mixing weight {0} is outside [0, 1_D]")]
    LambdaOutOfRange(String),

    #[error("BadDelta: delta = {0} must satisfy 0 < delta < 1")]
    BadDelta(f64),

    #[error("BadSize: {0}")]
    BadSize(String),

    #[error("ZeroProbability: state {0} has probability 0")]
    ZeroProbability(usize),

    #[error("ZeroComponent: entry {index} has a zero component")]
    ZeroComponent { index: usize },

    #[error("OrderOne: Rényi order 1 is the Shannon limit; use shannon instead")]
    OrderOne,

    #[error("NegativeOrder: Rényi order {0} is negative")]
    NegativeOrder(f64),

    #[error("NonPositiveOrder: hyperbolic order {0} is not strictly positive")]
    NonPositiveOrder(String),

    #[error(
        "OrderOnZeroDivisorLine: 1_D - {0} is a zero divisor (a component of the order equals 1)"
    )]
    OrderOnZeroDivisorLine(String),

    #[error("DegenerateN: N = {0} is degenerate for this quantity")]
    DegenerateN(usize),

    #[error("LengthMismatch: lengths {0} and {1} differ")]
    LengthMismatch(usize, usize),

    #[error("EmptyGrid: {0}")]
    EmptyGrid(String),
}

impl Error {
    /// Stable identifier used in error rows and diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZeroDivisor(_) => "DivisionByZeroDivisor",
            Error::NonFinite(_) => "NonFinite",
            Error::Domain(_) => "DomainError",
            Error::InvalidInterval(_) => "InvalidInterval",
            Error::Parse { .. } => "Parse",
            Error::InvalidFormat(_) => "InvalidFormat",
            Error::OutsideDomain(_) => "OutsideDomain",
            Error::NonConvergent(_) => "NonConvergent",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::EmptyDomain(_) => "EmptyDomain",
            Error::EmptyDistribution => "EmptyDistribution",
            Error::NegativeComponent { .. } => "NegativeComponent",
            Error::ComponentExceedsOne { .. } => "ComponentExceedsOne",
            Error::SumInvalid { .. } | Error::RealSumInvalid(_) => "SumInvalid",
            Error::MixedZeroDivisors { .. } => "MixedZeroDivisors",
            Error::CaseMismatch(_) => "CaseMismatch",
            Error::UnsupportedCase(_) => "UnsupportedCase",
            Error::LambdaOutOfRange(_) => "LambdaOutOfRange",
            Error::BadDelta(_) => "BadDelta",
            Error::BadSize(_) => "BadSize",
            Error::ZeroProbability(_) => "ZeroProbability",
            Error::ZeroComponent { .. } => "ZeroComponent",
            Error::OrderOne => "OrderOne",
            Error::NegativeOrder(_) => "NegativeOrder",
            Error::NonPositiveOrder(_) => "NonPositiveOrder",
            Error::OrderOnZeroDivisorLine(_) => "OrderOnZeroDivisorLine",
            Error::DegenerateN(_) => "DegenerateN",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::EmptyGrid(_) => "EmptyGrid",
        }
    }

    /// True for errors caused by invalid input data (as opposed to numerical
    /// failure such as non-convergence).
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::NonConvergent(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
