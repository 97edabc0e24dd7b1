use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::point::Point;

/// Nonnegative combination of moves that is componentwise <= 0, proving that
/// no positivity functional exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityWitness {
    /// `(index into the move list, weight)`, weights positive and summing to 1.
    pub weights: Vec<(usize, BigRational)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector in rule set at index {0}")]
    ZeroMove(usize),

    #[error("duplicate move {0}")]
    DuplicateMove(Point<BigInt>),

    #[error("no positivity functional exists; moves {:?} admit a nonpositive combination", .0.weights.iter().map(|(i, _)| *i).collect::<Vec<_>>())]
    PositivityInfeasible(PositivityWitness),

    #[error("tangent cone axiom fails on coordinate {0}")]
    TangentConeViolation(usize),

    #[error("supplied positivity certificate is invalid: {0}")]
    BadCertificate(String),

    #[error("defeated set is not an order ideal: {0} lies below it but outside it")]
    NotAnOrderIdeal(Point<BigInt>),

    #[error("defeated position {0} is not in N^d")]
    DefeatedOutsideOrthant(Point<BigInt>),

    #[error("negative bound")]
    NegativeBound,

    #[error("region too large for in-memory solving ({0} positions)")]
    RegionTooLarge(u128),

    #[error("{0} is not an N-position of this solution")]
    NotAnNPosition(Point<BigInt>),

    #[error("solution bound {have} does not cover required bound {need}")]
    BoundTooSmall { have: Box<BigRational>, need: Box<BigRational> },

    #[error("position {0} is not on the game board")]
    NotOnBoard(Point<BigInt>),

    #[error("zero lies in the mod-2 reduction of the rule set")]
    ZeroInGamma2,

    #[error("pattern dimension {0} is too large")]
    PatternDimension(usize),

    #[error("rule set is not squarefree")]
    NotSquarefree,

    #[error("game is not normal play")]
    NotNormalPlay,

    #[error("no mod-2 periodic solution exists for this rule set")]
    NoPeriodicSolution,

    #[error("zero vector in strategy denominator")]
    ZeroDenominatorVector,

    #[error("negative exponent {0} in strategy")]
    NegativeExponent(Point<BigInt>),

    #[error("stratification part {0} is invalid: {1}")]
    InvalidPart(usize, String),

    #[error("generators of part {0} are linearly dependent")]
    DependentGenerators(usize),

    #[error("translates {f} and {g} of part {part} overlap at {witness}")]
    OverlappingTranslates { part: usize, f: Point<BigInt>, g: Point<BigInt>, witness: Point<BigInt> },

    #[error("option relation has a cycle through node {0}")]
    CyclicOptionRelation(usize),

    #[error("game tree is empty")]
    EmptyTree,

    #[error("option index {0} out of range")]
    BadOption(usize),

    #[error("no general rational strategy construction for this game")]
    NoStrategyConstruction,
}

impl Error {
    /// Distinct process exit code per failure kind.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::DimensionMismatch { .. } => 3,
            Error::ZeroMove(_) => 4,
            Error::DuplicateMove(_) => 5,
            Error::PositivityInfeasible(_) => 6,
            Error::TangentConeViolation(_) => 7,
            Error::BadCertificate(_) => 8,
            Error::NotAnOrderIdeal(_) => 9,
            Error::DefeatedOutsideOrthant(_) => 10,
            Error::NegativeBound => 11,
            Error::RegionTooLarge(_) => 12,
            Error::NotAnNPosition(_) => 13,
            Error::BoundTooSmall { .. } => 14,
            Error::NotOnBoard(_) => 15,
            Error::ZeroInGamma2 => 16,
            Error::PatternDimension(_) => 17,
            Error::NotSquarefree => 18,
            Error::NotNormalPlay => 19,
            Error::NoPeriodicSolution => 20,
            Error::ZeroDenominatorVector => 21,
            Error::NegativeExponent(_) => 22,
            Error::InvalidPart(..) => 23,
            Error::DependentGenerators(_) => 24,
            Error::OverlappingTranslates { .. } => 25,
            Error::CyclicOptionRelation(_) => 26,
            Error::EmptyTree => 27,
            Error::BadOption(_) => 28,
            Error::NoStrategyConstruction => 29,
        }
    }

    /// Short stable identifier, used as the machine-parsable reason.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroMove(_) => "ZeroMove",
            Error::DuplicateMove(_) => "DuplicateMove",
            Error::PositivityInfeasible(_) => "PositivityInfeasible",
            Error::TangentConeViolation(_) => "TangentConeViolation",
            Error::BadCertificate(_) => "BadCertificate",
            Error::NotAnOrderIdeal(_) => "NotAnOrderIdeal",
            Error::DefeatedOutsideOrthant(_) => "DefeatedOutsideOrthant",
            Error::NegativeBound => "NegativeBound",
            Error::RegionTooLarge(_) => "RegionTooLarge",
            Error::NotAnNPosition(_) => "NotAnNPosition",
            Error::BoundTooSmall { .. } => "BoundTooSmall",
            Error::NotOnBoard(_) => "NotOnBoard",
            Error::ZeroInGamma2 => "ZeroInGamma2",
            Error::PatternDimension(_) => "PatternDimension",
            Error::NotSquarefree => "NotSquarefree",
            Error::NotNormalPlay => "NotNormalPlay",
            Error::NoPeriodicSolution => "NoPeriodicSolution",
            Error::ZeroDenominatorVector => "ZeroDenominatorVector",
            Error::NegativeExponent(_) => "NegativeExponent",
            Error::InvalidPart(..) => "InvalidPart",
            Error::DependentGenerators(_) => "DependentGenerators",
            Error::OverlappingTranslates { .. } => "OverlappingTranslates",
            Error::CyclicOptionRelation(_) => "CyclicOptionRelation",
            Error::EmptyTree => "EmptyTree",
            Error::BadOption(_) => "BadOption",
            Error::NoStrategyConstruction => "NoStrategyConstruction",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
