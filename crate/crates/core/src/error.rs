use thiserror::Error;

use crate::model::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance has no bidders")]
    EmptyBidders,

    #[error("supply must be positive, got {0}")]
    NonPositiveSupply(Rational),

    #[error("dummy value must be positive, got {0}")]
    NonPositiveDummy(Rational),

    #[error("bidder `{id}` has non-positive value {value}")]
    NonPositiveValue { id: String, value: Rational },

    #[error("bidder `{id}` has negative budget {budget}")]
    NegativeBudget { id: String, budget: Rational },

    #[error("bidder id `{0}` is reserved for the dummy bidder")]
    ReservedId(String),

    #[error("duplicate bidder id `{0}`")]
    DuplicateId(String),

    #[error("dummy value {dummy} must be strictly below every bidder value (minimum {min_value})")]
    DummyTooLarge { dummy: Rational, min_value: Rational },

    #[error("real bidders hold {money} but need at least {needed} to absorb the supply at the dummy price")]
    InsufficientMoney { money: Rational, needed: Rational },

    #[error("instance is not normalized")]
    Unnormalized,

    #[error("bid profile has {got} entries, instance has {expected} bidders")]
    ProfileLength { expected: usize, got: usize },

    #[error("invalid bid profile: {0:?}")]
    InvalidProfile(Vec<crate::model::Violation>),

    #[error("no clearing point: demand at the full budget is {demand}, supply is {supply}")]
    NoClearing { demand: Rational, supply: Rational },

    #[error("indivisible allocation needs a positive integer supply, got {0}")]
    NonIntegerSupply(Rational),

    #[error(
        "no exact indivisible clearing: {units_low} units at x = {x_low}, {units_high} units at x = {x_high}"
    )]
    NoIndivisibleClearing {
        x_low: Rational,
        x_high: Rational,
        units_low: Rational,
        units_high: Rational,
        allocation_low: Vec<Rational>,
        allocation_high: Vec<Rational>,
    },

    #[error("cut point {x} outside [0, {total}]")]
    CutOutOfRange { x: Rational, total: Rational },

    #[error("bidder {bidder} is ranked below the boundary and has no price ladder")]
    NoLadder { bidder: usize },

    #[error("bidder index {index} out of range for {len} bidders")]
    BidderIndex { index: usize, len: usize },

    #[error("budget reduction {eps} must lie in [0, {budget}]")]
    InvalidReduction { eps: Rational, budget: Rational },
}
