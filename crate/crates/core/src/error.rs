use thiserror::Error;

use crate::repfn::IntSet;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("rule produced an empty set")]
    EmptySet,
    #[error("sets must contain positive integers only")]
    NonPositive,
    #[error("element {0} exceeds the supported range")]
    TooLarge(u64),
    #[error("interval has lo = {lo} > hi = {hi}")]
    InvertedInterval { lo: u64, hi: u64 },
    #[error("table index {0:?} is not a nonnegative decimal integer")]
    BadIndex(String),
    #[error("necessary condition card(H_{n}) ∈ R_{n} fails: card(H_{n}) = {card}")]
    SmallIndex { n: u64, card: u64 },
    #[error("a seed set is only meaningful when start_index > 0")]
    SeedInFullMode,
    #[error("seed set must be nonempty")]
    EmptySeed,
    #[error("invalid integer set: {0}")]
    BadSet(String),
    #[error("bad preset {0}")]
    BadPreset(String),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enumeration of {0} tuples exceeds the oracle guard")]
    TupleGuard(u128),
    #[error("subset sweep up to {0} exceeds the oracle guard (max 24)")]
    SubsetGuard(u64),
}

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("the root has no parent")]
    ParentOfRoot,
    #[error(
        "no bound on children of {set:?} within {scanned} candidates; \
         max(H_n)/n does not appear to tend to 0, so the tree may have infinite degree"
    )]
    BoundCap { set: IntSet, scanned: u64 },
    #[error("{set:?} is not a finite R-basis: {reason}")]
    InvalidVertex { set: IntSet, reason: String },
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("checkpoint was written for a different configuration (digest {found}, expected {expected})")]
    DigestMismatch { expected: String, found: String },
    #[error("invalid checkpoint: {0}")]
    BadCheckpoint(String),
}
