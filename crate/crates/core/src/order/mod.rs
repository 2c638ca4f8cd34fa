//! Order curves, rank oracles and search over implicitly ordered code families.
//!
//! A [`RankOracle`] answers "how many codes lie below `v`" without sorting the
//! family. Reading the code at a given rank ([`RankedDomain::select`]) is a
//! binary search over values against that count, and [`order_search`] is a
//! binary search over ranks on top of it.

mod count;
mod curve;
mod oracle;

use thiserror::Error;

use crate::codes::CodeError;
use crate::numeric::NumericError;

pub use count::{count_coprime, totient_formula};
pub use curve::{
    finite_differences, is_compact_order, order_curve, order_curve_lcodes, order_curve_of,
    CurveEntry, OrderCurve, Preimage,
};
pub use oracle::{
    linear_scan, order_search, sort_then_search, Probe, RankOracle, RankedDomain, SearchOutcome,
    Selected, Strategy, DEFAULT_BUDGET, MAX_RANK_LENGTH,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("empty code domain")]
    EmptyDomain,
    #[error("rank {rank} outside a domain of {size} codes")]
    RankOutOfRange { rank: u64, size: u64 },
    #[error("inconsistent rank oracle: {0}")]
    CorruptOracle(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Code(#[from] CodeError),
}
