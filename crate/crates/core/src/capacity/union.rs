use serde::{Deserialize, Serialize};

use crate::domain::CompactSet;
use crate::error::{Error, Result};

use super::{piece_log_capacity_bounds, LogCapacity};

/// Two-sided information on `ln cap(∪ E_j)`.
///
/// `lower` is the largest part (monotonicity). `upper_proxy` is the
/// reciprocal-log combination `-1 / ∑_j 1/(-ln cap E_j)`, an upper bound for
/// unions of diameter at most one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnionBounds {
    pub lower: LogCapacity,
    pub upper_proxy: LogCapacity,
    /// `∑_j 1/(-ln cap E_j)`.
    pub reciprocal_sum: f64,
}

impl UnionBounds {
    pub fn polar() -> Self {
        UnionBounds {
            lower: LogCapacity::polar(),
            upper_proxy: LogCapacity::polar(),
            reciprocal_sum: 0.0,
        }
    }
}

pub fn union_log_capacity(parts: &[LogCapacity]) -> Result<UnionBounds> {
    bounds_from(parts.iter().map(|&c| (c, c)))
}

/// Closed-form union bounds for all pieces of a compact set.
pub fn set_union_bounds(set: &CompactSet) -> Result<UnionBounds> {
    bounds_from(set.pieces.iter().map(piece_log_capacity_bounds))
}

fn bounds_from(parts: impl Iterator<Item = (LogCapacity, LogCapacity)>) -> Result<UnionBounds> {
    let mut lower = LogCapacity::polar();
    let mut recip = 0.0;
    for (lo, hi) in parts {
        if hi.log_value() >= 0.0 {
            return Err(Error::BoundRegime(hi.log_value()));
        }
        if lo.log_value() > lower.log_value() {
            lower = lo;
        }
        recip += hi.reciprocal_log();
    }
    // -1/(1/x) can round below x for a single part
    let upper_proxy = if recip > 0.0 {
        LogCapacity::new((-1.0 / recip).max(lower.log_value()))
    } else {
        LogCapacity::polar()
    };
    Ok(UnionBounds {
        lower,
        upper_proxy,
        reciprocal_sum: recip,
    })
}
