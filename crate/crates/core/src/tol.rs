//! Shared numeric tolerances.
//!
//! Every comparison in the crate goes through one of these constants so that
//! tests and callers can refer to the same thresholds.

/// Absolute tolerance for normalization checks (probability sums, priors).
pub const EPS_SUM: f64 = 1e-12;

/// Absolute tolerance for agreement between a closed form and the oracle.
pub const EPS_MATCH: f64 = 1e-9;

/// Width of the band around a region boundary that is treated as a tie.
pub const EPS_TIE: f64 = 1e-12;

/// Default tail mass left out when truncating infinite weight families.
pub const DEFAULT_TAIL_BOUND: f64 = 1e-12;

/// Hard cap on the number of retained terms of a truncated family.
pub const MAX_TERMS: usize = 4096;
