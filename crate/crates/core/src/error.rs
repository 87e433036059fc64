use std::fmt;

use thiserror::Error;

/// A single violated invariant found while validating an instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A value that must be finite is NaN or infinite.
    NonFinite { field: &'static str, index: usize },
    /// A probability vector does not sum to one.
    WeightSum { field: &'static str, sum: f64 },
    /// A probability vector has a negative entry.
    NegativeWeight {
        field: &'static str,
        index: usize,
        value: f64,
    },
    /// An overlap lies outside `[0, 1]`.
    OverlapRange {
        field: &'static str,
        index: usize,
        value: f64,
    },
    /// `sum_i s_1i'^2` is not strictly below one.
    ParallelNorm { norm_sq: f64 },
    /// A prior is outside `[0, 1]` or the pair does not sum to one.
    PriorSum { p1: f64, p2: f64 },
    /// `P1 > P2`.
    PriorOrder { p1: f64, p2: f64 },
    /// `P1 alpha_i > P2 beta_i` for some pair.
    Dominance { index: usize, lhs: f64, rhs: f64 },
    /// Two per-component vectors have different lengths.
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    /// An instance needs at least one component.
    Empty { field: &'static str },
    /// A field required by the instance kind is absent from the document.
    Missing { field: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { field, index } => {
                write!(f, "{field}[{index}] is not finite")
            }
            Violation::WeightSum { field, sum } => {
                write!(f, "weights in {field} sum to {sum}, expected 1")
            }
            Violation::NegativeWeight { field, index, value } => {
                write!(f, "{field}[{index}] = {value} is negative")
            }
            Violation::OverlapRange { field, index, value } => {
                write!(f, "{field}[{index}] = {value} is outside [0, 1]")
            }
            Violation::ParallelNorm { norm_sq } => {
                write!(f, "sum of squared overlaps is {norm_sq}, must be < 1")
            }
            Violation::PriorSum { p1, p2 } => {
                write!(f, "priors ({p1}, {p2}) are not a probability pair")
            }
            Violation::PriorOrder { p1, p2 } => {
                write!(f, "priors ({p1}, {p2}) violate P1 <= P2")
            }
            Violation::Dominance { index, lhs, rhs } => {
                write!(f, "P1*alpha[{index}] = {lhs} exceeds P2*beta[{index}] = {rhs}")
            }
            Violation::LengthMismatch { field, expected, found } => {
                write!(f, "{field} has length {found}, expected {expected}")
            }
            Violation::Empty { field } => write!(f, "{field} is empty"),
            Violation::Missing { field } => write!(f, "{field} is missing"),
        }
    }
}

/// Validation report listing every violated invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    Invalid(Violations),

    #[error("P1 = 0: the unconstrained filtering optimum is undefined")]
    ZeroPrior,

    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("instances disagree on {0}")]
    Mismatch(&'static str),

    #[error("pair {index}: beta = 0 while alpha > 0")]
    ZeroDenominator { index: usize },

    #[error("weights sum to {sum}, expected 1")]
    Normalization { sum: f64 },

    #[error("binomial amplitude out of range: alpha^2 = {alpha_sq} > N = {n}")]
    Range { alpha_sq: f64, n: usize },

    #[error("tail bound {tail_bound} not reached within {max_terms} terms")]
    Truncation { tail_bound: f64, max_terms: usize },

    #[error("bad sweep specification: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// The violations carried by an [`Error::Invalid`], if any.
    pub fn violations(&self) -> &[Violation] {
        match self {
            Error::Invalid(v) => &v.0,
            _ => &[],
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
