//! Pure state versus a coherent superposition of the mixture's vectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtering;
use crate::model::{FilteringInstance, Priors, PurePairInstance};
use crate::result::{Branch, DiscriminationResult, FilteringCase, PurePairCase};
use crate::tol::EPS_TIE;

/// Effective overlap `<Psi1|Psi2>` of the two pure states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SStar {
    pub value: Complex64,
    pub modulus: f64,
}

/// `s* = sum_i sqrt(beta_i) s_1i' e^{i theta_i}`.
pub fn s_star(inst: &PurePairInstance) -> SStar {
    let value: Complex64 = inst
        .beta()
        .iter()
        .zip(inst.overlaps())
        .zip(inst.phases())
        .map(|((b, s), th)| Complex64::from_polar(b.sqrt() * s, *th))
        .sum();
    // |s*| <= sqrt(sum beta s^2) < 1 analytically; clamp rounding only.
    SStar {
        value,
        modulus: value.norm().min(1.0),
    }
}

/// Optimal failure probability for two pure states with overlap modulus `abs_s_star`.
pub fn q_min_pure_pure(priors: Priors, abs_s_star: f64) -> Result<DiscriminationResult> {
    if !(0.0..=1.0).contains(&abs_s_star) {
        return Err(Error::Domain {
            what: "|s*|",
            value: abs_s_star,
        });
    }
    let (p1, p2) = (priors.p1(), priors.p2());
    let threshold = (p1 / p2).sqrt();
    let (case, q) = if abs_s_star <= threshold + EPS_TIE {
        (PurePairCase::CaseIPrime, 2.0 * (p1 * p2).sqrt() * abs_s_star)
    } else {
        (PurePairCase::CaseIIPrime, p1 + p2 * abs_s_star * abs_s_star)
    };
    Ok(DiscriminationResult::new(q, Branch::PurePair(case)))
}

/// Convenience wrapper computing `s*` from the instance first.
pub fn q_min_superposed(inst: &PurePairInstance) -> DiscriminationResult {
    q_min_pure_pure(inst.priors(), s_star(inst).modulus).expect("|s*| of a validated instance lies in [0, 1]")
}

/// Joint region of the filtering and pure-pair optima.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointCase {
    /// (i') and (i)
    A,
    /// (i') and (ii)
    B,
    /// (ii') and (i)
    C,
    /// (ii') and (ii)
    D,
    /// (ii') and (iii)
    E,
    /// (i') and (iii). Unreachable with equal phases or equal fidelity;
    /// phases that make `|s*|^2 < sum beta s^2` can land here.
    Empty,
}

impl JointCase {
    pub fn label(self) -> &'static str {
        match self {
            JointCase::A => "a",
            JointCase::B => "b",
            JointCase::C => "c",
            JointCase::D => "d",
            JointCase::E => "e",
            JointCase::Empty => "empty",
        }
    }

    pub fn from_cases(filter: FilteringCase, pure: PurePairCase) -> Self {
        use FilteringCase::*;
        use PurePairCase::*;
        match (pure, filter) {
            (CaseIPrime, CaseI) => JointCase::A,
            (CaseIPrime, CaseII) => JointCase::B,
            (CaseIIPrime, CaseI) => JointCase::C,
            (CaseIIPrime, CaseII) => JointCase::D,
            (CaseIIPrime, CaseIII) => JointCase::E,
            (CaseIPrime, CaseIII) => JointCase::Empty,
        }
    }
}

/// Which of the five joint cases the shared overlap vector falls in.
pub fn classify_joint(filter_inst: &FilteringInstance, pair_inst: &PurePairInstance) -> Result<JointCase> {
    if filter_inst.priors() != pair_inst.priors() {
        return Err(Error::Mismatch("priors"));
    }
    if filter_inst.beta() != pair_inst.beta() {
        return Err(Error::Mismatch("beta"));
    }
    if filter_inst.overlaps() != pair_inst.overlaps() {
        return Err(Error::Mismatch("overlaps"));
    }
    let filter = filtering::classify(filter_inst).label;
    let pure = q_min_superposed(pair_inst).pure_pair_case().expect("pure-pair branch");
    Ok(JointCase::from_cases(filter, pure))
}

/// `sum_{i>j} sqrt(beta_i beta_j) s_1i' s_1j' cos(theta_i - theta_j)`.
///
/// Vanishes exactly when the pure-mixed and pure-pure fidelities coincide.
pub fn equal_fidelity_residual(inst: &PurePairInstance) -> f64 {
    let (b, s, th) = (inst.beta(), inst.overlaps(), inst.phases());
    let mut acc = 0.0;
    for i in 1..b.len() {
        for j in 0..i {
            acc += (b[i] * b[j]).sqrt() * s[i] * s[j] * (th[i] - th[j]).cos();
        }
    }
    acc
}

/// `Q_min - Q'_min`: positive when the superposed scheme fails less often.
pub fn delta_q(mixed: &DiscriminationResult, pure: &DiscriminationResult) -> f64 {
    mixed.q_min - pure.q_min
}
