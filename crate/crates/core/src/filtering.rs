//! Pure state versus rank-N mixture (quantum filtering).
//!
//! With `q1 q_i' = s_1i'^2` the failure probability reduces to the scalar
//! problem
//!
//! ```text
//! minimize   Q(q1) = P1 q1 + P2 sum_i beta_i s_1i'^2 / q1
//! subject to sum_i s_1i'^2 <= q1 <= 1
//! ```
//!
//! whose convexity gives a three-branch closed form depending on where the
//! unconstrained minimizer `q1*` falls relative to the interval.

use crate::error::{Error, Result};
use crate::model::FilteringInstance;
use crate::result::{Branch, Certificate, DiscriminationResult, FilteringBranch, FilteringCase};
use crate::tol::EPS_TIE;

/// Unconstrained minimizer `sqrt(P2/P1 * sum_i beta_i s_1i'^2)`.
pub fn q1_star(inst: &FilteringInstance) -> Result<f64> {
    let p = inst.priors();
    if p.p1() == 0.0 {
        return Err(Error::ZeroPrior);
    }
    Ok((p.p2() / p.p1() * inst.weighted_overlap_sq()).sqrt())
}

/// Failure probability at a given `q1` in `(0, 1]`.
pub fn objective(inst: &FilteringInstance, q1: f64) -> Result<f64> {
    if !(q1 > 0.0 && q1 <= 1.0) {
        return Err(Error::Domain { what: "q1", value: q1 });
    }
    let p = inst.priors();
    Ok(p.p1() * q1 + p.p2() * inst.weighted_overlap_sq() / q1)
}

/// Region of the optimum, with boundary ties resolved toward case (i).
pub fn classify(inst: &FilteringInstance) -> FilteringBranch {
    let pn = inst.parallel_norm_sq();
    let c = inst.weighted_overlap_sq();
    let (label, q1_star) = match q1_star(inst) {
        Err(_) => (FilteringCase::CaseIII, f64::INFINITY),
        Ok(q) if c == 0.0 && pn > 0.0 => (FilteringCase::CaseII, q),
        Ok(q) if q > 1.0 + EPS_TIE => (FilteringCase::CaseIII, q),
        Ok(q) if q < pn - EPS_TIE => (FilteringCase::CaseII, q),
        Ok(q) => (FilteringCase::CaseI, q),
    };
    FilteringBranch {
        label,
        q1_star,
        parallel_norm_sq: pn,
    }
}

/// Optimal failure probability for discriminating `|Psi1>` from `rho2`.
pub fn q_min_filtering(inst: &FilteringInstance) -> DiscriminationResult {
    let p = inst.priors();
    let c = inst.weighted_overlap_sq();
    let branch = classify(inst);
    let pn = branch.parallel_norm_sq;
    let q = match branch.label {
        FilteringCase::CaseI => 2.0 * (p.p1() * p.p2() * c).sqrt(),
        FilteringCase::CaseII => p.p1() * pn + p.p2() * c / pn,
        FilteringCase::CaseIII => p.p1() + p.p2() * c,
    };
    let mut result = DiscriminationResult::new(q, Branch::Filtering(branch));
    if c == 0.0 && pn > 0.0 {
        // Every overlapping vector carries zero weight: q1* = 0 and the
        // objective P1 q1 is minimized on the lower end of the interval.
        result.certificate = Some(Certificate {
            argmin_q1: pn,
            objective: q,
            gap: 0.0,
            note: Some("degenerate: weighted overlap vanishes, optimum at q1 = sum s^2".into()),
        });
    }
    result
}
