//! Coherence measures in the fixed basis `{|Psi_i'>}` and state fidelities.

use crate::error::{Error, Result};
use crate::mixed::counterpart_overlap;
use crate::model::{FilteringInstance, PurePairInstance, RankNPairInstance};
use crate::pure_pure::s_star;
use crate::tol::EPS_SUM;

fn check_normalized(w: &[f64]) -> Result<()> {
    let sum: f64 = w.iter().sum();
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) || (sum - 1.0).abs() > EPS_SUM {
        return Err(Error::Normalization { sum });
    }
    Ok(())
}

/// l1-norm coherence `2 sum_{i>j} sqrt(w_i w_j)` of `sum_i sqrt(w_i)|i>`.
///
/// Evaluated as `(sum_i sqrt(w_i))^2 - 1`, which is linear in the length.
pub fn l1_coherence(weights: &[f64]) -> Result<f64> {
    check_normalized(weights)?;
    let root_sum: f64 = weights.iter().map(|w| w.sqrt()).sum();
    let total: f64 = weights.iter().sum();
    Ok((root_sum * root_sum - total).max(0.0))
}

/// Relative-entropy coherence of a pure superposition, in bits.
///
/// For a pure state this is the Shannon entropy of the weights.
pub fn relative_entropy_coherence(weights: &[f64]) -> Result<f64> {
    check_normalized(weights)?;
    Ok(weights.iter().filter(|w| **w > 0.0).map(|w| w * w.recip().log2()).sum())
}

/// `F(|Psi1><Psi1|, rho2) = sqrt(sum_i beta_i s_1i'^2)`.
pub fn fidelity_pure_mixed(inst: &FilteringInstance) -> f64 {
    inst.weighted_overlap_sq().sqrt()
}

/// `F(|Psi1>, |Psi2>) = |s*|`.
pub fn fidelity_pure_pure(inst: &PurePairInstance) -> f64 {
    s_star(inst).modulus
}

/// `F(rho1, rho2) = sum_i sqrt(alpha_i beta_i) s_ii'`.
pub fn fidelity_rank_n_pair(inst: &RankNPairInstance) -> f64 {
    inst.alpha()
        .iter()
        .zip(inst.beta())
        .zip(inst.diag_overlaps())
        .map(|((a, b), s)| (a * b).sqrt() * s)
        .sum()
}

/// Fidelity of the superposed counterpart of a rank-N pair.
pub fn fidelity_pure_counterpart(inst: &RankNPairInstance) -> f64 {
    counterpart_overlap(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Priors;

    fn pairwise_l1(w: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..w.len() {
            for j in 0..i {
                acc += (w[i] * w[j]).sqrt();
            }
        }
        2.0 * acc
    }

    #[test]
    fn l1_values() {
        assert_eq!(l1_coherence(&[1.0, 0.0]).unwrap(), 0.0);
        assert!((l1_coherence(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        assert!((l1_coherence(&[0.1, 0.9]).unwrap() - 0.6).abs() < 1e-15);
        let w = [0.1, 0.2, 0.3, 0.4];
        assert!((l1_coherence(&w).unwrap() - pairwise_l1(&w)).abs() < 1e-14);
        // Uniform over d outcomes reaches the maximum d - 1.
        assert!((l1_coherence(&[0.25; 4]).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(relative_entropy_coherence(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((relative_entropy_coherence(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        assert!((relative_entropy_coherence(&[0.125; 8]).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn unnormalized_weights_are_rejected() {
        assert!(matches!(l1_coherence(&[0.5, 0.4]), Err(Error::Normalization { .. })));
        assert!(relative_entropy_coherence(&[1.2, -0.2]).is_err());
    }

    #[test]
    fn fidelities() {
        let p = Priors::from_p1(0.15).unwrap();
        let f = FilteringInstance::new(p, vec![0.1, 0.9], vec![0.0, 0.5]).unwrap();
        assert!((fidelity_pure_mixed(&f) - 0.225f64.sqrt()).abs() < 1e-15);
        let f = FilteringInstance::new(p, vec![1.0], vec![0.5]).unwrap();
        assert_eq!(fidelity_pure_mixed(&f), 0.5);

        let r = RankNPairInstance::new(p, vec![0.5, 0.5], vec![0.5, 0.5], vec![0.2, 0.5]).unwrap();
        assert!((fidelity_rank_n_pair(&r) - 0.35).abs() < 1e-15);
        assert_eq!(fidelity_rank_n_pair(&r), fidelity_pure_counterpart(&r));

        let id = RankNPairInstance::new(p, vec![0.3, 0.7], vec![0.3, 0.7], vec![1.0, 1.0]).unwrap();
        assert!((fidelity_rank_n_pair(&id) - 1.0).abs() < 1e-15);
    }
}
