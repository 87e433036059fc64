//! Two rank-N mixtures with one-to-one overlapping eigenvectors.
//!
//! The overlap structure splits the problem into `N` independent
//! two-dimensional pairs `{|Psi_i>, |Psi_i'>}` with unnormalized priors
//! `(P1 alpha_i, P2 beta_i)`; the optimum is the sum of the per-pair optima.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::RankNPairInstance;
use crate::pure_pure::q_min_pure_pure;
use crate::result::{Branch, DiscriminationResult, PairBranch, PairRegime};
use crate::tol::EPS_TIE;

fn pair_branch(index: usize, p1: f64, p2: f64, alpha: f64, beta: f64, s: f64) -> Result<PairBranch> {
    if alpha == 0.0 && beta == 0.0 {
        return Ok(PairBranch {
            index,
            branch: PairRegime::Identified,
            contribution: 0.0,
        });
    }
    if beta == 0.0 {
        return Err(Error::ZeroDenominator { index });
    }
    let (a, b) = (p1 * alpha, p2 * beta);
    let threshold = (a / b).sqrt();
    Ok(if s <= threshold + EPS_TIE {
        PairBranch {
            index,
            branch: PairRegime::Identified,
            contribution: 2.0 * (a * b).sqrt() * s,
        }
    } else {
        PairBranch {
            index,
            branch: PairRegime::Neglected,
            contribution: a + b * s * s,
        }
    })
}

/// Per-pair branches in index order.
pub fn pair_branches(inst: &RankNPairInstance) -> Result<Vec<PairBranch>> {
    let p = inst.priors();
    inst.alpha()
        .iter()
        .zip(inst.beta())
        .zip(inst.diag_overlaps())
        .enumerate()
        .map(|(i, ((a, b), s))| pair_branch(i, p.p1(), p.p2(), *a, *b, *s))
        .collect()
}

/// Optimal failure probability for `rho1` versus `rho2`.
pub fn q_min_mixed_mixed(inst: &RankNPairInstance) -> Result<DiscriminationResult> {
    let pairs = pair_branches(inst)?;
    let q = pairs.iter().map(|p| p.contribution).sum();
    let identified = pairs.iter().filter(|p| p.branch == PairRegime::Identified).count();
    Ok(DiscriminationResult::new(q, Branch::MixedMixed { pairs, identified }))
}

/// `s* = sum_i sqrt(alpha_i beta_i) s_ii'` of the superposed counterparts.
pub fn counterpart_overlap(inst: &RankNPairInstance) -> f64 {
    inst.alpha()
        .iter()
        .zip(inst.beta())
        .zip(inst.diag_overlaps())
        .map(|((a, b), s)| (a * b).sqrt() * s)
        .sum()
}

/// Optimum for the pure states `sum sqrt(alpha_i)|Psi_i>` and `sum sqrt(beta_i)|Psi_i'>`.
pub fn q_min_pure_counterpart(inst: &RankNPairInstance) -> DiscriminationResult {
    // Cauchy-Schwarz bounds s* by 1; clamp rounding.
    let s = counterpart_overlap(inst).min(1.0);
    q_min_pure_pure(inst.priors(), s).expect("s* in [0, 1]")
}

/// Case split used when comparing the mixed and superposed schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockCase {
    /// (i) every pair identified.
    AllIdentified,
    /// (ii) every pair neglected.
    AllNeglected,
    /// (iii) mixed regimes and `s* <= sqrt(P1/P2)`.
    MixedSmallSStar,
    /// (iv) mixed regimes and `s* > sqrt(P1/P2)`.
    MixedLargeSStar,
}

impl BlockCase {
    pub fn label(self) -> &'static str {
        match self {
            BlockCase::AllIdentified => "i",
            BlockCase::AllNeglected => "ii",
            BlockCase::MixedSmallSStar => "iii",
            BlockCase::MixedLargeSStar => "iv",
        }
    }
}

/// Classifies an instance; pairs absent from both states are ignored.
pub fn block_case(inst: &RankNPairInstance) -> Result<BlockCase> {
    let pairs = pair_branches(inst)?;
    let present = |p: &&PairBranch| inst.alpha()[p.index] > 0.0 || inst.beta()[p.index] > 0.0;
    let mut identified = 0;
    let mut neglected = 0;
    for p in pairs.iter().filter(present) {
        match p.branch {
            PairRegime::Identified => identified += 1,
            PairRegime::Neglected => neglected += 1,
        }
    }
    let p = inst.priors();
    Ok(match (identified, neglected) {
        (_, 0) => BlockCase::AllIdentified,
        (0, _) => BlockCase::AllNeglected,
        _ if counterpart_overlap(inst) <= (p.p1() / p.p2()).sqrt() + EPS_TIE => BlockCase::MixedSmallSStar,
        _ => BlockCase::MixedLargeSStar,
    })
}

/// `sum over neglected pairs of (sqrt(P1 alpha_i) - sqrt(P2 beta_i) s_ii')^2`,
/// the gap between the schemes in case (iii).
pub fn neglected_gap(inst: &RankNPairInstance) -> Result<f64> {
    let p = inst.priors();
    Ok(pair_branches(inst)?
        .iter()
        .filter(|b| b.branch == PairRegime::Neglected)
        .map(|b| {
            let i = b.index;
            let d = (p.p1() * inst.alpha()[i]).sqrt() - (p.p2() * inst.beta()[i]).sqrt() * inst.diag_overlaps()[i];
            d * d
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Priors;
    use crate::result::PurePairCase;

    fn inst(p1: f64, a: &[f64], b: &[f64], s: &[f64]) -> RankNPairInstance {
        RankNPairInstance::new(Priors::from_p1(p1).unwrap(), a.to_vec(), b.to_vec(), s.to_vec()).unwrap()
    }

    #[test]
    fn symmetric_half() {
        let i = inst(0.5, &[0.5, 0.5], &[0.5, 0.5], &[0.5, 0.5]);
        let r = q_min_mixed_mixed(&i).unwrap();
        assert!((r.q_min - 0.5).abs() < 1e-15);
        assert!(r.pairs().iter().all(|p| p.branch == PairRegime::Identified));
        let c = q_min_pure_counterpart(&i);
        assert_eq!(counterpart_overlap(&i), 0.5);
        assert!((c.q_min - 0.5).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_supports() {
        let i = inst(0.3, &[0.2, 0.8], &[0.4, 0.6], &[0.0, 0.0]);
        assert_eq!(q_min_mixed_mixed(&i).unwrap().q_min, 0.0);
        assert_eq!(q_min_pure_counterpart(&i).q_min, 0.0);
    }

    // 40-digit references:
    //   pair 1   0.07141428428542849997999399811367265
    //   total    0.25266428428542849997999399811367265
    //   Q'       0.24994999499899974992997899339785428
    //   dQ       0.00271428928642875005001500471581837
    #[test]
    fn mixed_thresholds() {
        let i = inst(0.15, &[0.5, 0.5], &[0.5, 0.5], &[0.2, 0.5]);
        let r = q_min_mixed_mixed(&i).unwrap();
        let pairs = r.pairs();
        assert_eq!(pairs[0].branch, PairRegime::Identified);
        assert!((pairs[0].contribution - 0.071_414_284_285_428_5).abs() < 1e-15);
        assert_eq!(pairs[1].branch, PairRegime::Neglected);
        assert!((pairs[1].contribution - 0.18125).abs() < 1e-15);
        assert!((r.q_min - 0.252_664_284_285_428_5).abs() < 1e-15);
        match r.branch {
            Branch::MixedMixed { identified, .. } => assert_eq!(identified, 1),
            _ => unreachable!(),
        }

        let c = q_min_pure_counterpart(&i);
        assert_eq!(c.pure_pair_case(), Some(PurePairCase::CaseIPrime));
        assert!((c.q_min - 0.249_949_994_998_999_75).abs() < 1e-15);
        assert_eq!(block_case(&i).unwrap(), BlockCase::MixedSmallSStar);
        let dq = r.q_min - c.q_min;
        assert!((dq - 0.002_714_289_286_428_75).abs() < 1e-15);
        assert!((neglected_gap(&i).unwrap() - dq).abs() < 1e-15);
    }

    #[test]
    fn all_identified_has_no_gap() {
        let i = inst(0.3, &[0.2, 0.3, 0.5], &[0.2, 0.3, 0.5], &[0.1, 0.2, 0.3]);
        assert_eq!(block_case(&i).unwrap(), BlockCase::AllIdentified);
        let dq = q_min_mixed_mixed(&i).unwrap().q_min - q_min_pure_counterpart(&i).q_min;
        assert!(dq.abs() < 1e-15);
    }

    #[test]
    fn all_neglected_saturates_when_ratio_is_constant() {
        // alpha_i / (beta_i s_i^2) constant: alpha = (0.5, 0.5), s = (0.8, 0.6),
        // beta proportional to alpha / s^2.
        let s = [0.8f64, 0.6];
        let raw: Vec<f64> = s.iter().map(|x| 0.5 / (x * x)).collect();
        let total: f64 = raw.iter().sum();
        let beta: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let i = inst(0.1, &[0.5, 0.5], &beta, &s);
        assert_eq!(block_case(&i).unwrap(), BlockCase::AllNeglected);
        let dq = q_min_mixed_mixed(&i).unwrap().q_min - q_min_pure_counterpart(&i).q_min;
        assert!(dq.abs() < 1e-15, "{dq}");
    }

    #[test]
    fn absent_alpha_component() {
        let i = inst(0.3, &[0.0, 1.0], &[0.5, 0.5], &[0.4, 0.1]);
        let pairs = pair_branches(&i).unwrap();
        assert_eq!(pairs[0].branch, PairRegime::Neglected);
        assert!((pairs[0].contribution - 0.7 * 0.5 * 0.16).abs() < 1e-15);
        let i = inst(0.3, &[0.0, 1.0], &[0.5, 0.5], &[0.0, 0.1]);
        assert_eq!(pair_branches(&i).unwrap()[0].contribution, 0.0);
    }

    #[test]
    fn zero_beta_with_positive_alpha() {
        // Only reachable with P1 = 0, where the dominance check cannot fire.
        let i = RankNPairInstance::new(
            Priors::new(0.0, 1.0).unwrap(),
            vec![0.5, 0.5],
            vec![0.0, 1.0],
            vec![0.3, 0.3],
        )
        .unwrap();
        assert!(matches!(
            q_min_mixed_mixed(&i),
            Err(Error::ZeroDenominator { index: 0 })
        ));
    }
}
