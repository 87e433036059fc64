//! Randomized verification: oracle agreement, the fidelity lower bound and
//! the scheme comparisons.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::{fidelity_pure_mixed, fidelity_pure_pure, fidelity_rank_n_pair, l1_coherence};
use crate::filtering::q_min_filtering;
use crate::mixed::{block_case, neglected_gap, q_min_mixed_mixed, q_min_pure_counterpart, BlockCase};
use crate::model::{FilteringInstance, Instance, PurePairInstance, RankNPairInstance};
use crate::oracle::{verify_instance, VerifyReport};
use crate::pure_pure::{classify_joint, delta_q, q_min_superposed, JointCase};
use crate::result::{FilteringCase, PurePairCase};
use crate::sampling::InstanceSampler;
use crate::tol::EPS_MATCH;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    /// Oracle instances per kind.
    pub count: usize,
    pub seed: u64,
    /// Instances per comparison suite.
    #[serde(default = "default_suite_count")]
    pub suite_count: usize,
    #[serde(default = "default_max_len")]
    pub max_len: usize,
}

fn default_suite_count() -> usize {
    1000
}

fn default_max_len() -> usize {
    8
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            count: 10_000,
            seed: 42,
            suite_count: default_suite_count(),
            max_len: default_max_len(),
        }
    }
}

/// Outcome of one suite. `worst` is the extreme value of `metric` seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub name: String,
    pub metric: String,
    pub total: usize,
    pub passed: usize,
    pub worst: f64,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub spec: VerifySpec,
    pub suites: Vec<SuiteSummary>,
    /// One record per oracle comparison.
    pub reports: Vec<VerifyReport>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteSummary::all_passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteSummary> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// Folds `(metric, pass)` samples; `worst` keeps the maximum unless
/// `minimize` is set.
fn summarize(name: &str, metric: &str, samples: &[(f64, bool)], minimize: bool) -> SuiteSummary {
    let pick = if minimize { f64::min } else { f64::max };
    let init = if minimize { f64::INFINITY } else { f64::NEG_INFINITY };
    SuiteSummary {
        name: name.into(),
        metric: metric.into(),
        total: samples.len(),
        passed: samples.iter().filter(|s| s.1).count(),
        worst: samples.iter().map(|s| s.0).fold(init, pick),
    }
}

fn oracle_suite(name: &str, insts: Vec<Instance>, reports: &mut Vec<VerifyReport>) -> SuiteSummary {
    let batch: Vec<VerifyReport> = insts.par_iter().map(verify_instance).collect();
    let samples: Vec<(f64, bool)> = batch.iter().map(|r| (r.gap, r.pass)).collect();
    reports.extend(batch);
    summarize(name, "abs gap to oracle", &samples, false)
}

/// Bound violation, or distance from equality where equality is expected.
fn bound_sample(q: f64, bound: f64, equality: bool) -> (f64, bool) {
    let excess = if equality { (q - bound).abs() } else { bound - q };
    (excess, excess <= EPS_MATCH)
}

fn fidelity_suite(f: &[FilteringInstance], p: &[PurePairInstance], r: &[RankNPairInstance]) -> SuiteSummary {
    let k = |pr: crate::model::Priors| 2.0 * (pr.p1() * pr.p2()).sqrt();
    let mut samples: Vec<(f64, bool)> = f
        .par_iter()
        .map(|i| {
            let res = q_min_filtering(i);
            let eq = res.filtering_case() == Some(FilteringCase::CaseI);
            bound_sample(res.q_min, k(i.priors()) * fidelity_pure_mixed(i), eq)
        })
        .collect();
    samples.par_extend(p.par_iter().map(|i| {
        let res = q_min_superposed(i);
        let eq = res.pure_pair_case() == Some(PurePairCase::CaseIPrime);
        bound_sample(res.q_min, k(i.priors()) * fidelity_pure_pure(i), eq)
    }));
    samples.par_extend(r.par_iter().map(|i| match q_min_mixed_mixed(i) {
        Ok(res) => {
            let eq = matches!(block_case(i), Ok(BlockCase::AllIdentified));
            bound_sample(res.q_min, k(i.priors()) * fidelity_rank_n_pair(i), eq)
        }
        Err(_) => (f64::NAN, false),
    }));
    summarize("fidelity_bound", "bound excess (or gap at equality)", &samples, false)
}

fn pure_delta(i: &PurePairInstance) -> f64 {
    let mixed = i.mixture();
    delta_q(&q_min_filtering(&mixed), &q_min_superposed(i))
}

fn joint(i: &PurePairInstance) -> JointCase {
    classify_joint(&i.mixture(), i).expect("instance and its mixture agree")
}

/// Generates instances, runs every suite and gathers the oracle reports.
pub fn run_verify(spec: &VerifySpec) -> VerifySummary {
    let sampler = |k: u64| InstanceSampler::with_max_len(spec.seed.wrapping_add(k), spec.max_len);

    let mut g = sampler(0);
    let filtering: Vec<FilteringInstance> = (0..spec.count).map(|_| g.filtering()).collect();
    let mut g = sampler(1);
    let pure: Vec<PurePairInstance> = (0..spec.count).map(|_| g.pure_pair()).collect();
    let mut g = sampler(2);
    let rank_n: Vec<RankNPairInstance> = (0..spec.count).map(|_| g.rank_n()).collect();

    let mut reports = Vec::with_capacity(3 * spec.count);
    let mut suites = vec![
        oracle_suite(
            "oracle_filtering",
            filtering.iter().cloned().map(Instance::Filtering).collect(),
            &mut reports,
        ),
        oracle_suite(
            "oracle_pure_pair",
            pure.iter().cloned().map(Instance::PurePair).collect(),
            &mut reports,
        ),
        oracle_suite(
            "oracle_rank_n",
            rank_n.iter().cloned().map(Instance::RankNPair).collect(),
            &mut reports,
        ),
        fidelity_suite(&filtering, &pure, &rank_n),
    ];

    let n = spec.suite_count;

    // Equal fidelity: superposition never loses.
    let mut g = sampler(3);
    let equal_fidelity: Vec<PurePairInstance> = (0..n)
        .map(|k| {
            if k % 2 == 0 {
                g.equal_fidelity_single()
            } else {
                g.equal_fidelity_quadrature()
            }
        })
        .collect();
    let samples: Vec<(f64, bool)> = equal_fidelity
        .par_iter()
        .map(|i| {
            let d = pure_delta(i);
            (d, d >= -EPS_MATCH)
        })
        .collect();
    suites.push(summarize("equal_fidelity", "min delta_q", &samples, true));

    // Equal phases: superposition never wins outside case (b).
    let mut g = sampler(4);
    let equal_phase: Vec<PurePairInstance> = (0..n).map(|_| g.equal_phase()).collect();
    let samples: Vec<(f64, bool)> = equal_phase
        .par_iter()
        .filter(|i| joint(i) != JointCase::B)
        .map(|i| {
            let d = pure_delta(i);
            (d, d <= EPS_MATCH)
        })
        .collect();
    suites.push(summarize("equal_phase", "max delta_q outside (b)", &samples, false));
    // Case (b) has no sign guarantee; recorded only.
    let samples: Vec<(f64, bool)> = equal_phase
        .par_iter()
        .filter(|i| joint(i) == JointCase::B)
        .map(|i| (pure_delta(i), true))
        .collect();
    suites.push(summarize(
        "equal_phase_case_b",
        "max delta_q in (b), unchecked",
        &samples,
        false,
    ));

    // Uniform overlaps in case (a): Q^2 - Q'^2 = -4 P1 P2 s0^2 C_l1.
    let mut g = sampler(5);
    let uniform: Vec<(PurePairInstance, f64)> = (0..n).map(|_| g.equal_phase_uniform()).collect();
    let samples: Vec<(f64, bool)> = uniform
        .par_iter()
        .filter(|(i, _)| joint(i) == JointCase::A)
        .map(|(i, s0)| {
            let q = q_min_filtering(&i.mixture()).q_min;
            let qp = q_min_superposed(i).q_min;
            let p = i.priors();
            let c = l1_coherence(i.beta()).unwrap_or(f64::NAN);
            let err = (q * q - qp * qp + 4.0 * p.p1() * p.p2() * s0 * s0 * c).abs();
            (err, err <= EPS_MATCH)
        })
        .collect();
    suites.push(summarize(
        "equal_phase_identity",
        "abs identity residual",
        &samples,
        false,
    ));

    // Block-diagonal mixtures: superposition never loses, with an exact gap in (iii).
    let mut g = sampler(6);
    let blocks: Vec<RankNPairInstance> = (0..n).map(|_| g.rank_n()).collect();
    let samples: Vec<(f64, bool)> = blocks
        .par_iter()
        .map(|i| match q_min_mixed_mixed(i) {
            Ok(m) => {
                let d = delta_q(&m, &q_min_pure_counterpart(i));
                (d, d >= -EPS_MATCH)
            }
            Err(_) => (f64::NAN, false),
        })
        .collect();
    suites.push(summarize("rank_n_superposition", "min delta_q", &samples, true));
    let samples: Vec<(f64, bool)> = blocks
        .par_iter()
        .filter(|i| matches!(block_case(i), Ok(BlockCase::MixedSmallSStar)))
        .map(|i| {
            let d = q_min_mixed_mixed(i).map(|m| delta_q(&m, &q_min_pure_counterpart(i)));
            match (d, neglected_gap(i)) {
                (Ok(d), Ok(gap)) => ((d - gap).abs(), (d - gap).abs() <= EPS_MATCH),
                _ => (f64::NAN, false),
            }
        })
        .collect();
    suites.push(summarize("rank_n_gap_identity", "abs gap residual", &samples, false));

    VerifySummary {
        spec: *spec,
        suites,
        reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let s = run_verify(&VerifySpec {
            count: 200,
            seed: 3,
            suite_count: 200,
            max_len: 8,
        });
        for suite in &s.suites {
            assert!(suite.all_passed(), "{suite:?}");
        }
        assert_eq!(s.reports.len(), 600);
        assert!(s.suite("equal_phase_identity").unwrap().total > 0);
        assert!(s.suite("rank_n_gap_identity").unwrap().total > 0);
    }

    #[test]
    fn deterministic() {
        let spec = VerifySpec {
            count: 30,
            seed: 9,
            suite_count: 30,
            max_len: 4,
        };
        assert_eq!(run_verify(&spec), run_verify(&spec));
    }
}
