//! Unambiguous discrimination of pure and mixed quantum states.
//!
//! Closed-form optimal failure probabilities for three settings (a pure state
//! against a rank-N mixture, two superposed pure states, and two rank-N
//! mixtures with pairwise-overlapping eigenvectors), a brute-force oracle to
//! check them, photon-number weight families, and the sweeps that compare the
//! mixed and superposed schemes as a function of coherence.
//!
//! ```
//! use usdisc_core::{q_min_filtering, FilteringCase, FilteringInstance, Priors};
//!
//! let p = Priors::new(0.15, 0.85).unwrap();
//! let inst = FilteringInstance::new(p, vec![0.1, 0.9], vec![0.0, 0.5]).unwrap();
//! let r = q_min_filtering(&inst);
//! assert_eq!(r.filtering_case(), Some(FilteringCase::CaseIII));
//! assert_eq!(r.q_min, 0.34125);
//! ```

pub mod coherence;
pub mod distributions;
pub mod error;
pub mod export;
pub mod filtering;
pub mod mixed;
pub mod model;
pub mod oracle;
pub mod pure_pure;
pub mod result;
pub mod sampling;
pub mod suites;
pub mod sweep;
pub mod tol;

pub use coherence::{
    fidelity_pure_counterpart, fidelity_pure_mixed, fidelity_pure_pure, fidelity_rank_n_pair, l1_coherence,
    relative_entropy_coherence,
};
pub use distributions::{binomial_weights, poisson_weights, squeezed_weights, Family, PhotonDistribution, Truncation};
pub use error::{Error, Result, Violation, Violations};
pub use filtering::{q1_star, q_min_filtering};
pub use mixed::{block_case, neglected_gap, q_min_mixed_mixed, q_min_pure_counterpart, BlockCase};
pub use model::{FilteringInstance, Instance, InstanceDoc, Priors, PurePairInstance, RankNPairInstance, Validate};
pub use oracle::{minimize_filtering, minimize_rank_n, minimize_two_pure, verify_instance, VerifyReport};
pub use pure_pure::{
    classify_joint, delta_q, equal_fidelity_residual, q_min_pure_pure, q_min_superposed, s_star, JointCase,
};
pub use result::{Branch, Certificate, DiscriminationResult, FilteringCase, PairBranch, PairRegime, PurePairCase};
pub use suites::{run_verify, SuiteSummary, VerifySpec, VerifySummary};
pub use sweep::{Curve, CurveRow, RegionMap, SweepOutput, SweepRange, SweepSpec};
