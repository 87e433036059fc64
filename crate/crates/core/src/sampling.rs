//! Seeded random instances for the verification and comparison suites.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::model::{FilteringInstance, Priors, PurePairInstance, RankNPairInstance};

/// Deterministic generator of valid instances.
///
/// Weights are symmetric Dirichlet(1) draws, overlaps are uniform on
/// `[0, 0.7]` (rescaled when their squares sum to one or more), and phases
/// are uniform on `[0, 2 pi)`.
pub struct InstanceSampler {
    rng: ChaCha8Rng,
    max_len: usize,
}

impl InstanceSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_max_len(seed, 8)
    }

    pub fn with_max_len(seed: u64, max_len: usize) -> Self {
        InstanceSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_len: max_len.max(1),
        }
    }

    fn len(&mut self, min: usize) -> usize {
        self.rng.random_range(min..=self.max_len.max(min))
    }

    fn priors(&mut self) -> Priors {
        Priors::from_p1(self.rng.random_range(0.01..=0.5)).expect("p1 <= 0.5")
    }

    pub fn dirichlet(&mut self, n: usize) -> Vec<f64> {
        let draws: Vec<f64> = (0..n).map(|_| self.rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        draws.iter().map(|x| x / total).collect()
    }

    fn overlaps(&mut self, n: usize) -> Vec<f64> {
        let mut s: Vec<f64> = (0..n).map(|_| self.rng.random_range(0.0..=0.7)).collect();
        let norm_sq: f64 = s.iter().map(|x| x * x).sum();
        if norm_sq >= 1.0 - 1e-9 {
            let target: f64 = self.rng.random_range(0.3..0.999);
            let k = (target / norm_sq).sqrt();
            s.iter_mut().for_each(|x| *x *= k);
        }
        s
    }

    fn phases(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.rng.random_range(0.0..TAU)).collect()
    }

    pub fn filtering(&mut self) -> FilteringInstance {
        let n = self.len(1);
        let (p, beta, s) = (self.priors(), self.dirichlet(n), self.overlaps(n));
        FilteringInstance::new(p, beta, s).expect("sampled filtering instance is valid")
    }

    pub fn pure_pair(&mut self) -> PurePairInstance {
        let base = self.filtering();
        let phases = self.phases(base.len());
        base.superpose(phases).expect("phases match")
    }

    /// Same phase on every component.
    pub fn equal_phase(&mut self) -> PurePairInstance {
        let base = self.filtering();
        let theta = self.rng.random_range(0.0..TAU);
        base.superpose(vec![theta; base.len()]).expect("phases match")
    }

    /// Equal phases with a common overlap `s0` on every component.
    pub fn equal_phase_uniform(&mut self) -> (PurePairInstance, f64) {
        let n = self.len(2);
        let s0 = self.rng.random_range(0.0..0.999) / (n as f64).sqrt();
        let theta = self.rng.random_range(0.0..TAU);
        let (p, beta) = (self.priors(), self.dirichlet(n));
        let inst =
            PurePairInstance::new(p, beta, vec![s0; n], vec![theta; n]).expect("sampled equal-phase instance is valid");
        (inst, s0)
    }

    /// Equal fidelity via a single nonzero overlap `s_1i' = delta_it s`.
    pub fn equal_fidelity_single(&mut self) -> PurePairInstance {
        let n = self.len(1);
        let t = self.rng.random_range(0..n);
        let mut s = vec![0.0; n];
        s[t] = self.rng.random_range(0.0..0.999);
        let (p, beta, phases) = (self.priors(), self.dirichlet(n), self.phases(n));
        PurePairInstance::new(p, beta, s, phases).expect("single-overlap instance is valid")
    }

    /// Equal fidelity via `N = 2` and phases in quadrature.
    pub fn equal_fidelity_quadrature(&mut self) -> PurePairInstance {
        let s = self.overlaps(2);
        let theta = self.rng.random_range(0.0..TAU);
        let sign = if self.rng.random::<bool>() { 1.0 } else { -1.0 };
        let (p, beta) = (self.priors(), self.dirichlet(2));
        PurePairInstance::new(p, beta, s, vec![theta, theta + sign * FRAC_PI_2]).expect("quadrature instance is valid")
    }

    /// Rank-N pair with `P1 alpha_i <= P2 beta_i`; half are symmetric (`alpha = beta`).
    pub fn rank_n(&mut self) -> RankNPairInstance {
        let n = self.len(1);
        let beta = self.dirichlet(n);
        let s: Vec<f64> = (0..n).map(|_| 1.0 - self.rng.random::<f64>()).collect();
        let (alpha, p1) = if self.rng.random::<bool>() {
            (beta.clone(), self.rng.random_range(0.01..=0.5))
        } else {
            let alpha = self.dirichlet(n);
            // Largest P1 with P1 alpha_i <= (1 - P1) beta_i for all i.
            let cap = alpha.iter().zip(&beta).map(|(a, b)| b / (a + b)).fold(0.5f64, f64::min);
            (alpha, self.rng.random_range(0.0..=1.0) * cap * (1.0 - 1e-9))
        };
        let p = Priors::from_p1(p1).expect("p1 <= 0.5");
        RankNPairInstance::new(p, alpha, beta, s).expect("sampled rank-N instance is valid")
    }
}
