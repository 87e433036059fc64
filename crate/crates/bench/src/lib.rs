//! Fixed instances shared by the benchmarks.

use usdisc_core::{FilteringInstance, Priors, PurePairInstance, RankNPairInstance};

pub fn filtering(n: usize) -> FilteringInstance {
    let beta = vec![1.0 / n as f64; n];
    let s = vec![0.9 / (n as f64).sqrt(); n];
    FilteringInstance::new(Priors::from_p1(0.15).unwrap(), beta, s).unwrap()
}

pub fn pure_pair(n: usize) -> PurePairInstance {
    let phases = (0..n).map(|i| i as f64 * 0.7).collect();
    filtering(n).superpose(phases).unwrap()
}

pub fn rank_n(n: usize) -> RankNPairInstance {
    let w = vec![1.0 / n as f64; n];
    let s = (0..n).map(|i| if i < n / 2 { 0.5 } else { 0.2 }).collect();
    RankNPairInstance::new(Priors::from_p1(0.15).unwrap(), w.clone(), w, s).unwrap()
}
