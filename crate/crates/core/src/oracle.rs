//! Brute-force cross-checks for every closed-form optimum.
//!
//! Each reduction ends in a one-dimensional convex problem on an interval,
//! minimized here by a coarse grid followed by golden-section refinement.
//! The objectives are rebuilt from the raw instance fields so that no code
//! is shared with the closed forms being checked.

use serde::{Deserialize, Serialize};

use crate::filtering::q_min_filtering;
use crate::mixed::q_min_mixed_mixed;
use crate::model::{FilteringInstance, Instance, InstanceDoc, RankNPairInstance};
use crate::pure_pure::{q_min_pure_pure, s_star};
use crate::result::{Certificate, DiscriminationResult};
use crate::tol::EPS_MATCH;

/// Coarse grid size before refinement.
pub const GRID_POINTS: usize = 10_000;

/// Final bracket width of the golden-section refinement.
pub const GOLDEN_WIDTH: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalMin {
    pub argmin: f64,
    pub value: f64,
}

fn better(a: IntervalMin, b: IntervalMin) -> IntervalMin {
    if b.value < a.value {
        b
    } else {
        a
    }
}

/// Golden-section search for a unimodal `f` on `[lo, hi]`.
pub fn golden_section(f: impl Fn(f64) -> f64, lo: f64, hi: f64, width: f64) -> IntervalMin {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        // Guard against a stalled bracket at the resolution of f64.
        if c >= d {
            break;
        }
    }
    let ends = better(
        IntervalMin {
            argmin: lo,
            value: f(lo),
        },
        IntervalMin {
            argmin: hi,
            value: f(hi),
        },
    );
    let inner = better(
        IntervalMin { argmin: c, value: fc },
        IntervalMin { argmin: d, value: fd },
    );
    better(ends, inner)
}

/// Grid scan over `points` nodes, then golden-section on the best cell pair.
pub fn grid_minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> IntervalMin {
    assert!(points >= 2 && lo <= hi);
    if hi - lo <= GOLDEN_WIDTH {
        return IntervalMin {
            argmin: lo,
            value: f(lo),
        };
    }
    let step = (hi - lo) / (points - 1) as f64;
    let node = |k: usize| if k == points - 1 { hi } else { lo + k as f64 * step };
    let (mut best_k, mut best) = (0, f64::INFINITY);
    for k in 0..points {
        let v = f(node(k));
        if v < best {
            best = v;
            best_k = k;
        }
    }
    let a = node(best_k.saturating_sub(1));
    let b = node((best_k + 1).min(points - 1));
    better(
        IntervalMin {
            argmin: node(best_k),
            value: best,
        },
        golden_section(&f, a, b, GOLDEN_WIDTH),
    )
}

/// Minimizes `P1 q1 + P2 sum beta s^2 / q1` over `[sum s^2, 1]`.
pub fn minimize_filtering(inst: &FilteringInstance) -> IntervalMin {
    let p = inst.priors();
    let (mut lo, mut c) = (0.0, 0.0);
    for (b, s) in inst.beta().iter().zip(inst.overlaps()) {
        lo += s * s;
        c += b * s * s;
    }
    if c == 0.0 {
        // Objective P1 q1: smallest at the lower end (any q1 when P1 = 0).
        return IntervalMin {
            argmin: lo,
            value: p.p1() * lo,
        };
    }
    let f = |q: f64| p.p1() * q + p.p2() * c / q;
    grid_minimize(f, lo, 1.0, GRID_POINTS)
}

/// Two pure states with (possibly unnormalized) priors and overlap `s`.
pub fn minimize_two_pure(p1: f64, p2: f64, s: f64) -> IntervalMin {
    let lo = s * s;
    if s == 0.0 {
        return IntervalMin {
            argmin: 0.0,
            value: 0.0,
        };
    }
    let f = |q: f64| p1 * q + p2 * s * s / q;
    grid_minimize(f, lo, 1.0, GRID_POINTS)
}

/// Sum of per-subspace two-state optima with sub-priors `(P1 alpha_i, P2 beta_i)`.
pub fn minimize_rank_n(inst: &RankNPairInstance) -> f64 {
    let p = inst.priors();
    inst.alpha()
        .iter()
        .zip(inst.beta())
        .zip(inst.diag_overlaps())
        .map(|((a, b), s)| minimize_two_pure(p.p1() * a, p.p2() * b, *s).value)
        .sum()
}

/// Filtering optimum with an oracle certificate attached.
pub fn certified_filtering(inst: &FilteringInstance) -> DiscriminationResult {
    let mut r = q_min_filtering(inst);
    let m = minimize_filtering(inst);
    let note = r.certificate.take().and_then(|c| c.note);
    r.certificate = Some(Certificate {
        argmin_q1: m.argmin,
        objective: m.value,
        gap: (r.q_min - m.value).abs(),
        note,
    });
    r
}

/// Outcome of checking one instance against the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: String,
    pub instance: InstanceDoc,
    pub closed_form: f64,
    pub oracle_value: f64,
    pub gap: f64,
    pub pass: bool,
}

/// Compares the closed form of any instance with its brute-force optimum.
pub fn verify_instance(inst: &Instance) -> VerifyReport {
    let (closed_form, oracle_value) = match inst {
        Instance::Filtering(i) => (q_min_filtering(i).q_min, minimize_filtering(i).value),
        Instance::PurePair(i) => {
            let s = s_star(i).modulus;
            let p = i.priors();
            let closed = q_min_pure_pure(p, s).map(|r| r.q_min).unwrap_or(f64::NAN);
            (closed, minimize_two_pure(p.p1(), p.p2(), s).value)
        }
        Instance::RankNPair(i) => (
            q_min_mixed_mixed(i).map(|r| r.q_min).unwrap_or(f64::NAN),
            minimize_rank_n(i),
        ),
    };
    let gap = (closed_form - oracle_value).abs();
    VerifyReport {
        kind: inst.kind().to_string(),
        instance: inst.to_doc(),
        closed_form,
        oracle_value,
        gap,
        // NaN gaps fail.
        pass: gap <= EPS_MATCH,
    }
}
