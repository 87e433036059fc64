//! Parameter sweeps behind the region map, the delta-Q curves and the
//! photon-number examples.
//!
//! Sweep points are independent and evaluated in parallel; rows come back in
//! sweep order. Points whose instance fails validation are skipped and
//! recorded rather than aborting the sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::{l1_coherence, relative_entropy_coherence};
use crate::distributions::{Family, PhotonDistribution};
use crate::error::{Error, Result};
use crate::filtering::q_min_filtering;
use crate::mixed::{block_case, q_min_mixed_mixed, q_min_pure_counterpart};
use crate::model::{FilteringInstance, Priors, RankNPairInstance};
use crate::pure_pure::{classify_joint, delta_q, q_min_superposed, JointCase};
use crate::suites::{run_verify, VerifySpec, VerifySummary};
use crate::tol::{DEFAULT_TAIL_BOUND, EPS_MATCH};

/// Evenly spaced values `start..=stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, points: usize) -> Self {
        SweepRange { start, stop, points }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if !self.start.is_finite() || !self.stop.is_finite() || self.points == 0 {
            return Err(Error::Spec(format!(
                "sweep range must be finite with at least one point, got {}..{} x {}",
                self.start, self.stop, self.points
            )));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * k as f64
                }
            })
            .collect())
    }
}

/// Which coherence measure goes in the `coherence` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceMeasure {
    #[default]
    L1,
    RelativeEntropy,
}

impl CoherenceMeasure {
    fn eval(self, w: &[f64]) -> Result<f64> {
        match self {
            CoherenceMeasure::L1 => l1_coherence(w),
            CoherenceMeasure::RelativeEntropy => relative_entropy_coherence(w),
        }
    }
}

fn spec_err(e: Error) -> Error {
    match e {
        Error::Spec(_) => e,
        other => Error::Spec(other.to_string()),
    }
}

fn default_alpha() -> SweepRange {
    SweepRange::new(0.0, 3.0, 301)
}

fn default_tail() -> f64 {
    DEFAULT_TAIL_BOUND
}

fn default_head_last() -> usize {
    4
}

// ---------------------------------------------------------------- region map

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionMapSpec {
    pub p1: f64,
    pub beta1: f64,
    #[serde(default)]
    pub phases: [f64; 2],
    /// Grid points per axis; coordinates are `k / resolution`.
    pub resolution: usize,
}

impl Default for RegionMapSpec {
    fn default() -> Self {
        RegionMapSpec {
            p1: 0.15,
            beta1: 0.1,
            phases: [0.0, 0.0],
            resolution: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub s11: f64,
    pub s12: f64,
    /// `None` where `s11^2 + s12^2 >= 1`.
    pub case: Option<JointCase>,
}

impl RegionCell {
    pub fn label(&self) -> &'static str {
        self.case.map_or("invalid", JointCase::label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trace {
    /// `q1* = s11^2 + s12^2`
    Q1StarEqNorm,
    /// `q1* = 1`
    Q1StarEqOne,
    /// `|s*| = sqrt(P1/P2)`
    SStarEqThreshold,
    /// `s11^2 + s12^2 = 1`
    UnitNorm,
}

impl Trace {
    pub fn label(self) -> &'static str {
        match self {
            Trace::Q1StarEqNorm => "q1_star_eq_norm",
            Trace::Q1StarEqOne => "q1_star_eq_one",
            Trace::SStarEqThreshold => "s_star_eq_threshold",
            Trace::UnitNorm => "unit_norm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub trace: Trace,
    pub s11: f64,
    pub s12: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub cells: Vec<RegionCell>,
    pub traces: Vec<TracePoint>,
}

impl RegionMap {
    /// Cell count per joint case, invalid cells excluded.
    pub fn counts(&self) -> Vec<(JointCase, usize)> {
        let all = [
            JointCase::A,
            JointCase::B,
            JointCase::C,
            JointCase::D,
            JointCase::E,
            JointCase::Empty,
        ];
        all.iter()
            .map(|c| (*c, self.cells.iter().filter(|x| x.case == Some(*c)).count()))
            .collect()
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm <= 0.0) == (flo <= 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `f` on `[0, hi)` found by sign changes over `n` subintervals.
fn roots(f: impl Fn(f64) -> f64, hi: f64, n: usize) -> Vec<f64> {
    let xs: Vec<f64> = (0..=n).map(|k| hi * k as f64 / n as f64).collect();
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (f(w[0]), f(w[1]));
        if a == 0.0 {
            out.push(w[0]);
        } else if a * b < 0.0 {
            out.push(bisect(&f, w[0], w[1]));
        }
    }
    out
}

/// Joint-case labels on a grid over `(s11', s12')` for `N = 2`, plus the
/// four boundary curves.
pub fn run_region_map(spec: &RegionMapSpec) -> Result<RegionMap> {
    let priors = Priors::from_p1(spec.p1).map_err(spec_err)?;
    if !(0.0..=1.0).contains(&spec.beta1) {
        return Err(Error::Spec(format!("beta1 = {} outside [0, 1]", spec.beta1)));
    }
    if spec.resolution < 2 || spec.phases.iter().any(|t| !t.is_finite()) {
        return Err(Error::Spec("region map needs resolution >= 2 and finite phases".into()));
    }
    let (p1, p2) = (priors.p1(), priors.p2());
    let beta = vec![spec.beta1, 1.0 - spec.beta1];
    let n = spec.resolution;
    let coord = |k: usize| k as f64 / n as f64;

    let cells: Vec<RegionCell> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (s11, s12) = (coord(idx / n), coord(idx % n));
            let case = FilteringInstance::new(priors, beta.clone(), vec![s11, s12])
                .ok()
                .and_then(|f| {
                    let pair = f.superpose(spec.phases.to_vec()).ok()?;
                    classify_joint(&f, &pair).ok()
                });
            RegionCell { s11, s12, case }
        })
        .collect();

    let (b1, b2) = (beta[0], beta[1]);
    let [t1, t2] = spec.phases;
    let q1 = move |x: f64, y: f64| (p2 / p1 * (b1 * x * x + b2 * y * y)).sqrt();
    let threshold = (p1 / p2).sqrt();
    let s_star = move |x: f64, y: f64| {
        let re = b1.sqrt() * x * t1.cos() + b2.sqrt() * y * t2.cos();
        let im = b1.sqrt() * x * t1.sin() + b2.sqrt() * y * t2.sin();
        re.hypot(im)
    };

    let mut traces = Vec::new();
    for k in 0..n {
        let x = coord(k);
        let hi = (1.0 - x * x).sqrt();
        let sub = 4 * n;
        for (trace, ys) in [
            (Trace::Q1StarEqNorm, roots(|y| q1(x, y) - (x * x + y * y), hi, sub)),
            (Trace::Q1StarEqOne, roots(|y| q1(x, y) - 1.0, hi, sub)),
            (Trace::SStarEqThreshold, roots(|y| s_star(x, y) - threshold, hi, sub)),
            (Trace::UnitNorm, vec![hi]),
        ] {
            traces.extend(ys.into_iter().map(|s12| TracePoint { trace, s11: x, s12 }));
        }
    }
    Ok(RegionMap { cells, traces })
}

// ------------------------------------------------------------- delta-Q curves

/// One sweep point of a delta-Q curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    /// Swept parameter (`beta_1`, `alpha_1` or the photon amplitude).
    pub param: f64,
    pub coherence: f64,
    pub q_min: f64,
    pub q_min_pure: f64,
    pub delta_q: f64,
    /// Joint case `a`..`e` or block case `i`..`iv`.
    pub case: String,
    pub regime: Regime,
    /// Basis size actually used.
    pub terms: usize,
}

/// Whether coherence helps the superposed scheme at this point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Helpful,
    Detrimental,
    Neutral,
}

impl Regime {
    pub fn of(delta_q: f64) -> Self {
        if delta_q > EPS_MATCH {
            Regime::Helpful
        } else if delta_q < -EPS_MATCH {
            Regime::Detrimental
        } else {
            Regime::Neutral
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Helpful => "helpful",
            Regime::Detrimental => "detrimental",
            Regime::Neutral => "neutral",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub param: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Curve {
    pub rows: Vec<CurveRow>,
    pub skipped: Vec<SkippedPoint>,
}

impl Curve {
    fn collect(points: Vec<(f64, Result<CurveRow>)>) -> Result<Curve> {
        let mut curve = Curve::default();
        for (param, r) in points {
            match r {
                Ok(row) => curve.rows.push(row),
                Err(e @ (Error::Invalid(_) | Error::Range { .. })) => curve.skipped.push(SkippedPoint {
                    param,
                    reason: e.to_string(),
                }),
                Err(e) => return Err(e),
            }
        }
        Ok(curve)
    }

    fn sort_by_coherence(mut self) -> Self {
        self.rows.sort_by(|a, b| a.coherence.total_cmp(&b.coherence));
        self
    }
}

/// First weight swept, the remainder shared evenly by the other components.
fn split_weights(first: f64, n: usize) -> Vec<f64> {
    let mut w = vec![(1.0 - first) / (n - 1) as f64; n];
    w[0] = first;
    w
}

/// Pure state against a rank-N mixture, sweeping `beta_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilteringCurveSpec {
    pub p1: f64,
    pub overlaps: Vec<f64>,
    pub phases: Vec<f64>,
    pub beta1: SweepRange,
    #[serde(default)]
    pub coherence: CoherenceMeasure,
}

/// Two rank-N mixtures with `alpha = beta`, sweeping the first weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedCurveSpec {
    pub p1: f64,
    pub diag_overlaps: Vec<f64>,
    pub alpha1: SweepRange,
    #[serde(default)]
    pub coherence: CoherenceMeasure,
}

fn filtering_row(param: f64, inst: &FilteringInstance, phases: &[f64], measure: CoherenceMeasure) -> Result<CurveRow> {
    let pair = inst.superpose(phases.to_vec())?;
    let (mixed, pure) = (q_min_filtering(inst), q_min_superposed(&pair));
    let dq = delta_q(&mixed, &pure);
    Ok(CurveRow {
        param,
        coherence: measure.eval(inst.beta())?,
        q_min: mixed.q_min,
        q_min_pure: pure.q_min,
        delta_q: dq,
        case: classify_joint(inst, &pair)?.label().to_string(),
        regime: Regime::of(dq),
        terms: inst.len(),
    })
}

fn rank_n_row(param: f64, inst: &RankNPairInstance, measure: CoherenceMeasure) -> Result<CurveRow> {
    let (mixed, pure) = (q_min_mixed_mixed(inst)?, q_min_pure_counterpart(inst));
    let dq = delta_q(&mixed, &pure);
    Ok(CurveRow {
        param,
        coherence: measure.eval(inst.beta())?,
        q_min: mixed.q_min,
        q_min_pure: pure.q_min,
        delta_q: dq,
        case: block_case(inst)?.label().to_string(),
        regime: Regime::of(dq),
        terms: inst.len(),
    })
}

/// Delta-Q against coherence for a pure state versus a rank-N mixture.
/// Rows are sorted by coherence.
pub fn run_filtering_curve(spec: &FilteringCurveSpec) -> Result<Curve> {
    let priors = Priors::from_p1(spec.p1).map_err(spec_err)?;
    let n = spec.overlaps.len();
    if n < 2 {
        return Err(Error::Spec("a beta_1 sweep needs at least two overlaps".into()));
    }
    // Fixed parameters must be valid on their own; only beta varies.
    FilteringInstance::new(priors, vec![1.0 / n as f64; n], spec.overlaps.clone())
        .and_then(|f| f.superpose(spec.phases.clone()))
        .map_err(spec_err)?;
    let points: Vec<(f64, Result<CurveRow>)> = spec
        .beta1
        .values()?
        .into_par_iter()
        .map(|b1| {
            let row = FilteringInstance::new(priors, split_weights(b1, n), spec.overlaps.clone())
                .and_then(|inst| filtering_row(b1, &inst, &spec.phases, spec.coherence));
            (b1, row)
        })
        .collect();
    Ok(Curve::collect(points)?.sort_by_coherence())
}

/// Delta-Q against coherence for two rank-N mixtures with `alpha = beta`.
/// Rows are sorted by coherence.
pub fn run_mixed_curve(spec: &MixedCurveSpec) -> Result<Curve> {
    let priors = Priors::from_p1(spec.p1).map_err(spec_err)?;
    let n = spec.diag_overlaps.len();
    if n < 2 {
        return Err(Error::Spec("an alpha_1 sweep needs at least two overlaps".into()));
    }
    let uniform = vec![1.0 / n as f64; n];
    RankNPairInstance::new(priors, uniform.clone(), uniform, spec.diag_overlaps.clone()).map_err(spec_err)?;
    let points: Vec<(f64, Result<CurveRow>)> = spec
        .alpha1
        .values()?
        .into_par_iter()
        .map(|a1| {
            let w = split_weights(a1, n);
            let row = RankNPairInstance::new(priors, w.clone(), w, spec.diag_overlaps.clone())
                .and_then(|inst| rank_n_row(a1, &inst, spec.coherence));
            (a1, row)
        })
        .collect();
    Ok(Curve::collect(points)?.sort_by_coherence())
}

// ------------------------------------------------------ photon-number examples

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhotonExample {
    /// Pure state overlapping only the `t`-th component of the mixture.
    Filtering { t: usize, overlap: f64 },
    /// `alpha = beta = weights`; overlap `head` for indices `<= head_last`,
    /// `tail` after.
    MixedMixed {
        head: f64,
        tail: f64,
        #[serde(default = "default_head_last")]
        head_last: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonSpec {
    pub p1: f64,
    pub family: Family,
    pub example: PhotonExample,
    #[serde(default = "default_alpha")]
    pub alpha: SweepRange,
    #[serde(default = "default_tail")]
    pub tail_bound: f64,
}

fn photon_row(spec: &PhotonSpec, priors: Priors, alpha: f64) -> Result<CurveRow> {
    let measure = CoherenceMeasure::RelativeEntropy;
    match &spec.example {
        PhotonExample::Filtering { t, overlap } => {
            let dist = PhotonDistribution::new(spec.family, alpha, spec.tail_bound, t + 1)?;
            let w = dist.weights().to_vec();
            let mut s = vec![0.0; w.len()];
            s[*t] = *overlap;
            let n = w.len();
            let inst = FilteringInstance::new(priors, w, s)?;
            filtering_row(alpha, &inst, &vec![0.0; n], measure)
        }
        PhotonExample::MixedMixed { head, tail, head_last } => {
            let dist = PhotonDistribution::new(spec.family, alpha, spec.tail_bound, 0)?;
            let w = dist.weights().to_vec();
            let s = (0..w.len())
                .map(|i| if i <= *head_last { *head } else { *tail })
                .collect();
            let inst = RankNPairInstance::new(priors, w.clone(), w, s)?;
            rank_n_row(alpha, &inst, measure)
        }
    }
}

/// Delta-Q against relative-entropy coherence along an amplitude sweep.
/// Rows stay in sweep order.
pub fn run_photon_examples(spec: &PhotonSpec) -> Result<Curve> {
    let priors = Priors::from_p1(spec.p1).map_err(spec_err)?;
    match spec.example {
        PhotonExample::Filtering { overlap, .. } if !(0.0..1.0).contains(&overlap) => {
            return Err(Error::Spec(format!("overlap {overlap} outside [0, 1)")));
        }
        PhotonExample::MixedMixed { head, tail, .. }
            if !(0.0..=1.0).contains(&head) || !(0.0..=1.0).contains(&tail) =>
        {
            return Err(Error::Spec("schedule overlaps must lie in [0, 1]".into()));
        }
        _ => {}
    }
    if spec.alpha.values()?.iter().any(|a| *a < 0.0) {
        return Err(Error::Spec("amplitudes must be nonnegative".into()));
    }
    let points: Vec<(f64, Result<CurveRow>)> = spec
        .alpha
        .values()?
        .into_par_iter()
        .map(|a| (a, photon_row(spec, priors, a)))
        .collect();
    Curve::collect(points)
}

// ------------------------------------------------------------------ dispatch

/// A complete, serializable description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum SweepSpec {
    RegionMap(RegionMapSpec),
    FilteringDeltaQ(FilteringCurveSpec),
    MixedDeltaQ(MixedCurveSpec),
    Example1Binomial(PhotonSpec),
    Example1Gaussian(PhotonSpec),
    Example2Binomial(PhotonSpec),
    Example2Gaussian(PhotonSpec),
    Verify(VerifySpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SweepOutput {
    RegionMap(RegionMap),
    Curve(Curve),
    Verify(VerifySummary),
}

impl SweepSpec {
    pub fn target(&self) -> &'static str {
        match self {
            SweepSpec::RegionMap(_) => "region_map",
            SweepSpec::FilteringDeltaQ(_) => "filtering_delta_q",
            SweepSpec::MixedDeltaQ(_) => "mixed_delta_q",
            SweepSpec::Example1Binomial(_) => "example1_binomial",
            SweepSpec::Example1Gaussian(_) => "example1_gaussian",
            SweepSpec::Example2Binomial(_) => "example2_binomial",
            SweepSpec::Example2Gaussian(_) => "example2_gaussian",
            SweepSpec::Verify(_) => "verify",
        }
    }

    /// Photon examples must agree with their target name.
    fn check_photon(&self) -> Result<()> {
        let (spec, want_filtering, want_binomial) = match self {
            SweepSpec::Example1Binomial(s) => (s, true, true),
            SweepSpec::Example1Gaussian(s) => (s, true, false),
            SweepSpec::Example2Binomial(s) => (s, false, true),
            SweepSpec::Example2Gaussian(s) => (s, false, false),
            _ => return Ok(()),
        };
        let is_filtering = matches!(spec.example, PhotonExample::Filtering { .. });
        let is_binomial = !spec.family.is_infinite();
        if is_filtering != want_filtering || is_binomial != want_binomial {
            return Err(Error::Spec(format!(
                "target {} does not match the given family and example",
                self.target()
            )));
        }
        Ok(())
    }

    pub fn run(&self) -> Result<SweepOutput> {
        self.check_photon()?;
        Ok(match self {
            SweepSpec::RegionMap(s) => SweepOutput::RegionMap(run_region_map(s)?),
            SweepSpec::FilteringDeltaQ(s) => SweepOutput::Curve(run_filtering_curve(s)?),
            SweepSpec::MixedDeltaQ(s) => SweepOutput::Curve(run_mixed_curve(s)?),
            SweepSpec::Example1Binomial(s)
            | SweepSpec::Example1Gaussian(s)
            | SweepSpec::Example2Binomial(s)
            | SweepSpec::Example2Gaussian(s) => SweepOutput::Curve(run_photon_examples(s)?),
            SweepSpec::Verify(s) => SweepOutput::Verify(run_verify(s)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_values() {
        let v = SweepRange::new(0.0, 1.0, 5).values().unwrap();
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(SweepRange::new(0.3, 9.0, 1).values().unwrap(), vec![0.3]);
        assert!(SweepRange::new(0.0, f64::INFINITY, 3).values().is_err());
        assert!(SweepRange::new(0.0, 1.0, 0).values().is_err());
    }

    #[test]
    fn region_map_point_in_case_e() {
        let map = run_region_map(&RegionMapSpec {
            resolution: 10,
            ..Default::default()
        })
        .unwrap();
        let cell = map.cells.iter().find(|c| c.s11 == 0.0 && c.s12 == 0.5).unwrap();
        assert_eq!(cell.case, Some(JointCase::E));
        assert_eq!(map.cells.len(), 100);
    }

    #[test]
    fn region_map_traces_lie_on_their_curves() {
        let spec = RegionMapSpec {
            resolution: 40,
            ..Default::default()
        };
        let map = run_region_map(&spec).unwrap();
        let (p1, p2) = (0.15, 0.85);
        for t in &map.traces {
            let (x, y) = (t.s11, t.s12);
            let q1 = (p2 / p1 * (0.1 * x * x + 0.9 * y * y)).sqrt();
            let r = match t.trace {
                Trace::Q1StarEqNorm => q1 - (x * x + y * y),
                Trace::Q1StarEqOne => q1 - 1.0,
                Trace::SStarEqThreshold => 0.1f64.sqrt() * x + 0.9f64.sqrt() * y - (p1 / p2).sqrt(),
                Trace::UnitNorm => x * x + y * y - 1.0,
            };
            assert!(r.abs() < 1e-9, "{t:?} residual {r}");
        }
        for trace in [Trace::Q1StarEqNorm, Trace::Q1StarEqOne, Trace::SStarEqThreshold] {
            assert!(map.traces.iter().any(|t| t.trace == trace), "{trace:?} missing");
        }
    }

    #[test]
    fn region_map_zero_row_depends_on_s12_only() {
        // With s11 = 0 the first component drops out of every quantity, so the
        // label along that row matches a one-component computation.
        let map = run_region_map(&RegionMapSpec {
            resolution: 50,
            ..Default::default()
        })
        .unwrap();
        let p = Priors::from_p1(0.15).unwrap();
        for cell in map.cells.iter().filter(|c| c.s11 == 0.0) {
            let f = FilteringInstance::new(p, vec![0.1, 0.9], vec![0.0, cell.s12]).unwrap();
            let pair = f.superpose(vec![1.0, 0.0]).unwrap();
            assert_eq!(cell.case, Some(classify_joint(&f, &pair).unwrap()));
        }
    }

    #[test]
    fn region_map_rejects_bad_spec() {
        let bad = RegionMapSpec {
            p1: 0.7,
            ..Default::default()
        };
        assert!(matches!(run_region_map(&bad), Err(Error::Spec(_))));
        let json = r#"{"target":"region_map","p1":0.15,"beta1":0.1,"phases":[0,0,0],"resolution":10}"#;
        assert!(serde_json::from_str::<SweepSpec>(json).is_err());
    }

    #[test]
    fn equal_fidelity_curve_matches_single_overlap_formula() {
        let spec = FilteringCurveSpec {
            p1: 0.15,
            overlaps: vec![0.0, 0.5],
            phases: vec![0.0, 0.0],
            beta1: SweepRange::new(0.0, 1.0, 101),
            coherence: CoherenceMeasure::L1,
        };
        let curve = run_filtering_curve(&spec).unwrap();
        assert_eq!(curve.rows.len(), 101);
        assert!(curve.rows.windows(2).all(|w| w[0].coherence <= w[1].coherence));
        for r in &curve.rows {
            assert!(r.delta_q >= -1e-12);
        }
    }

    #[test]
    fn equal_phase_curve_nonpositive_outside_b() {
        let spec = FilteringCurveSpec {
            p1: 0.15,
            overlaps: vec![0.2, 0.5],
            phases: vec![0.0, 0.0],
            beta1: SweepRange::new(0.0, 1.0, 201),
            coherence: CoherenceMeasure::L1,
        };
        for r in run_filtering_curve(&spec).unwrap().rows {
            if r.case != "b" {
                assert!(r.delta_q <= 1e-12, "{r:?}");
            }
        }
    }

    #[test]
    fn filtering_curve_rejects_invalid_fixed_parameters() {
        let spec = FilteringCurveSpec {
            p1: 0.15,
            overlaps: vec![0.8, 0.8],
            phases: vec![0.0, 0.0],
            beta1: SweepRange::new(0.0, 1.0, 3),
            coherence: CoherenceMeasure::L1,
        };
        assert!(matches!(run_filtering_curve(&spec), Err(Error::Spec(_))));
    }

    #[test]
    fn mixed_curve_has_helpful_region() {
        let spec = MixedCurveSpec {
            p1: 0.15,
            diag_overlaps: vec![0.2, 0.5, 0.5],
            alpha1: SweepRange::new(0.0, 1.0, 201),
            coherence: CoherenceMeasure::L1,
        };
        let curve = run_mixed_curve(&spec).unwrap();
        assert!(curve.rows.iter().any(|r| r.delta_q > 0.0));
        assert!(curve.rows.iter().all(|r| r.delta_q >= -1e-12));
    }

    #[test]
    fn photon_example_at_zero_amplitude() {
        // The weights collapse onto index 0, so both states share one
        // dimension and both schemes give up the pure state: case (e).
        let spec = PhotonSpec {
            p1: 0.15,
            family: Family::Binomial { n: 10 },
            example: PhotonExample::Filtering { t: 0, overlap: 0.5 },
            alpha: SweepRange::new(0.0, 0.0, 1),
            tail_bound: DEFAULT_TAIL_BOUND,
        };
        let row = &run_photon_examples(&spec).unwrap().rows[0];
        let oracle = crate::oracle::minimize_two_pure(0.15, 0.85, 0.5).value;
        assert_eq!(row.coherence, 0.0);
        assert_eq!(row.case, "e");
        assert!((row.q_min - 0.3625).abs() < 1e-15);
        assert!((row.q_min_pure - oracle).abs() < 1e-9);
        assert!(row.delta_q.abs() < 1e-15);
    }

    #[test]
    fn photon_example_skips_out_of_range_binomial() {
        let spec = PhotonSpec {
            p1: 0.15,
            family: Family::Binomial { n: 4 },
            example: PhotonExample::Filtering { t: 0, overlap: 0.5 },
            alpha: SweepRange::new(1.0, 3.0, 3),
            tail_bound: DEFAULT_TAIL_BOUND,
        };
        let curve = run_photon_examples(&spec).unwrap();
        assert_eq!(curve.rows.len(), 2);
        assert_eq!(curve.skipped.len(), 1);
        assert_eq!(curve.skipped[0].param, 3.0);
    }

    #[test]
    fn target_must_match_family() {
        let spec = SweepSpec::Example1Gaussian(PhotonSpec {
            p1: 0.15,
            family: Family::Binomial { n: 10 },
            example: PhotonExample::Filtering { t: 0, overlap: 0.5 },
            alpha: SweepRange::new(0.0, 1.0, 2),
            tail_bound: DEFAULT_TAIL_BOUND,
        });
        assert!(matches!(spec.run(), Err(Error::Spec(_))));
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = SweepSpec::Example2Gaussian(PhotonSpec {
            p1: 0.15,
            family: Family::Poisson,
            example: PhotonExample::MixedMixed {
                head: 0.5,
                tail: 0.2,
                head_last: 4,
            },
            alpha: default_alpha(),
            tail_bound: DEFAULT_TAIL_BOUND,
        });
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.starts_with(r#"{"target":"example2_gaussian""#));
        assert_eq!(serde_json::from_str::<SweepSpec>(&json).unwrap(), spec);
    }
}
