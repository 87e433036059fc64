//! Validated problem instances and their JSON document form.
//!
//! All instance types are immutable once constructed: the only way to obtain
//! one is through a constructor that checks every invariant and reports all
//! violations at once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation, Violations};
use crate::tol::EPS_SUM;

/// Prior probabilities of the two hypotheses, with `P1 <= P2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    p1: f64,
    p2: f64,
}

impl Priors {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        let mut errs = Vec::new();
        check_priors(p1, p2, &mut errs);
        finish(Priors { p1, p2 }, errs)
    }

    /// Builds the pair `(p1, 1 - p1)`.
    pub fn from_p1(p1: f64) -> Result<Self> {
        Self::new(p1, 1.0 - p1)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }
}

fn check_priors(p1: f64, p2: f64, errs: &mut Vec<Violation>) {
    let in_unit = |p: f64| p.is_finite() && (0.0..=1.0).contains(&p);
    if !in_unit(p1) || !in_unit(p2) || (p1 + p2 - 1.0).abs() > EPS_SUM {
        errs.push(Violation::PriorSum { p1, p2 });
    } else if p1 > p2 {
        errs.push(Violation::PriorOrder { p1, p2 });
    }
}

fn check_weights(field: &'static str, w: &[f64], errs: &mut Vec<Violation>) {
    if w.is_empty() {
        errs.push(Violation::Empty { field });
        return;
    }
    let mut ok = true;
    for (index, &value) in w.iter().enumerate() {
        if !value.is_finite() {
            errs.push(Violation::NonFinite { field, index });
            ok = false;
        } else if value < 0.0 {
            errs.push(Violation::NegativeWeight { field, index, value });
            ok = false;
        }
    }
    if ok {
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > EPS_SUM {
            errs.push(Violation::WeightSum { field, sum });
        }
    }
}

fn check_overlaps(field: &'static str, s: &[f64], errs: &mut Vec<Violation>) -> bool {
    let mut ok = true;
    for (index, &value) in s.iter().enumerate() {
        if !value.is_finite() {
            errs.push(Violation::NonFinite { field, index });
            ok = false;
        } else if !(0.0..=1.0).contains(&value) {
            errs.push(Violation::OverlapRange { field, index, value });
            ok = false;
        }
    }
    ok
}

fn check_len(field: &'static str, expected: usize, found: usize, errs: &mut Vec<Violation>) {
    if expected != found {
        errs.push(Violation::LengthMismatch { field, expected, found });
    }
}

fn finish<T>(value: T, errs: Vec<Violation>) -> Result<T> {
    if errs.is_empty() {
        Ok(value)
    } else {
        Err(Error::Invalid(Violations(errs)))
    }
}

/// Re-checks every invariant of an already constructed value.
///
/// Validation is idempotent: a value that passed once passes again unchanged.
pub trait Validate: Sized {
    fn validate(self) -> Result<Self>;
}

impl Validate for Priors {
    fn validate(self) -> Result<Self> {
        Priors::new(self.p1, self.p2)
    }
}

/// One pure state against a rank-N mixture of orthonormal vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceDoc", into = "InstanceDoc")]
pub struct FilteringInstance {
    priors: Priors,
    beta: Vec<f64>,
    overlaps: Vec<f64>,
}

impl FilteringInstance {
    pub fn new(priors: Priors, beta: Vec<f64>, overlaps: Vec<f64>) -> Result<Self> {
        let mut errs = Vec::new();
        check_priors(priors.p1, priors.p2, &mut errs);
        check_filtering_fields(&beta, &overlaps, &mut errs);
        finish(FilteringInstance { priors, beta, overlaps }, errs)
    }

    pub fn priors(&self) -> Priors {
        self.priors
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn overlaps(&self) -> &[f64] {
        &self.overlaps
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// `<Psi1_par|Psi1_par> = sum_i s_1i'^2`.
    pub fn parallel_norm_sq(&self) -> f64 {
        self.overlaps.iter().map(|s| s * s).sum()
    }

    /// `sum_i beta_i s_1i'^2`, the squared pure-mixed fidelity.
    pub fn weighted_overlap_sq(&self) -> f64 {
        self.beta.iter().zip(&self.overlaps).map(|(b, s)| b * s * s).sum()
    }

    /// Attaches phases, turning the mixture into a superposition.
    pub fn superpose(&self, phases: Vec<f64>) -> Result<PurePairInstance> {
        PurePairInstance::new(self.priors, self.beta.clone(), self.overlaps.clone(), phases)
    }
}

fn check_filtering_fields(beta: &[f64], overlaps: &[f64], errs: &mut Vec<Violation>) {
    check_weights("beta", beta, errs);
    check_len("overlaps", beta.len(), overlaps.len(), errs);
    if check_overlaps("overlaps", overlaps, errs) {
        let norm_sq: f64 = overlaps.iter().map(|s| s * s).sum();
        if norm_sq >= 1.0 - EPS_SUM {
            errs.push(Violation::ParallelNorm { norm_sq });
        }
    }
}

impl Validate for FilteringInstance {
    fn validate(self) -> Result<Self> {
        FilteringInstance::new(self.priors, self.beta, self.overlaps)
    }
}

/// A pure state against the superposition `sum_i sqrt(beta_i) e^{i theta_i} |Psi_i'>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceDoc", into = "InstanceDoc")]
pub struct PurePairInstance {
    priors: Priors,
    beta: Vec<f64>,
    overlaps: Vec<f64>,
    phases: Vec<f64>,
}

impl PurePairInstance {
    pub fn new(priors: Priors, beta: Vec<f64>, overlaps: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        let mut errs = Vec::new();
        check_priors(priors.p1, priors.p2, &mut errs);
        check_filtering_fields(&beta, &overlaps, &mut errs);
        check_len("phases", beta.len(), phases.len(), &mut errs);
        for (index, p) in phases.iter().enumerate() {
            if !p.is_finite() {
                errs.push(Violation::NonFinite { field: "phases", index });
            }
        }
        finish(
            PurePairInstance {
                priors,
                beta,
                overlaps,
                phases,
            },
            errs,
        )
    }

    pub fn priors(&self) -> Priors {
        self.priors
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn overlaps(&self) -> &[f64] {
        &self.overlaps
    }

    /// Phases in radians; only their values modulo `2 pi` matter.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// The mixed-state counterpart sharing priors, weights and overlaps.
    pub fn mixture(&self) -> FilteringInstance {
        FilteringInstance {
            priors: self.priors,
            beta: self.beta.clone(),
            overlaps: self.overlaps.clone(),
        }
    }
}

impl Validate for PurePairInstance {
    fn validate(self) -> Result<Self> {
        PurePairInstance::new(self.priors, self.beta, self.overlaps, self.phases)
    }
}

/// Two rank-N mixtures whose eigenvectors overlap one to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceDoc", into = "InstanceDoc")]
pub struct RankNPairInstance {
    priors: Priors,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    diag_overlaps: Vec<f64>,
}

impl RankNPairInstance {
    pub fn new(priors: Priors, alpha: Vec<f64>, beta: Vec<f64>, diag_overlaps: Vec<f64>) -> Result<Self> {
        let mut errs = Vec::new();
        check_priors(priors.p1, priors.p2, &mut errs);
        check_weights("alpha", &alpha, &mut errs);
        check_weights("beta", &beta, &mut errs);
        check_len("beta", alpha.len(), beta.len(), &mut errs);
        check_len("diag_overlaps", alpha.len(), diag_overlaps.len(), &mut errs);
        check_overlaps("diag_overlaps", &diag_overlaps, &mut errs);
        for (index, (a, b)) in alpha.iter().zip(&beta).enumerate() {
            let (lhs, rhs) = (priors.p1 * a, priors.p2 * b);
            if lhs > rhs + EPS_SUM {
                errs.push(Violation::Dominance { index, lhs, rhs });
            }
        }
        finish(
            RankNPairInstance {
                priors,
                alpha,
                beta,
                diag_overlaps,
            },
            errs,
        )
    }

    pub fn priors(&self) -> Priors {
        self.priors
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn diag_overlaps(&self) -> &[f64] {
        &self.diag_overlaps
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

impl Validate for RankNPairInstance {
    fn validate(self) -> Result<Self> {
        RankNPairInstance::new(self.priors, self.alpha, self.beta, self.diag_overlaps)
    }
}

/// Wire form of every instance kind.
///
/// Keys that do not apply to an instance kind are absent. The kind is
/// inferred from which keys are present: `alpha` or `diag_overlaps` selects a
/// rank-N pair, `phases` a pure pair, and otherwise a filtering instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub p1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlaps: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag_overlaps: Option<Vec<f64>>,
}

/// Any validated instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Filtering(FilteringInstance),
    PurePair(PurePairInstance),
    RankNPair(RankNPairInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Filtering(_) => "filtering",
            Instance::PurePair(_) => "pure_pair",
            Instance::RankNPair(_) => "rank_n_pair",
        }
    }

    pub fn priors(&self) -> Priors {
        match self {
            Instance::Filtering(i) => i.priors(),
            Instance::PurePair(i) => i.priors(),
            Instance::RankNPair(i) => i.priors(),
        }
    }

    pub fn to_doc(&self) -> InstanceDoc {
        match self.clone() {
            Instance::Filtering(i) => i.into(),
            Instance::PurePair(i) => i.into(),
            Instance::RankNPair(i) => i.into(),
        }
    }
}

impl Validate for Instance {
    fn validate(self) -> Result<Self> {
        Ok(match self {
            Instance::Filtering(i) => Instance::Filtering(i.validate()?),
            Instance::PurePair(i) => Instance::PurePair(i.validate()?),
            Instance::RankNPair(i) => Instance::RankNPair(i.validate()?),
        })
    }
}

fn required(field: &'static str, v: Option<Vec<f64>>, errs: &mut Vec<Violation>) -> Vec<f64> {
    v.unwrap_or_else(|| {
        errs.push(Violation::Missing { field });
        Vec::new()
    })
}

impl InstanceDoc {
    /// Validates the document into the instance kind its keys describe.
    pub fn validate(self) -> Result<Instance> {
        let mut errs = Vec::new();
        let priors = Priors {
            p1: self.p1,
            p2: 1.0 - self.p1,
        };
        if self.alpha.is_some() || self.diag_overlaps.is_some() {
            let alpha = required("alpha", self.alpha, &mut errs);
            let beta = required("beta", self.beta, &mut errs);
            let diag = required("diag_overlaps", self.diag_overlaps, &mut errs);
            finish((), errs)?;
            RankNPairInstance::new(priors, alpha, beta, diag).map(Instance::RankNPair)
        } else if self.phases.is_some() {
            let beta = required("beta", self.beta, &mut errs);
            let overlaps = required("overlaps", self.overlaps, &mut errs);
            let phases = required("phases", self.phases, &mut errs);
            finish((), errs)?;
            PurePairInstance::new(priors, beta, overlaps, phases).map(Instance::PurePair)
        } else {
            let beta = required("beta", self.beta, &mut errs);
            let overlaps = required("overlaps", self.overlaps, &mut errs);
            finish((), errs)?;
            FilteringInstance::new(priors, beta, overlaps).map(Instance::Filtering)
        }
    }
}

impl From<FilteringInstance> for InstanceDoc {
    fn from(i: FilteringInstance) -> Self {
        InstanceDoc {
            p1: i.priors.p1,
            beta: Some(i.beta),
            overlaps: Some(i.overlaps),
            ..Default::default()
        }
    }
}

impl From<PurePairInstance> for InstanceDoc {
    fn from(i: PurePairInstance) -> Self {
        InstanceDoc {
            p1: i.priors.p1,
            beta: Some(i.beta),
            overlaps: Some(i.overlaps),
            phases: Some(i.phases),
            ..Default::default()
        }
    }
}

impl From<RankNPairInstance> for InstanceDoc {
    fn from(i: RankNPairInstance) -> Self {
        InstanceDoc {
            p1: i.priors.p1,
            beta: Some(i.beta),
            alpha: Some(i.alpha),
            diag_overlaps: Some(i.diag_overlaps),
            ..Default::default()
        }
    }
}

macro_rules! doc_try_from {
    ($ty:ident, $variant:ident) => {
        impl TryFrom<InstanceDoc> for $ty {
            type Error = Error;

            fn try_from(doc: InstanceDoc) -> Result<Self> {
                match doc.validate()? {
                    Instance::$variant(i) => Ok(i),
                    other => Err(Error::Spec(format!(
                        "expected a {} document, found {}",
                        stringify!($ty),
                        other.kind()
                    ))),
                }
            }
        }
    };
}

doc_try_from!(FilteringInstance, Filtering);
doc_try_from!(PurePairInstance, PurePair);
doc_try_from!(RankNPairInstance, RankNPair);

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(err: Error) -> Vec<Violation> {
        err.violations().to_vec()
    }

    #[test]
    fn two_component_instance_is_valid() {
        let p = Priors::from_p1(0.15).unwrap();
        let inst = FilteringInstance::new(p, vec![0.1, 0.9], vec![0.0, 0.5]).unwrap();
        assert_eq!(inst.len(), 2);
        assert!((inst.parallel_norm_sq() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn unit_parallel_norm_is_rejected() {
        let p = Priors::from_p1(0.5).unwrap();
        let err = FilteringInstance::new(p, vec![1.0], vec![1.0]).unwrap_err();
        assert!(matches!(kinds(err).as_slice(), [Violation::ParallelNorm { .. }]));
    }

    #[test]
    fn prior_order() {
        let err = Priors::from_p1(0.6).unwrap_err();
        assert!(matches!(kinds(err).as_slice(), [Violation::PriorOrder { .. }]));
        assert!(Priors::from_p1(0.5).is_ok());
        assert!(matches!(
            kinds(Priors::new(0.3, 0.3).unwrap_err()).as_slice(),
            [Violation::PriorSum { .. }]
        ));
    }

    #[test]
    fn every_violation_is_reported() {
        let p = Priors { p1: 0.7, p2: 0.3 };
        let err = FilteringInstance::new(p, vec![0.2, 0.2], vec![1.2, 0.1]).unwrap_err();
        let v = kinds(err);
        assert!(v.iter().any(|v| matches!(v, Violation::PriorOrder { .. })));
        assert!(v.iter().any(|v| matches!(v, Violation::WeightSum { .. })));
        assert!(v.iter().any(|v| matches!(v, Violation::OverlapRange { index: 0, .. })));
    }

    #[test]
    fn dominance() {
        let p = Priors::from_p1(0.4).unwrap();
        let err = RankNPairInstance::new(p, vec![0.9, 0.1], vec![0.5, 0.5], vec![0.3, 0.3]).unwrap_err();
        assert!(matches!(kinds(err).as_slice(), [Violation::Dominance { index: 0, .. }]));
    }

    #[test]
    fn zero_weights_are_allowed() {
        let p = Priors::from_p1(0.5).unwrap();
        assert!(FilteringInstance::new(p, vec![0.0, 1.0], vec![0.5, 0.0]).is_ok());
        assert!(RankNPairInstance::new(p, vec![0.0, 1.0], vec![0.0, 1.0], vec![0.4, 1.0]).is_ok());
    }

    #[test]
    fn length_mismatch() {
        let p = Priors::from_p1(0.5).unwrap();
        let err = PurePairInstance::new(p, vec![0.5, 0.5], vec![0.1, 0.1], vec![0.0]).unwrap_err();
        assert!(matches!(
            kinds(err).as_slice(),
            [Violation::LengthMismatch { field: "phases", .. }]
        ));
    }

    #[test]
    fn validate_is_idempotent() {
        let p = Priors::from_p1(0.25).unwrap();
        let inst = PurePairInstance::new(p, vec![0.3, 0.7], vec![0.2, 0.6], vec![1.0, -2.0]).unwrap();
        let once = inst.clone().validate().unwrap();
        let twice = once.clone().validate().unwrap();
        assert_eq!(inst, once);
        assert_eq!(once, twice);
    }

    #[test]
    fn json_document_kinds() {
        let doc: InstanceDoc = serde_json::from_str(r#"{"p1":0.15,"beta":[0.1,0.9],"overlaps":[0,0.5]}"#).unwrap();
        assert_eq!(doc.clone().validate().unwrap().kind(), "filtering");

        let pure: PurePairInstance =
            serde_json::from_str(r#"{"p1":0.5,"beta":[0.5,0.5],"overlaps":[0.9,0.1],"phases":[0,3.14]}"#).unwrap();
        let text = serde_json::to_string(&pure).unwrap();
        assert!(!text.contains("alpha"));
        let back: PurePairInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(pure, back);

        let mixed = r#"{"p1":0.15,"alpha":[0.5,0.5],"beta":[0.5,0.5],"diag_overlaps":[0.2,0.5]}"#;
        let inst: RankNPairInstance = serde_json::from_str(mixed).unwrap();
        assert_eq!(inst.diag_overlaps(), &[0.2, 0.5]);

        let missing: InstanceDoc = serde_json::from_str(r#"{"p1":0.15,"alpha":[1.0]}"#).unwrap();
        let v = kinds(missing.validate().unwrap_err());
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn document_of_wrong_kind() {
        let r: std::result::Result<FilteringInstance, _> =
            serde_json::from_str(r#"{"p1":0.5,"beta":[1.0],"overlaps":[0.5],"phases":[0.0]}"#);
        assert!(r.is_err());
    }
}
