use serde::{Deserialize, Serialize};

/// Region of the filtering optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilteringCase {
    /// Interior optimum, both hypotheses identified.
    CaseI,
    /// Optimum clipped to the lower end `q1 = <Psi1_par|Psi1_par>`.
    CaseII,
    /// Optimum clipped to `q1 = 1`: the pure state is never identified.
    CaseIII,
}

/// Region of the two-pure-state optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PurePairCase {
    CaseIPrime,
    CaseIIPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairRegime {
    /// Both vectors of the pair are identified.
    Identified,
    /// The `rho_1` vector of the pair is given up.
    Neglected,
}

/// Outcome for one `{|Psi_i>, |Psi_i'>}` subspace of a rank-N pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairBranch {
    pub index: usize,
    pub branch: PairRegime,
    pub contribution: f64,
}

/// Filtering region together with the quantities that selected it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilteringBranch {
    pub label: FilteringCase,
    pub q1_star: f64,
    pub parallel_norm_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Branch {
    Filtering(FilteringBranch),
    PurePair(PurePairCase),
    MixedMixed {
        pairs: Vec<PairBranch>,
        /// Number of identified pairs (`m`).
        identified: usize,
    },
}

/// Record of a numerical check of a closed-form optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub argmin_q1: f64,
    pub objective: f64,
    pub gap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationResult {
    /// Minimal average failure probability.
    pub q_min: f64,
    pub branch: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl DiscriminationResult {
    pub(crate) fn new(q_min: f64, branch: Branch) -> Self {
        DiscriminationResult {
            q_min,
            branch,
            certificate: None,
        }
    }

    pub fn filtering_case(&self) -> Option<FilteringCase> {
        match &self.branch {
            Branch::Filtering(b) => Some(b.label),
            _ => None,
        }
    }

    pub fn pure_pair_case(&self) -> Option<PurePairCase> {
        match &self.branch {
            Branch::PurePair(c) => Some(*c),
            _ => None,
        }
    }

    pub fn pairs(&self) -> &[PairBranch] {
        match &self.branch {
            Branch::MixedMixed { pairs, .. } => pairs,
            _ => &[],
        }
    }
}
