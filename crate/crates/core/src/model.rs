//! Domain types shared by the whole pipeline.
//!
//! Every constructor validates its invariants and fails with a [`ModelError`];
//! nothing is silently repaired. Once built, values are immutable.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for reciprocal symmetry of comparison matrices.
pub const RECIPROCAL_TOLERANCE: f64 = 1e-9;

/// Absolute tolerance used when checking that a set of values sums to 1.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("identifier must not be empty")]
    EmptyId,
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("weight of `{id}` must be finite and nonnegative, got {weight}")]
    InvalidWeight { id: String, weight: f64 },
    #[error("explicit weights sum to zero")]
    ZeroWeightSum,
    #[error("likert scale must have between 2 and 9 categories, got {0}")]
    LikertCategories(u32),
    #[error("rank vector must not be empty")]
    EmptyRanks,
    #[error("rank {rank} at position {position} is outside [1, {max}]")]
    RankOutOfRange { position: usize, rank: i64, max: usize },
    #[error("ranking is not dense: rank {missing} is absent but higher ranks appear")]
    NonDenseRanking { missing: u32 },
    #[error("rank {rank} at position {position} exceeds the {categories}-category likert scale")]
    RankExceedsScale {
        position: usize,
        rank: u32,
        categories: u32,
    },
    #[error("a session needs at least 2 alternatives, got {0}")]
    TooFewAlternatives(usize),
    #[error("a session needs at least one participant")]
    NoParticipants,
    #[error("rank vector of `{owner}` has {found} entries, expected {expected}")]
    RankLengthMismatch {
        owner: String,
        expected: usize,
        found: usize,
    },
    #[error("threshold must lie in [0, 1], got {0}")]
    ThresholdOutOfRange(f64),
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NonSquare {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("comparison matrix must be at least 2x2, got {0}x{0}")]
    MatrixTooSmall(usize),
    #[error("entry ({row}, {col}) must be positive and finite, got {value}")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },
    #[error("diagonal entry ({index}, {index}) must be 1, got {value}")]
    NonUnitDiagonal { index: usize, value: f64 },
    #[error("entry ({row}, {col}) = {value} is not the reciprocal {expected} of its mirror")]
    NonReciprocal {
        row: usize,
        col: usize,
        value: f64,
        expected: f64,
    },
    #[error("priorities must be finite and nonnegative and sum to 1 (sum = {sum})")]
    InvalidPriorities { sum: f64 },
    #[error("probability at ({row}, {col}) must lie in [0, 1], got {value}")]
    ProbabilityOutOfRange { row: usize, col: usize, value: f64 },
    #[error("probability table is ragged: row {row} has {found} entries, expected {expected}")]
    RaggedTable {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{axis} {index} sums to {sum}, expected 0 or 1")]
    UnnormalizedTable {
        axis: &'static str,
        index: usize,
        sum: f64,
    },
    #[error("homogeneity of stage `{stage}` must lie in [0, 1], got {value}")]
    StageOutOfRange { stage: String, value: f64 },
}

fn check_id(id: &str) -> Result<(), ModelError> {
    if id.trim().is_empty() {
        Err(ModelError::EmptyId)
    } else {
        Ok(())
    }
}

fn check_unique<'a>(kind: &'static str, ids: impl Iterator<Item = &'a str>) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(ModelError::DuplicateId {
                kind,
                id: id.to_string(),
            });
        }
    }
    Ok(())
}

fn check_weight(id: &str, weight: f64) -> Result<(), ModelError> {
    if weight.is_finite() && weight >= 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidWeight {
            id: id.to_string(),
            weight,
        })
    }
}

/// Scales nonnegative weights so they sum to 1.
pub fn normalize_weights(weights: &[f64]) -> Result<Vec<f64>, ModelError> {
    for (i, &w) in weights.iter().enumerate() {
        check_weight(&format!("#{i}"), w)?;
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(ModelError::ZeroWeightSum);
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

/// A candidate decision option.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    pub id: String,
    pub label: String,
}

impl Alternative {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Result<Self, ModelError> {
        let id = id.into();
        check_id(&id)?;
        Ok(Self {
            id,
            label: label.into(),
        })
    }
}

/// A decision maker with a (not yet normalized) voting weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Participant {
    pub id: String,
    pub label: String,
    pub weight: f64,
}

impl Participant {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        weight: f64,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        check_id(&id)?;
        check_weight(&id, weight)?;
        Ok(Self {
            id,
            label: label.into(),
            weight,
        })
    }
}

/// An evaluation criterion for AHP synthesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: String,
    pub label: String,
    pub weight: f64,
}

impl Criterion {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        weight: f64,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        check_id(&id)?;
        check_weight(&id, weight)?;
        Ok(Self {
            id,
            label: label.into(),
            weight,
        })
    }
}

/// Normalized weights of a criterion set.
pub fn criteria_weights(criteria: &[Criterion]) -> Result<Vec<f64>, ModelError> {
    check_unique("criterion", criteria.iter().map(|c| c.id.as_str()))?;
    normalize_weights(&criteria.iter().map(|c| c.weight).collect::<Vec<_>>())
}

/// Ordinal category scale bounding the admissible ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct LikertScale(u32);

impl LikertScale {
    pub const MIN_CATEGORIES: u32 = 2;
    pub const MAX_CATEGORIES: u32 = 9;

    pub fn new(categories: u32) -> Result<Self, ModelError> {
        if (Self::MIN_CATEGORIES..=Self::MAX_CATEGORIES).contains(&categories) {
            Ok(Self(categories))
        } else {
            Err(ModelError::LikertCategories(categories))
        }
    }

    pub fn categories(self) -> u32 {
        self.0
    }
}

impl Default for LikertScale {
    fn default() -> Self {
        Self(Self::MAX_CATEGORIES)
    }
}

impl TryFrom<u32> for LikertScale {
    type Error = ModelError;

    fn try_from(value: u32) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<LikertScale> for u32 {
    fn from(scale: LikertScale) -> Self {
        scale.0
    }
}

/// Dense ranking of the alternatives of a session. Rank 1 is most preferred.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RankVector(Vec<u32>);

impl RankVector {
    /// Validates that every rank is in `[1, n]` and that the ranking is dense.
    pub fn new(ranks: Vec<i64>) -> Result<Self, ModelError> {
        let n = ranks.len();
        if n == 0 {
            return Err(ModelError::EmptyRanks);
        }
        let mut out = Vec::with_capacity(n);
        for (position, &rank) in ranks.iter().enumerate() {
            if rank < 1 || rank > n as i64 {
                return Err(ModelError::RankOutOfRange {
                    position,
                    rank,
                    max: n,
                });
            }
            out.push(rank as u32);
        }
        let max = *out.iter().max().expect("nonempty");
        let mut present = vec![false; max as usize + 1];
        for &r in &out {
            present[r as usize] = true;
        }
        if let Some(missing) = (1..=max).find(|&r| !present[r as usize]) {
            return Err(ModelError::NonDenseRanking { missing });
        }
        Ok(Self(out))
    }

    pub fn from_ranks(ranks: &[u32]) -> Result<Self, ModelError> {
        Self::new(ranks.iter().map(|&r| i64::from(r)).collect())
    }

    pub fn ranks(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_rank(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Reorders the ranks so that entry `i` of the result is entry `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self(perm.iter().map(|&j| self.0[j]).collect())
    }
}

/// How rank distances are turned into probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    /// Divide each distance by its alternative's column total.
    #[default]
    PerAlternative,
    /// Divide each distance by its participant's row total.
    PerLearner,
}

impl NormalizationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PerAlternative => "per_alternative",
            Self::PerLearner => "per_learner",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    #[default]
    Uniform,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub normalization_mode: NormalizationMode,
    pub participant_weights: WeightScheme,
    pub likert: LikertScale,
    /// Homogeneity threshold at or above which a group counts as homogeneous.
    pub consensus_threshold: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            normalization_mode: NormalizationMode::PerAlternative,
            participant_weights: WeightScheme::Uniform,
            likert: LikertScale::default(),
            consensus_threshold: 0.5,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        check_threshold(self.consensus_threshold)
    }
}

fn check_threshold(t: f64) -> Result<(), ModelError> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(ModelError::ThresholdOutOfRange(t))
    }
}

/// One collaborative decision: who ranked what, and the group's ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionSession {
    session_id: String,
    stage: String,
    alternatives: Vec<Alternative>,
    participants: Vec<Participant>,
    individual_ranks: Vec<RankVector>,
    group_ranks: RankVector,
    config: PipelineConfig,
}

impl DecisionSession {
    /// `individual_ranks[k]` belongs to `participants[k]`.
    pub fn new(
        session_id: impl Into<String>,
        stage: impl Into<String>,
        alternatives: Vec<Alternative>,
        participants: Vec<Participant>,
        individual_ranks: Vec<RankVector>,
        group_ranks: RankVector,
        config: PipelineConfig,
    ) -> Result<Self, ModelError> {
        let n = alternatives.len();
        if n < 2 {
            return Err(ModelError::TooFewAlternatives(n));
        }
        if participants.is_empty() {
            return Err(ModelError::NoParticipants);
        }
        check_unique("alternative", alternatives.iter().map(|a| a.id.as_str()))?;
        check_unique("participant", participants.iter().map(|p| p.id.as_str()))?;
        config.validate()?;
        if individual_ranks.len() != participants.len() {
            return Err(ModelError::RankLengthMismatch {
                owner: "individual_ranks".into(),
                expected: participants.len(),
                found: individual_ranks.len(),
            });
        }
        let categories = config.likert.categories();
        let owners = participants
            .iter()
            .map(|p| p.id.as_str())
            .zip(individual_ranks.iter())
            .chain(std::iter::once(("group", &group_ranks)));
        for (owner, ranks) in owners {
            if ranks.len() != n {
                return Err(ModelError::RankLengthMismatch {
                    owner: owner.to_string(),
                    expected: n,
                    found: ranks.len(),
                });
            }
            if let Some((position, &rank)) =
                ranks.ranks().iter().enumerate().find(|(_, &r)| r > categories)
            {
                return Err(ModelError::RankExceedsScale {
                    position,
                    rank,
                    categories,
                });
            }
        }
        if config.participant_weights == WeightScheme::Explicit {
            normalize_weights(&participants.iter().map(|p| p.weight).collect::<Vec<_>>())?;
        }
        Ok(Self {
            session_id: session_id.into(),
            stage: stage.into(),
            alternatives,
            participants,
            individual_ranks,
            group_ranks,
            config,
        })
    }

    pub fn session_id(&self) -> &str {
        &self.session_id
    }

    pub fn stage(&self) -> &str {
        &self.stage
    }

    pub fn alternatives(&self) -> &[Alternative] {
        &self.alternatives
    }

    pub fn participants(&self) -> &[Participant] {
        &self.participants
    }

    pub fn individual_ranks(&self) -> &[RankVector] {
        &self.individual_ranks
    }

    pub fn ranks_of(&self, participant_id: &str) -> Option<&RankVector> {
        self.participants
            .iter()
            .position(|p| p.id == participant_id)
            .map(|k| &self.individual_ranks[k])
    }

    pub fn group_ranks(&self) -> &RankVector {
        &self.group_ranks
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn alternative_count(&self) -> usize {
        self.alternatives.len()
    }

    pub fn participant_count(&self) -> usize {
        self.participants.len()
    }

    /// Participant weights normalized to sum to 1 according to the configured scheme.
    pub fn weights(&self) -> Vec<f64> {
        match self.config.participant_weights {
            WeightScheme::Uniform => {
                let k = self.participants.len() as f64;
                vec![1.0 / k; self.participants.len()]
            }
            WeightScheme::Explicit => normalize_weights(
                &self.participants.iter().map(|p| p.weight).collect::<Vec<_>>(),
            )
            .expect("validated at construction"),
        }
    }

    /// Same session with a different configuration.
    pub fn with_config(&self, config: PipelineConfig) -> Result<Self, ModelError> {
        Self::new(
            self.session_id.clone(),
            self.stage.clone(),
            self.alternatives.clone(),
            self.participants.clone(),
            self.individual_ranks.clone(),
            self.group_ranks.clone(),
            config,
        )
    }
}

/// Square matrix of positive reciprocal pairwise judgments.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl ComparisonMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let size = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != size {
                return Err(ModelError::NonSquare {
                    row,
                    expected: size,
                    found: r.len(),
                });
            }
        }
        if size < 2 {
            return Err(ModelError::MatrixTooSmall(size));
        }
        for (i, r) in rows.iter().enumerate() {
            for (j, &value) in r.iter().enumerate() {
                if !(value.is_finite() && value > 0.0) {
                    return Err(ModelError::NonPositiveEntry { row: i, col: j, value });
                }
            }
        }
        for (i, r) in rows.iter().enumerate() {
            if r[i] != 1.0 {
                return Err(ModelError::NonUnitDiagonal { index: i, value: r[i] });
            }
        }
        for i in 0..size {
            for j in (i + 1)..size {
                let expected = 1.0 / rows[i][j];
                let value = rows[j][i];
                if (value - expected).abs() > RECIPROCAL_TOLERANCE * expected.abs() {
                    return Err(ModelError::NonReciprocal {
                        row: j,
                        col: i,
                        value,
                        expected,
                    });
                }
            }
        }
        Ok(Self {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds the perfectly consistent matrix `a_ij = w_i / w_j`.
    pub fn from_weights(weights: &[f64]) -> Result<Self, ModelError> {
        let rows = weights
            .iter()
            .map(|wi| {
                weights
                    .iter()
                    .map(|wj| if wi == wj { 1.0 } else { wi / wj })
                    .collect()
            })
            .collect();
        Self::new(rows)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.size + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.size..(row + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.size)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Applies the same permutation to rows and columns.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for &i in perm {
            for &j in perm {
                entries.push(self.get(i, j));
            }
        }
        Self { size: n, entries }
    }
}

/// Saaty consistency figures attached to a derived priority vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Consistency {
    pub lambda_max: f64,
    pub consistency_index: f64,
    pub consistency_ratio: f64,
}

/// Normalized priorities, optionally with the consistency of the matrix they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityVector {
    priorities: Vec<f64>,
    consistency: Option<Consistency>,
}

impl PriorityVector {
    /// Accepts finite nonnegative priorities that already sum to 1.
    pub fn new(priorities: Vec<f64>, consistency: Option<Consistency>) -> Result<Self, ModelError> {
        let sum: f64 = priorities.iter().sum();
        let valid = !priorities.is_empty()
            && priorities.iter().all(|p| p.is_finite() && *p >= 0.0)
            && (sum - 1.0).abs() <= SUM_TOLERANCE;
        if !valid {
            return Err(ModelError::InvalidPriorities { sum });
        }
        Ok(Self {
            priorities,
            consistency,
        })
    }

    /// Divides nonnegative scores by their sum.
    pub fn normalized(scores: &[f64]) -> Result<Self, ModelError> {
        let sum: f64 = scores.iter().sum();
        if !(sum.is_finite() && sum > 0.0) || scores.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(ModelError::InvalidPriorities { sum });
        }
        Self::new(scores.iter().map(|s| s / sum).collect(), None)
    }

    pub fn priorities(&self) -> &[f64] {
        &self.priorities
    }

    pub fn consistency(&self) -> Option<&Consistency> {
        self.consistency.as_ref()
    }

    pub fn len(&self) -> usize {
        self.priorities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priorities.is_empty()
    }
}

/// Absolute rank distances between each participant and the group solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceTable {
    distances: Vec<Vec<u32>>,
    column_totals: Vec<u32>,
}

impl DistanceTable {
    /// Column totals are always recomputed from the rows.
    pub fn new(distances: Vec<Vec<u32>>) -> Result<Self, ModelError> {
        let n = distances.first().map_or(0, Vec::len);
        for (row, r) in distances.iter().enumerate() {
            if r.len() != n {
                return Err(ModelError::RaggedTable {
                    row,
                    expected: n,
                    found: r.len(),
                });
            }
        }
        let column_totals = (0..n).map(|i| distances.iter().map(|r| r[i]).sum()).collect();
        Ok(Self {
            distances,
            column_totals,
        })
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.distances
    }

    pub fn column_totals(&self) -> &[u32] {
        &self.column_totals
    }

    pub fn row_total(&self, row: usize) -> u32 {
        self.distances[row].iter().sum()
    }

    pub fn participant_count(&self) -> usize {
        self.distances.len()
    }

    pub fn alternative_count(&self) -> usize {
        self.column_totals.len()
    }

    pub fn is_all_zero(&self) -> bool {
        self.column_totals.iter().all(|&t| t == 0)
    }

    /// Sub-table made of the given participant rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::new(rows.iter().map(|&k| self.distances[k].clone()).collect())
            .expect("rows of a rectangular table")
    }
}

/// Distances normalized into probabilities, rows = participants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    probabilities: Vec<Vec<f64>>,
    mode: NormalizationMode,
    /// Alternatives (column indices) whose total distance is zero.
    zero_columns: Vec<usize>,
}

impl ProbabilityTable {
    /// Checks the range of every cell and the normalization implied by `mode`:
    /// each column (per alternative) or row (per learner) sums to 0 or 1.
    pub fn new(probabilities: Vec<Vec<f64>>, mode: NormalizationMode) -> Result<Self, ModelError> {
        let n = probabilities.first().map_or(0, Vec::len);
        for (row, r) in probabilities.iter().enumerate() {
            if r.len() != n {
                return Err(ModelError::RaggedTable {
                    row,
                    expected: n,
                    found: r.len(),
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) {
                    return Err(ModelError::ProbabilityOutOfRange { row, col, value });
                }
            }
        }
        let column_sums: Vec<f64> = (0..n)
            .map(|i| probabilities.iter().map(|r| r[i]).sum())
            .collect();
        let unnormalized = |sum: f64| sum != 0.0 && (sum - 1.0).abs() > SUM_TOLERANCE;
        match mode {
            NormalizationMode::PerAlternative => {
                if let Some((index, &sum)) =
                    column_sums.iter().enumerate().find(|(_, &s)| unnormalized(s))
                {
                    return Err(ModelError::UnnormalizedTable {
                        axis: "column",
                        index,
                        sum,
                    });
                }
            }
            NormalizationMode::PerLearner => {
                for (index, r) in probabilities.iter().enumerate() {
                    let sum: f64 = r.iter().sum();
                    if unnormalized(sum) {
                        return Err(ModelError::UnnormalizedTable {
                            axis: "row",
                            index,
                            sum,
                        });
                    }
                }
            }
        }
        let zero_columns = column_sums
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 0.0)
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            probabilities,
            mode,
            zero_columns,
        })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.probabilities
    }

    pub fn mode(&self) -> NormalizationMode {
        self.mode
    }

    pub fn zero_columns(&self) -> &[usize] {
        &self.zero_columns
    }

    pub fn participant_count(&self) -> usize {
        self.probabilities.len()
    }

    pub fn alternative_count(&self) -> usize {
        self.probabilities.first().map_or(0, Vec::len)
    }
}

/// Entropy, first-order diversity and uniformity of one distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversityIndices {
    pub entropy: f64,
    pub first_order_diversity: f64,
    pub uniformity: f64,
}

impl DiversityIndices {
    /// Indices of an all-zero distribution.
    pub const NULL: Self = Self {
        entropy: 0.0,
        first_order_diversity: 1.0,
        uniformity: 0.0,
    };
}

/// Full result of analyzing one decision session.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport {
    pub session_id: String,
    pub stage: String,
    pub alternative_ids: Vec<String>,
    pub participant_ids: Vec<String>,
    pub mode: NormalizationMode,
    pub weights: Vec<f64>,
    pub distances: DistanceTable,
    pub probabilities: ProbabilityTable,
    /// Aligned with `participant_ids`.
    pub per_participant: Vec<DiversityIndices>,
    pub alpha_entropy: f64,
    pub gamma_entropy: f64,
    pub beta_entropy: f64,
    pub beta_diversity: f64,
    pub homogeneity: f64,
    pub perfect_consensus: bool,
    /// Pairwise homogeneity, rows and columns aligned with `participant_ids`.
    pub pairwise: Option<Vec<Vec<f64>>>,
    pub diagnostics: Vec<String>,
}

impl HomogeneityReport {
    pub fn indices_of(&self, participant_id: &str) -> Option<&DiversityIndices> {
        self.participant_ids
            .iter()
            .position(|id| id == participant_id)
            .map(|k| &self.per_participant[k])
    }
}

/// Per-stage homogeneity values of a project plus its threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectRecord {
    project_id: String,
    stages: Vec<(String, f64)>,
    threshold: f64,
}

impl ProjectRecord {
    pub fn new(
        project_id: impl Into<String>,
        stages: Vec<(String, f64)>,
        threshold: f64,
    ) -> Result<Self, ModelError> {
        check_threshold(threshold)?;
        for (stage, value) in &stages {
            if !(0.0..=1.0).contains(value) {
                return Err(ModelError::StageOutOfRange {
                    stage: stage.clone(),
                    value: *value,
                });
            }
        }
        Ok(Self {
            project_id: project_id.into(),
            stages,
            threshold,
        })
    }

    pub fn project_id(&self) -> &str {
        &self.project_id
    }

    pub fn stages(&self) -> &[(String, f64)] {
        &self.stages
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}
