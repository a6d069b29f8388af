//! Group homogeneity pipeline.
//!
//! rank distances -> probability table -> per-participant indices ->
//! alpha/gamma/beta partition -> homogeneity `M = 1 / D_beta`, plus the
//! pairwise participant matrix and summative aggregation over project stages.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diversity::{self, DiversityError};
use crate::exec::Execution;
use crate::model::{
    DecisionSession, DistanceTable, DiversityIndices, HomogeneityReport, ModelError,
    NormalizationMode, ProbabilityTable, ProjectRecord,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomogeneityError {
    #[error("group homogeneity needs at least 2 participants")]
    SingleParticipant,
    #[error("project has no stages")]
    EmptyProject,
    #[error(transparent)]
    Diversity(#[from] DiversityError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `|group_rank_i - rank_i^k|` for every participant `k` and alternative `i`.
pub fn rank_distances(session: &DecisionSession) -> DistanceTable {
    let group = session.group_ranks().ranks();
    let rows = session
        .individual_ranks()
        .iter()
        .map(|rv| rv.ranks().iter().zip(group).map(|(r, g)| r.abs_diff(*g)).collect())
        .collect();
    DistanceTable::new(rows).expect("session rank vectors share one length")
}

/// Normalizes distances by column (per alternative) or row (per learner) totals.
/// Zero totals give all-zero columns or rows.
pub fn distance_distribution(table: &DistanceTable, mode: NormalizationMode) -> ProbabilityTable {
    let rows = match mode {
        NormalizationMode::PerAlternative => {
            let totals = table.column_totals();
            table
                .rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .zip(totals)
                        .map(|(&d, &t)| if t == 0 { 0.0 } else { f64::from(d) / f64::from(t) })
                        .collect()
                })
                .collect()
        }
        NormalizationMode::PerLearner => table
            .rows()
            .iter()
            .map(|r| {
                let t: u32 = r.iter().sum();
                r.iter()
                    .map(|&d| if t == 0 { 0.0 } else { f64::from(d) / f64::from(t) })
                    .collect()
            })
            .collect(),
    };
    ProbabilityTable::new(rows, mode).expect("normalized distances satisfy the table invariants")
}

/// Group-level figures for one set of distance rows.
#[derive(Debug, Clone, PartialEq)]
struct GroupIndices {
    probabilities: ProbabilityTable,
    per_participant: Vec<DiversityIndices>,
    alpha: f64,
    gamma: f64,
    beta: f64,
    beta_diversity: f64,
    homogeneity: f64,
    perfect_consensus: bool,
}

fn group_indices(
    distances: &DistanceTable,
    weights: &[f64],
    mode: NormalizationMode,
) -> Result<GroupIndices, HomogeneityError> {
    let n = distances.alternative_count();
    let probabilities = distance_distribution(distances, mode);
    if distances.is_all_zero() {
        return Ok(GroupIndices {
            probabilities,
            per_participant: vec![DiversityIndices::NULL; distances.participant_count()],
            alpha: 0.0,
            gamma: 0.0,
            beta: 0.0,
            beta_diversity: 1.0,
            homogeneity: 1.0,
            perfect_consensus: true,
        });
    }
    let per_participant = probabilities
        .rows()
        .iter()
        .map(|row| diversity::indices(row, n))
        .collect::<Result<Vec<_>, _>>()?;
    let alpha = diversity::alpha_entropy(&probabilities, weights)?;
    let gamma = diversity::gamma_entropy(&probabilities, weights)?;
    let beta = diversity::beta_partition(alpha, gamma)?;
    Ok(GroupIndices {
        probabilities,
        per_participant,
        alpha,
        gamma,
        beta: beta.entropy,
        beta_diversity: beta.diversity,
        homogeneity: 1.0 / beta.diversity,
        perfect_consensus: false,
    })
}

fn diagnostics(session: &DecisionSession, g: &GroupIndices) -> Vec<String> {
    let mut out = Vec::new();
    if g.perfect_consensus {
        out.push("perfect consensus: every participant matches the group ranking".to_string());
        return out;
    }
    for &i in g.probabilities.zero_columns() {
        out.push(format!(
            "alternative `{}` has zero total distance; its column contributes no entropy",
            session.alternatives()[i].id
        ));
    }
    for (p, idx) in session.participants().iter().zip(&g.per_participant) {
        if idx.uniformity > 1.0 {
            out.push(format!(
                "participant `{}` uniformity {:.3} > 1: over-dispersed relative to a normalized uniform",
                p.id, idx.uniformity
            ));
        }
    }
    out
}

/// Runs the full pipeline on a session using its configured normalization and weights.
///
/// The pairwise matrix is left empty; see [`full_report`].
pub fn analyze_session(session: &DecisionSession) -> Result<HomogeneityReport, HomogeneityError> {
    if session.participant_count() < 2 {
        return Err(HomogeneityError::SingleParticipant);
    }
    let mode = session.config().normalization_mode;
    let weights = session.weights();
    let distances = rank_distances(session);
    let g = group_indices(&distances, &weights, mode)?;
    let diagnostics = diagnostics(session, &g);
    Ok(HomogeneityReport {
        session_id: session.session_id().to_string(),
        stage: session.stage().to_string(),
        alternative_ids: session.alternatives().iter().map(|a| a.id.clone()).collect(),
        participant_ids: session.participants().iter().map(|p| p.id.clone()).collect(),
        mode,
        weights,
        distances,
        probabilities: g.probabilities,
        per_participant: g.per_participant,
        alpha_entropy: g.alpha,
        gamma_entropy: g.gamma,
        beta_entropy: g.beta,
        beta_diversity: g.beta_diversity,
        homogeneity: g.homogeneity,
        perfect_consensus: g.perfect_consensus,
        pairwise: None,
        diagnostics,
    })
}

/// Homogeneity of the two-person group `{a, b}` with equal weights,
/// measured against the full session's group ranking.
pub fn pair_homogeneity(
    distances: &DistanceTable,
    a: usize,
    b: usize,
    mode: NormalizationMode,
) -> Result<f64, HomogeneityError> {
    if a == b {
        return Ok(1.0);
    }
    let pair = distances.select_rows(&[a, b]);
    Ok(group_indices(&pair, &[0.5, 0.5], mode)?.homogeneity)
}

pub fn pairwise_homogeneity(session: &DecisionSession) -> Result<Vec<Vec<f64>>, HomogeneityError> {
    pairwise_homogeneity_with(session, Execution::default())
}

/// Symmetric matrix of pair homogeneities with a unit diagonal.
pub fn pairwise_homogeneity_with(
    session: &DecisionSession,
    exec: Execution,
) -> Result<Vec<Vec<f64>>, HomogeneityError> {
    let k = session.participant_count();
    if k < 2 {
        return Err(HomogeneityError::SingleParticipant);
    }
    let mode = session.config().normalization_mode;
    let distances = rank_distances(session);
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| ((a + 1)..k).map(move |b| (a, b)))
        .collect();
    let values = exec.map(&pairs, |&(a, b)| pair_homogeneity(&distances, a, b, mode));
    let mut matrix = vec![vec![1.0; k]; k];
    for (&(a, b), value) in pairs.iter().zip(values) {
        let v = value?;
        matrix[a][b] = v;
        matrix[b][a] = v;
    }
    Ok(matrix)
}

/// Group report with the pairwise matrix attached.
pub fn full_report(
    session: &DecisionSession,
    exec: Execution,
) -> Result<HomogeneityReport, HomogeneityError> {
    let mut report = analyze_session(session)?;
    report.pairwise = Some(pairwise_homogeneity_with(session, exec)?);
    Ok(report)
}

/// Analyzes independent sessions, results in input order.
pub fn analyze_many(
    sessions: &[DecisionSession],
    exec: Execution,
) -> Vec<Result<HomogeneityReport, HomogeneityError>> {
    exec.map(sessions, analyze_session)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Homogeneous,
    Heterogeneous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Homogeneous => "homogeneous",
            Self::Heterogeneous => "heterogeneous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summative {
    pub h_tot: f64,
    pub verdict: Verdict,
}

/// Mean of the stage homogeneities; homogeneous iff the mean reaches the threshold.
pub fn summative_homogeneity(record: &ProjectRecord) -> Result<Summative, HomogeneityError> {
    let stages = record.stages();
    if stages.is_empty() {
        return Err(HomogeneityError::EmptyProject);
    }
    let h_tot = stages.iter().map(|(_, m)| m).sum::<f64>() / stages.len() as f64;
    let verdict = if h_tot >= record.threshold() {
        Verdict::Homogeneous
    } else {
        Verdict::Heterogeneous
    };
    Ok(Summative { h_tot, verdict })
}
