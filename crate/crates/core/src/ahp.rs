//! Analytic Hierarchy Process: priority derivation, consistency, criteria
//! synthesis and group aggregation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::model::{ComparisonMatrix, Consistency, ModelError, PriorityVector, SUM_TOLERANCE};

/// Saaty random consistency indices for n = 1..=10.
pub const RANDOM_INDEX: [f64; 10] = [0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AhpError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("no random index for {0}x{0} matrices (supported up to 10)")]
    UnsupportedSize(usize),
    #[error("lambda_max {lambda_max} is below the matrix size {size}")]
    LambdaBelowSize { lambda_max: f64, size: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weights must be nonnegative and sum to 1 (sum = {0})")]
    WeightsNotNormalized(f64),
    #[error("cannot aggregate an empty group")]
    EmptyGroup,
    #[error("every aggregated priority is zero")]
    DegenerateAggregate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivation {
    #[default]
    PrincipalEigenvector,
    GeometricMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Weighted geometric mean of individual priority vectors.
    #[default]
    AipWeightedGeometric,
    /// Weighted geometric mean of the judgment matrices, then derivation.
    AijElementwiseGeometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerIteration {
    pub max_iters: usize,
    pub tolerance: f64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AhpConfig {
    pub derivation: Derivation,
    pub aggregation: Aggregation,
    /// CR above this value is reported as inconsistent. Never a hard failure.
    pub cr_limit: f64,
    pub power_iteration: PowerIteration,
}

impl Default for AhpConfig {
    fn default() -> Self {
        Self {
            derivation: Derivation::PrincipalEigenvector,
            aggregation: Aggregation::AipWeightedGeometric,
            cr_limit: 0.10,
            power_iteration: PowerIteration::default(),
        }
    }
}

/// Checks positivity, unit diagonal and reciprocal symmetry of raw judgments.
pub fn validate_comparison_matrix(rows: &[Vec<f64>]) -> Result<ComparisonMatrix, AhpError> {
    Ok(ComparisonMatrix::new(rows.to_vec())?)
}

fn mat_vec(m: &ComparisonMatrix, x: &[f64]) -> Vec<f64> {
    m.rows()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

fn rayleigh(m: &ComparisonMatrix, x: &[f64]) -> f64 {
    let ax = mat_vec(m, x);
    let num: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
    let den: f64 = x.iter().map(|a| a * a).sum();
    num / den
}

fn power_iteration(m: &ComparisonMatrix, cfg: PowerIteration) -> Result<Vec<f64>, AhpError> {
    let n = m.size();
    let mut x = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        let mut y = mat_vec(m, &x);
        let s: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= s);
        residual = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = y;
        if residual <= cfg.tolerance {
            return Ok(x);
        }
    }
    Err(AhpError::NonConvergence {
        iterations: cfg.max_iters,
        residual,
    })
}

fn row_geometric_means(m: &ComparisonMatrix) -> Vec<f64> {
    let n = m.size() as f64;
    let g: Vec<f64> = m
        .rows()
        .map(|row| (row.iter().map(|a| a.ln()).sum::<f64>() / n).exp())
        .collect();
    let s: f64 = g.iter().sum();
    g.into_iter().map(|v| v / s).collect()
}

/// Derives normalized priorities and the consistency of `m`.
///
/// Consistency is left empty for matrices larger than the random-index table.
pub fn derive_priorities(m: &ComparisonMatrix, cfg: &AhpConfig) -> Result<PriorityVector, AhpError> {
    let w = match cfg.derivation {
        Derivation::PrincipalEigenvector => power_iteration(m, cfg.power_iteration)?,
        Derivation::GeometricMean => row_geometric_means(m),
    };
    let lambda_max = rayleigh(m, &w);
    let consistency = match consistency_ratio(m.size(), lambda_max) {
        Ok((ci, cr)) => Some(Consistency {
            lambda_max,
            consistency_index: ci,
            consistency_ratio: cr,
        }),
        Err(AhpError::UnsupportedSize(_)) => None,
        Err(e) => return Err(e),
    };
    let s: f64 = w.iter().sum();
    Ok(PriorityVector::new(w.iter().map(|v| v / s).collect(), consistency)?)
}

/// Returns `(CI, CR)` for an `n x n` matrix with principal eigenvalue `lambda_max`.
pub fn consistency_ratio(n: usize, lambda_max: f64) -> Result<(f64, f64), AhpError> {
    if n > RANDOM_INDEX.len() {
        return Err(AhpError::UnsupportedSize(n));
    }
    // Rounding can leave a consistent matrix a hair below n.
    if lambda_max < n as f64 * (1.0 - 1e-9) {
        return Err(AhpError::LambdaBelowSize {
            lambda_max,
            size: n,
        });
    }
    if n <= 2 {
        return Ok((0.0, 0.0));
    }
    let ci = ((lambda_max - n as f64) / (n as f64 - 1.0)).max(0.0);
    Ok((ci, ci / RANDOM_INDEX[n - 1]))
}

/// True when the consistency ratio exceeds the configured limit.
pub fn exceeds_cr_limit(p: &PriorityVector, cfg: &AhpConfig) -> bool {
    p.consistency()
        .is_some_and(|c| c.consistency_ratio > cfg.cr_limit)
}

fn check_weights(weights: &[f64], expected: usize) -> Result<(), AhpError> {
    if weights.len() != expected {
        return Err(AhpError::DimensionMismatch {
            expected,
            found: weights.len(),
        });
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(AhpError::WeightsNotNormalized(sum));
    }
    Ok(())
}

fn common_len<'a>(vectors: impl Iterator<Item = &'a PriorityVector>) -> Result<usize, AhpError> {
    let mut len = None;
    for v in vectors {
        match len {
            None => len = Some(v.len()),
            Some(n) if n != v.len() => {
                return Err(AhpError::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                })
            }
            _ => {}
        }
    }
    len.ok_or(AhpError::EmptyGroup)
}

/// Weighted sum of per-criterion priorities: `p_i = sum_j w_j * p_ij`.
pub fn synthesize_over_criteria(
    per_criterion: &[PriorityVector],
    criteria_weights: &[f64],
) -> Result<PriorityVector, AhpError> {
    let n = common_len(per_criterion.iter())?;
    check_weights(criteria_weights, per_criterion.len())?;
    let mut out = vec![0.0; n];
    for (pv, w) in per_criterion.iter().zip(criteria_weights) {
        for (o, p) in out.iter_mut().zip(pv.priorities()) {
            *o += w * p;
        }
    }
    Ok(PriorityVector::normalized(&out)?)
}

/// Aggregates individual priority vectors by weighted geometric mean.
///
/// A zero component in any vector with positive weight zeroes the group component.
pub fn aggregate_group(
    individual: &[PriorityVector],
    weights: &[f64],
) -> Result<PriorityVector, AhpError> {
    let n = common_len(individual.iter())?;
    check_weights(weights, individual.len())?;
    let mut log_sum = vec![0.0; n];
    let mut zeroed = vec![false; n];
    for (pv, &w) in individual.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        let total: f64 = pv.priorities().iter().sum();
        for (i, &p) in pv.priorities().iter().enumerate() {
            if p == 0.0 {
                zeroed[i] = true;
            } else {
                log_sum[i] += w * (p / total).ln();
            }
        }
    }
    let raw: Vec<f64> = log_sum
        .iter()
        .zip(&zeroed)
        .map(|(l, &z)| if z { 0.0 } else { l.exp() })
        .collect();
    if raw.iter().all(|&v| v == 0.0) {
        return Err(AhpError::DegenerateAggregate);
    }
    Ok(PriorityVector::normalized(&raw)?)
}

/// Elementwise weighted geometric mean of judgment matrices.
pub fn aggregate_judgments(
    matrices: &[ComparisonMatrix],
    weights: &[f64],
) -> Result<ComparisonMatrix, AhpError> {
    let n = matrices.first().ok_or(AhpError::EmptyGroup)?.size();
    if let Some(m) = matrices.iter().find(|m| m.size() != n) {
        return Err(AhpError::DimensionMismatch {
            expected: n,
            found: m.size(),
        });
    }
    check_weights(weights, matrices.len())?;
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        1.0
                    } else if i < j {
                        matrices
                            .iter()
                            .zip(weights)
                            .map(|(m, w)| w * m.get(i, j).ln())
                            .sum::<f64>()
                            .exp()
                    } else {
                        // mirror of the upper triangle, so reciprocity is exact
                        1.0 / matrices
                            .iter()
                            .zip(weights)
                            .map(|(m, w)| w * m.get(j, i).ln())
                            .sum::<f64>()
                            .exp()
                    }
                })
                .collect()
        })
        .collect();
    Ok(ComparisonMatrix::new(rows)?)
}

/// Group solution from individual judgment matrices, using `cfg.aggregation`.
pub fn group_solution(
    matrices: &[ComparisonMatrix],
    weights: &[f64],
    cfg: &AhpConfig,
    exec: Execution,
) -> Result<PriorityVector, AhpError> {
    match cfg.aggregation {
        Aggregation::AipWeightedGeometric => {
            let individual = exec
                .map(matrices, |m| derive_priorities(m, cfg))
                .into_iter()
                .collect::<Result<Vec<_>, _>>()?;
            aggregate_group(&individual, weights)
        }
        Aggregation::AijElementwiseGeometric => {
            derive_priorities(&aggregate_judgments(matrices, weights)?, cfg)
        }
    }
}
