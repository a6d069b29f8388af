//! Shannon entropy and first-order diversity, and the additive
//! alpha/beta/gamma partition of a group's entropy.
//!
//! All logarithms are natural. `0 * ln 0` is taken as 0. Sums run in
//! alternative-index order so results do not depend on scheduling.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{DiversityIndices, ProbabilityTable, SUM_TOLERANCE};

/// Slack allowed when gamma entropy falls below alpha through rounding.
pub const PARTITION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiversityError {
    #[error("component {index} = {value} lies outside [0, 1]")]
    ComponentOutOfRange { index: usize, value: f64 },
    #[error("entropy must be nonnegative, got {0}")]
    NegativeEntropy(f64),
    #[error("uniformity needs at least 2 alternatives, got {0}")]
    InvalidCount(usize),
    #[error("expected {expected} weights summing to 1, got {found} summing to {sum}")]
    WeightMismatch { expected: usize, found: usize, sum: f64 },
    #[error("probability table is empty")]
    EmptyTable,
    #[error("gamma entropy {gamma} is below alpha entropy {alpha}")]
    PartitionViolation { alpha: f64, gamma: f64 },
}

/// `-sum p ln p`. The input need not sum to 1.
pub fn shannon_entropy(p: &[f64]) -> Result<f64, DiversityError> {
    let mut h = 0.0;
    for (index, &value) in p.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(DiversityError::ComponentOutOfRange { index, value });
        }
        if value > 0.0 {
            h -= value * value.ln();
        }
    }
    // -0.0 for degenerate inputs
    Ok(h.max(0.0))
}

pub fn first_order_diversity(h: f64) -> Result<f64, DiversityError> {
    if h < 0.0 || h.is_nan() {
        return Err(DiversityError::NegativeEntropy(h));
    }
    Ok(h.exp())
}

/// `h / ln n`. Exceeds 1 for over-dispersed, unnormalized inputs.
pub fn uniformity(h: f64, n: usize) -> Result<f64, DiversityError> {
    if n < 2 {
        return Err(DiversityError::InvalidCount(n));
    }
    if h < 0.0 || h.is_nan() {
        return Err(DiversityError::NegativeEntropy(h));
    }
    Ok(h / (n as f64).ln())
}

/// Entropy, diversity and uniformity of one distribution over `n` alternatives.
pub fn indices(p: &[f64], n: usize) -> Result<DiversityIndices, DiversityError> {
    let entropy = shannon_entropy(p)?;
    Ok(DiversityIndices {
        entropy,
        first_order_diversity: first_order_diversity(entropy)?,
        uniformity: uniformity(entropy, n)?,
    })
}

fn check_weights(table: &ProbabilityTable, weights: &[f64]) -> Result<(), DiversityError> {
    if table.participant_count() == 0 {
        return Err(DiversityError::EmptyTable);
    }
    let sum: f64 = weights.iter().sum();
    if weights.len() != table.participant_count()
        || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0))
        || (sum - 1.0).abs() > SUM_TOLERANCE
    {
        return Err(DiversityError::WeightMismatch {
            expected: table.participant_count(),
            found: weights.len(),
            sum,
        });
    }
    Ok(())
}

/// Weighted mean of the participants' row entropies.
pub fn alpha_entropy(table: &ProbabilityTable, weights: &[f64]) -> Result<f64, DiversityError> {
    check_weights(table, weights)?;
    let mut h = 0.0;
    for (row, w) in table.rows().iter().zip(weights) {
        h += w * shannon_entropy(row)?;
    }
    Ok(h)
}

/// Weighted pooled distribution `q_i = sum_k w_k p_ik`.
pub fn pooled_distribution(
    table: &ProbabilityTable,
    weights: &[f64],
) -> Result<Vec<f64>, DiversityError> {
    check_weights(table, weights)?;
    let mut q = vec![0.0; table.alternative_count()];
    for (row, w) in table.rows().iter().zip(weights) {
        for (qi, p) in q.iter_mut().zip(row) {
            *qi += w * p;
        }
    }
    // pooled mass can overshoot 1 by an ulp
    Ok(q.into_iter().map(|v| v.min(1.0)).collect())
}

/// Entropy of the weighted pooled distribution.
pub fn gamma_entropy(table: &ProbabilityTable, weights: &[f64]) -> Result<f64, DiversityError> {
    shannon_entropy(&pooled_distribution(table, weights)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPartition {
    pub entropy: f64,
    pub diversity: f64,
}

/// `H_beta = H_gamma - H_alpha` and `D_beta = exp(H_beta) = D_gamma / D_alpha`.
pub fn beta_partition(h_alpha: f64, h_gamma: f64) -> Result<BetaPartition, DiversityError> {
    let diff = h_gamma - h_alpha;
    if diff.is_nan() || diff < -PARTITION_TOLERANCE {
        return Err(DiversityError::PartitionViolation {
            alpha: h_alpha,
            gamma: h_gamma,
        });
    }
    let entropy = diff.max(0.0);
    Ok(BetaPartition {
        entropy,
        diversity: entropy.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NormalizationMode;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(shannon_entropy(&[0.5, 0.0, 0.0, 0.0, 0.2]).unwrap(), 0.668, epsilon = 5e-4);
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(shannon_entropy(&[0.0, 0.0, 0.167, 0.222, 0.0]).unwrap(), 0.633, epsilon = 5e-4);
        assert_abs_diff_eq!(shannon_entropy(&[0.2; 5]).unwrap(), 5f64.ln(), epsilon = 1e-15);
        assert!(matches!(
            shannon_entropy(&[0.5, 1.5]),
            Err(DiversityError::ComponentOutOfRange { index: 1, .. })
        ));
        assert!(shannon_entropy(&[-0.1]).is_err());
    }

    #[test]
    fn diversity_and_uniformity_examples() {
        assert_abs_diff_eq!(first_order_diversity(1.732).unwrap(), 5.652, epsilon = 5e-4);
        assert_eq!(first_order_diversity(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(first_order_diversity(0.633).unwrap(), 1.883, epsilon = 5e-4);
        assert!(first_order_diversity(-0.1).is_err());

        assert_abs_diff_eq!(uniformity(1.732, 5).unwrap(), 1.076, epsilon = 5e-4);
        assert_abs_diff_eq!(uniformity(5f64.ln(), 5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(uniformity(0.668, 5).unwrap(), 0.415, epsilon = 5e-4);
        assert_eq!(uniformity(1.0, 1), Err(DiversityError::InvalidCount(1)));
    }

    #[test]
    fn alpha_and_gamma() {
        let same = ProbabilityTable::new(
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            NormalizationMode::PerLearner,
        )
        .unwrap();
        let w = [0.5, 0.5];
        let a = alpha_entropy(&same, &w).unwrap();
        assert_abs_diff_eq!(a, 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(gamma_entropy(&same, &w).unwrap(), a, epsilon = 1e-15);

        let spikes = ProbabilityTable::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            NormalizationMode::PerLearner,
        )
        .unwrap();
        assert_eq!(alpha_entropy(&spikes, &w).unwrap(), 0.0);
        assert_abs_diff_eq!(gamma_entropy(&spikes, &w).unwrap(), 2f64.ln(), epsilon = 1e-15);

        let single = ProbabilityTable::new(vec![vec![0.25, 0.75]], NormalizationMode::PerLearner).unwrap();
        assert_eq!(
            alpha_entropy(&single, &[1.0]).unwrap(),
            shannon_entropy(&[0.25, 0.75]).unwrap()
        );
        assert!(matches!(
            alpha_entropy(&single, &[0.5, 0.5]),
            Err(DiversityError::WeightMismatch { .. })
        ));
        assert!(matches!(
            gamma_entropy(&spikes, &[0.3, 0.3]),
            Err(DiversityError::WeightMismatch { .. })
        ));
    }

    #[test]
    fn beta_examples() {
        let b = beta_partition(0.927, 1.508).unwrap();
        assert_abs_diff_eq!(b.entropy, 0.581, epsilon = 1e-12);
        assert_abs_diff_eq!(b.diversity, 1.787, epsilon = 1e-3);
        assert_eq!(beta_partition(0.7, 0.7).unwrap(), BetaPartition { entropy: 0.0, diversity: 1.0 });
        let d = beta_partition(0.0, 2f64.ln()).unwrap();
        assert_abs_diff_eq!(d.diversity, 2.0, epsilon = 1e-15);
        assert_eq!(beta_partition(1.0, 1.0 - 1e-12).unwrap().entropy, 0.0);
        assert!(matches!(
            beta_partition(1.0, 0.5),
            Err(DiversityError::PartitionViolation { .. })
        ));
    }
}
