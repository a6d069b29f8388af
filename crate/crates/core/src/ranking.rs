//! Converting preference scores into dense ordinal ranks.

use thiserror::Error;

use crate::model::{LikertScale, ModelError, PriorityVector, RankVector};

pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RankingError {
    #[error("score at position {position} is not finite: {value}")]
    NonFiniteScore { position: usize, value: f64 },
    #[error("at least 2 scores are required, got {0}")]
    TooFewScores(usize),
    #[error("alternative {alternative} has rank {rank}, above the {categories}-category scale")]
    RankExceedsScale {
        alternative: usize,
        rank: u32,
        categories: u32,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Dense ranking, highest score first.
///
/// Scores within `tie_tolerance` of the first score of the current tie group
/// share its rank; the next distinct score gets the next consecutive rank.
pub fn scores_to_ranks(scores: &[f64], tie_tolerance: f64) -> Result<RankVector, RankingError> {
    if scores.len() < 2 {
        return Err(RankingError::TooFewScores(scores.len()));
    }
    if let Some((position, &value)) = scores.iter().enumerate().find(|(_, s)| !s.is_finite()) {
        return Err(RankingError::NonFiniteScore { position, value });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut ranks = vec![0i64; scores.len()];
    let mut rank = 0;
    let mut anchor = f64::INFINITY;
    for &i in &order {
        if rank == 0 || anchor - scores[i] > tie_tolerance {
            rank += 1;
            anchor = scores[i];
        }
        ranks[i] = rank;
    }
    Ok(RankVector::new(ranks)?)
}

pub fn priorities_to_ranks(p: &PriorityVector) -> Result<RankVector, RankingError> {
    scores_to_ranks(p.priorities(), DEFAULT_TIE_TOLERANCE)
}

pub fn validate_likert(ranks: &RankVector, scale: LikertScale) -> Result<(), RankingError> {
    let categories = scale.categories();
    match ranks.ranks().iter().position(|&r| r > categories) {
        Some(alternative) => Err(RankingError::RankExceedsScale {
            alternative,
            rank: ranks.ranks()[alternative],
            categories,
        }),
        None => Ok(()),
    }
}
