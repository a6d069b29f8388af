#![allow(dead_code)]

use consensus_core::{
    Alternative, DecisionSession, NormalizationMode, Participant, PipelineConfig, RankVector,
    WeightScheme,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random dense ranking over `n` alternatives, ties allowed.
pub fn dense_ranking<R: Rng>(rng: &mut R, n: usize) -> Vec<u32> {
    let levels = rng.gen_range(1..=n);
    let raw: Vec<usize> = (0..n).map(|_| rng.gen_range(0..levels)).collect();
    let mut used: Vec<usize> = raw.clone();
    used.sort_unstable();
    used.dedup();
    raw.iter()
        .map(|v| used.binary_search(v).unwrap() as u32 + 1)
        .collect()
}

pub fn build_session(
    individual: Vec<Vec<u32>>,
    group: Vec<u32>,
    mode: NormalizationMode,
    weights: Option<Vec<f64>>,
) -> DecisionSession {
    let n = group.len();
    let explicit = weights.is_some();
    let weights = weights.unwrap_or_else(|| vec![1.0; individual.len()]);
    DecisionSession::new(
        "random",
        "stage",
        (0..n)
            .map(|i| Alternative::new(format!("A{i}"), format!("alternative {i}")).unwrap())
            .collect(),
        weights
            .iter()
            .enumerate()
            .map(|(k, &w)| Participant::new(format!("P{k}"), format!("participant {k}"), w).unwrap())
            .collect(),
        individual
            .into_iter()
            .map(|r| RankVector::from_ranks(&r).unwrap())
            .collect(),
        RankVector::from_ranks(&group).unwrap(),
        PipelineConfig {
            normalization_mode: mode,
            participant_weights: if explicit {
                WeightScheme::Explicit
            } else {
                WeightScheme::Uniform
            },
            ..PipelineConfig::default()
        },
    )
    .unwrap()
}

/// 2-8 participants, 2-9 alternatives, uniform weights.
pub fn random_session<R: Rng>(rng: &mut R, mode: NormalizationMode) -> DecisionSession {
    let k = rng.gen_range(2..=8);
    let n = rng.gen_range(2..=9);
    let group = dense_ranking(rng, n);
    let individual = (0..k).map(|_| dense_ranking(rng, n)).collect();
    build_session(individual, group, mode, None)
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Same decision with alternatives relabeled by `perm`.
pub fn relabel(session: &DecisionSession, perm: &[usize]) -> DecisionSession {
    DecisionSession::new(
        session.session_id(),
        session.stage(),
        perm.iter().map(|&j| session.alternatives()[j].clone()).collect(),
        session.participants().to_vec(),
        session
            .individual_ranks()
            .iter()
            .map(|r| r.permuted(perm))
            .collect(),
        session.group_ranks().permuted(perm),
        *session.config(),
    )
    .unwrap()
}

/// The five-alternative, three-learner worked example.
pub const TABLE2_GROUP: [u32; 5] = [1, 3, 5, 4, 2];
pub const TABLE2_LEARNERS: [[u32; 5]; 3] = [[2, 4, 3, 1, 5], [2, 3, 5, 4, 1], [1, 3, 4, 2, 2]];

pub fn worked_example(mode: NormalizationMode) -> DecisionSession {
    build_session(
        TABLE2_LEARNERS.iter().map(|r| r.to_vec()).collect(),
        TABLE2_GROUP.to_vec(),
        mode,
        None,
    )
}
