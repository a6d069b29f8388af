mod common;

use consensus_core::ahp::{self, AhpConfig, Derivation};
use consensus_core::diversity;
use consensus_core::homogeneity;
use consensus_core::{ComparisonMatrix, Execution, NormalizationMode, PriorityVector, ProbabilityTable};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn mode() -> impl Strategy<Value = NormalizationMode> {
    prop_oneof![
        Just(NormalizationMode::PerAlternative),
        Just(NormalizationMode::PerLearner)
    ]
}

fn normalized(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter_map("nonzero", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-6).then(|| v.iter().map(|x| x / s).collect())
    })
}

proptest! {
    #[test]
    fn entropy_of_normalized_vectors_is_bounded(p in normalized(2..12)) {
        let h = diversity::shannon_entropy(&p).unwrap();
        let n = p.len() as f64;
        prop_assert!(h >= 0.0);
        prop_assert!(h <= n.ln() + 1e-12);
    }

    #[test]
    fn single_spike_has_zero_entropy(n in 1usize..10, at in 0usize..10) {
        let mut p = vec![0.0; n];
        p[at % n] = 1.0;
        prop_assert_eq!(diversity::shannon_entropy(&p).unwrap(), 0.0);
    }

    #[test]
    fn uniform_diversity_is_the_count(n in 2usize..50) {
        let p = vec![1.0 / n as f64; n];
        let d = diversity::first_order_diversity(diversity::shannon_entropy(&p).unwrap()).unwrap();
        prop_assert!((d - n as f64).abs() < 1e-9 * n as f64);
    }

    #[test]
    fn gamma_dominates_alpha(rows in prop::collection::vec(normalized(4..5), 1..6), raw_w in prop::collection::vec(0.01f64..1.0, 6)) {
        let table = ProbabilityTable::new(rows.clone(), NormalizationMode::PerLearner).unwrap();
        let w: Vec<f64> = raw_w[..rows.len()].to_vec();
        let s: f64 = w.iter().sum();
        let w: Vec<f64> = w.iter().map(|x| x / s).collect();
        let a = diversity::alpha_entropy(&table, &w).unwrap();
        let g = diversity::gamma_entropy(&table, &w).unwrap();
        prop_assert!(g >= a - 1e-12);
        let b = diversity::beta_partition(a, g).unwrap();
        prop_assert!(b.diversity >= 1.0);
        prop_assert!((b.entropy.exp() * a.exp() - g.exp()).abs() <= 1e-9 * g.exp());
    }

    #[test]
    fn analysis_invariants(seed in any::<u64>(), mode in mode()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_session(&mut rng, mode);
        let r = homogeneity::analyze_session(&s).unwrap();
        prop_assert!(r.homogeneity > 0.0 && r.homogeneity <= 1.0);
        prop_assert!((r.beta_entropy - (r.gamma_entropy - r.alpha_entropy)).abs() <= 1e-9);
        if !r.perfect_consensus {
            prop_assert!((r.homogeneity - 1.0 / r.beta_diversity).abs() <= 1e-15);
        }
        let seq = homogeneity::pairwise_homogeneity_with(&s, Execution::Sequential).unwrap();
        let par = homogeneity::pairwise_homogeneity_with(&s, Execution::Parallel).unwrap();
        prop_assert_eq!(&seq, &par);
    }

    #[test]
    fn distances_are_symmetric_in_their_arguments(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_session(&mut rng, NormalizationMode::PerAlternative);
        let d = homogeneity::rank_distances(&s);
        // swap roles: first participant becomes the group reference
        let first = s.individual_ranks()[0].ranks().to_vec();
        let swapped = build_session(
            vec![s.group_ranks().ranks().to_vec()],
            first,
            NormalizationMode::PerAlternative,
            None,
        );
        let swapped_d = homogeneity::rank_distances(&swapped);
        prop_assert_eq!(&swapped_d.rows()[0], &d.rows()[0]);
    }

    #[test]
    fn duplicated_learner_moves_pool_toward_its_row(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_session(&mut rng, NormalizationMode::PerLearner);
        let mut rows: Vec<Vec<u32>> = s.individual_ranks().iter().map(|r| r.ranks().to_vec()).collect();
        let before = homogeneity::analyze_session(&s).unwrap();
        rows.push(rows[0].clone());
        let grown = build_session(rows, s.group_ranks().ranks().to_vec(), NormalizationMode::PerLearner, None);
        let after = homogeneity::analyze_session(&grown).unwrap();
        // the duplicated distribution's KL divergence from the pooled one can only shrink
        let kl = |r: &consensus_core::HomogeneityReport| {
            let k = r.participant_ids.len() as f64;
            let q: Vec<f64> = (0..r.alternative_ids.len())
                .map(|i| r.probabilities.rows().iter().map(|row| row[i]).sum::<f64>() / k)
                .collect();
            r.probabilities.rows()[0]
                .iter()
                .zip(&q)
                .filter(|(p, _)| **p > 0.0)
                .map(|(p, qi)| p * (p / qi).ln())
                .sum::<f64>()
        };
        prop_assert!(kl(&after) <= kl(&before) + 1e-12);
    }

    #[test]
    fn consistent_matrices_recover_weights(w in prop::collection::vec(0.01f64..1.0, 2..10), gm in any::<bool>()) {
        let m = ComparisonMatrix::from_weights(&w).unwrap();
        let cfg = AhpConfig {
            derivation: if gm { Derivation::GeometricMean } else { Derivation::PrincipalEigenvector },
            ..AhpConfig::default()
        };
        let p = ahp::derive_priorities(&m, &cfg).unwrap();
        let s: f64 = w.iter().sum();
        for (got, wi) in p.priorities().iter().zip(&w) {
            prop_assert!((got - wi / s).abs() < 1e-8);
        }
        prop_assert!(p.consistency().unwrap().consistency_ratio < 1e-8);
        prop_assert!(p.consistency().unwrap().lambda_max >= w.len() as f64 - 1e-9);
    }

    #[test]
    fn priorities_are_permutation_equivariant(entries in prop::collection::vec(1u32..10, 28), seed in any::<u64>(), gm in any::<bool>()) {
        // random reciprocal 8x8 with Saaty-scale judgments
        let n = 8;
        let mut rows = vec![vec![1.0; n]; n];
        let mut it = entries.iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f64::from(*it.next().unwrap());
                let v = if (i + j) % 2 == 0 { v } else { 1.0 / v };
                rows[i][j] = v;
                rows[j][i] = 1.0 / v;
            }
        }
        let m = ComparisonMatrix::new(rows).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perm = random_permutation(&mut rng, n);
        let cfg = AhpConfig {
            derivation: if gm { Derivation::GeometricMean } else { Derivation::PrincipalEigenvector },
            ..AhpConfig::default()
        };
        let base = ahp::derive_priorities(&m, &cfg).unwrap();
        let permuted = ahp::derive_priorities(&m.permuted(&perm), &cfg).unwrap();
        for (i, &j) in perm.iter().enumerate() {
            prop_assert!((permuted.priorities()[i] - base.priorities()[j]).abs() < 1e-9);
        }
    }

    #[test]
    fn aggregation_is_scale_free(a in normalized(3..4), b in normalized(3..4), scale in 0.1f64..0.9) {
        let pa = PriorityVector::normalized(&a).unwrap();
        let pb = PriorityVector::normalized(&b).unwrap();
        let scaled = PriorityVector::normalized(&a.iter().map(|x| x * scale).collect::<Vec<_>>()).unwrap();
        let g1 = ahp::aggregate_group(&[pa, pb.clone()], &[0.3, 0.7]);
        let g2 = ahp::aggregate_group(&[scaled, pb], &[0.3, 0.7]);
        match (g1, g2) {
            (Ok(x), Ok(y)) => {
                for (u, v) in x.priorities().iter().zip(y.priorities()) {
                    prop_assert!((u - v).abs() < 1e-12);
                }
            }
            (x, y) => prop_assert_eq!(x.is_err(), y.is_err()),
        }
    }
}
