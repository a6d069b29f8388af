//! Group-consensus analytics for multi-participant decisions.
//!
//! - [`ahp`]: priority vectors from pairwise comparison matrices, consistency
//!   ratios, criteria synthesis and group aggregation.
//! - [`ranking`]: dense ordinal ranks from preference scores.
//! - [`diversity`]: Shannon entropy, first-order diversity and the
//!   alpha/beta/gamma partition.
//! - [`homogeneity`]: the session pipeline producing the homogeneity
//!   indicator `M = 1 / D_beta`, pairwise participant homogeneity and
//!   summative project evaluation.
//! - [`io`]: session/project/matrix files and report emission.
//!
//! Data-parallel steps take an [`Execution`]; the `parallel` feature (default)
//! backs [`Execution::Parallel`] with rayon.

pub mod ahp;
pub mod diversity;
mod exec;
pub mod homogeneity;
pub mod io;
pub mod model;
pub mod ranking;

pub use exec::Execution;
pub use homogeneity::{analyze_session, full_report, pairwise_homogeneity, summative_homogeneity};
pub use model::*;
