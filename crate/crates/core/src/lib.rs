//! Distance covariance and correlation for paired samples.
//!
//! The empirical squared distance covariance of two samples is the mean
//! product moment of their double-centered interpoint distance matrices;
//! distance correlation is the same quantity scaled by the geometric mean of
//! the two distance variances. This crate implements the plug-in ("naive")
//! estimator together with a diagonal-excluded variant that removes most of
//! the finite-sample inflation caused by the zero diagonal of each distance
//! matrix, plus the machinery around them:
//!
//! * [`pairwise_distances`] / [`double_center`] — the shared pipeline.
//! * [`dcov2`], [`dvar2`], [`dcor`], [`pearson`], [`cor_of_cors`] — scalar
//!   statistics under either estimator variant.
//! * [`permutation_test`] — seeded, reproducible independence test.
//! * [`dcor_matrix`] / [`top_eigen`] — pairwise dependence matrices over
//!   many variables and their spectral decomposition.
//! * [`generate`] / [`bias_study`] / [`power_study`] — deterministic data
//!   generators and Monte Carlo harnesses for estimator bias and test power.
//!
//! All randomness flows through ChaCha8 seeded via SplitMix64-derived
//! substreams (see [`seeding`]), so every result is reproducible from a
//! single u64 seed, independent of thread scheduling.

mod distance;
mod eigen;
mod error;
mod estimators;
mod inference;
mod kahan;
mod matrix;
mod simulation;

pub mod cli;
pub mod seeding;

pub use distance::{
    double_center, pairwise_distances, CenteredDistanceMatrix, DistanceMatrix, PairedSample,
    Sample,
};
pub use eigen::{sym_eigen, top_eigen, EigenResult};
pub use error::{Error, Result};
pub use estimators::{
    cor_of_cors, dcor, dcov2, dependence_from_centered, dvar2, pearson, DependenceEstimate,
    DependenceParts, EstimatorVariant,
};
pub use inference::{permutation_test, PermTestConfig, PermTestResult, TestStatistic};
pub use matrix::{dcor_matrix, DcorMatrix};
pub use simulation::{
    bias_study, generate, generate_matrix, power_study, BiasStudyConfig, BiasStudyResult,
    BiasStudyRow, GeneratorKind, GeneratorParams, GeneratorSpec, PowerStudyConfig, PowerStudyRow,
};
