//! Feature ranking, rank fusion, and classifier benchmarking for radiomic
//! feature matrices.
//!
//! The pipeline: load a labeled feature matrix, z-score it, keep the
//! features that pass a one-way ANOVA filter, score the survivors with
//! three supervised and three unsupervised ranking algorithms, fuse each
//! family's ranks with equal weight, and sweep top-k feature subsets
//! through Gaussian Naive Bayes and SMO-trained SVM classifiers under
//! stratified 10-fold cross-validation. A separate module computes four
//! closed-form radiomic texture/shape features (SVR, SDHGLE, SDLGE, Zone
//! Variance) from labeled volumes.

pub mod anova;
pub mod classify;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod lars;
pub mod linalg;
pub mod metrics;
pub mod radiomics;
pub mod rank_fusion;
pub mod rank_supervised;
pub mod rank_unsupervised;
pub mod special;
pub mod synthetic;

pub use error::{Error, Result};
