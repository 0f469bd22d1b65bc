//! Core library for the `newsgauge` pipeline.
//!
//! The pipeline pulls article HTML out of WARC archives (or plain directories),
//! isolates the main article body with a heuristic DOM scorer, derives a fixed
//! registry-defined linguistic feature vector per article, labels articles by a
//! median split of domain-level quality scores and evaluates three classical
//! classifiers under seeded stratified cross-validation.
//!
//! Module map:
//!
//! * [`ingest`] – WARC / directory readers, charset resolution, language filter.
//! * [`parser`] – noise stripping, candidate scoring and main-body refinement.
//! * [`features`] – feature registry, CoNLL-U style annotations, featurization.
//! * [`labels`] – domain normalization, quality-score join and binarization.
//! * [`ml`] – Gaussian naive Bayes, logistic regression, random forest.
//! * [`eval`] – stratified folds, metrics and cross-validation reports.
//! * [`pipeline`] – configuration, manifests and the stage commands used by the CLI.

pub mod eval;
pub mod features;
pub mod ingest;
pub mod labels;
pub mod ml;
pub mod parser;
pub mod pipeline;

mod class;
mod hashing;

pub use class::Class;
