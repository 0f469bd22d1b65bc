//! Stage orchestration, configuration and the run manifest.
//!
//! Stages communicate through files in one output directory:
//!
//! | stage             | reads                          | writes                                   |
//! |-------------------|--------------------------------|------------------------------------------|
//! | `ingest`          | WARC files, HTML directories   | `articles.jsonl`, `rejects.jsonl`        |
//! | `label`           | `articles.jsonl`, PC1 CSV      | `labeled.jsonl`                          |
//! | `annotate`        | `labeled.jsonl`                | `annotations.conllu`                     |
//! | `featurize`       | `annotations.conllu`           | `features.csv`, `features.meta.json`     |
//! | `train-eval`      | `features.csv`, `labeled.jsonl`| `folds.json`, `reports/`                 |
//! | `export-finetune` | `labeled.jsonl`, `folds.json`  | `finetune/{articles,folds,manifest}`     |
//!
//! Each stage records its counts in `manifest.json`.

mod config;
mod manifest;
mod records;
mod stages;

use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{
    IngestConfig, IoConfig, LabelConfig, LanguageConfig, PipelineConfig, TrainSection,
};
pub use manifest::{
    created_timestamp, sha256_file, DirLock, RunManifest, StageRecord, LOCK_NAME, MANIFEST_NAME,
    STAGES, TIMINGS_NAME,
};
pub use records::{doc_id, read_jsonl, to_jsonl, ArticleRecord, RejectRecord};
pub use stages::{
    run_all, run_annotate, run_export_finetune, run_featurize, run_ingest, run_label,
    run_train_eval,
};

/// Failures, each mapped to a stable process exit code.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("empty result: {0}")]
    Empty(String),
    #[error("misaligned data: {0}")]
    Misaligned(String),
}

impl PipelineError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 config, 3 I/O or unreadable input, 4 empty result, 5 misalignment.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Io { .. } | PipelineError::Input(_) => 3,
            PipelineError::Empty(_) => 4,
            PipelineError::Misaligned(_) => 5,
        }
    }
}
