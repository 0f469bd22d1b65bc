//! Seeded stratified k-fold cross-validation and the report metric suite.

mod folds;
mod metrics;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ml::{Dataset, MlError, ModelKind, Predictor, Trainer};
use crate::Class;

pub use folds::{stratified_kfold, FoldSpec};
pub use metrics::{confusion_metrics, mean_std, roc_auc, Confusion};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("folds: {0}")]
    Folds(String),
    #[error("length mismatch: {left} vs {right}")]
    Length { left: usize, right: usize },
    #[error("ROC AUC needs both classes")]
    SingleClass,
    #[error("no predictions")]
    Empty,
    #[error("fold spec does not match dataset: {0}")]
    Misaligned(String),
    #[error("fold {fold}: training failed: {source}")]
    Train {
        fold: usize,
        #[source]
        source: MlError,
    },
    #[error("fold {fold}: {source}")]
    Score {
        fold: usize,
        #[source]
        source: Box<EvalError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub accuracy: f64,
    pub roc_auc: f64,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
}

impl MetricSet {
    pub const NAMES: [&'static str; 5] = ["accuracy", "roc_auc", "f1", "precision", "recall"];

    pub fn values(&self) -> [f64; 5] {
        [self.accuracy, self.roc_auc, self.f1, self.precision, self.recall]
    }

    fn from_values(v: [f64; 5]) -> Self {
        Self {
            accuracy: v[0],
            roc_auc: v[1],
            f1: v[2],
            precision: v[3],
            recall: v[4],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    #[serde(flatten)]
    pub metrics: MetricSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub model_kind: ModelKind,
    pub fold_spec_hash: String,
    pub k: usize,
    pub seed: u64,
    pub n_rows: usize,
    pub per_fold: Vec<FoldResult>,
    pub mean: MetricSet,
    /// Population standard deviation over the folds.
    pub std: MetricSet,
}

/// Scores one held-out fold.
pub fn evaluate<P: Predictor>(model: &P, test: &Dataset) -> Result<MetricSet, EvalError> {
    let mut proba = Vec::with_capacity(test.len());
    for i in 0..test.len() {
        proba.push(model.predict_proba(test.row(i)).map_err(|e| EvalError::Train {
            fold: usize::MAX,
            source: e,
        })?);
    }
    let pred: Vec<Class> = proba.iter().map(|&p| crate::ml::label_for(p)).collect();
    let c = confusion_metrics(&pred, test.labels())?;
    Ok(MetricSet {
        accuracy: c.accuracy,
        roc_auc: roc_auc(&proba, test.labels())?,
        f1: c.f1,
        precision: c.precision,
        recall: c.recall,
    })
}

/// Trains on k-1 folds and scores the held-out one, for every fold.
pub fn cross_validate<T: Trainer>(
    data: &Dataset,
    trainer: &T,
    spec: &FoldSpec,
) -> Result<MetricsReport, EvalError> {
    spec.validate()?;
    if spec.len() != data.len() {
        return Err(EvalError::Misaligned(format!(
            "{} assignments for {} rows",
            spec.len(),
            data.len()
        )));
    }
    if let Some(ids) = &spec.doc_ids {
        if let Some(i) = ids.iter().zip(data.row_ids()).position(|(a, b)| a != b) {
            return Err(EvalError::Misaligned(format!(
                "row {i}: fold spec has {:?}, dataset has {:?}",
                ids[i],
                data.row_ids()[i]
            )));
        }
    }
    let results: Vec<Result<FoldResult, EvalError>> = (0..spec.k)
        .into_par_iter()
        .map(|fold| {
            let (tr, te) = spec.split(fold);
            let train = data.subset(&tr);
            let test = data.subset(&te);
            let model = trainer
                .fit(&train)
                .map_err(|source| EvalError::Train { fold, source })?;
            let metrics = evaluate(&model, &test).map_err(|e| match e {
                EvalError::Train { source, .. } => EvalError::Train { fold, source },
                other => EvalError::Score {
                    fold,
                    source: Box::new(other),
                },
            })?;
            Ok(FoldResult {
                fold,
                n_train: tr.len(),
                n_test: te.len(),
                metrics,
            })
        })
        .collect();
    let per_fold = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut mean = [0.0; 5];
    let mut std = [0.0; 5];
    for m in 0..5 {
        let v: Vec<f64> = per_fold.iter().map(|f| f.metrics.values()[m]).collect();
        (mean[m], std[m]) = mean_std(&v);
    }
    Ok(MetricsReport {
        model_kind: trainer.kind(),
        fold_spec_hash: spec.hash(),
        k: spec.k,
        seed: spec.seed,
        n_rows: data.len(),
        per_fold,
        mean: MetricSet::from_values(mean),
        std: MetricSet::from_values(std),
    })
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Text table with one `mean ± std` row per model.
pub fn render_table(reports: &[MetricsReport]) -> String {
    const HEAD: [&str; 6] = ["Classifier/Model", "Accuracy", "ROC AUC", "F1 Score", "Precision", "Recall"];
    let k = reports.first().map_or(5, |r| r.k);
    let mut rows = vec![HEAD.map(String::from).to_vec()];
    for r in reports {
        let mut row = vec![r.model_kind.display_name().to_string()];
        for (m, s) in r.mean.values().iter().zip(r.std.values()) {
            row.push(format!("{m:.4} ± {s:.4}"));
        }
        rows.push(row);
    }
    let widths: Vec<usize> = (0..HEAD.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = format!("{k}-FOLD CV PERFORMANCE (MEAN ± STD)\n\n");
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Per-fold values for every report as CSV.
pub fn write_per_fold_csv<W: Write>(reports: &[MetricsReport], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["model", "fold", "n_train", "n_test"];
    header.extend(MetricSet::NAMES);
    w.write_record(&header)?;
    for r in reports {
        for f in &r.per_fold {
            let mut rec = vec![
                r.model_kind.as_str().to_string(),
                f.fold.to_string(),
                f.n_train.to_string(),
                f.n_test.to_string(),
            ];
            rec.extend(f.metrics.values().iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}
