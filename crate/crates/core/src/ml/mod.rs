//! Gaussian naive Bayes, L2 logistic regression and a random forest.
//!
//! All three produce a [`TrainedModel`] whose `predict_proba` is the
//! probability of [`Class::High`].

mod forest;
mod gnb;
mod logreg;

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Class;

pub use forest::{ForestModel, Node, Tree};
pub use gnb::GnbModel;
pub use logreg::{
    fit_traced as fit_logreg_traced, objective_for as logreg_objective, LogRegFit, LogRegModel,
    Objective as LogRegObjective,
};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum MlError {
    #[error("dataset: {0}")]
    Data(String),
    #[error("training data contains a single class ({0})")]
    SingleClass(Class),
    #[error("feature vector has length {actual}, model expects {expected}")]
    Dimension { expected: usize, actual: usize },
    #[error("logistic loss became non-finite at iteration {0}")]
    NonFinite(usize),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("model file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Row-major feature matrix with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n_features: usize,
    x: Vec<f64>,
    labels: Vec<Class>,
    row_ids: Vec<String>,
    registry_version: String,
}

impl Dataset {
    pub fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<Class>,
        row_ids: Vec<String>,
        registry_version: impl Into<String>,
    ) -> Result<Self, MlError> {
        if rows.len() != labels.len() || rows.len() != row_ids.len() {
            return Err(MlError::Data(format!(
                "{} rows, {} labels, {} ids",
                rows.len(),
                labels.len(),
                row_ids.len()
            )));
        }
        let n_features = rows.first().map_or(0, Vec::len);
        let mut x = Vec::with_capacity(rows.len() * n_features);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n_features {
                return Err(MlError::Data(format!(
                    "row {i} has {} features, expected {n_features}",
                    r.len()
                )));
            }
            if let Some(j) = r.iter().position(|v| !v.is_finite()) {
                return Err(MlError::Data(format!("row {i} feature {j} is not finite")));
            }
            x.extend_from_slice(r);
        }
        Ok(Self {
            n_features,
            x,
            labels,
            row_ids,
            registry_version: registry_version.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.x[i * self.n_features + j]
    }

    pub fn labels(&self) -> &[Class] {
        &self.labels
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn registry_version(&self) -> &str {
        &self.registry_version
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut x = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            x.extend_from_slice(self.row(i));
        }
        Dataset {
            n_features: self.n_features,
            x,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            row_ids: indices.iter().map(|&i| self.row_ids[i].clone()).collect(),
            registry_version: self.registry_version.clone(),
        }
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let mut c = [0; 2];
        for l in &self.labels {
            c[l.index()] += 1;
        }
        c
    }

    fn require_both_classes(&self) -> Result<[usize; 2], MlError> {
        let c = self.class_counts();
        if self.n_features == 0 {
            return Err(MlError::Data("no features".into()));
        }
        for class in Class::ALL {
            if c[class.index()] == 0 {
                return Err(MlError::SingleClass(Class::from_index(1 - class.index())));
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ModelKind {
    Gnb,
    #[serde(rename = "LOGREG")]
    LogReg,
    Rf,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Gnb, ModelKind::LogReg, ModelKind::Rf];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Gnb => "GNB",
            ModelKind::LogReg => "LOGREG",
            ModelKind::Rf => "RF",
        }
    }

    /// Human-readable name used in report tables.
    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::Gnb => "Gaussian NB",
            ModelKind::LogReg => "Logistic Regression",
            ModelKind::Rf => "Random Forest",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "GNB" => Ok(ModelKind::Gnb),
            "LOGREG" => Ok(ModelKind::LogReg),
            "RF" => Ok(ModelKind::Rf),
            other => Err(format!("unknown model kind {other:?} (GNB, LOGREG, RF)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassWeight {
    Balanced,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    Sqrt,
    All,
}

impl MaxFeatures {
    pub fn resolve(self, n_features: usize) -> usize {
        match self {
            MaxFeatures::Sqrt => ((n_features as f64).sqrt().floor() as usize).max(1),
            MaxFeatures::All => n_features.max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub model_kind: ModelKind,
    pub rf_trees: usize,
    pub rf_max_features: MaxFeatures,
    /// Disabling bootstrap trains every tree on the full sample.
    pub rf_bootstrap: bool,
    pub logreg_max_iter: usize,
    pub logreg_lr: f64,
    pub logreg_tol: f64,
    /// Inverse L2 strength; `None` disables the penalty.
    pub logreg_c: Option<f64>,
    pub class_weight: ClassWeight,
    pub seed: u64,
    pub gnb_var_smoothing: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            model_kind: ModelKind::Rf,
            rf_trees: 200,
            rf_max_features: MaxFeatures::Sqrt,
            rf_bootstrap: true,
            logreg_max_iter: 1000,
            logreg_lr: 1.0,
            logreg_tol: 1e-6,
            logreg_c: Some(1.0),
            class_weight: ClassWeight::Balanced,
            seed: 42,
            gnb_var_smoothing: 1e-9,
        }
    }
}

impl TrainConfig {
    pub fn for_kind(kind: ModelKind) -> Self {
        Self {
            model_kind: kind,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), MlError> {
        let bad = |m: &str| Err(MlError::Config(m.to_string()));
        if self.rf_trees < 1 {
            return bad("rf_trees must be at least 1");
        }
        if self.logreg_max_iter < 1 {
            return bad("logreg_max_iter must be at least 1");
        }
        if !(self.gnb_var_smoothing > 0.0) {
            return bad("gnb_var_smoothing must be positive");
        }
        if !(self.logreg_lr > 0.0) || !(self.logreg_tol > 0.0) {
            return bad("logreg_lr and logreg_tol must be positive");
        }
        if let Some(c) = self.logreg_c {
            if !(c > 0.0) {
                return bad("logreg_c must be positive");
            }
        }
        Ok(())
    }

    pub fn train(&self, data: &Dataset) -> Result<TrainedModel, MlError> {
        self.validate()?;
        Ok(match self.model_kind {
            ModelKind::Gnb => TrainedModel::Gnb(gnb::train(data, self)?),
            ModelKind::LogReg => TrainedModel::LogReg(logreg::train(data, self)?.model),
            ModelKind::Rf => TrainedModel::Rf(forest::train(data, self)?),
        })
    }
}

/// Per-class sample weights: `n / (2 n_c)` when balanced, 1 otherwise.
pub fn class_weights(counts: [usize; 2], mode: ClassWeight) -> [f64; 2] {
    match mode {
        ClassWeight::None => [1.0, 1.0],
        ClassWeight::Balanced => {
            let n = (counts[0] + counts[1]) as f64;
            counts.map(|c| if c == 0 { 0.0 } else { n / (2.0 * c as f64) })
        }
    }
}

/// Anything that maps a feature vector to P(HIGH).
pub trait Predictor: Send + Sync {
    fn predict_proba(&self, x: &[f64]) -> Result<f64, MlError>;

    fn predict(&self, x: &[f64]) -> Result<Class, MlError> {
        self.predict_proba(x).map(label_for)
    }
}

/// Anything that fits a [`Predictor`] to a dataset.
pub trait Trainer: Sync {
    type Model: Predictor;

    fn kind(&self) -> ModelKind;

    fn fit(&self, data: &Dataset) -> Result<Self::Model, MlError>;
}

impl Trainer for TrainConfig {
    type Model = TrainedModel;

    fn kind(&self) -> ModelKind {
        self.model_kind
    }

    fn fit(&self, data: &Dataset) -> Result<TrainedModel, MlError> {
        self.train(data)
    }
}

/// HIGH iff the probability is strictly above one half.
pub fn label_for(proba: f64) -> Class {
    if proba > 0.5 {
        Class::High
    } else {
        Class::Low
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Gnb(GnbModel),
    LogReg(LogRegModel),
    Rf(ForestModel),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE")]
enum JsonModel {
    Gnb(GnbModel),
    #[serde(rename = "LOGREG")]
    LogReg(LogRegModel),
}

#[derive(Serialize, Deserialize)]
struct JsonEnvelope {
    format: String,
    version: u32,
    #[serde(flatten)]
    model: JsonModel,
}

const JSON_FORMAT: &str = "newsgauge-model";

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::Gnb(_) => ModelKind::Gnb,
            TrainedModel::LogReg(_) => ModelKind::LogReg,
            TrainedModel::Rf(_) => ModelKind::Rf,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            TrainedModel::Gnb(m) => m.n_features(),
            TrainedModel::LogReg(m) => m.n_features(),
            TrainedModel::Rf(m) => m.n_features(),
        }
    }

    pub fn registry_version(&self) -> &str {
        match self {
            TrainedModel::Gnb(m) => &m.registry_version,
            TrainedModel::LogReg(m) => &m.registry_version,
            TrainedModel::Rf(m) => &m.registry_version,
        }
    }

    pub fn predict_proba_batch(&self, data: &Dataset) -> Result<Vec<f64>, MlError> {
        (0..data.len()).map(|i| self.predict_proba(data.row(i))).collect()
    }

    /// JSON for GNB and LOGREG, the binary forest format for RF.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<(), MlError> {
        let json = |model| JsonEnvelope {
            format: JSON_FORMAT.into(),
            version: MODEL_FORMAT_VERSION,
            model,
        };
        match self {
            TrainedModel::Gnb(m) => {
                serde_json::to_writer_pretty(&mut out, &json(JsonModel::Gnb(m.clone())))
                    .map_err(io::Error::from)?
            }
            TrainedModel::LogReg(m) => {
                serde_json::to_writer_pretty(&mut out, &json(JsonModel::LogReg(m.clone())))
                    .map_err(io::Error::from)?
            }
            TrainedModel::Rf(m) => m.write_binary(&mut out)?,
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self, MlError> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        if bytes.starts_with(forest::MAGIC) {
            return ForestModel::read_binary(&bytes).map(TrainedModel::Rf);
        }
        let env: JsonEnvelope =
            serde_json::from_slice(&bytes).map_err(|e| MlError::Format(e.to_string()))?;
        if env.format != JSON_FORMAT || env.version != MODEL_FORMAT_VERSION {
            return Err(MlError::Format(format!(
                "unsupported model format {} v{}",
                env.format, env.version
            )));
        }
        let model = match env.model {
            JsonModel::Gnb(m) => TrainedModel::Gnb(m),
            JsonModel::LogReg(m) => TrainedModel::LogReg(m),
        };
        model.check()?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), MlError> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, MlError> {
        Self::read_from(fs::File::open(path)?)
    }

    fn check(&self) -> Result<(), MlError> {
        match self {
            TrainedModel::Gnb(m) => m.check(),
            TrainedModel::LogReg(m) => m.check(),
            TrainedModel::Rf(m) => m.check(),
        }
    }
}

impl Predictor for TrainedModel {
    fn predict_proba(&self, x: &[f64]) -> Result<f64, MlError> {
        let expected = self.n_features();
        if x.len() != expected {
            return Err(MlError::Dimension {
                expected,
                actual: x.len(),
            });
        }
        Ok(match self {
            TrainedModel::Gnb(m) => m.proba(x),
            TrainedModel::LogReg(m) => m.proba(x),
            TrainedModel::Rf(m) => m.proba(x),
        })
    }
}
