//! Python bindings: article extraction, language detection, features,
//! folds, metrics, models and the pipeline stages.

use std::path::PathBuf;

use newsgauge_core::eval::{self, FoldSpec};
use newsgauge_core::features::{self, tagger, AnnotationReader, FeatureRegistry};
use newsgauge_core::ingest::{LanguageDetector, TrigramDetector};
use newsgauge_core::ml::{Dataset, ModelKind, Predictor, TrainConfig, TrainedModel};
use newsgauge_core::parser::{self, ParserConfig};
use newsgauge_core::pipeline::{self, PipelineConfig, PipelineError};
use newsgauge_core::Class;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pipeline_err(e: PipelineError) -> PyErr {
    match e.exit_code() {
        3 => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(format!("{e} (exit code {})", e.exit_code())),
    }
}

fn from_json<'py>(py: Python<'py>, json: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (json,))
}

fn classes(labels: &[u8]) -> PyResult<Vec<Class>> {
    labels
        .iter()
        .map(|&l| match l {
            0 => Ok(Class::Low),
            1 => Ok(Class::High),
            _ => Err(PyValueError::new_err(format!("label must be 0 or 1, got {l}"))),
        })
        .collect()
}

fn dataset(rows: Vec<Vec<f64>>, labels: &[u8]) -> PyResult<Dataset> {
    let ids = (0..rows.len()).map(|i| i.to_string()).collect();
    Dataset::new(rows, classes(labels)?, ids, "python").map_err(value_err)
}

fn unlabeled(rows: Vec<Vec<f64>>) -> PyResult<Dataset> {
    let labels = vec![0; rows.len()];
    dataset(rows, &labels)
}

/// Article text pulled from one HTML page.
#[pyclass(frozen, get_all)]
struct Article {
    title: Option<String>,
    paragraphs: Vec<String>,
    parser_score: i64,
    dropped_paragraphs: u64,
}

#[pymethods]
impl Article {
    fn text(&self) -> String {
        self.paragraphs.join("\n")
    }

    fn __repr__(&self) -> String {
        format!("Article(title={:?}, paragraphs={}, score={})", self.title, self.paragraphs.len(), self.parser_score)
    }
}

/// Extracts the main article; raises `ValueError` with the drop reason.
#[pyfunction]
fn extract_article(html: &str) -> PyResult<Article> {
    let a = parser::extract_article(html, &ParserConfig::default()).map_err(value_err)?;
    Ok(Article {
        title: a.title,
        paragraphs: a.paragraphs,
        parser_score: a.parser_score,
        dropped_paragraphs: a.dropped_paragraphs,
    })
}

/// `(language, confidence)` from the built-in trigram detector.
#[pyfunction]
#[pyo3(signature = (text, min_chars = 40))]
fn detect_language(text: &str, min_chars: usize) -> (String, f64) {
    let v = TrigramDetector::new(min_chars).detect(text);
    (v.language, v.confidence)
}

/// CoNLL-U text for one document, tagged with the built-in rule tagger.
#[pyfunction]
fn annotate(doc_id: &str, paragraphs: Vec<String>) -> PyResult<String> {
    let doc = tagger::annotate(doc_id, &paragraphs);
    let mut out = Vec::new();
    features::write_conllu(&doc, &mut out).map_err(value_err)?;
    String::from_utf8(out).map_err(value_err)
}

/// `[(doc_id, vector)]` for every document in CoNLL-U text.
#[pyfunction]
fn featurize(conllu: &str) -> PyResult<Vec<(String, Vec<f64>)>> {
    let reg = FeatureRegistry::default_registry();
    AnnotationReader::new(conllu.as_bytes())
        .map(|d| {
            let d = d.map_err(value_err)?;
            Ok((d.doc_id.clone(), features::featurize(&d, &reg).values))
        })
        .collect()
}

/// Qualified column names in vector order.
#[pyfunction]
fn feature_names() -> Vec<String> {
    FeatureRegistry::default_registry().qualified_names()
}

#[pyfunction]
fn registry_version() -> String {
    FeatureRegistry::default_registry().version().to_string()
}

/// Per-row fold assignment.
#[pyclass(name = "FoldSpec", frozen)]
struct PyFoldSpec(FoldSpec);

#[pymethods]
impl PyFoldSpec {
    /// Stratified k-fold assignment for 0/1 labels.
    #[staticmethod]
    #[pyo3(signature = (labels, k = 5, seed = 42))]
    fn stratified(labels: Vec<u8>, k: usize, seed: u64) -> PyResult<Self> {
        eval::stratified_kfold(&classes(&labels)?, k, seed).map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        FoldSpec::from_json(text).map(Self).map_err(value_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn hash(&self) -> String {
        self.0.hash()
    }

    /// `(train, test)` row indices.
    fn split(&self, fold: usize) -> PyResult<(Vec<usize>, Vec<usize>)> {
        if fold >= self.0.k {
            return Err(PyValueError::new_err(format!("fold {fold} >= k = {}", self.0.k)));
        }
        Ok(self.0.split(fold))
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    #[getter]
    fn assignment(&self) -> Vec<usize> {
        self.0.assignment.clone()
    }

    #[getter]
    fn doc_ids(&self) -> Option<Vec<String>> {
        self.0.doc_ids.clone()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyfunction]
fn roc_auc(scores: Vec<f64>, labels: Vec<u8>) -> PyResult<f64> {
    eval::roc_auc(&scores, &classes(&labels)?).map_err(value_err)
}

/// Accuracy and macro precision, recall and F1.
#[pyfunction]
fn confusion_metrics<'py>(py: Python<'py>, pred: Vec<u8>, labels: Vec<u8>) -> PyResult<Bound<'py, PyDict>> {
    let c = eval::confusion_metrics(&classes(&pred)?, &classes(&labels)?).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("accuracy", c.accuracy)?;
    d.set_item("precision", c.precision)?;
    d.set_item("recall", c.recall)?;
    d.set_item("f1", c.f1)?;
    Ok(d)
}

fn train_config(kind: &str, seed: u64, rf_trees: usize, logreg_c: Option<f64>) -> PyResult<TrainConfig> {
    let kind: ModelKind = kind.parse().map_err(value_err)?;
    let cfg = TrainConfig {
        seed,
        rf_trees,
        logreg_c,
        ..TrainConfig::for_kind(kind)
    };
    cfg.validate().map_err(value_err)?;
    Ok(cfg)
}

/// A fitted GNB, LOGREG or RF classifier.
#[pyclass(name = "Model", frozen)]
struct PyModel(TrainedModel);

#[pymethods]
impl PyModel {
    #[staticmethod]
    #[pyo3(signature = (kind, rows, labels, seed = 42, rf_trees = 200, logreg_c = Some(1.0)))]
    fn train(kind: &str, rows: Vec<Vec<f64>>, labels: Vec<u8>, seed: u64, rf_trees: usize, logreg_c: Option<f64>) -> PyResult<Self> {
        let cfg = train_config(kind, seed, rf_trees, logreg_c)?;
        cfg.train(&dataset(rows, &labels)?).map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        TrainedModel::load(&path).map(Self).map_err(value_err)
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        self.0.save(&path).map_err(value_err)
    }

    /// P(HIGH) per row.
    fn predict_proba(&self, rows: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        self.0.predict_proba_batch(&unlabeled(rows)?).map_err(value_err)
    }

    fn predict(&self, rows: Vec<Vec<f64>>) -> PyResult<Vec<u8>> {
        rows.iter()
            .map(|r| self.0.predict(r).map(|c| c.index() as u8).map_err(value_err))
            .collect()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind().as_str()
    }

    #[getter]
    fn n_features(&self) -> usize {
        self.0.n_features()
    }
}

/// Cross-validation report as a dict.
#[pyfunction]
#[pyo3(signature = (kind, rows, labels, folds, seed = 42, rf_trees = 200, logreg_c = Some(1.0)))]
fn cross_validate<'py>(
    py: Python<'py>,
    kind: &str,
    rows: Vec<Vec<f64>>,
    labels: Vec<u8>,
    folds: &PyFoldSpec,
    seed: u64,
    rf_trees: usize,
    logreg_c: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = train_config(kind, seed, rf_trees, logreg_c)?;
    let data = dataset(rows, &labels)?;
    let report = eval::cross_validate(&data, &cfg, &folds.0).map_err(value_err)?;
    from_json(py, &report.to_json())
}

fn load_config(path: Option<PathBuf>) -> PyResult<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::load(&p).map_err(pipeline_err),
        None => Ok(PipelineConfig::default()),
    }
}

/// Runs one stage by name and returns its manifest record.
#[pyfunction]
#[pyo3(signature = (stage, config = None, out_dir = None))]
fn run_stage<'py>(py: Python<'py>, stage: &str, config: Option<PathBuf>, out_dir: Option<PathBuf>) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = load_config(config)?;
    if let Some(o) = out_dir {
        cfg.io.out_dir = o;
    }
    let run = match stage {
        "ingest" => pipeline::run_ingest,
        "label" => pipeline::run_label,
        "annotate" => pipeline::run_annotate,
        "featurize" => pipeline::run_featurize,
        "train-eval" => pipeline::run_train_eval,
        "export-finetune" => pipeline::run_export_finetune,
        other => return Err(PyValueError::new_err(format!("unknown stage {other:?}"))),
    };
    let record = py.detach(|| run(&cfg)).map_err(pipeline_err)?;
    from_json(py, &serde_json::to_string(&record).map_err(value_err)?)
}

/// Runs every stage and returns the run manifest.
#[pyfunction]
#[pyo3(signature = (config = None, out_dir = None))]
fn run_all<'py>(py: Python<'py>, config: Option<PathBuf>, out_dir: Option<PathBuf>) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = load_config(config)?;
    if let Some(o) = out_dir {
        cfg.io.out_dir = o;
    }
    let manifest = py.detach(|| pipeline::run_all(&cfg)).map_err(pipeline_err)?;
    from_json(py, &serde_json::to_string(&manifest).map_err(value_err)?)
}

#[pymodule]
fn newsgauge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Article>()?;
    m.add_class::<PyFoldSpec>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(extract_article, m)?)?;
    m.add_function(wrap_pyfunction!(detect_language, m)?)?;
    m.add_function(wrap_pyfunction!(annotate, m)?)?;
    m.add_function(wrap_pyfunction!(featurize, m)?)?;
    m.add_function(wrap_pyfunction!(feature_names, m)?)?;
    m.add_function(wrap_pyfunction!(registry_version, m)?)?;
    m.add_function(wrap_pyfunction!(roc_auc, m)?)?;
    m.add_function(wrap_pyfunction!(confusion_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(cross_validate, m)?)?;
    m.add_function(wrap_pyfunction!(run_stage, m)?)?;
    m.add_function(wrap_pyfunction!(run_all, m)?)?;
    Ok(())
}
