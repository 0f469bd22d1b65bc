use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::hashing::sha256_hex;
use crate::ml::{ClassWeight, MaxFeatures, ModelKind, TrainConfig};
use crate::parser::ParserConfig;

/// Whole-run configuration, read from TOML. Unknown keys are rejected and
/// every field has a default, so an empty file is valid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub k: usize,
    pub io: IoConfig,
    pub ingest: IngestConfig,
    pub parser: ParserConfig,
    pub language: LanguageConfig,
    pub label: LabelConfig,
    pub train: TrainSection,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            k: 5,
            io: IoConfig::default(),
            ingest: IngestConfig::default(),
            parser: ParserConfig::default(),
            language: LanguageConfig::default(),
            label: LabelConfig::default(),
            train: TrainSection::default(),
        }
    }
}

/// File locations. Unset stage files default to fixed names inside `out_dir`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoConfig {
    pub out_dir: PathBuf,
    /// WARC files (plain or gzipped) and directories of `.html` files.
    pub inputs: Vec<PathBuf>,
    pub pc1_table: Option<PathBuf>,
    pub registry: Option<PathBuf>,
    pub articles: Option<PathBuf>,
    pub labeled: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    pub features: Option<PathBuf>,
    /// An existing fold spec to reuse instead of generating one.
    pub fold_spec: Option<PathBuf>,
    pub bundle: Option<PathBuf>,
}

impl Default for IoConfig {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("out"),
            inputs: Vec::new(),
            pc1_table: None,
            registry: None,
            articles: None,
            labeled: None,
            annotations: None,
            features: None,
            fold_spec: None,
            bundle: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    /// Write per-page candidate scores to `trace.jsonl`.
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LanguageConfig {
    pub threshold: f64,
    pub min_chars: usize,
}

impl Default for LanguageConfig {
    fn default() -> Self {
        Self {
            threshold: 0.8,
            min_chars: 40,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabelConfig {
    /// Fixed threshold; the article-level median when unset.
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub models: Vec<ModelKind>,
    pub rf_trees: usize,
    pub rf_max_features: MaxFeatures,
    pub rf_bootstrap: bool,
    pub logreg_max_iter: usize,
    pub logreg_lr: f64,
    pub logreg_tol: f64,
    pub logreg_c: Option<f64>,
    pub class_weight: ClassWeight,
    pub gnb_var_smoothing: f64,
    /// Also fit each model on all rows and write it under `models/`.
    pub save_models: bool,
}

impl Default for TrainSection {
    fn default() -> Self {
        let t = TrainConfig::default();
        Self {
            models: ModelKind::ALL.to_vec(),
            rf_trees: t.rf_trees,
            rf_max_features: t.rf_max_features,
            rf_bootstrap: t.rf_bootstrap,
            logreg_max_iter: t.logreg_max_iter,
            logreg_lr: t.logreg_lr,
            logreg_tol: t.logreg_tol,
            logreg_c: t.logreg_c,
            class_weight: t.class_weight,
            gnb_var_smoothing: t.gnb_var_smoothing,
            save_models: false,
        }
    }
}

#[derive(Serialize)]
struct Hashed<'a> {
    seed: u64,
    k: usize,
    ingest: &'a IngestConfig,
    parser: &'a ParserConfig,
    language: &'a LanguageConfig,
    label: &'a LabelConfig,
    train: &'a TrainSection,
}

impl PipelineConfig {
    /// Reads a TOML file. Relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(|e| PipelineError::Config(format!(
            "cannot read config {}: {e}",
            path.display()
        )))?;
        let mut cfg = Self::from_toml(&text)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.io.rebase(base);
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let cfg: Self = toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        if self.k < 2 {
            return bad(format!("k must be at least 2, got {}", self.k));
        }
        let t = self.language.threshold;
        if !(t > 0.0 && t <= 1.0) {
            return bad(format!("language.threshold must be in (0, 1], got {t}"));
        }
        if let Some(t) = self.label.threshold {
            if !(0.0..=1.0).contains(&t) {
                return bad(format!("label.threshold must be in [0, 1], got {t}"));
            }
        }
        if self.train.models.is_empty() {
            return bad("train.models is empty".into());
        }
        for kind in &self.train.models {
            self.train_config(*kind)
                .validate()
                .map_err(|e| PipelineError::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn train_config(&self, kind: ModelKind) -> TrainConfig {
        let t = &self.train;
        TrainConfig {
            model_kind: kind,
            rf_trees: t.rf_trees,
            rf_max_features: t.rf_max_features,
            rf_bootstrap: t.rf_bootstrap,
            logreg_max_iter: t.logreg_max_iter,
            logreg_lr: t.logreg_lr,
            logreg_tol: t.logreg_tol,
            logreg_c: t.logreg_c,
            class_weight: t.class_weight,
            seed: self.seed,
            gnb_var_smoothing: t.gnb_var_smoothing,
        }
    }

    /// SHA-256 over every setting except file locations, so moving a run
    /// directory does not change it.
    pub fn hash(&self) -> String {
        let h = Hashed {
            seed: self.seed,
            k: self.k,
            ingest: &self.ingest,
            parser: &self.parser,
            language: &self.language,
            label: &self.label,
            train: &self.train,
        };
        sha256_hex(&serde_json::to_vec(&h).expect("config serializes"))
    }

    pub fn articles_path(&self) -> PathBuf {
        self.io.articles.clone().unwrap_or_else(|| self.io.out_dir.join("articles.jsonl"))
    }

    pub fn labeled_path(&self) -> PathBuf {
        self.io.labeled.clone().unwrap_or_else(|| self.io.out_dir.join("labeled.jsonl"))
    }

    pub fn annotations_path(&self) -> PathBuf {
        self.io
            .annotations
            .clone()
            .unwrap_or_else(|| self.io.out_dir.join("annotations.conllu"))
    }

    pub fn features_path(&self) -> PathBuf {
        self.io.features.clone().unwrap_or_else(|| self.io.out_dir.join("features.csv"))
    }

    /// Where `train-eval` writes the fold spec.
    pub fn folds_out_path(&self) -> PathBuf {
        self.io.out_dir.join("folds.json")
    }

    /// Where `export-finetune` reads the fold spec from.
    pub fn folds_in_path(&self) -> PathBuf {
        self.io.fold_spec.clone().unwrap_or_else(|| self.folds_out_path())
    }

    pub fn bundle_path(&self) -> PathBuf {
        self.io.bundle.clone().unwrap_or_else(|| self.io.out_dir.join("finetune"))
    }
}

impl IoConfig {
    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.out_dir);
        self.inputs.iter_mut().for_each(fix);
        for p in [
            &mut self.pc1_table,
            &mut self.registry,
            &mut self.articles,
            &mut self.labeled,
            &mut self.annotations,
            &mut self.features,
            &mut self.fold_spec,
            &mut self.bundle,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_defaults() {
        assert_eq!(PipelineConfig::from_toml("").unwrap(), PipelineConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        let e = PipelineConfig::from_toml("seed = 1\nbogus = 2\n").unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
        assert!(PipelineConfig::from_toml("[parser]\nmin_scor = 3\n").is_err());
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn nested_sections_parse() {
        let cfg = PipelineConfig::from_toml(
            r#"
seed = 7
[parser.keywords]
positive = ["article"]
[label]
threshold = 0.8301
[train]
models = ["GNB", "RF"]
rf_trees = 10
"#,
        )
        .unwrap();
        assert_eq!(cfg.parser.keywords.positive, vec!["article"]);
        assert_eq!(cfg.label.threshold, Some(0.8301));
        assert_eq!(cfg.train_config(ModelKind::Rf).rf_trees, 10);
        assert_eq!(cfg.train_config(ModelKind::Rf).seed, 7);
    }

    #[test]
    fn invalid_values() {
        for text in ["k = 1", "[language]\nthreshold = 0.0", "[label]\nthreshold = 2.0", "[train]\nrf_trees = 0", "[train]\nmodels = []"] {
            assert!(PipelineConfig::from_toml(text).is_err(), "{text}");
        }
    }

    #[test]
    fn hash_ignores_paths() {
        let a = PipelineConfig::default();
        let mut b = a.clone();
        b.io.out_dir = "/elsewhere".into();
        b.io.inputs.push("x.warc".into());
        assert_eq!(a.hash(), b.hash());
        b.seed = 43;
        assert_ne!(a.hash(), b.hash());
    }
}
