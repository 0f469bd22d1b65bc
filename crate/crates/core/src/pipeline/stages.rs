use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::manifest::{
    base_name, created_timestamp, record_timing, sha256_path, write_atomic, AtomicFile, DirLock,
    RunManifest, StageRecord,
};
use super::records::{doc_id, read_jsonl, ArticleRecord, RejectRecord};
use super::{PipelineConfig, PipelineError};
use crate::eval::{self, cross_validate, stratified_kfold, EvalError, FoldSpec, MetricsReport};
use crate::features::{
    featurize_corpus, tagger, write_conllu, AnnotationError, AnnotationReader, FeatureMatrix,
    FeatureRegistry, MatrixError, MatrixSidecar,
};
use crate::ingest::{
    admits, HtmlDir, IngestError, LanguageDetector, LanguageVerdict, RawPage, TrigramDetector,
    WarcReader,
};
use crate::labels::{binarize, median_threshold, normalize_domain, Pc1Table};
use crate::ml::{Dataset, ModelKind, Trainer};
use crate::parser::{extract_article_traced, ArticleText, CandidateTrace};
use crate::Class;

const BATCH: usize = 64;

/// Bookkeeping shared by every stage: the directory lock, the stage record
/// and timing.
struct Stage<'c> {
    cfg: &'c PipelineConfig,
    name: &'static str,
    record: StageRecord,
    started: Instant,
    _lock: DirLock,
}

impl<'c> Stage<'c> {
    fn begin(cfg: &'c PipelineConfig, name: &'static str) -> Result<Self, PipelineError> {
        let lock = DirLock::acquire(&cfg.io.out_dir)?;
        Ok(Self {
            cfg,
            name,
            record: StageRecord {
                config_hash: cfg.hash(),
                ..Default::default()
            },
            started: Instant::now(),
            _lock: lock,
        })
    }

    fn input(&mut self, path: &Path) -> Result<(), PipelineError> {
        let h = sha256_path(path)?;
        self.record.inputs.insert(base_name(path), h);
        Ok(())
    }

    fn key(&self, path: &Path) -> String {
        path.strip_prefix(&self.cfg.io.out_dir)
            .map(|p| p.to_string_lossy().replace('\\', "/"))
            .unwrap_or_else(|_| base_name(path))
    }

    fn output(&mut self, path: &Path, file: AtomicFile) -> Result<(), PipelineError> {
        let h = file.commit()?;
        self.record.outputs.insert(self.key(path), h);
        Ok(())
    }

    fn output_bytes(&mut self, path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
        write_atomic(path, bytes)?;
        self.record
            .outputs
            .insert(self.key(path), crate::hashing::sha256_hex(bytes));
        Ok(())
    }

    fn finish(self) -> Result<StageRecord, PipelineError> {
        let dir = &self.cfg.io.out_dir;
        let mut m = RunManifest::load_or_default(dir)?;
        m.stages.insert(self.name.to_string(), self.record.clone());
        m.save(dir)?;
        record_timing(dir, self.name, self.started.elapsed().as_secs_f64())?;
        Ok(self.record)
    }
}

fn require(path: &Path, what: &str, hint: &str) -> Result<(), PipelineError> {
    if path.exists() {
        Ok(())
    } else {
        Err(PipelineError::Config(format!(
            "{what} not found: {}{hint}",
            path.display()
        )))
    }
}

fn load_registry(cfg: &PipelineConfig) -> Result<FeatureRegistry, PipelineError> {
    match &cfg.io.registry {
        None => Ok(FeatureRegistry::default_registry()),
        Some(p) => {
            require(p, "registry manifest", "")?;
            let text = fs::read_to_string(p).map_err(|e| PipelineError::io(p, e))?;
            FeatureRegistry::from_json(&text)
                .map_err(|e| PipelineError::Config(format!("registry {}: {e}", p.display())))
        }
    }
}

enum Source {
    Warc(WarcReader<BufReader<File>>),
    Dir(HtmlDir),
}

impl Source {
    fn open(path: &Path) -> Result<Self, PipelineError> {
        let ingest_err = |e: IngestError| match e {
            IngestError::Io { path, source } => PipelineError::Io {
                path: path.into(),
                source,
            },
            IngestError::Stream(source) => PipelineError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => PipelineError::Input(format!("{}: {other}", path.display())),
        };
        if path.is_dir() {
            return HtmlDir::open(path).map(Source::Dir).map_err(ingest_err);
        }
        let f = File::open(path).map_err(|e| PipelineError::io(path, e))?;
        WarcReader::new(BufReader::with_capacity(1 << 16, f))
            .map(Source::Warc)
            .map_err(ingest_err)
    }

    fn next_batch(&mut self) -> Vec<RawPage> {
        match self {
            Source::Warc(r) => r.by_ref().take(BATCH).collect(),
            Source::Dir(d) => d.by_ref().take(BATCH).collect(),
        }
    }

    fn finish(self, record: &mut StageRecord, name: String) {
        #[derive(Serialize)]
        struct SourceStats {
            kind: &'static str,
            records: u64,
            pages: u64,
            non_page: u64,
            skipped: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            truncated: Option<String>,
        }
        let stats = match self {
            Source::Warc(r) => {
                let s = r.stats();
                SourceStats {
                    kind: "warc",
                    records: s.records,
                    pages: s.pages,
                    non_page: s.non_page,
                    skipped: s.skipped,
                    truncated: s.truncated.clone(),
                }
            }
            Source::Dir(d) => {
                let s = d.stats();
                SourceStats {
                    kind: "dir",
                    records: s.files,
                    pages: s.pages,
                    non_page: 0,
                    skipped: s.skipped,
                    truncated: None,
                }
            }
        };
        record.skipped += stats.skipped + stats.non_page;
        let sources = record
            .details
            .entry("sources".into())
            .or_insert_with(|| serde_json::Value::Object(Default::default()));
        sources[name.as_str()] = serde_json::to_value(stats).expect("stats serialize");
    }
}

struct Outcome {
    url: String,
    date: Option<String>,
    result: Result<(ArticleText, LanguageVerdict), (String, Option<LanguageVerdict>)>,
    trace: Vec<CandidateTrace>,
}

fn process(page: &RawPage, cfg: &PipelineConfig, detector: &dyn LanguageDetector) -> Outcome {
    let html = page.decode();
    let (article, trace) = extract_article_traced(&html, &cfg.parser);
    let result = match article {
        Err(reason) => Err((reason.code().to_string(), None)),
        Ok(a) => {
            let verdict = detector.detect(&a.joined());
            if admits(&verdict, cfg.language.threshold) {
                Ok((a, verdict))
            } else {
                Err(("non-english".to_string(), Some(verdict)))
            }
        }
    };
    Outcome {
        url: page.url.to_string(),
        date: page.fetch_date.map(|d| d.to_string()),
        result,
        trace: if cfg.ingest.trace { trace } else { Vec::new() },
    }
}

#[derive(Serialize)]
struct TraceRow<'a> {
    url: &'a str,
    outcome: &'a str,
    candidates: &'a [CandidateTrace],
}

/// Reads every input, extracts article text and keeps English articles.
pub fn run_ingest(cfg: &PipelineConfig) -> Result<StageRecord, PipelineError> {
    if cfg.io.inputs.is_empty() {
        return Err(PipelineError::Config("no inputs given (io.inputs or --input)".into()));
    }
    for p in &cfg.io.inputs {
        require(p, "input", "")?;
    }
    let mut stage = Stage::begin(cfg, "ingest")?;
    let detector = TrigramDetector::new(cfg.language.min_chars);
    let articles_path = cfg.articles_path();
    let rejects_path = cfg.io.out_dir.join("rejects.jsonl");
    let trace_path = cfg.io.out_dir.join("trace.jsonl");
    let mut articles = AtomicFile::create(&articles_path)?;
    let mut rejects = AtomicFile::create(&rejects_path)?;
    let mut trace = if cfg.ingest.trace {
        Some(AtomicFile::create(&trace_path)?)
    } else {
        None
    };
    let mut seen = HashSet::new();

    for input in &cfg.io.inputs {
        stage.input(input)?;
        let mut source = Source::open(input)?;
        loop {
            let batch = source.next_batch();
            if batch.is_empty() {
                break;
            }
            let outcomes: Vec<Outcome> = batch
                .par_iter()
                .map(|p| process(p, cfg, &detector))
                .collect();
            for o in outcomes {
                stage.record.input_n += 1;
                let verdict_of = |o: &Outcome| match &o.result {
                    Ok(_) => "kept".to_string(),
                    Err((r, _)) => r.clone(),
                };
                let mut outcome = verdict_of(&o);
                match o.result {
                    Ok((article, verdict)) => {
                        if !seen.insert(o.url.clone()) {
                            outcome = "duplicate-url".into();
                            stage.record.drop(&outcome);
                            rejects.write_json_line(&RejectRecord {
                                url: o.url.clone(),
                                date: o.date.clone(),
                                reason: outcome.clone(),
                                lang: None,
                                confidence: None,
                            })?;
                        } else {
                            let rec = ArticleRecord {
                                doc_id: doc_id(&o.url, o.date.as_deref()),
                                domain: normalize_domain(&o.url).ok(),
                                url: o.url.clone(),
                                date: o.date.clone(),
                                text: article.paragraphs,
                                parser_score: article.parser_score,
                                lang: verdict.language,
                                lang_confidence: verdict.confidence,
                                pc1: None,
                                threshold: None,
                                label: None,
                            };
                            articles.write_json_line(&rec)?;
                            stage.record.output_n += 1;
                        }
                    }
                    Err((reason, verdict)) => {
                        stage.record.drop(&reason);
                        rejects.write_json_line(&RejectRecord {
                            url: o.url.clone(),
                            date: o.date.clone(),
                            reason,
                            lang: verdict.as_ref().map(|v| v.language.clone()),
                            confidence: verdict.map(|v| v.confidence),
                        })?;
                    }
                }
                if let Some(t) = trace.as_mut() {
                    t.write_json_line(&TraceRow {
                        url: &o.url,
                        outcome: &outcome,
                        candidates: &o.trace,
                    })?;
                }
            }
        }
        source.finish(&mut stage.record, base_name(input));
    }
    stage.output(&articles_path, articles)?;
    stage.output(&rejects_path, rejects)?;
    if let Some(t) = trace {
        stage.output(&trace_path, t)?;
    }
    stage.finish()
}

/// Joins PC1 scores by registrable domain and labels at the threshold.
pub fn run_label(cfg: &PipelineConfig) -> Result<StageRecord, PipelineError> {
    let articles_path = cfg.articles_path();
    require(&articles_path, "articles file", " (run `newsgauge ingest` first)")?;
    let table_path = cfg
        .io
        .pc1_table
        .as_ref()
        .ok_or_else(|| PipelineError::Config("no PC1 table given (io.pc1_table or --pc1)".into()))?;
    require(table_path, "PC1 table", "")?;
    let mut stage = Stage::begin(cfg, "label")?;
    stage.input(&articles_path)?;
    stage.input(table_path)?;
    let f = File::open(table_path).map_err(|e| PipelineError::io(table_path, e))?;
    let table = Pc1Table::read_csv(f)
        .map_err(|e| PipelineError::Config(format!("{}: {e}", table_path.display())))?;

    let records: Vec<ArticleRecord> = read_jsonl(&articles_path)?;
    stage.record.input_n = records.len() as u64;
    let mut matched = Vec::new();
    for mut r in records {
        match table.lookup(&r.url) {
            Some((domain, score)) => {
                r.domain = Some(domain);
                matched.push((r, score));
            }
            None => stage.record.drop("unmatched-domain"),
        }
    }
    if matched.is_empty() {
        return Err(PipelineError::Empty("no matched domains".into()));
    }
    let (threshold, source) = match cfg.label.threshold {
        Some(t) => (t, "fixed"),
        None => {
            let scores: Vec<f64> = matched.iter().map(|(_, s)| *s).collect();
            (median_threshold(&scores).expect("non-empty"), "median")
        }
    };
    let out_path = cfg.labeled_path();
    let mut out = AtomicFile::create(&out_path)?;
    let mut counts: BTreeMap<Class, u64> = Class::ALL.iter().map(|c| (*c, 0)).collect();
    let mut domains = HashSet::new();
    for (mut r, score) in matched {
        let label = binarize(score, threshold)
            .map_err(|e| PipelineError::Input(format!("{}: {e}", r.doc_id)))?;
        *counts.get_mut(&label.value).unwrap() += 1;
        domains.insert(r.domain.clone());
        r.pc1 = Some(score);
        r.threshold = Some(threshold);
        r.label = Some(label.value);
        out.write_json_line(&r)?;
        stage.record.output_n += 1;
    }
    stage.output(&out_path, out)?;
    stage.record.detail("threshold", threshold);
    stage.record.detail("threshold_source", source);
    stage.record.detail("class_counts", &counts);
    stage.record.detail("pc1_domains", table.len());
    stage.record.detail("matched_domains", domains.len());
    stage.finish()
}

/// Tags labeled articles with the built-in rule tagger and writes CoNLL-U.
pub fn run_annotate(cfg: &PipelineConfig) -> Result<StageRecord, PipelineError> {
    let in_path = cfg.labeled_path();
    require(&in_path, "labeled articles", " (run `newsgauge label` first)")?;
    let mut stage = Stage::begin(cfg, "annotate")?;
    stage.input(&in_path)?;
    let records: Vec<ArticleRecord> = read_jsonl(&in_path)?;
    stage.record.input_n = records.len() as u64;
    let docs: Vec<_> = records
        .par_iter()
        .map(|r| tagger::annotate(&r.doc_id, &r.text))
        .collect();
    let out_path = cfg.annotations_path();
    let mut out = AtomicFile::create(&out_path)?;
    for d in docs {
        if d.tokens.is_empty() {
            stage.record.drop("no-tokens");
            continue;
        }
        write_conllu(&d, &mut out).map_err(|e| PipelineError::io(&out_path, e))?;
        stage.record.output_n += 1;
    }
    stage.output(&out_path, out)?;
    stage.record.detail("annotator", "rule-tagger");
    stage.finish()
}

/// Computes the registry-ordered feature vector for every annotated document.
pub fn run_featurize(cfg: &PipelineConfig) -> Result<StageRecord, PipelineError> {
    let registry = load_registry(cfg)?;
    let in_path = cfg.annotations_path();
    require(&in_path, "annotations file", " (run `newsgauge annotate` first or set io.annotations)")?;
    let mut stage = Stage::begin(cfg, "featurize")?;
    stage.input(&in_path)?;
    if let Some(p) = &cfg.io.registry {
        stage.input(p)?;
    }
    let f = File::open(&in_path).map_err(|e| PipelineError::io(&in_path, e))?;
    let matrix = featurize_corpus(AnnotationReader::new(BufReader::new(f)), &registry).map_err(
        |e| match e {
            AnnotationError::Io(source) => PipelineError::Io {
                path: in_path.clone(),
                source,
            },
            other => PipelineError::Input(other.to_string()),
        },
    )?;
    stage.record.input_n = (matrix.n_rows() + matrix.skipped()) as u64;
    stage.record.output_n = matrix.n_rows() as u64;
    for r in &matrix.rejects {
        stage.record.drop(if r.starts_with("duplicate") { "duplicate-doc-id" } else { "malformed" });
    }
    let out_path = cfg.features_path();
    let mut out = AtomicFile::create(&out_path)?;
    matrix.write_csv(&mut out).map_err(|e| match e {
        MatrixError::Io(source) => PipelineError::io(&out_path, source),
        other => PipelineError::Input(other.to_string()),
    })?;
    stage.output(&out_path, out)?;
    let sidecar = MatrixSidecar {
        registry_version: registry.version().to_string(),
        row_count: matrix.n_rows(),
        created: created_timestamp(),
    };
    let sidecar_path = out_path.with_extension("meta.json");
    let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes") + "\n";
    stage.output_bytes(&sidecar_path, json.as_bytes())?;
    if !matrix.rejects.is_empty() {
        stage.record.detail("rejects", &matrix.rejects);
    }
    stage.record.registry_version = Some(registry.version().to_string());
    stage.finish()
}

fn eval_error(e: EvalError) -> PipelineError {
    match e {
        EvalError::Misaligned(m) => PipelineError::Misaligned(m),
        other => PipelineError::Empty(other.to_string()),
    }
}

fn model_file(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Gnb => "gnb.json",
        ModelKind::LogReg => "logreg.json",
        ModelKind::Rf => "rf.bin",
    }
}

/// Cross-validates every configured model on one shared fold spec.
pub fn run_train_eval(cfg: &PipelineConfig) -> Result<StageRecord, PipelineError> {
    let registry = load_registry(cfg)?;
    let features_path = cfg.features_path();
    let labeled_path = cfg.labeled_path();
    require(&features_path, "feature matrix", " (run `newsgauge featurize` first)")?;
    require(&labeled_path, "labeled articles", " (run `newsgauge label` first)")?;
    if let Some(p) = &cfg.io.fold_spec {
        require(p, "fold spec", "")?;
    }
    let mut stage = Stage::begin(cfg, "train-eval")?;
    stage.input(&features_path)?;
    stage.input(&labeled_path)?;

    let f = File::open(&features_path).map_err(|e| PipelineError::io(&features_path, e))?;
    let matrix = FeatureMatrix::read_csv(BufReader::new(f), &registry).map_err(|e| match e {
        MatrixError::Header(v) => PipelineError::Config(format!(
            "{} columns do not match registry {v}",
            features_path.display()
        )),
        MatrixError::Io(source) => PipelineError::io(&features_path, source),
        other => PipelineError::Input(format!("{}: {other}", features_path.display())),
    })?;
    let records: Vec<ArticleRecord> = read_jsonl(&labeled_path)?;
    let mut labels_by_id = HashMap::new();
    for r in &records {
        let label = r.label.ok_or_else(|| {
            PipelineError::Input(format!("{} has no label (not a labeled file?)", r.doc_id))
        })?;
        labels_by_id.insert(r.doc_id.as_str(), label);
    }
    let mut labels = Vec::with_capacity(matrix.n_rows());
    for id in &matrix.doc_ids {
        let l = labels_by_id.get(id.as_str()).ok_or_else(|| {
            PipelineError::Misaligned(format!("doc_id {id} has features but no label"))
        })?;
        labels.push(*l);
    }
    let feature_ids: HashSet<&str> = matrix.doc_ids.iter().map(String::as_str).collect();
    let unfeatured = records.iter().filter(|r| !feature_ids.contains(r.doc_id.as_str())).count();
    stage.record.input_n = matrix.n_rows() as u64;
    let data = Dataset::new(matrix.rows, labels, matrix.doc_ids, matrix.registry_version)
        .map_err(|e| PipelineError::Input(e.to_string()))?;

    let spec = match &cfg.io.fold_spec {
        Some(p) => {
            stage.input(p)?;
            let text = fs::read_to_string(p).map_err(|e| PipelineError::io(p, e))?;
            let spec = FoldSpec::from_json(&text)
                .map_err(|e| PipelineError::Config(format!("{}: {e}", p.display())))?;
            let spec = match spec.doc_ids {
                Some(_) => spec,
                None => spec.with_doc_ids(data.row_ids().to_vec()),
            };
            if spec.doc_ids.as_deref() != Some(data.row_ids()) {
                return Err(PipelineError::Misaligned(format!(
                    "fold spec {} does not list the feature rows in order",
                    p.display()
                )));
            }
            spec
        }
        None => stratified_kfold(data.labels(), cfg.k, cfg.seed)
            .map_err(eval_error)?
            .with_doc_ids(data.row_ids().to_vec()),
    };
    let folds_path = cfg.folds_out_path();
    stage.output_bytes(&folds_path, spec.to_json().as_bytes())?;

    let mut reports: Vec<MetricsReport> = Vec::new();
    for &kind in &cfg.train.models {
        let tc = cfg.train_config(kind);
        let report = cross_validate(&data, &tc, &spec).map_err(eval_error)?;
        let path = cfg
            .io
            .out_dir
            .join("reports")
            .join(format!("{}.json", kind.as_str().to_ascii_lowercase()));
        stage.output_bytes(&path, report.to_json().as_bytes())?;
        if cfg.train.save_models {
            let model = tc.fit(&data).map_err(|e| PipelineError::Empty(e.to_string()))?;
            let mut buf = Vec::new();
            model
                .write_to(&mut buf)
                .map_err(|e| PipelineError::Input(e.to_string()))?;
            stage.output_bytes(&cfg.io.out_dir.join("models").join(model_file(kind)), &buf)?;
        }
        reports.push(report);
    }
    let reports_dir = cfg.io.out_dir.join("reports");
    stage.output_bytes(&reports_dir.join("summary.txt"), eval::render_table(&reports).as_bytes())?;
    let mut csv = Vec::new();
    eval::write_per_fold_csv(&reports, &mut csv).map_err(|e| PipelineError::Input(e.to_string()))?;
    stage.output_bytes(&reports_dir.join("per_fold.csv"), &csv)?;

    stage.record.output_n = data.len() as u64;
    stage.record.fold_hash = Some(spec.hash());
    stage.record.registry_version = Some(data.registry_version().to_string());
    let counts = data.class_counts();
    stage.record.detail("class_counts", BTreeMap::from([("LOW", counts[0]), ("HIGH", counts[1])]));
    stage.record.detail("labels_without_features", unfeatured);
    stage.record.detail(
        "models",
        cfg.train.models.iter().map(|k| k.as_str()).collect::<Vec<_>>(),
    );
    stage.finish()
}

#[derive(Serialize)]
struct BundleRow<'a> {
    doc_id: &'a str,
    fold: usize,
    label: Class,
    pc1: Option<f64>,
    domain: Option<&'a str>,
    text: String,
}

#[derive(Serialize)]
struct BundleManifest {
    format: &'static str,
    version: u32,
    created: String,
    row_count: usize,
    k: usize,
    seed: u64,
    fold_hash: String,
    class_counts: BTreeMap<Class, usize>,
    files: BTreeMap<String, String>,
}

/// Writes `{articles.jsonl, folds.json, manifest.json}` for the fine-tuning
/// harness. Article order matches the fold assignment order.
pub fn run_export_finetune(cfg: &PipelineConfig) -> Result<StageRecord, PipelineError> {
    let folds_path = cfg.folds_in_path();
    require(&folds_path, "fold spec", " (run `newsgauge train-eval` first or pass --folds)")?;
    let labeled_path = cfg.labeled_path();
    require(&labeled_path, "labeled articles", " (run `newsgauge label` first)")?;
    let mut stage = Stage::begin(cfg, "export-finetune")?;
    stage.input(&folds_path)?;
    stage.input(&labeled_path)?;
    let text = fs::read_to_string(&folds_path).map_err(|e| PipelineError::io(&folds_path, e))?;
    let spec = FoldSpec::from_json(&text)
        .map_err(|e| PipelineError::Config(format!("{}: {e}", folds_path.display())))?;
    let records: Vec<ArticleRecord> = read_jsonl(&labeled_path)?;
    stage.record.input_n = spec.len() as u64;

    let ordered: Vec<&ArticleRecord> = match &spec.doc_ids {
        Some(ids) => {
            let by_id: HashMap<&str, &ArticleRecord> =
                records.iter().map(|r| (r.doc_id.as_str(), r)).collect();
            ids.iter()
                .map(|id| {
                    by_id.get(id.as_str()).copied().ok_or_else(|| {
                        PipelineError::Misaligned(format!("fold spec lists unknown doc_id {id}"))
                    })
                })
                .collect::<Result<_, _>>()?
        }
        None if records.len() == spec.len() => records.iter().collect(),
        None => {
            return Err(PipelineError::Misaligned(format!(
                "fold spec has {} rows, labeled file has {}",
                spec.len(),
                records.len()
            )))
        }
    };

    let bundle = cfg.bundle_path();
    let articles_path = bundle.join("articles.jsonl");
    let bundle_folds = bundle.join("folds.json");
    let mut out = AtomicFile::create(&articles_path)?;
    let mut class_counts: BTreeMap<Class, usize> = Class::ALL.iter().map(|c| (*c, 0)).collect();
    for (r, &fold) in ordered.iter().zip(&spec.assignment) {
        let label = r
            .label
            .ok_or_else(|| PipelineError::Misaligned(format!("{} has no label", r.doc_id)))?;
        *class_counts.get_mut(&label).unwrap() += 1;
        out.write_json_line(&BundleRow {
            doc_id: &r.doc_id,
            fold,
            label,
            pc1: r.pc1,
            domain: r.domain.as_deref(),
            text: r.text.join("\n\n"),
        })?;
    }
    let mut files = BTreeMap::new();
    let art_hash = out.commit()?;
    stage.record.outputs.insert(stage.key(&articles_path), art_hash.clone());
    files.insert("articles.jsonl".to_string(), art_hash);
    let folds_json = spec.to_json();
    stage.output_bytes(&bundle_folds, folds_json.as_bytes())?;
    files.insert("folds.json".to_string(), crate::hashing::sha256_hex(folds_json.as_bytes()));
    let manifest = BundleManifest {
        format: "newsgauge-finetune-bundle",
        version: 1,
        created: created_timestamp(),
        row_count: ordered.len(),
        k: spec.k,
        seed: spec.seed,
        fold_hash: spec.hash(),
        class_counts,
        files,
    };
    let mut json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    json.write_all(b"\n").expect("vec write");
    stage.output_bytes(&bundle.join("manifest.json"), &json)?;

    stage.record.output_n = ordered.len() as u64;
    stage.record.fold_hash = Some(spec.hash());
    let in_folds: HashSet<&str> = ordered.iter().map(|r| r.doc_id.as_str()).collect();
    let outside = records.iter().filter(|r| !in_folds.contains(r.doc_id.as_str())).count();
    stage.record.detail("labeled_not_in_folds", outside);
    stage.finish()
}

/// Every stage in order, returning the final manifest.
pub fn run_all(cfg: &PipelineConfig) -> Result<RunManifest, PipelineError> {
    run_ingest(cfg)?;
    run_label(cfg)?;
    run_annotate(cfg)?;
    run_featurize(cfg)?;
    run_train_eval(cfg)?;
    run_export_finetune(cfg)?;
    RunManifest::load_or_default(&cfg.io.out_dir)
}

