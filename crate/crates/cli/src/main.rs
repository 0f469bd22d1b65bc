//! `newsgauge <stage> --config <file> [flags]`
//!
//! Exit codes: 0 success, 2 config, 3 I/O, 4 empty result, 5 misalignment.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use newsgauge_core::ml::ModelKind;
use newsgauge_core::pipeline::{self, PipelineConfig, PipelineError, StageRecord};

#[derive(Parser)]
#[command(name = "newsgauge", version, about = "News article quality pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read WARC files or HTML directories and keep English article text.
    Ingest {
        #[command(flatten)]
        common: Common,
        /// WARC file or HTML directory; repeatable, replaces io.inputs.
        #[arg(long = "input", value_name = "PATH")]
        inputs: Vec<PathBuf>,
        /// Write per-candidate parser scores to trace.jsonl.
        #[arg(long)]
        trace: bool,
    },
    /// Join PC1 domain scores and assign HIGH/LOW labels.
    Label {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "CSV")]
        pc1: Option<PathBuf>,
        /// Fixed threshold instead of the article-level median.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Tag labeled articles with the built-in rule tagger (CoNLL-U output).
    Annotate {
        #[command(flatten)]
        common: Common,
    },
    /// Compute feature vectors from CoNLL-U annotations.
    Featurize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "CONLLU")]
        annotations: Option<PathBuf>,
        #[command(flatten)]
        registry: RegistryArg,
    },
    /// Stratified k-fold cross-validation of the configured models.
    TrainEval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        registry: RegistryArg,
        #[command(flatten)]
        train: TrainArgs,
    },
    /// Write the fine-tuning bundle {articles.jsonl, folds.json, manifest.json}.
    ExportFinetune {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "JSON")]
        folds: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        bundle: Option<PathBuf>,
    },
    /// Every stage in order.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long = "input", value_name = "PATH")]
        inputs: Vec<PathBuf>,
        #[arg(long, value_name = "CSV")]
        pc1: Option<PathBuf>,
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        registry: RegistryArg,
        #[command(flatten)]
        train: TrainArgs,
    },
}

#[derive(Args)]
struct Common {
    /// TOML configuration; defaults apply when omitted.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory, overrides io.out_dir.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RegistryArg {
    /// Feature registry manifest (JSON); the built-in one when omitted.
    #[arg(long, value_name = "JSON")]
    registry: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Comma-separated subset of gnb, logreg, rf.
    #[arg(long, value_delimiter = ',')]
    models: Vec<ModelKind>,
    /// Reuse an existing fold spec.
    #[arg(long, value_name = "JSON")]
    folds: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    /// Also write models fitted on all rows.
    #[arg(long)]
    save_models: bool,
}

fn base_config(c: &Common) -> Result<PipelineConfig, PipelineError> {
    let mut cfg = match &c.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(o) = &c.out {
        cfg.io.out_dir = o.clone();
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn apply_train(cfg: &mut PipelineConfig, t: &TrainArgs) {
    if !t.models.is_empty() {
        cfg.train.models = t.models.clone();
    }
    if t.folds.is_some() {
        cfg.io.fold_spec = t.folds.clone();
    }
    if let Some(k) = t.k {
        cfg.k = k;
    }
    cfg.train.save_models |= t.save_models;
}

fn report(stage: &str, r: &StageRecord) {
    let dropped: Vec<String> = r.dropped.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!(
        "{stage}: in {} out {} skipped {}{}",
        r.input_n,
        r.output_n,
        r.skipped,
        if dropped.is_empty() {
            String::new()
        } else {
            format!(" dropped [{}]", dropped.join(" "))
        }
    );
}

fn run(cmd: Command) -> Result<(), PipelineError> {
    let (name, record) = match cmd {
        Command::Ingest { common, inputs, trace } => {
            let mut cfg = base_config(&common)?;
            if !inputs.is_empty() {
                cfg.io.inputs = inputs;
            }
            cfg.ingest.trace |= trace;
            cfg.validate()?;
            ("ingest", pipeline::run_ingest(&cfg)?)
        }
        Command::Label { common, pc1, threshold } => {
            let mut cfg = base_config(&common)?;
            cfg.io.pc1_table = pc1.or(cfg.io.pc1_table);
            cfg.label.threshold = threshold.or(cfg.label.threshold);
            cfg.validate()?;
            ("label", pipeline::run_label(&cfg)?)
        }
        Command::Annotate { common } => {
            let cfg = base_config(&common)?;
            ("annotate", pipeline::run_annotate(&cfg)?)
        }
        Command::Featurize { common, annotations, registry } => {
            let mut cfg = base_config(&common)?;
            cfg.io.annotations = annotations.or(cfg.io.annotations);
            cfg.io.registry = registry.registry.or(cfg.io.registry);
            ("featurize", pipeline::run_featurize(&cfg)?)
        }
        Command::TrainEval { common, registry, train } => {
            let mut cfg = base_config(&common)?;
            cfg.io.registry = registry.registry.or(cfg.io.registry);
            apply_train(&mut cfg, &train);
            cfg.validate()?;
            let r = pipeline::run_train_eval(&cfg)?;
            let summary = cfg.io.out_dir.join("reports").join("summary.txt");
            if let Ok(text) = std::fs::read_to_string(&summary) {
                print!("{text}");
            }
            ("train-eval", r)
        }
        Command::ExportFinetune { common, folds, bundle } => {
            let mut cfg = base_config(&common)?;
            cfg.io.fold_spec = folds.or(cfg.io.fold_spec);
            cfg.io.bundle = bundle.or(cfg.io.bundle);
            ("export-finetune", pipeline::run_export_finetune(&cfg)?)
        }
        Command::Run { common, inputs, pc1, threshold, registry, train } => {
            let mut cfg = base_config(&common)?;
            if !inputs.is_empty() {
                cfg.io.inputs = inputs;
            }
            cfg.io.pc1_table = pc1.or(cfg.io.pc1_table);
            cfg.label.threshold = threshold.or(cfg.label.threshold);
            cfg.io.registry = registry.registry.or(cfg.io.registry);
            apply_train(&mut cfg, &train);
            cfg.validate()?;
            let m = pipeline::run_all(&cfg)?;
            for stage in pipeline::STAGES {
                if let Some(r) = m.stages.get(stage) {
                    report(stage, r);
                }
            }
            for p in m.reconcile() {
                eprintln!("warning: {p}");
            }
            return Ok(());
        }
    };
    report(name, &record);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("newsgauge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
