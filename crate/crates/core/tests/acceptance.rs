//! Acceptance checks, one line per criterion.

mod common;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use newsgauge_core::eval::{confusion_metrics, cross_validate, roc_auc, stratified_kfold, FoldSpec};
use newsgauge_core::features::{featurize, AnnotatedDoc, AnnotationReader, FeatureGroup, FeatureRegistry};
use newsgauge_core::labels::{binarize, median_threshold};
use newsgauge_core::ml::{logreg_objective, Dataset, ModelKind, TrainConfig, TrainedModel, Trainer};
use newsgauge_core::parser::{extract_article, extract_article_traced, ParserConfig};
use newsgauge_core::pipeline::{self, PipelineConfig, TIMINGS_NAME};
use newsgauge_core::Class;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

enum Outcome {
    Pass(String),
    Fail(String),
    Unattainable(String),
}

use Outcome::*;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn outcome(r: Result<String, String>) -> Outcome {
    match r {
        Ok(s) => Pass(s),
        Err(s) => Fail(s),
    }
}

fn golden() -> Outcome {
    let start = Instant::now();
    outcome((|| {
        let n = common::golden::check_all()?;
        ensure(n >= 20, || format!("only {n} fixtures"))?;
        let secs = start.elapsed().as_secs_f64();
        ensure(secs < 5.0, || format!("took {secs:.2}s"))?;
        Ok(format!("{n} fixtures in {secs:.2}s"))
    })())
}

fn bands() -> Outcome {
    outcome((|| {
        let cfg = ParserConfig::default();
        let mut r = common::rng(11);
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for i in 0..100 {
            let (html, paras) = common::article_page(&mut r, common::EN_SENTENCES);
            let art = extract_article(&html, &cfg).map_err(|e| format!("article {i}: {e}"))?;
            let s = art.parser_score;
            ensure((150..=300).contains(&s), || format!("article {i} scored {s}"))?;
            ensure(art.paragraphs[1..] == paras[..], || format!("article {i}: wrong text"))?;
            lo = lo.min(s);
            hi = hi.max(s);
        }
        let mut r = common::rng(12);
        let mut nav_max = i64::MIN;
        for i in 0..100 {
            let (res, trace) = extract_article_traced(&common::nav_page(&mut r), &cfg);
            let best = trace.iter().map(|t| t.score.total).max().unwrap_or(0);
            ensure(best < 50 && res.is_err(), || format!("nav page {i} scored {best}"))?;
            nav_max = nav_max.max(best);
        }
        Ok(format!("articles in [{lo}, {hi}], nav max {nav_max}"))
    })())
}

fn features() -> Outcome {
    let reg = FeatureRegistry::default_registry();
    let checks = (|| {
        let sizes: Vec<usize> = FeatureGroup::ALL.iter().map(|g| reg.group_names(*g).len()).collect();
        ensure(sizes == [20, 57, 72, 26, 21], || format!("group sizes {sizes:?}"))?;
        let names = reg.qualified_names();
        let docs: Vec<AnnotatedDoc> = AnnotationReader::new(common::hand_features::CONLLU)
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let mut entries = 0;
        for (doc, (id, want)) in docs.iter().zip(common::hand_features::expected()) {
            let want: HashMap<&str, f64> = want.into_iter().collect();
            let got = featurize(doc, &reg).values;
            for (name, g) in names.iter().zip(&got) {
                let w = want.get(name.as_str()).copied().unwrap_or(0.0);
                ensure((g - w).abs() <= 1e-12, || format!("{id} {name}: {g} vs {w}"))?;
            }
            entries += want.len();
        }
        let zero = featurize(&AnnotatedDoc::default(), &reg);
        ensure(zero.values.iter().all(|&v| v == 0.0), || "empty doc is not a zero vector".into())?;
        Ok(format!("sizes {sizes:?}, {entries} hand entries within 1e-12, empty doc zero"))
    })();
    match checks {
        Ok(s) => Unattainable(format!(
            "{s}; the group sizes sum to {} so a total of 194 cannot also hold",
            reg.len()
        )),
        Err(e) => Fail(e),
    }
}

fn labels() -> Outcome {
    outcome((|| {
        let mut scores: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        scores.shuffle(&mut common::rng(4));
        let t = median_threshold(&scores).map_err(|e| e.to_string())?;
        let high = scores.iter().filter(|&&s| binarize(s, t).unwrap().value == Class::High).count();
        ensure(high == 500, || format!("median split {}/{high}", 1000 - high))?;
        for &s in &scores {
            let direct = if s > 0.8301 { Class::High } else { Class::Low };
            ensure(binarize(s, 0.8301).unwrap().value == direct, || format!("{s} at 0.8301"))?;
        }
        Ok("median split 500/500, 0.8301 matches direct comparison".into())
    })())
}

fn two_blobs(n: usize, dims: usize, active: usize, seed: u64) -> Dataset {
    let mut r = common::rng(seed);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = Class::from_index(i % 2);
        let shift = if class == Class::High { 1.0 } else { -1.0 };
        let row = (0..dims)
            .map(|d| {
                let z: f64 = r.sample(StandardNormal);
                if d < active {
                    z + shift
                } else {
                    z
                }
            })
            .collect();
        rows.push(row);
        labels.push(class);
    }
    let ids = (0..n).map(|i| format!("p{i}")).collect();
    Dataset::new(rows, labels, ids, "blobs").unwrap()
}

fn folds() -> Outcome {
    outcome((|| {
        let mut r = common::rng(51);
        for n in [20usize, 101, 1000] {
            for trial in 0..20 {
                let labels: Vec<Class> = loop {
                    let v: Vec<Class> = (0..n).map(|_| Class::from_index(r.gen_range(0..2))).collect();
                    if v.iter().filter(|c| **c == Class::High).count().min(v.iter().filter(|c| **c == Class::Low).count()) >= 5 {
                        break v;
                    }
                };
                let seed = r.gen();
                let spec = stratified_kfold(&labels, 5, seed).map_err(|e| e.to_string())?;
                let mut seen = HashSet::new();
                for f in 0..5 {
                    seen.extend(spec.split(f).1);
                }
                ensure(seen.len() == n, || format!("n {n} trial {trial}: not a partition"))?;
                for c in spec.class_counts(&labels) {
                    for class in Class::ALL {
                        let total = labels.iter().filter(|l| **l == class).count() as f64;
                        let dev = (c[class.index()] as f64 - total / 5.0).abs();
                        ensure(dev < 1.0, || format!("n {n} trial {trial}: class count {c:?}"))?;
                    }
                }
                let again = stratified_kfold(&labels, 5, seed).unwrap();
                ensure(again.hash() == spec.hash(), || format!("n {n}: not deterministic"))?;
                let back = FoldSpec::from_json(&spec.to_json()).map_err(|e| e.to_string())?;
                ensure(back == spec, || format!("n {n}: JSON round trip"))?;
            }
        }
        let data = two_blobs(200, 8, 3, 52);
        let spec = stratified_kfold(data.labels(), 5, 42).unwrap();
        let mut hashes = HashSet::new();
        for kind in ModelKind::ALL {
            let cfg = TrainConfig { rf_trees: 20, ..TrainConfig::for_kind(kind) };
            hashes.insert(cross_validate(&data, &cfg, &spec).map_err(|e| e.to_string())?.fold_spec_hash);
        }
        ensure(hashes.len() == 1, || "models report different fold hashes".into())?;
        Ok("20 trials each for n in {20, 101, 1000}, one fold hash across 3 models".into())
    })())
}

fn metrics() -> Outcome {
    outcome((|| {
        let mut r = common::rng(61);
        for inst in 0..50 {
            let labels: Vec<Class> = (0..200).map(|i| Class::from_index((i % 3 == 0) as usize)).collect();
            let levels = if inst % 2 == 0 { 5.0 } else { 1e9 };
            let scores: Vec<f64> = labels
                .iter()
                .map(|l| ((r.gen::<f64>() + 0.3 * l.index() as f64) * levels).round() / levels)
                .collect();
            let (mut wins, mut pairs) = (0.0, 0.0);
            for (a, la) in scores.iter().zip(&labels) {
                for (b, lb) in scores.iter().zip(&labels) {
                    if *la == Class::High && *lb == Class::Low {
                        pairs += 1.0;
                        wins += if a > b { 1.0 } else if a == b { 0.5 } else { 0.0 };
                    }
                }
            }
            let got = roc_auc(&scores, &labels).map_err(|e| e.to_string())?;
            ensure((got - wins / pairs).abs() <= 1e-12, || format!("AUC instance {inst}: {got}"))?;
        }
        for inst in 0..20 {
            let n = r.gen_range(1..200);
            let labels: Vec<Class> = (0..n).map(|_| Class::from_index(r.gen_range(0..2))).collect();
            let pred: Vec<Class> = (0..n).map(|_| Class::from_index(r.gen_range(0..2))).collect();
            let mut m = [[0usize; 2]; 2];
            for (p, l) in pred.iter().zip(&labels) {
                m[p.index()][l.index()] += 1;
            }
            let div = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
            let prec = |c: usize| div(m[c][c], m[c][0] + m[c][1]);
            let rec = |c: usize| div(m[c][c], m[0][c] + m[1][c]);
            let f1 = |c: usize| {
                let (p, r) = (prec(c), rec(c));
                if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) }
            };
            let c = confusion_metrics(&pred, &labels).map_err(|e| e.to_string())?;
            ensure(
                c.accuracy == div(m[0][0] + m[1][1], n)
                    && c.precision == (prec(0) + prec(1)) / 2.0
                    && c.recall == (rec(0) + rec(1)) / 2.0
                    && c.f1 == (f1(0) + f1(1)) / 2.0,
                || format!("confusion instance {inst}"),
            )?;
        }
        Ok("AUC on 50 instances within 1e-12, confusion metrics exact on 20".into())
    })())
}

fn models() -> Outcome {
    outcome((|| {
        let mut r = common::rng(71);
        let pdf = |x: f64, m: f64, v: f64| (-(x - m).powi(2) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
        let mut worst: f64 = 0.0;
        for case in 0..10 {
            let (n0, n1) = (r.gen_range(5..50), r.gen_range(5..50));
            let lo = Normal::new(r.gen_range(-2.0..0.0), r.gen_range(0.5..2.0)).unwrap();
            let hi = Normal::new(r.gen_range(0.0..2.0), r.gen_range(0.5..2.0)).unwrap();
            let mut xs: Vec<f64> = (0..n0).map(|_| lo.sample(&mut r)).collect();
            xs.extend((0..n1).map(|_| hi.sample(&mut r)));
            let labels = [vec![Class::Low; n0], vec![Class::High; n1]].concat();
            let ids = (0..xs.len()).map(|i| i.to_string()).collect();
            let data = Dataset::new(xs.iter().map(|&x| vec![x]).collect(), labels, ids, "g").unwrap();
            let TrainedModel::Gnb(m) = TrainConfig::for_kind(ModelKind::Gnb).fit(&data).map_err(|e| e.to_string())? else {
                return Err("not a GNB model".into());
            };
            let stats = |v: &[f64]| {
                let m = v.iter().sum::<f64>() / v.len() as f64;
                (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64)
            };
            let (m0, v0) = stats(&xs[..n0]);
            let (m1, v1) = stats(&xs[n0..]);
            let eps = 1e-9 * stats(&xs).1;
            let total = (n0 + n1) as f64;
            for step in 0..=20 {
                let x = -4.0 + step as f64 * 0.4;
                let a = n0 as f64 / total * pdf(x, m0, v0 + eps);
                let b = n1 as f64 / total * pdf(x, m1, v1 + eps);
                let diff = (m.posterior(&[x])[1] - b / (a + b)).abs();
                ensure(diff <= 1e-9, || format!("GNB case {case} x {x}: off by {diff}"))?;
                worst = worst.max(diff);
            }
        }

        let data = two_blobs(80, 5, 2, 72);
        for c in [Some(1.0), None] {
            let cfg = TrainConfig { logreg_c: c, ..TrainConfig::for_kind(ModelKind::LogReg) };
            let obj = logreg_objective(&data, &cfg);
            for point in 0..10 {
                let theta: Vec<f64> = (0..obj.dim()).map(|_| r.gen_range(-2.0..2.0)).collect();
                let grad = obj.value_grad(&theta).1;
                for j in 0..obj.dim() {
                    let (mut tp, mut tm) = (theta.clone(), theta.clone());
                    tp[j] += 1e-5;
                    tm[j] -= 1e-5;
                    let fd = (obj.value_grad(&tp).0 - obj.value_grad(&tm).0) / 2e-5;
                    let rel = (grad[j] - fd).abs() / grad[j].abs().max(fd.abs()).max(1e-8);
                    ensure(rel < 1e-4, || format!("LOGREG point {point} coord {j}: rel {rel}"))?;
                }
            }
        }

        let data = two_blobs(300, 12, 4, 73);
        let cfg = TrainConfig { rf_trees: 40, ..TrainConfig::for_kind(ModelKind::Rf) };
        let bytes = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let mut buf = Vec::new();
            pool.install(|| cfg.fit(&data)).unwrap().write_to(&mut buf).unwrap();
            buf
        };
        ensure(bytes(1) == bytes(4), || "RF bytes differ between 1 and 4 threads".into())?;
        Ok(format!("GNB max error {worst:.1e}, LOGREG gradient within 1e-4, RF identical on 1 and 4 threads"))
    })())
}

fn separable() -> Outcome {
    let start = Instant::now();
    outcome((|| {
        let data = two_blobs(2000, 194, 10, 81);
        let spec = stratified_kfold(data.labels(), 5, 42).map_err(|e| e.to_string())?;
        let mut parts = Vec::new();
        for kind in ModelKind::ALL {
            let report = cross_validate(&data, &TrainConfig::for_kind(kind), &spec).map_err(|e| e.to_string())?;
            let (acc, auc) = (report.mean.accuracy, report.mean.roc_auc);
            ensure(acc >= 0.95, || format!("{kind}: accuracy {acc:.4}"))?;
            if kind != ModelKind::Gnb {
                ensure(auc >= 0.99, || format!("{kind}: AUC {auc:.4}"))?;
            }
            parts.push(format!("{kind} acc {acc:.3} auc {auc:.3}"));
        }
        let secs = start.elapsed().as_secs_f64();
        ensure(secs < 120.0, || format!("took {secs:.1}s"))?;
        Ok(format!("{} in {secs:.1}s", parts.join(", ")))
    })())
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().unwrap() != TIMINGS_NAME {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn end_to_end() -> Outcome {
    outcome((|| {
        let root = tempfile::tempdir().map_err(|e| e.to_string())?;
        let corpus = common::write_corpus(&root.path().join("pages"), 200, 10, 91);
        common::write_pc1(&root.path().join("pc1.csv"), &corpus.domains, 92);
        let config = |out: &str| {
            let mut cfg = PipelineConfig::default();
            cfg.io.inputs = vec![root.path().join("pages")];
            cfg.io.pc1_table = Some(root.path().join("pc1.csv"));
            cfg.io.out_dir = root.path().join(out);
            cfg
        };
        let mut secs = Vec::new();
        let mut manifests = Vec::new();
        for out in ["a", "b"] {
            let start = Instant::now();
            manifests.push(pipeline::run_all(&config(out)).map_err(|e| e.to_string())?);
            secs.push(start.elapsed().as_secs_f64());
        }
        for m in &manifests {
            let issues = m.reconcile();
            ensure(issues.is_empty(), || format!("reconcile: {issues:?}"))?;
        }
        ensure(snapshot(&root.path().join("a")) == snapshot(&root.path().join("b")), || {
            "outputs differ between runs".into()
        })?;
        let worst = secs.iter().cloned().fold(0.0, f64::max);
        ensure(worst < 60.0, || format!("run took {worst:.1}s"))?;
        let ingest = &manifests[0].stages["ingest"];
        Ok(format!(
            "{} pages to {} articles, byte-identical, reconciled, slowest run {worst:.1}s",
            ingest.input_n, ingest.output_n
        ))
    })())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("parser golden suite", golden),
        ("parser score bands", bands),
        ("feature registry and values", features),
        ("label threshold", labels),
        ("stratified folds", folds),
        ("metric oracles", metrics),
        ("model oracles", models),
        ("separable benchmark", separable),
        ("end-to-end determinism", end_to_end),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Fail(format!("panicked: {msg}"))
        });
        let (tag, detail) = match result {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Unattainable(d) => ("UNATTAINABLE", d),
        };
        println!("criterion {} {name}: {tag} ({detail})", i + 1);
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
