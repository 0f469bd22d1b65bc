use std::collections::HashSet;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::conllu::{AnnotatedDoc, AnnotationError};
use super::misc::MiscStats;
use super::registry::{FeatureGroup, FeatureRegistry};

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub token_count: usize,
}

/// Maps an NER column value to its entity category; `None` for outside tokens.
fn ner_category(tag: &str) -> Option<&str> {
    let tag = tag.trim();
    if tag.is_empty() || tag == "O" || tag == "_" {
        return None;
    }
    match tag.split_once('-') {
        Some((prefix, rest)) if matches!(prefix, "B" | "I" | "E" | "S" | "L" | "U") => Some(rest),
        _ => Some(tag),
    }
}

/// Tag-group entries are `count(tag) / token_count`; NER counts only
/// entity-tagged tokens. Unknown tags land in each group's OTHER column.
pub fn featurize(doc: &AnnotatedDoc, registry: &FeatureRegistry) -> FeatureVector {
    let n = doc.tokens.len();
    let mut values = vec![0.0; registry.len()];
    if n == 0 {
        return FeatureVector {
            values,
            token_count: 0,
        };
    }

    let mut counts = vec![0usize; registry.len()];
    for t in &doc.tokens {
        counts[registry.tag_index(FeatureGroup::Pos, &t.coarse_pos)] += 1;
        counts[registry.tag_index(FeatureGroup::Treebank, &t.fine_tag)] += 1;
        counts[registry.tag_index(FeatureGroup::Dependency, &t.dep_label)] += 1;
        if let Some(cat) = ner_category(&t.ner_tag) {
            counts[registry.tag_index(FeatureGroup::Ner, cat)] += 1;
        }
    }
    let tag_end = registry.group_range(FeatureGroup::Ner).end;
    for (v, c) in values[..tag_end].iter_mut().zip(&counts) {
        *v = *c as f64 / n as f64;
    }

    let stats = MiscStats::compute(doc);
    let misc = registry.group_range(FeatureGroup::Misc);
    for (slot, metric) in values[misc].iter_mut().zip(registry.misc_metrics()) {
        let v = stats.value(*metric);
        *slot = if v.is_finite() { v } else { 0.0 };
    }
    FeatureVector {
        values,
        token_count: n,
    }
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("feature matrix io: {0}")]
    Io(#[from] std::io::Error),
    #[error("feature csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("feature csv header does not match registry {0}")]
    Header(String),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

/// Row-per-document feature table in input order.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    pub registry_version: String,
    pub columns: Vec<String>,
    pub doc_ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Rejected documents, with their diagnostics.
    pub rejects: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSidecar {
    pub registry_version: String,
    pub row_count: usize,
    pub created: String,
}

impl FeatureMatrix {
    pub fn skipped(&self) -> usize {
        self.rejects.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), MatrixError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = Vec::with_capacity(self.columns.len() + 1);
        header.push("doc_id".to_string());
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for (id, row) in self.doc_ids.iter().zip(&self.rows) {
            let mut rec = Vec::with_capacity(row.len() + 1);
            rec.push(id.clone());
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a matrix written by [`FeatureMatrix::write_csv`], checking the
    /// header against the registry.
    pub fn read_csv<R: Read>(input: R, registry: &FeatureRegistry) -> Result<Self, MatrixError> {
        let mut r = csv::Reader::from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let columns = registry.qualified_names();
        if header.first().map(String::as_str) != Some("doc_id") || header[1..] != columns[..] {
            return Err(MatrixError::Header(registry.version().to_string()));
        }
        let mut doc_ids = Vec::new();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .skip(1)
                .map(|v| v.parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| MatrixError::Row {
                    row: i + 1,
                    message: "non-numeric or non-finite value".into(),
                })?;
            doc_ids.push(rec[0].to_string());
            rows.push(row);
        }
        Ok(Self {
            registry_version: registry.version().to_string(),
            columns,
            doc_ids,
            rows,
            rejects: Vec::new(),
        })
    }
}

/// Featurizes a document stream in parallel, preserving input order.
/// Rejected and duplicate documents are skipped with a diagnostic; an I/O
/// error aborts.
pub fn featurize_corpus<I>(docs: I, registry: &FeatureRegistry) -> Result<FeatureMatrix, AnnotationError>
where
    I: IntoIterator<Item = Result<AnnotatedDoc, AnnotationError>>,
{
    let mut accepted = Vec::new();
    let mut rejects = Vec::new();
    let mut seen = HashSet::new();
    for doc in docs {
        match doc {
            Ok(d) if !seen.insert(d.doc_id.clone()) => {
                rejects.push(format!("duplicate doc_id {}", d.doc_id))
            }
            Ok(d) => accepted.push(d),
            Err(e @ AnnotationError::Malformed { .. }) => rejects.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    let rows: Vec<Vec<f64>> = accepted
        .par_iter()
        .map(|d| featurize(d, registry).values)
        .collect();
    Ok(FeatureMatrix {
        registry_version: registry.version().to_string(),
        columns: registry.qualified_names(),
        doc_ids: accepted.into_iter().map(|d| d.doc_id).collect(),
        rows,
        rejects,
    })
}
