//! Domain-level quality scores joined onto articles and split at the median.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;

use crate::Class;

#[derive(Debug, Error)]
pub enum LabelError {
    #[error("cannot derive a registrable domain from {0:?}")]
    Domain(String),
    #[error("pc1 table: {0}")]
    Csv(#[from] csv::Error),
    #[error("pc1 table line {line}: {message}")]
    Table { line: u64, message: String },
    #[error("pc1 {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("median of an empty score list")]
    Empty,
}

/// Lowercase registrable domain of an absolute URL or bare hostname.
pub fn normalize_domain(input: &str) -> Result<String, LabelError> {
    let err = || LabelError::Domain(input.to_string());
    let trimmed = input.trim();
    if trimmed.is_empty() || trimmed.chars().any(char::is_whitespace) {
        return Err(err());
    }
    let url = if trimmed.contains("://") {
        Url::parse(trimmed)
    } else {
        Url::parse(&format!("http://{trimmed}"))
    }
    .map_err(|_| err())?;
    let host = match url.host() {
        Some(url::Host::Domain(d)) => d.trim_end_matches('.').to_ascii_lowercase(),
        _ => return Err(err()),
    };
    let host = host.strip_prefix("www.").unwrap_or(&host);
    psl::domain_str(host)
        .map(str::to_string)
        .ok_or_else(err)
}

/// Immutable map from registrable domain to PC1 score.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pc1Table {
    entries: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
struct Pc1Row {
    domain: String,
    pc1: f64,
}

impl Pc1Table {
    /// Builds a table from `(domain, score)` pairs, normalizing each domain.
    /// Duplicates after normalization are an error.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, LabelError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut entries = BTreeMap::new();
        for (i, (domain, pc1)) in pairs.into_iter().enumerate() {
            insert(&mut entries, domain.as_ref(), pc1, i as u64 + 1)?;
        }
        Ok(Self { entries })
    }

    /// Reads CSV with a `domain,pc1` header.
    pub fn read_csv<R: Read>(input: R) -> Result<Self, LabelError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.len() < 2 || &headers[0] != "domain" || &headers[1] != "pc1" {
            return Err(LabelError::Table {
                line: 1,
                message: "expected header domain,pc1".into(),
            });
        }
        let mut entries = BTreeMap::new();
        for (i, row) in rdr.deserialize::<Pc1Row>().enumerate() {
            let row = row?;
            insert(&mut entries, &row.domain, row.pc1, i as u64 + 2)?;
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, domain: &str) -> Option<f64> {
        self.entries.get(domain).copied()
    }

    /// Score for the registrable domain of `url`, if listed.
    pub fn lookup(&self, url: &str) -> Option<(String, f64)> {
        let d = normalize_domain(url).ok()?;
        let s = self.get(&d)?;
        Some((d, s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

fn insert(
    entries: &mut BTreeMap<String, f64>,
    domain: &str,
    pc1: f64,
    line: u64,
) -> Result<(), LabelError> {
    let table_err = |message: String| LabelError::Table { line, message };
    if !(0.0..=1.0).contains(&pc1) {
        return Err(table_err(format!("pc1 {pc1} is outside [0, 1]")));
    }
    let key = normalize_domain(domain).map_err(|e| table_err(e.to_string()))?;
    if entries.insert(key.clone(), pc1).is_some() {
        return Err(table_err(format!("duplicate domain {key}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct JoinCounts {
    pub input: usize,
    pub matched: usize,
    pub unmatched: usize,
}

/// Streaming join: items whose URL maps to a listed domain pass with their
/// score; others are dropped and counted.
pub struct Join<'t, I, F> {
    inner: I,
    table: &'t Pc1Table,
    url_of: F,
    counts: JoinCounts,
}

pub fn join_pc1<I, T, F>(items: I, table: &Pc1Table, url_of: F) -> Join<'_, I::IntoIter, F>
where
    I: IntoIterator<Item = T>,
    F: FnMut(&T) -> &str,
{
    Join {
        inner: items.into_iter(),
        table,
        url_of,
        counts: JoinCounts::default(),
    }
}

impl<I, F> Join<'_, I, F> {
    pub fn counts(&self) -> JoinCounts {
        self.counts
    }
}

impl<I, T, F> Iterator for Join<'_, I, F>
where
    I: Iterator<Item = T>,
    F: FnMut(&T) -> &str,
{
    type Item = (T, f64);

    fn next(&mut self) -> Option<Self::Item> {
        for item in self.inner.by_ref() {
            self.counts.input += 1;
            match self.table.lookup((self.url_of)(&item)) {
                Some((_, s)) => {
                    self.counts.matched += 1;
                    return Some((item, s));
                }
                None => self.counts.unmatched += 1,
            }
        }
        None
    }
}

/// Median; an even count averages the two central values.
pub fn median_threshold(scores: &[f64]) -> Result<f64, LabelError> {
    if scores.is_empty() {
        return Err(LabelError::Empty);
    }
    let mut v = scores.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Ok(if v.len() % 2 == 0 {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityLabel {
    pub value: Class,
    pub pc1: f64,
    pub threshold: f64,
}

/// HIGH iff `pc1 > threshold`; ties go to LOW.
pub fn binarize(pc1: f64, threshold: f64) -> Result<QualityLabel, LabelError> {
    if !(0.0..=1.0).contains(&pc1) {
        return Err(LabelError::OutOfRange(pc1));
    }
    let value = if pc1 > threshold { Class::High } else { Class::Low };
    Ok(QualityLabel {
        value,
        pc1,
        threshold,
    })
}
