use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::hashing::sha256_hex;
use crate::Class;

/// One extracted article, the unit passed between stages as JSONL.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArticleRecord {
    pub doc_id: String,
    pub url: String,
    pub domain: Option<String>,
    pub date: Option<String>,
    pub text: Vec<String>,
    pub parser_score: i64,
    pub lang: String,
    pub lang_confidence: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pc1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Class>,
}

/// A page that produced no article.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectRecord {
    pub url: String,
    pub date: Option<String>,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
}

/// First 16 hex digits of SHA-256 over `url` and the fetch date.
pub fn doc_id(url: &str, date: Option<&str>) -> String {
    let mut key = String::with_capacity(url.len() + 12);
    key.push_str(url);
    key.push('\n');
    key.push_str(date.unwrap_or(""));
    sha256_hex(key.as_bytes())[..16].to_string()
}

/// Reads every non-empty line of a JSONL file.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, PipelineError> {
    let f = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| PipelineError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let v = serde_json::from_str(&line).map_err(|e| {
            PipelineError::Input(format!("{} line {}: {e}", path.display(), i + 1))
        })?;
        out.push(v);
    }
    Ok(out)
}

/// Serializes rows as JSONL into a buffer.
pub fn to_jsonl<'a, T: Serialize + 'a>(rows: impl IntoIterator<Item = &'a T>) -> Vec<u8> {
    let mut buf = Vec::new();
    for r in rows {
        serde_json::to_writer(&mut buf, r).expect("record serializes");
        buf.push(b'\n');
    }
    buf
}
