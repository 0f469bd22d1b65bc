//! Page sources and the English-language gate.
//!
//! Both readers are single-pass iterators that hold at most one record in
//! memory. Malformed input never aborts a stream; it is counted in the
//! reader's stats instead.

mod charset;
mod dir;
mod filter;
mod lang;
mod profiles;
mod warc;

pub use charset::{resolve_charset, CharsetError};
pub use dir::{HtmlDir, DirStats, SidecarEntry};
pub use filter::{admits, filter_english, FilterCounts, FilterEnglish};
pub use lang::{LanguageDetector, LanguageVerdict, TrigramDetector, UNDETERMINED};
pub use warc::{WarcReader, WarcStats};

use chrono::NaiveDate;
use encoding_rs::Encoding;
use thiserror::Error;
use url::Url;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("input is not a WARC archive (expected `WARC/` or a gzip member)")]
    NotWarc,
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid sidecar {path}: {message}")]
    Sidecar { path: String, message: String },
    #[error("io error: {0}")]
    Stream(#[from] std::io::Error),
}

/// One fetched page, before decoding.
#[derive(Clone, Debug)]
pub struct RawPage {
    pub url: Url,
    pub fetch_date: Option<NaiveDate>,
    pub content_type: String,
    pub body: Vec<u8>,
    pub encoding: &'static Encoding,
}

impl RawPage {
    /// Resolved encoding name, e.g. `UTF-8` or `windows-1252`.
    pub fn charset(&self) -> &'static str {
        self.encoding.name()
    }

    /// Decodes the body, replacing malformed sequences. A byte-order mark
    /// overrides the resolved encoding.
    pub fn decode(&self) -> String {
        let (text, _, _) = self.encoding.decode(&self.body);
        text.into_owned()
    }
}

pub(crate) fn is_html_mime(content_type: &str) -> bool {
    let mime = content_type
        .split(';')
        .next()
        .unwrap_or("")
        .trim()
        .to_ascii_lowercase();
    mime == "text/html" || mime == "application/xhtml+xml"
}
