use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::Deserialize;
use url::Url;

use super::charset::resolve_charset;
use super::{IngestError, RawPage};

pub const SIDECAR_NAME: &str = "meta.json";

/// Per-file metadata from `meta.json`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SidecarEntry {
    pub url: Option<String>,
    pub date: Option<NaiveDate>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DirStats {
    pub files: u64,
    pub pages: u64,
    pub skipped: u64,
}

/// Iterates `*.html` files of a directory in lexicographic filename order.
pub struct HtmlDir {
    files: std::vec::IntoIter<PathBuf>,
    sidecar: BTreeMap<String, SidecarEntry>,
    stats: DirStats,
}

impl HtmlDir {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, IngestError> {
        let path = path.as_ref();
        let io_err = |source| IngestError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut files = Vec::new();
        for entry in fs::read_dir(path).map_err(io_err)? {
            let entry = entry.map_err(io_err)?;
            let p = entry.path();
            if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("html")) && p.is_file() {
                files.push(p);
            }
        }
        files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));

        let sidecar_path = path.join(SIDECAR_NAME);
        let sidecar = if sidecar_path.exists() {
            let text = fs::read_to_string(&sidecar_path).map_err(|source| IngestError::Io {
                path: sidecar_path.display().to_string(),
                source,
            })?;
            serde_json::from_str(&text).map_err(|e| IngestError::Sidecar {
                path: sidecar_path.display().to_string(),
                message: e.to_string(),
            })?
        } else {
            BTreeMap::new()
        };

        Ok(Self {
            files: files.into_iter(),
            sidecar,
            stats: DirStats::default(),
        })
    }

    pub fn stats(&self) -> &DirStats {
        &self.stats
    }

    fn load(&self, path: &Path) -> Option<RawPage> {
        let name = path.file_name()?.to_string_lossy().into_owned();
        let body = fs::read(path).ok().filter(|b| !b.is_empty())?;
        let meta = self.sidecar.get(&name).cloned().unwrap_or_default();
        let url = match meta.url {
            Some(u) => Url::parse(&u).ok()?,
            None => Url::from_file_path(fs::canonicalize(path).ok()?).ok()?,
        };
        let encoding = resolve_charset(None, &body).ok()?;
        Some(RawPage {
            url,
            fetch_date: meta.date,
            content_type: "text/html".to_string(),
            body,
            encoding,
        })
    }
}

impl Iterator for HtmlDir {
    type Item = RawPage;

    fn next(&mut self) -> Option<RawPage> {
        loop {
            let path = self.files.next()?;
            self.stats.files += 1;
            match self.load(&path) {
                Some(page) => {
                    self.stats.pages += 1;
                    return Some(page);
                }
                None => self.stats.skipped += 1,
            }
        }
    }
}
