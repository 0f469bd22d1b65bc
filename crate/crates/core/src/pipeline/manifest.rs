use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::PipelineError;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const TIMINGS_NAME: &str = "timings.json";
pub const LOCK_NAME: &str = ".newsgauge.lock";
const FORMAT: &str = "newsgauge-run";

/// Stage order; each stage's `output_n` feeds the next stage's `input_n`.
pub const STAGES: [&str; 6] = ["ingest", "label", "annotate", "featurize", "train-eval", "export-finetune"];

/// Counts and hashes recorded for one stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub config_hash: String,
    /// Input file name to SHA-256.
    pub inputs: BTreeMap<String, String>,
    /// Output file name to SHA-256.
    pub outputs: BTreeMap<String, String>,
    pub input_n: u64,
    pub output_n: u64,
    /// Items removed by the stage, by reason.
    pub dropped: BTreeMap<String, u64>,
    /// Items never admitted to the stage (e.g. non-HTML records).
    pub skipped: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub registry_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fold_hash: Option<String>,
    /// Stage-specific details.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

impl StageRecord {
    pub fn drop(&mut self, reason: &str) {
        *self.dropped.entry(reason.to_string()).or_default() += 1;
    }

    pub fn dropped_total(&self) -> u64 {
        self.dropped.values().sum()
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details
            .insert(key.to_string(), serde_json::to_value(value).expect("detail serializes"));
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format: String,
    pub version: u32,
    pub created: String,
    pub stages: BTreeMap<String, StageRecord>,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            format: FORMAT.into(),
            version: 1,
            created: created_timestamp(),
            stages: BTreeMap::new(),
        }
    }
}

impl RunManifest {
    pub fn load_or_default(dir: &Path) -> Result<Self, PipelineError> {
        let path = dir.join(MANIFEST_NAME);
        if !path.exists() {
            return Ok(Self::default());
        }
        let text = fs::read_to_string(&path).map_err(|e| PipelineError::io(&path, e))?;
        let mut m: Self = serde_json::from_str(&text)
            .map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))?;
        m.created = created_timestamp();
        Ok(m)
    }

    pub fn save(&self, dir: &Path) -> Result<(), PipelineError> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes") + "\n";
        write_atomic(&dir.join(MANIFEST_NAME), json.as_bytes())
    }

    /// Every inconsistency between recorded counts: a stage whose input does
    /// not equal output plus drops, or adjacent stages whose counts differ.
    pub fn reconcile(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (name, s) in &self.stages {
            if s.input_n != s.output_n + s.dropped_total() {
                problems.push(format!(
                    "{name}: input {} != output {} + dropped {}",
                    s.input_n,
                    s.output_n,
                    s.dropped_total()
                ));
            }
        }
        for pair in STAGES.windows(2) {
            if let (Some(a), Some(b)) = (self.stages.get(pair[0]), self.stages.get(pair[1])) {
                if a.output_n != b.input_n {
                    problems.push(format!(
                        "{} output {} != {} input {}",
                        pair[0], a.output_n, pair[1], b.input_n
                    ));
                }
            }
        }
        problems
    }
}

/// `SOURCE_DATE_EPOCH` as RFC 3339, or the Unix epoch when unset, so that
/// reruns stay byte-identical.
pub fn created_timestamp() -> String {
    let secs = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .unwrap_or(0);
    DateTime::<Utc>::from_timestamp(secs, 0)
        .unwrap_or_default()
        .format("%Y-%m-%dT%H:%M:%SZ")
        .to_string()
}

/// Wall-clock stage durations, kept apart from the deterministic manifest.
pub fn record_timing(dir: &Path, stage: &str, seconds: f64) -> Result<(), PipelineError> {
    let path = dir.join(TIMINGS_NAME);
    let mut t: BTreeMap<String, f64> = fs::read_to_string(&path)
        .ok()
        .and_then(|s| serde_json::from_str(&s).ok())
        .unwrap_or_default();
    t.insert(stage.to_string(), seconds);
    let json = serde_json::to_string_pretty(&t).expect("timings serialize") + "\n";
    write_atomic(&path, json.as_bytes())
}

/// Writes to a sibling temp file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| PipelineError::io(parent, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| PipelineError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| PipelineError::io(path, e))
}

pub fn sha256_file(path: &Path) -> Result<String, PipelineError> {
    let mut f = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf).map_err(|e| PipelineError::io(path, e))?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(hex::encode(h.finalize()))
}

/// Hash of a file, or of a directory's sorted `(name, hash)` listing.
pub fn sha256_path(path: &Path) -> Result<String, PipelineError> {
    if !path.is_dir() {
        return sha256_file(path);
    }
    let mut names: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| PipelineError::io(path, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    names.sort();
    let mut h = Sha256::new();
    for p in names {
        h.update(base_name(&p).as_bytes());
        h.update(b"\0");
        h.update(sha256_file(&p)?.as_bytes());
        h.update(b"\n");
    }
    Ok(hex::encode(h.finalize()))
}

pub fn base_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Exclusive per-directory lock, released on drop.
#[derive(Debug)]
pub struct DirLock {
    path: PathBuf,
}

impl DirLock {
    pub fn acquire(dir: &Path) -> Result<Self, PipelineError> {
        fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))?;
        let path = dir.join(LOCK_NAME);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(Self { path })
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => Err(PipelineError::Io {
                path: path.clone(),
                source: io::Error::new(
                    e.kind(),
                    "another newsgauge command holds this output directory; remove the lock file if it is stale",
                ),
            }),
            Err(e) => Err(PipelineError::io(&path, e)),
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}


/// Streaming output that appears under its final name only on commit.
pub struct AtomicFile {
    path: PathBuf,
    tmp: PathBuf,
    out: io::BufWriter<File>,
    hasher: Sha256,
}

impl AtomicFile {
    pub fn create(path: &Path) -> Result<Self, PipelineError> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| PipelineError::io(parent, e))?;
        }
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        let f = File::create(&tmp).map_err(|e| PipelineError::io(&tmp, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            tmp,
            out: io::BufWriter::with_capacity(1 << 16, f),
            hasher: Sha256::new(),
        })
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) -> Result<(), PipelineError> {
        self.hasher.update(bytes);
        self.out.write_all(bytes).map_err(|e| PipelineError::io(&self.tmp, e))
    }

    pub fn write_json_line<T: Serialize>(&mut self, row: &T) -> Result<(), PipelineError> {
        let mut line = serde_json::to_vec(row).expect("record serializes");
        line.push(b'\n');
        self.write_bytes(&line)
    }

    /// Flushes, renames into place and returns the content hash.
    pub fn commit(self) -> Result<String, PipelineError> {
        let Self { path, tmp, out, hasher } = self;
        let f = out
            .into_inner()
            .map_err(|e| PipelineError::io(&tmp, e.into_error()))?;
        f.sync_all().map_err(|e| PipelineError::io(&tmp, e))?;
        drop(f);
        fs::rename(&tmp, &path).map_err(|e| PipelineError::io(&path, e))?;
        Ok(hex::encode(hasher.finalize()))
    }
}

impl Write for AtomicFile {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.out.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
