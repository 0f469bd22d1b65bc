use std::collections::VecDeque;
use std::io::{self, BufRead, Cursor, Read};

use chrono::NaiveDate;
use flate2::bufread::GzDecoder;
use url::Url;

use super::charset::{find, resolve_charset};
use super::{is_html_mime, IngestError, RawPage};

const GZIP_MAGIC: [u8; 3] = [0x1f, 0x8b, 0x08];
const MAX_RECORD_BYTES: u64 = 64 * 1024 * 1024;

/// Counters for one pass over an archive.
///
/// `records == pages + non_page + skipped` holds at every point of the pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WarcStats {
    pub records: u64,
    pub pages: u64,
    pub non_page: u64,
    pub skipped: u64,
    /// Set when the archive ended in the middle of a record.
    pub truncated: Option<String>,
}

/// Streaming reader yielding one [`RawPage`] per HTML `response` record.
///
/// Accepts plain WARC/1.x and per-record gzip archives. A corrupt gzip member
/// or malformed record is skipped and counted; the reader resynchronises on
/// the next member or `WARC/1.` line.
pub struct WarcReader<R> {
    inner: R,
    gzip: bool,
    done: bool,
    pending_line: Option<Vec<u8>>,
    carry: Vec<u8>,
    queue: VecDeque<RawPage>,
    stats: WarcStats,
}

impl<R: BufRead> WarcReader<R> {
    pub fn new(mut inner: R) -> Result<Self, IngestError> {
        let head = inner.fill_buf()?;
        let (gzip, done) = if head.is_empty() {
            (false, true)
        } else if head.starts_with(&GZIP_MAGIC[..2]) {
            (true, false)
        } else if head.starts_with(b"WARC/") {
            (false, false)
        } else {
            return Err(IngestError::NotWarc);
        };
        Ok(Self {
            inner,
            gzip,
            done,
            pending_line: None,
            carry: Vec::new(),
            queue: VecDeque::new(),
            stats: WarcStats::default(),
        })
    }

    pub fn stats(&self) -> &WarcStats {
        &self.stats
    }

    pub fn is_gzip(&self) -> bool {
        self.gzip
    }

    fn account(&mut self, outcome: Classified) -> Option<RawPage> {
        match outcome {
            Classified::Page(p) => {
                self.stats.pages += 1;
                Some(*p)
            }
            Classified::NonPage => {
                self.stats.non_page += 1;
                None
            }
            Classified::Skip => {
                self.stats.skipped += 1;
                None
            }
        }
    }

    fn next_plain(&mut self) -> Option<RawPage> {
        loop {
            if self.done {
                return None;
            }
            match read_record(&mut self.inner, &mut self.pending_line) {
                ReadOutcome::Eof => self.done = true,
                ReadOutcome::Record(rec) => {
                    self.stats.records += 1;
                    if let Some(page) = self.account(classify(rec)) {
                        return Some(page);
                    }
                }
                ReadOutcome::Malformed => {
                    self.stats.records += 1;
                    self.stats.skipped += 1;
                    if let Err(e) = resync_line(&mut self.inner, &mut self.pending_line) {
                        self.stats.truncated = Some(format!("read error while resyncing: {e}"));
                        self.done = true;
                    }
                }
                ReadOutcome::Truncated(msg) => {
                    self.stats.records += 1;
                    self.stats.skipped += 1;
                    self.stats.truncated = Some(msg);
                    self.done = true;
                }
                ReadOutcome::Io(e) => {
                    self.stats.truncated = Some(format!("read error: {e}"));
                    self.done = true;
                }
            }
        }
    }

    fn next_gzip(&mut self) -> Option<RawPage> {
        loop {
            if let Some(page) = self.queue.pop_front() {
                return Some(page);
            }
            if self.done {
                return None;
            }
            if self.carry.is_empty() {
                match self.inner.fill_buf() {
                    Ok([]) => {
                        self.done = true;
                        continue;
                    }
                    Ok(buf) if buf.starts_with(&GZIP_MAGIC[..2]) => {}
                    Ok(_) => {
                        // Bytes between members: count as one damaged record.
                        self.stats.records += 1;
                        self.stats.skipped += 1;
                        self.scan_to_member();
                        continue;
                    }
                    Err(e) => {
                        self.stats.truncated = Some(format!("read error: {e}"));
                        self.done = true;
                        continue;
                    }
                }
            }

            let carry = std::mem::take(&mut self.carry);
            let mut decoded = Vec::new();
            let result = {
                let src = Cursor::new(carry).chain(&mut self.inner);
                GzDecoder::new(src)
                    .take(MAX_RECORD_BYTES + 1)
                    .read_to_end(&mut decoded)
            };
            match result {
                Ok(_) if decoded.len() as u64 > MAX_RECORD_BYTES => {
                    self.stats.records += 1;
                    self.stats.skipped += 1;
                    self.scan_to_member();
                }
                Ok(_) => self.parse_member(decoded),
                Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => {
                    self.stats.records += 1;
                    self.stats.skipped += 1;
                    self.stats.truncated = Some(format!("archive ends inside a gzip member: {e}"));
                    self.done = true;
                }
                Err(_) => {
                    self.stats.records += 1;
                    self.stats.skipped += 1;
                    self.scan_to_member();
                }
            }
        }
    }

    fn parse_member(&mut self, decoded: Vec<u8>) {
        let mut cursor = Cursor::new(decoded);
        let mut pending = None;
        loop {
            match read_record(&mut cursor, &mut pending) {
                ReadOutcome::Eof => break,
                ReadOutcome::Record(rec) => {
                    self.stats.records += 1;
                    if let Some(page) = self.account(classify(rec)) {
                        self.queue.push_back(page);
                    }
                }
                ReadOutcome::Malformed | ReadOutcome::Truncated(_) | ReadOutcome::Io(_) => {
                    self.stats.records += 1;
                    self.stats.skipped += 1;
                    break;
                }
            }
        }
    }

    /// Consumes input up to and including the next gzip magic; the magic is
    /// kept in `carry` so the following decode sees a complete member.
    fn scan_to_member(&mut self) {
        let mut matched = 0usize;
        loop {
            let buf = match self.inner.fill_buf() {
                Ok(buf) => buf,
                Err(e) => {
                    self.stats.truncated = Some(format!("read error while resyncing: {e}"));
                    self.done = true;
                    return;
                }
            };
            if buf.is_empty() {
                self.done = true;
                return;
            }
            let mut used = 0;
            let mut found = false;
            for &b in buf {
                used += 1;
                if b == GZIP_MAGIC[matched] {
                    matched += 1;
                } else {
                    matched = usize::from(b == GZIP_MAGIC[0]);
                }
                if matched == GZIP_MAGIC.len() {
                    found = true;
                    break;
                }
            }
            self.inner.consume(used);
            if found {
                self.carry = GZIP_MAGIC.to_vec();
                return;
            }
        }
    }
}

impl<R: BufRead> Iterator for WarcReader<R> {
    type Item = RawPage;

    fn next(&mut self) -> Option<RawPage> {
        if self.gzip {
            self.next_gzip()
        } else {
            self.next_plain()
        }
    }
}

struct Record {
    headers: Vec<(String, String)>,
    content: Option<Vec<u8>>,
}

impl Record {
    fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }
}

enum ReadOutcome {
    Eof,
    Record(Record),
    Malformed,
    Truncated(String),
    Io(io::Error),
}

enum Classified {
    Page(Box<RawPage>),
    NonPage,
    Skip,
}

fn read_line<B: BufRead>(src: &mut B, buf: &mut Vec<u8>) -> io::Result<usize> {
    buf.clear();
    let n = src.read_until(b'\n', buf)?;
    while matches!(buf.last(), Some(b'\n' | b'\r')) {
        buf.pop();
    }
    Ok(n)
}

fn read_record<B: BufRead>(src: &mut B, pending: &mut Option<Vec<u8>>) -> ReadOutcome {
    let mut line = Vec::new();
    let version = match pending.take() {
        Some(l) => l,
        None => loop {
            match read_line(src, &mut line) {
                Ok(0) => return ReadOutcome::Eof,
                Ok(_) if line.is_empty() => continue,
                Ok(_) => break std::mem::take(&mut line),
                Err(e) => return ReadOutcome::Io(e),
            }
        },
    };
    if !version.starts_with(b"WARC/1.") {
        return ReadOutcome::Malformed;
    }

    let mut headers: Vec<(String, String)> = Vec::with_capacity(16);
    loop {
        match read_line(src, &mut line) {
            Ok(0) => return ReadOutcome::Truncated("archive ends inside record headers".into()),
            Ok(_) if line.is_empty() => break,
            Ok(_) => {}
            Err(e) => return ReadOutcome::Io(e),
        }
        let text = String::from_utf8_lossy(&line);
        if text.starts_with([' ', '\t']) {
            match headers.last_mut() {
                Some((_, v)) => {
                    v.push(' ');
                    v.push_str(text.trim());
                    continue;
                }
                None => return ReadOutcome::Malformed,
            }
        }
        match text.split_once(':') {
            Some((k, v)) if !k.trim().is_empty() => {
                headers.push((k.trim().to_string(), v.trim().to_string()))
            }
            _ => return ReadOutcome::Malformed,
        }
    }

    let mut rec = Record {
        headers,
        content: None,
    };
    let Some(len) = rec.header("Content-Length").and_then(|v| v.parse::<u64>().ok()) else {
        return ReadOutcome::Malformed;
    };
    let wanted = rec
        .header("WARC-Type")
        .is_some_and(|t| t.eq_ignore_ascii_case("response"))
        && len <= MAX_RECORD_BYTES;

    let got = if wanted {
        let mut content = Vec::with_capacity(len as usize);
        match src.by_ref().take(len).read_to_end(&mut content) {
            Ok(n) => {
                rec.content = Some(content);
                n as u64
            }
            Err(e) => return ReadOutcome::Io(e),
        }
    } else {
        match io::copy(&mut src.by_ref().take(len), &mut io::sink()) {
            Ok(n) => n,
            Err(e) => return ReadOutcome::Io(e),
        }
    };
    if got < len {
        return ReadOutcome::Truncated(format!(
            "archive ends inside record content ({got} of {len} bytes)"
        ));
    }
    if let Err(e) = skip_record_trailer(src) {
        return ReadOutcome::Io(e);
    }
    ReadOutcome::Record(rec)
}

fn skip_record_trailer<B: BufRead>(src: &mut B) -> io::Result<()> {
    for _ in 0..4 {
        let buf = src.fill_buf()?;
        match buf.first() {
            Some(b'\r' | b'\n') => src.consume(1),
            _ => break,
        }
    }
    Ok(())
}

fn resync_line<B: BufRead>(src: &mut B, pending: &mut Option<Vec<u8>>) -> io::Result<()> {
    let mut line = Vec::new();
    loop {
        if read_line(src, &mut line)? == 0 {
            return Ok(());
        }
        if line.starts_with(b"WARC/1.") {
            *pending = Some(line);
            return Ok(());
        }
    }
}

fn classify(rec: Record) -> Classified {
    let is_response = rec
        .header("WARC-Type")
        .is_some_and(|t| t.eq_ignore_ascii_case("response"));
    if !is_response {
        return Classified::NonPage;
    }
    let Some(content) = rec.content.as_deref() else {
        return Classified::Skip;
    };
    let Some(url) = rec
        .header("WARC-Target-URI")
        .map(|u| u.trim_matches(|c| c == '<' || c == '>'))
        .and_then(|u| Url::parse(u).ok())
    else {
        return Classified::Skip;
    };
    let Some((http_headers, body)) = split_http(content) else {
        return Classified::Skip;
    };
    let content_type = http_headers
        .iter()
        .find(|(k, _)| k.eq_ignore_ascii_case("content-type"))
        .map(|(_, v)| v.clone())
        .unwrap_or_default();
    if !is_html_mime(&content_type) {
        return Classified::NonPage;
    }
    if body.is_empty() {
        return Classified::Skip;
    }
    let Ok(encoding) = resolve_charset(Some(&content_type), body) else {
        return Classified::Skip;
    };
    let fetch_date = rec
        .header("WARC-Date")
        .and_then(|d| d.get(..10))
        .and_then(|d| NaiveDate::parse_from_str(d, "%Y-%m-%d").ok());
    Classified::Page(Box::new(RawPage {
        url,
        fetch_date,
        content_type,
        body: body.to_vec(),
        encoding,
    }))
}

/// Splits an HTTP response into headers and body.
fn split_http(content: &[u8]) -> Option<(Vec<(String, String)>, &[u8])> {
    if !content.starts_with(b"HTTP/") {
        return None;
    }
    let (head_end, body_start) = match find(content, b"\r\n\r\n") {
        Some(i) => (i, i + 4),
        None => {
            let i = find(content, b"\n\n")?;
            (i, i + 2)
        }
    };
    let head = String::from_utf8_lossy(&content[..head_end]);
    let headers = head
        .lines()
        .skip(1)
        .filter_map(|l| l.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    Some((headers, &content[body_start..]))
}
