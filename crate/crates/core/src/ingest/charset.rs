use encoding_rs::{Encoding, UTF_8};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unsupported charset {0:?}")]
pub struct CharsetError(pub String);

/// Resolves the body encoding: HTTP `Content-Type` charset first, then a
/// `<meta>` declaration in the first 1024 bytes, then UTF-8.
///
/// A declared label that no decoder recognises is an error; the caller is
/// expected to reject the record.
pub fn resolve_charset(
    content_type: Option<&str>,
    body: &[u8],
) -> Result<&'static Encoding, CharsetError> {
    if let Some(label) = content_type.and_then(charset_param) {
        return lookup(&label);
    }
    if let Some(label) = sniff_meta(body) {
        return lookup(&label);
    }
    Ok(UTF_8)
}

fn lookup(label: &str) -> Result<&'static Encoding, CharsetError> {
    Encoding::for_label(label.as_bytes()).ok_or_else(|| CharsetError(label.to_string()))
}

fn charset_param(value: &str) -> Option<String> {
    value.split(';').skip(1).find_map(|param| {
        let (name, val) = param.split_once('=')?;
        if name.trim().eq_ignore_ascii_case("charset") {
            let v = val.trim().trim_matches(|c| c == '"' || c == '\'').trim();
            (!v.is_empty()).then(|| v.to_string())
        } else {
            None
        }
    })
}

fn sniff_meta(body: &[u8]) -> Option<String> {
    let head = &body[..body.len().min(1024)];
    let lower: Vec<u8> = head.iter().map(|b| b.to_ascii_lowercase()).collect();
    let mut pos = 0;
    while let Some(start) = find(&lower[pos..], b"<meta") {
        let tag_start = pos + start;
        let tag_end = find(&lower[tag_start..], b">").map_or(lower.len(), |e| tag_start + e);
        let tag = &lower[tag_start..tag_end];
        if let Some(cs) = find(tag, b"charset") {
            let rest = &tag[cs + b"charset".len()..];
            let rest = trim_ascii_start(rest);
            if let Some(rest) = rest.strip_prefix(b"=") {
                let rest = trim_ascii_start(rest);
                let rest = rest
                    .strip_prefix(b"\"")
                    .or_else(|| rest.strip_prefix(b"'"))
                    .unwrap_or(rest);
                let end = rest
                    .iter()
                    .position(|&b| matches!(b, b'"' | b'\'' | b';' | b' ' | b'/' | b'>'))
                    .unwrap_or(rest.len());
                if end > 0 {
                    return Some(String::from_utf8_lossy(&rest[..end]).into_owned());
                }
            }
        }
        pos = tag_end.max(tag_start + 1);
    }
    None
}

fn trim_ascii_start(b: &[u8]) -> &[u8] {
    let skip = b.iter().take_while(|c| c.is_ascii_whitespace()).count();
    &b[skip..]
}

pub(crate) fn find(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    if needle.is_empty() || haystack.len() < needle.len() {
        return None;
    }
    haystack.windows(needle.len()).position(|w| w == needle)
}
