//! Stored parser fixtures with hand-computed score breakdowns.

use std::fs;
use std::path::PathBuf;

use newsgauge_core::parser::{extract_article_traced, ParserConfig};
use serde::Deserialize;

#[derive(Deserialize)]
struct Expected {
    title: Option<String>,
    /// `[tag, class_and_id, paragraph, word, link, attr, total]`
    candidates: Vec<(String, String, i64, i64, i64, i64, i64)>,
    selected: Option<usize>,
    paragraphs: Option<Vec<String>>,
    drop: Option<String>,
}

fn fixtures() -> Vec<(String, String, Expected)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/parser");
    let mut names: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "html"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|p| {
            let html = fs::read_to_string(&p).unwrap();
            let exp = fs::read_to_string(p.with_extension("json")).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, html, serde_json::from_str(&exp).unwrap())
        })
        .collect()
}

/// Checks every fixture; returns the fixture count or the first mismatch.
pub fn check_all() -> Result<usize, String> {
    let cfg = ParserConfig::default();
    let all = fixtures();
    for (name, html, exp) in &all {
        let (result, trace) = extract_article_traced(html, &cfg);
        let got: Vec<_> = trace
            .iter()
            .map(|t| {
                let s = t.score;
                (t.tag.clone(), t.class_id.clone(), s.paragraph_points, s.word_points, s.link_penalty, s.attr_bonus, s.total)
            })
            .collect();
        if got != exp.candidates {
            return Err(format!("{name}: breakdowns {got:?}, expected {:?}", exp.candidates));
        }
        let selected = trace.iter().position(|t| t.selected);
        if selected != exp.selected {
            return Err(format!("{name}: selected {selected:?}, expected {:?}", exp.selected));
        }
        match (&result, &exp.paragraphs, &exp.drop) {
            (Ok(a), Some(p), None) => {
                if &a.paragraphs != p {
                    return Err(format!("{name}: text {:?}", a.paragraphs));
                }
                if a.parser_score != exp.candidates[exp.selected.unwrap()].6 {
                    return Err(format!("{name}: parser_score {}", a.parser_score));
                }
                if exp.title.is_some() && a.title != exp.title {
                    return Err(format!("{name}: title {:?}", a.title));
                }
            }
            (Err(r), None, Some(d)) if r.code() == d => {}
            _ => return Err(format!("{name}: got {result:?}, expected {:?} / {:?}", exp.paragraphs, exp.drop)),
        }
    }
    Ok(all.len())
}
