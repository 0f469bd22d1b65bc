//! Heuristic main-content extraction.
//!
//! `extract_article` runs parse → [`strip_noise`] → [`enumerate_candidates`]
//! → [`score_candidate`] → [`select_main`] → [`refine_text`]. Every step is
//! a pure function of its input and the immutable [`ParserConfig`].

mod candidates;
mod dom;
mod noise;
mod refine;
mod score;

pub use candidates::{enumerate_candidates, CandidateSection, SectionCounts, CANDIDATE_TAGS};
pub use dom::{count_words, DomNode, DomTree, Element, MAX_DEPTH};
pub use noise::{strip_noise, NOISE_TAGS};
pub use refine::{refine_blocks, RefinedBlocks};
pub use score::{
    attribute_bonus, score_candidate, select_main, ScoreBreakdown, ScoredCandidate,
    LINK_PENALTY, NEGATIVE_BONUS, POSITIVE_BONUS,
};

use std::fmt;

use serde::{Deserialize, Serialize};

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub cookie_keywords: Vec<String>,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            cookie_keywords: strings(&["cookie", "consent", "gdpr", "privacy-banner"]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KeywordConfig {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    /// Link characters / text characters above which the link penalty applies.
    pub link_density_threshold: f64,
}

impl Default for KeywordConfig {
    fn default() -> Self {
        Self {
            positive: strings(&["article", "content", "body", "story"]),
            negative: strings(&["comment", "footer", "sidebar", "scrollbar"]),
            link_density_threshold: 0.3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RefineConfig {
    pub min_paragraph_tokens: usize,
    pub copyright_patterns: Vec<String>,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            min_paragraph_tokens: 5,
            copyright_patterns: strings(&["©", "copyright", "all rights reserved"]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParserConfig {
    pub min_score: i64,
    pub noise: NoiseConfig,
    pub keywords: KeywordConfig,
    pub refine: RefineConfig,
}

impl Default for ParserConfig {
    fn default() -> Self {
        Self {
            min_score: 50,
            noise: NoiseConfig::default(),
            keywords: KeywordConfig::default(),
            refine: RefineConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleText {
    pub paragraphs: Vec<String>,
    pub title: Option<String>,
    pub parser_score: i64,
    pub dropped_paragraphs: u64,
}

impl ArticleText {
    pub fn is_empty(&self) -> bool {
        self.paragraphs.is_empty()
    }

    pub fn joined(&self) -> String {
        self.paragraphs.join("\n")
    }
}

/// Why a page produced no article.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropReason {
    NoCandidates,
    BelowMinScore,
    RefinedEmpty,
}

impl DropReason {
    pub fn code(self) -> &'static str {
        match self {
            DropReason::NoCandidates => "no-candidates",
            DropReason::BelowMinScore => "below-min-score",
            DropReason::RefinedEmpty => "refined-empty",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Per-candidate debugging record emitted in trace mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateTrace {
    pub doc_order: u64,
    pub tag: String,
    pub class_id: String,
    pub counts: SectionCounts,
    pub score: ScoreBreakdown,
    pub selected: bool,
}

/// Refines the selected section into article text.
pub fn refine_text(section: &CandidateSection<'_>, cfg: &RefineConfig) -> ArticleText {
    let blocks = refine_blocks(section.node, cfg);
    ArticleText {
        paragraphs: blocks.paragraphs,
        title: None,
        parser_score: 0,
        dropped_paragraphs: blocks.dropped,
    }
}

pub fn extract_article(html: &str, cfg: &ParserConfig) -> Result<ArticleText, DropReason> {
    extract_article_traced(html, cfg).0
}

/// Like [`extract_article`], also returning every candidate's breakdown.
pub fn extract_article_traced(
    html: &str,
    cfg: &ParserConfig,
) -> (Result<ArticleText, DropReason>, Vec<CandidateTrace>) {
    let parsed = DomTree::parse(html);
    let title = parsed.title();
    let dom = strip_noise(&parsed, &cfg.noise);
    let scored: Vec<ScoredCandidate<'_>> = enumerate_candidates(&dom)
        .into_iter()
        .map(|section| {
            let score = score_candidate(&section, &cfg.keywords);
            ScoredCandidate { section, score }
        })
        .collect();
    let selected = select_main(&scored, cfg.min_score);
    let trace = scored
        .iter()
        .map(|c| CandidateTrace {
            doc_order: c.section.doc_order,
            tag: c.section.node.tag.clone(),
            class_id: c.section.node.class_and_id(),
            counts: c.section.counts,
            score: c.score,
            selected: selected.is_some_and(|s| s.section.doc_order == c.section.doc_order),
        })
        .collect();

    let result = match selected {
        None if scored.is_empty() => Err(DropReason::NoCandidates),
        None => Err(DropReason::BelowMinScore),
        Some(best) => {
            let mut text = refine_text(&best.section, &cfg.refine);
            if text.is_empty() {
                Err(DropReason::RefinedEmpty)
            } else {
                text.title = title;
                text.parser_score = best.score.total;
                Ok(text)
            }
        }
    };
    (result, trace)
}
