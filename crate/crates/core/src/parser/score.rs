use serde::Serialize;

use super::candidates::CandidateSection;
use super::KeywordConfig;

pub const POSITIVE_BONUS: i64 = 100;
pub const NEGATIVE_BONUS: i64 = -500;
pub const LINK_PENALTY: i64 = -10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScoreBreakdown {
    pub paragraph_points: i64,
    pub word_points: i64,
    pub link_penalty: i64,
    pub attr_bonus: i64,
    pub total: i64,
}

/// `2·paragraphs + words/10 + link penalty + attribute bonus`.
///
/// The link penalty applies when link density exceeds the configured
/// threshold. Each keyword category counts at most once; positive and
/// negative bonuses add when both match.
pub fn score_candidate(c: &CandidateSection<'_>, keywords: &KeywordConfig) -> ScoreBreakdown {
    let paragraph_points = 2 * c.counts.paragraph_count as i64;
    let word_points = (c.counts.word_count / 10) as i64;
    let link_penalty = if c.counts.link_density() > keywords.link_density_threshold {
        LINK_PENALTY
    } else {
        0
    };
    let attr_bonus = attribute_bonus(&c.node.class_and_id(), keywords);
    ScoreBreakdown {
        paragraph_points,
        word_points,
        link_penalty,
        attr_bonus,
        total: paragraph_points + word_points + link_penalty + attr_bonus,
    }
}

pub fn attribute_bonus(class_and_id: &str, keywords: &KeywordConfig) -> i64 {
    let hay = class_and_id.to_lowercase();
    let hit = |list: &[String]| list.iter().any(|k| hay.contains(&k.to_lowercase()));
    let mut bonus = 0;
    if hit(&keywords.positive) {
        bonus += POSITIVE_BONUS;
    }
    if hit(&keywords.negative) {
        bonus += NEGATIVE_BONUS;
    }
    bonus
}

#[derive(Clone, Debug)]
pub struct ScoredCandidate<'a> {
    pub section: CandidateSection<'a>,
    pub score: ScoreBreakdown,
}

/// Highest total wins, earliest document order on ties; `None` when the best
/// total is below `min_score` or there are no candidates.
pub fn select_main<'s, 'a>(
    candidates: &'s [ScoredCandidate<'a>],
    min_score: i64,
) -> Option<&'s ScoredCandidate<'a>> {
    let best = candidates.iter().min_by(|a, b| {
        b.score
            .total
            .cmp(&a.score.total)
            .then(a.section.doc_order.cmp(&b.section.doc_order))
    })?;
    (best.score.total >= min_score).then_some(best)
}
