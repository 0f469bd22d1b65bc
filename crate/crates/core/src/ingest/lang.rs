use std::collections::{BTreeMap, HashMap};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use super::profiles::SAMPLES;

pub const UNDETERMINED: &str = "und";

/// Trigrams kept per language profile.
const PROFILE_SIZE: usize = 400;
/// Softmax temperature mapping cosine similarities to a confidence.
const TEMPERATURE: f64 = 0.025;
/// Best similarity below this is treated as no match at all.
const MIN_SIMILARITY: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LanguageVerdict {
    pub language: String,
    pub confidence: f64,
}

impl LanguageVerdict {
    pub fn undetermined() -> Self {
        Self {
            language: UNDETERMINED.to_string(),
            confidence: 0.0,
        }
    }

    pub fn is_english(&self) -> bool {
        self.language == "en"
    }
}

pub trait LanguageDetector: Send + Sync {
    fn detect(&self, text: &str) -> LanguageVerdict;
}

struct Profile {
    language: &'static str,
    weights: HashMap<String, f64>,
}

static PROFILES: LazyLock<Vec<Profile>> = LazyLock::new(|| {
    SAMPLES
        .iter()
        .map(|(language, sample)| Profile {
            language,
            weights: build_profile(sample),
        })
        .collect()
});

fn build_profile(sample: &str) -> HashMap<String, f64> {
    let counts = trigram_counts(sample);
    let mut ranked: Vec<(String, f64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(PROFILE_SIZE);
    let norm = ranked.iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
    ranked.into_iter().map(|(g, c)| (g, c / norm)).collect()
}

/// Character trigram counts over lowercase letter runs, each word padded
/// with a space on both sides.
fn trigram_counts(text: &str) -> BTreeMap<String, f64> {
    let mut counts = BTreeMap::new();
    for word in text
        .split(|c: char| !c.is_alphabetic())
        .filter(|w| !w.is_empty())
    {
        let padded: Vec<char> = std::iter::once(' ')
            .chain(word.chars().flat_map(char::to_lowercase))
            .chain(std::iter::once(' '))
            .collect();
        for gram in padded.windows(3) {
            *counts.entry(gram.iter().collect::<String>()).or_insert(0.0) += 1.0;
        }
    }
    counts
}

/// Cosine similarity against built-in trigram profiles (en, de, fr, es, pt,
/// it, nl and transliterated ru).
#[derive(Clone, Debug)]
pub struct TrigramDetector {
    min_chars: usize,
}

impl Default for TrigramDetector {
    fn default() -> Self {
        Self { min_chars: 40 }
    }
}

impl TrigramDetector {
    pub fn new(min_chars: usize) -> Self {
        Self { min_chars }
    }

    /// Per-language cosine similarity, in profile order.
    pub fn similarities(&self, text: &str) -> Vec<(&'static str, f64)> {
        let counts = trigram_counts(text);
        let norm = counts.values().map(|c| c * c).sum::<f64>().sqrt();
        PROFILES
            .iter()
            .map(|p| {
                if norm == 0.0 {
                    return (p.language, 0.0);
                }
                let dot: f64 = counts
                    .iter()
                    .filter_map(|(g, c)| p.weights.get(g).map(|w| w * c))
                    .sum();
                (p.language, dot / norm)
            })
            .collect()
    }
}

impl LanguageDetector for TrigramDetector {
    fn detect(&self, text: &str) -> LanguageVerdict {
        if text.chars().count() < self.min_chars {
            return LanguageVerdict::undetermined();
        }
        let sims = self.similarities(text);
        let Some(&(best_lang, best)) = sims
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1).then_with(|| b.0.cmp(a.0)))
        else {
            return LanguageVerdict::undetermined();
        };
        if best < MIN_SIMILARITY {
            return LanguageVerdict::undetermined();
        }
        let denom: f64 = sims
            .iter()
            .map(|(_, s)| ((s - best) / TEMPERATURE).exp())
            .sum();
        LanguageVerdict {
            language: best_lang.to_string(),
            confidence: (1.0 / denom).clamp(0.0, 1.0),
        }
    }
}
