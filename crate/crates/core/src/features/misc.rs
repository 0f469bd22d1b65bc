//! The 21 miscellaneous stylometric measures.
//!
//! Conventions: a *word* is a token containing an alphanumeric character;
//! `N` is the token count, `W` the word count, `S` the sentence count. Every
//! ratio with a zero denominator is 0.

use std::collections::HashMap;

use super::conllu::AnnotatedDoc;

macro_rules! misc_metrics {
    ($($variant:ident => $name:literal,)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum MiscMetric { $($variant,)* }

        impl MiscMetric {
            pub const ALL: &'static [MiscMetric] = &[$(MiscMetric::$variant,)*];

            pub fn name(self) -> &'static str {
                match self { $(MiscMetric::$variant => $name,)* }
            }

            pub fn from_name(name: &str) -> Option<Self> {
                match name { $($name => Some(MiscMetric::$variant),)* _ => None }
            }
        }
    };
}

misc_metrics! {
    TokenCountLog => "token_count_log",
    SentenceCountLog => "sentence_count_log",
    AvgSentenceLenTokens => "avg_sentence_len_tokens",
    AvgWordLenChars => "avg_word_len_chars",
    TypeTokenRatio => "type_token_ratio",
    HapaxRatio => "hapax_ratio",
    StopwordRatio => "stopword_ratio",
    PunctuationRatio => "punctuation_ratio",
    DigitRatio => "digit_ratio",
    UppercaseTokenRatio => "uppercase_token_ratio",
    TitlecaseTokenRatio => "titlecase_token_ratio",
    QuestionMarkRatio => "question_mark_ratio",
    ExclamationRatio => "exclamation_ratio",
    QuoteCharRatio => "quote_char_ratio",
    LongWordRatio => "long_word_ratio",
    LexicalDensity => "lexical_density",
    NounVerbRatio => "noun_verb_ratio",
    AvgDependencyDistance => "avg_dependency_distance",
    MaxParseDepthMean => "max_parse_depth_mean",
    FleschReadingEase => "flesch_reading_ease",
    FleschKincaidGrade => "flesch_kincaid_grade",
}

pub const NOUN_VERB_CAP: f64 = 10.0;
const LONG_WORD_CHARS: usize = 6;
const QUOTE_CHARS: &[char] = &['"', '\'', '`', '«', '»', '‘', '’', '“', '”', '„'];
const CONTENT_POS: &[&str] = &["NOUN", "PROPN", "VERB", "ADJ", "ADV"];

pub(crate) const STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few", "for",
    "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
    "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once",
    "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own", "same", "she",
    "should", "so", "some", "such", "than", "that", "the", "their", "theirs", "them",
    "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too",
    "under", "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
    "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours", "yourself",
    "yourselves",
];

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn is_word(t: &str) -> bool {
    t.chars().any(char::is_alphanumeric)
}

fn is_uppercase_token(t: &str) -> bool {
    let letters: Vec<char> = t.chars().filter(|c| c.is_alphabetic()).collect();
    letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase())
}

fn is_titlecase_token(t: &str) -> bool {
    let mut chars = t.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    let rest: Vec<char> = chars.filter(|c| c.is_alphabetic()).collect();
    first.is_uppercase() && !rest.is_empty() && rest.iter().all(|c| c.is_lowercase())
}

/// Vowel-group syllable estimate with a silent final `e`; at least 1.
pub fn syllables(word: &str) -> usize {
    let w: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    let is_vowel = |c: char| "aeiouy".contains(c);
    let mut groups = 0;
    let mut prev = false;
    for &c in &w {
        let v = is_vowel(c);
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    let n = w.len();
    if groups > 1 && n >= 2 && w[n - 1] == 'e' {
        // "-le" after a consonant keeps its syllable (table, little).
        let consonant_le = n >= 3 && w[n - 2] == 'l' && !is_vowel(w[n - 3]);
        if !consonant_le {
            groups -= 1;
        }
    }
    groups.max(1)
}

#[derive(Debug, Default)]
pub(crate) struct MiscStats {
    tokens: usize,
    sentences: usize,
    words: usize,
    word_chars: usize,
    word_types: usize,
    hapax: usize,
    stopwords: usize,
    punct: usize,
    digit: usize,
    upper: usize,
    title: usize,
    question: usize,
    exclaim: usize,
    quote: usize,
    long_words: usize,
    content: usize,
    nouns: usize,
    verbs: usize,
    dep_distance_sum: usize,
    non_root: usize,
    depth_sum: usize,
    syllables: usize,
}

impl MiscStats {
    pub(crate) fn compute(doc: &AnnotatedDoc) -> Self {
        let mut s = MiscStats {
            tokens: doc.tokens.len(),
            sentences: doc.sentence_spans.len(),
            ..Default::default()
        };
        let mut freq: HashMap<String, usize> = HashMap::new();
        for (i, t) in doc.tokens.iter().enumerate() {
            let text = t.text.as_str();
            if is_word(text) {
                s.words += 1;
                let len = text.chars().count();
                s.word_chars += len;
                if len > LONG_WORD_CHARS {
                    s.long_words += 1;
                }
                s.syllables += syllables(text);
                let lower = text.to_lowercase();
                if STOPWORDS.binary_search(&lower.as_str()).is_ok() {
                    s.stopwords += 1;
                }
                *freq.entry(lower).or_insert(0) += 1;
            }
            if t.coarse_pos == "PUNCT" {
                s.punct += 1;
            }
            if text.chars().any(|c| c.is_numeric()) {
                s.digit += 1;
            }
            if is_uppercase_token(text) {
                s.upper += 1;
            }
            if is_titlecase_token(text) {
                s.title += 1;
            }
            if text.contains('?') {
                s.question += 1;
            }
            if text.contains('!') {
                s.exclaim += 1;
            }
            if text.contains(QUOTE_CHARS) {
                s.quote += 1;
            }
            if CONTENT_POS.contains(&t.coarse_pos.as_str()) {
                s.content += 1;
            }
            match t.coarse_pos.as_str() {
                "NOUN" | "PROPN" => s.nouns += 1,
                "VERB" => s.verbs += 1,
                _ => {}
            }
            if t.head_index != i {
                s.non_root += 1;
                s.dep_distance_sum += i.abs_diff(t.head_index);
            }
        }
        s.word_types = freq.len();
        s.hapax = freq.values().filter(|&&c| c == 1).count();

        for &(start, end) in &doc.sentence_spans {
            let mut max_depth = 0;
            for i in start..end {
                let mut at = i;
                let mut depth = 0;
                while doc.tokens[at].head_index != at && depth <= end - start {
                    at = doc.tokens[at].head_index;
                    depth += 1;
                }
                max_depth = max_depth.max(depth);
            }
            s.depth_sum += max_depth;
        }
        s
    }

    fn words_per_sentence(&self) -> f64 {
        ratio(self.words, self.sentences)
    }

    fn syllables_per_word(&self) -> f64 {
        ratio(self.syllables, self.words)
    }

    pub(crate) fn value(&self, metric: MiscMetric) -> f64 {
        use MiscMetric::*;
        let n = self.tokens;
        let w = self.words;
        match metric {
            TokenCountLog => (n as f64).ln_1p(),
            SentenceCountLog => (self.sentences as f64).ln_1p(),
            AvgSentenceLenTokens => ratio(n, self.sentences),
            AvgWordLenChars => ratio(self.word_chars, w),
            TypeTokenRatio => ratio(self.word_types, w),
            HapaxRatio => ratio(self.hapax, w),
            StopwordRatio => ratio(self.stopwords, n),
            PunctuationRatio => ratio(self.punct, n),
            DigitRatio => ratio(self.digit, n),
            UppercaseTokenRatio => ratio(self.upper, n),
            TitlecaseTokenRatio => ratio(self.title, n),
            QuestionMarkRatio => ratio(self.question, n),
            ExclamationRatio => ratio(self.exclaim, n),
            QuoteCharRatio => ratio(self.quote, n),
            LongWordRatio => ratio(self.long_words, w),
            LexicalDensity => ratio(self.content, n),
            NounVerbRatio => {
                if self.verbs == 0 {
                    if self.nouns > 0 {
                        NOUN_VERB_CAP
                    } else {
                        0.0
                    }
                } else {
                    ratio(self.nouns, self.verbs).min(NOUN_VERB_CAP)
                }
            }
            AvgDependencyDistance => ratio(self.dep_distance_sum, self.non_root),
            MaxParseDepthMean => ratio(self.depth_sum, self.sentences),
            FleschReadingEase => {
                if w == 0 || self.sentences == 0 {
                    0.0
                } else {
                    206.835 - 1.015 * self.words_per_sentence() - 84.6 * self.syllables_per_word()
                }
            }
            FleschKincaidGrade => {
                if w == 0 || self.sentences == 0 {
                    0.0
                } else {
                    0.39 * self.words_per_sentence() + 11.8 * self.syllables_per_word() - 15.59
                }
            }
        }
    }
}
