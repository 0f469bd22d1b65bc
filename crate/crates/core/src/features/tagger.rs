//! A small deterministic rule-based English annotator.
//!
//! Lexicon and suffix rules for POS, a head-attachment heuristic for
//! dependencies and capitalisation/number rules for entities. It exists so the
//! pipeline can run end to end without an external annotator; its output
//! quality is not a goal.

use super::conllu::{AnnotatedDoc, Token};

const DETERMINERS: &[&str] = &[
    "a", "all", "an", "another", "any", "both", "each", "every", "no", "some", "that", "the",
    "these", "this", "those",
];
const POSSESSIVES: &[&str] = &["her", "his", "its", "my", "our", "their", "your"];
const PRONOUNS: &[&str] = &[
    "he", "her", "him", "i", "it", "me", "she", "them", "they", "us", "we", "what", "which",
    "who", "whom", "you",
];
const ADPOSITIONS: &[&str] = &[
    "about", "across", "after", "against", "among", "at", "before", "behind", "between", "by",
    "during", "for", "from", "in", "into", "of", "on", "over", "through", "under", "with",
    "within", "without",
];
const CCONJ: &[&str] = &["and", "but", "nor", "or", "yet"];
const SCONJ: &[&str] = &["although", "as", "because", "if", "since", "though", "unless", "whether", "while"];
const MODALS: &[&str] = &["can", "could", "may", "might", "must", "shall", "should", "will", "would"];
const AUX_FORMS: &[(&str, &str)] = &[
    ("am", "VBP"), ("are", "VBP"), ("be", "VB"), ("been", "VBN"), ("being", "VBG"),
    ("did", "VBD"), ("do", "VBP"), ("does", "VBZ"), ("had", "VBD"), ("has", "VBZ"),
    ("have", "VBP"), ("is", "VBZ"), ("was", "VBD"), ("were", "VBD"),
];
const ADVERBS: &[&str] = &[
    "again", "almost", "already", "also", "always", "here", "just", "never", "now", "often",
    "soon", "still", "then", "there", "too", "very",
];
const VERBS: &[&str] = &[
    "bring", "build", "buy", "came", "come", "find", "found", "gave", "get", "give", "go", "got",
    "grow", "hold", "keep", "know", "leave", "make", "made", "meet", "say", "said", "says", "see",
    "show", "take", "tell", "think", "told", "took", "went", "win", "won", "warn", "plan",
];
const ADJECTIVES: &[&str] = &[
    "bad", "big", "early", "good", "great", "high", "important", "large", "late", "local", "long",
    "major", "new", "old", "public", "small", "strong", "young",
];
const NUMBER_WORDS: &[&str] = &[
    "eight", "five", "four", "hundred", "million", "nine", "one", "seven", "six", "ten",
    "thousand", "three", "two",
];
const ORDINALS: &[&str] = &["first", "second", "third", "fourth", "fifth", "last"];
const PERSON_CUES: &[&str] = &["dr", "dr.", "minister", "mr", "mr.", "mrs", "mrs.", "ms", "ms.", "president"];
const PLACES: &[&str] = &[
    "america", "berlin", "britain", "canada", "china", "england", "europe", "france", "germany",
    "india", "japan", "london", "paris", "russia", "spain", "washington",
];
const TIME_WORDS: &[&str] = &[
    "april", "august", "december", "february", "friday", "january", "july", "june", "march",
    "may", "monday", "november", "october", "saturday", "september", "sunday", "thursday",
    "tuesday", "wednesday",
];
const ADJ_SUFFIXES: &[&str] = &["able", "ible", "ful", "ic", "ive", "less", "ous", "ish", "ary"];

fn in_list(list: &[&str], word: &str) -> bool {
    list.contains(&word)
}

fn is_punct(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| !c.is_alphanumeric())
}

const SPLIT_CHARS: &[char] = &[
    '.', ',', ';', ':', '!', '?', '"', '\'', '(', ')', '[', ']', '“', '”', '‘', '’', '«', '»',
];

/// Whitespace tokenisation with leading/trailing punctuation split off.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && SPLIT_CHARS.contains(&chars[start]) {
            out.push(chars[start].to_string());
            start += 1;
        }
        let mut tail = Vec::new();
        while end > start && SPLIT_CHARS.contains(&chars[end - 1]) {
            // Keep abbreviations like "Mr." whole.
            let core: String = chars[start..end - 1].iter().collect();
            if chars[end - 1] == '.'
                && end - start <= 4
                && in_list(PERSON_CUES, &format!("{}.", core.to_lowercase()))
            {
                break;
            }
            tail.push(chars[end - 1].to_string());
            end -= 1;
        }
        if start < end {
            out.push(chars[start..end].iter().collect());
        }
        out.extend(tail.into_iter().rev());
    }
    out
}

fn punct_tag(t: &str) -> &'static str {
    match t {
        "." | "!" | "?" => ".",
        "," => ",",
        "(" | "[" => "-LRB-",
        ")" | "]" => "-RRB-",
        "\"" | "“" | "«" | "‘" | "'" => "``",
        "”" | "»" | "’" => "''",
        "-" | "\u{2013}" | "\u{2014}" => "HYPH",
        "$" => "$",
        "#" => "#",
        _ => ":",
    }
}

fn tag_word(word: &str, sentence_initial: bool) -> (&'static str, &'static str) {
    let lower = word.to_lowercase();
    let l = lower.as_str();
    if is_punct(word) {
        return match word {
            "$" | "%" | "&" | "+" | "=" => ("SYM", if word == "$" { "$" } else { "SYM" }),
            _ => ("PUNCT", punct_tag(word)),
        };
    }
    if word.chars().all(|c| c.is_ascii_digit() || c == ',' || c == '.') || in_list(NUMBER_WORDS, l) {
        return ("NUM", "CD");
    }
    if let Some((_, tag)) = AUX_FORMS.iter().find(|(w, _)| *w == l) {
        return ("AUX", tag);
    }
    if in_list(MODALS, l) {
        return ("AUX", "MD");
    }
    if l == "not" || l == "n't" {
        return ("PART", "RB");
    }
    if l == "to" {
        return ("PART", "TO");
    }
    if in_list(POSSESSIVES, l) {
        return ("PRON", "PRP$");
    }
    if in_list(DETERMINERS, l) {
        return ("DET", "DT");
    }
    if in_list(PRONOUNS, l) {
        return ("PRON", if l.starts_with("wh") { "WP" } else { "PRP" });
    }
    if in_list(ADPOSITIONS, l) {
        return ("ADP", "IN");
    }
    if in_list(CCONJ, l) {
        return ("CCONJ", "CC");
    }
    if in_list(SCONJ, l) {
        return ("SCONJ", "IN");
    }
    if in_list(ADVERBS, l) || (l.len() > 4 && l.ends_with("ly")) {
        return ("ADV", "RB");
    }
    let title = word.chars().next().is_some_and(char::is_uppercase);
    if title && !sentence_initial {
        return ("PROPN", "NNP");
    }
    if in_list(ORDINALS, l) || in_list(ADJECTIVES, l) {
        return ("ADJ", "JJ");
    }
    if in_list(VERBS, l) {
        return ("VERB", if l.ends_with('s') { "VBZ" } else { "VB" });
    }
    if l.len() > 4 && l.ends_with("ing") {
        return ("VERB", "VBG");
    }
    if l.len() > 3 && l.ends_with("ed") {
        return ("VERB", "VBD");
    }
    if l.len() > 4 && ADJ_SUFFIXES.iter().any(|s| l.ends_with(s)) {
        return ("ADJ", "JJ");
    }
    if l.len() > 3 && l.ends_with('s') && !l.ends_with("ss") {
        return ("NOUN", "NNS");
    }
    ("NOUN", "NN")
}

fn is_nominal(pos: &str) -> bool {
    pos == "NOUN" || pos == "PROPN"
}

fn next_nominal(pos: &[&str], from: usize, window: usize) -> Option<usize> {
    (from + 1..pos.len().min(from + 1 + window)).find(|&j| is_nominal(pos[j]))
}

fn attach(words: &[String], pos: &[&str]) -> Vec<(usize, &'static str)> {
    let n = words.len();
    let root = pos
        .iter()
        .position(|p| *p == "VERB")
        .or_else(|| pos.iter().position(|p| *p == "AUX"))
        .or_else(|| pos.iter().position(|p| is_nominal(p)))
        .unwrap_or(0);
    let mut heads = Vec::with_capacity(n);
    let mut last_adp: Option<usize> = None;
    for i in 0..n {
        if i == root {
            heads.push((i, "ROOT"));
            last_adp = None;
            continue;
        }
        let lower = words[i].to_lowercase();
        let link = match pos[i] {
            "PUNCT" => (root, "punct"),
            "DET" => next_nominal(pos, i, 4).map_or((root, "dep"), |j| (j, "det")),
            "ADJ" => next_nominal(pos, i, 3).map_or((root, "acomp"), |j| (j, "amod")),
            "NUM" => next_nominal(pos, i, 2).map_or((root, "dep"), |j| (j, "nummod")),
            "ADP" => (root, "prep"),
            "NOUN" | "PROPN" => {
                if i + 1 < n && is_nominal(pos[i + 1]) && i + 1 != root {
                    (i + 1, "compound")
                } else if let Some(a) = last_adp {
                    (a, "pobj")
                } else if i < root {
                    (root, "nsubj")
                } else {
                    (root, "dobj")
                }
            }
            "PRON" if in_list(POSSESSIVES, &lower) => {
                next_nominal(pos, i, 3).map_or((root, "dobj"), |j| (j, "poss"))
            }
            "PRON" => (root, if i < root { "nsubj" } else { "dobj" }),
            "AUX" => (root, "aux"),
            "VERB" => (
                root,
                if i > 0 && pos[i - 1] == "CCONJ" { "conj" } else { "xcomp" },
            ),
            "ADV" => (root, "advmod"),
            "PART" if lower == "to" => (root, "aux"),
            "PART" => (root, "neg"),
            "CCONJ" => (root, "cc"),
            "SCONJ" => (root, "mark"),
            _ => (root, "dep"),
        };
        heads.push(link);
        match pos[i] {
            "ADP" => last_adp = Some(i),
            "VERB" | "AUX" | "PUNCT" => last_adp = None,
            _ => {}
        }
    }
    heads
}

fn entity(words: &[String], pos: &[&str], i: usize) -> &'static str {
    let lower = words[i].to_lowercase();
    let prev = i.checked_sub(1).map(|p| words[p].to_lowercase());
    let next = words.get(i + 1).map(|w| w.to_lowercase());
    match pos[i] {
        "PROPN" => {
            if in_list(TIME_WORDS, &lower) {
                "DATE"
            } else if in_list(PLACES, &lower) {
                "GPE"
            } else if prev.as_deref().is_some_and(|p| in_list(PERSON_CUES, p)) {
                "PERSON"
            } else if i > 0 && pos[i - 1] == "PROPN" {
                entity(words, pos, i - 1)
            } else {
                "ORG"
            }
        }
        "NUM" => {
            let year = lower.len() == 4
                && lower.parse::<u32>().is_ok_and(|y| (1800..=2100).contains(&y));
            if prev.as_deref() == Some("$") {
                "MONEY"
            } else if matches!(next.as_deref(), Some("%" | "percent")) {
                "PERCENT"
            } else if year {
                "DATE"
            } else {
                "CARDINAL"
            }
        }
        "ADJ" if in_list(ORDINALS, &lower) => "ORDINAL",
        _ if in_list(TIME_WORDS, &lower) && i > 0 => "DATE",
        _ => "O",
    }
}

/// Annotates paragraphs of plain text. Sentences end at `.`, `!`, `?` and at
/// paragraph boundaries.
pub fn annotate(doc_id: &str, paragraphs: &[String]) -> AnnotatedDoc {
    let mut doc = AnnotatedDoc {
        doc_id: doc_id.to_string(),
        ..Default::default()
    };
    for para in paragraphs {
        let tokens = tokenize(para);
        let mut sentence: Vec<String> = Vec::new();
        for (k, t) in tokens.iter().enumerate() {
            sentence.push(t.clone());
            let boundary = matches!(t.as_str(), "." | "!" | "?");
            if boundary || k + 1 == tokens.len() {
                push_sentence(&mut doc, std::mem::take(&mut sentence));
            }
        }
    }
    doc
}

fn push_sentence(doc: &mut AnnotatedDoc, words: Vec<String>) {
    if words.is_empty() {
        return;
    }
    let mut pos = Vec::with_capacity(words.len());
    let mut fine = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        let (p, f) = tag_word(w, i == 0);
        pos.push(p);
        fine.push(f);
    }
    let heads = attach(&words, &pos);
    let start = doc.tokens.len();
    for (i, w) in words.iter().enumerate() {
        doc.tokens.push(Token {
            text: w.clone(),
            coarse_pos: pos[i].to_string(),
            fine_tag: fine[i].to_string(),
            dep_label: heads[i].1.to_string(),
            head_index: start + heads[i].0,
            ner_tag: entity(&words, &pos, i).to_string(),
        });
    }
    doc.sentence_spans.push((start, doc.tokens.len()));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::conllu::{write_conllu, AnnotationReader};

    #[test]
    fn tokenizer_splits_edges() {
        assert_eq!(
            tokenize("\"Hello,\" said Mr. Smith (again)."),
            vec!["\"", "Hello", ",", "\"", "said", "Mr.", "Smith", "(", "again", ")", "."]
        );
    }

    #[test]
    fn single_root_per_sentence_and_valid_round_trip() {
        let doc = annotate(
            "d",
            &[
                "The minister said on Monday that the new plan will cost $ 300 million. It is big!".into(),
                "Mr. Smith met officials in Paris during 2021 talks".into(),
            ],
        );
        assert_eq!(doc.sentence_spans.len(), 3);
        for &(s, e) in &doc.sentence_spans {
            let roots = (s..e).filter(|&i| doc.tokens[i].head_index == i).count();
            assert_eq!(roots, 1);
        }
        let mut buf = Vec::new();
        write_conllu(&doc, &mut buf).unwrap();
        let back: Vec<_> = AnnotationReader::new(&buf[..]).collect();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].as_ref().unwrap(), &doc);
        let ner: Vec<&str> = doc.tokens.iter().map(|t| t.ner_tag.as_str()).collect();
        assert!(ner.contains(&"PERSON"));
        assert!(ner.contains(&"GPE"));
        assert!(ner.contains(&"DATE"));
        assert!(ner.contains(&"MONEY"));
    }

    #[test]
    fn empty_input() {
        let doc = annotate("e", &[]);
        assert!(doc.tokens.is_empty());
        assert!(doc.sentence_spans.is_empty());
    }
}
