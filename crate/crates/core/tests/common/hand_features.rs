//! The hand-annotated feature fixture and its hand-counted entries.

pub const CONLLU: &[u8] = include_bytes!("../fixtures/features/hand.conllu");

fn flesch(words: f64, sentences: f64, syllables: f64) -> (f64, f64) {
    let (wps, spw) = (words / sentences, syllables / words);
    (206.835 - 1.015 * wps - 84.6 * spw, 0.39 * wps + 11.8 * spw - 15.59)
}

/// Non-zero entries of each fixture document, counted by hand.
pub fn expected() -> Vec<(&'static str, Vec<(&'static str, f64)>)> {
    let (fre1, fk1) = flesch(4.0, 2.0, 5.0);
    let (fre2, fk2) = flesch(9.0, 1.0, 14.0);
    let (fre4, fk4) = flesch(2.0, 1.0, 3.0);
    vec![
        (
            "d1",
            vec![
                ("POS:NOUN", 1.0 / 6.0),
                ("POS:VERB", 2.0 / 6.0),
                ("POS:PUNCT", 2.0 / 6.0),
                ("POS:PROPN", 1.0 / 6.0),
                ("TREEBANK:NNS", 1.0 / 6.0),
                ("TREEBANK:VBP", 1.0 / 6.0),
                ("TREEBANK:.", 2.0 / 6.0),
                ("TREEBANK:NNP", 1.0 / 6.0),
                ("TREEBANK:VBZ", 1.0 / 6.0),
                ("DEPENDENCY:nsubj", 2.0 / 6.0),
                ("DEPENDENCY:ROOT", 2.0 / 6.0),
                ("DEPENDENCY:punct", 2.0 / 6.0),
                ("NER:GPE", 1.0 / 6.0),
                ("MISC:token_count_log", 7f64.ln()),
                ("MISC:sentence_count_log", 3f64.ln()),
                ("MISC:avg_sentence_len_tokens", 3.0),
                ("MISC:avg_word_len_chars", 19.0 / 4.0),
                ("MISC:type_token_ratio", 1.0),
                ("MISC:hapax_ratio", 1.0),
                ("MISC:punctuation_ratio", 2.0 / 6.0),
                ("MISC:titlecase_token_ratio", 2.0 / 6.0),
                ("MISC:lexical_density", 4.0 / 6.0),
                ("MISC:noun_verb_ratio", 1.0),
                ("MISC:avg_dependency_distance", 1.0),
                ("MISC:max_parse_depth_mean", 1.0),
                ("MISC:flesch_reading_ease", fre1),
                ("MISC:flesch_kincaid_grade", fk1),
            ],
        ),
        (
            "d2",
            vec![
                ("POS:DET", 1.0 / 12.0),
                ("POS:PROPN", 1.0 / 12.0),
                ("POS:NOUN", 3.0 / 12.0),
                ("POS:VERB", 2.0 / 12.0),
                ("POS:NUM", 2.0 / 12.0),
                ("POS:ADP", 1.0 / 12.0),
                ("POS:PUNCT", 2.0 / 12.0),
                ("TREEBANK:DT", 1.0 / 12.0),
                ("TREEBANK:NNP", 1.0 / 12.0),
                ("TREEBANK:NN", 2.0 / 12.0),
                ("TREEBANK:VBD", 2.0 / 12.0),
                ("TREEBANK:CD", 2.0 / 12.0),
                ("TREEBANK:IN", 1.0 / 12.0),
                ("TREEBANK:,", 1.0 / 12.0),
                ("TREEBANK:NNS", 1.0 / 12.0),
                ("TREEBANK:.", 1.0 / 12.0),
                ("DEPENDENCY:det", 1.0 / 12.0),
                ("DEPENDENCY:compound", 1.0 / 12.0),
                ("DEPENDENCY:nsubj", 2.0 / 12.0),
                ("DEPENDENCY:ROOT", 1.0 / 12.0),
                ("DEPENDENCY:nummod", 1.0 / 12.0),
                ("DEPENDENCY:dobj", 1.0 / 12.0),
                ("DEPENDENCY:prep", 1.0 / 12.0),
                ("DEPENDENCY:pobj", 1.0 / 12.0),
                ("DEPENDENCY:punct", 2.0 / 12.0),
                ("DEPENDENCY:ccomp", 1.0 / 12.0),
                ("NER:GPE", 1.0 / 12.0),
                ("NER:PERCENT", 2.0 / 12.0),
                ("NER:DATE", 1.0 / 12.0),
                ("MISC:token_count_log", 13f64.ln()),
                ("MISC:sentence_count_log", 2f64.ln()),
                ("MISC:avg_sentence_len_tokens", 12.0),
                ("MISC:avg_word_len_chars", 38.0 / 9.0),
                ("MISC:type_token_ratio", 1.0),
                ("MISC:hapax_ratio", 1.0),
                ("MISC:stopword_ratio", 2.0 / 12.0),
                ("MISC:punctuation_ratio", 2.0 / 12.0),
                ("MISC:digit_ratio", 2.0 / 12.0),
                ("MISC:uppercase_token_ratio", 1.0 / 12.0),
                ("MISC:titlecase_token_ratio", 1.0 / 12.0),
                ("MISC:exclamation_ratio", 1.0 / 12.0),
                ("MISC:long_word_ratio", 2.0 / 9.0),
                ("MISC:lexical_density", 6.0 / 12.0),
                ("MISC:noun_verb_ratio", 2.0),
                ("MISC:avg_dependency_distance", 32.0 / 11.0),
                ("MISC:max_parse_depth_mean", 2.0),
                ("MISC:flesch_reading_ease", fre2),
                ("MISC:flesch_kincaid_grade", fk2),
            ],
        ),
        ("d3", vec![]),
        (
            "d4",
            vec![
                ("POS:INTJ", 1.0 / 3.0),
                ("POS:NOUN", 1.0 / 3.0),
                ("POS:OTHER", 1.0 / 3.0),
                ("TREEBANK:UH", 1.0 / 3.0),
                ("TREEBANK:NN", 1.0 / 3.0),
                ("TREEBANK:OTHER", 1.0 / 3.0),
                ("DEPENDENCY:ROOT", 1.0 / 3.0),
                ("DEPENDENCY:OTHER", 1.0 / 3.0),
                ("DEPENDENCY:punct", 1.0 / 3.0),
                ("NER:OTHER", 1.0 / 3.0),
                ("MISC:token_count_log", 4f64.ln()),
                ("MISC:sentence_count_log", 2f64.ln()),
                ("MISC:avg_sentence_len_tokens", 3.0),
                ("MISC:avg_word_len_chars", 5.0),
                ("MISC:type_token_ratio", 1.0),
                ("MISC:hapax_ratio", 1.0),
                ("MISC:titlecase_token_ratio", 1.0 / 3.0),
                ("MISC:lexical_density", 1.0 / 3.0),
                ("MISC:noun_verb_ratio", 10.0),
                ("MISC:avg_dependency_distance", 3.0 / 2.0),
                ("MISC:max_parse_depth_mean", 1.0),
                ("MISC:flesch_reading_ease", fre4),
                ("MISC:flesch_kincaid_grade", fk4),
            ],
        ),
    ]
}
