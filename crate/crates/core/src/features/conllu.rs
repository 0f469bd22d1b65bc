use std::io::{self, BufRead, Write};

use thiserror::Error;

/// One annotated token. `head_index` is document-global; a root points at
/// itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub coarse_pos: String,
    pub fine_tag: String,
    pub dep_label: String,
    pub head_index: usize,
    pub ner_tag: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnnotatedDoc {
    pub doc_id: String,
    pub tokens: Vec<Token>,
    /// Half-open token ranges; together they partition `tokens`.
    pub sentence_spans: Vec<(usize, usize)>,
}

impl AnnotatedDoc {
    pub fn sentences(&self) -> impl Iterator<Item = &[Token]> {
        self.sentence_spans.iter().map(|&(s, e)| &self.tokens[s..e])
    }
}

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("line {line}: {message} (doc {doc_id})")]
    Malformed {
        line: usize,
        doc_id: String,
        message: String,
    },
    #[error("annotation read error: {0}")]
    Io(#[from] io::Error),
}

struct RawToken {
    token: Token,
    head: usize,
    line: usize,
}

#[derive(Default)]
struct DocBuilder {
    doc_id: Option<String>,
    tokens: Vec<Token>,
    spans: Vec<(usize, usize)>,
    sentence: Vec<RawToken>,
    error: Option<(usize, String)>,
    touched: bool,
}

impl DocBuilder {
    fn fail(&mut self, line: usize, message: String) {
        if self.error.is_none() {
            self.error = Some((line, message));
        }
    }

    fn close_sentence(&mut self) {
        if self.sentence.is_empty() {
            return;
        }
        let raw = std::mem::take(&mut self.sentence);
        if self.error.is_some() {
            return;
        }
        let start = self.tokens.len();
        let n = raw.len();
        let mut roots = 0;
        let mut heads = Vec::with_capacity(n);
        for (i, r) in raw.iter().enumerate() {
            if r.head == 0 {
                roots += 1;
                heads.push(i);
            } else if r.head > n {
                return self.fail(
                    r.line,
                    format!("head index {} out of range for {n}-token sentence", r.head),
                );
            } else {
                heads.push(r.head - 1);
            }
        }
        if roots != 1 {
            return self.fail(raw[0].line, format!("sentence has {roots} roots, expected 1"));
        }
        for i in 0..n {
            let mut at = i;
            let mut steps = 0;
            while heads[at] != at {
                at = heads[at];
                steps += 1;
                if steps > n {
                    return self.fail(raw[i].line, "dependency heads form a cycle".into());
                }
            }
        }
        for (r, h) in raw.into_iter().zip(heads) {
            let mut token = r.token;
            token.head_index = start + h;
            self.tokens.push(token);
        }
        self.spans.push((start, start + n));
    }

    fn finish(mut self, ordinal: usize) -> Result<AnnotatedDoc, AnnotationError> {
        self.close_sentence();
        let doc_id = self.doc_id.unwrap_or_else(|| format!("doc-{ordinal}"));
        match self.error {
            Some((line, message)) => Err(AnnotationError::Malformed {
                line,
                doc_id,
                message,
            }),
            None => Ok(AnnotatedDoc {
                doc_id,
                tokens: self.tokens,
                sentence_spans: self.spans,
            }),
        }
    }
}

/// Streams documents out of a CoNLL-U style file with columns
/// `index text coarse_pos fine_tag head dep_label ner_tag`.
///
/// `# doc_id = ...` opens a document, blank lines end sentences and heads are
/// 1-based within the sentence with 0 marking the root. A malformed line
/// rejects its whole document; reading resumes at the next `# doc_id`.
pub struct AnnotationReader<R> {
    lines: io::Lines<R>,
    line_no: usize,
    current: Option<DocBuilder>,
    emitted: usize,
    done: bool,
}

impl<R: BufRead> AnnotationReader<R> {
    pub fn new(reader: R) -> Self {
        Self {
            lines: reader.lines(),
            line_no: 0,
            current: None,
            emitted: 0,
            done: false,
        }
    }

    fn take_current(&mut self) -> Option<Result<AnnotatedDoc, AnnotationError>> {
        let doc = self.current.take()?;
        if !doc.touched {
            return None;
        }
        self.emitted += 1;
        Some(doc.finish(self.emitted))
    }

    fn token_line(&mut self, line: &str) {
        let line_no = self.line_no;
        let doc = self.current.get_or_insert_with(DocBuilder::default);
        doc.touched = true;
        if doc.error.is_some() {
            return;
        }
        let cols: Vec<&str> = if line.contains('\t') {
            line.split('\t').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if cols.len() != 7 {
            return doc.fail(line_no, format!("expected 7 columns, found {}", cols.len()));
        }
        // Multiword ranges and empty nodes carry no token of their own.
        if cols[0].contains('-') || cols[0].contains('.') {
            return;
        }
        let Ok(index) = cols[0].parse::<usize>() else {
            return doc.fail(line_no, format!("bad token index {:?}", cols[0]));
        };
        if index != doc.sentence.len() + 1 {
            return doc.fail(
                line_no,
                format!("token index {index}, expected {}", doc.sentence.len() + 1),
            );
        }
        let Ok(head) = cols[4].parse::<usize>() else {
            return doc.fail(line_no, format!("bad head {:?}", cols[4]));
        };
        doc.sentence.push(RawToken {
            token: Token {
                text: cols[1].to_string(),
                coarse_pos: cols[2].to_string(),
                fine_tag: cols[3].to_string(),
                dep_label: cols[5].to_string(),
                head_index: 0,
                ner_tag: cols[6].to_string(),
            },
            head,
            line: line_no,
        });
    }
}

impl<R: BufRead> Iterator for AnnotationReader<R> {
    type Item = Result<AnnotatedDoc, AnnotationError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let line = match self.lines.next() {
                None => {
                    self.done = true;
                    break;
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(AnnotationError::Io(e)));
                }
                Some(Ok(l)) => l,
            };
            self.line_no += 1;
            let trimmed = line.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(id) = comment
                    .strip_prefix("doc_id")
                    .and_then(|r| r.trim_start().strip_prefix('='))
                {
                    let finished = self.take_current();
                    self.current = Some(DocBuilder {
                        doc_id: Some(id.trim().to_string()),
                        touched: true,
                        ..DocBuilder::default()
                    });
                    if finished.is_some() {
                        return finished;
                    }
                }
                continue;
            }
            if trimmed.is_empty() {
                if let Some(doc) = self.current.as_mut() {
                    doc.close_sentence();
                }
                continue;
            }
            self.token_line(&line);
        }
        self.take_current()
    }
}

/// Writes one document in the format read by [`AnnotationReader`].
pub fn write_conllu<W: Write>(doc: &AnnotatedDoc, out: &mut W) -> io::Result<()> {
    writeln!(out, "# doc_id = {}", doc.doc_id)?;
    for &(start, end) in &doc.sentence_spans {
        for (i, t) in doc.tokens[start..end].iter().enumerate() {
            let head = if t.head_index == start + i {
                0
            } else {
                t.head_index - start + 1
            };
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                i + 1,
                t.text,
                t.coarse_pos,
                t.fine_tag,
                head,
                t.dep_label,
                t.ner_tag
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}
