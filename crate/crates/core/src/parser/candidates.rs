use serde::Serialize;

use super::dom::{count_words, DomNode, DomTree, Element};

pub const CANDIDATE_TAGS: [&str; 4] = ["div", "section", "article", "main"];

/// Subtree counts for one candidate element.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SectionCounts {
    /// Descendant `<p>` elements containing at least one word.
    pub paragraph_count: u64,
    pub word_count: u64,
    /// Non-whitespace characters inside `<a>` descendants.
    pub link_char_count: u64,
    /// Non-whitespace characters in the whole subtree.
    pub text_char_count: u64,
}

impl SectionCounts {
    fn add(&mut self, other: SectionCounts) {
        self.paragraph_count += other.paragraph_count;
        self.word_count += other.word_count;
        self.link_char_count += other.link_char_count;
        self.text_char_count += other.text_char_count;
    }

    pub fn link_density(&self) -> f64 {
        self.link_char_count as f64 / self.text_char_count.max(1) as f64
    }
}

#[derive(Clone, Debug)]
pub struct CandidateSection<'a> {
    pub node: &'a Element,
    pub counts: SectionCounts,
    /// Preorder index of the element among all elements of the tree.
    pub doc_order: u64,
}

/// One entry per `div`/`section`/`article`/`main`, in preorder. Nested
/// candidates are listed independently, each with full-subtree counts.
pub fn enumerate_candidates(dom: &DomTree) -> Vec<CandidateSection<'_>> {
    let mut out = Vec::new();
    let mut order = 0;
    walk(&dom.root, false, &mut order, &mut out);
    out
}

fn walk<'a>(
    el: &'a Element,
    in_link: bool,
    order: &mut u64,
    out: &mut Vec<CandidateSection<'a>>,
) -> SectionCounts {
    let my_order = *order;
    *order += 1;
    let slot = CANDIDATE_TAGS.iter().any(|t| el.is(t)).then(|| {
        out.push(CandidateSection {
            node: el,
            counts: SectionCounts::default(),
            doc_order: my_order,
        });
        out.len() - 1
    });

    let in_link = in_link || el.is("a");
    let mut counts = SectionCounts::default();
    for child in &el.children {
        match child {
            DomNode::Text(t) => {
                let chars = t.chars().filter(|c| !c.is_whitespace()).count() as u64;
                counts.word_count += count_words(t) as u64;
                counts.text_char_count += chars;
                if in_link {
                    counts.link_char_count += chars;
                }
            }
            DomNode::Element(e) => counts.add(walk(e, in_link, order, out)),
            DomNode::Comment(_) => {}
        }
    }
    if el.is("p") && counts.word_count > 0 {
        counts.paragraph_count += 1;
    }
    if let Some(i) = slot {
        out[i].counts = counts;
    }
    counts
}
