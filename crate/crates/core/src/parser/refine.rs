use super::dom::{count_words, normalize_ws, DomNode, Element};
use super::RefineConfig;

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "caption", "dd", "details", "div", "dl", "dt",
    "figcaption", "figure", "footer", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li",
    "main", "ol", "p", "pre", "section", "summary", "table", "tbody", "td", "tfoot", "th",
    "thead", "tr", "ul",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefinedBlocks {
    pub paragraphs: Vec<String>,
    pub dropped: u64,
}

/// Splits the section into paragraph and raw-text blocks in document order
/// and drops short blocks and copyright lines.
pub fn refine_blocks(section: &Element, cfg: &RefineConfig) -> RefinedBlocks {
    let mut blocks = Vec::new();
    let mut buf = String::new();
    collect_blocks(section, &mut buf, &mut blocks);
    flush(&mut buf, &mut blocks);

    let patterns: Vec<String> = cfg
        .copyright_patterns
        .iter()
        .map(|p| p.to_lowercase())
        .collect();
    let mut out = RefinedBlocks::default();
    for block in blocks {
        let lower = block.to_lowercase();
        let short = count_words(&block) < cfg.min_paragraph_tokens;
        let copyright = patterns.iter().any(|p| lower.contains(p.as_str()));
        if short || copyright {
            out.dropped += 1;
        } else {
            out.paragraphs.push(block);
        }
    }
    out
}

fn is_block(el: &Element) -> bool {
    BLOCK_TAGS.iter().any(|t| el.is(t))
}

fn flush(buf: &mut String, blocks: &mut Vec<String>) {
    let text = normalize_ws(buf);
    if !text.is_empty() {
        blocks.push(text);
    }
    buf.clear();
}

fn collect_blocks(el: &Element, buf: &mut String, blocks: &mut Vec<String>) {
    for child in &el.children {
        match child {
            DomNode::Text(t) => buf.push_str(t),
            DomNode::Comment(_) => {}
            DomNode::Element(e) if e.is("br") => flush(buf, blocks),
            DomNode::Element(e) if is_block(e) => {
                flush(buf, blocks);
                collect_blocks(e, buf, blocks);
                flush(buf, blocks);
            }
            DomNode::Element(e) => {
                // Inline elements keep words apart across tag boundaries.
                collect_blocks(e, buf, blocks);
            }
        }
    }
}
