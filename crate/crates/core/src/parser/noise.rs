use super::dom::{DomNode, DomTree, Element};
use super::NoiseConfig;

pub const NOISE_TAGS: [&str; 7] = ["script", "style", "noscript", "iframe", "svg", "form", "nav"];

/// Returns a copy of the tree without noise subtrees, comments, and elements
/// whose `class`/`id` mention a cookie-consent keyword.
pub fn strip_noise(dom: &DomTree, cfg: &NoiseConfig) -> DomTree {
    let keywords: Vec<String> = cfg
        .cookie_keywords
        .iter()
        .map(|k| k.to_lowercase())
        .collect();
    DomTree {
        root: strip_element(&dom.root, &keywords),
    }
}

fn strip_element(el: &Element, keywords: &[String]) -> Element {
    Element {
        tag: el.tag.clone(),
        attrs: el.attrs.clone(),
        children: el
            .children
            .iter()
            .filter_map(|child| match child {
                DomNode::Comment(_) => None,
                DomNode::Text(t) => Some(DomNode::Text(t.clone())),
                DomNode::Element(e) if is_noise(e, keywords) => None,
                DomNode::Element(e) => Some(DomNode::Element(strip_element(e, keywords))),
            })
            .collect(),
    }
}

fn is_noise(el: &Element, keywords: &[String]) -> bool {
    if NOISE_TAGS.iter().any(|t| el.is(t)) {
        return true;
    }
    let hay = el.class_and_id().to_lowercase();
    !hay.is_empty() && keywords.iter().any(|k| hay.contains(k.as_str()))
}
