use scraper::{Html, Node};

/// Nodes deeper than this are flattened: their text is kept, their element
/// structure is not.
pub const MAX_DEPTH: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomNode {
    Element(Element),
    Text(String),
    Comment(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub tag: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<DomNode>,
}

impl Element {
    pub fn new(tag: impl Into<String>) -> Self {
        Self {
            tag: tag.into(),
            attrs: Vec::new(),
            children: Vec::new(),
        }
    }

    /// Attribute lookup, case-insensitive on the name.
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }

    pub fn is(&self, tag: &str) -> bool {
        self.tag.eq_ignore_ascii_case(tag)
    }

    /// `class` and `id` joined by a space, the haystack for keyword rules.
    pub fn class_and_id(&self) -> String {
        let mut s = String::new();
        if let Some(c) = self.attr("class") {
            s.push_str(c);
        }
        if let Some(i) = self.attr("id") {
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(i);
        }
        s
    }

    /// Concatenated descendant text.
    pub fn text(&self) -> String {
        let mut out = String::new();
        collect_text(self, &mut out);
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|c| match c {
            DomNode::Element(e) => Some(e),
            _ => None,
        })
    }
}

fn collect_text(el: &Element, out: &mut String) {
    for child in &el.children {
        match child {
            DomNode::Text(t) => out.push_str(t),
            DomNode::Element(e) => collect_text(e, out),
            DomNode::Comment(_) => {}
        }
    }
}

/// Owned document tree. The root element is a synthetic `#document`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomTree {
    pub root: Element,
}

impl DomTree {
    /// Parses with HTML5 tree construction, recovering from any markup error.
    pub fn parse(html: &str) -> Self {
        let doc = Html::parse_document(html);
        let mut root = Element::new("#document");
        for child in doc.tree.root().children() {
            if let Some(node) = convert(child, 1) {
                root.children.push(node);
            }
        }
        DomTree { root }
    }

    /// Whitespace-normalised content of the first `<title>`.
    pub fn title(&self) -> Option<String> {
        fn find<'a>(el: &'a Element) -> Option<&'a Element> {
            if el.is("title") {
                return Some(el);
            }
            el.elements().find_map(find)
        }
        let t = normalize_ws(&find(&self.root)?.text());
        (!t.is_empty()).then_some(t)
    }
}

fn convert(node: ego_tree::NodeRef<'_, Node>, depth: usize) -> Option<DomNode> {
    match node.value() {
        Node::Text(t) => Some(DomNode::Text(t.text.to_string())),
        Node::Comment(c) => Some(DomNode::Comment(c.comment.to_string())),
        Node::Element(e) => {
            let mut el = Element::new(e.name().to_ascii_lowercase());
            el.attrs = e
                .attrs()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
            if depth >= MAX_DEPTH {
                let mut text = String::new();
                for d in node.descendants() {
                    if let Node::Text(t) = d.value() {
                        text.push_str(&t.text);
                    }
                }
                if !text.is_empty() {
                    el.children.push(DomNode::Text(text));
                }
            } else {
                el.children = node
                    .children()
                    .filter_map(|c| convert(c, depth + 1))
                    .collect();
            }
            Some(DomNode::Element(el))
        }
        _ => None,
    }
}

pub(crate) fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A word is a maximal run of non-whitespace containing an alphanumeric
/// character.
pub fn count_words(s: &str) -> usize {
    s.split_whitespace()
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .count()
}
