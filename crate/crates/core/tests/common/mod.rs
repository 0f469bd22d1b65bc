//! Fixture generators shared by the integration tests.
#![allow(dead_code)]

pub mod golden;
pub mod hand_features;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use flate2::write::GzEncoder;
use flate2::Compression;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EN_SENTENCES: &[&str] = &[
    "The city council approved a new plan on Monday to expand bicycle lanes downtown.",
    "Officials said the project would reduce traffic and make the roads safer for children.",
    "Heavy rain caused flooding in several villages and forced hundreds of residents to leave.",
    "Emergency crews worked through the night to clear blocked drains and repair damaged bridges.",
    "The central bank kept interest rates unchanged but warned that inflation could remain high.",
    "Many economists had expected a small cut after a weak report on consumer spending.",
    "A spokesperson for the airline said all flights would operate as normal on Friday.",
    "The company reported higher profits for the third quarter despite rising fuel costs.",
    "Teachers in the region voted to accept a new contract after months of negotiations.",
    "The agreement includes a modest pay increase and more support staff for large schools.",
    "Scientists at the university published a study showing that the lake is slowly warming.",
    "The researchers collected water samples every week for more than ten years.",
    "Local farmers said the dry summer had reduced their harvest by nearly a third.",
    "The government announced that it would provide emergency loans to affected families.",
    "Police said they were still searching for witnesses who saw the accident on the highway.",
    "The museum will reopen next month after a long renovation of its main gallery.",
    "Visitors will be able to see several paintings that have never been shown in public.",
    "The hospital has hired more nurses to reduce waiting times in the emergency department.",
    "Critics argued that the proposal lacked detail on how the new services would be funded.",
    "Supporters of the bill said it would create thousands of jobs over the next decade.",
    "The mayor thanked the volunteers who helped organize the public meetings this spring.",
    "Residents of the neighborhood have complained for years about noise from the factory.",
    "The football club confirmed that its captain would miss the rest of the season.",
    "Tickets for the concert sold out within minutes of going on sale this morning.",
    "The report found that the number of people using public transport has grown steadily.",
    "Officials expect a final decision on the new stadium before the end of March.",
    "The weather service has issued a warning for strong winds along the northern coast.",
    "Several roads were closed after fallen trees blocked traffic in both directions.",
    "The minister said the country would meet its climate targets ahead of schedule.",
    "Opposition leaders called for an independent inquiry into the handling of the contract.",
];

pub const DE_SENTENCES: &[&str] = &[
    "Der Stadtrat hat am Montag einen neuen Plan für mehr Radwege in der Innenstadt beschlossen.",
    "Nach Angaben der Behörden soll das Projekt den Verkehr verringern und die Straßen sicherer machen.",
    "Starker Regen hat in mehreren Dörfern zu Überschwemmungen geführt und viele Bewohner vertrieben.",
    "Die Zentralbank hat die Zinsen nicht verändert, aber vor einer anhaltend hohen Inflation gewarnt.",
    "Die Lehrer in der Region haben nach monatelangen Verhandlungen einem neuen Vertrag zugestimmt.",
    "Wissenschaftler der Universität haben eine Studie veröffentlicht, nach der der See langsam wärmer wird.",
    "Die Landwirte sagten, der trockene Sommer habe ihre Ernte um fast ein Drittel verringert.",
    "Die Regierung kündigte an, betroffenen Familien schnell und unbürokratisch zu helfen.",
    "Das Museum wird im nächsten Monat nach einer langen Renovierung wieder geöffnet.",
    "Kritiker bemängelten, dass der Vorschlag keine Angaben zur Finanzierung der neuen Dienste enthält.",
    "Der Bürgermeister dankte den freiwilligen Helfern, die die öffentlichen Versammlungen organisiert haben.",
    "Die Polizei sucht weiterhin nach Zeugen, die den Unfall auf der Autobahn beobachtet haben.",
];

const NAV_WORDS: &[&str] = &[
    "Home", "World", "Politics", "Business", "Sport", "Culture", "Science", "Weather", "Opinion",
    "Video", "Podcasts", "Newsletters", "Contact", "About", "Careers", "Archive",
];

const POSITIVE_CLASSES: &[&str] = &["article-body", "story", "entry-content", "post-body", "main-content"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn words(s: &str) -> usize {
    s.split_whitespace().count()
}

/// Sentences drawn from `pool` until at least `min_words` words.
pub fn paragraph(rng: &mut impl Rng, pool: &[&str], min_words: usize) -> String {
    let mut out = String::new();
    while words(&out) < min_words {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(pool.choose(rng).unwrap());
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nav_block(rng: &mut impl Rng) -> String {
    let mut s = String::from("<nav><ul>");
    for w in NAV_WORDS.choose_multiple(rng, 8) {
        write!(s, "<li><a href=\"/{}\">{w}</a></li>", w.to_lowercase()).unwrap();
    }
    s.push_str("</ul></nav>");
    s
}

fn footer_block(rng: &mut impl Rng) -> String {
    let mut s = String::from("<div class=\"footer\"><p>");
    for w in NAV_WORDS.choose_multiple(rng, 6) {
        write!(s, "<a href=\"/{}\">{w}</a> ", w.to_lowercase()).unwrap();
    }
    s.push_str("</p><p>© 2021 Example Media. All rights reserved.</p></div>");
    s
}

/// A typical article page: 10 to 20 paragraphs of at least 40 words in a
/// positively keyed container, with navigation, cookie banner and footer.
pub fn article_page(rng: &mut impl Rng, pool: &[&str]) -> (String, Vec<String>) {
    let n = rng.gen_range(10..=20);
    let paras: Vec<String> = (0..n)
        .map(|_| {
            let min = rng.gen_range(40..=60);
            paragraph(rng, pool, min)
        })
        .collect();
    let class = POSITIVE_CLASSES.choose(rng).unwrap();
    let tag = ["div", "article", "section"].choose(rng).unwrap();
    let mut html = String::from("<!DOCTYPE html><html><head><meta charset=\"utf-8\">");
    write!(html, "<title>{}</title>", escape(&paragraph(rng, pool, 1))).unwrap();
    html.push_str("<script>window.dataLayer = [];</script></head><body>");
    html.push_str(&nav_block(rng));
    if rng.gen_bool(0.5) {
        html.push_str("<div id=\"cookie-banner\"><p>We use cookies to improve your experience on our website.</p></div>");
    }
    write!(html, "<{tag} class=\"{class}\"><h1>{}</h1>", escape(&paragraph(rng, pool, 1))).unwrap();
    for p in &paras {
        write!(html, "<p>{}</p>", escape(p)).unwrap();
    }
    write!(html, "</{tag}>").unwrap();
    html.push_str(&footer_block(rng));
    html.push_str("</body></html>");
    (html, paras)
}

/// A page made of navigation, link lists, teasers and a footer. No
/// candidate reaches 50 points.
pub fn nav_page(rng: &mut impl Rng) -> String {
    let mut html = String::from("<!DOCTYPE html><html><head><title>Section index</title></head><body>");
    html.push_str(&nav_block(rng));
    html.push_str("<div class=\"menu\">");
    let links = rng.gen_range(4..=16);
    for w in NAV_WORDS.choose_multiple(rng, links) {
        write!(html, "<a href=\"/{}\">{w}</a> ", w.to_lowercase()).unwrap();
    }
    html.push_str("</div><div class=\"teasers\">");
    let teasers = rng.gen_range(0..=4);
    for _ in 0..teasers {
        let title = paragraph(rng, EN_SENTENCES, 1);
        write!(html, "<div class=\"teaser\"><h3><a href=\"/t\">{}</a></h3><p>{}</p></div>", escape(&title), escape(&paragraph(rng, EN_SENTENCES, 8))).unwrap();
    }
    html.push_str("</div>");
    if rng.gen_bool(0.5) {
        html.push_str("<div class=\"sidebar\">");
        let n = rng.gen_range(1..=3);
        for _ in 0..n {
            write!(html, "<p>{}</p>", escape(&paragraph(rng, EN_SENTENCES, 12))).unwrap();
        }
        html.push_str("</div>");
    }
    html.push_str(&footer_block(rng));
    html.push_str("</body></html>");
    html
}

/// One uncompressed WARC/1.0 record.
pub fn warc_record(kind: &str, uri: &str, date: &str, payload: &[u8]) -> Vec<u8> {
    let mut out = format!(
        "WARC/1.0\r\nWARC-Type: {kind}\r\nWARC-Target-URI: {uri}\r\nWARC-Date: {date}\r\nContent-Length: {}\r\n\r\n",
        payload.len()
    )
    .into_bytes();
    out.extend_from_slice(payload);
    out.extend_from_slice(b"\r\n\r\n");
    out
}

pub fn http_payload(mime: &str, body: &[u8]) -> Vec<u8> {
    let mut out = format!("HTTP/1.1 200 OK\r\nContent-Type: {mime}\r\nContent-Length: {}\r\n\r\n", body.len()).into_bytes();
    out.extend_from_slice(body);
    out
}

pub fn html_response(uri: &str, date: &str, html: &str) -> Vec<u8> {
    warc_record("response", uri, date, &http_payload("text/html; charset=utf-8", html.as_bytes()))
}

pub fn gzip(bytes: &[u8]) -> Vec<u8> {
    let mut enc = GzEncoder::new(Vec::new(), Compression::fast());
    enc.write_all(bytes).unwrap();
    enc.finish().unwrap()
}

/// A mixed fixture corpus written as an HTML directory with a sidecar.
pub struct Corpus {
    pub pages: usize,
    pub english: usize,
    pub german: usize,
    pub nav: usize,
    pub duplicates: usize,
    pub domains: Vec<String>,
}

/// `n` pages: 75% English articles over `n_domains` domains, 10% German
/// articles, 10% navigation pages and 5% repeated URLs.
pub fn write_corpus(dir: &Path, n: usize, n_domains: usize, seed: u64) -> Corpus {
    fs::create_dir_all(dir).unwrap();
    let mut r = rng(seed);
    let domains: Vec<String> = (0..n_domains).map(|i| format!("outlet{i:02}.com")).collect();
    let mut sidecar = serde_json::Map::new();
    let mut c = Corpus { pages: n, english: 0, german: 0, nav: 0, duplicates: 0, domains: domains.clone() };
    let mut urls: Vec<String> = Vec::new();
    for i in 0..n {
        let domain = domains.choose(&mut r).unwrap();
        let roll = i % 20;
        let (html, url) = if roll < 15 {
            c.english += 1;
            (article_page(&mut r, EN_SENTENCES).0, format!("https://www.{domain}/story/{i}"))
        } else if roll < 17 {
            c.german += 1;
            (article_page(&mut r, DE_SENTENCES).0, format!("https://{domain}/de/{i}"))
        } else if roll < 19 {
            c.nav += 1;
            (nav_page(&mut r), format!("https://{domain}/section/{i}"))
        } else {
            c.duplicates += 1;
            let url = urls[r.gen_range(0..urls.len())].clone();
            (article_page(&mut r, EN_SENTENCES).0, url)
        };
        if roll < 15 {
            urls.push(url.clone());
        }
        let name = format!("page{i:04}.html");
        fs::write(dir.join(&name), html).unwrap();
        let day = 1 + i % 28;
        sidecar.insert(name, serde_json::json!({"url": url, "date": format!("2021-03-{day:02}")}));
    }
    fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&sidecar).unwrap()).unwrap();
    c
}

/// PC1 scores for all but the last domain.
pub fn write_pc1(path: &Path, domains: &[String], seed: u64) {
    let mut r = rng(seed);
    let mut s = String::from("domain,pc1\n");
    for d in &domains[..domains.len() - 1] {
        writeln!(s, "{},{:.4}", d.trim_start_matches("www."), r.gen_range(0.5..1.0)).unwrap();
    }
    fs::write(path, s).unwrap();
}
