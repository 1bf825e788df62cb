use std::collections::BTreeSet;

use morphkit::Analysis;
use serde::Serialize;

pub const JSON_VERSION: u32 = 1;

#[derive(Serialize)]
struct JsonAnalysis<'a> {
    lemma: &'a str,
    paradigm: String,
    source: &'static str,
    matched_surface: &'a str,
}

#[derive(Serialize)]
struct AnalyzeLine<'a> {
    v: u32,
    word: &'a str,
    analyses: Vec<JsonAnalysis<'a>>,
    /// Distinct sources of the analyses, in output order.
    sources: Vec<&'static str>,
}

#[derive(Serialize)]
struct ListLine<'a> {
    v: u32,
    word: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemmas: Option<&'a BTreeSet<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tags: Option<&'a BTreeSet<String>>,
}

/// One row per analysis; a word without analyses gets a row of dashes so
/// that every input token is visible in the output.
pub fn analyses_tsv(word: &str, analyses: &[Analysis], out: &mut String) {
    if analyses.is_empty() {
        out.push_str(word);
        out.push_str("\t-\t-\tnone\t-\n");
    }
    for a in analyses {
        out.push_str(&a.to_tsv(word));
        out.push('\n');
    }
}

pub fn analyses_json(word: &str, analyses: &[Analysis], out: &mut String) {
    let mut sources = Vec::new();
    for a in analyses {
        let s = a.source.as_str();
        if !sources.contains(&s) {
            sources.push(s);
        }
    }
    let line = AnalyzeLine {
        v: JSON_VERSION,
        word,
        analyses: analyses
            .iter()
            .map(|a| JsonAnalysis {
                lemma: &a.record.lemma,
                paradigm: a.record.paradigm.to_string(),
                source: a.source.as_str(),
                matched_surface: &a.matched_surface,
            })
            .collect(),
        sources,
    };
    push_json(&line, out);
}

/// `word <TAB> item <TAB> item ...`
pub fn list_tsv(word: &str, items: &BTreeSet<String>, out: &mut String) {
    out.push_str(word);
    for item in items {
        out.push('\t');
        out.push_str(item);
    }
    out.push('\n');
}

pub fn lemmas_json(word: &str, lemmas: &BTreeSet<String>, out: &mut String) {
    push_json(
        &ListLine {
            v: JSON_VERSION,
            word,
            lemmas: Some(lemmas),
            tags: None,
        },
        out,
    );
}

pub fn tags_json(word: &str, tags: &BTreeSet<String>, out: &mut String) {
    push_json(
        &ListLine {
            v: JSON_VERSION,
            word,
            lemmas: None,
            tags: Some(tags),
        },
        out,
    );
}

pub fn push_json<T: Serialize>(value: &T, out: &mut String) {
    out.push_str(&serde_json::to_string(value).expect("plain structs serialize"));
    out.push('\n');
}
