//! Classifier for tokens that belong to written text but not to the
//! lexicon: URLs, e-mail addresses, dates, ordinals and numbers.
//!
//! Patterns are data (`data/token_patterns.tsv`), listed in priority order
//! and anchored to the whole token.

use std::fmt;
use std::str::FromStr;

use regex::{Regex, RegexSet};
use thiserror::Error;

pub const DEFAULT_PATTERNS: &str = include_str!("../data/token_patterns.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenKind {
    Url,
    Email,
    Date,
    Ordinal,
    Number,
    /// A class added through the pattern file.
    Other(String),
}

impl TokenKind {
    pub fn as_str(&self) -> &str {
        match self {
            TokenKind::Url => "URL",
            TokenKind::Email => "EMAIL",
            TokenKind::Date => "DATE",
            TokenKind::Ordinal => "ORDINAL",
            TokenKind::Number => "NUMBER",
            TokenKind::Other(name) => name,
        }
    }
}

impl FromStr for TokenKind {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "URL" => TokenKind::Url,
            "EMAIL" => TokenKind::Email,
            "DATE" => TokenKind::Date,
            "ORDINAL" => TokenKind::Ordinal,
            "NUMBER" => TokenKind::Number,
            other => TokenKind::Other(other.to_owned()),
        })
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenClass {
    pub kind: TokenKind,
    pub canonical: Option<String>,
}

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("line {line}: expected `KIND<TAB>pattern`")]
    Malformed { line: usize },
    #[error("line {line}: kind {kind:?} must be upper-case ASCII")]
    BadKind { line: usize, kind: String },
    #[error("line {line}: duplicate kind {kind}")]
    Duplicate { line: usize, kind: String },
    #[error("line {line}: {source}")]
    Regex {
        line: usize,
        #[source]
        source: regex::Error,
    },
}

#[derive(Debug, Clone)]
pub struct TokenClassifier {
    kinds: Vec<TokenKind>,
    set: RegexSet,
}

impl Default for TokenClassifier {
    fn default() -> Self {
        Self::from_patterns(DEFAULT_PATTERNS).expect("shipped token patterns are valid")
    }
}

impl TokenClassifier {
    pub fn from_patterns(text: &str) -> Result<Self, PatternError> {
        let mut kinds = Vec::new();
        let mut patterns = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (kind, pattern) = raw
                .split_once('\t')
                .ok_or(PatternError::Malformed { line })?;
            let (kind, pattern) = (kind.trim(), pattern.trim());
            if pattern.is_empty() {
                return Err(PatternError::Malformed { line });
            }
            if kind.is_empty()
                || !kind
                    .chars()
                    .all(|c| c.is_ascii_uppercase() || c == '_' || c.is_ascii_digit())
            {
                return Err(PatternError::BadKind {
                    line,
                    kind: kind.to_owned(),
                });
            }
            let kind: TokenKind = kind.parse().unwrap();
            if kinds.contains(&kind) {
                return Err(PatternError::Duplicate {
                    line,
                    kind: kind.to_string(),
                });
            }
            let anchored = format!("^(?:{pattern})$");
            Regex::new(&anchored).map_err(|source| PatternError::Regex { line, source })?;
            kinds.push(kind);
            patterns.push(anchored);
        }
        let set =
            RegexSet::new(&patterns).map_err(|source| PatternError::Regex { line: 0, source })?;
        Ok(TokenClassifier { kinds, set })
    }

    pub fn kinds(&self) -> &[TokenKind] {
        &self.kinds
    }

    /// The highest-priority class whose pattern matches all of `token`.
    pub fn classify(&self, token: &str) -> Option<TokenClass> {
        let index = self.set.matches(token).into_iter().next()?;
        let kind = self.kinds[index].clone();
        let canonical = canonicalize(&kind, token);
        Some(TokenClass { kind, canonical })
    }
}

fn canonicalize(kind: &TokenKind, token: &str) -> Option<String> {
    match kind {
        TokenKind::Email => Some(token.to_lowercase()),
        TokenKind::Number => {
            let t = token.strip_prefix('+').unwrap_or(token);
            Some(t.replace(',', "."))
        }
        TokenKind::Ordinal => Some(token.trim_end_matches('.').to_owned()),
        TokenKind::Date => {
            let mut parts = token.split('.');
            let (d, m, y) = (parts.next()?, parts.next()?, parts.next()?);
            if y.len() != 4 {
                return None;
            }
            let d: u32 = d.parse().ok()?;
            let m: u32 = m.parse().ok()?;
            Some(format!("{y}-{m:02}-{d:02}"))
        }
        TokenKind::Url | TokenKind::Other(_) => None,
    }
}
