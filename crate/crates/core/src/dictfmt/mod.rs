//! Plain-text morphological dictionary format and its compiled binary form.
//!
//! Text entries look like
//!
//! ```text
//! gegangen
//! gegangen ADJ,pos,<pred>
//! gegangen ADJ,pos,<adv>
//! gehen V,ppast
//! ```
//!
//! a headword line followed by `lemma PARADIGM` lines, with blank lines
//! between entries. Compilation interns lemmas and paradigms into dense id
//! tables and stores every (surface, lemma id, paradigm id) triple as one key
//! of a minimal automaton (see [`encode`]).

mod compiled;
pub mod encode;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use compiled::{CompiledDictionary, DictError, DictionaryStats, Surfaces, MAGIC, VERSION};
pub use encode::{
    decode_key, encode_entries, encode_key, EncodeError, Encoded, LemmaTable, ParadigmTable,
    SEPARATOR,
};
pub use parse::{
    parse_str, parse_text_dictionary, render_entries, ParseError, ParseMode, ParseOutput,
    ParseWarning, SyntaxError,
};

/// Grammatical category plus ordered inflection features, e.g.
/// `NN,masc,acc,plu`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Paradigm {
    pub category: String,
    pub features: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParadigmError {
    Empty,
    EmptyCategory,
    EmptyFeature,
    Whitespace,
}

impl fmt::Display for ParadigmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParadigmError::Empty => "empty paradigm",
            ParadigmError::EmptyCategory => "paradigm has an empty category",
            ParadigmError::EmptyFeature => "paradigm has an empty feature",
            ParadigmError::Whitespace => "paradigm contains whitespace",
        })
    }
}

impl std::error::Error for ParadigmError {}

impl Paradigm {
    pub fn new<C, I, S>(category: C, features: I) -> Self
    where
        C: Into<String>,
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Paradigm {
            category: category.into(),
            features: features.into_iter().map(Into::into).collect(),
        }
    }

    pub fn has_feature(&self, feature: &str) -> bool {
        self.features.iter().any(|f| f == feature)
    }
}

impl FromStr for Paradigm {
    type Err = ParadigmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParadigmError::Empty);
        }
        if s.chars().any(char::is_whitespace) {
            return Err(ParadigmError::Whitespace);
        }
        let mut parts = s.split(',');
        let category = parts.next().unwrap_or_default();
        if category.is_empty() {
            return Err(ParadigmError::EmptyCategory);
        }
        let features = parts
            .map(|f| {
                if f.is_empty() {
                    Err(ParadigmError::EmptyFeature)
                } else {
                    Ok(f.to_owned())
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Paradigm {
            category: category.to_owned(),
            features,
        })
    }
}

impl fmt::Display for Paradigm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.category)?;
        for feat in &self.features {
            write!(f, ",{feat}")?;
        }
        Ok(())
    }
}

/// One (lemma, paradigm) reading of a word form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnalysisRecord {
    pub lemma: String,
    pub paradigm: Paradigm,
}

impl AnalysisRecord {
    pub fn new(lemma: impl Into<String>, paradigm: Paradigm) -> Self {
        AnalysisRecord {
            lemma: lemma.into(),
            paradigm,
        }
    }
}

impl fmt::Display for AnalysisRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lemma, self.paradigm)
    }
}

/// A headword and its readings, in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub surface: String,
    pub analyses: Vec<AnalysisRecord>,
}

impl DictEntry {
    pub fn new(surface: impl Into<String>, analyses: Vec<AnalysisRecord>) -> Self {
        DictEntry {
            surface: surface.into(),
            analyses,
        }
    }
}
