//! German morphological analysis over compiled, minimal word automata.
//!
//! The building blocks:
//!
//! - [`dafsa`]: minimal acyclic automata with fuzzy (umlaut-tolerant) lookup
//! - [`dictfmt`]: the text dictionary format and its compiled binary form
//! - [`tokens`]: URL / e-mail / date / number classification
//! - [`guesser`]: suffix rules for words missing from the dictionary
//! - [`analyzer`]: the staged pipeline tying these together
//! - [`cache`]: memoisation of analyses

pub mod analyzer;
mod bytes;
pub mod cache;
pub mod dafsa;
pub mod dictfmt;
pub mod guesser;
pub mod synth;
pub mod tokens;

pub use analyzer::{
    Analysis, AnalyzeError, Analyzer, AnalyzerBuilder, ConfigError, Source, Stage, StageTrace,
    TagMap, Tagset,
};
pub use cache::{CacheConfig, CacheStats, CachedAnalyzer};
pub use dafsa::{Automaton, ReplacementMap};
pub use dictfmt::{AnalysisRecord, CompiledDictionary, DictEntry, DictError, Paradigm, ParseMode};
pub use guesser::RuleTable;
pub use tokens::{TokenClass, TokenClassifier, TokenKind};
