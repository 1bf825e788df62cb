//! Shared fixtures for the benchmarks.

use morphkit::synth::{lexicon_with_forms, mixed_queries};
use morphkit::{Analyzer, CompiledDictionary, DictEntry};

pub const FORMS: usize = 50_000;
pub const QUERIES: usize = 10_000;

pub struct Fixture {
    pub entries: Vec<DictEntry>,
    pub dict: CompiledDictionary,
    pub queries: Vec<String>,
}

impl Fixture {
    pub fn new() -> Self {
        let entries = lexicon_with_forms(FORMS, 42);
        let dict = CompiledDictionary::compile(&entries).expect("generated lexicon compiles");
        let queries = mixed_queries(&entries, QUERIES, 43);
        Fixture {
            entries,
            dict,
            queries,
        }
    }

    pub fn analyzer(&self) -> Analyzer {
        Analyzer::new(self.dict.clone()).expect("shipped configuration is valid")
    }
}

impl Default for Fixture {
    fn default() -> Self {
        Self::new()
    }
}
