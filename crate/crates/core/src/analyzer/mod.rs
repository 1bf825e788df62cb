//! The analysis pipeline.
//!
//! A word passes through these stages in order, and the first stage that
//! yields anything ends the pipeline:
//!
//! 1. special-token classification (URLs, e-mail, dates, numbers),
//! 2. exact dictionary lookup,
//! 3. case variants (first letter toggled, then all lower-case),
//! 4. umlaut-tolerant lookup through a [`ReplacementMap`],
//! 5. hyphenated words, analysed by their last segment with the leading
//!    segments folded into the lemma as `U-(TRUNC)Bahn`,
//! 6. the suffix guesser.
//!
//! Stages 2 to 4 also consult the experimental dictionary when one is
//! attached; its readings come after the main dictionary's.

mod tags;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

pub use tags::{TagMap, TagMapError, Tagset, DEFAULT_TAGMAP};

use crate::dafsa::{FuzzyError, ReplacementMap};
use crate::dictfmt::{AnalysisRecord, CompiledDictionary, DictError, Paradigm, Surfaces};
use crate::guesser::{self, RuleTable};
use crate::tokens::TokenClassifier;

/// Where a reading came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Lexicon,
    Experimental,
    Guesser,
    TokenClass,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Lexicon => "lexicon",
            Source::Experimental => "experimental",
            Source::Guesser => "guesser",
            Source::TokenClass => "token_class",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One reading of a query word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Analysis {
    pub record: AnalysisRecord,
    pub source: Source,
    /// The stored form that produced the reading (`grün` for `grun`).
    pub matched_surface: String,
}

impl Analysis {
    /// `surface \t lemma \t paradigm \t source \t matched_surface`
    pub fn to_tsv(&self, surface: &str) -> String {
        format!(
            "{surface}\t{}\t{}\t{}\t{}",
            self.record.lemma, self.record.paradigm, self.source, self.matched_surface
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Token,
    Exact,
    CaseVariant,
    Fuzzy,
    Hyphen,
    Guesser,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Token => "token",
            Stage::Exact => "exact",
            Stage::CaseVariant => "case",
            Stage::Fuzzy => "fuzzy",
            Stage::Hyphen => "hyphen",
            Stage::Guesser => "guesser",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the pipeline did for one word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageTrace {
    pub attempted: Vec<Stage>,
    pub productive: Option<Stage>,
    /// Exact and fuzzy dictionary probes, summed over dictionaries.
    pub dictionary_lookups: usize,
    pub fuzzy_truncated: bool,
}

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error("invalid input {0:?}: expected one non-empty token")]
    InvalidInput(String),
    #[error(transparent)]
    Dictionary(#[from] DictError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    TagMap(#[from] TagMapError),
}

pub struct AnalyzerBuilder {
    main: CompiledDictionary,
    experimental: Option<CompiledDictionary>,
    tag_map: Option<TagMap>,
    rules: Option<RuleTable>,
    tokens: Option<TokenClassifier>,
    replacements: ReplacementMap,
    fuzzy: bool,
    guesser: bool,
}

impl AnalyzerBuilder {
    pub fn experimental(mut self, dict: CompiledDictionary) -> Self {
        self.experimental = Some(dict);
        self
    }

    pub fn tag_map(mut self, map: TagMap) -> Self {
        self.tag_map = Some(map);
        self
    }

    pub fn rules(mut self, rules: RuleTable) -> Self {
        self.rules = Some(rules);
        self
    }

    pub fn token_classifier(mut self, classifier: TokenClassifier) -> Self {
        self.tokens = Some(classifier);
        self
    }

    pub fn replacements(mut self, map: ReplacementMap) -> Self {
        self.replacements = map;
        self
    }

    pub fn fuzzy(mut self, enabled: bool) -> Self {
        self.fuzzy = enabled;
        self
    }

    pub fn guesser(mut self, enabled: bool) -> Self {
        self.guesser = enabled;
        self
    }

    /// Checks that every category the analyzer can produce has tags.
    pub fn build(self) -> Result<Analyzer, ConfigError> {
        let tag_map = self.tag_map.unwrap_or_else(TagMap::shipped);
        let rules = self.rules.unwrap_or_else(guesser::default_rules);
        let tokens = self.tokens.unwrap_or_default();
        {
            let mut categories: BTreeSet<&str> = BTreeSet::new();
            for dict in std::iter::once(&self.main).chain(self.experimental.as_ref()) {
                categories.extend(dict.paradigms().iter().map(|p| p.category.as_str()));
            }
            categories.extend(rules.categories());
            categories.extend(tokens.kinds().iter().map(|k| k.as_str()));
            tag_map.validate(categories)?;
        }
        Ok(Analyzer {
            main: self.main,
            experimental: self.experimental,
            tag_map,
            rules,
            tokens,
            replacements: self.replacements,
            fuzzy: self.fuzzy,
            guesser: self.guesser,
        })
    }
}

/// Read-only analyzer over compiled dictionaries. `Sync`, so one instance
/// can serve many threads.
#[derive(Debug, Clone)]
pub struct Analyzer {
    main: CompiledDictionary,
    experimental: Option<CompiledDictionary>,
    tag_map: TagMap,
    rules: RuleTable,
    tokens: TokenClassifier,
    replacements: ReplacementMap,
    fuzzy: bool,
    guesser: bool,
}

// a dictionary-stage hit before it is resolved to strings
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Hit {
    dict: usize,
    lemma: u32,
    paradigm: u16,
    surface: String,
}

impl Analyzer {
    pub fn builder(main: CompiledDictionary) -> AnalyzerBuilder {
        AnalyzerBuilder {
            main,
            experimental: None,
            tag_map: None,
            rules: None,
            tokens: None,
            replacements: ReplacementMap::german(),
            fuzzy: true,
            guesser: true,
        }
    }

    /// Shipped tag map, guesser rules, token patterns and German
    /// replacement map.
    pub fn new(main: CompiledDictionary) -> Result<Analyzer, ConfigError> {
        Self::builder(main).build()
    }

    pub fn dictionary(&self) -> &CompiledDictionary {
        &self.main
    }

    pub fn experimental(&self) -> Option<&CompiledDictionary> {
        self.experimental.as_ref()
    }

    pub fn tag_map(&self) -> &TagMap {
        &self.tag_map
    }

    pub fn rules(&self) -> &RuleTable {
        &self.rules
    }

    pub fn analyze(&self, word: &str) -> Result<Vec<Analysis>, AnalyzeError> {
        self.analyze_traced(word).map(|(a, _)| a)
    }

    pub fn analyze_traced(&self, word: &str) -> Result<(Vec<Analysis>, StageTrace), AnalyzeError> {
        let word = word.trim();
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(AnalyzeError::InvalidInput(word.to_owned()));
        }
        let mut trace = StageTrace::default();

        trace.attempted.push(Stage::Token);
        if let Some(class) = self.tokens.classify(word) {
            trace.productive = Some(Stage::Token);
            let lemma = class.canonical.unwrap_or_else(|| word.to_owned());
            let paradigm = Paradigm::new(class.kind.as_str(), Vec::<String>::new());
            return Ok((
                vec![Analysis {
                    record: AnalysisRecord::new(lemma, paradigm),
                    source: Source::TokenClass,
                    matched_surface: word.to_owned(),
                }],
                trace,
            ));
        }

        let mut result = self.lexical_stages(word, &mut trace)?;

        if result.is_empty() && word.contains('-') {
            trace.attempted.push(Stage::Hyphen);
            result = self.hyphenated(word, &mut trace)?;
            if !result.is_empty() {
                trace.productive = Some(Stage::Hyphen);
            }
        }

        if result.is_empty() && self.guesser {
            trace.attempted.push(Stage::Guesser);
            result = self.rules.guess(word);
            if !result.is_empty() {
                trace.productive = Some(Stage::Guesser);
            }
        }
        Ok((result, trace))
    }

    /// Stages 2 to 4 on `word`.
    fn lexical_stages(
        &self,
        word: &str,
        trace: &mut StageTrace,
    ) -> Result<Vec<Analysis>, AnalyzeError> {
        trace.attempted.push(Stage::Exact);
        let hits = self.lookup(&[word], trace)?;
        if !hits.is_empty() {
            trace.productive = Some(Stage::Exact);
            return Ok(self.resolve(hits));
        }

        trace.attempted.push(Stage::CaseVariant);
        let variants = case_variants(word);
        for variant in &variants {
            let hits = self.lookup(&[variant.as_str()], trace)?;
            if !hits.is_empty() {
                trace.productive = Some(Stage::CaseVariant);
                return Ok(self.resolve(hits));
            }
        }

        if self.fuzzy {
            trace.attempted.push(Stage::Fuzzy);
            // the word itself first, then its case variants, like stage 3
            for form in std::iter::once(word).chain(variants.iter().map(String::as_str)) {
                let mut surfaces = BTreeSet::new();
                for dict in self.dictionaries() {
                    trace.dictionary_lookups += 1;
                    let (found, truncated) = dict.fuzzy_surfaces(form, &self.replacements)?;
                    trace.fuzzy_truncated |= truncated;
                    surfaces.extend(found);
                }
                let surfaces: Vec<&str> = surfaces.iter().map(String::as_str).collect();
                let hits = self.lookup(&surfaces, trace)?;
                if !hits.is_empty() {
                    trace.productive = Some(Stage::Fuzzy);
                    return Ok(self.resolve(hits));
                }
            }
        }
        Ok(Vec::new())
    }

    fn hyphenated(
        &self,
        word: &str,
        trace: &mut StageTrace,
    ) -> Result<Vec<Analysis>, AnalyzeError> {
        let segments: Vec<&str> = word.split('-').collect();
        if segments.len() < 2 || segments.iter().any(|s| s.is_empty()) {
            return Ok(Vec::new());
        }
        let (last, leading) = segments.split_last().unwrap();
        let mut inner = StageTrace::default();
        let found = self.lexical_stages(last, &mut inner)?;
        trace.dictionary_lookups += inner.dictionary_lookups;
        trace.fuzzy_truncated |= inner.fuzzy_truncated;
        let lemma_prefix: String = leading.iter().map(|s| format!("{s}-(TRUNC)")).collect();
        let surface_prefix: String = leading.iter().map(|s| format!("{s}-")).collect();
        Ok(found
            .into_iter()
            .map(|a| Analysis {
                record: AnalysisRecord::new(
                    format!("{lemma_prefix}{}", a.record.lemma),
                    a.record.paradigm,
                ),
                source: a.source,
                matched_surface: format!("{surface_prefix}{}", a.matched_surface),
            })
            .collect())
    }

    fn dictionaries(&self) -> impl Iterator<Item = &CompiledDictionary> {
        std::iter::once(&self.main).chain(self.experimental.as_ref())
    }

    fn lookup(&self, surfaces: &[&str], trace: &mut StageTrace) -> Result<Vec<Hit>, DictError> {
        let mut hits = Vec::new();
        for (dict_index, dict) in self.dictionaries().enumerate() {
            for surface in surfaces {
                trace.dictionary_lookups += 1;
                for (lemma, paradigm) in dict.lookup_ids(surface)? {
                    hits.push(Hit {
                        dict: dict_index,
                        lemma,
                        paradigm,
                        surface: (*surface).to_owned(),
                    });
                }
            }
        }
        Ok(hits)
    }

    /// Orders by (dictionary, lemma id, paradigm id, surface) and drops
    /// repeated readings.
    fn resolve(&self, mut hits: Vec<Hit>) -> Vec<Analysis> {
        hits.sort();
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(hits.len());
        for hit in hits {
            let (dict, source) = match hit.dict {
                0 => (&self.main, Source::Lexicon),
                _ => (
                    self.experimental
                        .as_ref()
                        .expect("hit from attached dictionary"),
                    Source::Experimental,
                ),
            };
            let record = dict.record(hit.lemma, hit.paradigm);
            if seen.insert((source, record.clone())) {
                out.push(Analysis {
                    record,
                    source,
                    matched_surface: hit.surface,
                });
            }
        }
        out
    }

    /// Lemmas of [`analyze`](Self::analyze), sorted and deduplicated.
    pub fn lemmatize(&self, word: &str) -> Result<BTreeSet<String>, AnalyzeError> {
        Ok(self
            .analyze(word)?
            .into_iter()
            .map(|a| a.record.lemma)
            .collect())
    }

    pub fn tags(&self, word: &str, tagset: Tagset) -> Result<BTreeSet<String>, AnalyzeError> {
        let mut out = BTreeSet::new();
        for a in self.analyze(word)? {
            out.extend(self.tag_map.tags(tagset, &a.record.paradigm));
        }
        Ok(out)
    }

    pub fn tags_stts(&self, word: &str) -> Result<BTreeSet<String>, AnalyzeError> {
        self.tags(word, Tagset::Stts)
    }

    pub fn tags_ptb(&self, word: &str) -> Result<BTreeSet<String>, AnalyzeError> {
        self.tags(word, Tagset::Ptb)
    }

    /// Every surface of the main dictionary, ascending.
    pub fn iter_lexicon(&self) -> Surfaces<'_> {
        self.main.surfaces()
    }
}

/// First letter toggled, then fully lower-cased; excluding `word` itself.
pub fn case_variants(word: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(2);
    let mut chars = word.chars();
    if let Some(first) = chars.next() {
        let toggled: String = if first.is_uppercase() {
            first.to_lowercase().chain(chars).collect()
        } else {
            first.to_uppercase().chain(chars).collect()
        };
        out.push(toggled);
    }
    out.push(word.to_lowercase());
    let mut seen = HashSet::new();
    out.retain(|v| v != word && seen.insert(v.clone()));
    out
}
