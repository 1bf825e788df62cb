//! Out-of-vocabulary analysis by suffix analogy.
//!
//! A [`RuleTable`] maps word endings to a category, one or more feature
//! sets, and a recipe for restoring the lemma. Rules are tried longest
//! suffix first; every rule that matches contributes. Separable verb
//! prefixes (`an`, `ab`, ...) are stripped and the remainder retried, and
//! `ge~t` style circumfix rules cover participles.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analyzer::{Analysis, Source};
use crate::dictfmt::{AnalysisRecord, CompiledDictionary, DictError, Paradigm};

pub const DEFAULT_RULES: &str = include_str!("../data/guesser_rules.tsv");

/// Shortest stem a rule may leave behind.
pub const MIN_STEM: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaRewrite {
    /// Characters removed from the end of the word.
    pub strip: usize,
    pub append: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixRule {
    pub suffix: String,
    /// Required word-initial part of a circumfix (`ge` in `ge~t`).
    pub circumfix: Option<String>,
    /// Whether the circumfix prefix stays in the lemma (`ge+tem`) or is
    /// dropped (`ge~t`).
    pub keep_circumfix: bool,
    pub min_stem_length: usize,
    pub category: String,
    pub feature_sets: Vec<Vec<String>>,
    pub lemma_rewrite: LemmaRewrite,
}

impl SuffixRule {
    fn suffix_chars(&self) -> usize {
        self.suffix.chars().count()
    }

    /// The lemma for `word` if the rule applies.
    pub fn apply(&self, word: &str) -> Option<String> {
        let base = match &self.circumfix {
            Some(prefix) => word.strip_prefix(prefix.as_str())?,
            None => word,
        };
        let stem = base.strip_suffix(self.suffix.as_str())?;
        if stem.chars().count() < self.min_stem_length {
            return None;
        }
        let keep = base.chars().count().checked_sub(self.lemma_rewrite.strip)?;
        let mut lemma = String::new();
        if self.keep_circumfix {
            lemma.push_str(self.circumfix.as_deref().unwrap_or_default());
        }
        lemma.extend(base.chars().take(keep));
        lemma.push_str(&self.lemma_rewrite.append);
        Some(lemma)
    }

    pub fn paradigms(&self) -> impl Iterator<Item = Paradigm> + '_ {
        self.feature_sets
            .iter()
            .map(|fs| Paradigm::new(self.category.as_str(), fs.iter().cloned()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("line {line}: expected 5 tab-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("line {line}: min_stem {value} is below {MIN_STEM}")]
    StemTooShort { line: usize, value: usize },
    #[error("line {line}: malformed feature list {text:?}")]
    BadFeatures { line: usize, text: String },
    #[error("line {line}: duplicate rule for suffix {suffix:?} ({category})")]
    Duplicate {
        line: usize,
        suffix: String,
        category: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleTable {
    rules: Vec<SuffixRule>,
    stripped_prefixes: Vec<String>,
}

impl RuleTable {
    pub fn load(text: &str) -> Result<Self, RuleError> {
        let mut rules: Vec<SuffixRule> = Vec::new();
        let mut prefixes = Vec::new();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("@prefixes") {
                for p in rest.trim().split(',').map(str::trim) {
                    if p.is_empty() {
                        return Err(RuleError::Invalid {
                            line,
                            message: "empty prefix".into(),
                        });
                    }
                    prefixes.push(p.to_owned());
                }
                continue;
            }
            let rule = parse_rule(raw, line)?;
            let key = (
                rule.circumfix.clone(),
                rule.suffix.clone(),
                rule.category.clone(),
                rule.feature_sets.clone(),
            );
            if !seen.insert(key) {
                return Err(RuleError::Duplicate {
                    line,
                    suffix: rule.suffix,
                    category: rule.category,
                });
            }
            rules.push(rule);
        }
        // longest suffix first; file order among equals
        rules.sort_by_key(|r| std::cmp::Reverse(r.suffix_chars()));
        prefixes.sort_by_key(|p: &String| std::cmp::Reverse(p.chars().count()));
        prefixes.dedup();
        Ok(RuleTable {
            rules,
            stripped_prefixes: prefixes,
        })
    }

    pub fn rules(&self) -> &[SuffixRule] {
        &self.rules
    }

    pub fn stripped_prefixes(&self) -> &[String] {
        &self.stripped_prefixes
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().map(|r| r.category.as_str())
    }

    pub fn covers_suffix(&self, suffix: &str) -> bool {
        self.rules.iter().any(|r| r.suffix == suffix)
    }

    /// Guessed analyses for `word`, longest matching suffix first, then the
    /// same for each stripped separable prefix.
    pub fn guess(&self, word: &str) -> Vec<Analysis> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.guess_into(word, "", word, &mut out, &mut seen);
        for prefix in &self.stripped_prefixes {
            if let Some(rest) = word.strip_prefix(prefix.as_str()) {
                if rest.chars().count() > MIN_STEM {
                    self.guess_into(rest, prefix, word, &mut out, &mut seen);
                }
            }
        }
        out
    }

    fn guess_into(
        &self,
        word: &str,
        prefix: &str,
        surface: &str,
        out: &mut Vec<Analysis>,
        seen: &mut HashSet<AnalysisRecord>,
    ) {
        for rule in &self.rules {
            let Some(lemma) = rule.apply(word) else {
                continue;
            };
            let lemma = format!("{prefix}{lemma}");
            for paradigm in rule.paradigms() {
                let record = AnalysisRecord::new(lemma.clone(), paradigm);
                if seen.insert(record.clone()) {
                    out.push(Analysis {
                        record,
                        source: Source::Guesser,
                        matched_surface: surface.to_owned(),
                    });
                }
            }
        }
    }
}

pub fn default_rules() -> RuleTable {
    RuleTable::load(DEFAULT_RULES).expect("shipped guesser rules are valid")
}

fn parse_rule(raw: &str, line: usize) -> Result<SuffixRule, RuleError> {
    let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
    if fields.len() != 5 {
        return Err(RuleError::FieldCount {
            line,
            found: fields.len(),
        });
    }
    let split = fields[0]
        .split_once('~')
        .map(|(p, s)| (p, s, false))
        .or_else(|| fields[0].split_once('+').map(|(p, s)| (p, s, true)));
    let (circumfix, suffix, keep_circumfix) = match split {
        Some((pre, suf, keep)) if !pre.is_empty() => (Some(pre.to_owned()), suf, keep),
        Some(_) => {
            return Err(RuleError::Invalid {
                line,
                message: "empty circumfix prefix".into(),
            })
        }
        None => (None, fields[0], false),
    };
    if suffix.is_empty() || suffix.chars().any(char::is_whitespace) {
        return Err(RuleError::Invalid {
            line,
            message: format!("bad suffix {:?}", fields[0]),
        });
    }
    let min_stem_length: usize = fields[1].parse().map_err(|_| RuleError::Invalid {
        line,
        message: format!("min_stem {:?} is not a number", fields[1]),
    })?;
    if min_stem_length < MIN_STEM {
        return Err(RuleError::StemTooShort {
            line,
            value: min_stem_length,
        });
    }
    let category = fields[2];
    if category.is_empty() || category.contains(',') {
        return Err(RuleError::Invalid {
            line,
            message: format!("bad category {category:?}"),
        });
    }
    let (strip, append) = fields[3]
        .split_once(':')
        .ok_or_else(|| RuleError::Invalid {
            line,
            message: format!("lemma rewrite {:?} is not strip:append", fields[3]),
        })?;
    let strip: usize = strip.parse().map_err(|_| RuleError::Invalid {
        line,
        message: format!("strip count {strip:?} is not a number"),
    })?;
    let suffix_len = suffix.chars().count();
    if strip > suffix_len + min_stem_length {
        return Err(RuleError::Invalid {
            line,
            message: format!("strip {strip} exceeds suffix length plus min_stem"),
        });
    }
    let mut feature_sets = Vec::new();
    for set in fields[4].split('|') {
        let feats: Vec<String> = set.split(',').map(str::to_owned).collect();
        if set.is_empty() || feats.iter().any(|f| f.is_empty()) {
            return Err(RuleError::BadFeatures {
                line,
                text: fields[4].to_owned(),
            });
        }
        feature_sets.push(feats);
    }
    Ok(SuffixRule {
        suffix: suffix.to_owned(),
        circumfix,
        keep_circumfix,
        min_stem_length,
        category: category.to_owned(),
        feature_sets,
        lemma_rewrite: LemmaRewrite {
            strip,
            append: append.to_owned(),
        },
    })
}

/// Agreement between the rule table and a dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Calibration {
    pub samples: usize,
    pub hits: usize,
}

impl Calibration {
    pub fn ratio(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.hits as f64 / self.samples as f64
        }
    }
}

/// Samples up to `max_samples` dictionary words that some rule matches and
/// counts those for which a guessed (category, features) pair is among the
/// word's true readings.
pub fn calibrate(
    table: &RuleTable,
    dict: &CompiledDictionary,
    max_samples: usize,
    seed: u64,
) -> Result<Calibration, DictError> {
    let mut candidates: Vec<String> = dict
        .surfaces()
        .filter(|w| !table.guess(w).is_empty())
        .collect();
    if candidates.len() > max_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        candidates.shuffle(&mut rng);
        candidates.truncate(max_samples);
    }
    let mut hits = 0;
    for word in &candidates {
        let truth: HashSet<Paradigm> = dict
            .lookup_analyses(word)?
            .into_iter()
            .map(|r| r.paradigm)
            .collect();
        if table
            .guess(word)
            .iter()
            .any(|a| truth.contains(&a.record.paradigm))
        {
            hits += 1;
        }
    }
    Ok(Calibration {
        samples: candidates.len(),
        hits,
    })
}
