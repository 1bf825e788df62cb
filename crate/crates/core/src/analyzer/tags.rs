use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dictfmt::Paradigm;

pub const DEFAULT_TAGMAP: &str = include_str!("../../data/tagmap.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tagset {
    Stts,
    Ptb,
}

impl FromStr for Tagset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "stts" => Ok(Tagset::Stts),
            "ptb" => Ok(Tagset::Ptb),
            other => Err(format!("unknown tagset {other:?} (expected stts or ptb)")),
        }
    }
}

impl fmt::Display for Tagset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tagset::Stts => "stts",
            Tagset::Ptb => "ptb",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TagMapError {
    #[error("tag map line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("categories without a tag mapping: {}", .0.join(", "))]
    Unmapped(Vec<String>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Tags {
    stts: BTreeSet<String>,
    ptb: BTreeSet<String>,
}

impl Tags {
    fn get(&self, tagset: Tagset) -> &BTreeSet<String> {
        match tagset {
            Tagset::Stts => &self.stts,
            Tagset::Ptb => &self.ptb,
        }
    }
}

/// Category (and optional feature) to STTS / PTB tag sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TagMap {
    categories: BTreeMap<String, Tags>,
    refinements: BTreeMap<String, Vec<(String, Tags)>>,
}

impl TagMap {
    pub fn load(text: &str) -> Result<Self, TagMapError> {
        let mut map = TagMap::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let syntax = |message: String| TagMapError::Syntax { line, message };
            if fields.len() != 3 {
                return Err(syntax(format!(
                    "expected 3 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let tags = Tags {
                stts: tag_list(fields[1]).ok_or_else(|| syntax("empty STTS tag list".into()))?,
                ptb: tag_list(fields[2]).ok_or_else(|| syntax("empty PTB tag list".into()))?,
            };
            match fields[0].split_once(',') {
                None if !fields[0].is_empty() => {
                    if map.categories.insert(fields[0].to_owned(), tags).is_some() {
                        return Err(syntax(format!("duplicate category {}", fields[0])));
                    }
                }
                Some((cat, feat)) if !cat.is_empty() && !feat.is_empty() && !feat.contains(',') => {
                    let rows = map.refinements.entry(cat.to_owned()).or_default();
                    if rows.iter().any(|(f, _)| f == feat) {
                        return Err(syntax(format!("duplicate refinement {}", fields[0])));
                    }
                    rows.push((feat.to_owned(), tags));
                }
                _ => return Err(syntax(format!("bad key {:?}", fields[0]))),
            }
        }
        Ok(map)
    }

    pub fn has_category(&self, category: &str) -> bool {
        self.categories.contains_key(category)
    }

    /// Fails with every category lacking a default row.
    pub fn validate<'a, I>(&self, categories: I) -> Result<(), TagMapError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let missing: BTreeSet<&str> = categories
            .into_iter()
            .filter(|c| !self.has_category(c))
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(TagMapError::Unmapped(
                missing.into_iter().map(str::to_owned).collect(),
            ))
        }
    }

    /// Tags for one reading: the union of matching refinements, or the
    /// category default when none match. Empty for unknown categories.
    pub fn tags(&self, tagset: Tagset, paradigm: &Paradigm) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        if let Some(rows) = self.refinements.get(&paradigm.category) {
            for (feature, tags) in rows {
                if paradigm.has_feature(feature) {
                    out.extend(tags.get(tagset).iter().cloned());
                }
            }
        }
        if out.is_empty() {
            if let Some(tags) = self.categories.get(&paradigm.category) {
                out.extend(tags.get(tagset).iter().cloned());
            }
        }
        out
    }
}

impl TagMap {
    pub fn shipped() -> Self {
        TagMap::load(DEFAULT_TAGMAP).expect("shipped tag map is valid")
    }
}

fn tag_list(field: &str) -> Option<BTreeSet<String>> {
    let set: BTreeSet<String> = field
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect();
    (!set.is_empty()).then_some(set)
}
