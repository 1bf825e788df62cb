use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Automaton, StateId};

/// Maximum number of multi-rule occurrences expanded exhaustively (at most
/// 2^8 = 256 candidates).
pub const DEFAULT_EXPANSION_LIMIT: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FuzzyError {
    #[error("{occurrences} rewrite-rule occurrences exceed the expansion bound of {limit}")]
    ExpansionOverflow { limit: usize, occurrences: usize },
}

/// What to do when a query has more rule occurrences than the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Overflow {
    /// Keep the literal input plus one greedy left-to-right rewrite per
    /// rule, and mark the result truncated.
    #[default]
    Greedy,
    Fail,
}

/// Character substitutions tolerated during lookup.
///
/// `single` maps a character to alternatives tried edge-by-edge while
/// walking the automaton. `multi` holds rewrite rules of differing length
/// (`ue` → `ü`, `ß` → `ss`), which cannot be expressed as a per-character
/// alternative; they expand the query into candidates before the walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementMap {
    pub single: BTreeMap<char, Vec<char>>,
    pub multi: Vec<(String, String)>,
    pub expansion_limit: usize,
    pub overflow: Overflow,
}

impl Default for ReplacementMap {
    fn default() -> Self {
        Self::empty()
    }
}

impl ReplacementMap {
    pub fn empty() -> Self {
        ReplacementMap {
            single: BTreeMap::new(),
            multi: Vec::new(),
            expansion_limit: DEFAULT_EXPANSION_LIMIT,
            overflow: Overflow::Greedy,
        }
    }

    /// u→ü, o→ö, a→ä during the walk; ue→ü, oe→ö, ae→ä, ss→ß, ß→ss as
    /// candidate rewrites.
    pub fn german() -> Self {
        let mut map = Self::empty();
        map.add_single('u', 'ü');
        map.add_single('o', 'ö');
        map.add_single('a', 'ä');
        for (from, to) in [
            ("ue", "ü"),
            ("oe", "ö"),
            ("ae", "ä"),
            ("ss", "ß"),
            ("ß", "ss"),
        ] {
            map.add_rule(from, to);
        }
        map
    }

    pub fn add_single(&mut self, from: char, to: char) -> &mut Self {
        let alts = self.single.entry(from).or_default();
        if from != to && !alts.contains(&to) {
            alts.push(to);
        }
        self
    }

    pub fn add_rule(&mut self, pattern: &str, replacement: &str) -> &mut Self {
        if !pattern.is_empty() {
            self.multi
                .push((pattern.to_owned(), replacement.to_owned()));
        }
        self
    }

    pub fn alternatives(&self, c: char) -> &[char] {
        self.single.get(&c).map_or(&[], |v| v.as_slice())
    }

    /// Stage 1: the set of rewrite candidates for `input`, ascending. The
    /// literal input is always included. The flag reports truncation.
    pub fn expand(&self, input: &str) -> Result<(Vec<String>, bool), FuzzyError> {
        let occurrences = self.occurrences(input);
        if occurrences.len() <= self.expansion_limit {
            let mut out = BTreeSet::new();
            let mut chosen = Vec::new();
            subsets(input, &occurrences, 0, 0, &mut chosen, &mut out);
            return Ok((out.into_iter().collect(), false));
        }
        match self.overflow {
            Overflow::Fail => Err(FuzzyError::ExpansionOverflow {
                limit: self.expansion_limit,
                occurrences: occurrences.len(),
            }),
            Overflow::Greedy => {
                let mut out = BTreeSet::new();
                out.insert(input.to_owned());
                for (pattern, replacement) in &self.multi {
                    out.insert(input.replace(pattern.as_str(), replacement));
                }
                Ok((out.into_iter().collect(), true))
            }
        }
    }

    /// Every (start, end, replacement) occurrence, sorted by start.
    fn occurrences<'a>(&'a self, input: &str) -> Vec<Occurrence<'a>> {
        let mut out = Vec::new();
        for (start, _) in input.char_indices() {
            let rest = &input[start..];
            for (pattern, replacement) in &self.multi {
                if rest.starts_with(pattern.as_str()) {
                    out.push(Occurrence {
                        start,
                        end: start + pattern.len(),
                        replacement,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct Occurrence<'a> {
    start: usize,
    end: usize,
    replacement: &'a str,
}

/// Applies every subset of pairwise non-overlapping occurrences.
fn subsets<'a>(
    input: &str,
    occ: &[Occurrence<'a>],
    next: usize,
    covered_to: usize,
    chosen: &mut Vec<Occurrence<'a>>,
    out: &mut BTreeSet<String>,
) {
    if next == occ.len() {
        let mut s = String::with_capacity(input.len() + 2);
        let mut pos = 0;
        for o in chosen.iter() {
            s.push_str(&input[pos..o.start]);
            s.push_str(o.replacement);
            pos = o.end;
        }
        s.push_str(&input[pos..]);
        out.insert(s);
        return;
    }
    subsets(input, occ, next + 1, covered_to, chosen, out);
    let o = occ[next];
    if o.start >= covered_to {
        chosen.push(o);
        subsets(input, occ, next + 1, o.end, chosen, out);
        chosen.pop();
    }
}

/// Result of a fuzzy walk: matched key prefixes with the state each one
/// ends in, ascending by bytes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FuzzyMatches {
    pub matches: Vec<(Vec<u8>, StateId)>,
    pub truncated: bool,
}

impl FuzzyMatches {
    pub fn keys(&self) -> impl Iterator<Item = &[u8]> {
        self.matches.iter().map(|(k, _)| k.as_slice())
    }
}

impl Automaton {
    /// Accepted keys reachable from `input` through the map's rewrites and
    /// per-character alternatives, ascending.
    pub fn fuzzy_lookup(
        &self,
        input: &str,
        map: &ReplacementMap,
    ) -> Result<FuzzyMatches, FuzzyError> {
        self.fuzzy_walk(input, map, |a, s| a.is_final(s))
    }

    /// Walks every candidate of `input` from the root and keeps the paths
    /// whose end state satisfies `accept`.
    pub fn fuzzy_walk<F>(
        &self,
        input: &str,
        map: &ReplacementMap,
        accept: F,
    ) -> Result<FuzzyMatches, FuzzyError>
    where
        F: Fn(&Automaton, StateId) -> bool,
    {
        let (candidates, truncated) = map.expand(input)?;
        let mut found = BTreeMap::new();
        let mut path = Vec::with_capacity(input.len() + 8);
        let mut chars = Vec::new();
        for candidate in &candidates {
            chars.clear();
            chars.extend(candidate.chars());
            self.walk_alternatives(Self::ROOT, &chars, map, &accept, &mut path, &mut found);
        }
        Ok(FuzzyMatches {
            matches: found.into_iter().collect(),
            truncated,
        })
    }

    fn walk_alternatives<F>(
        &self,
        state: StateId,
        rest: &[char],
        map: &ReplacementMap,
        accept: &F,
        path: &mut Vec<u8>,
        found: &mut BTreeMap<Vec<u8>, StateId>,
    ) where
        F: Fn(&Automaton, StateId) -> bool,
    {
        let Some((&c, tail)) = rest.split_first() else {
            if accept(self, state) {
                found.entry(path.clone()).or_insert(state);
            }
            return;
        };
        for alt in std::iter::once(c).chain(map.alternatives(c).iter().copied()) {
            let mut buf = [0u8; 4];
            let bytes = alt.encode_utf8(&mut buf).as_bytes();
            if let Some(next) = self.walk(state, bytes) {
                let len = path.len();
                path.extend_from_slice(bytes);
                self.walk_alternatives(next, tail, map, accept, path, found);
                path.truncate(len);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(m: &FuzzyMatches) -> Vec<String> {
        m.keys()
            .map(|k| String::from_utf8(k.to_vec()).unwrap())
            .collect()
    }

    #[test]
    fn grun_reaches_grun_with_umlaut() {
        let a = Automaton::build(["grün"]).unwrap();
        let m = a.fuzzy_lookup("grun", &ReplacementMap::german()).unwrap();
        assert_eq!(keys(&m), vec!["grün"]);
        assert!(!m.truncated);
    }

    #[test]
    fn empty_map_is_exact() {
        let a = Automaton::build(["grun", "grün"]).unwrap();
        let m = a.fuzzy_lookup("grun", &ReplacementMap::empty()).unwrap();
        assert_eq!(keys(&m), vec!["grun"]);
        let m = a.fuzzy_lookup("gran", &ReplacementMap::empty()).unwrap();
        assert!(m.matches.is_empty());
    }

    #[test]
    fn literal_and_variant_both_returned() {
        let a = Automaton::build(["grun", "grün"]).unwrap();
        let m = a.fuzzy_lookup("grun", &ReplacementMap::german()).unwrap();
        assert_eq!(keys(&m), vec!["grun", "grün"]);
    }

    #[test]
    fn multi_rules_expand_before_walk() {
        let mut words = vec!["grün", "Straße", "Strasse", "Füße"];
        words.sort();
        let a = Automaton::build(&words).unwrap();
        let map = ReplacementMap::german();
        assert_eq!(keys(&a.fuzzy_lookup("gruen", &map).unwrap()), vec!["grün"]);
        assert_eq!(
            keys(&a.fuzzy_lookup("Strasse", &map).unwrap()),
            vec!["Strasse", "Straße"]
        );
        assert_eq!(
            keys(&a.fuzzy_lookup("Straße", &map).unwrap()),
            vec!["Strasse", "Straße"]
        );
        // rewrite then single substitution: Fusse -> Fuße -> Füße
        assert_eq!(keys(&a.fuzzy_lookup("Fusse", &map).unwrap()), vec!["Füße"]);
    }

    #[test]
    fn overlapping_occurrences_are_alternatives() {
        let mut map = ReplacementMap::empty();
        map.add_rule("ss", "ß");
        let (cands, truncated) = map.expand("asss").unwrap();
        assert!(!truncated);
        assert_eq!(cands, vec!["asss", "asß", "aßs"]);
    }

    #[test]
    fn expansion_bound() {
        let mut map = ReplacementMap::german();
        let word = "ueueueueue"; // 5 occurrences
        assert_eq!(map.expand(word).unwrap().0.len(), 32);
        let long = "ue".repeat(9);
        let (cands, truncated) = map.expand(&long).unwrap();
        assert!(truncated);
        assert!(cands.contains(&long));
        assert!(cands.contains(&"ü".repeat(9)));
        map.overflow = Overflow::Fail;
        assert_eq!(
            map.expand(&long).unwrap_err(),
            FuzzyError::ExpansionOverflow {
                limit: 8,
                occurrences: 9
            }
        );
    }
}
