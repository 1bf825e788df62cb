//! Brute-force reference implementations for the automaton, shared by the
//! core property tests and the CLI acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use morphkit::dafsa::{Automaton, ReplacementMap};
use rand::seq::SliceRandom;
use rand::Rng;

pub const ALPHABET: &[char] = &['a', 'ä', 'e', 'n', 'o', 'ö', 's', 'ß', 't', 'u', 'ü'];

/// Up to `max_keys` distinct random words over [`ALPHABET`], byte-sorted.
pub fn random_lexicon<R: Rng>(rng: &mut R, max_keys: usize) -> Vec<String> {
    let n = rng.gen_range(0..=max_keys);
    let mut set = BTreeSet::new();
    for _ in 0..n {
        set.insert(random_word(rng, 8));
    }
    // BTreeSet<String> orders by bytes, which is what the builder wants
    set.into_iter().collect()
}

pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

/// Number of distinct non-empty right languages over all prefixes of the
/// keys, which is the state count of the minimal trimmed automaton. The
/// root is counted even for the empty language.
pub fn minimal_state_count(keys: &[String]) -> usize {
    let mut residuals: BTreeMap<Vec<u8>, BTreeSet<Vec<u8>>> = BTreeMap::new();
    for key in keys {
        let bytes = key.as_bytes();
        for cut in 0..=bytes.len() {
            residuals
                .entry(bytes[..cut].to_vec())
                .or_default()
                .insert(bytes[cut..].to_vec());
        }
    }
    let distinct: HashSet<BTreeSet<Vec<u8>>> = residuals.into_values().collect();
    distinct.len().max(1)
}

pub fn completions_oracle(keys: &[String], prefix: &[u8]) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = keys
        .iter()
        .map(|k| k.as_bytes().to_vec())
        .filter(|k| k.starts_with(prefix))
        .collect();
    out.sort();
    out
}

/// Every spelling reachable from `input`: first any set of non-overlapping
/// multi-rule rewrites, then any per-character alternative.
pub fn spelling_variants(input: &str, map: &ReplacementMap) -> BTreeSet<String> {
    let mut rewritten = BTreeSet::new();
    rewrite_from(input, 0, String::new(), map, &mut rewritten);
    let mut out = BTreeSet::new();
    for candidate in rewritten {
        let chars: Vec<char> = candidate.chars().collect();
        substitute(&chars, String::new(), map, &mut out);
    }
    out
}

fn rewrite_from(
    input: &str,
    pos: usize,
    acc: String,
    map: &ReplacementMap,
    out: &mut BTreeSet<String>,
) {
    if pos == input.len() {
        out.insert(acc);
        return;
    }
    let rest = &input[pos..];
    let c = rest.chars().next().unwrap();
    let mut keep = acc.clone();
    keep.push(c);
    rewrite_from(input, pos + c.len_utf8(), keep, map, out);
    for (pattern, replacement) in &map.multi {
        if rest.starts_with(pattern.as_str()) {
            let mut applied = acc.clone();
            applied.push_str(replacement);
            rewrite_from(input, pos + pattern.len(), applied, map, out);
        }
    }
}

fn substitute(rest: &[char], acc: String, map: &ReplacementMap, out: &mut BTreeSet<String>) {
    let Some((&c, tail)) = rest.split_first() else {
        out.insert(acc);
        return;
    };
    let mut options = vec![c];
    options.extend(map.single.get(&c).into_iter().flatten().copied());
    for o in options {
        let mut next = acc.clone();
        next.push(o);
        substitute(tail, next, map, out);
    }
}

pub fn fuzzy_oracle(keys: &HashSet<&str>, input: &str, map: &ReplacementMap) -> Vec<Vec<u8>> {
    spelling_variants(input, map)
        .into_iter()
        .filter(|v| keys.contains(v.as_str()))
        .map(String::into_bytes)
        .collect()
}

/// Counts multi-rule occurrences the way the expansion bound does.
pub fn rule_occurrences(input: &str, map: &ReplacementMap) -> usize {
    input
        .char_indices()
        .map(|(i, _)| {
            map.multi
                .iter()
                .filter(|(p, _)| input[i..].starts_with(p.as_str()))
                .count()
        })
        .sum()
}

/// Probe strings for a lexicon: the keys, their prefixes, ASCII-fied
/// spellings of keys, and random words.
pub fn probes<R: Rng>(rng: &mut R, keys: &[String], count: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        match rng.gen_range(0..4) {
            0 if !keys.is_empty() => out.push(keys.choose(rng).unwrap().clone()),
            1 if !keys.is_empty() => {
                let k: Vec<char> = keys.choose(rng).unwrap().chars().collect();
                let cut = rng.gen_range(0..=k.len());
                out.push(k[..cut].iter().collect());
            }
            2 if !keys.is_empty() => {
                let k = keys.choose(rng).unwrap();
                out.push(
                    k.replace('ü', "ue")
                        .replace('ö', "o")
                        .replace('ä', "a")
                        .replace('ß', "ss"),
                );
            }
            _ => out.push(random_word(rng, 8)),
        }
    }
    out
}

/// Checks one lexicon against every oracle; returns the first mismatch.
pub fn check_lexicon<R: Rng>(
    rng: &mut R,
    keys: &[String],
    probe_count: usize,
) -> Result<(), String> {
    let a = Automaton::build(keys).map_err(|e| format!("build failed: {e}"))?;
    let set: HashSet<&str> = keys.iter().map(String::as_str).collect();

    let expected_states = minimal_state_count(keys);
    if a.state_count() != expected_states {
        return Err(format!(
            "{} keys: {} states, minimal is {expected_states}",
            keys.len(),
            a.state_count()
        ));
    }
    let listed: Vec<Vec<u8>> = a.iter().collect();
    if listed != completions_oracle(keys, b"") {
        return Err("iteration differs from the sorted key list".into());
    }

    let map = ReplacementMap::german();
    for probe in probes(rng, keys, probe_count) {
        if a.contains(probe.as_bytes()) != set.contains(probe.as_str()) {
            return Err(format!("membership of {probe:?}"));
        }
        if a.completions(probe.as_bytes()) != completions_oracle(keys, probe.as_bytes()) {
            return Err(format!("completions of {probe:?}"));
        }
        let fuzzy = a
            .fuzzy_lookup(&probe, &map)
            .map_err(|e| format!("fuzzy {probe:?}: {e}"))?;
        let truncated = rule_occurrences(&probe, &map) > map.expansion_limit;
        if fuzzy.truncated != truncated {
            return Err(format!("truncation flag of {probe:?}"));
        }
        if !truncated {
            let got: Vec<Vec<u8>> = fuzzy.keys().map(<[u8]>::to_vec).collect();
            if got != fuzzy_oracle(&set, &probe, &map) {
                return Err(format!("fuzzy lookup of {probe:?}"));
            }
        }
    }
    Ok(())
}
