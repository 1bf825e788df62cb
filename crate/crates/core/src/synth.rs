//! Deterministic generator for German-like lexicons.
//!
//! Stems are invented from syllables, then inflected with the regular weak
//! verb, adjective and noun patterns. The output is used for fixtures,
//! benchmarks and tests that need realistic suffix sharing at scale.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dictfmt::{AnalysisRecord, DictEntry, Paradigm};

/// Adjective endings with the readings each one carries, in the feature
/// order `degree,gender,case,number,declension`.
pub const ADJ_ENDINGS: &[(&str, &[&str])] = &[
    ("em", &["masc,dat,sing,strong", "neut,dat,sing,strong"]),
    (
        "er",
        &[
            "masc,nom,sing,strong",
            "fem,dat,sing,strong",
            "fem,gen,sing,strong",
            "gen,plu,strong",
            "masc,nom,sing,mixed",
        ],
    ),
    (
        "es",
        &[
            "neut,nom,sing,strong",
            "neut,acc,sing,strong",
            "neut,nom,sing,mixed",
            "neut,acc,sing,mixed",
        ],
    ),
    (
        "en",
        &[
            "masc,acc,sing,strong",
            "masc,gen,sing,strong",
            "neut,gen,sing,strong",
            "dat,plu,strong",
            "masc,acc,sing,weak",
            "masc,dat,sing,weak",
            "masc,gen,sing,weak",
            "fem,dat,sing,weak",
            "fem,gen,sing,weak",
            "neut,dat,sing,weak",
            "neut,gen,sing,weak",
            "nom,plu,weak",
            "acc,plu,weak",
            "dat,plu,weak",
            "gen,plu,weak",
            "masc,acc,sing,mixed",
            "masc,dat,sing,mixed",
            "masc,gen,sing,mixed",
            "fem,dat,sing,mixed",
            "fem,gen,sing,mixed",
            "neut,dat,sing,mixed",
            "neut,gen,sing,mixed",
            "nom,plu,mixed",
            "acc,plu,mixed",
            "dat,plu,mixed",
            "gen,plu,mixed",
        ],
    ),
    (
        "e",
        &[
            "fem,nom,sing,strong",
            "fem,acc,sing,strong",
            "nom,plu,strong",
            "acc,plu,strong",
            "masc,nom,sing,weak",
            "fem,nom,sing,weak",
            "fem,acc,sing,weak",
            "neut,nom,sing,weak",
            "neut,acc,sing,weak",
            "fem,nom,sing,mixed",
            "fem,acc,sing,mixed",
        ],
    ),
];

const ONSETS: &[&str] = &[
    "b", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r", "s", "t", "w", "z", "br", "dr", "fl",
    "fr", "gl", "gr", "kl", "kn", "kr", "pl", "pr", "schl", "schm", "schn", "schw", "sp", "spr",
    "st", "str", "tr", "zw",
];
const VOWELS: &[&str] = &[
    "a", "e", "i", "o", "u", "au", "ei", "ie", "eu", "ä", "ö", "ü",
];
const CODAS: &[&str] = &[
    "b", "ch", "ck", "f", "g", "k", "l", "lk", "ll", "lm", "m", "mm", "mp", "n", "nk", "p", "r",
    "rb", "rk", "rm", "s", "sch", "ss", "t", "tz", "nd", "ft", "ß",
];
const INSEPARABLE: &[&str] = &["be", "ver", "er", "zer", "ent"];
const SEPARABLE: &[&str] = &[
    "an", "ab", "auf", "aus", "ein", "mit", "nach", "vor", "weg", "zurück",
];

/// How many lemmas of each kind to invent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexiconSpec {
    pub verbs: usize,
    pub adjectives: usize,
    pub nouns: usize,
    pub seed: u64,
}

impl LexiconSpec {
    pub fn new(seed: u64) -> Self {
        LexiconSpec {
            verbs: 60,
            adjectives: 30,
            nouns: 60,
            seed,
        }
    }
}

/// Accumulates readings per surface, keeping first-appearance order.
#[derive(Debug, Default)]
struct Forms {
    order: Vec<String>,
    readings: BTreeMap<String, Vec<AnalysisRecord>>,
}

impl Forms {
    fn add(&mut self, surface: &str, lemma: &str, category: &str, features: &[&str]) {
        for feats in features {
            let paradigm = Paradigm::new(category, feats.split(',').filter(|f| !f.is_empty()));
            self.push(surface, AnalysisRecord::new(lemma, paradigm));
        }
    }

    fn push(&mut self, surface: &str, record: AnalysisRecord) {
        let list = self.readings.entry(surface.to_owned()).or_insert_with(|| {
            self.order.push(surface.to_owned());
            Vec::new()
        });
        if !list.contains(&record) {
            list.push(record);
        }
    }

    fn len(&self) -> usize {
        self.order.len()
    }

    fn into_entries(mut self) -> Vec<DictEntry> {
        self.order
            .iter()
            .map(|s| DictEntry::new(s.clone(), self.readings.remove(s).unwrap_or_default()))
            .collect()
    }
}

struct Stems {
    rng: ChaCha8Rng,
    used: HashSet<String>,
}

impl Stems {
    fn next(&mut self, syllables: usize) -> String {
        loop {
            let mut s = String::new();
            for i in 0..syllables {
                s.push_str(ONSETS.choose(&mut self.rng).unwrap());
                s.push_str(VOWELS.choose(&mut self.rng).unwrap());
                if i + 1 == syllables || self.rng.gen_bool(0.3) {
                    s.push_str(CODAS.choose(&mut self.rng).unwrap());
                }
            }
            if self.used.insert(s.clone()) {
                return s;
            }
        }
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(first) => first.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn adj_features(degree: &str) -> Vec<(&'static str, Vec<String>)> {
    ADJ_ENDINGS
        .iter()
        .map(|(ending, sets)| {
            (
                *ending,
                sets.iter().map(|f| format!("{degree},{f}")).collect(),
            )
        })
        .collect()
}

fn add_declined(forms: &mut Forms, base: &str, lemma: &str) {
    for (ending, sets) in adj_features("pos") {
        let feats: Vec<&str> = sets.iter().map(String::as_str).collect();
        forms.add(&format!("{base}{ending}"), lemma, "ADJ", &feats);
    }
}

#[derive(Debug, Clone, Copy)]
enum VerbPrefix<'a> {
    None,
    Inseparable(&'a str),
    Separable(&'a str),
}

/// All forms of a weak verb with stem `stem` (no infinitive ending).
fn add_weak_verb(forms: &mut Forms, stem: &str, prefix: VerbPrefix<'_>, ieren: bool) {
    let stem = if ieren {
        format!("{stem}ier")
    } else {
        stem.to_owned()
    };
    let (pre, ge) = match prefix {
        VerbPrefix::None if ieren => ("", ""),
        VerbPrefix::None => ("", "ge"),
        VerbPrefix::Inseparable(p) => (p, ""),
        VerbPrefix::Separable(p) => (p, "ge"),
    };
    let s = format!("{pre}{stem}");
    let lemma = format!("{s}en");
    let e = if stem.ends_with('t') || stem.ends_with('d') {
        "e"
    } else {
        ""
    };
    let sibilant = ["s", "ß", "z", "x", "sch"]
        .iter()
        .any(|x| stem.ends_with(x));
    let v = |forms: &mut Forms, surface: String, feats: &[&str]| {
        forms.add(&surface, &lemma, "V", feats);
    };

    v(
        forms,
        format!("{s}e"),
        &[
            "1per,sing,pres,ind",
            "1per,sing,pres,subj",
            "3per,sing,pres,subj",
        ],
    );
    if e.is_empty() && sibilant {
        v(forms, format!("{s}t"), &["2per,sing,pres,ind"]);
    } else {
        v(forms, format!("{s}{e}st"), &["2per,sing,pres,ind"]);
    }
    v(forms, format!("{s}est"), &["2per,sing,pres,subj"]);
    v(
        forms,
        format!("{s}{e}t"),
        &["3per,sing,pres,ind", "2per,plu,pres,ind"],
    );
    v(forms, format!("{s}et"), &["2per,plu,pres,subj"]);
    v(
        forms,
        format!("{s}en"),
        &[
            "inf",
            "1per,plu,pres,ind",
            "3per,plu,pres,ind",
            "1per,plu,pres,subj",
            "3per,plu,pres,subj",
        ],
    );
    v(
        forms,
        format!("{s}{e}te"),
        &[
            "1per,sing,past,ind",
            "3per,sing,past,ind",
            "1per,sing,past,subj",
            "3per,sing,past,subj",
        ],
    );
    v(
        forms,
        format!("{s}{e}test"),
        &["2per,sing,past,ind", "2per,sing,past,subj"],
    );
    v(
        forms,
        format!("{s}{e}ten"),
        &[
            "1per,plu,past,ind",
            "3per,plu,past,ind",
            "1per,plu,past,subj",
            "3per,plu,past,subj",
        ],
    );
    v(
        forms,
        format!("{s}{e}tet"),
        &["2per,plu,past,ind", "2per,plu,past,subj"],
    );
    if let VerbPrefix::Separable(p) = prefix {
        v(forms, format!("{p}zu{stem}en"), &["inf,zu"]);
    }

    let participle = format!("{pre}{ge}{stem}{e}t");
    v(forms, participle.clone(), &["ppast"]);
    forms.add(
        &participle,
        &participle,
        "ADJ",
        &["pos,<pred>", "pos,<adv>"],
    );
    add_declined(forms, &participle, &participle);

    let present = format!("{s}end");
    v(forms, present.clone(), &["ppres"]);
    add_declined(forms, &present, &present);
}

fn add_adjective(forms: &mut Forms, stem: &str) {
    forms.add(stem, stem, "ADJ", &["pos,<pred>", "pos,<adv>"]);
    add_declined(forms, stem, stem);
}

fn add_ung_noun(forms: &mut Forms, verb_stem: &str) {
    let lemma = capitalize(&format!("{verb_stem}ung"));
    forms.add(
        &lemma,
        &lemma,
        "NN",
        &[
            "fem,nom,sing",
            "fem,acc,sing",
            "fem,dat,sing",
            "fem,gen,sing",
        ],
    );
    forms.add(
        &format!("{lemma}en"),
        &lemma,
        "NN",
        &["fem,nom,plu", "fem,acc,plu", "fem,dat,plu", "fem,gen,plu"],
    );
}

fn add_strong_noun(forms: &mut Forms, stem: &str, gender: &str) {
    let lemma = capitalize(stem);
    let f = |rest: &str| format!("{gender},{rest}");
    forms.add(
        &lemma,
        &lemma,
        "NN",
        &[&f("nom,sing"), &f("acc,sing"), &f("dat,sing")],
    );
    forms.add(&format!("{lemma}es"), &lemma, "NN", &[&f("gen,sing")]);
    forms.add(
        &format!("{lemma}e"),
        &lemma,
        "NN",
        &[&f("nom,plu"), &f("acc,plu"), &f("gen,plu")],
    );
    forms.add(&format!("{lemma}en"), &lemma, "NN", &[&f("dat,plu")]);
}

/// Entries in generation order; readings of colliding surfaces merged.
pub fn lexicon(spec: &LexiconSpec) -> Vec<DictEntry> {
    generate(spec, usize::MAX)
}

/// A lexicon with exactly `forms` surfaces (word forms).
pub fn lexicon_with_forms(forms: usize, seed: u64) -> Vec<DictEntry> {
    let spec = LexiconSpec {
        verbs: usize::MAX,
        adjectives: usize::MAX,
        nouns: usize::MAX,
        seed,
    };
    let mut entries = generate(&spec, forms);
    entries.truncate(forms);
    entries
}

fn generate(spec: &LexiconSpec, limit: usize) -> Vec<DictEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut stems = Stems {
        rng: ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5eed),
        used: HashSet::new(),
    };
    let mut forms = Forms::default();
    let most = spec.verbs.max(spec.adjectives).max(spec.nouns);
    for i in 0..most {
        if forms.len() >= limit {
            break;
        }
        if i < spec.verbs {
            let stem = stems.next(rng.gen_range(1..=2));
            let roll: f64 = rng.gen();
            let ieren = roll < 0.1;
            let prefix = if roll < 0.1 {
                VerbPrefix::None
            } else if roll < 0.25 {
                VerbPrefix::Inseparable(INSEPARABLE.choose(&mut rng).unwrap())
            } else if roll < 0.4 {
                VerbPrefix::Separable(SEPARABLE.choose(&mut rng).unwrap())
            } else {
                VerbPrefix::None
            };
            add_weak_verb(&mut forms, &stem, prefix, ieren);
            if rng.gen_bool(0.3) {
                add_ung_noun(&mut forms, &stem);
            }
        }
        if i < spec.adjectives {
            let stem = stems.next(rng.gen_range(1..=2));
            add_adjective(&mut forms, &stem);
        }
        if i < spec.nouns {
            let stem = stems.next(rng.gen_range(1..=2));
            let gender = if rng.gen_bool(0.5) { "masc" } else { "neut" };
            add_strong_noun(&mut forms, &stem, gender);
        }
    }
    forms.into_entries()
}

/// Replaces umlauts and ß by their ASCII spellings, picking per occurrence
/// between the bare vowel and the `e` digraph.
fn deumlaut(word: &str, rng: &mut ChaCha8Rng) -> String {
    let mut out = String::with_capacity(word.len() + 2);
    for c in word.chars() {
        let (bare, digraph) = match c {
            'ä' => ("a", "ae"),
            'ö' => ("o", "oe"),
            'ü' => ("u", "ue"),
            'ß' => ("ss", "ss"),
            _ => {
                out.push(c);
                continue;
            }
        };
        out.push_str(if rng.gen_bool(0.5) { bare } else { digraph });
    }
    out
}

/// A query list of `n` words: about 60% dictionary surfaces, 20% ASCII
/// spellings of umlaut words (resolved by fuzzy lookup, or dictionary
/// surfaces again when the lexicon has none), and 20% invented words
/// carrying productive endings.
pub fn mixed_queries(entries: &[DictEntry], n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let surfaces: Vec<&str> = entries.iter().map(|e| e.surface.as_str()).collect();
    let umlauted: Vec<&str> = surfaces
        .iter()
        .copied()
        .filter(|s| s.chars().any(|c| "äöüß".contains(c)))
        .collect();
    let known: HashSet<&str> = surfaces.iter().copied().collect();
    let mut stems = Stems {
        rng: ChaCha8Rng::seed_from_u64(seed ^ 0x00f),
        used: HashSet::new(),
    };
    let endings = ["test", "tet", "ten", "endem", "ung", "en", "te", "t"];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let roll: f64 = rng.gen();
        if surfaces.is_empty() || roll >= 0.8 {
            let word = format!("{}{}", stems.next(2), endings.choose(&mut rng).unwrap());
            if !known.contains(word.as_str()) {
                out.push(word);
            }
        } else if roll >= 0.6 && !umlauted.is_empty() {
            let word = umlauted.choose(&mut rng).unwrap();
            out.push(deumlaut(word, &mut rng));
        } else {
            out.push(surfaces.choose(&mut rng).unwrap().to_string());
        }
    }
    out
}
