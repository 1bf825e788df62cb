use std::collections::BTreeSet;

use morphkit::analyzer::Stage;
use morphkit::cache::{CacheConfig, CachedAnalyzer};
use morphkit::dictfmt::{parse_str, ParseMode};
use morphkit::{AnalyzeError, Analyzer, CompiledDictionary, Source, Tagset};
use proptest::prelude::*;

fn compile(text: &str) -> CompiledDictionary {
    let entries = parse_str(text, ParseMode::Strict).unwrap().entries;
    CompiledDictionary::compile(&entries).unwrap()
}

fn toy() -> Analyzer {
    Analyzer::new(compile(include_str!("../data/toy.dict"))).unwrap()
}

fn rendered(a: &Analyzer, word: &str) -> Vec<String> {
    a.analyze(word)
        .unwrap()
        .iter()
        .map(|x| x.record.to_string())
        .collect()
}

#[test]
fn worked_examples() {
    let a = toy();
    assert_eq!(
        rendered(&a, "gegangen"),
        [
            "gegangen ADJ,pos,<pred>",
            "gegangen ADJ,pos,<adv>",
            "gehen V,ppast"
        ]
    );
    assert_eq!(
        rendered(&a, "Rohrohrzucker"),
        [
            "Rohrohrzucker NN,masc,acc,plu",
            "Rohrohrzucker NN,masc,acc,sing",
            "Rohrohrzucker NN,masc,nom,sing",
            "Rohrohrzucker NN,masc,gen,plu",
            "Rohrohrzucker NN,masc,dat,sing",
            "Rohrohrzucker NN,masc,nom,plu",
        ]
    );
}

#[test]
fn umlaut_tolerance() {
    let a = toy();
    let grun = a.analyze("grun").unwrap();
    assert_eq!(
        grun.iter()
            .map(|x| x.record.to_string())
            .collect::<Vec<_>>(),
        rendered(&a, "grün")
    );
    assert!(grun.iter().all(|x| x.matched_surface == "grün"));
    assert_eq!(rendered(&a, "gruen"), rendered(&a, "grün"));
    assert_eq!(rendered(&a, "Strasse"), rendered(&a, "Straße"));
    assert_eq!(rendered(&a, "Fuesse"), rendered(&a, "Füße"));
    let (_, trace) = a.analyze_traced("Strasse").unwrap();
    assert_eq!(trace.productive, Some(Stage::Fuzzy));
}

#[test]
fn exact_match_wins_over_variants() {
    let a = toy();
    // "Grün" and "grün" are both stored; each query gets only its own
    let upper = a.analyze("Grün").unwrap();
    assert!(upper.iter().all(|x| x.matched_surface == "Grün"));
    let lower = a.analyze("grün").unwrap();
    assert!(lower.iter().all(|x| x.matched_surface == "grün"));
}

#[test]
fn case_variants() {
    let a = toy();
    let (r, trace) = a.analyze_traced("Gegangen").unwrap();
    assert_eq!(trace.productive, Some(Stage::CaseVariant));
    assert_eq!(r.len(), 3);
    let (r, _) = a.analyze_traced("HAUS").unwrap();
    assert!(r.is_empty() || r[0].source == Source::Guesser);
    let (r, trace) = a.analyze_traced("ÜBER").unwrap();
    assert_eq!(trace.productive, Some(Stage::CaseVariant));
    assert_eq!(r[0].record.lemma, "über");
}

#[test]
fn hyphenated_words() {
    let a = toy();
    assert_eq!(
        a.lemmatize("U-Bahn").unwrap(),
        BTreeSet::from(["U-(TRUNC)Bahn".to_string()])
    );
    assert_eq!(
        a.lemmatize("U-Bahn-Station").unwrap(),
        BTreeSet::from(["U-(TRUNC)Bahn-(TRUNC)Station".to_string()])
    );
    let r = a.analyze("S-Bahn").unwrap();
    assert_eq!(r[0].record.lemma, "S-(TRUNC)Bahn");
    assert_eq!(r[0].matched_surface, "S-Bahn");
    // final segment through the case and fuzzy stages
    assert_eq!(
        a.lemmatize("Bus-strasse").unwrap(),
        BTreeSet::from(["Bus-(TRUNC)Straße".to_string()])
    );
    for bad in ["-Bahn", "U-", "U--Bahn"] {
        let (r, trace) = a.analyze_traced(bad).unwrap();
        assert!(trace.productive != Some(Stage::Hyphen), "{bad}: {r:?}");
    }
}

#[test]
fn tokens_short_circuit() {
    let a = toy();
    let (r, trace) = a.analyze_traced("24.12.2016").unwrap();
    assert_eq!(trace.dictionary_lookups, 0);
    assert_eq!(trace.productive, Some(Stage::Token));
    assert_eq!(r[0].record.to_string(), "2016-12-24 DATE");
    assert_eq!(r[0].source, Source::TokenClass);
    let (_, trace) = a.analyze_traced("Haus").unwrap();
    assert!(trace.dictionary_lookups > 0);
    assert_eq!(
        a.tags_stts("anna@example.de").unwrap(),
        BTreeSet::from(["XY".to_string()])
    );
}

#[test]
fn guesser_fallback() {
    let a = toy();
    let r = a.analyze("brunztest").unwrap();
    assert_eq!(r[0].source, Source::Guesser);
    assert_eq!(r[0].record.to_string(), "brunzen V,2per,sing,past,ind");
    let off = Analyzer::builder(compile(include_str!("../data/toy.dict")))
        .guesser(false)
        .build()
        .unwrap();
    assert!(off.analyze("brunztest").unwrap().is_empty());
    let no_fuzzy = Analyzer::builder(compile(include_str!("../data/toy.dict")))
        .fuzzy(false)
        .guesser(false)
        .build()
        .unwrap();
    assert!(no_fuzzy.analyze("grun").unwrap().is_empty());
}

#[test]
fn tags_and_lemmas() {
    let a = toy();
    assert_eq!(
        a.tags("gegangen", Tagset::Stts).unwrap(),
        ["ADJA", "ADJD", "VVPP"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    );
    assert_eq!(
        a.tags_ptb("gegangen").unwrap(),
        ["JJ", "VBN"].iter().map(|s| s.to_string()).collect()
    );
    assert_eq!(
        a.lemmatize("gegangen").unwrap(),
        BTreeSet::from(["gegangen".to_string(), "gehen".to_string()])
    );
}

#[test]
fn experimental_dictionary() {
    let main = compile(include_str!("../data/toy.dict"));
    let extra =
        compile("Haus\nHaus NN,neut,nom,sing\nHaus NNP\n\nFlugtaxi\nFlugtaxi NN,neut,nom,sing\n");
    let a = Analyzer::builder(main).experimental(extra).build().unwrap();
    let r = a.analyze("Flugtaxi").unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].source, Source::Experimental);
    // main readings first; the reading both have is reported by each source
    let r = a.analyze("Haus").unwrap();
    assert_eq!(r[0].source, Source::Lexicon);
    assert_eq!(r.last().unwrap().record.to_string(), "Haus NNP");
    assert_eq!(r.last().unwrap().source, Source::Experimental);
}

#[test]
fn unmapped_category_is_rejected() {
    let dict = compile("foo\nfoo ZZZ\n");
    let err = Analyzer::new(dict).unwrap_err();
    assert!(err.to_string().contains("ZZZ"));
}

#[test]
fn invalid_input() {
    let a = toy();
    for bad in ["", "   ", "zwei Wörter"] {
        assert!(
            matches!(a.analyze(bad), Err(AnalyzeError::InvalidInput(_))),
            "{bad:?}"
        );
    }
    assert_eq!(rendered(&a, " Haus "), rendered(&a, "Haus"));
}

#[test]
fn lexicon_iteration() {
    let a = toy();
    let words: Vec<String> = a.iter_lexicon().collect();
    let mut sorted = words.clone();
    sorted.sort();
    assert_eq!(words, sorted);
    assert!(words.contains(&"U-Bahn".to_string()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cached_equals_uncached(words in prop::collection::vec(
        prop::sample::select(vec!["Haus", "grun", "gruen", "U-Bahn-Station", "flumpst", "3,5", "GEHEN", "xyz", "Straße", ""]),
        1..80,
    ), capacity in 0usize..6) {
        let plain = toy();
        let cached = CachedAnalyzer::new(toy(), CacheConfig::Lru { capacity });
        for w in &words {
            let expected = plain.analyze(w).map_err(|e| e.to_string());
            let got = cached.analyze(w).map_err(|e| e.to_string());
            prop_assert_eq!(got, expected);
            prop_assert!(cached.stats().current_size <= capacity);
        }
    }

    #[test]
    fn analyses_are_unique_and_nonempty_sources(word in "[a-zA-Zäöüß-]{1,12}") {
        let a = toy();
        let r = a.analyze(&word).unwrap();
        let set: std::collections::HashSet<_> = r.iter().map(|x| (x.source, x.record.clone())).collect();
        prop_assert_eq!(set.len(), r.len());
        let stages: std::collections::HashSet<_> = r.iter().map(|x| x.source == Source::Guesser).collect();
        prop_assert!(stages.len() <= 1, "mixed guesser and dictionary readings");
    }
}
