use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use morphkit::cache::{CacheConfig, CachedAnalyzer};
use morphkit::dictfmt::{parse_text_dictionary, ParseMode};
use morphkit::{Analysis, AnalyzeError, Analyzer, CompiledDictionary, Tagset};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{
    AnalyzerOptions, BenchArgs, CacheSize, CompileArgs, Format, QueryArgs, StatsArgs, TagsArgs,
};
use crate::error::CliError;
use crate::output;

pub const DICT_ENV: &str = "MORPHKIT_DICT";

/// Picks the dictionary path: `--dict`, else the first positional if it is
/// an existing file (or carries the `.demd` extension) and at least `keep`
/// positionals remain after it, else the environment.
fn resolve_dict(
    flag: Option<PathBuf>,
    args: &mut Vec<String>,
    keep: usize,
) -> Result<PathBuf, CliError> {
    if let Some(path) = flag {
        return Ok(path);
    }
    let looks_like_dict = |a: &str| {
        let p = Path::new(a);
        p.is_file() || p.extension().is_some_and(|e| e == "demd")
    };
    if args.len() > keep && looks_like_dict(&args[0]) {
        return Ok(PathBuf::from(args.remove(0)));
    }
    match std::env::var_os(DICT_ENV) {
        Some(v) if !v.is_empty() => Ok(PathBuf::from(v)),
        _ => Err(CliError::Usage(format!(
            "no dictionary given: pass --dict PATH, a dictionary path, or set {DICT_ENV}"
        ))),
    }
}

fn load_dict(path: &Path) -> Result<CompiledDictionary, CliError> {
    CompiledDictionary::load(path).map_err(|e| CliError::dict(path, e))
}

enum Engine {
    Plain(Analyzer),
    Cached(CachedAnalyzer),
}

impl Engine {
    fn build(opts: &AnalyzerOptions, dict_path: &Path) -> Result<Engine, CliError> {
        let mut builder = Analyzer::builder(load_dict(dict_path)?)
            .fuzzy(!opts.no_fuzzy)
            .guesser(!opts.no_guesser);
        if let Some(path) = &opts.experimental {
            builder = builder.experimental(load_dict(path)?);
        }
        let analyzer = builder.build()?;
        let config = match opts.cache {
            _ if opts.no_cache => None,
            CacheSize::Entries(0) => None,
            CacheSize::Entries(capacity) => Some(CacheConfig::Lru { capacity }),
            CacheSize::Unlimited => Some(CacheConfig::Unlimited),
        };
        Ok(match config {
            Some(c) => Engine::Cached(CachedAnalyzer::new(analyzer, c)),
            None => Engine::Plain(analyzer),
        })
    }

    fn analyze(&self, word: &str) -> Result<Vec<Analysis>, AnalyzeError> {
        match self {
            Engine::Plain(a) => a.analyze(word),
            Engine::Cached(c) => c.analyze(word),
        }
    }

    fn lemmatize(&self, word: &str) -> Result<BTreeSet<String>, AnalyzeError> {
        match self {
            Engine::Plain(a) => a.lemmatize(word),
            Engine::Cached(c) => c.lemmatize(word),
        }
    }

    fn tags(&self, word: &str, tagset: Tagset) -> Result<BTreeSet<String>, AnalyzeError> {
        match self {
            Engine::Plain(a) => a.tags(word, tagset),
            Engine::Cached(c) => c.tags(word, tagset),
        }
    }

    fn reset(&self) {
        if let Engine::Cached(c) = self {
            c.clear();
        }
    }

    fn hit_rate(&self) -> Option<f64> {
        match self {
            Engine::Plain(_) => None,
            Engine::Cached(c) => Some(c.stats().hit_rate()),
        }
    }
}

type Render<'a> = dyn Fn(&Engine, &str, &mut String) -> Result<(), CliError> + Sync + 'a;

fn run_query(mut args: QueryArgs, render: &Render<'_>) -> Result<(), CliError> {
    let dict_path = resolve_dict(args.analyzer.dict.take(), &mut args.args, 0)?;
    let engine = Engine::build(&args.analyzer, &dict_path)?;
    let started = Instant::now();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut buf = String::new();
    let mut count = 0usize;

    if args.parallel {
        let words: Vec<String> = if args.args.is_empty() {
            let mut all = Vec::new();
            for line in io::stdin().lock().lines() {
                let line = line.map_err(|e| CliError::Io(format!("<stdin>: {e}")))?;
                all.extend(line.split_whitespace().map(str::to_owned));
            }
            all
        } else {
            args.args
        };
        count = words.len();
        // rayon's collect keeps input order
        let blocks: Vec<Result<String, CliError>> = words
            .par_iter()
            .map(|w| {
                let mut s = String::new();
                render(&engine, w, &mut s).map(|_| s)
            })
            .collect();
        for block in blocks {
            out.write_all(block?.as_bytes())?;
        }
    } else if args.args.is_empty() {
        for line in io::stdin().lock().lines() {
            let line = line.map_err(|e| CliError::Io(format!("<stdin>: {e}")))?;
            for word in line.split_whitespace() {
                buf.clear();
                render(&engine, word, &mut buf)?;
                out.write_all(buf.as_bytes())?;
                count += 1;
            }
        }
    } else {
        for word in &args.args {
            for token in word.split_whitespace() {
                buf.clear();
                render(&engine, token, &mut buf)?;
                out.write_all(buf.as_bytes())?;
                count += 1;
            }
        }
    }
    out.flush()?;
    if args.timing {
        let secs = started.elapsed().as_secs_f64();
        eprintln!(
            "{count} tokens in {secs:.3} s ({:.0} words/s)",
            count as f64 / secs.max(1e-9)
        );
    }
    Ok(())
}

pub fn analyze(args: QueryArgs) -> Result<(), CliError> {
    let format = args.format;
    run_query(args, &move |engine, word, out| {
        let analyses = engine.analyze(word)?;
        match format {
            Format::Tsv => output::analyses_tsv(word, &analyses, out),
            Format::Jsonl => output::analyses_json(word, &analyses, out),
        }
        Ok(())
    })
}

pub fn lemmatize(args: QueryArgs) -> Result<(), CliError> {
    let format = args.format;
    run_query(args, &move |engine, word, out| {
        let lemmas = engine.lemmatize(word)?;
        match format {
            Format::Tsv => output::list_tsv(word, &lemmas, out),
            Format::Jsonl => output::lemmas_json(word, &lemmas, out),
        }
        Ok(())
    })
}

pub fn tags(args: TagsArgs) -> Result<(), CliError> {
    let format = args.query.format;
    let tagset = args.tagset;
    run_query(args.query, &move |engine, word, out| {
        let tags = engine.tags(word, tagset)?;
        match format {
            Format::Tsv => output::list_tsv(word, &tags, out),
            Format::Jsonl => output::tags_json(word, &tags, out),
        }
        Ok(())
    })
}

fn compile_one(
    input: &Path,
    output: &Path,
    mode: ParseMode,
) -> Result<CompiledDictionary, CliError> {
    let file = File::open(input).map_err(|e| CliError::io(input, e))?;
    let parsed =
        parse_text_dictionary(BufReader::new(file), mode).map_err(|e| CliError::parse(input, e))?;
    for w in &parsed.warnings {
        eprintln!("{}:{}: warning: {}", input.display(), w.line, w.message);
    }
    let dict = CompiledDictionary::compile(&parsed.entries)
        .map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
    dict.save(output).map_err(|e| CliError::dict(output, e))?;
    Ok(dict)
}

fn experimental_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match output.extension() {
        Some(ext) => format!("{stem}.experimental.{}", ext.to_string_lossy()),
        None => format!("{stem}.experimental"),
    };
    output.with_file_name(name)
}

fn stats_fields(dict: &CompiledDictionary) -> Vec<(&'static str, u64)> {
    let s = dict.stats();
    vec![
        ("entry_count", s.entry_count),
        ("surface_count", s.surface_count),
        ("lemma_count", s.lemma_count),
        ("paradigm_count", s.paradigm_count),
        ("state_count", dict.automaton().state_count() as u64),
        ("edge_count", dict.automaton().edge_count() as u64),
    ]
}

fn print_fields(fields: &[(String, u64)], format: Format) -> Result<(), CliError> {
    let mut text = String::new();
    match format {
        Format::Tsv => {
            for (k, v) in fields {
                text.push_str(&format!("{k}\t{v}\n"));
            }
        }
        Format::Jsonl => {
            let mut obj = serde_json::Map::new();
            obj.insert("v".into(), json!(output::JSON_VERSION));
            for (k, v) in fields {
                obj.insert(k.clone(), json!(v));
            }
            output::push_json(&obj, &mut text);
        }
    }
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn compile(args: CompileArgs) -> Result<(), CliError> {
    let mode = if args.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    };
    let dict = compile_one(&args.input, &args.output, mode)?;
    let mut fields: Vec<(String, u64)> = stats_fields(&dict)
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
    if let Some(exp_input) = &args.experimental {
        let exp_output = args
            .experimental_output
            .clone()
            .unwrap_or_else(|| experimental_path(&args.output));
        let exp = compile_one(exp_input, &exp_output, mode)?;
        fields.extend(
            stats_fields(&exp)
                .into_iter()
                .map(|(k, v)| (format!("experimental_{k}"), v)),
        );
    }
    print_fields(&fields, args.format)
}

pub fn stats(mut args: StatsArgs) -> Result<(), CliError> {
    let path = resolve_dict(args.dict.take(), &mut args.args, 0)?;
    if !args.args.is_empty() {
        return Err(CliError::Usage(format!(
            "unexpected argument {:?}",
            args.args[0]
        )));
    }
    let dict = load_dict(&path)?;
    let mut fields: Vec<(String, u64)> = stats_fields(&dict)
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
    let bytes = std::fs::metadata(&path)
        .map_err(|e| CliError::io(&path, e))?
        .len();
    fields.push(("file_bytes".into(), bytes));
    print_fields(&fields, args.format)
}

/// Peak resident set size in KiB, where the platform reports it.
fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

pub fn bench(mut args: BenchArgs) -> Result<(), CliError> {
    let dict_path = resolve_dict(args.analyzer.dict.take(), &mut args.args, 1)?;
    if args.args.len() != 1 {
        return Err(CliError::Usage("bench expects [DICT] WORDLIST".to_owned()));
    }
    let list_path = PathBuf::from(&args.args[0]);
    let engine = Engine::build(&args.analyzer, &dict_path)?;
    let text = std::fs::read_to_string(&list_path).map_err(|e| CliError::io(&list_path, e))?;
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.is_empty() {
        return Err(CliError::Data(format!(
            "{}: word list is empty",
            list_path.display()
        )));
    }

    let mut rates = Vec::with_capacity(args.reps as usize);
    let mut analyses = 0usize;
    for rep in 0..args.reps {
        engine.reset();
        let mut produced = 0usize;
        let started = Instant::now();
        for w in &words {
            produced += engine.analyze(w)?.len();
        }
        let secs = started.elapsed().as_secs_f64();
        rates.push(words.len() as f64 / secs.max(1e-9));
        if rep == 0 {
            analyses = produced;
        }
    }
    rates.sort_by(f64::total_cmp);
    let median = if rates.len() % 2 == 1 {
        rates[rates.len() / 2]
    } else {
        (rates[rates.len() / 2 - 1] + rates[rates.len() / 2]) / 2.0
    };

    let mut out = io::stdout().lock();
    writeln!(out, "words\t{}", words.len())?;
    writeln!(out, "reps\t{}", args.reps)?;
    writeln!(out, "analyses\t{analyses}")?;
    out.flush()?;
    // timing varies run to run, so it goes to stderr
    eprintln!("words_per_sec\t{median:.0}");
    if let Some(rate) = engine.hit_rate() {
        eprintln!("cache_hit_rate\t{rate:.4}");
    }
    if let Some(kib) = peak_rss_kib() {
        eprintln!("peak_rss_kib\t{kib}");
    }
    Ok(())
}
