use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morphkit::Tagset;

/// German morphological analysis over compiled dictionaries.
///
/// Commands that read a dictionary take it from --dict, else from the first
/// positional argument when that names an existing file, else from the
/// MORPHKIT_DICT environment variable.
#[derive(Debug, Parser)]
#[command(name = "morphkit", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a text dictionary into the binary format
    Compile(CompileArgs),
    /// Print every analysis of each word
    Analyze(QueryArgs),
    /// Print the distinct lemmas of each word
    Lemmatize(QueryArgs),
    /// Print the part-of-speech tags of each word
    Tags(TagsArgs),
    /// Print the statistics stored in a compiled dictionary
    Stats(StatsArgs),
    /// Measure analysis throughput over a word list
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// Text dictionary to read
    pub input: PathBuf,
    /// Binary dictionary to write
    pub output: PathBuf,
    /// Reject the whole input on the first malformed line (default)
    #[arg(long, conflicts_with = "lenient")]
    pub strict: bool,
    /// Skip malformed entries with a warning instead of failing
    #[arg(long)]
    pub lenient: bool,
    /// Also compile this text dictionary of experimental entries
    #[arg(long, value_name = "TEXT")]
    pub experimental: Option<PathBuf>,
    /// Where to write the compiled experimental dictionary
    /// [default: OUTPUT with `.experimental` before the extension]
    #[arg(long, value_name = "PATH", requires = "experimental")]
    pub experimental_output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    #[value(name = "jsonl", alias = "json-lines")]
    Jsonl,
}

#[derive(Debug, Args)]
pub struct AnalyzerOptions {
    /// Compiled dictionary
    #[arg(long, value_name = "PATH")]
    pub dict: Option<PathBuf>,
    /// Compiled experimental dictionary consulted after the main one
    #[arg(long, value_name = "PATH")]
    pub experimental: Option<PathBuf>,
    /// Disable umlaut-tolerant lookup
    #[arg(long)]
    pub no_fuzzy: bool,
    /// Disable the suffix guesser for unknown words
    #[arg(long)]
    pub no_guesser: bool,
    /// Result cache size: a number of entries, or `unlimited`
    #[arg(long, value_name = "N", default_value = "8192")]
    pub cache: CacheSize,
    /// Disable the result cache
    #[arg(long, conflicts_with = "cache")]
    pub no_cache: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheSize {
    Entries(usize),
    Unlimited,
}

impl std::str::FromStr for CacheSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("unlimited") {
            return Ok(CacheSize::Unlimited);
        }
        s.parse()
            .map(CacheSize::Entries)
            .map_err(|_| format!("expected a number of entries or `unlimited`, got {s:?}"))
    }
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub analyzer: AnalyzerOptions,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Analyze tokens on several threads; output order is unchanged
    #[arg(long)]
    pub parallel: bool,
    /// Report elapsed time on stderr
    #[arg(long)]
    pub timing: bool,
    /// [DICT] followed by words; words are read from stdin when none are given
    #[arg(value_name = "ARGS")]
    pub args: Vec<String>,
}

#[derive(Debug, Args)]
pub struct TagsArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    #[arg(long, value_parser = parse_tagset, default_value = "stts")]
    pub tagset: Tagset,
}

fn parse_tagset(s: &str) -> Result<Tagset, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long, value_name = "PATH")]
    pub dict: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// [DICT]
    #[arg(value_name = "ARGS")]
    pub args: Vec<String>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub analyzer: AnalyzerOptions,
    /// Timed passes over the word list; the median is reported
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,
    /// [DICT] WORDLIST
    #[arg(value_name = "ARGS", required = true)]
    pub args: Vec<String>,
}
