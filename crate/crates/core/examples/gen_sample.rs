//! Writes a generated lexicon in text form and a mixed query list.
//!
//!     cargo run -p morphkit --example gen_sample -- OUT_DIR [FORMS] [QUERIES] [SEED]

use std::fs;
use std::path::PathBuf;

use morphkit::dictfmt::render_entries;
use morphkit::synth::{lexicon_with_forms, mixed_queries};

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    let mut num = |default: u64| -> u64 {
        args.next()
            .map(|a| a.parse().expect("numeric argument"))
            .unwrap_or(default)
    };
    let forms = num(50_000) as usize;
    let queries = num(10_000) as usize;
    let seed = num(42);

    let entries = lexicon_with_forms(forms, seed);
    fs::create_dir_all(&dir).expect("create output directory");
    fs::write(dir.join("sample.dict"), render_entries(&entries)).expect("write sample.dict");
    let words = mixed_queries(&entries, queries, seed + 1);
    fs::write(dir.join("words.txt"), words.join("\n") + "\n").expect("write words.txt");
    println!(
        "{} surfaces -> {}, {} queries -> {}",
        entries.len(),
        dir.join("sample.dict").display(),
        words.len(),
        dir.join("words.txt").display()
    );
}
