use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

const TOY: &str = include_str!("../../core/data/toy.dict");

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_morphkit"));
    c.env_remove("MORPHKIT_DICT");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("morphkit-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command, stdin: Option<&str>) -> Output {
    cmd.stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(input) = stdin {
        pipe.write_all(input.as_bytes()).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn compiled_toy(dir: &Path) -> PathBuf {
    let text = dir.join("toy.dict");
    std::fs::write(&text, TOY).unwrap();
    let out = dir.join("toy.demd");
    let o = run(bin().arg("compile").arg(&text).arg(&out), None);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

fn field(text: &str, key: &str) -> u64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn compile_reports_counts() {
    let dir = scratch("compile");
    let text = dir.join("toy.dict");
    std::fs::write(&text, TOY).unwrap();
    let o = run(
        bin().arg("compile").arg(&text).arg(dir.join("toy.demd")),
        None,
    );
    assert!(o.status.success());
    let report = stdout(&o);

    // counted straight from the text file
    let blocks: Vec<&str> = TOY.split("\n\n").filter(|b| !b.trim().is_empty()).collect();
    let readings: Vec<&str> = blocks.iter().flat_map(|b| b.lines().skip(1)).collect();
    let paradigms: BTreeSet<&str> = readings
        .iter()
        .map(|l| l.split(' ').nth(1).unwrap())
        .collect();
    let lemmas: BTreeSet<&str> = readings
        .iter()
        .map(|l| l.split(' ').next().unwrap())
        .collect();
    assert_eq!(field(&report, "paradigm_count"), paradigms.len() as u64);
    assert_eq!(field(&report, "lemma_count"), lemmas.len() as u64);
    assert_eq!(field(&report, "surface_count"), blocks.len() as u64);
    assert_eq!(field(&report, "entry_count"), readings.len() as u64);
}

#[test]
fn compile_empty_file() {
    let dir = scratch("empty");
    let text = dir.join("empty.dict");
    std::fs::write(&text, "").unwrap();
    let o = run(
        bin().arg("compile").arg(&text).arg(dir.join("e.demd")),
        None,
    );
    assert!(o.status.success());
    for key in [
        "entry_count",
        "surface_count",
        "lemma_count",
        "paradigm_count",
    ] {
        assert_eq!(field(&stdout(&o), key), 0);
    }
}

#[test]
fn strict_and_lenient_compile() {
    let dir = scratch("strict");
    let text = dir.join("bad.dict");
    std::fs::write(
        &text,
        "Haus\nHaus NN\n\nBaum\nBaum NN extra field\n\nZeit\nZeit NN\n",
    )
    .unwrap();
    let o = run(
        bin().arg("compile").arg(&text).arg(dir.join("b.demd")),
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.dict:5:"), "{}", stderr(&o));

    let o = run(
        bin()
            .args(["compile", "--lenient"])
            .arg(&text)
            .arg(dir.join("b.demd")),
        None,
    );
    assert!(o.status.success());
    assert!(stderr(&o).contains(":5:"));
    assert_eq!(field(&stdout(&o), "surface_count"), 2);
}

#[test]
fn experimental_compile_and_lookup() {
    let dir = scratch("exp");
    let toy = compiled_toy(&dir);
    let text = dir.join("toy.dict");
    let exp = dir.join("neu.dict");
    std::fs::write(&exp, "Flugtaxi\nFlugtaxi NN,neut,nom,sing\n").unwrap();
    let o = run(
        bin()
            .arg("compile")
            .arg(&text)
            .arg(&toy)
            .arg("--experimental")
            .arg(&exp),
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "experimental_surface_count"), 1);
    let exp_bin = dir.join("toy.experimental.demd");
    assert!(exp_bin.is_file());
    let o = run(
        bin()
            .arg("analyze")
            .arg(&toy)
            .arg("--experimental")
            .arg(&exp_bin)
            .arg("Flugtaxi"),
        None,
    );
    assert_eq!(
        stdout(&o),
        "Flugtaxi\tFlugtaxi\tNN,neut,nom,sing\texperimental\tFlugtaxi\n"
    );
}

#[test]
fn analyze_words_and_stdin() {
    let dir = scratch("analyze");
    let toy = compiled_toy(&dir);
    let o = run(bin().arg("analyze").arg(&toy).arg("gegangen"), None);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "gegangen\tgegangen\tADJ,pos,<pred>\tlexicon\tgegangen\n\
         gegangen\tgegangen\tADJ,pos,<adv>\tlexicon\tgegangen\n\
         gegangen\tgehen\tV,ppast\tlexicon\tgegangen\n"
    );

    let o = run(
        bin().arg("analyze").arg("--dict").arg(&toy),
        Some("Zeit  xqz\n\nHaus\n"),
    );
    let words: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_owned())
        .collect::<Vec<_>>();
    let mut blocks = words.clone();
    blocks.dedup();
    assert_eq!(blocks, ["Zeit", "xqz", "Haus"]);
    assert!(stdout(&o).contains("xqz\t-\t-\tnone\t-\n"));
}

#[test]
fn parallel_output_matches_sequential() {
    let dir = scratch("parallel");
    let toy = compiled_toy(&dir);
    let input: String = TOY
        .lines()
        .filter(|l| !l.contains(' ') && !l.is_empty())
        .chain(["grun", "Strasse", "U-Bahn-Station", "flumptest", "3,5"])
        .collect::<Vec<_>>()
        .join(" ");
    let seq = run(bin().arg("analyze").arg(&toy), Some(&input));
    let par = run(
        bin().arg("analyze").arg("--parallel").arg(&toy),
        Some(&input),
    );
    assert!(par.status.success());
    assert_eq!(stdout(&seq), stdout(&par));
    let again = run(bin().arg("analyze").arg(&toy), Some(&input));
    assert_eq!(seq.stdout, again.stdout);
}

#[test]
fn jsonl_format() {
    let dir = scratch("json");
    let toy = compiled_toy(&dir);
    let o = run(
        bin()
            .args(["analyze", "--format", "jsonl"])
            .arg(&toy)
            .args(["grun", "xqz"]),
        None,
    );
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["v"], 1);
    assert_eq!(lines[0]["word"], "grun");
    assert_eq!(lines[0]["analyses"][0]["matched_surface"], "grün");
    assert_eq!(lines[0]["sources"][0], "lexicon");
    assert_eq!(lines[1]["analyses"].as_array().unwrap().len(), 0);

    let o = run(
        bin()
            .args(["lemmatize", "--format", "jsonl"])
            .arg(&toy)
            .arg("gegangen"),
        None,
    );
    assert_eq!(
        stdout(&o),
        "{\"v\":1,\"word\":\"gegangen\",\"lemmas\":[\"gegangen\",\"gehen\"]}\n"
    );
}

#[test]
fn lemmatize_and_tags() {
    let dir = scratch("tags");
    let toy = compiled_toy(&dir);
    let o = run(
        bin()
            .arg("lemmatize")
            .arg(&toy)
            .args(["gegangen", "U-Bahn-Station"]),
        None,
    );
    assert_eq!(
        stdout(&o),
        "gegangen\tgegangen\tgehen\nU-Bahn-Station\tU-(TRUNC)Bahn-(TRUNC)Station\n"
    );
    let o = run(bin().arg("tags").arg(&toy).arg("gegangen"), None);
    assert_eq!(stdout(&o), "gegangen\tADJA\tADJD\tVVPP\n");
    let o = run(
        bin()
            .args(["tags", "--tagset", "ptb"])
            .arg(&toy)
            .arg("gegangen"),
        None,
    );
    assert_eq!(stdout(&o), "gegangen\tJJ\tVBN\n");
    let o = run(
        bin()
            .args(["tags", "--tagset", "xyz"])
            .arg(&toy)
            .arg("gegangen"),
        None,
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn flags_change_pipeline() {
    let dir = scratch("flags");
    let toy = compiled_toy(&dir);
    let o = run(
        bin()
            .arg("analyze")
            .arg(&toy)
            .args(["--no-fuzzy", "--no-guesser", "grun"]),
        None,
    );
    assert_eq!(stdout(&o), "grun\t-\t-\tnone\t-\n");
    let o = run(
        bin()
            .arg("analyze")
            .arg(&toy)
            .args(["--cache", "0", "grun"]),
        None,
    );
    assert!(stdout(&o).contains("\tgrün\n"));
    let o = run(
        bin()
            .arg("analyze")
            .arg(&toy)
            .args(["--cache", "lots", "grun"]),
        None,
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dictionary_resolution_and_exit_codes() {
    let dir = scratch("codes");
    let toy = compiled_toy(&dir);
    let o = run(
        bin().env("MORPHKIT_DICT", &toy).args(["analyze", "Zeit"]),
        None,
    );
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("Zeit\tZeit\tNN"));

    let o = run(bin().args(["analyze", "Zeit"]), None);
    assert_eq!(o.status.code(), Some(1));
    let o = run(
        bin().args(["analyze", "--dict", "/nonexistent/x.demd", "Zeit"]),
        None,
    );
    assert_eq!(o.status.code(), Some(3));
    let garbage = dir.join("garbage.demd");
    std::fs::write(&garbage, "not a dictionary").unwrap();
    let o = run(bin().arg("analyze").arg(&garbage).arg("Zeit"), None);
    assert_eq!(o.status.code(), Some(2));
    let o = run(bin().arg("frobnicate"), None);
    assert_eq!(o.status.code(), Some(1));
    let o = run(bin().arg("--version"), None);
    assert_eq!(o.status.code(), Some(0));
    let o = run(
        bin()
            .arg("compile")
            .arg(dir.join("missing.dict"))
            .arg(dir.join("m.demd")),
        None,
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn stats_command() {
    let dir = scratch("stats");
    let toy = compiled_toy(&dir);
    let o = run(bin().arg("stats").arg(&toy), None);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "surface_count"), 29);
    assert_eq!(
        field(&stdout(&o), "file_bytes"),
        std::fs::metadata(&toy).unwrap().len()
    );
    let o = run(bin().args(["stats", "--format", "jsonl"]).arg(&toy), None);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["v"], 1);
    assert_eq!(v["surface_count"], 29);
}

fn bench_rate(o: &Output) -> f64 {
    stderr(o)
        .lines()
        .find_map(|l| l.strip_prefix("words_per_sec\t"))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn bench_output_and_determinism() {
    let dir = scratch("bench");
    let toy = compiled_toy(&dir);
    let list = dir.join("words.txt");
    let words: Vec<&str> = TOY
        .lines()
        .filter(|l| !l.contains(' ') && !l.is_empty())
        .collect();
    std::fs::write(&list, words.repeat(20).join("\n")).unwrap();
    let first = run(
        bin()
            .arg("bench")
            .arg(&toy)
            .arg(&list)
            .args(["--reps", "3"]),
        None,
    );
    assert!(first.status.success(), "{}", stderr(&first));
    assert_eq!(field(&stdout(&first), "words"), words.len() as u64 * 20);
    assert_eq!(field(&stdout(&first), "reps"), 3);
    assert!(bench_rate(&first) > 0.0);
    let second = run(
        bin()
            .arg("bench")
            .arg(&toy)
            .arg(&list)
            .args(["--reps", "3"]),
        None,
    );
    assert_eq!(first.stdout, second.stdout);

    let empty = dir.join("empty.txt");
    std::fs::write(&empty, "\n").unwrap();
    let o = run(bin().arg("bench").arg(&toy).arg(&empty), None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_cache_helps_on_repeats() {
    let dir = scratch("bench-cache");
    let toy = compiled_toy(&dir);
    let list = dir.join("repeats.txt");
    // unknown words take the longest path through the pipeline
    let words = [
        "Flumpendes",
        "angeschnurpselt",
        "brunztest",
        "Zwockelungen",
        "gruenlichem",
    ];
    std::fs::write(&list, words.repeat(2000).join("\n")).unwrap();
    let cached = run(
        bin()
            .arg("bench")
            .arg(&toy)
            .arg(&list)
            .args(["--reps", "3"]),
        None,
    );
    let uncached = run(
        bin()
            .arg("bench")
            .arg(&toy)
            .arg(&list)
            .args(["--reps", "3", "--no-cache"]),
        None,
    );
    assert_eq!(cached.stdout, uncached.stdout);
    assert!(
        bench_rate(&cached) > bench_rate(&uncached),
        "cached {} vs uncached {}",
        bench_rate(&cached),
        bench_rate(&uncached)
    );
}
