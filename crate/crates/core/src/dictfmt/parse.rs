use std::fmt;
use std::io::{self, BufRead};

use thiserror::Error;

use super::{AnalysisRecord, DictEntry, Paradigm, ParadigmError};
use crate::dictfmt::SEPARATOR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// The first malformed block aborts parsing.
    #[default]
    Strict,
    /// Malformed blocks are skipped and reported as warnings.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    AnalysisBeforeHeadword,
    MissingParadigm,
    TooManyFields,
    BadParadigm(ParadigmError),
    HeadwordWithoutAnalyses,
    ForbiddenByte,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxError::AnalysisBeforeHeadword => f.write_str("analysis line before any headword"),
            SyntaxError::MissingParadigm => f.write_str("analysis line without a paradigm field"),
            SyntaxError::TooManyFields => {
                f.write_str("analysis line has more than two fields (lemma, paradigm)")
            }
            SyntaxError::BadParadigm(e) => e.fmt(f),
            SyntaxError::HeadwordWithoutAnalyses => f.write_str("headword has no analysis lines"),
            SyntaxError::ForbiddenByte => f.write_str("line contains the reserved byte 0x1C"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {kind}")]
    Syntax { line: usize, kind: SyntaxError },
    #[error("read error at line {line}: {source}")]
    Io {
        line: usize,
        #[source]
        source: io::Error,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Io { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseOutput {
    pub entries: Vec<DictEntry>,
    pub warnings: Vec<ParseWarning>,
}

struct Block {
    start: usize,
    entry: Option<DictEntry>,
    failed: bool,
}

pub fn parse_str(text: &str, mode: ParseMode) -> Result<ParseOutput, ParseError> {
    parse_text_dictionary(text.as_bytes(), mode)
}

/// Parses a line-oriented dictionary. Blank lines separate entries; the
/// first line of a block is the headword, the rest are `lemma PARADIGM`
/// readings. Duplicate readings within an entry are dropped with a warning.
pub fn parse_text_dictionary<R: BufRead>(
    reader: R,
    mode: ParseMode,
) -> Result<ParseOutput, ParseError> {
    let mut out = ParseOutput::default();
    let mut block: Option<Block> = None;
    let mut lineno = 0;

    for line in reader.lines() {
        lineno += 1;
        let line = line.map_err(|source| ParseError::Io {
            line: lineno,
            source,
        })?;
        let line = line.trim();
        if line.is_empty() {
            if let Some(b) = block.take() {
                finish_block(b, lineno - 1, mode, &mut out)?;
            }
            continue;
        }
        let b = block.get_or_insert(Block {
            start: lineno,
            entry: None,
            failed: false,
        });
        if b.failed {
            continue;
        }
        if let Err(kind) = parse_line(line, b, lineno, &mut out.warnings) {
            match mode {
                ParseMode::Strict => return Err(ParseError::Syntax { line: lineno, kind }),
                ParseMode::Lenient => {
                    out.warnings.push(ParseWarning {
                        line: lineno,
                        message: format!("{kind}; skipping entry starting at line {}", b.start),
                    });
                    b.failed = true;
                }
            }
        }
    }
    if let Some(b) = block.take() {
        finish_block(b, lineno, mode, &mut out)?;
    }
    Ok(out)
}

fn parse_line(
    line: &str,
    block: &mut Block,
    lineno: usize,
    warnings: &mut Vec<ParseWarning>,
) -> Result<(), SyntaxError> {
    if line.as_bytes().contains(&SEPARATOR) {
        return Err(SyntaxError::ForbiddenByte);
    }
    let mut fields = line.split_whitespace();
    let first = fields.next().expect("line is not blank");
    let second = fields.next();
    if fields.next().is_some() {
        return Err(if block.entry.is_none() {
            SyntaxError::AnalysisBeforeHeadword
        } else {
            SyntaxError::TooManyFields
        });
    }
    match (&mut block.entry, second) {
        (None, None) => {
            block.entry = Some(DictEntry::new(first, Vec::new()));
            Ok(())
        }
        (None, Some(_)) => Err(SyntaxError::AnalysisBeforeHeadword),
        (Some(_), None) => Err(SyntaxError::MissingParadigm),
        (Some(entry), Some(paradigm)) => {
            let paradigm: Paradigm = paradigm.parse().map_err(SyntaxError::BadParadigm)?;
            let record = AnalysisRecord::new(first, paradigm);
            if entry.analyses.contains(&record) {
                warnings.push(ParseWarning {
                    line: lineno,
                    message: format!("duplicate analysis \"{record}\" for {}", entry.surface),
                });
            } else {
                entry.analyses.push(record);
            }
            Ok(())
        }
    }
}

fn finish_block(
    block: Block,
    last_line: usize,
    mode: ParseMode,
    out: &mut ParseOutput,
) -> Result<(), ParseError> {
    if block.failed {
        return Ok(());
    }
    let entry = block.entry.expect("a block holds at least one line");
    if entry.analyses.is_empty() {
        let kind = SyntaxError::HeadwordWithoutAnalyses;
        return match mode {
            ParseMode::Strict => Err(ParseError::Syntax {
                line: block.start,
                kind,
            }),
            ParseMode::Lenient => {
                out.warnings.push(ParseWarning {
                    line: block.start,
                    message: format!("{kind} (entry ends at line {last_line}); skipped"),
                });
                Ok(())
            }
        };
    }
    out.entries.push(entry);
    Ok(())
}

/// Renders entries back into the text format.
pub fn render_entries(entries: &[DictEntry]) -> String {
    let mut out = String::new();
    for (i, entry) in entries.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&entry.surface);
        out.push('\n');
        for record in &entry.analyses {
            out.push_str(&record.to_string());
            out.push('\n');
        }
    }
    out
}
