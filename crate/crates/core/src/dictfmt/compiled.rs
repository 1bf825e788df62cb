//! Compiled dictionary and its file format. Integers are little-endian:
//!
//! ```text
//! "DEMD" | version u16 = 1
//! | entry_count u64 | surface_count u64 | lemma_count u64 | paradigm_count u64
//! | lemma count u32, per lemma: len u16 + UTF-8
//! | paradigm count u16, per paradigm: len u16 + comma-joined UTF-8
//! | automaton blob: len u64 + bytes
//! | CRC32 of everything before it
//! ```

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::encode::{self, EncodeError, LemmaTable, ParadigmTable, PAYLOAD_LEN, SEPARATOR};
use super::{AnalysisRecord, DictEntry, Paradigm};
use crate::bytes::{Reader, Truncated};
use crate::dafsa::{self, Automaton, FuzzyError, ReplacementMap, StateId};

pub const MAGIC: &[u8; 4] = b"DEMD";
pub const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum DictError {
    #[error("not a compiled dictionary (magic bytes {found:02x?})")]
    BadMagic { found: Vec<u8> },
    #[error("unsupported dictionary version {0}")]
    UnsupportedVersion(u16),
    #[error("dictionary file truncated")]
    Truncated,
    #[error("dictionary checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },
    #[error("embedded automaton: {0}")]
    Automaton(#[from] dafsa::LoadError),
    #[error("data corruption: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl From<Truncated> for DictError {
    fn from(_: Truncated) -> Self {
        DictError::Truncated
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DictionaryStats {
    /// Distinct readings (one per automaton key).
    pub entry_count: u64,
    pub surface_count: u64,
    pub lemma_count: u64,
    pub paradigm_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledDictionary {
    automaton: Automaton,
    lemmas: LemmaTable,
    paradigms: ParadigmTable,
    stats: DictionaryStats,
}

impl Default for CompiledDictionary {
    fn default() -> Self {
        CompiledDictionary::compile(&[]).expect("empty dictionary compiles")
    }
}

impl CompiledDictionary {
    pub fn compile(entries: &[DictEntry]) -> Result<Self, EncodeError> {
        let encoded = encode::encode_entries(entries)?;
        let automaton =
            Automaton::build(&encoded.keys).expect("encoded keys are sorted and unique");
        let stats = DictionaryStats {
            entry_count: encoded.keys.len() as u64,
            surface_count: encoded.surface_count,
            lemma_count: encoded.lemmas.len() as u64,
            paradigm_count: encoded.paradigms.len() as u64,
        };
        Ok(CompiledDictionary {
            automaton,
            lemmas: encoded.lemmas,
            paradigms: encoded.paradigms,
            stats,
        })
    }

    pub fn stats(&self) -> DictionaryStats {
        self.stats
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn lemmas(&self) -> &LemmaTable {
        &self.lemmas
    }

    pub fn paradigms(&self) -> &ParadigmTable {
        &self.paradigms
    }

    pub fn is_empty(&self) -> bool {
        self.automaton.is_empty()
    }

    fn readings_state(&self, surface: &str) -> Option<StateId> {
        let bytes = surface.as_bytes();
        if bytes.contains(&SEPARATOR) {
            return None;
        }
        let s = self.automaton.walk(Automaton::ROOT, bytes)?;
        self.automaton.next(s, SEPARATOR)
    }

    pub fn contains_surface(&self, surface: &str) -> bool {
        self.readings_state(surface).is_some()
    }

    /// (lemma id, paradigm id) pairs of `surface`, ascending.
    pub fn lookup_ids(&self, surface: &str) -> Result<Vec<(u32, u16)>, DictError> {
        match self.readings_state(surface) {
            Some(state) => self.ids_from(state, surface),
            None => Ok(Vec::new()),
        }
    }

    pub(crate) fn ids_from(
        &self,
        state: StateId,
        surface: &str,
    ) -> Result<Vec<(u32, u16)>, DictError> {
        let mut out = Vec::new();
        for tail in self.automaton.iter_from(state, Vec::new()) {
            if tail.len() != PAYLOAD_LEN - 1 {
                return Err(DictError::Corrupt(format!(
                    "reading of {surface:?} has a {}-byte payload",
                    tail.len()
                )));
            }
            let lemma = u32::from_be_bytes(tail[..4].try_into().unwrap());
            let paradigm = u16::from_be_bytes(tail[4..].try_into().unwrap());
            if lemma as usize >= self.lemmas.len() || paradigm as usize >= self.paradigms.len() {
                return Err(DictError::Corrupt(format!(
                    "reading of {surface:?} points to lemma {lemma} / paradigm {paradigm} \
                     outside the tables ({} / {})",
                    self.lemmas.len(),
                    self.paradigms.len()
                )));
            }
            out.push((lemma, paradigm));
        }
        Ok(out)
    }

    pub fn record(&self, lemma_id: u32, paradigm_id: u16) -> AnalysisRecord {
        AnalysisRecord::new(
            self.lemmas.get(lemma_id).expect("id validated on lookup"),
            self.paradigms
                .get(paradigm_id)
                .expect("id validated on lookup")
                .clone(),
        )
    }

    /// All readings of `surface`, ordered by (lemma id, paradigm id).
    pub fn lookup_analyses(&self, surface: &str) -> Result<Vec<AnalysisRecord>, DictError> {
        Ok(self
            .lookup_ids(surface)?
            .into_iter()
            .map(|(l, p)| self.record(l, p))
            .collect())
    }

    /// Stored surfaces reachable from `word` through `map`, ascending.
    pub fn fuzzy_surfaces(
        &self,
        word: &str,
        map: &ReplacementMap,
    ) -> Result<(Vec<String>, bool), FuzzyError> {
        if word.as_bytes().contains(&SEPARATOR) {
            return Ok((Vec::new(), false));
        }
        let found = self
            .automaton
            .fuzzy_walk(word, map, |a, s| a.next(s, SEPARATOR).is_some())?;
        let surfaces = found
            .matches
            .into_iter()
            .map(|(bytes, _)| String::from_utf8_lossy(&bytes).into_owned())
            .collect();
        Ok((surfaces, found.truncated))
    }

    /// Every distinct surface, ascending by bytes.
    pub fn surfaces(&self) -> Surfaces<'_> {
        Surfaces {
            automaton: &self.automaton,
            stack: vec![(Automaton::ROOT, 0)],
            buf: Vec::new(),
            visit_root: true,
        }
    }

    /// Re-derives the statistics by enumerating every key, checking each
    /// payload on the way.
    pub fn verify(&self) -> Result<DictionaryStats, DictError> {
        let mut stats = DictionaryStats {
            lemma_count: self.lemmas.len() as u64,
            paradigm_count: self.paradigms.len() as u64,
            ..Default::default()
        };
        let mut last_surface: Option<Vec<u8>> = None;
        for key in self.automaton.iter() {
            let (surface, lemma, paradigm) = encode::decode_key(&key)
                .ok_or_else(|| DictError::Corrupt(format!("malformed key {key:02x?}")))?;
            if std::str::from_utf8(surface).is_err() {
                return Err(DictError::Corrupt(format!(
                    "surface {surface:02x?} is not UTF-8"
                )));
            }
            if lemma as usize >= self.lemmas.len() || paradigm as usize >= self.paradigms.len() {
                return Err(DictError::Corrupt(format!(
                    "key {key:02x?} has ids out of range"
                )));
            }
            stats.entry_count += 1;
            if last_surface.as_deref() != Some(surface) {
                stats.surface_count += 1;
                last_surface = Some(surface.to_vec());
            }
        }
        if stats != self.stats {
            return Err(DictError::Corrupt(format!(
                "stored stats {:?} disagree with contents {:?}",
                self.stats, stats
            )));
        }
        Ok(stats)
    }

    /// Reconstructs the entries (one per surface, readings in id order).
    pub fn entries(&self) -> Result<Vec<DictEntry>, DictError> {
        self.surfaces()
            .map(|surface| {
                let analyses = self.lookup_analyses(&surface)?;
                Ok(DictEntry::new(surface, analyses))
            })
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let blob = self.automaton.serialize();
        let mut out = Vec::with_capacity(blob.len() + 64 + 16 * self.lemmas.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        for v in [
            self.stats.entry_count,
            self.stats.surface_count,
            self.stats.lemma_count,
            self.stats.paradigm_count,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&(self.lemmas.len() as u32).to_le_bytes());
        for lemma in self.lemmas.iter() {
            put_str(&mut out, lemma);
        }
        out.extend_from_slice(&(self.paradigms.len() as u16).to_le_bytes());
        for paradigm in self.paradigms.iter() {
            put_str(&mut out, &paradigm.to_string());
        }
        out.extend_from_slice(&(blob.len() as u64).to_le_bytes());
        out.extend_from_slice(&blob);
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DictError> {
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(DictError::BadMagic {
                found: bytes[..4].to_vec(),
            });
        }
        let mut header = Reader::new(bytes);
        header.take(4)?;
        let version = header.u16()?;
        if version != VERSION {
            return Err(DictError::UnsupportedVersion(version));
        }
        if bytes.len() < 4 + 2 + 32 + 4 + 2 + 8 + 4 {
            return Err(DictError::Truncated);
        }
        let (body, crc) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(crc.try_into().unwrap());
        let computed = crc32fast::hash(body);
        if stored != computed {
            return Err(DictError::ChecksumMismatch { stored, computed });
        }

        let mut r = Reader::new(body);
        r.take(6)?;
        let stats = DictionaryStats {
            entry_count: r.u64()?,
            surface_count: r.u64()?,
            lemma_count: r.u64()?,
            paradigm_count: r.u64()?,
        };
        let lemma_count = r.u32()? as usize;
        let mut lemmas = Vec::with_capacity(lemma_count.min(r.remaining() / 2));
        for _ in 0..lemma_count {
            lemmas.push(get_str(&mut r, "lemma")?);
        }
        let paradigm_count = r.u16()? as usize;
        let mut paradigms = Vec::with_capacity(paradigm_count);
        for _ in 0..paradigm_count {
            let text = get_str(&mut r, "paradigm")?;
            let p: Paradigm = text
                .parse()
                .map_err(|e| DictError::Corrupt(format!("paradigm {text:?}: {e}")))?;
            paradigms.push(p);
        }
        let blob_len = r.u64()?;
        let blob_len = usize::try_from(blob_len).map_err(|_| DictError::Truncated)?;
        let blob = r.take(blob_len)?;
        if r.remaining() != 0 {
            return Err(DictError::Corrupt(format!(
                "{} trailing bytes",
                r.remaining()
            )));
        }
        let automaton = Automaton::deserialize(blob)?;

        let lemmas = LemmaTable::from_entries(lemmas);
        let paradigms = ParadigmTable::from_entries(paradigms);
        if lemmas.len() != lemma_count || paradigms.len() != paradigm_count {
            return Err(DictError::Corrupt("duplicate strings in id tables".into()));
        }
        if stats.lemma_count != lemma_count as u64
            || stats.paradigm_count != paradigm_count as u64
            || stats.entry_count != automaton.key_count()
        {
            return Err(DictError::Corrupt(format!(
                "header stats {stats:?} disagree with tables ({lemma_count} lemmas, \
                 {paradigm_count} paradigms, {} keys)",
                automaton.key_count()
            )));
        }
        Ok(CompiledDictionary {
            automaton,
            lemmas,
            paradigms,
            stats,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), DictError> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|source| DictError::Io {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DictError> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|source| DictError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_bytes(&bytes)
    }
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    // lengths were bounded when the tables were interned
    out.extend_from_slice(&(s.len() as u16).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

fn get_str(r: &mut Reader<'_>, what: &str) -> Result<String, DictError> {
    let len = r.u16()? as usize;
    let bytes = r.take(len)?;
    String::from_utf8(bytes.to_vec())
        .map_err(|_| DictError::Corrupt(format!("{what} table entry is not UTF-8")))
}

/// Pre-order walk that yields a surface at every state owning a separator
/// edge and never descends into payloads.
pub struct Surfaces<'a> {
    automaton: &'a Automaton,
    stack: Vec<(StateId, usize)>,
    buf: Vec<u8>,
    visit_root: bool,
}

impl<'a> Surfaces<'a> {
    fn has_readings(&self, state: StateId) -> bool {
        self.automaton.next(state, SEPARATOR).is_some()
    }
}

impl<'a> Iterator for Surfaces<'a> {
    type Item = String;

    fn next(&mut self) -> Option<String> {
        if self.visit_root {
            self.visit_root = false;
            if self.has_readings(Automaton::ROOT) {
                return Some(String::new());
            }
        }
        while let Some(top) = self.stack.last_mut() {
            let (state, idx) = *top;
            let transitions = self.automaton.state(state).transitions;
            let Some(t) = transitions.get(idx).copied() else {
                self.stack.pop();
                if !self.stack.is_empty() {
                    self.buf.pop();
                }
                continue;
            };
            top.1 += 1;
            if t.label == SEPARATOR {
                continue;
            }
            self.buf.push(t.label);
            self.stack.push((t.target, 0));
            if self.has_readings(t.target) {
                return Some(String::from_utf8_lossy(&self.buf).into_owned());
            }
        }
        None
    }
}
