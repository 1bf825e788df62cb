//! Integer encoding of readings.
//!
//! Each (surface, lemma, paradigm) triple becomes one automaton key:
//!
//! ```text
//! surface UTF-8 bytes | 0x1C | lemma id (u32 BE) | paradigm id (u16 BE)
//! ```
//!
//! 0x1C never occurs in a surface, so the split is unambiguous and prefix
//! iteration over surfaces still works. Big-endian ids make byte order agree
//! with numeric order, so the readings of a surface enumerate sorted by
//! (lemma id, paradigm id).

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{DictEntry, Paradigm};

pub const SEPARATOR: u8 = 0x1C;
pub const PAYLOAD_LEN: usize = 1 + 4 + 2;

pub const MAX_LEMMAS: usize = u32::MAX as usize;
pub const MAX_PARADIGMS: usize = u16::MAX as usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("more than {max} distinct lemmas")]
    TooManyLemmas { max: usize },
    #[error("more than {max} distinct paradigms")]
    TooManyParadigms { max: usize },
    #[error("string of {len} bytes exceeds the 65535-byte table limit: {text:?}")]
    StringTooLong { len: usize, text: String },
    #[error("surface {0:?} contains the reserved separator byte 0x1C")]
    ReservedByte(String),
    #[error("entry {0:?} has no analyses")]
    EmptyEntry(String),
    #[error("entry {0:?} has an empty surface or lemma")]
    EmptyField(String),
}

/// Dense 0-based lemma ids in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaTable {
    entries: Vec<String>,
    index: HashMap<String, u32>,
}

impl LemmaTable {
    pub fn from_entries(entries: Vec<String>) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        LemmaTable { entries, index }
    }

    pub fn intern(&mut self, lemma: &str) -> Result<u32, EncodeError> {
        if let Some(&id) = self.index.get(lemma) {
            return Ok(id);
        }
        if self.entries.len() >= MAX_LEMMAS {
            return Err(EncodeError::TooManyLemmas { max: MAX_LEMMAS });
        }
        if lemma.len() > u16::MAX as usize {
            return Err(EncodeError::StringTooLong {
                len: lemma.len(),
                text: lemma.to_owned(),
            });
        }
        let id = self.entries.len() as u32;
        self.entries.push(lemma.to_owned());
        self.index.insert(lemma.to_owned(), id);
        Ok(id)
    }

    pub fn get(&self, id: u32) -> Option<&str> {
        self.entries.get(id as usize).map(String::as_str)
    }

    pub fn id(&self, lemma: &str) -> Option<u32> {
        self.index.get(lemma).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

/// Dense 0-based paradigm ids in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParadigmTable {
    entries: Vec<Paradigm>,
    index: HashMap<Paradigm, u16>,
}

impl ParadigmTable {
    pub fn from_entries(entries: Vec<Paradigm>) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u16))
            .collect();
        ParadigmTable { entries, index }
    }

    pub fn intern(&mut self, paradigm: &Paradigm) -> Result<u16, EncodeError> {
        if let Some(&id) = self.index.get(paradigm) {
            return Ok(id);
        }
        if self.entries.len() >= MAX_PARADIGMS {
            return Err(EncodeError::TooManyParadigms { max: MAX_PARADIGMS });
        }
        let text = paradigm.to_string();
        if text.len() > u16::MAX as usize {
            return Err(EncodeError::StringTooLong {
                len: text.len(),
                text,
            });
        }
        let id = self.entries.len() as u16;
        self.entries.push(paradigm.clone());
        self.index.insert(paradigm.clone(), id);
        Ok(id)
    }

    pub fn get(&self, id: u16) -> Option<&Paradigm> {
        self.entries.get(id as usize)
    }

    pub fn id(&self, paradigm: &Paradigm) -> Option<u16> {
        self.index.get(paradigm).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Paradigm> {
        self.entries.iter()
    }
}

pub fn encode_key(surface: &str, lemma_id: u32, paradigm_id: u16) -> Vec<u8> {
    let mut key = Vec::with_capacity(surface.len() + PAYLOAD_LEN);
    key.extend_from_slice(surface.as_bytes());
    key.push(SEPARATOR);
    key.extend_from_slice(&lemma_id.to_be_bytes());
    key.extend_from_slice(&paradigm_id.to_be_bytes());
    key
}

/// Splits a key into (surface bytes, lemma id, paradigm id).
pub fn decode_key(key: &[u8]) -> Option<(&[u8], u32, u16)> {
    if key.len() < PAYLOAD_LEN {
        return None;
    }
    let (surface, payload) = key.split_at(key.len() - PAYLOAD_LEN);
    if payload[0] != SEPARATOR || surface.contains(&SEPARATOR) {
        return None;
    }
    let lemma = u32::from_be_bytes(payload[1..5].try_into().unwrap());
    let paradigm = u16::from_be_bytes(payload[5..7].try_into().unwrap());
    Some((surface, lemma, paradigm))
}

#[derive(Debug, Clone, Default)]
pub struct Encoded {
    pub lemmas: LemmaTable,
    pub paradigms: ParadigmTable,
    /// Deduplicated, ascending.
    pub keys: Vec<Vec<u8>>,
    pub surface_count: u64,
}

/// Interns every lemma and paradigm and produces the sorted key set.
pub fn encode_entries(entries: &[DictEntry]) -> Result<Encoded, EncodeError> {
    let mut lemmas = LemmaTable::default();
    let mut paradigms = ParadigmTable::default();
    let mut keys = BTreeSet::new();
    let mut surfaces = BTreeSet::new();
    for entry in entries {
        if entry.surface.as_bytes().contains(&SEPARATOR) {
            return Err(EncodeError::ReservedByte(entry.surface.clone()));
        }
        if entry.surface.is_empty() {
            return Err(EncodeError::EmptyField(entry.surface.clone()));
        }
        if entry.analyses.is_empty() {
            return Err(EncodeError::EmptyEntry(entry.surface.clone()));
        }
        for record in &entry.analyses {
            if record.lemma.is_empty() {
                return Err(EncodeError::EmptyField(entry.surface.clone()));
            }
            let lemma_id = lemmas.intern(&record.lemma)?;
            let paradigm_id = paradigms.intern(&record.paradigm)?;
            keys.insert(encode_key(&entry.surface, lemma_id, paradigm_id));
        }
        surfaces.insert(entry.surface.as_str());
    }
    Ok(Encoded {
        lemmas,
        paradigms,
        keys: keys.into_iter().collect(),
        surface_count: surfaces.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictfmt::{parse_str, ParseMode};

    #[test]
    fn zero_ids_layout() {
        assert_eq!(
            encode_key("ab", 0, 0),
            vec![b'a', b'b', 0x1C, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(
            encode_key("x", 0x01020304, 0x0506),
            vec![b'x', 0x1C, 1, 2, 3, 4, 5, 6]
        );
    }

    #[test]
    fn decode_inverts_encode() {
        let key = encode_key("grün", 70_000, 642);
        let (surface, l, p) = decode_key(&key).unwrap();
        assert_eq!(surface, "grün".as_bytes());
        assert_eq!((l, p), (70_000, 642));
        assert!(decode_key(b"short").is_none());
        assert!(decode_key(b"abcdefgh").is_none());
    }

    #[test]
    fn worked_entry_counts() {
        let text = "gegangen\ngegangen ADJ,pos,<pred>\ngegangen ADJ,pos,<adv>\ngehen V,ppast\n";
        let entries = parse_str(text, ParseMode::Strict).unwrap().entries;
        let enc = encode_entries(&entries).unwrap();
        assert_eq!(enc.keys.len(), 3);
        assert_eq!(enc.lemmas.len(), 2);
        assert_eq!(enc.paradigms.len(), 3);
        assert!(enc.keys.iter().all(|k| k.starts_with(b"gegangen\x1c")));
        assert_eq!(enc.lemmas.get(0), Some("gegangen"));
        assert_eq!(enc.lemmas.get(1), Some("gehen"));
    }

    #[test]
    fn paradigm_capacity() {
        let mut table = ParadigmTable::default();
        for i in 0..MAX_PARADIGMS {
            table.intern(&Paradigm::new("X", [i.to_string()])).unwrap();
        }
        assert_eq!(
            table.intern(&Paradigm::new("X", ["overflow"])),
            Err(EncodeError::TooManyParadigms { max: 65535 })
        );
        // re-interning an existing paradigm still works at capacity
        assert_eq!(table.intern(&Paradigm::new("X", ["0"])), Ok(0));
    }

    #[test]
    fn rejects_reserved_byte() {
        let entries = vec![DictEntry::new(
            "a\u{1c}",
            vec![crate::AnalysisRecord::new(
                "a",
                Paradigm::new("NN", Vec::<String>::new()),
            )],
        )];
        assert!(matches!(
            encode_entries(&entries),
            Err(EncodeError::ReservedByte(_))
        ));
    }
}
