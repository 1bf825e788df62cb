//! On-disk layout, all integers little-endian:
//!
//! ```text
//! "MDFA" | version u16 = 1 | flags u16 = 0 | key_count u64 | state_count u64
//! | per state: final u8, transition count u16, per transition: label u8, target u32
//! | CRC32 of all preceding bytes (u32)
//! ```

use std::collections::VecDeque;

use thiserror::Error;

use super::{Automaton, StateId, Transition};
use crate::bytes::{Reader, Truncated};

pub const MAGIC: &[u8; 4] = b"MDFA";
pub const VERSION: u16 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadError {
    #[error("bad magic {found:02x?}, expected {expected:?}")]
    BadMagic {
        expected: &'static str,
        found: Vec<u8>,
    },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),
    #[error("input truncated")]
    Truncated,
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },
    #[error("corrupt data: {0}")]
    Corrupt(String),
}

impl From<Truncated> for LoadError {
    fn from(_: Truncated) -> Self {
        LoadError::Truncated
    }
}

impl Automaton {
    pub fn serialized_len(&self) -> usize {
        4 + 2 + 2 + 8 + 8 + 3 * self.state_count() + 5 * self.edge_count() + 4
    }

    pub fn serialize(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.serialized_len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&0u16.to_le_bytes());
        out.extend_from_slice(&self.key_count.to_le_bytes());
        out.extend_from_slice(&(self.state_count() as u64).to_le_bytes());
        for id in 0..self.state_count() as StateId {
            let transitions = self.transitions_of(id);
            out.push(self.is_final(id) as u8);
            out.extend_from_slice(&(transitions.len() as u16).to_le_bytes());
            for t in transitions {
                out.push(t.label);
                out.extend_from_slice(&t.target.to_le_bytes());
            }
        }
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    /// Parses and validates a serialized automaton: checksum, sorted and
    /// in-range transitions, acyclicity, and the stored key count.
    pub fn deserialize(bytes: &[u8]) -> Result<Automaton, LoadError> {
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(LoadError::BadMagic {
                expected: "MDFA",
                found: bytes[..4].to_vec(),
            });
        }
        let mut header = Reader::new(bytes);
        header.take(4)?;
        let version = header.u16()?;
        if version != VERSION {
            return Err(LoadError::UnsupportedVersion(version));
        }
        if bytes.len() < 4 + 2 + 2 + 8 + 8 + 4 {
            return Err(LoadError::Truncated);
        }
        let (body, crc) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(crc.try_into().unwrap());
        let computed = crc32fast::hash(body);

        let mut r = Reader::new(body);
        r.take(6)?;
        let flags = r.u16()?;
        let key_count = r.u64()?;
        let state_count = r.u64()?;
        // every state needs at least 3 bytes; reject absurd counts before allocating
        if state_count == 0 || state_count > (r.remaining() / 3) as u64 {
            return Err(if stored != computed {
                LoadError::ChecksumMismatch { stored, computed }
            } else if state_count == 0 {
                LoadError::Corrupt("zero states".into())
            } else {
                LoadError::Truncated
            });
        }
        let n = state_count as usize;
        let mut finals = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n + 1);
        let mut transitions = Vec::new();
        offsets.push(0u32);
        for _ in 0..n {
            let f = r.u8()?;
            let count = r.u16()? as usize;
            let row = r.take(count * 5)?;
            for chunk in row.chunks_exact(5) {
                transitions.push(Transition {
                    label: chunk[0],
                    target: u32::from_le_bytes(chunk[1..5].try_into().unwrap()),
                });
            }
            finals.push(f);
            offsets.push(transitions.len() as u32);
        }
        if r.remaining() != 0 {
            return Err(if stored != computed {
                LoadError::ChecksumMismatch { stored, computed }
            } else {
                LoadError::Corrupt(format!("{} trailing bytes", r.remaining()))
            });
        }
        if stored != computed {
            return Err(LoadError::ChecksumMismatch { stored, computed });
        }
        if flags != 0 {
            return Err(LoadError::Corrupt(format!("unknown flags {flags:#06x}")));
        }
        let finals = finals
            .into_iter()
            .map(|f| match f {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(LoadError::Corrupt(format!("final flag {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let automaton = Automaton::from_parts(finals, offsets, transitions, key_count);
        automaton.validate()?;
        Ok(automaton)
    }

    fn validate(&self) -> Result<(), LoadError> {
        let n = self.state_count();
        let mut indegree = vec![0u32; n];
        for id in 0..n as StateId {
            let ts = self.transitions_of(id);
            if ts.windows(2).any(|w| w[0].label >= w[1].label) {
                return Err(LoadError::Corrupt(format!(
                    "state {id}: transitions not strictly ascending"
                )));
            }
            for t in ts {
                if t.target as usize >= n {
                    return Err(LoadError::Corrupt(format!(
                        "state {id}: target {} out of range",
                        t.target
                    )));
                }
                indegree[t.target as usize] += 1;
            }
        }
        // Kahn's algorithm; a leftover state means a cycle
        let mut queue: VecDeque<StateId> = (0..n as StateId)
            .filter(|&s| indegree[s as usize] == 0)
            .collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(s) = queue.pop_front() {
            topo.push(s);
            for t in self.transitions_of(s) {
                let d = &mut indegree[t.target as usize];
                *d -= 1;
                if *d == 0 {
                    queue.push_back(t.target);
                }
            }
        }
        if topo.len() != n {
            return Err(LoadError::Corrupt("transition graph has a cycle".into()));
        }
        // number of accepted strings from each state, in reverse topological order
        let mut accepted = vec![0u64; n];
        for &s in topo.iter().rev() {
            let mut total = self.is_final(s) as u64;
            for t in self.transitions_of(s) {
                total = total.saturating_add(accepted[t.target as usize]);
            }
            accepted[s as usize] = total;
        }
        if accepted[Self::ROOT as usize] != self.key_count {
            return Err(LoadError::Corrupt(format!(
                "header claims {} keys, automaton accepts {}",
                self.key_count,
                accepted[Self::ROOT as usize]
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Automaton {
        Automaton::build(["tap", "taps", "top", "tops"]).unwrap()
    }

    #[test]
    fn round_trip() {
        let a = sample();
        let bytes = a.serialize();
        assert_eq!(bytes.len(), a.serialized_len());
        let b = Automaton::deserialize(&bytes).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.state_count(), 5);
        assert_eq!(b.completions(b""), a.completions(b""));
    }

    #[test]
    fn empty_round_trip() {
        let a = Automaton::default();
        let b = Automaton::deserialize(&a.serialize()).unwrap();
        assert!(b.completions(b"").is_empty());
        assert_eq!(b.state_count(), 1);
    }

    #[test]
    fn layout_is_exact() {
        let a = Automaton::build(["a"]).unwrap();
        let bytes = a.serialize();
        let mut expected = Vec::new();
        expected.extend_from_slice(b"MDFA");
        expected.extend_from_slice(&[1, 0, 0, 0]);
        expected.extend_from_slice(&1u64.to_le_bytes());
        expected.extend_from_slice(&2u64.to_le_bytes());
        expected.extend_from_slice(&[0, 1, 0, b'a', 1, 0, 0, 0]);
        expected.extend_from_slice(&[1, 0, 0]);
        let crc = crc32fast::hash(&expected);
        expected.extend_from_slice(&crc.to_le_bytes());
        assert_eq!(bytes, expected);
    }

    #[test]
    fn distinct_load_errors() {
        let bytes = sample().serialize();

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(
            Automaton::deserialize(&bad),
            Err(LoadError::BadMagic { .. })
        ));

        let mut bad = bytes.clone();
        bad[4] = 2;
        assert_eq!(
            Automaton::deserialize(&bad),
            Err(LoadError::UnsupportedVersion(2))
        );

        for cut in [0, 3, 10, bytes.len() - 6] {
            let err = Automaton::deserialize(&bytes[..cut]).unwrap_err();
            assert!(
                matches!(
                    err,
                    LoadError::Truncated | LoadError::ChecksumMismatch { .. }
                ),
                "cut {cut}: {err:?}"
            );
        }
        assert_eq!(
            Automaton::deserialize(&bytes[..bytes.len() - 1]).unwrap_err(),
            LoadError::Truncated
        );

        // first transition label: header (24) + final flag + count
        let mut bad = bytes.clone();
        bad[27] ^= 0x40;
        assert!(matches!(
            Automaton::deserialize(&bad),
            Err(LoadError::ChecksumMismatch { .. })
        ));
    }

    #[test]
    fn rejects_cycles_with_valid_checksum() {
        // state 0 -a-> 1 -b-> 0
        let mut body = Vec::new();
        body.extend_from_slice(b"MDFA");
        body.extend_from_slice(&[1, 0, 0, 0]);
        body.extend_from_slice(&0u64.to_le_bytes());
        body.extend_from_slice(&2u64.to_le_bytes());
        body.extend_from_slice(&[0, 1, 0, b'a', 1, 0, 0, 0]);
        body.extend_from_slice(&[0, 1, 0, b'b', 0, 0, 0, 0]);
        let crc = crc32fast::hash(&body);
        body.extend_from_slice(&crc.to_le_bytes());
        assert!(matches!(
            Automaton::deserialize(&body),
            Err(LoadError::Corrupt(_))
        ));
    }

    #[test]
    fn serialization_is_deterministic() {
        let words = ["ab", "abc", "b", "bc"];
        assert_eq!(
            Automaton::build(words).unwrap().serialize(),
            Automaton::build(words).unwrap().serialize()
        );
    }
}
