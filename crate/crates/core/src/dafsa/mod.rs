//! Minimal deterministic acyclic finite-state automaton over byte strings.
//!
//! The automaton is built once from sorted keys ([`Builder`]) and is
//! immutable afterwards. States are stored in a flat layout: one offset per
//! state into a shared transition array, with each state's transitions sorted
//! by label. The root is always state 0.
//!
//! Queries: exact membership ([`Automaton::contains`]), prefix enumeration
//! ([`Automaton::completions`]) and substitution-tolerant lookup
//! ([`Automaton::fuzzy_lookup`], see [`ReplacementMap`]).

mod build;
mod fuzzy;
mod io;

pub use build::{BuildError, Builder};
pub use fuzzy::{FuzzyError, FuzzyMatches, Overflow, ReplacementMap, DEFAULT_EXPANSION_LIMIT};
pub use io::LoadError;

/// Index of a state inside an [`Automaton`].
pub type StateId = u32;

/// One labelled edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub label: u8,
    pub target: StateId,
}

/// Borrowed view of a single state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct State<'a> {
    pub is_final: bool,
    pub transitions: &'a [Transition],
}

impl<'a> State<'a> {
    pub fn next(&self, label: u8) -> Option<StateId> {
        find_transition(self.transitions, label)
    }
}

#[inline]
fn find_transition(transitions: &[Transition], label: u8) -> Option<StateId> {
    if transitions.len() <= 8 {
        transitions
            .iter()
            .find(|t| t.label == label)
            .map(|t| t.target)
    } else {
        transitions
            .binary_search_by_key(&label, |t| t.label)
            .ok()
            .map(|i| transitions[i].target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    finals: Vec<bool>,
    // offsets[s]..offsets[s + 1] indexes `transitions` for state s
    offsets: Vec<u32>,
    transitions: Vec<Transition>,
    key_count: u64,
}

impl Default for Automaton {
    fn default() -> Self {
        Automaton {
            finals: vec![false],
            offsets: vec![0, 0],
            transitions: Vec::new(),
            key_count: 0,
        }
    }
}

impl Automaton {
    pub const ROOT: StateId = 0;

    /// Builds the minimal automaton for `keys`, which must be strictly
    /// ascending in byte order.
    pub fn build<I, K>(keys: I) -> Result<Automaton, BuildError>
    where
        I: IntoIterator<Item = K>,
        K: AsRef<[u8]>,
    {
        let mut builder = Builder::new();
        for key in keys {
            builder.insert(key.as_ref())?;
        }
        Ok(builder.finish())
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn edge_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn key_count(&self) -> u64 {
        self.key_count
    }

    pub fn is_empty(&self) -> bool {
        self.key_count == 0
    }

    pub fn state(&self, id: StateId) -> State<'_> {
        let i = id as usize;
        State {
            is_final: self.finals[i],
            transitions: self.transitions_of(id),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = State<'_>> + '_ {
        (0..self.state_count() as StateId).map(move |id| self.state(id))
    }

    #[inline]
    pub(crate) fn transitions_of(&self, id: StateId) -> &[Transition] {
        let i = id as usize;
        &self.transitions[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    #[inline]
    pub fn is_final(&self, id: StateId) -> bool {
        self.finals[id as usize]
    }

    #[inline]
    pub fn next(&self, id: StateId, label: u8) -> Option<StateId> {
        find_transition(self.transitions_of(id), label)
    }

    /// Follows `bytes` from `from`, returning the state reached.
    pub fn walk(&self, from: StateId, bytes: &[u8]) -> Option<StateId> {
        bytes.iter().try_fold(from, |s, &b| self.next(s, b))
    }

    pub fn contains(&self, key: &[u8]) -> bool {
        self.walk(Self::ROOT, key).is_some_and(|s| self.is_final(s))
    }

    /// All accepted keys starting with `prefix`, ascending.
    pub fn completions(&self, prefix: &[u8]) -> Vec<Vec<u8>> {
        self.iter_prefix(prefix).collect()
    }

    /// Lazy version of [`completions`](Self::completions).
    pub fn iter_prefix(&self, prefix: &[u8]) -> Keys<'_> {
        match self.walk(Self::ROOT, prefix) {
            Some(state) => Keys::new(self, state, prefix.to_vec()),
            None => Keys::exhausted(self),
        }
    }

    /// Every accepted key, ascending.
    pub fn iter(&self) -> Keys<'_> {
        self.iter_prefix(&[])
    }

    /// Keys accepted from `state`, each prefixed with `prefix`.
    pub fn iter_from(&self, state: StateId, prefix: Vec<u8>) -> Keys<'_> {
        Keys::new(self, state, prefix)
    }

    pub(crate) fn from_parts(
        finals: Vec<bool>,
        offsets: Vec<u32>,
        transitions: Vec<Transition>,
        key_count: u64,
    ) -> Automaton {
        debug_assert_eq!(offsets.len(), finals.len() + 1);
        Automaton {
            finals,
            offsets,
            transitions,
            key_count,
        }
    }
}

/// Depth-first, label-ordered enumeration of accepted keys.
pub struct Keys<'a> {
    automaton: &'a Automaton,
    // (state, index of the next transition to take)
    stack: Vec<(StateId, usize)>,
    buf: Vec<u8>,
    base_len: usize,
    pending_root: bool,
}

impl<'a> Keys<'a> {
    fn new(automaton: &'a Automaton, state: StateId, prefix: Vec<u8>) -> Self {
        let base_len = prefix.len();
        Keys {
            automaton,
            stack: vec![(state, 0)],
            buf: prefix,
            base_len,
            pending_root: true,
        }
    }

    fn exhausted(automaton: &'a Automaton) -> Self {
        Keys {
            automaton,
            stack: Vec::new(),
            buf: Vec::new(),
            base_len: 0,
            pending_root: false,
        }
    }
}

impl<'a> Iterator for Keys<'a> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.pending_root {
            self.pending_root = false;
            if let Some(&(s, _)) = self.stack.first() {
                if self.automaton.is_final(s) {
                    return Some(self.buf.clone());
                }
            }
        }
        while let Some(top) = self.stack.last_mut() {
            let (state, idx) = *top;
            let transitions = self.automaton.transitions_of(state);
            if idx >= transitions.len() {
                self.stack.pop();
                if self.buf.len() > self.base_len {
                    self.buf.pop();
                }
                continue;
            }
            top.1 += 1;
            let t = transitions[idx];
            self.buf.push(t.label);
            self.stack.push((t.target, 0));
            if self.automaton.is_final(t.target) {
                return Some(self.buf.clone());
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(keys: &[Vec<u8>]) -> Vec<String> {
        keys.iter()
            .map(|k| String::from_utf8(k.clone()).unwrap())
            .collect()
    }

    #[test]
    fn empty_set_has_one_nonfinal_state() {
        let a = Automaton::build(Vec::<&[u8]>::new()).unwrap();
        assert_eq!(a.state_count(), 1);
        assert!(!a.is_final(0));
        assert!(!a.contains(b""));
        assert!(a.completions(b"").is_empty());
        assert_eq!(a, Automaton::default());
    }

    #[test]
    fn empty_key_is_legal() {
        let a = Automaton::build(["", "a"]).unwrap();
        assert!(a.contains(b""));
        assert!(a.contains(b"a"));
        assert_eq!(strs(&a.completions(b"")), vec!["", "a"]);
        assert_eq!(a.key_count(), 2);
    }

    #[test]
    fn exact_lookup_ignores_replacements() {
        let a = Automaton::build(["grün"]).unwrap();
        assert!(a.contains("grün".as_bytes()));
        assert!(!a.contains(b"grun"));
        assert!(!a.contains("grü".as_bytes()));
    }

    #[test]
    fn completions_by_prefix() {
        let a = Automaton::build(["geh", "gehen", "gut"]).unwrap();
        assert_eq!(strs(&a.completions(b"geh")), vec!["geh", "gehen"]);
        assert_eq!(strs(&a.completions(b"")), vec!["geh", "gehen", "gut"]);
        assert!(a.completions(b"x").is_empty());
        assert_eq!(strs(&a.completions(b"gut")), vec!["gut"]);
    }

    #[test]
    fn tap_top_shares_states() {
        let a = Automaton::build(["tap", "taps", "top", "tops"]).unwrap();
        // root -t-> 1 -{a,o}-> 2 -p-> 3(final) -s-> 4(final)
        assert_eq!(a.state_count(), 5);
        assert_eq!(a.edge_count(), 5);
        assert_eq!(a.key_count(), 4);
    }

    #[test]
    fn transitions_sorted() {
        let a = Automaton::build(["b", "ba", "bc", "c", "d"]).unwrap();
        for s in a.states() {
            assert!(s.transitions.windows(2).all(|w| w[0].label < w[1].label));
        }
    }
}
