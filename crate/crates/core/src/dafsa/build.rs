use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use super::{Automaton, StateId, Transition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("key #{index} is out of order (keys must be strictly ascending)")]
    OutOfOrder { index: usize },
    #[error("key #{index} is a duplicate of the previous key")]
    Duplicate { index: usize },
    #[error("automaton exceeds {max} states")]
    TooLarge { max: u64 },
}

/// Registered (frozen) state. Equality of `(final, transitions)` with
/// canonical targets is right-language equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Frozen {
    is_final: bool,
    transitions: Vec<Transition>,
}

#[derive(Debug, Default)]
struct Pending {
    is_final: bool,
    transitions: Vec<Transition>,
    // label of the edge into the next pending node, not yet in `transitions`
    open: Option<u8>,
}

/// Incremental minimal-automaton construction for sorted input.
///
/// Only the path of the most recent key is kept unfrozen; every other state
/// lives in the register, so memory is bounded by the register plus the
/// longest key.
#[derive(Debug)]
pub struct Builder {
    register: HashMap<Frozen, StateId>,
    frozen: Vec<Frozen>,
    path: Vec<Pending>,
    last: Vec<u8>,
    count: u64,
}

impl Default for Builder {
    fn default() -> Self {
        Self::new()
    }
}

impl Builder {
    pub fn new() -> Self {
        Builder {
            register: HashMap::new(),
            frozen: Vec::new(),
            path: vec![Pending::default()],
            last: Vec::new(),
            count: 0,
        }
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn insert(&mut self, key: &[u8]) -> Result<(), BuildError> {
        let index = self.count as usize;
        if self.count > 0 {
            match key.cmp(&self.last[..]) {
                std::cmp::Ordering::Less => return Err(BuildError::OutOfOrder { index }),
                std::cmp::Ordering::Equal => return Err(BuildError::Duplicate { index }),
                std::cmp::Ordering::Greater => {}
            }
        }
        let common = key
            .iter()
            .zip(self.last.iter())
            .take_while(|(a, b)| a == b)
            .count();
        self.freeze_down_to(common)?;
        for &b in &key[common..] {
            self.path.last_mut().unwrap().open = Some(b);
            self.path.push(Pending::default());
        }
        self.path.last_mut().unwrap().is_final = true;
        self.last.clear();
        self.last.extend_from_slice(key);
        self.count += 1;
        Ok(())
    }

    /// Freezes pending nodes deeper than `depth`.
    fn freeze_down_to(&mut self, depth: usize) -> Result<(), BuildError> {
        while self.path.len() > depth + 1 {
            let node = self.path.pop().unwrap();
            let id = self.register_node(node)?;
            let parent = self.path.last_mut().unwrap();
            let label = parent.open.take().expect("pending parent has an open edge");
            parent.transitions.push(Transition { label, target: id });
        }
        Ok(())
    }

    fn register_node(&mut self, node: Pending) -> Result<StateId, BuildError> {
        debug_assert!(node.open.is_none());
        let frozen = Frozen {
            is_final: node.is_final,
            transitions: node.transitions,
        };
        if let Some(&id) = self.register.get(&frozen) {
            return Ok(id);
        }
        let id = StateId::try_from(self.frozen.len()).map_err(|_| BuildError::TooLarge {
            max: StateId::MAX as u64,
        })?;
        self.frozen.push(frozen.clone());
        self.register.insert(frozen, id);
        Ok(id)
    }

    pub fn finish(mut self) -> Automaton {
        self.freeze_down_to(0)
            .expect("state count was checked on every registration");
        let root = self.path.pop().unwrap();
        let root_id = self.frozen.len() as StateId;
        self.frozen.push(Frozen {
            is_final: root.is_final,
            transitions: root.transitions,
        });
        renumber(&self.frozen, root_id, self.count)
    }
}

/// Breadth-first renumbering from the root so the layout (and hence the
/// serialized form) depends only on the accepted language.
fn renumber(states: &[Frozen], root: StateId, key_count: u64) -> Automaton {
    const UNSEEN: StateId = StateId::MAX;
    let mut new_id = vec![UNSEEN; states.len()];
    let mut order = Vec::with_capacity(states.len());
    let mut queue = VecDeque::new();
    new_id[root as usize] = 0;
    queue.push_back(root);
    while let Some(old) = queue.pop_front() {
        order.push(old);
        for t in &states[old as usize].transitions {
            if new_id[t.target as usize] == UNSEEN {
                new_id[t.target as usize] = (order.len() + queue.len()) as StateId;
                queue.push_back(t.target);
            }
        }
    }

    let mut finals = Vec::with_capacity(order.len());
    let mut offsets = Vec::with_capacity(order.len() + 1);
    let mut transitions = Vec::new();
    offsets.push(0u32);
    for &old in &order {
        let s = &states[old as usize];
        finals.push(s.is_final);
        transitions.extend(s.transitions.iter().map(|t| Transition {
            label: t.label,
            target: new_id[t.target as usize],
        }));
        offsets.push(transitions.len() as u32);
    }
    Automaton::from_parts(finals, offsets, transitions, key_count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_order_and_duplicates() {
        let err = Automaton::build(["b", "a"]).unwrap_err();
        assert_eq!(err, BuildError::OutOfOrder { index: 1 });
        let err = Automaton::build(["a", "b", "b"]).unwrap_err();
        assert_eq!(err, BuildError::Duplicate { index: 2 });
        let err = Automaton::build(["ab", "a"]).unwrap_err();
        assert_eq!(err, BuildError::OutOfOrder { index: 1 });
    }

    #[test]
    fn shared_endings_reduce_edges() {
        let mut words = vec![
            "abgehendem",
            "gehendem",
            "imfendem",
            "informierendem",
            "umgehendem",
        ];
        words.sort();
        let a = Automaton::build(&words).unwrap();
        let total: usize = words.iter().map(|w| w.len()).sum();
        assert!(a.edge_count() < total);
        // the state whose right language is exactly "m" is stored once
        let before_m = a
            .states()
            .filter(|s| {
                s.transitions.len() == 1
                    && s.transitions[0].label == b'm'
                    && a.state(s.transitions[0].target).transitions.is_empty()
            })
            .count();
        assert_eq!(before_m, 1);
    }

    #[test]
    fn root_is_state_zero() {
        let a = Automaton::build(["x", "y"]).unwrap();
        assert_eq!(a.state(0).transitions.len(), 2);
    }
}
