use std::collections::HashMap;

use super::language::Acceptor;
use crate::dfa::Dfa;
use crate::stateset::{StateId, StateSet};

/// A state of the concatenation NFA: the left and right state spaces are
/// kept disjoint by tagging.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NfaState {
    Left(StateId),
    Right(StateId),
}

/// The nondeterministic automaton for `L(left)·L(right)` built from the two
/// DFAs' transition relations plus bridging transitions into the right
/// initial state. Used to cross-check the pair-state DFA.
#[derive(Clone, Debug)]
pub struct ConcatNfa {
    pub alphabet: Vec<char>,
    pub transitions: Vec<(NfaState, char, NfaState)>,
    pub initials: Vec<NfaState>,
    pub finals: Vec<NfaState>,
    index: HashMap<(NfaState, char), Vec<NfaState>>,
}

pub fn build_concat_nfa(left: &Dfa, right: &Dfa) -> ConcatNfa {
    let mut alphabet: Vec<char> = left.alphabet().to_vec();
    alphabet.extend(right.alphabet().iter().filter(|c| !left.has_letter(**c)));

    let mut transitions = Vec::new();
    for &c in left.alphabet() {
        for p in left.states().iter() {
            let q = left.step(p, c).expect("letter of left");
            transitions.push((NfaState::Left(p), c, NfaState::Left(q)));
        }
    }
    for &c in right.alphabet() {
        for p in right.states().iter() {
            let q = right.step(p, c).expect("letter of right");
            transitions.push((NfaState::Right(p), c, NfaState::Right(q)));
        }
    }
    for &c in left.alphabet() {
        for p in left.states().iter() {
            if left.finals().contains(left.step(p, c).expect("letter of left")) {
                transitions.push((NfaState::Left(p), c, NfaState::Right(right.initial())));
            }
        }
    }

    let mut initials = vec![NfaState::Left(left.initial())];
    if left.finals().contains(left.initial()) {
        initials.push(NfaState::Right(right.initial()));
    }
    let finals = right.finals().iter().map(NfaState::Right).collect();

    let mut index: HashMap<(NfaState, char), Vec<NfaState>> = HashMap::new();
    for &(p, c, q) in &transitions {
        index.entry((p, c)).or_default().push(q);
    }
    ConcatNfa {
        alphabet,
        transitions,
        initials,
        finals,
        index,
    }
}

/// Current state set of the NFA, split by side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NfaSet {
    pub left: StateSet,
    pub right: StateSet,
}

impl NfaSet {
    fn insert(&mut self, s: NfaState) {
        match s {
            NfaState::Left(q) => self.left.insert(q),
            NfaState::Right(q) => self.right.insert(q),
        }
    }

    fn members(self) -> impl Iterator<Item = NfaState> {
        self.left
            .iter()
            .map(NfaState::Left)
            .chain(self.right.iter().map(NfaState::Right))
    }
}

impl Acceptor for ConcatNfa {
    type State = NfaSet;

    fn start(&self) -> NfaSet {
        let mut s = NfaSet {
            left: StateSet::EMPTY,
            right: StateSet::EMPTY,
        };
        for &i in &self.initials {
            s.insert(i);
        }
        s
    }

    fn next(&self, s: &NfaSet, c: char) -> NfaSet {
        let mut out = NfaSet {
            left: StateSet::EMPTY,
            right: StateSet::EMPTY,
        };
        for p in s.members() {
            if let Some(targets) = self.index.get(&(p, c)) {
                for &q in targets {
                    out.insert(q);
                }
            }
        }
        out
    }

    fn is_accepting(&self, s: &NfaSet) -> bool {
        s.members().any(|q| self.finals.contains(&q))
    }

    fn is_dead(&self, s: &NfaSet) -> bool {
        s.left.is_empty() && s.right.is_empty()
    }
}
