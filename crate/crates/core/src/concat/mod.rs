//! The deterministic concatenation automaton whose states are pairs
//! `(focus, subset)`: an optional state of the left automaton together with a
//! set of states of the right automaton.

mod graph;
mod language;
mod nfa;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dfa::{Dfa, Word};
use crate::error::{Error, Result};
use crate::stateset::{StateId, StateSet};

pub use graph::PairGraph;
pub use language::{bounded_language, Acceptor, BoundedLanguage};
pub use nfa::{build_concat_nfa, ConcatNfa, NfaState};

/// Whether the two operands share one alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Restricted,
    Unrestricted,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "restricted" => Ok(Mode::Restricted),
            "unrestricted" => Ok(Mode::Unrestricted),
            _ => Err(Error::Precondition(format!("unknown mode '{s}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Restricted => "restricted",
            Mode::Unrestricted => "unrestricted",
        })
    }
}

/// A state of the concatenation DFA. `focus == None` stands for the empty
/// left component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairState {
    pub focus: Option<StateId>,
    pub subset: StateSet,
}

impl PairState {
    pub fn new(focus: Option<StateId>, subset: StateSet) -> Self {
        PairState { focus, subset }
    }

    pub fn at(focus: StateId, subset: StateSet) -> Self {
        PairState {
            focus: Some(focus),
            subset,
        }
    }
}

impl fmt::Display for PairState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.focus {
            Some(q) => write!(f, "({q}',{})", self.subset),
            None => write!(f, "(∅,{})", self.subset),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct LetterRoute {
    left: Option<usize>,
    right: Option<usize>,
}

/// The pair-state concatenation DFA for `left · right`, explored lazily.
#[derive(Clone, Debug)]
pub struct ConcatMachine {
    left: Dfa,
    right: Dfa,
    alphabet: Vec<char>,
    shared: Vec<char>,
    routes: Vec<LetterRoute>,
}

impl ConcatMachine {
    /// The alphabet lists the left automaton's letters in declared order,
    /// followed by letters only the right automaton has.
    pub fn new(left: Dfa, right: Dfa) -> Self {
        let mut alphabet: Vec<char> = left.alphabet().to_vec();
        alphabet.extend(right.alphabet().iter().filter(|c| !left.has_letter(**c)));
        let shared = left
            .alphabet()
            .iter()
            .copied()
            .filter(|&c| right.has_letter(c))
            .collect();
        let routes = alphabet
            .iter()
            .map(|&c| LetterRoute {
                left: left.letter_index(c),
                right: right.letter_index(c),
            })
            .collect();
        ConcatMachine {
            left,
            right,
            alphabet,
            shared,
            routes,
        }
    }

    pub fn left(&self) -> &Dfa {
        &self.left
    }

    pub fn right(&self) -> &Dfa {
        &self.right
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    /// Letters common to both operands.
    pub fn shared(&self) -> &[char] {
        &self.shared
    }

    /// Restricted iff both operands have the same alphabet (as sets).
    pub fn mode(&self) -> Mode {
        if self.shared.len() == self.left.alphabet().len()
            && self.shared.len() == self.right.alphabet().len()
        {
            Mode::Restricted
        } else {
            Mode::Unrestricted
        }
    }

    pub fn initial_pair(&self) -> PairState {
        let i = self.left.initial();
        let subset = if self.left.finals().contains(i) {
            StateSet::singleton(self.right.initial())
        } else {
            StateSet::EMPTY
        };
        PairState::at(i, subset)
    }

    /// Step by the letter at position `pos` of [`ConcatMachine::alphabet`].
    pub fn step_index(&self, s: PairState, pos: usize) -> PairState {
        let route = self.routes[pos];
        let focus = match (s.focus, route.left) {
            (Some(q), Some(i)) => Some(self.left.transformation_at(i).apply(q)),
            _ => None,
        };
        let mut subset = match route.right {
            Some(i) => self.right.transformation_at(i).apply_set(s.subset),
            None => StateSet::EMPTY,
        };
        if focus.is_some_and(|q| self.left.finals().contains(q)) {
            subset.insert(self.right.initial());
        }
        let out = PairState { focus, subset };
        debug_assert!(self.is_consistent(out));
        out
    }

    pub fn pair_step(&self, s: PairState, c: char) -> Result<PairState> {
        let pos = self
            .alphabet
            .iter()
            .position(|&x| x == c)
            .ok_or(Error::UnknownLetter(c))?;
        Ok(self.step_index(s, pos))
    }

    pub fn pair_run(&self, s: PairState, w: &Word) -> Result<PairState> {
        w.letters()
            .iter()
            .try_fold(s, |s, &c| self.pair_step(s, c))
    }

    pub fn pair_accepts(&self, s: PairState) -> bool {
        !s.subset.intersection(self.right.finals()).is_empty()
    }

    /// A final left focus forces the right initial state into the subset.
    pub fn is_consistent(&self, s: PairState) -> bool {
        match s.focus {
            Some(q) if self.left.finals().contains(q) => s.subset.contains(self.right.initial()),
            _ => true,
        }
    }
}
