//! Construction-set certificates for reachability in concatenation DFAs.
//!
//! A certificate fixes a focus state `s'` of the left automaton, a base set
//! `B` and a target `T ⊇ B` of right states, and gives one q-word per
//! `q ∈ T`: a word taking `(s', B)` to `(s', B ∪ {q})`. If the entries can be
//! totally ordered so that each later target state has an in-target
//! preimage under every earlier entry, every `(s', S)` with `B ⊆ S ⊆ T` is
//! reachable from `(s', B)`, and [`synthesize_reach_word`] produces the word.

mod completeness;
mod format;
mod oracle;
mod synth;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::concat::{ConcatMachine, PairState};
use crate::dfa::Word;
use crate::stateset::{StateId, StateSet};

pub use completeness::{
    check_all_but_one_perm, check_complete_with_order, check_eps_perm, check_lemma_complete,
    decide_complete, find_lemma_decomposition, match_corollary_forms, verify_master,
};
pub use format::parse_certificate;
pub use oracle::{exhaustive_order_search, MAX_ORACLE_TARGET};
pub use synth::{check_reach_all, synthesize_reach_word, ReachCheck, MAX_FREE_STATES};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub focus: StateId,
    pub base: StateSet,
    pub target: StateSet,
    /// `entries[q]` is the q-word for `q`.
    pub entries: BTreeMap<StateId, Word>,
    pub order: Option<Vec<StateId>>,
    /// A word reaching `(focus, base)` from the initial pair state.
    pub base_word: Option<Word>,
}

impl Certificate {
    pub fn new(focus: StateId, base: StateSet, target: StateSet) -> Self {
        Certificate {
            focus,
            base,
            target,
            entries: BTreeMap::new(),
            order: None,
            base_word: None,
        }
    }

    pub fn with_entry(mut self, q: StateId, w: Word) -> Self {
        self.entries.insert(q, w);
        self
    }

    pub fn with_base_word(mut self, w: Word) -> Self {
        self.base_word = Some(w);
        self
    }

    pub fn start(&self) -> PairState {
        PairState::at(self.focus, self.base)
    }

    /// Distinct entry words, each with the target states it is the entry for.
    pub(crate) fn word_owners(&self) -> BTreeMap<&Word, Vec<StateId>> {
        let mut owners: BTreeMap<&Word, Vec<StateId>> = BTreeMap::new();
        for (q, w) in &self.entries {
            owners.entry(w).or_default().push(*q);
        }
        owners
    }
}

/// Which sufficient condition established completeness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Via {
    #[serde(rename = "given-order")]
    GivenOrder,
    #[serde(rename = "decided")]
    Decided,
    #[serde(rename = "cor-complete-form-1")]
    CorForm1,
    #[serde(rename = "cor-complete-form-2")]
    CorForm2,
    #[serde(rename = "cor-complete-form-3")]
    CorForm3,
    #[serde(rename = "cor-complete-form-4")]
    CorForm4,
    #[serde(rename = "cor-perm-all")]
    PermAll,
    #[serde(rename = "cor-perm-all-but-one")]
    PermAllButOne,
    #[serde(rename = "lem-complete")]
    LemComplete,
    #[serde(rename = "lem-eps-perm")]
    EpsPerm,
}

impl Via {
    pub fn tag(self) -> &'static str {
        match self {
            Via::GivenOrder => "given-order",
            Via::Decided => "decided",
            Via::CorForm1 => "cor-complete-form-1",
            Via::CorForm2 => "cor-complete-form-2",
            Via::CorForm3 => "cor-complete-form-3",
            Via::CorForm4 => "cor-complete-form-4",
            Via::PermAll => "cor-perm-all",
            Via::PermAllButOne => "cor-perm-all-but-one",
            Via::LemComplete => "lem-complete",
            Via::EpsPerm => "lem-eps-perm",
        }
    }

    pub fn is_corollary_form(self) -> bool {
        matches!(self, Via::CorForm1 | Via::CorForm2 | Via::CorForm3 | Via::CorForm4)
    }
}

impl fmt::Display for Via {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Outcome of a completeness check. `complete` implies `order` is present
/// and passes [`check_complete_with_order`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessVerdict {
    pub complete: bool,
    pub order: Option<Vec<StateId>>,
    pub via: Option<Via>,
    pub detail: String,
    /// A must-precede cycle, when completeness was refuted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<StateId>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    /// Whether the certificate's base word reaches `(focus, base)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_reached: Option<bool>,
}

impl CompletenessVerdict {
    pub(crate) fn complete(via: Via, order: Vec<StateId>, detail: impl Into<String>) -> Self {
        CompletenessVerdict {
            complete: true,
            order: Some(order),
            via: Some(via),
            detail: detail.into(),
            cycle: None,
            diagnostics: Vec::new(),
            base_reached: None,
        }
    }

    pub(crate) fn not_shown(detail: impl Into<String>) -> Self {
        CompletenessVerdict {
            complete: false,
            order: None,
            via: None,
            detail: detail.into(),
            cycle: None,
            diagnostics: Vec::new(),
            base_reached: None,
        }
    }
}

/// Result of checking that a certificate's entries form a construction set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

/// `(s', B)·w = (s', B ∪ {q})`.
pub fn is_q_word(machine: &ConcatMachine, cert: &Certificate, w: &Word, q: StateId) -> bool {
    machine
        .pair_run(cert.start(), w)
        .is_ok_and(|s| s == PairState::at(cert.focus, cert.base.with(q)))
}

fn render_letters(letters: &[char]) -> String {
    let parts: Vec<String> = letters.iter().map(char::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Checks shape (focus, `B ⊆ T`, one entry per target state), that every
/// entry is a word over the shared alphabet, and that it is a q-word.
pub fn validate_construction_set(machine: &ConcatMachine, cert: &Certificate) -> Validation {
    let mut diagnostics = Vec::new();
    let (m, n) = (machine.left().n(), machine.right().n());
    if cert.focus.index() > m {
        diagnostics.push(format!("focus {}' is not a state of the left automaton (m = {m})", cert.focus));
    }
    if cert.target.max_index() > n {
        diagnostics.push(format!("target {} is not within 1..={n}", cert.target));
    }
    if !cert.base.is_subset(cert.target) {
        diagnostics.push(format!("base {} is not contained in target {}", cert.base, cert.target));
    }
    for q in cert.target.iter() {
        if !cert.entries.contains_key(&q) {
            diagnostics.push(format!("entry {q}: missing (every target state needs a q-word)"));
        }
    }
    let shared = machine.shared();
    for (q, w) in &cert.entries {
        if !cert.target.contains(*q) {
            diagnostics.push(format!("entry {q}: {q} is not in the target {}", cert.target));
            continue;
        }
        if let Some(c) = w.letters().iter().find(|c| !shared.contains(c)) {
            diagnostics.push(format!(
                "entry {q}: word {w} uses letter '{c}' outside the shared alphabet {}; \
                 a complete construction set must consist of words over the shared alphabet",
                render_letters(shared)
            ));
            continue;
        }
        if diagnostics.iter().any(|d| d.starts_with("focus") || d.starts_with("target")) {
            continue;
        }
        if !is_q_word(machine, cert, w, *q) {
            let got = machine
                .pair_run(cert.start(), w)
                .map(|s| s.to_string())
                .unwrap_or_else(|e| e.to_string());
            diagnostics.push(format!(
                "entry {q}: {}·{w} = {got}, expected {}",
                cert.start(),
                PairState::at(cert.focus, cert.base.with(*q))
            ));
        }
    }
    if let Some(order) = &cert.order {
        let as_set: StateSet = order.iter().copied().collect();
        if order.len() != cert.target.len() || as_set != cert.target {
            diagnostics.push("order does not list each target state exactly once".to_string());
        }
    }
    Validation {
        valid: diagnostics.is_empty(),
        diagnostics,
    }
}
