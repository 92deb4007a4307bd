use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::completeness::{check_complete_with_order, EntryActions};
use super::Certificate;
use crate::concat::{ConcatMachine, PairState};
use crate::dfa::Word;
use crate::error::{Error, Result};
use crate::stateset::{StateId, StateSet};

/// A word taking `(s', B)` to `(s', S)` for `B ⊆ S ⊆ T`, built from a
/// completeness order: if `p` is the first state of `S \ B` in the order,
/// reach the least in-target preimages of the rest of `S \ B` under `W[p]`
/// first, then apply `W[p]`.
pub fn synthesize_reach_word(
    machine: &ConcatMachine,
    cert: &Certificate,
    order: &[StateId],
    subset: StateSet,
) -> Result<Word> {
    if !check_complete_with_order(machine, cert, order)? {
        return Err(Error::Precondition(
            "the order does not witness completeness".into(),
        ));
    }
    if !cert.base.is_subset(subset) || !subset.is_subset(cert.target) {
        return Err(Error::Precondition(format!(
            "{subset} is not between base {} and target {}",
            cert.base, cert.target
        )));
    }
    let actions = EntryActions::new(machine, cert);
    let mut pieces: Vec<&Word> = Vec::new();
    let mut rest = subset.difference(cert.base);
    while let Some(&p) = order.iter().find(|&&p| rest.contains(p)) {
        let mut before = StateSet::EMPTY;
        for q in rest.without(p).iter() {
            let pre = actions
                .preimage_in_target(p, q)
                .min()
                .expect("order check guarantees a preimage");
            before.insert(pre);
        }
        pieces.push(&cert.entries[&p]);
        rest = before.difference(cert.base);
    }
    Ok(pieces.iter().rev().fold(Word::empty(), |acc, w| acc.then(w)))
}

/// Outcome of synthesizing and replaying a word for every `B ⊆ S ⊆ T`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachCheck {
    pub subsets: usize,
    pub failures: Vec<String>,
}

/// Largest `|T \ B|` for which [`check_reach_all`] enumerates subsets.
pub const MAX_FREE_STATES: usize = 20;

/// Synthesizes a word for every `S` between base and target, replays it from
/// `(s', B)`, and, when `reachable` is given, checks that `(s', S)` is in it.
pub fn check_reach_all(
    machine: &ConcatMachine,
    cert: &Certificate,
    order: &[StateId],
    reachable: Option<&HashSet<PairState>>,
) -> Result<ReachCheck> {
    let free = cert.target.difference(cert.base).len();
    if free > MAX_FREE_STATES {
        return Err(Error::Precondition(format!(
            "{free} free states is too many subsets to enumerate"
        )));
    }
    let mut out = ReachCheck::default();
    for s in cert.base.interval(cert.target) {
        out.subsets += 1;
        let w = synthesize_reach_word(machine, cert, order, s)?;
        let want = PairState::at(cert.focus, s);
        match machine.pair_run(cert.start(), &w) {
            Ok(got) if got == want => {}
            Ok(got) => out.failures.push(format!("{s}: {w} leads to {got}, not {want}")),
            Err(e) => out.failures.push(format!("{s}: {e}")),
        }
        if reachable.is_some_and(|r| !r.contains(&want)) {
            out.failures.push(format!("{want} is not among the reachable states"));
        }
    }
    Ok(out)
}
