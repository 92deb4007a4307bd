use std::collections::{BTreeMap, BTreeSet};

use super::{validate_construction_set, Certificate, CompletenessVerdict, Via};
use crate::concat::{ConcatMachine, PairState};
use crate::dfa::Word;
use crate::error::{Error, Result};
use crate::stateset::{StateId, StateSet};
use crate::transform::Transformation;

/// Right-automaton actions of the certificate entries, computed once.
pub(crate) struct EntryActions {
    target: StateSet,
    actions: BTreeMap<StateId, Option<Transformation>>,
}

impl EntryActions {
    pub(crate) fn new(machine: &ConcatMachine, cert: &Certificate) -> Self {
        let actions = cert
            .entries
            .iter()
            .map(|(q, w)| (*q, machine.right().word_transformation(w)))
            .collect();
        EntryActions {
            target: cert.target,
            actions,
        }
    }

    /// `preimage(q, W[p]) ∩ T`.
    pub(crate) fn preimage_in_target(&self, p: StateId, q: StateId) -> StateSet {
        match self.actions.get(&p) {
            Some(Some(t)) => self.target.iter().filter(|&s| t.apply(s) == q).collect(),
            _ => StateSet::EMPTY,
        }
    }

    /// Whether `p` may come before `q` in a completeness order.
    pub(crate) fn may_precede(&self, p: StateId, q: StateId) -> bool {
        !self.preimage_in_target(p, q).is_empty()
    }
}

fn check_order_shape(cert: &Certificate, order: &[StateId]) -> Result<()> {
    let as_set: StateSet = order.iter().copied().collect();
    if order.len() != as_set.len() {
        return Err(Error::InvalidOrder("a state is listed twice".into()));
    }
    if as_set != cert.target {
        return Err(Error::InvalidOrder(format!(
            "order covers {as_set}, target is {}",
            cert.target
        )));
    }
    Ok(())
}

fn require_valid(machine: &ConcatMachine, cert: &Certificate) -> Result<()> {
    let v = validate_construction_set(machine, cert);
    if v.valid {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "not a construction set: {}",
            v.diagnostics.join("; ")
        )))
    }
}

/// True iff for all `i < j`, `preimage(order[j], W[order[i]]) ∩ T ≠ ∅`.
pub fn check_complete_with_order(machine: &ConcatMachine, cert: &Certificate, order: &[StateId]) -> Result<bool> {
    check_order_shape(cert, order)?;
    require_valid(machine, cert)?;
    let actions = EntryActions::new(machine, cert);
    Ok(order
        .iter()
        .enumerate()
        .all(|(i, &p)| order[i + 1..].iter().all(|&q| actions.may_precede(p, q))))
}

fn confirm(machine: &ConcatMachine, cert: &Certificate, via: Via, order: Vec<StateId>, detail: String) -> CompletenessVerdict {
    match check_complete_with_order(machine, cert, &order) {
        Ok(true) => CompletenessVerdict::complete(via, order, detail),
        Ok(false) => CompletenessVerdict::not_shown(format!("{via}: constructed order {} fails the order check", render(&order))),
        Err(e) => CompletenessVerdict::not_shown(format!("{via}: {e}")),
    }
}

fn render(order: &[StateId]) -> String {
    let parts: Vec<String> = order.iter().map(|q| q.to_string()).collect();
    parts.join(" ")
}

/// Decides completeness exactly. `q` must precede `p` whenever
/// `preimage(q, W[p]) ∩ T = ∅`; the set is complete iff these constraints
/// are acyclic. The returned order is the topological sort that always
/// picks the smallest available state.
pub fn decide_complete(machine: &ConcatMachine, cert: &Certificate) -> Result<CompletenessVerdict> {
    require_valid(machine, cert)?;
    let actions = EntryActions::new(machine, cert);
    let states: Vec<StateId> = cert.target.iter().collect();
    // successors[q] = states that q must precede
    let mut successors: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
    let mut indegree: BTreeMap<StateId, usize> = states.iter().map(|&q| (q, 0)).collect();
    for &p in &states {
        for &q in &states {
            if p != q && !actions.may_precede(p, q) {
                successors.entry(q).or_default().push(p);
                *indegree.get_mut(&p).expect("target state") += 1;
            }
        }
    }

    let mut ready: BTreeSet<StateId> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&q, _)| q).collect();
    let mut order = Vec::with_capacity(states.len());
    while let Some(q) = ready.pop_first() {
        order.push(q);
        for &p in successors.get(&q).into_iter().flatten() {
            let d = indegree.get_mut(&p).expect("target state");
            *d -= 1;
            if *d == 0 {
                ready.insert(p);
            }
        }
    }
    if order.len() == states.len() {
        let detail = format!("must-precede constraints are acyclic; order {}", render(&order));
        return Ok(CompletenessVerdict::complete(Via::Decided, order, detail));
    }

    // Every unplaced state still has an unplaced predecessor; walk
    // predecessors until one repeats.
    let placed: StateSet = order.iter().copied().collect();
    let predecessor = |p: StateId| {
        states
            .iter()
            .copied()
            .find(|&q| !placed.contains(q) && q != p && !actions.may_precede(p, q))
            .expect("unplaced state has an unplaced predecessor")
    };
    let mut walk = vec![states.iter().copied().find(|&q| !placed.contains(q)).expect("unplaced state")];
    let cycle = loop {
        let next = predecessor(*walk.last().expect("nonempty walk"));
        if let Some(pos) = walk.iter().position(|&q| q == next) {
            let mut cycle: Vec<StateId> = walk[pos..].to_vec();
            cycle.reverse();
            break cycle;
        }
        walk.push(next);
    };
    let mut shown: Vec<String> = cycle.iter().map(|q| q.to_string()).collect();
    shown.push(cycle[0].to_string());
    let mut verdict = CompletenessVerdict::not_shown(format!(
        "not complete: must-precede cycle {}",
        shown.join(" -> ")
    ));
    verdict.cycle = Some(cycle);
    Ok(verdict)
}

/// Distinct entry words in length-lexicographic order.
fn sorted_words(cert: &Certificate) -> Vec<Word> {
    let mut words: Vec<Word> = cert.entries.values().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words.dedup();
    words
}

/// Checks `words == [x y, x y², ..., x y^k]` and returns `y`.
fn powers_after(words: &[Word], x: &Word) -> Option<Word> {
    let Some(first) = words.first() else {
        return Some(Word::empty());
    };
    let y = first.strip_prefix(x)?;
    if y.is_empty() {
        return None;
    }
    words
        .iter()
        .enumerate()
        .all(|(i, w)| *w == x.then(&y.pow(i + 1)))
        .then_some(y)
}

fn order_for(cert: &Certificate, sequence: &[Word]) -> Vec<StateId> {
    let owners = cert.word_owners();
    sequence
        .iter()
        .flat_map(|w| owners.get(w).cloned().unwrap_or_default())
        .collect()
}

/// Recognizes the four closed forms of complete construction sets
/// (`{y^i}`, `{ε} ∪ {y^i}`, `{x} ∪ {x y^i}`, `{ε, x} ∪ {x y^i}` with `x`
/// permuting the target) and confirms the induced order.
pub fn match_corollary_forms(machine: &ConcatMachine, cert: &Certificate) -> Result<CompletenessVerdict> {
    require_valid(machine, cert)?;
    let words = sorted_words(cert);
    let has_eps = words.first().is_some_and(Word::is_empty);
    let nonempty: Vec<Word> = words.iter().filter(|w| !w.is_empty()).cloned().collect();
    let eps_prefix: Vec<Word> = if has_eps { vec![Word::empty()] } else { Vec::new() };
    let mut notes = Vec::new();

    let y_form = if has_eps { Via::CorForm2 } else { Via::CorForm1 };
    if powers_after(&nonempty, &Word::empty()).is_some() {
        let seq: Vec<Word> = eps_prefix.iter().chain(&nonempty).cloned().collect();
        let y = nonempty.first().cloned().unwrap_or_default();
        let v = confirm(machine, cert, y_form, order_for(cert, &seq), format!("powers of y = {y}"));
        if v.complete {
            return Ok(v);
        }
        notes.push(v.detail);
    }

    let xy_form = if has_eps { Via::CorForm4 } else { Via::CorForm3 };
    if let Some((x, rest)) = nonempty.split_first() {
        if let Some(y) = powers_after(rest, x) {
            if machine.right().acts_as_permutation(x, cert.target) {
                let seq: Vec<Word> = eps_prefix.iter().chain(&nonempty).cloned().collect();
                let v = confirm(machine, cert, xy_form, order_for(cert, &seq), format!("x = {x}, y = {y}"));
                if v.complete {
                    return Ok(v);
                }
                notes.push(v.detail);
            } else {
                notes.push(format!("x = {x} does not permute the target"));
            }
        }
    }

    if notes.is_empty() {
        notes.push("words are not of the form y^i or x y^i".into());
    }
    Ok(CompletenessVerdict::not_shown(notes.join("; ")))
}

/// Sufficient condition: every `x ∈ xs` permutes `T`, `x0 ∈ {ε} ∪ xs`,
/// and the distinct words are exactly `xs ∪ { x0 y^i : 1 ≤ i ≤ k }`.
pub fn check_lemma_complete(
    machine: &ConcatMachine,
    cert: &Certificate,
    xs: &[Word],
    x0: &Word,
    y: &Word,
) -> Result<CompletenessVerdict> {
    require_valid(machine, cert)?;
    if y.is_empty() {
        return Ok(CompletenessVerdict::not_shown("y must be nonempty"));
    }
    if let Some(x) = xs.iter().find(|x| !machine.right().acts_as_permutation(x, cert.target)) {
        return Ok(CompletenessVerdict::not_shown(format!("{x} does not permute the target")));
    }
    if !x0.is_empty() && !xs.contains(x0) {
        return Ok(CompletenessVerdict::not_shown(format!("x0 = {x0} is neither ε nor one of the x_i")));
    }
    let words: BTreeSet<Word> = cert.entries.values().cloned().collect();
    let base: BTreeSet<Word> = xs.iter().cloned().collect();
    if !base.is_subset(&words) {
        return Ok(CompletenessVerdict::not_shown("some x_i is not an entry word"));
    }
    let mut candidate = base.clone();
    let mut k = 0;
    while candidate.len() < words.len() && k <= words.len() {
        k += 1;
        candidate.insert(x0.then(&y.pow(k)));
    }
    if candidate != words {
        return Ok(CompletenessVerdict::not_shown(format!(
            "entry words are not x_i together with {x0}·({y})^i"
        )));
    }
    let mut seq: Vec<Word> = Vec::new();
    for w in xs.iter().cloned().chain((1..=k).map(|i| x0.then(&y.pow(i)))) {
        if !seq.contains(&w) {
            seq.push(w);
        }
    }
    Ok(confirm(
        machine,
        cert,
        Via::LemComplete,
        order_for(cert, &seq),
        format!("x0 = {x0}, y = {y}, k = {k}"),
    ))
}

/// Tries `x0 = ε` and then every `x_i` in turn.
pub fn find_lemma_decomposition(
    machine: &ConcatMachine,
    cert: &Certificate,
    xs: &[Word],
    y: &Word,
) -> Result<CompletenessVerdict> {
    let mut notes = Vec::new();
    for x0 in std::iter::once(Word::empty()).chain(xs.iter().cloned()) {
        let v = check_lemma_complete(machine, cert, xs, &x0, y)?;
        if v.complete {
            return Ok(v);
        }
        notes.push(format!("x0 = {x0}: {}", v.detail));
    }
    Ok(CompletenessVerdict::not_shown(notes.join("; ")))
}

/// Complete when all entry words, or all but one, permute the target; the
/// exceptional word's states go last.
pub fn check_all_but_one_perm(machine: &ConcatMachine, cert: &Certificate) -> Result<CompletenessVerdict> {
    require_valid(machine, cert)?;
    let words = sorted_words(cert);
    let (perms, others): (Vec<Word>, Vec<Word>) = words
        .into_iter()
        .partition(|w| machine.right().acts_as_permutation(w, cert.target));
    let (via, detail) = match others.as_slice() {
        [] => (Via::PermAll, "every entry word permutes the target".to_string()),
        [w] => (Via::PermAllButOne, format!("every entry word except {w} permutes the target")),
        _ => {
            let shown: Vec<String> = others.iter().map(|w| w.to_string()).collect();
            return Ok(CompletenessVerdict::not_shown(format!(
                "{} entry words do not permute the target: {}",
                others.len(),
                shown.join(", ")
            )));
        }
    };
    let seq: Vec<Word> = perms.into_iter().chain(others).collect();
    Ok(confirm(machine, cert, via, order_for(cert, &seq), detail))
}

/// Complete when `ε` is an entry and every other entry word permutes some
/// `S` with `T \ B ⊆ S ⊆ T`. States with entry `ε` go first.
pub fn check_eps_perm(machine: &ConcatMachine, cert: &Certificate) -> Result<CompletenessVerdict> {
    require_valid(machine, cert)?;
    let words = sorted_words(cert);
    if !words.first().is_some_and(Word::is_empty) {
        return Ok(CompletenessVerdict::not_shown("ε is not an entry word"));
    }
    let outside = cert.target.difference(cert.base);
    let mut found = Vec::new();
    for w in words.iter().filter(|w| !w.is_empty()) {
        match outside.interval(cert.target).find(|&s| machine.right().acts_as_permutation(w, s)) {
            Some(s) => found.push(format!("{w} permutes {s}")),
            None => {
                return Ok(CompletenessVerdict::not_shown(format!(
                    "{w} permutes no S with {outside} ⊆ S ⊆ {}",
                    cert.target
                )))
            }
        }
    }
    let eps = cert.entries.iter().filter(|(_, w)| w.is_empty()).map(|(q, _)| *q);
    let rest = cert.entries.iter().filter(|(_, w)| !w.is_empty()).map(|(q, _)| *q);
    let order: Vec<StateId> = eps.chain(rest).collect();
    let detail = if found.is_empty() { "only ε".to_string() } else { found.join(", ") };
    Ok(confirm(machine, cert, Via::EpsPerm, order, detail))
}

/// Validates the construction set and tries, in order: the certificate's own
/// order, the closed forms, the permutation conditions, the ε-permutation
/// condition, and finally the exact decision procedure. Also checks that the
/// base word, when present, reaches `(focus, base)`.
pub fn verify_master(machine: &ConcatMachine, cert: &Certificate) -> Result<CompletenessVerdict> {
    let validation = validate_construction_set(machine, cert);
    let base_reached = cert.base_word.as_ref().map(|w| {
        machine
            .pair_run(machine.initial_pair(), w)
            .is_ok_and(|s| s == PairState::at(cert.focus, cert.base))
    });
    if !validation.valid {
        let mut v = CompletenessVerdict::not_shown("not a construction set");
        v.diagnostics = validation.diagnostics;
        v.base_reached = base_reached;
        return Ok(v);
    }

    let mut notes = Vec::new();
    let mut verdict = None;
    if let Some(order) = &cert.order {
        match check_complete_with_order(machine, cert, order) {
            Ok(true) => {
                verdict = Some(CompletenessVerdict::complete(
                    Via::GivenOrder,
                    order.clone(),
                    format!("given order {} passes", render(order)),
                ))
            }
            Ok(false) => notes.push(format!("given order {} fails", render(order))),
            Err(e) => notes.push(e.to_string()),
        }
    }
    let checks: [fn(&ConcatMachine, &Certificate) -> Result<CompletenessVerdict>; 3] =
        [match_corollary_forms, check_all_but_one_perm, check_eps_perm];
    for check in checks {
        if verdict.is_some() {
            break;
        }
        let v = check(machine, cert)?;
        if v.complete {
            verdict = Some(v);
        }
    }
    let mut verdict = match verdict {
        Some(v) => v,
        None => decide_complete(machine, cert)?,
    };
    verdict.diagnostics.extend(notes);
    verdict.base_reached = base_reached;
    Ok(verdict)
}
