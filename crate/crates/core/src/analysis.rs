//! Brute-force facts about concatenation DFAs: reachable states,
//! distinguishability classes, minimal DFA sizes, and the generic upper bound.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::concat::{ConcatMachine, Mode, PairGraph, PairState};
use crate::dfa::Dfa;
use crate::error::{Error, Result};

/// A partition of a state list into classes numbered `0..count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub class_of: Vec<usize>,
    pub count: usize,
}

impl Partition {
    pub fn same_class(&self, i: usize, j: usize) -> bool {
        self.class_of[i] == self.class_of[j]
    }
}

fn renumber(keys: &[Vec<usize>]) -> Partition {
    let mut ids: HashMap<&[usize], usize> = HashMap::new();
    let class_of: Vec<usize> = keys
        .iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k.as_slice()).or_insert(next)
        })
        .collect();
    Partition {
        count: ids.len(),
        class_of,
    }
}

/// Moore refinement: split classes by successor classes until stable.
pub fn refine(initial: &[usize], successors: &[Vec<usize>]) -> Partition {
    let mut current = renumber(&initial.iter().map(|&c| vec![c]).collect::<Vec<_>>());
    loop {
        let keys: Vec<Vec<usize>> = successors
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut key = Vec::with_capacity(row.len() + 1);
                key.push(current.class_of[i]);
                key.extend(row.iter().map(|&j| current.class_of[j]));
                key
            })
            .collect();
        let next = renumber(&keys);
        if next.count == current.count {
            return next;
        }
        current = next;
    }
}

pub fn reachable_states(machine: &ConcatMachine) -> Vec<PairState> {
    PairGraph::explore(machine).states
}

/// Coarsest partition of `states` that separates accepting from
/// non-accepting states and is stable under every letter.
pub fn distinguishability_classes(machine: &ConcatMachine, states: &[PairState]) -> Result<Partition> {
    let index: HashMap<PairState, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut successors = Vec::with_capacity(states.len());
    for &s in states {
        let mut row = Vec::with_capacity(machine.alphabet().len());
        for pos in 0..machine.alphabet().len() {
            let t = machine.step_index(s, pos);
            let j = index.get(&t).ok_or_else(|| {
                Error::Precondition(format!(
                    "state set is not closed: {s} -{}-> {t}",
                    machine.alphabet()[pos]
                ))
            })?;
            row.push(*j);
        }
        successors.push(row);
    }
    let accepting: Vec<usize> = states.iter().map(|&s| machine.pair_accepts(s) as usize).collect();
    Ok(refine(&accepting, &successors))
}

/// Number of states of the minimal DFA equivalent to `d`.
pub fn minimize_count(d: &Dfa) -> usize {
    let mut order = vec![d.initial()];
    let mut seen = HashMap::from([(d.initial(), 0usize)]);
    let mut successors: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let q = order[i];
        let row = d
            .alphabet()
            .iter()
            .map(|&c| {
                let t = d.step(q, c).expect("letter of d");
                *seen.entry(t).or_insert_with(|| {
                    order.push(t);
                    queue.push_back(order.len() - 1);
                    order.len() - 1
                })
            })
            .collect();
        successors.push(row);
    }
    let accepting: Vec<usize> = order.iter().map(|&q| d.finals().contains(q) as usize).collect();
    refine(&accepting, &successors).count
}

/// Upper bound on reachable states of the concatenation DFA when the left
/// automaton has `m` states, `k` of them final, and the right has `n`.
pub fn upper_bound(m: usize, n: usize, k: usize, mode: Mode) -> Result<u64> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("m and n must be positive".into()));
    }
    if k > m {
        return Err(Error::FinalCountOutOfRange { k, m });
    }
    let full = 1u64 << n;
    let half = full / 2;
    let (m, k) = (m as u64, k as u64);
    Ok(match mode {
        Mode::Unrestricted => (m + 1 - k) * full + k * half,
        Mode::Restricted => (m - k) * full + k * half,
    })
}

/// Summary of the reachable part of a concatenation DFA.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachReport {
    pub m: usize,
    pub n: usize,
    pub final_count: usize,
    pub mode: Mode,
    pub reachable_count: usize,
    pub class_count: usize,
    pub upper_bound: u64,
    pub within_bound: bool,
    /// Reachable-state counts keyed by rendered focus (`1'`, `2'`, ..., `∅`).
    pub by_focus: BTreeMap<String, usize>,
    #[serde(skip)]
    pub states: Vec<PairState>,
}

pub fn focus_key(s: &PairState) -> String {
    match s.focus {
        Some(q) => format!("{q}'"),
        None => "∅".to_string(),
    }
}

/// Explores, refines and bounds in one pass. `mode` overrides the inferred one.
pub fn analyze(machine: &ConcatMachine, mode: Option<Mode>) -> Result<ReachReport> {
    let states = reachable_states(machine);
    let partition = distinguishability_classes(machine, &states)?;
    let mode = mode.unwrap_or_else(|| machine.mode());
    let (m, n) = (machine.left().n(), machine.right().n());
    let final_count = machine.left().finals().len();
    let bound = upper_bound(m, n, final_count, mode)?;
    let mut by_focus = BTreeMap::new();
    for s in &states {
        *by_focus.entry(focus_key(s)).or_insert(0) += 1;
    }
    Ok(ReachReport {
        m,
        n,
        final_count,
        mode,
        reachable_count: states.len(),
        class_count: partition.count,
        upper_bound: bound,
        within_bound: states.len() as u64 <= bound,
        by_focus,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stateset::{StateId, StateSet};
    use crate::transform::Term;

    fn maslov(m: usize, n: usize) -> ConcatMachine {
        let a = Dfa::from_terms(m, vec![('a', Term::cycle(1..=m)), ('b', Term::Identity)], 1, [m]).unwrap();
        let b = Dfa::from_terms(n, vec![('a', Term::cycle([n - 1, n])), ('b', Term::ShiftUp(1, n - 1))], 1, [n]).unwrap();
        ConcatMachine::new(a, b)
    }

    #[test]
    fn single_state_machines() {
        let d = Dfa::from_terms(1, vec![('a', Term::Identity)], 1, []).unwrap();
        let mc = ConcatMachine::new(d.clone(), d);
        let states = reachable_states(&mc);
        assert_eq!(states.len(), 1);
        assert_eq!(distinguishability_classes(&mc, &states).unwrap().count, 1);
    }

    #[test]
    fn maslov_three_three() {
        let mc = maslov(3, 3);
        let states = reachable_states(&mc);
        assert_eq!(states.len(), 20);
        assert_eq!(distinguishability_classes(&mc, &states).unwrap().count, 20);
        assert_eq!(minimize_count(mc.left()), 3);
        assert_eq!(minimize_count(mc.right()), 3);
    }

    #[test]
    fn non_closed_input_is_rejected() {
        let mc = maslov(3, 3);
        let states = vec![mc.initial_pair()];
        assert!(distinguishability_classes(&mc, &states).is_err());
    }

    #[test]
    fn equivalent_sinks_merge() {
        // 1 -a-> 2, 1 -b-> 3; 2 and 3 are both accepting sinks
        let d = Dfa::from_terms(3, vec![('a', Term::Map(vec![2, 2, 3])), ('b', Term::Map(vec![3, 2, 3]))], 1, [2, 3]).unwrap();
        assert_eq!(minimize_count(&d), 2);
        let one = Dfa::from_terms(1, vec![('a', Term::Identity)], 1, [1]).unwrap();
        assert_eq!(minimize_count(&one), 1);
    }

    #[test]
    fn unreachable_states_do_not_count() {
        let d = Dfa::from_terms(3, vec![('a', Term::Identity)], 1, [3]).unwrap();
        assert_eq!(minimize_count(&d), 1);
    }

    #[test]
    fn bounds() {
        for (m, n) in [(3, 3), (4, 5), (6, 6)] {
            let p = 1u64 << n;
            assert_eq!(upper_bound(m, n, 1, Mode::Restricted).unwrap(), (m as u64 - 1) * p + p / 2);
            assert_eq!(upper_bound(m, n, 1, Mode::Unrestricted).unwrap(), m as u64 * p + p / 2);
        }
        assert_eq!(upper_bound(1, 1, 1, Mode::Restricted).unwrap(), 1);
        assert!(matches!(upper_bound(2, 3, 3, Mode::Restricted), Err(Error::FinalCountOutOfRange { .. })));
    }

    #[test]
    fn refinement_is_idempotent() {
        let mc = maslov(4, 3);
        let graph = PairGraph::explore(&mc);
        let accepting: Vec<usize> = graph.accepting.iter().map(|&b| b as usize).collect();
        let once = refine(&accepting, &graph.edges);
        let twice = refine(&once.class_of, &graph.edges);
        assert_eq!(once, twice);
    }

    #[test]
    fn report_breaks_down_by_focus() {
        let report = analyze(&maslov(3, 3), None).unwrap();
        assert_eq!(report.mode, Mode::Restricted);
        assert_eq!(report.upper_bound, 20);
        assert!(report.within_bound);
        assert_eq!(report.by_focus.get("1'"), Some(&8));
        assert_eq!(report.by_focus.get("3'"), Some(&4));
        assert_eq!(report.by_focus.values().sum::<usize>(), report.reachable_count);
        assert!(report.states.contains(&PairState::at(StateId::new(3), StateSet::range(1, 3))));
    }
}
