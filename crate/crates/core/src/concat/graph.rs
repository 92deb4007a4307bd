use std::collections::{HashMap, VecDeque};
use std::fmt::Write;

use super::{ConcatMachine, PairState};

/// The reachable part of a concatenation DFA, discovered breadth-first.
///
/// States are numbered in discovery order; letters are tried in machine
/// alphabet order, so numbering is reproducible.
#[derive(Clone, Debug)]
pub struct PairGraph {
    pub alphabet: Vec<char>,
    pub states: Vec<PairState>,
    /// `edges[i][j]` is the successor of state `i` under letter `j`.
    pub edges: Vec<Vec<usize>>,
    pub accepting: Vec<bool>,
    index: HashMap<PairState, usize>,
}

impl PairGraph {
    pub fn explore(machine: &ConcatMachine) -> Self {
        let alphabet = machine.alphabet().to_vec();
        let start = machine.initial_pair();
        let mut states = vec![start];
        let mut index = HashMap::from([(start, 0usize)]);
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let s = states[i];
            let mut row = Vec::with_capacity(alphabet.len());
            for pos in 0..alphabet.len() {
                let t = machine.step_index(s, pos);
                let j = *index.entry(t).or_insert_with(|| {
                    states.push(t);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                row.push(j);
            }
            // FIFO order pops indices 0, 1, 2, ... so rows land at their index
            debug_assert_eq!(edges.len(), i);
            edges.push(row);
        }
        let accepting = states.iter().map(|&s| machine.pair_accepts(s)).collect();
        PairGraph {
            alphabet,
            states,
            edges,
            accepting,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: PairState) -> Option<usize> {
        self.index.get(&s).copied()
    }

    pub fn contains(&self, s: PairState) -> bool {
        self.index.contains_key(&s)
    }

    /// One line per transition: `(1',{}) -a-> (2',{})`, accepting states marked with `*`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.states.iter().enumerate() {
            let mark = if self.accepting[i] { "*" } else { "" };
            let _ = writeln!(out, "{i}: {s}{mark}");
            for (j, &c) in self.alphabet.iter().enumerate() {
                let _ = writeln!(out, "  -{c}-> {}", self.states[self.edges[i][j]]);
            }
        }
        out
    }

    /// Graphviz rendering; parallel edges are merged into one labelled edge.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph concat {\n  rankdir=LR;\n  start [shape=point];\n");
        for (i, s) in self.states.iter().enumerate() {
            let shape = if self.accepting[i] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  s{i} [label=\"{s}\", shape={shape}];");
        }
        out.push_str("  start -> s0;\n");
        for (i, row) in self.edges.iter().enumerate() {
            let mut targets: Vec<(usize, Vec<char>)> = Vec::new();
            for (j, &t) in row.iter().enumerate() {
                match targets.iter_mut().find(|(x, _)| *x == t) {
                    Some((_, letters)) => letters.push(self.alphabet[j]),
                    None => targets.push((t, vec![self.alphabet[j]])),
                }
            }
            for (t, letters) in targets {
                let label: Vec<String> = letters.iter().map(char::to_string).collect();
                let _ = writeln!(out, "  s{i} -> s{t} [label=\"{}\"];", label.join(","));
            }
        }
        out.push_str("}\n");
        out
    }
}
