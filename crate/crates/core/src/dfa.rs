//! Deterministic automata over single-character letters, words, and the
//! images and preimages words induce on state sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stateset::{eval_state_expr, parse_state_set, StateId, StateSet, MAX_STATES};
use crate::transform::{make_transformation, parse_term, Term, Transformation};

/// A finite word. The empty word renders as `ε`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<char>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, c: char) {
        self.0.push(c);
    }

    /// `self` repeated `k` times.
    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn then(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    pub fn is_over(&self, alphabet: &[char]) -> bool {
        self.0.iter().all(|c| alphabet.contains(c))
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        s.parse().expect("word literal")
    }
}

impl FromIterator<char> for Word {
    fn from_iter<I: IntoIterator<Item = char>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "eps" {
            return Ok(Word::empty());
        }
        if let Some(c) = s.chars().find(|c| c.is_whitespace() || *c == 'ε') {
            return Err(Error::parse(0, format!("invalid letter {c:?} in word '{s}'")));
        }
        Ok(Word(s.chars().collect()))
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> Self {
        w.to_string()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// A complete DFA on states `1..=n` with one transformation per letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    n: usize,
    alphabet: Vec<char>,
    delta: Vec<Transformation>,
    initial: StateId,
    finals: StateSet,
}

impl Dfa {
    pub fn new(
        n: usize,
        transitions: Vec<(char, Transformation)>,
        initial: StateId,
        finals: StateSet,
    ) -> Result<Self> {
        if n == 0 || n > MAX_STATES {
            return Err(Error::TooManyStates(n));
        }
        StateId::checked(initial.index(), n)?;
        if finals.max_index() > n {
            return Err(Error::StateOutOfRange {
                state: finals.max_index(),
                n,
            });
        }
        let mut alphabet = Vec::with_capacity(transitions.len());
        let mut delta = Vec::with_capacity(transitions.len());
        for (c, t) in transitions {
            if alphabet.contains(&c) {
                return Err(Error::InvalidTransformation(format!(
                    "letter '{c}' defined twice"
                )));
            }
            if t.n() != n {
                return Err(Error::SizeMismatch { left: n, right: t.n() });
            }
            alphabet.push(c);
            delta.push(t);
        }
        Ok(Dfa {
            n,
            alphabet,
            delta,
            initial,
            finals,
        })
    }

    /// Builds from notation terms, e.g. `[('a', Term::cycle(1..=n))]`.
    pub fn from_terms(
        n: usize,
        letters: Vec<(char, Term)>,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let transitions = letters
            .into_iter()
            .map(|(c, term)| Ok((c, make_transformation(&term, n)?)))
            .collect::<Result<Vec<_>>>()?;
        let finals = finals
            .into_iter()
            .map(|q| StateId::checked(q, n))
            .collect::<Result<StateSet>>()?;
        Dfa::new(n, transitions, StateId::checked(initial, n)?, finals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> StateSet {
        self.finals
    }

    pub fn states(&self) -> StateSet {
        StateSet::full(self.n)
    }

    pub fn letter_index(&self, c: char) -> Option<usize> {
        self.alphabet.iter().position(|&x| x == c)
    }

    pub fn has_letter(&self, c: char) -> bool {
        self.letter_index(c).is_some()
    }

    /// Transformation of the letter at position `i` of the alphabet.
    pub fn transformation_at(&self, i: usize) -> &Transformation {
        &self.delta[i]
    }

    pub fn transformation(&self, c: char) -> Option<&Transformation> {
        self.letter_index(c).map(|i| &self.delta[i])
    }

    pub fn step(&self, q: StateId, c: char) -> Option<StateId> {
        self.transformation(c).map(|t| t.apply(q))
    }

    /// The transformation induced by `w`, or `None` if `w` leaves the alphabet.
    pub fn word_transformation(&self, w: &Word) -> Option<Transformation> {
        let mut acc = Transformation::identity(self.n);
        for &c in w.letters() {
            acc = acc.compose(self.transformation(c)?).expect("same n");
        }
        Some(acc)
    }

    pub fn run(&self, q: StateId, w: &Word) -> Option<StateId> {
        w.letters().iter().try_fold(q, |q, &c| self.step(q, c))
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run(self.initial, w)
            .is_some_and(|q| self.finals.contains(q))
    }

    /// `S·w`; empty when `w` is not a word over the alphabet.
    pub fn image_of_set(&self, set: StateSet, w: &Word) -> StateSet {
        let mut cur = set;
        for &c in w.letters() {
            match self.transformation(c) {
                Some(t) => cur = t.apply_set(cur),
                None => return StateSet::EMPTY,
            }
        }
        cur
    }

    /// `{ s : s·w = q }`; empty when `w` is not a word over the alphabet.
    pub fn preimage(&self, q: StateId, w: &Word) -> StateSet {
        match self.word_transformation(w) {
            Some(t) => self.states().iter().filter(|&s| t.apply(s) == q).collect(),
            None => StateSet::EMPTY,
        }
    }

    pub fn acts_as_permutation(&self, w: &Word, set: StateSet) -> bool {
        self.image_of_set(set, w) == set
    }

    /// Renders in the block text format accepted by [`parse_dfas`].
    pub fn to_text(&self, name: &str) -> String {
        let mut out = format!("dfa {name}\nstates {}\nalphabet", self.n);
        for c in &self.alphabet {
            out.push(' ');
            out.push(*c);
        }
        out.push_str(&format!("\ninitial {}\nfinal", self.initial));
        for q in self.finals.iter() {
            out.push_str(&format!(" {q}"));
        }
        out.push('\n');
        for (c, t) in self.alphabet.iter().zip(&self.delta) {
            out.push_str(&format!("{c}: {}\n", t.to_notation()));
        }
        out
    }
}

struct Block {
    name: String,
    line: usize,
    n: Option<usize>,
    alphabet: Option<Vec<char>>,
    initial: Option<StateId>,
    finals: Option<StateSet>,
    rows: Vec<(char, Transformation, usize)>,
}

impl Block {
    fn new(name: String, line: usize) -> Self {
        Block {
            name,
            line,
            n: None,
            alphabet: None,
            initial: None,
            finals: None,
            rows: Vec::new(),
        }
    }

    fn n(&self, line: usize) -> Result<usize> {
        self.n
            .ok_or_else(|| Error::parse(line, "'states' must come before this line"))
    }

    fn finish(self) -> Result<(String, Dfa)> {
        let line = self.line;
        let n = self.n.ok_or_else(|| Error::parse(line, "missing 'states'"))?;
        let alphabet = self
            .alphabet
            .ok_or_else(|| Error::parse(line, "missing 'alphabet'"))?;
        let mut transitions = Vec::with_capacity(alphabet.len());
        for c in &alphabet {
            let row = self
                .rows
                .iter()
                .find(|(x, _, _)| x == c)
                .ok_or_else(|| Error::parse(line, format!("no transition row for letter '{c}'")))?;
            transitions.push((*c, row.1.clone()));
        }
        let initial = self.initial.unwrap_or(StateId::new(1));
        let finals = self.finals.unwrap_or_default();
        let dfa = Dfa::new(n, transitions, initial, finals)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        Ok((self.name, dfa))
    }
}

/// Parses one or more `dfa NAME` blocks. A file holding a single automaton
/// may omit the `dfa` header line.
pub fn parse_dfas(text: &str) -> Result<Vec<(String, Dfa)>> {
    let mut blocks: Vec<Block> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix("dfa") {
            if name.is_empty() || name.starts_with(char::is_whitespace) {
                blocks.push(Block::new(name.trim().to_string(), line));
                continue;
            }
        }
        if blocks.is_empty() {
            blocks.push(Block::new(String::new(), line));
        }
        let block = blocks.last_mut().unwrap();
        let (key, value) = match content.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => (content, ""),
        };
        match key {
            "states" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad state count '{value}'")))?;
                if n == 0 || n > MAX_STATES {
                    return Err(Error::parse(line, format!("state count {n} outside 1..={MAX_STATES}")));
                }
                block.n = Some(n);
            }
            "alphabet" => {
                let mut letters = Vec::new();
                for tok in value.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                    let mut chars = tok.chars();
                    let c = chars.next().unwrap();
                    if chars.next().is_some() || c == ':' {
                        return Err(Error::parse(line, format!("letters are single characters, found '{tok}'")));
                    }
                    if letters.contains(&c) {
                        return Err(Error::parse(line, format!("letter '{c}' declared twice")));
                    }
                    letters.push(c);
                }
                block.alphabet = Some(letters);
            }
            "initial" => {
                let n = block.n(line)?;
                let v = eval_state_expr(value, &[('n', n)]).map_err(|e| Error::parse(line, e))?;
                block.initial = Some(StateId::checked(v, n).map_err(|e| Error::parse(line, e.to_string()))?);
            }
            "final" | "finals" => {
                let n = block.n(line)?;
                let syms = [('n', n)];
                let set = if value.starts_with('{') || value == "∅" {
                    parse_state_set(value, n, &syms).map_err(|e| Error::parse(line, e))?
                } else {
                    let mut set = StateSet::EMPTY;
                    for tok in value.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                        let v = eval_state_expr(tok, &syms).map_err(|e| Error::parse(line, e))?;
                        set.insert(StateId::checked(v, n).map_err(|e| Error::parse(line, e.to_string()))?);
                    }
                    set
                };
                block.finals = Some(set);
            }
            _ => {
                let (letter, body) = content
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line, format!("unrecognised line '{content}'")))?;
                let letter = letter.trim();
                let mut chars = letter.chars();
                let (Some(c), None) = (chars.next(), chars.next()) else {
                    return Err(Error::parse(line, format!("unrecognised line '{content}'")));
                };
                let alphabet = block
                    .alphabet
                    .as_ref()
                    .ok_or_else(|| Error::parse(line, "'alphabet' must come before transition rows"))?;
                if !alphabet.contains(&c) {
                    return Err(Error::parse(line, format!("row for undeclared letter '{c}'")));
                }
                if block.rows.iter().any(|(x, _, _)| *x == c) {
                    return Err(Error::parse(line, format!("second row for letter '{c}'")));
                }
                let n = block.n(line)?;
                let term = parse_term(body, &[('n', n)]).map_err(|e| Error::parse(line, e))?;
                let t = make_transformation(&term, n).map_err(|e| Error::parse(line, e.to_string()))?;
                block.rows.push((c, t, line));
            }
        }
    }
    if blocks.is_empty() {
        return Err(Error::parse(0, "no automaton found"));
    }
    blocks.into_iter().map(Block::finish).collect()
}

/// Parses text expected to contain exactly one automaton, or selects the block
/// named `name` when several are present.
pub fn parse_dfa(text: &str, name: Option<&str>) -> Result<Dfa> {
    let mut all = parse_dfas(text)?;
    match name {
        Some(wanted) => all
            .into_iter()
            .find(|(n, _)| n == wanted)
            .map(|(_, d)| d)
            .ok_or_else(|| Error::parse(0, format!("no automaton named '{wanted}'"))),
        None if all.len() == 1 => Ok(all.pop().unwrap().1),
        None => Err(Error::parse(0, format!("{} automata found; select one by name", all.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> StateSet {
        v.iter().map(|&i| StateId::new(i)).collect()
    }

    fn cyc3() -> Dfa {
        Dfa::from_terms(3, vec![('a', Term::cycle(1..=3)), ('b', Term::send([2], 1))], 1, [3]).unwrap()
    }

    #[test]
    fn image_of_set_examples() {
        let d = cyc3();
        assert_eq!(d.image_of_set(set(&[1, 2]), &Word::empty()), set(&[1, 2]));
        assert_eq!(d.image_of_set(set(&[1, 3]), &"a".into()), set(&[1, 2]));
        assert_eq!(d.image_of_set(set(&[1, 2, 3]), &"ac".into()), StateSet::EMPTY);
    }

    #[test]
    fn preimage_examples() {
        let d = cyc3();
        let q1 = StateId::new(1);
        let q2 = StateId::new(2);
        assert_eq!(d.preimage(q2, &Word::empty()), set(&[2]));
        assert_eq!(d.preimage(q1, &"b".into()), set(&[1, 2]));
        assert_eq!(d.preimage(q2, &"b".into()), StateSet::EMPTY);
        assert_eq!(d.preimage(q1, &"x".into()), StateSet::EMPTY);
    }

    #[test]
    fn permutation_examples() {
        let d = cyc3();
        assert!(d.acts_as_permutation(&Word::empty(), set(&[2])));
        assert!(d.acts_as_permutation(&"a".into(), d.states()));
        assert!(!d.acts_as_permutation(&"b".into(), set(&[1, 2])));
    }

    #[test]
    fn words_parse_and_render() {
        assert_eq!(Word::from("ε"), Word::empty());
        assert_eq!(Word::from(""), Word::empty());
        assert_eq!(Word::from("ab").pow(2).to_string(), "abab");
        assert_eq!(Word::empty().to_string(), "ε");
        assert_eq!(Word::from("aab").strip_prefix(&"aa".into()), Some("b".into()));
        assert!("a b".parse::<Word>().is_err());
    }

    const SAMPLE: &str = "\
dfa A
states 4
alphabet a b c
initial 1
final 4
a: (1,2,3,4)
b: (1,2)
c: [{4}->1]

dfa B   # second block
states 3
alphabet a b
final {2..n}
a: (1..n)
b: [1..n-1:+1]
";

    #[test]
    fn parse_blocks() {
        let all = parse_dfas(SAMPLE).unwrap();
        assert_eq!(all.len(), 2);
        let (name, a) = &all[0];
        assert_eq!(name, "A");
        assert_eq!(a.n(), 4);
        assert_eq!(a.alphabet(), &['a', 'b', 'c']);
        assert_eq!(a.finals(), set(&[4]));
        assert_eq!(a.transformation('c').unwrap().images(), vec![1, 2, 3, 1]);
        let b = parse_dfa(SAMPLE, Some("B")).unwrap();
        assert_eq!(b.finals(), set(&[2, 3]));
        assert_eq!(b.transformation('b').unwrap().images(), vec![2, 3, 3]);
        assert!(parse_dfa(SAMPLE, None).is_err());
    }

    #[test]
    fn parse_rejects_bad_rows() {
        let undeclared = "states 2\nalphabet a\na: id\nb: id\n";
        assert!(matches!(parse_dfas(undeclared), Err(Error::Parse { line: 4, .. })));
        let missing = "states 2\nalphabet a b\na: id\n";
        assert!(parse_dfas(missing).is_err());
        let dup = "states 2\nalphabet a\na: id\na: (1,2)\n";
        assert!(parse_dfas(dup).is_err());
        let range = "states 2\nalphabet a\na: (1,3)\n";
        assert!(parse_dfas(range).is_err());
        let order = "alphabet a\na: id\nstates 2\n";
        assert!(parse_dfas(order).is_err());
    }

    fn small_dfa() -> impl Strategy<Value = Dfa> {
        (1usize..=5, 1usize..=3).prop_flat_map(|(n, k)| {
            (
                proptest::collection::vec(proptest::collection::vec(1..=n, n), k),
                1..=n,
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(rows, init, fin)| {
                    let transitions = rows
                        .iter()
                        .enumerate()
                        .map(|(i, r)| ((b'a' + i as u8) as char, Transformation::from_images(r).unwrap()))
                        .collect();
                    let finals = (1..=n).filter(|&q| fin[q - 1]).map(StateId::new).collect();
                    Dfa::new(n, transitions, StateId::new(init), finals).unwrap()
                })
        })
    }

    fn word_over(letters: &'static str, max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(proptest::sample::select(letters.chars().collect::<Vec<_>>()), 0..=max)
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn text_format_round_trips(d in small_dfa()) {
            let back = parse_dfa(&d.to_text("X"), None).unwrap();
            prop_assert_eq!(back, d);
        }

        #[test]
        fn image_of_concatenation(d in small_dfa(), u in word_over("abc", 4), v in word_over("abc", 4), bits in 0u64..32) {
            prop_assume!(u.is_over(d.alphabet()) && v.is_over(d.alphabet()));
            let s = StateSet::from_bits(bits).intersection(d.states());
            prop_assert_eq!(d.image_of_set(s, &u.then(&v)), d.image_of_set(d.image_of_set(s, &u), &v));
        }

        #[test]
        fn preimage_matches_image(d in small_dfa(), w in word_over("abcd", 4)) {
            for q in d.states().iter() {
                let pre = d.preimage(q, &w);
                for s in d.states().iter() {
                    prop_assert_eq!(pre.contains(s), d.image_of_set(StateSet::singleton(s), &w) == StateSet::singleton(q));
                }
            }
        }

        #[test]
        fn permutation_gives_preimages(d in small_dfa(), w in word_over("abc", 4), bits in 0u64..32) {
            let s = StateSet::from_bits(bits).intersection(d.states());
            if d.acts_as_permutation(&w, s) && w.is_over(d.alphabet()) {
                for q in s.iter() {
                    prop_assert!(!d.preimage(q, &w).intersection(s).is_empty());
                }
            }
        }
    }
}
