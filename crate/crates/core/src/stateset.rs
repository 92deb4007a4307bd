//! State identifiers and fixed-width state sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported state count for a single automaton.
pub const MAX_STATES: usize = 63;

/// A 1-based state index. Which automaton it belongs to is carried by context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(u32);

impl StateId {
    /// Panics on 0; use [`StateId::checked`] for untrusted input.
    pub fn new(index: usize) -> Self {
        assert!(
            (1..=MAX_STATES).contains(&index),
            "state index {index} out of range"
        );
        StateId(index as u32)
    }

    pub fn checked(index: usize, n: usize) -> Result<Self> {
        if index == 0 || index > n || index > MAX_STATES {
            return Err(Error::StateOutOfRange { state: index, n });
        }
        Ok(StateId(index as u32))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn bit(self) -> u64 {
        1u64 << (self.0 - 1)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of `{1, .., 63}` stored as a bitmask; state `i` occupies bit `i - 1`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<StateId>", from = "Vec<StateId>")]
pub struct StateSet(u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_STATES);
        if n == 0 {
            StateSet(0)
        } else {
            StateSet(u64::MAX >> (64 - n))
        }
    }

    pub fn singleton(q: StateId) -> Self {
        StateSet(q.bit())
    }

    pub fn from_bits(bits: u64) -> Self {
        StateSet(bits & (u64::MAX >> 1))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        (lo..=hi).map(StateId::new).collect()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, q: StateId) -> bool {
        self.0 & q.bit() != 0
    }

    pub fn insert(&mut self, q: StateId) {
        self.0 |= q.bit();
    }

    pub fn remove(&mut self, q: StateId) {
        self.0 &= !q.bit();
    }

    pub fn with(mut self, q: StateId) -> Self {
        self.insert(q);
        self
    }

    pub fn without(mut self, q: StateId) -> Self {
        self.remove(q);
        self
    }

    pub fn union(self, other: StateSet) -> Self {
        StateSet(self.0 | other.0)
    }

    pub fn intersection(self, other: StateSet) -> Self {
        StateSet(self.0 & other.0)
    }

    pub fn difference(self, other: StateSet) -> Self {
        StateSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    pub fn min(self) -> Option<StateId> {
        if self.0 == 0 {
            None
        } else {
            Some(StateId(self.0.trailing_zeros() + 1))
        }
    }

    /// Largest member index, or 0 for the empty set.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = StateId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let tz = bits.trailing_zeros();
            bits &= bits - 1;
            Some(StateId(tz + 1))
        })
    }

    /// All subsets `S` with `self ⊆ S ⊆ upper`, in increasing bitmask order.
    pub fn interval(self, upper: StateSet) -> impl Iterator<Item = StateSet> {
        let free = upper.difference(self).0;
        let base = self.0;
        let mut sub = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = StateSet(base | sub);
            // standard submask enumeration in increasing order
            sub = sub.wrapping_sub(free) & free;
            if sub == 0 {
                done = true;
            }
            Some(out)
        })
    }
}

impl FromIterator<StateId> for StateSet {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        let mut s = StateSet::EMPTY;
        for q in iter {
            s.insert(q);
        }
        s
    }
}

impl From<StateSet> for Vec<StateId> {
    fn from(s: StateSet) -> Self {
        s.iter().collect()
    }
}

impl From<Vec<StateId>> for StateSet {
    fn from(v: Vec<StateId>) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Evaluates a state expression: a decimal literal, or a symbol such as `n`
/// optionally followed by `+k` / `-k`. Symbols are looked up in `symbols`.
pub fn eval_state_expr(text: &str, symbols: &[(char, usize)]) -> std::result::Result<usize, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty state expression".into());
    }
    if let Ok(v) = text.parse::<usize>() {
        return Ok(v);
    }
    let mut chars = text.chars();
    let head = chars.next().unwrap();
    let Some(&(_, base)) = symbols.iter().find(|(c, _)| *c == head) else {
        return Err(format!("cannot read state expression '{text}'"));
    };
    let rest = chars.as_str().trim();
    if rest.is_empty() {
        return Ok(base);
    }
    let (sign, amount) = rest.split_at(1);
    let amount: usize = amount
        .trim()
        .parse()
        .map_err(|_| format!("cannot read state expression '{text}'"))?;
    match sign {
        "+" => Ok(base + amount),
        "-" => base
            .checked_sub(amount)
            .ok_or_else(|| format!("state expression '{text}' is negative")),
        _ => Err(format!("cannot read state expression '{text}'")),
    }
}

/// Parses `{}`, `∅`, or `{e1,e2,...}` where each element is a state expression
/// or an inclusive range `lo..hi`. The result is checked against `n`.
pub fn parse_state_set(
    text: &str,
    n: usize,
    symbols: &[(char, usize)],
) -> std::result::Result<StateSet, String> {
    let text = text.trim();
    if text == "∅" {
        return Ok(StateSet::EMPTY);
    }
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| format!("expected a set in braces, found '{text}'"))?;
    let mut set = StateSet::EMPTY;
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lo, hi) = match part.split_once("..") {
            Some((lo, hi)) => (eval_state_expr(lo, symbols)?, eval_state_expr(hi, symbols)?),
            None => {
                let v = eval_state_expr(part, symbols)?;
                (v, v)
            }
        };
        for i in lo..=hi {
            let q = StateId::checked(i, n).map_err(|e| e.to_string())?;
            set.insert(q);
        }
    }
    Ok(set)
}
