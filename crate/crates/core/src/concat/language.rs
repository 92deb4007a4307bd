//! Enumeration of accepted words up to a length bound.

use super::{ConcatMachine, PairState};
use crate::dfa::{Dfa, Word};
use crate::error::{Error, Result};
use crate::stateset::StateId;

/// Largest number of words of maximal length we are willing to index.
const MAX_LEVEL_WORDS: u64 = 1 << 26;

/// Anything that reads words letter by letter and accepts or rejects.
pub trait Acceptor {
    type State: Clone;

    fn start(&self) -> Self::State;
    fn next(&self, s: &Self::State, c: char) -> Self::State;
    fn is_accepting(&self, s: &Self::State) -> bool;

    /// True when no extension of the current word can be accepted.
    fn is_dead(&self, _s: &Self::State) -> bool {
        false
    }
}

impl Acceptor for Dfa {
    type State = Option<StateId>;

    fn start(&self) -> Self::State {
        Some(self.initial())
    }

    fn next(&self, s: &Self::State, c: char) -> Self::State {
        s.and_then(|q| self.step(q, c))
    }

    fn is_accepting(&self, s: &Self::State) -> bool {
        s.is_some_and(|q| self.finals().contains(q))
    }

    fn is_dead(&self, s: &Self::State) -> bool {
        s.is_none()
    }
}

impl Acceptor for ConcatMachine {
    type State = Option<PairState>;

    fn start(&self) -> Self::State {
        Some(self.initial_pair())
    }

    fn next(&self, s: &Self::State, c: char) -> Self::State {
        s.and_then(|p| self.pair_step(p, c).ok())
    }

    fn is_accepting(&self, s: &Self::State) -> bool {
        s.is_some_and(|p| self.pair_accepts(p))
    }

    fn is_dead(&self, s: &Self::State) -> bool {
        s.is_none_or(|p| p.focus.is_none() && p.subset.is_empty())
    }
}

/// The set of accepted words of length at most `k` over a fixed alphabet.
///
/// Words of length `l` are indexed in base `|alphabet|` with the first letter
/// most significant; each length keeps its own bitmap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedLanguage {
    alphabet: Vec<char>,
    k: usize,
    levels: Vec<Vec<u64>>,
}

impl BoundedLanguage {
    pub fn empty(alphabet: &[char], k: usize) -> Result<Self> {
        let base = alphabet.len().max(1) as u64;
        let fits = base
            .checked_pow(k as u32)
            .is_some_and(|t| t <= MAX_LEVEL_WORDS);
        if !fits {
            return Err(Error::Precondition(format!(
                "{} letters up to length {k} is too many words to enumerate",
                alphabet.len()
            )));
        }
        let levels = (0..=k)
            .map(|l| vec![0u64; (base.pow(l as u32) as usize).div_ceil(64)])
            .collect();
        Ok(BoundedLanguage {
            alphabet: alphabet.to_vec(),
            k,
            levels,
        })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.k
    }

    fn base(&self) -> usize {
        self.alphabet.len()
    }

    fn set(&mut self, len: usize, index: usize) {
        self.levels[len][index / 64] |= 1 << (index % 64);
    }

    fn get(&self, len: usize, index: usize) -> bool {
        self.levels[len][index / 64] & (1 << (index % 64)) != 0
    }

    fn indices(&self, len: usize) -> impl Iterator<Item = usize> + '_ {
        self.levels[len].iter().enumerate().flat_map(|(block, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(block * 64 + tz)
            })
        })
    }

    fn decode(&self, len: usize, mut index: usize) -> Word {
        let mut letters = vec![' '; len];
        for slot in letters.iter_mut().rev() {
            *slot = self.alphabet[index % self.base()];
            index /= self.base();
        }
        letters.into_iter().collect()
    }

    fn encode(&self, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(0usize, |acc, c| {
            let d = self.alphabet.iter().position(|x| x == c)?;
            Some(acc * self.base() + d)
        })
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() <= self.k && self.encode(w).is_some_and(|i| self.get(w.len(), i))
    }

    pub fn insert(&mut self, w: &Word) {
        if w.len() > self.k {
            return;
        }
        if let Some(i) = self.encode(w) {
            self.set(w.len(), i);
        }
    }

    pub fn len(&self) -> usize {
        self.levels
            .iter()
            .flatten()
            .map(|b| b.count_ones() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Words in length-lexicographic order (alphabet order within a length).
    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.k).flat_map(move |len| self.indices(len).map(move |i| self.decode(len, i)))
    }

    /// `{ uv : u ∈ self, v ∈ other, |uv| ≤ k }`, found by testing every split
    /// of every word against the two bitmaps.
    pub fn concat(&self, other: &BoundedLanguage) -> Result<BoundedLanguage> {
        if self.alphabet != other.alphabet || self.k != other.k {
            return Err(Error::Precondition(
                "languages must share alphabet and length bound".into(),
            ));
        }
        let mut out = BoundedLanguage::empty(&self.alphabet, self.k)?;
        let base = self.base().max(1);
        let powers: Vec<usize> = (0..=self.k).map(|l| base.pow(l as u32)).collect();
        // lengths at which each side has any word at all
        let left_lens: Vec<usize> = (0..=self.k).filter(|&l| self.levels[l].iter().any(|&b| b != 0)).collect();
        let right_nonempty: Vec<bool> = (0..=self.k).map(|l| other.levels[l].iter().any(|&b| b != 0)).collect();
        for len in 0..=self.k {
            for x in 0..powers[len] {
                let hit = left_lens.iter().take_while(|&&lu| lu <= len).any(|&lu| {
                    let lv = len - lu;
                    right_nonempty[lv] && self.get(lu, x / powers[lv]) && other.get(lv, x % powers[lv])
                });
                if hit {
                    out.set(len, x);
                }
            }
        }
        Ok(out)
    }
}

/// All words of length ≤ `k` over `alphabet` accepted by `machine`.
pub fn bounded_language<M: Acceptor>(machine: &M, alphabet: &[char], k: usize) -> Result<BoundedLanguage> {
    let mut lang = BoundedLanguage::empty(alphabet, k)?;
    let base = alphabet.len();
    let mut stack = vec![(0usize, 0usize, machine.start())];
    while let Some((len, index, state)) = stack.pop() {
        if machine.is_dead(&state) {
            continue;
        }
        if machine.is_accepting(&state) {
            lang.set(len, index);
        }
        if len == k {
            continue;
        }
        for (d, &c) in alphabet.iter().enumerate() {
            stack.push((len + 1, index * base + d, machine.next(&state, c)));
        }
    }
    Ok(lang)
}
