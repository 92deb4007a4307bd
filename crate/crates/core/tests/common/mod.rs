#![allow(dead_code)]

use std::collections::BTreeMap;

use catreach_core::certificates::Certificate;
use catreach_core::concat::{ConcatMachine, PairState};
use catreach_core::dfa::{Dfa, Word};
use catreach_core::transform::Transformation;
use catreach_core::{StateId, StateSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(i: usize) -> StateId {
    StateId::new(i)
}

pub fn set(v: &[usize]) -> StateSet {
    v.iter().map(|&i| StateId::new(i)).collect()
}

pub fn random_dfa(rng: &mut impl Rng, n: usize, alphabet: &[char]) -> Dfa {
    let transitions = alphabet
        .iter()
        .map(|&c| {
            let images: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=n)).collect();
            (c, Transformation::from_images(&images).unwrap())
        })
        .collect();
    let finals: StateSet = (1..=n).filter(|_| rng.gen_bool(0.4)).map(StateId::new).collect();
    Dfa::new(n, transitions, StateId::new(1), finals).unwrap()
}

/// A non-empty random sub-alphabet, in the given order.
pub fn random_alphabet(rng: &mut impl Rng, pool: &[char]) -> Vec<char> {
    loop {
        let picked: Vec<char> = pool.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        if !picked.is_empty() {
            return picked;
        }
    }
}

/// Two random DFAs with at most `max_states` states, the left over a subset
/// of {a,b,c} and the right over a subset of {a,b,d}.
pub fn random_pair(rng: &mut impl Rng, max_states: usize) -> (Dfa, Dfa) {
    let m = rng.gen_range(1..=max_states);
    let n = rng.gen_range(1..=max_states);
    let left = random_alphabet(rng, &['a', 'b', 'c']);
    let right = random_alphabet(rng, &['a', 'b', 'd']);
    (random_dfa(rng, m, &left), random_dfa(rng, n, &right))
}

/// All words over `letters` of length at most `max_len`, shortest first.
pub fn words_up_to(letters: &[char], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for &c in letters {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A random construction set: picks a focus and base, collects every
/// shared-alphabet word of length `<= max_len` that adds one state while
/// keeping the focus, and draws one entry per chosen target state.
pub fn random_certificate(rng: &mut impl Rng, mc: &ConcatMachine, max_len: usize, max_target: usize) -> Option<Certificate> {
    let shared = mc.shared().to_vec();
    if shared.is_empty() {
        return None;
    }
    let (m, n) = (mc.left().n(), mc.right().n());
    let focus = StateId::new(rng.gen_range(1..=m));
    let mut base: StateSet = (1..=n).filter(|_| rng.gen_bool(0.2)).map(StateId::new).collect();
    while base.len() > max_target {
        base.remove(base.min().unwrap());
    }
    let start = PairState::at(focus, base);
    let mut fixers = Vec::new();
    let mut adders: BTreeMap<StateId, Vec<Word>> = BTreeMap::new();
    for w in words_up_to(&shared, max_len) {
        let end = mc.pair_run(start, &w).unwrap();
        if end.focus != Some(focus) || !base.is_subset(end.subset) {
            continue;
        }
        let extra = end.subset.difference(base);
        match extra.len() {
            0 => fixers.push(w),
            1 => adders.entry(extra.min().unwrap()).or_default().push(w),
            _ => {}
        }
    }
    let mut candidates: Vec<StateId> = adders.keys().copied().collect();
    candidates.shuffle(rng);
    let room = max_target - base.len();
    let take = rng.gen_range(0..=candidates.len().min(room));
    let mut cert = Certificate::new(focus, base, base);
    for p in base.iter() {
        cert.entries.insert(p, fixers.choose(rng).unwrap().clone());
    }
    for &p in &candidates[..take] {
        cert.target.insert(p);
        cert.entries.insert(p, adders[&p].choose(rng).unwrap().clone());
    }
    Some(cert)
}

/// A random pair over one shared alphabet, sized for certificate tests.
pub fn random_shared_machine(rng: &mut impl Rng, max_m: usize, max_n: usize) -> ConcatMachine {
    let alphabet: &[char] = if rng.gen_bool(0.5) { &['a', 'b'] } else { &['a', 'b', 'c'] };
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    ConcatMachine::new(random_dfa(rng, m, alphabet), random_dfa(rng, n, alphabet))
}

/// A certificate over a one-state accepting left automaton, so every letter
/// keeps the focus and re-adds 1. With base {1}, q-words are plentiful, which
/// gives larger targets and a real mix of verdicts.
pub fn random_final_focus_certificate(
    rng: &mut impl Rng,
    max_n: usize,
    max_len: usize,
    max_target: usize,
) -> Option<(ConcatMachine, Certificate)> {
    let alphabet: &[char] = if rng.gen_bool(0.5) { &['a', 'b'] } else { &['a', 'b', 'c'] };
    let left = Dfa::new(
        1,
        alphabet.iter().map(|&c| (c, Transformation::identity(1))).collect(),
        StateId::new(1),
        StateSet::full(1),
    )
    .unwrap();
    let n = rng.gen_range(2..=max_n);
    let mc = ConcatMachine::new(left, random_dfa(rng, n, alphabet));
    let one = StateId::new(1);
    let base = StateSet::from_iter([one]);
    let start = PairState::at(one, base);
    let mut by_image: BTreeMap<StateId, Vec<Word>> = BTreeMap::new();
    for w in words_up_to(alphabet, max_len) {
        let extra = mc.pair_run(start, &w).unwrap().subset.without(one);
        match extra.len() {
            0 => by_image.entry(one).or_default().push(w),
            1 => by_image.entry(extra.min().unwrap()).or_default().push(w),
            _ => {}
        }
    }
    let mut others: Vec<StateId> = by_image.keys().copied().filter(|&q| q != one).collect();
    if others.is_empty() {
        return None;
    }
    others.shuffle(rng);
    let take = rng.gen_range(1..=others.len().min(max_target - 1));
    let mut cert = Certificate::new(one, base, base);
    cert.entries.insert(one, by_image.get(&one).and_then(|ws| ws.choose(rng)).cloned()?);
    for &q in &others[..take] {
        cert.target.insert(q);
        cert.entries.insert(q, by_image[&q].choose(rng).unwrap().clone());
    }
    Some((mc, cert))
}
