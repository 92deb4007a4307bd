mod common;

use catreach_core::analysis::{analyze, distinguishability_classes, minimize_count, reachable_states, refine, upper_bound};
use catreach_core::concat::{ConcatMachine, Mode, PairGraph};
use catreach_core::dfa::Dfa;
use catreach_core::transform::Term;
use catreach_core::witnesses::{build_family, Family, Params};
use common::{random_pair, rng};
use proptest::prelude::*;

fn machine(f: Family, m: usize, n: usize) -> ConcatMachine {
    let (a, b) = build_family(f, &Params::new(m, n)).unwrap();
    ConcatMachine::new(a, b)
}

#[test]
fn trivial_machine_has_one_state() {
    let d = Dfa::from_terms(1, vec![('a', Term::Identity)], 1, []).unwrap();
    let mc = ConcatMachine::new(d.clone(), d);
    let states = reachable_states(&mc);
    assert_eq!(states.len(), 1);
    assert_eq!(distinguishability_classes(&mc, &states).unwrap().count, 1);
}

#[test]
fn maslov_counts() {
    let r = analyze(&machine(Family::RegMas70, 3, 3), None).unwrap();
    assert_eq!((r.reachable_count, r.class_count), (20, 20));
    let (a, _) = build_family(Family::RegMas70, &Params::new(3, 3)).unwrap();
    assert_eq!(minimize_count(&a), 3);
}

#[test]
fn right_ideal_keeps_sink_copies_apart_from_classes() {
    let r = analyze(&machine(Family::RightIdealBjl13, 4, 4), None).unwrap();
    // m + 2^(n-2) = 8 classes; (m', S ∪ {n}) for every S is reachable but all of
    // them accept everything, so BFS finds 2^(n-2) - 1 more states
    assert_eq!(r.class_count, 8);
    assert_eq!(r.reachable_count, 11);
}

#[test]
fn non_accepting_machine_is_one_class() {
    let a = Dfa::from_terms(3, vec![('a', Term::cycle(1..=3))], 1, [2]).unwrap();
    let b = Dfa::from_terms(2, vec![('a', Term::cycle([1, 2]))], 1, []).unwrap();
    let r = analyze(&ConcatMachine::new(a, b), None).unwrap();
    assert_eq!(r.class_count, 1);
    assert!(r.reachable_count > 1);
}

#[test]
fn constant_t_merges_full_sets() {
    let p = Params::new(4, 3).with_t(Term::Constant(1));
    let (a, b) = build_family(Family::RegBrSi17, &p).unwrap();
    let r = analyze(&ConcatMachine::new(a, b), None).unwrap();
    assert_eq!(r.reachable_count, 3 * 8 + 4);
    assert!(r.class_count < r.reachable_count);
}

#[test]
fn two_accepting_sinks_minimize_together() {
    let d = Dfa::from_terms(3, vec![('a', Term::Map(vec![2, 2, 3])), ('b', Term::Map(vec![3, 2, 3]))], 1, [2, 3]).unwrap();
    assert_eq!(minimize_count(&d), 2);
}

#[test]
fn bounds_for_one_final_state() {
    for (m, n) in [(3, 3), (4, 6), (6, 5)] {
        let p = 1u64 << n;
        let m64 = m as u64;
        assert_eq!(upper_bound(m, n, 1, Mode::Restricted).unwrap(), (m64 - 1) * p + p / 2);
        assert_eq!(upper_bound(m, n, 1, Mode::Unrestricted).unwrap(), m64 * p + p / 2);
    }
    assert_eq!(upper_bound(1, 1, 1, Mode::Restricted).unwrap(), 1);
    assert!(upper_bound(3, 3, 4, Mode::Restricted).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn reachable_count_within_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = random_pair(&mut r, 5);
        let mc = ConcatMachine::new(a, b);
        let report = analyze(&mc, None).unwrap();
        prop_assert!(report.within_bound, "{} > {}", report.reachable_count, report.upper_bound);
        prop_assert!(report.class_count <= report.reachable_count);
        prop_assert_eq!(report.mode == Mode::Restricted, mc.left().alphabet() == mc.right().alphabet());
    }

    #[test]
    fn refinement_is_a_fixpoint(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = random_pair(&mut r, 4);
        let graph = PairGraph::explore(&ConcatMachine::new(a, b));
        let accepting: Vec<usize> = graph.accepting.iter().map(|&x| x as usize).collect();
        let once = refine(&accepting, &graph.edges);
        prop_assert_eq!(refine(&once.class_of, &graph.edges), once);
    }
}
