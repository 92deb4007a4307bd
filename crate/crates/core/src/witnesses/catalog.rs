use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::concat::Mode;
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::stateset::StateId;
use crate::transform::{make_transformation, Term};
use crate::MAX_STATES;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Family {
    RegBrSi17,
    RegBrz16,
    RegBrz13,
    RegYzs94,
    RegMas70,
    StarFreeBrLi12,
    NonRetBrDa17,
    NonRetEhj16,
    PrefixClosedBjz14,
    SuffixFreeBrSi17a,
    SuffixFreeHaSa09,
    RightIdealBrSi17,
    RightIdealBdl16,
    RightIdealBjl13,
    NegPrefixClosedBrSi17,
    NegFiniteBinaryCcsy01,
}

impl Family {
    pub const ALL: [Family; 16] = [
        Family::RegBrSi17,
        Family::RegBrz16,
        Family::RegBrz13,
        Family::RegYzs94,
        Family::RegMas70,
        Family::StarFreeBrLi12,
        Family::NonRetBrDa17,
        Family::NonRetEhj16,
        Family::PrefixClosedBjz14,
        Family::SuffixFreeBrSi17a,
        Family::SuffixFreeHaSa09,
        Family::RightIdealBrSi17,
        Family::RightIdealBdl16,
        Family::RightIdealBjl13,
        Family::NegPrefixClosedBrSi17,
        Family::NegFiniteBinaryCcsy01,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::RegBrSi17 => "reg-brsi17",
            Family::RegBrz16 => "reg-brz16",
            Family::RegBrz13 => "reg-brz13",
            Family::RegYzs94 => "reg-yzs94",
            Family::RegMas70 => "reg-mas70",
            Family::StarFreeBrLi12 => "starfree-brli12",
            Family::NonRetBrDa17 => "nonret-brda17",
            Family::NonRetEhj16 => "nonret-ehj16",
            Family::PrefixClosedBjz14 => "prefixclosed-bjz14",
            Family::SuffixFreeBrSi17a => "suffixfree-brsi17a",
            Family::SuffixFreeHaSa09 => "suffixfree-hasa09",
            Family::RightIdealBrSi17 => "rightideal-brsi17",
            Family::RightIdealBdl16 => "rightideal-bdl16",
            Family::RightIdealBjl13 => "rightideal-bjl13",
            Family::NegPrefixClosedBrSi17 => "neg-prefixclosed-brsi17",
            Family::NegFiniteBinaryCcsy01 => "neg-finitebinary-ccsy01",
        }
    }

    /// Negative families attain their counts, but not by a construction set.
    pub fn is_positive(self) -> bool {
        !matches!(self, Family::NegPrefixClosedBrSi17 | Family::NegFiniteBinaryCcsy01)
    }

    pub fn positives() -> impl Iterator<Item = Family> {
        Family::ALL.into_iter().filter(|f| f.is_positive())
    }

    pub fn mode(self) -> Mode {
        match self {
            Family::RegBrz16 => Mode::Unrestricted,
            _ => Mode::Restricted,
        }
    }

    /// Whether the witness is claimed to make all reachable states pairwise
    /// distinguishable for these parameters.
    pub fn claims_distinguishable(self, params: &Params) -> bool {
        match self {
            Family::RegBrSi17 => params.j.unwrap_or(2) == 2 && params.t.is_none(),
            _ => true,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

impl From<Family> for String {
    fn from(f: Family) -> String {
        f.name().to_string()
    }
}

impl TryFrom<String> for Family {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Family parameters. `j` and `t` only apply to `reg-brsi17`, where the
/// left automaton's `b` is `t` and `j't = 1'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub m: usize,
    pub n: usize,
    pub j: Option<usize>,
    pub t: Option<Term>,
}

impl Params {
    pub fn new(m: usize, n: usize) -> Self {
        Params { m, n, j: None, t: None }
    }

    pub fn with_j(mut self, j: usize) -> Self {
        self.j = Some(j);
        self
    }

    pub fn with_t(mut self, t: Term) -> Self {
        self.t = Some(t);
        self
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn violated(family: Family, constraint: impl Into<String>) -> Error {
    Error::Constraint {
        family: family.name().to_string(),
        constraint: constraint.into(),
    }
}

fn check_constraints(family: Family, p: &Params) -> Result<()> {
    let (m, n) = (p.m, p.n);
    if m > MAX_STATES || n > MAX_STATES {
        return Err(Error::TooManyStates(m.max(n)));
    }
    if family != Family::RegBrSi17 && (p.j.is_some() || p.t.is_some()) {
        return Err(violated(family, "j and t only apply to reg-brsi17"));
    }
    match family {
        Family::NegFiniteBinaryCcsy01 => {
            if !(m + 1 >= n && n > 2) {
                return Err(violated(family, format!("m+1 >= n > 2 (m = {m}, n = {n})")));
            }
        }
        // the cycles (2',3') and (2,3) must avoid the sinks m' and n
        Family::SuffixFreeBrSi17a => {
            if m < 4 || n < 4 {
                return Err(violated(family, format!("m >= 4 and n >= 4 (m = {m}, n = {n})")));
            }
        }
        _ => {
            if m < 3 || n < 3 {
                return Err(violated(family, format!("m >= 3 and n >= 3 (m = {m}, n = {n})")));
            }
        }
    }
    if family == Family::RegBrSi17 {
        let j = p.j.unwrap_or(2);
        if j < 1 || j > m {
            return Err(violated(family, format!("1 <= j <= m (j = {j})")));
        }
        if gcd(j - 1, n) != 1 {
            return Err(violated(family, format!("gcd(j-1, n) = 1 (j = {j}, n = {n})")));
        }
        let t = make_transformation(&brsi17_t(p), m)?;
        if t.apply(StateId::new(j)) != StateId::new(1) {
            return Err(violated(family, format!("j't = 1' (j = {j}, t = {})", t.to_notation())));
        }
    }
    Ok(())
}

/// The given `t`, or the transposition `(1', j')`.
fn brsi17_t(p: &Params) -> Term {
    p.t.clone().unwrap_or_else(|| Term::cycle([1, p.j.unwrap_or(2)]))
}

type Table = Vec<(char, Term)>;

fn tables(family: Family, p: &Params) -> (Table, Vec<usize>, Table, Vec<usize>) {
    use Term::*;
    let (m, n) = (p.m, p.n);
    let cyc = |lo: usize, hi: usize| Term::cycle(lo..=hi);
    let send = |from: &[usize], to: usize| Term::send(from.iter().copied(), to);
    let prod = |terms: Vec<Term>| Term::product(terms);
    match family {
        Family::RegBrSi17 => (
            vec![('a', cyc(1, m)), ('b', brsi17_t(p))],
            vec![m],
            vec![('a', cyc(1, n)), ('b', send(&[2], 1))],
            vec![n],
        ),
        Family::RegBrz16 => (
            vec![('a', cyc(1, m)), ('b', cyc(1, 2)), ('c', send(&[m], 1))],
            vec![m],
            vec![('a', cyc(1, 2)), ('b', cyc(1, n)), ('d', Identity)],
            vec![n],
        ),
        Family::RegBrz13 => (
            vec![('a', cyc(1, m)), ('b', cyc(1, 2)), ('c', send(&[m], 1))],
            vec![m],
            vec![('a', cyc(1, n)), ('b', cyc(1, 2)), ('c', send(&[n], 1))],
            vec![n],
        ),
        Family::RegYzs94 => (
            vec![('a', cyc(1, m)), ('b', Constant(1)), ('c', Identity)],
            vec![m],
            vec![('a', Identity), ('b', cyc(1, n)), ('c', Constant(2))],
            vec![n],
        ),
        Family::RegMas70 => (
            vec![('a', cyc(1, m)), ('b', Identity)],
            vec![m],
            vec![('a', cyc(n - 1, n)), ('b', ShiftUp(1, n - 1))],
            vec![n],
        ),
        Family::StarFreeBrLi12 => (
            vec![('a', ShiftUp(1, m - 1)), ('b', ShiftDown(2, m)), ('c', Identity), ('d', Constant(m))],
            vec![m],
            vec![('a', ShiftUp(2, n - 1)), ('b', Identity), ('c', ShiftUp(1, n - 1)), ('d', ShiftDown(2, n))],
            vec![n - 1],
        ),
        Family::NonRetBrDa17 => (
            vec![
                ('a', prod(vec![cyc(2, m), send(&[1], 2)])),
                ('b', prod(vec![cyc(2, 3), send(&[1], 3)])),
            ],
            vec![m],
            vec![
                ('a', prod(vec![cyc(2, n), send(&[1], 2)])),
                ('b', prod(vec![cyc(3, n), send(&[2], 3), send(&[1], 2)])),
            ],
            vec![n],
        ),
        Family::NonRetEhj16 => (
            vec![
                ('a', prod(vec![cyc(2, m), send(&[1], 2)])),
                ('b', send(&[1], 2)),
                ('c', send(&[1], 2)),
            ],
            vec![m],
            vec![
                ('a', send(&[1], 2)),
                ('b', prod(vec![cyc(2, n), send(&[1], 2)])),
                ('c', prod(vec![ShiftUp(3, n - 1), send(&[1], 2), send(&[n], 2)])),
            ],
            vec![n],
        ),
        Family::PrefixClosedBjz14 => (
            vec![('a', Identity), ('b', Identity), ('c', ShiftUp(1, m - 1))],
            (1..m).collect(),
            vec![('a', cyc(1, n - 1)), ('b', ShiftUp(2, n - 1)), ('c', Identity)],
            (1..n).collect(),
        ),
        Family::SuffixFreeBrSi17a => (
            vec![
                ('a', prod(vec![send(&[1], m), cyc(2, m - 1)])),
                ('b', prod(vec![send(&[1], m), cyc(2, 3)])),
                // (2',m') is a send into the sink, not a transposition
                ('c', prod(vec![send(&[2], m), send(&[1], 2)])),
            ],
            vec![m - 1],
            vec![
                ('a', prod(vec![send(&[1], n), cyc(2, 3)])),
                ('b', prod(vec![send(&[2], n), send(&[1], 2)])),
                ('c', prod(vec![send(&[1], n), cyc(2, n - 1)])),
            ],
            vec![n - 1],
        ),
        Family::SuffixFreeHaSa09 => (
            vec![
                ('a', prod(vec![cyc(2, m - 1), send(&[1], m)])),
                ('b', send(&[1], m)),
                ('c', prod(vec![Term::send(2..=m, m), send(&[1], 2)])),
                ('d', Term::send(std::iter::once(1).chain(3..=m), m)),
            ],
            vec![2],
            vec![
                ('a', send(&[1], n)),
                ('b', prod(vec![cyc(2, n - 1), send(&[1], n)])),
                ('c', send(&[1], n)),
                ('d', send(&[1], 2)),
            ],
            vec![2],
        ),
        Family::RightIdealBrSi17 => (
            vec![('a', cyc(1, m - 1)), ('b', send(&[2], 1)), ('c', ShiftUp(1, m - 1))],
            vec![m],
            vec![('a', cyc(1, n - 1)), ('b', send(&[2], 1)), ('c', ShiftUp(1, n - 1))],
            vec![n],
        ),
        Family::RightIdealBdl16 => (
            vec![('a', cyc(1, m - 1)), ('b', cyc(2, m - 1)), ('c', send(&[m - 1], m))],
            vec![m],
            vec![('a', cyc(1, n - 1)), ('b', cyc(2, n - 1)), ('c', send(&[n - 1], n))],
            vec![n],
        ),
        Family::RightIdealBjl13 => (
            vec![('a', ShiftUp(1, m - 1)), ('b', ShiftUp(1, m - 1))],
            vec![m],
            vec![('a', cyc(1, n - 1)), ('b', ShiftUp(2, n - 1))],
            vec![n],
        ),
        // q -> q-1 on 1..k-1 sends 1 to the sink k
        Family::NegPrefixClosedBrSi17 => (
            vec![('a', cyc(1, m - 1)), ('b', cyc(1, 2)), ('c', send(&[2], 1)), ('d', prod(vec![send(&[1], m), ShiftDown(2, m - 1)]))],
            (1..m).collect(),
            vec![('a', cyc(1, n - 1)), ('b', send(&[2], 1)), ('c', prod(vec![send(&[1], n), ShiftDown(2, n - 1)])), ('d', cyc(1, 2))],
            (1..n).collect(),
        ),
        Family::NegFiniteBinaryCcsy01 => (
            vec![('a', ShiftUp(1, m - 1)), ('b', ShiftUp(1, m - 1))],
            (1..m).collect(),
            vec![('a', prod(vec![ShiftUp(2, n - 1), send(&[1], n)])), ('b', ShiftUp(1, n - 1))],
            vec![n - 1],
        ),
    }
}

/// The left and right automata of a family.
pub fn build_family(family: Family, params: &Params) -> Result<(Dfa, Dfa)> {
    check_constraints(family, params)?;
    let (left, left_finals, right, right_finals) = tables(family, params);
    Ok((
        Dfa::from_terms(params.m, left, 1, left_finals)?,
        Dfa::from_terms(params.n, right, 1, right_finals)?,
    ))
}

/// The reachable-state count the family is claimed to attain.
pub fn claimed_count(family: Family, m: usize, n: usize) -> Result<u64> {
    check_constraints(family, &Params::new(m, n))?;
    let (m, n) = (m as u64, n as u64);
    let p = |e: u64| 1u64 << e;
    Ok(match family {
        Family::RegBrSi17 | Family::RegBrz13 | Family::RegYzs94 | Family::RegMas70 | Family::StarFreeBrLi12 => {
            (m - 1) * p(n) + p(n - 1)
        }
        Family::RegBrz16 => m * p(n) + p(n - 1),
        Family::NonRetBrDa17 | Family::NonRetEhj16 => (m - 1) * p(n - 1) + 1,
        Family::PrefixClosedBjz14 | Family::NegPrefixClosedBrSi17 => (m + 1) * p(n - 2),
        Family::SuffixFreeBrSi17a | Family::SuffixFreeHaSa09 => (m - 1) * p(n - 2) + 1,
        Family::RightIdealBrSi17 | Family::RightIdealBdl16 | Family::RightIdealBjl13 => m + p(n - 2),
        Family::NegFiniteBinaryCcsy01 => (m + 3 - n) * p(n - 2) - 1,
    })
}
