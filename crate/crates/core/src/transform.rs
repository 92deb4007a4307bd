//! Transformations of `{1..n}` and the one-line notation used to write them.
//!
//! Composition is left-to-right: in `t.compose(u)` the map `t` is applied
//! first. The notation mirrors the usual semigroup shorthand:
//!
//! | text           | meaning                                        |
//! |----------------|------------------------------------------------|
//! | `id`           | identity                                       |
//! | `(1,2,3)`      | cyclic permutation 1→2→3→1, other points fixed |
//! | `[{1,2}->3]`   | send every listed point to 3, fix the rest     |
//! | `[all->2]`     | constant map to 2                              |
//! | `[2..4:+1]`    | x→x+1 for 2 ≤ x ≤ 4, fix the rest              |
//! | `[2..4:-1]`    | x→x-1 for 2 ≤ x ≤ 4, fix the rest              |
//! | `<2,3,1>`      | explicit image list (image of 1, 2, 3)         |
//!
//! Juxtaposed terms compose left-to-right. Anywhere a point is expected,
//! `a..b` inside `(..)` or `{..}` expands to the inclusive range, and a
//! symbol from the caller's table (typically `n`) may be used, e.g. `n-1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stateset::{eval_state_expr, StateId, StateSet, MAX_STATES};

/// A total map `{1..n} → {1..n}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transformation {
    images: Vec<u32>,
}

impl Transformation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_STATES);
        Transformation {
            images: (1..=n as u32).collect(),
        }
    }

    /// Builds from 1-based images: `images[i - 1]` is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_STATES {
            return Err(Error::TooManyStates(n));
        }
        for &x in images {
            StateId::checked(x, n)?;
        }
        Ok(Transformation {
            images: images.iter().map(|&x| x as u32).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn apply(&self, q: StateId) -> StateId {
        StateId::new(self.images[q.index() - 1] as usize)
    }

    pub fn apply_set(&self, set: StateSet) -> StateSet {
        set.iter().map(|q| self.apply(q)).collect()
    }

    /// `x ↦ (x·self)·other`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Transformation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize - 1])
                .collect(),
        })
    }

    pub fn is_permutation(&self) -> bool {
        self.apply_set(StateSet::full(self.n())).len() == self.n()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// Explicit image-list form, e.g. `<2,3,1>`.
    pub fn to_notation(&self) -> String {
        if self.is_identity() {
            return "id".to_string();
        }
        Term::Map(self.images()).to_string()
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Term::Map(self.images()))
    }
}

/// A notation term before it is evaluated at a concrete `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Identity,
    Cycle(Vec<usize>),
    Send { from: Vec<usize>, to: usize },
    Constant(usize),
    ShiftUp(usize, usize),
    ShiftDown(usize, usize),
    Map(Vec<usize>),
    Product(Vec<Term>),
}

impl Term {
    pub fn cycle(points: impl IntoIterator<Item = usize>) -> Term {
        Term::Cycle(points.into_iter().collect())
    }

    pub fn send(from: impl IntoIterator<Item = usize>, to: usize) -> Term {
        Term::Send {
            from: from.into_iter().collect(),
            to,
        }
    }

    pub fn product(terms: impl IntoIterator<Item = Term>) -> Term {
        Term::Product(terms.into_iter().collect())
    }
}

fn check_point(x: usize, n: usize) -> Result<()> {
    if x == 0 || x > n {
        return Err(Error::InvalidTransformation(format!(
            "point {x} is outside 1..={n}"
        )));
    }
    Ok(())
}

/// Evaluates a notation term on `{1..n}`.
pub fn make_transformation(term: &Term, n: usize) -> Result<Transformation> {
    if n > MAX_STATES {
        return Err(Error::TooManyStates(n));
    }
    let mut images: Vec<usize> = (1..=n).collect();
    match term {
        Term::Identity => {}
        Term::Cycle(points) => {
            for &p in points {
                check_point(p, n)?;
            }
            let distinct: StateSet = points.iter().map(|&p| StateId::new(p)).collect();
            if distinct.len() != points.len() {
                return Err(Error::InvalidTransformation(format!(
                    "cycle {term} repeats a point"
                )));
            }
            for (i, &p) in points.iter().enumerate() {
                images[p - 1] = points[(i + 1) % points.len()];
            }
        }
        Term::Send { from, to } => {
            check_point(*to, n)?;
            for &p in from {
                check_point(p, n)?;
                images[p - 1] = *to;
            }
        }
        Term::Constant(to) => {
            check_point(*to, n)?;
            images.iter_mut().for_each(|x| *x = *to);
        }
        Term::ShiftUp(lo, hi) => {
            if lo <= hi {
                check_point(*lo, n)?;
                if *hi >= n {
                    return Err(Error::InvalidTransformation(format!(
                        "{term} sends {hi} outside 1..={n}"
                    )));
                }
                for x in *lo..=*hi {
                    images[x - 1] = x + 1;
                }
            }
        }
        Term::ShiftDown(lo, hi) => {
            if lo <= hi {
                check_point(*hi, n)?;
                if *lo <= 1 {
                    return Err(Error::InvalidTransformation(format!(
                        "{term} sends {lo} outside 1..={n}"
                    )));
                }
                for x in *lo..=*hi {
                    images[x - 1] = x - 1;
                }
            }
        }
        Term::Map(list) => {
            if list.len() != n {
                return Err(Error::InvalidTransformation(format!(
                    "{term} lists {} images for {n} states",
                    list.len()
                )));
            }
            for &x in list {
                check_point(x, n)?;
            }
            images = list.clone();
        }
        Term::Product(terms) => {
            let mut acc = Transformation::identity(n);
            for t in terms {
                acc = acc.compose(&make_transformation(t, n)?)?;
            }
            return Ok(acc);
        }
    }
    Transformation::from_images(&images)
}

fn join(points: &[usize]) -> String {
    points
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Identity => f.write_str("id"),
            Term::Cycle(points) => write!(f, "({})", join(points)),
            Term::Send { from, to } => write!(f, "[{{{}}}->{to}]", join(from)),
            Term::Constant(to) => write!(f, "[all->{to}]"),
            Term::ShiftUp(lo, hi) => write!(f, "[{lo}..{hi}:+1]"),
            Term::ShiftDown(lo, hi) => write!(f, "[{lo}..{hi}:-1]"),
            Term::Map(images) => write!(f, "<{}>", join(images)),
            Term::Product(terms) => {
                if terms.is_empty() {
                    return f.write_str("id");
                }
                for t in terms {
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_points(text: &str, symbols: &[(char, usize)]) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo = eval_state_expr(lo, symbols)?;
                let hi = eval_state_expr(hi, symbols)?;
                out.extend(lo..=hi);
            }
            None => out.push(eval_state_expr(part, symbols)?),
        }
    }
    Ok(out)
}

fn parse_bracket(body: &str, symbols: &[(char, usize)]) -> std::result::Result<Term, String> {
    let body = body.trim();
    if let Some((lhs, rhs)) = body.split_once("->") {
        let to = eval_state_expr(rhs, symbols)?;
        let lhs = lhs.trim();
        if lhs == "all" {
            return Ok(Term::Constant(to));
        }
        let inner = lhs
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| format!("expected '{{..}}' or 'all' before '->' in '[{body}]'"))?;
        return Ok(Term::Send {
            from: parse_points(inner, symbols)?,
            to,
        });
    }
    let (range, step) = body
        .split_once(':')
        .ok_or_else(|| format!("cannot read '[{body}]'"))?;
    let (lo, hi) = range
        .split_once("..")
        .ok_or_else(|| format!("expected a range 'i..j' in '[{body}]'"))?;
    let lo = eval_state_expr(lo, symbols)?;
    let hi = eval_state_expr(hi, symbols)?;
    match step.trim() {
        "+1" => Ok(Term::ShiftUp(lo, hi)),
        "-1" => Ok(Term::ShiftDown(lo, hi)),
        other => Err(format!("unsupported shift '{other}' in '[{body}]'")),
    }
}

/// Parses a juxtaposition of notation terms.
pub fn parse_term(text: &str, symbols: &[(char, usize)]) -> std::result::Result<Term, String> {
    let mut terms = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix("id") {
            terms.push(Term::Identity);
            rest = after.trim_start();
            continue;
        }
        let (open, close) = match rest.chars().next().unwrap() {
            '(' => ('(', ')'),
            '[' => ('[', ']'),
            '<' => ('<', '>'),
            c => return Err(format!("unexpected '{c}' in transformation '{text}'")),
        };
        let end = rest
            .find(close)
            .ok_or_else(|| format!("unclosed '{open}' in transformation '{text}'"))?;
        let body = &rest[1..end];
        terms.push(match open {
            '(' => Term::Cycle(parse_points(body, symbols)?),
            '<' => Term::Map(parse_points(body, symbols)?),
            _ => parse_bracket(body, symbols)?,
        });
        rest = rest[end + 1..].trim_start();
    }
    match terms.len() {
        0 => Err("empty transformation".to_string()),
        1 => Ok(terms.pop().unwrap()),
        _ => Ok(Term::Product(terms)),
    }
}
