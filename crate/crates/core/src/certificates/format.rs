//! Line-oriented certificate text:
//!
//! ```text
//! cert
//! focus 2'
//! base {1,n}
//! target {1..n}
//! baseword cb
//! entry 1: ε
//! entry 2: d
//! order 1 n 2
//! ```
//!
//! `m` and `n` may be used in states; `#` starts a comment.

use std::fmt::Write;

use super::Certificate;
use crate::dfa::Word;
use crate::error::{Error, Result};
use crate::stateset::{eval_state_expr, parse_state_set, StateId, StateSet};

fn right_state(text: &str, line: usize, n: usize, symbols: &[(char, usize)]) -> Result<StateId> {
    let v = eval_state_expr(text, symbols).map_err(|e| Error::parse(line, e))?;
    StateId::checked(v, n).map_err(|e| Error::parse(line, e.to_string()))
}

fn word(text: &str, line: usize) -> Result<Word> {
    text.trim().parse().map_err(|e: Error| Error::parse(line, e.to_string()))
}

/// Parses a certificate against a left automaton with `m` states and a right
/// automaton with `n` states.
pub fn parse_certificate(text: &str, m: usize, n: usize) -> Result<Certificate> {
    let symbols = [('m', m), ('n', n)];
    let mut focus = None;
    let mut base = None;
    let mut target = None;
    let mut entries = std::collections::BTreeMap::new();
    let mut order = None;
    let mut base_word = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() || content == "cert" {
            continue;
        }
        let (key, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((content, ""));
        match key {
            "focus" => {
                let expr = rest.strip_suffix('\'').unwrap_or(rest);
                let v = eval_state_expr(expr, &symbols).map_err(|e| Error::parse(line, e))?;
                focus = Some(StateId::checked(v, m).map_err(|e| Error::parse(line, e.to_string()))?);
            }
            "base" => base = Some(parse_state_set(rest, n, &symbols).map_err(|e| Error::parse(line, e))?),
            "target" => target = Some(parse_state_set(rest, n, &symbols).map_err(|e| Error::parse(line, e))?),
            "baseword" => base_word = Some(word(rest, line)?),
            "entry" => {
                let (q, w) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line, "expected 'entry q: word'"))?;
                let q = right_state(q, line, n, &symbols)?;
                if entries.insert(q, word(w, line)?).is_some() {
                    return Err(Error::parse(line, format!("second entry for {q}")));
                }
            }
            "order" => {
                let states = rest
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| right_state(t, line, n, &symbols))
                    .collect::<Result<Vec<_>>>()?;
                order = Some(states);
            }
            other => return Err(Error::parse(line, format!("unknown key '{other}'"))),
        }
    }
    let focus = focus.ok_or_else(|| Error::parse(0, "missing 'focus'"))?;
    let base = base.unwrap_or(StateSet::EMPTY);
    let target = target.ok_or_else(|| Error::parse(0, "missing 'target'"))?;
    Ok(Certificate {
        focus,
        base,
        target,
        entries,
        order,
        base_word,
    })
}

impl Certificate {
    /// Renders in the format read by [`parse_certificate`].
    pub fn to_text(&self) -> String {
        let mut out = String::from("cert\n");
        let _ = writeln!(out, "focus {}'", self.focus);
        let _ = writeln!(out, "base {}", self.base);
        let _ = writeln!(out, "target {}", self.target);
        if let Some(w) = &self.base_word {
            let _ = writeln!(out, "baseword {w}");
        }
        for (q, w) in &self.entries {
            let _ = writeln!(out, "entry {q}: {w}");
        }
        if let Some(order) = &self.order {
            let parts: Vec<String> = order.iter().map(|q| q.to_string()).collect();
            let _ = writeln!(out, "order {}", parts.join(" "));
        }
        out
    }
}
