use itertools::Itertools;

use super::{validate_construction_set, Certificate};
use crate::concat::ConcatMachine;
use crate::error::{Error, Result};
use crate::stateset::StateId;

/// Largest target for which all orders are tried.
pub const MAX_ORACLE_TARGET: usize = 9;

/// Tries every ordering of the target and returns the first (in
/// lexicographic order of permutations) that satisfies the order condition.
pub fn exhaustive_order_search(machine: &ConcatMachine, cert: &Certificate) -> Result<Option<Vec<StateId>>> {
    let v = validate_construction_set(machine, cert);
    if !v.valid {
        return Err(Error::Precondition(format!(
            "not a construction set: {}",
            v.diagnostics.join("; ")
        )));
    }
    let states: Vec<StateId> = cert.target.iter().collect();
    if states.len() > MAX_ORACLE_TARGET {
        return Err(Error::Precondition(format!(
            "exhaustive search is limited to targets of at most {MAX_ORACLE_TARGET} states"
        )));
    }
    // preimages are recomputed from the right automaton, independently of
    // the cached actions the decider uses
    let may_precede = |p: StateId, q: StateId| {
        !machine.right().preimage(q, &cert.entries[&p]).intersection(cert.target).is_empty()
    };
    let k = states.len();
    Ok(states.into_iter().permutations(k).find(|order| {
        order
            .iter()
            .enumerate()
            .all(|(i, &p)| order[i + 1..].iter().all(|&q| may_precede(p, q)))
    }))
}
