//! Concatenation DFAs of pairs of DFAs, reachability certificates built from
//! construction sets, and a catalog of worst-case witness families.
//!
//! The modules build on each other:
//!
//! - [`transform`], [`dfa`]: transformations in cycle/shift notation and
//!   complete DFAs over character alphabets.
//! - [`concat`]: the pair-state concatenation DFA, the concatenation NFA used
//!   as an oracle, and bounded language enumeration.
//! - [`analysis`]: reachable states, distinguishability and bounds.
//! - [`certificates`]: q-words, construction sets, completeness checks and
//!   reachability word synthesis.
//! - [`witnesses`]: the witness catalog and per-family verification.

pub mod analysis;
pub mod certificates;
pub mod concat;
pub mod dfa;
mod error;
pub mod stateset;
pub mod transform;
pub mod witnesses;

pub use error::{Error, Result};
pub use stateset::{StateId, StateSet, MAX_STATES};
