use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::catalog::{build_family, claimed_count, Family, Params};
use super::certs::{build_certificate, expected_via};
use crate::analysis::{analyze, minimize_count};
use crate::certificates::{check_reach_all, verify_master, Via};
use crate::concat::{ConcatMachine, Mode, PairState};
use crate::error::{Error, Result};
use crate::stateset::StateId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub valid: bool,
    pub complete: bool,
    pub via: Option<Via>,
    pub expected_via: Option<Via>,
    pub technique_match: bool,
    pub base_reached: Option<bool>,
    pub order: Option<Vec<StateId>>,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    /// Number of sets `S` whose synthesized word was replayed.
    pub subsets_checked: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reach_failures: Vec<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.valid
            && self.complete
            && self.technique_match
            && self.base_reached == Some(true)
            && self.reach_failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: Family,
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    pub mode: Mode,
    pub bfs: usize,
    pub formula: u64,
    pub count_match: bool,
    pub classes: usize,
    pub classes_match: bool,
    /// Whether distinguishability of all reachable states is claimed here.
    pub distinguishability_claimed: bool,
    pub minimal_left: bool,
    pub minimal_right: bool,
    pub upper_bound: u64,
    pub by_focus: BTreeMap<String, usize>,
    /// Reachable states whose focus is `∅`.
    pub empty_focus: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_note: Option<String>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        let cert_ok = match (&self.certificate, self.family.is_positive()) {
            (Some(c), true) => c.passed(),
            (None, false) => true,
            _ => false,
        };
        self.count_match
            && self.minimal_left
            && self.minimal_right
            && (!self.distinguishability_claimed || self.classes_match)
            && cert_ok
    }
}

/// Builds the family, explores and refines its concatenation DFA, and checks
/// its certificate (including replaying a synthesized word for every set
/// the certificate covers).
pub fn verify_family(family: Family, params: &Params) -> Result<FamilyReport> {
    let (a, b) = build_family(family, params)?;
    let (m, n) = (params.m, params.n);
    let minimal_left = minimize_count(&a) == m;
    let minimal_right = minimize_count(&b) == n;
    let machine = ConcatMachine::new(a, b);
    let report = analyze(&machine, Some(family.mode()))?;
    let formula = claimed_count(family, m, n)?;

    let (certificate, certificate_note) = match build_certificate(family, params) {
        Ok(cert) => {
            let verdict = verify_master(&machine, &cert)?;
            let expected = expected_via(family, n);
            let mut subsets_checked = 0;
            let mut reach_failures = Vec::new();
            if let (true, Some(order)) = (verdict.complete, &verdict.order) {
                let reachable: HashSet<PairState> = report.states.iter().copied().collect();
                let known = (verdict.base_reached == Some(true)).then_some(&reachable);
                let check = check_reach_all(&machine, &cert, order, known)?;
                subsets_checked = check.subsets;
                reach_failures = check.failures;
            }
            let valid = verdict.complete || verdict.cycle.is_some();
            (
                Some(CertificateReport {
                    valid,
                    complete: verdict.complete,
                    via: verdict.via,
                    expected_via: expected,
                    technique_match: verdict.via.is_some() && verdict.via == expected,
                    base_reached: verdict.base_reached,
                    order: verdict.order,
                    detail: verdict.detail,
                    diagnostics: verdict.diagnostics,
                    subsets_checked,
                    reach_failures,
                }),
                None,
            )
        }
        Err(Error::NotApplicable(note)) => (None, Some(note)),
        Err(e) => return Err(e),
    };

    Ok(FamilyReport {
        family,
        m,
        n,
        j: params.j,
        t: params.t.as_ref().map(|t| t.to_string()),
        mode: report.mode,
        bfs: report.reachable_count,
        formula,
        count_match: report.reachable_count as u64 == formula,
        classes: report.class_count,
        classes_match: report.class_count as u64 == formula,
        distinguishability_claimed: family.claims_distinguishable(params),
        minimal_left,
        minimal_right,
        upper_bound: report.upper_bound,
        empty_focus: report.by_focus.get("∅").copied().unwrap_or(0),
        by_focus: report.by_focus,
        certificate,
        certificate_note,
    })
}

/// One line of a sweep table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: Family,
    pub m: usize,
    pub n: usize,
    pub bfs: usize,
    pub formula: u64,
    pub count_match: bool,
    pub classes: usize,
    /// `-` when the family has no certificate, `incomplete` when it failed.
    pub cert_via: String,
    pub passed: bool,
}

impl From<&FamilyReport> for SweepRow {
    fn from(r: &FamilyReport) -> Self {
        let cert_via = match &r.certificate {
            None => "-".to_string(),
            Some(c) => match c.via {
                Some(v) if c.complete => v.tag().to_string(),
                _ => "incomplete".to_string(),
            },
        };
        SweepRow {
            family: r.family,
            m: r.m,
            n: r.n,
            bfs: r.bfs,
            formula: r.formula,
            count_match: r.count_match,
            classes: r.classes,
            cert_via,
            passed: r.passed(),
        }
    }
}

pub const SWEEP_COLUMNS: [&str; 8] = ["family", "m", "n", "bfs", "formula", "match", "classes", "cert-via"];

/// Verifies every `(family, m, n)` cell whose parameters satisfy the family's
/// constraints, on a pool of at most `threads` workers. Rows come back in
/// family, then `m`, then `n` order.
pub fn sweep(
    families: &[Family],
    ms: impl IntoIterator<Item = usize>,
    ns: impl IntoIterator<Item = usize>,
    threads: usize,
) -> Result<Vec<FamilyReport>> {
    let ms: Vec<usize> = ms.into_iter().collect();
    let ns: Vec<usize> = ns.into_iter().collect();
    let mut cells = Vec::new();
    for &f in families {
        for &m in &ms {
            for &n in &ns {
                if claimed_count(f, m, n).is_ok() {
                    cells.push((f, m, n));
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        cells
            .par_iter()
            .map(|&(f, m, n)| verify_family(f, &Params::new(m, n)))
            .collect()
    })
}

pub fn sweep_tsv(rows: &[SweepRow]) -> String {
    let mut out = SWEEP_COLUMNS.join("\t");
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.family,
            r.m,
            r.n,
            r.bfs,
            r.formula,
            if r.count_match { "yes" } else { "no" },
            r.classes,
            r.cert_via
        );
    }
    out
}
