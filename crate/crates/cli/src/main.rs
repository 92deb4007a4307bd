use std::path::PathBuf;
use std::process::ExitCode;

use catreach_core::analysis::{analyze, ReachReport};
use catreach_core::certificates::{
    decide_complete, exhaustive_order_search, parse_certificate, synthesize_reach_word, validate_construction_set,
    verify_master, Certificate, CompletenessVerdict,
};
use catreach_core::concat::{bounded_language, build_concat_nfa, ConcatMachine, Mode, PairGraph, PairState};
use catreach_core::dfa::{parse_dfa, Dfa, Word};
use catreach_core::stateset::parse_state_set;
use catreach_core::transform::parse_term;
use catreach_core::witnesses::{sweep, sweep_tsv, verify_family, Family, FamilyReport, Params, SweepRow};
use catreach_core::{StateId, StateSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Largest word length `enumerate` accepts.
const MAX_ENUMERATE_LEN: usize = 12;

#[derive(Debug, thiserror::Error)]
enum CliError {
    /// Bad flags or unreadable input; exit 2.
    #[error("{0}")]
    Usage(String),
    /// The computation ran but the verdict is negative; exit 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<catreach_core::Error> for CliError {
    fn from(e: catreach_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(name = "catreach", version, about = "Reachability in concatenation DFAs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the reachable concatenation DFA of two automata.
    BuildConcat {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
        #[arg(long)]
        json: bool,
    },
    /// Count reachable and distinguishable states and compare with the bound.
    Analyze {
        #[command(flatten)]
        pair: PairArgs,
        /// Override the inferred alphabet mode.
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        json: bool,
    },
    /// Validate a certificate and establish completeness.
    CheckCert {
        #[command(flatten)]
        cert: CertArgs,
        /// Cross-check completeness against the factorial order search.
        #[arg(long)]
        order_oracle: bool,
        /// Also synthesize and replay a word reaching this subset, e.g. "{1,3}".
        #[arg(long)]
        synthesize: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run only the exact completeness decision.
    DecideComplete {
        #[command(flatten)]
        cert: CertArgs,
        #[arg(long)]
        order_oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Synthesize a word reaching (focus, S) from a complete certificate.
    Synthesize {
        #[command(flatten)]
        cert: CertArgs,
        /// The subset S, e.g. "{1,3}".
        #[arg(long, alias = "synthesize")]
        set: String,
        #[arg(long)]
        json: bool,
    },
    /// Verify one witness family at one size.
    VerifyFamily {
        #[arg(long)]
        name: Family,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: Option<usize>,
        /// Transformation of the left automaton's last letter, in cycle notation.
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Verify families over a grid of sizes and print a TSV table.
    Sweep {
        /// Sizes of the left automaton: `4` or an inclusive range `3..6`.
        #[arg(long, value_parser = parse_range)]
        m: SizeRange,
        #[arg(long, value_parser = parse_range)]
        n: SizeRange,
        #[arg(long, conflicts_with = "name")]
        all: bool,
        #[arg(long)]
        name: Vec<Family>,
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compare bounded languages of the pair DFA, the NFA and L(A)L(B).
    Enumerate {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Left automaton file, optionally `file:name` to pick one block.
    #[arg(long = "A", value_name = "FILE[:NAME]")]
    a: String,
    /// Right automaton file, optionally `file:name`.
    #[arg(long = "B", value_name = "FILE[:NAME]")]
    b: String,
}

#[derive(Args)]
struct CertArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Text,
    Dot,
}

#[derive(Clone, Copy, Debug)]
struct SizeRange(usize, usize);

fn parse_range(s: &str) -> Result<SizeRange, String> {
    let bad = || format!("expected a size or an inclusive range like 3..6, found '{s}'");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range '{s}'"));
    }
    Ok(SizeRange(lo, hi))
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn read(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_dfa(arg: &str) -> Result<Dfa, CliError> {
    // `file:name` unless the whole string is an existing path
    let (path, name) = match arg.rsplit_once(':') {
        Some((p, n)) if !n.is_empty() && !n.contains('/') && !std::path::Path::new(arg).exists() => (p, Some(n)),
        _ => (arg, None),
    };
    let text = read(path.as_ref())?;
    parse_dfa(&text, name).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

fn load_pair(p: &PairArgs) -> Result<ConcatMachine, CliError> {
    Ok(ConcatMachine::new(load_dfa(&p.a)?, load_dfa(&p.b)?))
}

fn load_cert(c: &CertArgs) -> Result<(ConcatMachine, Certificate), CliError> {
    let mc = load_pair(&c.pair)?;
    let text = read(&c.cert)?;
    let cert = parse_certificate(&text, mc.left().n(), mc.right().n())
        .map_err(|e| CliError::Usage(format!("{}: {e}", c.cert.display())))?;
    Ok((mc, cert))
}

fn emit_json<T: Serialize>(value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn render_order(order: &[StateId]) -> String {
    order.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
}

fn render_words(words: &[Word]) -> String {
    words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct GraphReport {
    alphabet: Vec<char>,
    states: Vec<PairState>,
    accepting: Vec<bool>,
    edges: Vec<Vec<usize>>,
}

fn build_concat(pair: &PairArgs, emit: Emit, json: bool) -> CliResult {
    let graph = PairGraph::explore(&load_pair(pair)?);
    if json {
        return emit_json(&GraphReport {
            alphabet: graph.alphabet.clone(),
            states: graph.states.clone(),
            accepting: graph.accepting.clone(),
            edges: graph.edges.clone(),
        });
    }
    match emit {
        Emit::Text => print!("{}", graph.to_text()),
        Emit::Dot => print!("{}", graph.to_dot()),
    }
    Ok(())
}

fn print_reach(r: &ReachReport) {
    println!("m\t{}", r.m);
    println!("n\t{}", r.n);
    println!("finals\t{}", r.final_count);
    println!("mode\t{}", r.mode);
    println!("reachable\t{}", r.reachable_count);
    println!("classes\t{}", r.class_count);
    println!("bound\t{}", r.upper_bound);
    println!("within-bound\t{}", yes(r.within_bound));
    for (focus, count) in &r.by_focus {
        println!("focus {focus}\t{count}");
    }
}

fn run_analyze(pair: &PairArgs, mode: Option<Mode>, json: bool) -> CliResult {
    let report = analyze(&load_pair(pair)?, mode)?;
    if json {
        emit_json(&report)?;
    } else {
        print_reach(&report);
    }
    if !report.within_bound {
        return Err(CliError::Failed(format!(
            "{} reachable states exceed the bound {}",
            report.reachable_count, report.upper_bound
        )));
    }
    Ok(())
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct OracleCheck {
    complete: bool,
    order: Option<Vec<StateId>>,
    agrees: bool,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct SynthesisReport {
    subset: StateSet,
    word: Word,
    end: PairState,
    reached: bool,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CertReport {
    verdict: CompletenessVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    synthesis: Option<SynthesisReport>,
}

impl CertReport {
    fn failure(&self) -> Option<String> {
        let v = &self.verdict;
        if !v.complete {
            return Some(format!("not shown complete: {}", v.detail));
        }
        if v.base_reached == Some(false) {
            return Some("the base word does not reach (focus, base)".into());
        }
        if self.oracle.as_ref().is_some_and(|o| !o.agrees) {
            return Some("order search disagrees with the verdict".into());
        }
        if self.synthesis.as_ref().is_some_and(|s| !s.reached) {
            return Some("synthesized word misses its subset".into());
        }
        None
    }

    fn print(&self) {
        let v = &self.verdict;
        println!("complete\t{}", yes(v.complete));
        if let Some(via) = v.via {
            println!("via\t{via}");
        }
        if let Some(order) = &v.order {
            println!("order\t{}", render_order(order));
        }
        if let Some(cycle) = &v.cycle {
            println!("cycle\t{}", render_order(cycle));
        }
        if let Some(b) = v.base_reached {
            println!("base-reached\t{}", yes(b));
        }
        println!("detail\t{}", v.detail);
        if let Some(o) = &self.oracle {
            println!("oracle\t{}", yes(o.complete));
            println!("oracle-agrees\t{}", yes(o.agrees));
        }
        if let Some(s) = &self.synthesis {
            println!("word\t{}", s.word);
            println!("reaches\t{}\t{}", s.end, yes(s.reached));
        }
    }
}

fn oracle_check(mc: &ConcatMachine, cert: &Certificate, verdict: &CompletenessVerdict) -> Result<OracleCheck, CliError> {
    let order = exhaustive_order_search(mc, cert)?;
    Ok(OracleCheck {
        complete: order.is_some(),
        agrees: order.is_some() == verdict.complete,
        order,
    })
}

fn synthesis(mc: &ConcatMachine, cert: &Certificate, order: &[StateId], text: &str) -> Result<SynthesisReport, CliError> {
    let symbols = [('m', mc.left().n()), ('n', mc.right().n())];
    let subset = parse_state_set(text, mc.right().n(), &symbols).map_err(CliError::Usage)?;
    let word = synthesize_reach_word(mc, cert, order, subset)?;
    let end = mc.pair_run(cert.start(), &word)?;
    Ok(SynthesisReport {
        subset,
        word,
        reached: end == PairState::at(cert.focus, subset),
        end,
    })
}

fn finish_cert(report: CertReport, json: bool) -> CliResult {
    for d in &report.verdict.diagnostics {
        eprintln!("{d}");
    }
    if json {
        emit_json(&report)?;
    } else {
        report.print();
    }
    match report.failure() {
        Some(msg) => Err(CliError::Failed(msg)),
        None => Ok(()),
    }
}

fn check_cert(args: &CertArgs, order_oracle: bool, synth: Option<&str>, json: bool) -> CliResult {
    let (mc, cert) = load_cert(args)?;
    let verdict = verify_master(&mc, &cert)?;
    let oracle = match order_oracle && validate_construction_set(&mc, &cert).valid {
        true => Some(oracle_check(&mc, &cert, &verdict)?),
        false => None,
    };
    let synthesis = match (synth, &verdict.order) {
        (Some(text), Some(order)) if verdict.complete => Some(synthesis(&mc, &cert, order, text)?),
        _ => None,
    };
    finish_cert(CertReport { verdict, oracle, synthesis }, json)
}

fn decide(args: &CertArgs, order_oracle: bool, json: bool) -> CliResult {
    let (mc, cert) = load_cert(args)?;
    let validation = validate_construction_set(&mc, &cert);
    if !validation.valid {
        for d in &validation.diagnostics {
            eprintln!("{d}");
        }
        return Err(CliError::Failed("not a construction set".into()));
    }
    let verdict = decide_complete(&mc, &cert)?;
    let oracle = match order_oracle {
        true => Some(oracle_check(&mc, &cert, &verdict)?),
        false => None,
    };
    finish_cert(CertReport { verdict, oracle, synthesis: None }, json)
}

fn run_synthesize(args: &CertArgs, set: &str, json: bool) -> CliResult {
    let (mc, cert) = load_cert(args)?;
    let verdict = verify_master(&mc, &cert)?;
    let Some(order) = verdict.order.as_ref().filter(|_| verdict.complete) else {
        for d in &verdict.diagnostics {
            eprintln!("{d}");
        }
        return Err(CliError::Failed(format!("certificate is not complete: {}", verdict.detail)));
    };
    let report = synthesis(&mc, &cert, order, set)?;
    if json {
        emit_json(&report)?;
    } else {
        println!("word\t{}", report.word);
        println!("reaches\t{}\t{}", report.end, yes(report.reached));
    }
    if !report.reached {
        return Err(CliError::Failed(format!("{} leads to {}", report.word, report.end)));
    }
    Ok(())
}

fn print_family(r: &FamilyReport) {
    println!("family\t{}", r.family);
    println!("m\t{}", r.m);
    println!("n\t{}", r.n);
    if let Some(j) = r.j {
        println!("j\t{j}");
    }
    if let Some(t) = &r.t {
        println!("t\t{t}");
    }
    println!("mode\t{}", r.mode);
    println!("bfs\t{}", r.bfs);
    println!("formula\t{}", r.formula);
    println!("match\t{}", yes(r.count_match));
    println!("classes\t{}", r.classes);
    if r.distinguishability_claimed {
        println!("classes-match\t{}", yes(r.classes_match));
    }
    println!("empty-focus\t{}", r.empty_focus);
    if let Some(c) = &r.certificate {
        println!("cert-valid\t{}", yes(c.valid));
        println!("cert-complete\t{}", yes(c.complete));
        if let Some(via) = c.via {
            println!("cert-via\t{via}");
        }
        if let Some(via) = c.expected_via {
            println!("cert-expected-via\t{via}");
        }
        println!("cert-subsets\t{}", c.subsets_checked);
    }
    if let Some(note) = &r.certificate_note {
        println!("cert-note\t{note}");
    }
    println!("passed\t{}", yes(r.passed()));
}

fn run_verify_family(name: Family, m: usize, n: usize, j: Option<usize>, t: Option<&str>, json: bool) -> CliResult {
    let mut params = Params::new(m, n);
    if let Some(j) = j {
        params = params.with_j(j);
    }
    if let Some(t) = t {
        let term = parse_term(t, &[('m', m), ('n', n)]).map_err(CliError::Usage)?;
        params = params.with_t(term);
    }
    let report = verify_family(name, &params)?;
    if let Some(c) = &report.certificate {
        for d in c.diagnostics.iter().chain(&c.reach_failures) {
            eprintln!("{d}");
        }
    }
    if json {
        emit_json(&report)?;
    } else {
        print_family(&report);
    }
    if !report.passed() {
        return Err(CliError::Failed(format!("{name} ({m},{n}) does not verify")));
    }
    Ok(())
}

fn run_sweep(m: SizeRange, n: SizeRange, all: bool, names: &[Family], threads: usize, json: bool) -> CliResult {
    let families: Vec<Family> = if all { Family::ALL.to_vec() } else { names.to_vec() };
    if families.is_empty() {
        return Err(CliError::Usage("give --all or at least one --name".into()));
    }
    let reports = sweep(&families, m.0..=m.1, n.0..=n.1, threads)?;
    let rows: Vec<SweepRow> = reports.iter().map(SweepRow::from).collect();
    if json {
        emit_json(&rows)?;
    } else {
        print!("{}", sweep_tsv(&rows));
    }
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} ({},{})", r.family, r.m, r.n))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} cells fail: {}", failed.len(), failed.join(", "))))
    }
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct EnumerateReport {
    k: usize,
    alphabet: Vec<char>,
    pair_dfa: Vec<Word>,
    nfa: Vec<Word>,
    direct: Vec<Word>,
    equal: bool,
}

fn run_enumerate(pair: &PairArgs, k: usize, json: bool) -> CliResult {
    if k > MAX_ENUMERATE_LEN {
        return Err(CliError::Usage(format!("k = {k} is above the limit {MAX_ENUMERATE_LEN}")));
    }
    let mc = load_pair(pair)?;
    let alphabet = mc.alphabet().to_vec();
    let pair_lang = bounded_language(&mc, &alphabet, k)?;
    let nfa_lang = bounded_language(&build_concat_nfa(mc.left(), mc.right()), &alphabet, k)?;
    let direct = bounded_language(mc.left(), &alphabet, k)?.concat(&bounded_language(mc.right(), &alphabet, k)?)?;
    let report = EnumerateReport {
        k,
        alphabet,
        equal: pair_lang == nfa_lang && pair_lang == direct,
        pair_dfa: pair_lang.words().collect(),
        nfa: nfa_lang.words().collect(),
        direct: direct.words().collect(),
    };
    if json {
        emit_json(&report)?;
    } else {
        println!("pair-dfa\t{}\t{}", report.pair_dfa.len(), render_words(&report.pair_dfa));
        println!("nfa\t{}\t{}", report.nfa.len(), render_words(&report.nfa));
        println!("direct\t{}\t{}", report.direct.len(), render_words(&report.direct));
        println!("equal\t{}", yes(report.equal));
    }
    if !report.equal {
        return Err(CliError::Failed("the three languages differ".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::BuildConcat { pair, emit, json } => build_concat(&pair, emit, json),
        Command::Analyze { pair, mode, json } => run_analyze(&pair, mode, json),
        Command::CheckCert { cert, order_oracle, synthesize, json } => {
            check_cert(&cert, order_oracle, synthesize.as_deref(), json)
        }
        Command::DecideComplete { cert, order_oracle, json } => decide(&cert, order_oracle, json),
        Command::Synthesize { cert, set, json } => run_synthesize(&cert, &set, json),
        Command::VerifyFamily { name, m, n, j, t, json } => run_verify_family(name, m, n, j, t.as_deref(), json),
        Command::Sweep { m, n, all, name, threads, json } => run_sweep(m, n, all, &name, threads, json),
        Command::Enumerate { pair, k, json } => run_enumerate(&pair, k, json),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
