//! Self-evaluation, the anti-diagonal predicate and the liar probe.
//!
//! `d_n(i) = not(ẽ(#i, i))` where `#i` is the `i`-th code of type `N -> 2`
//! and `ẽ` interprets a code at stratum `n` and applies it. Nothing here
//! decides anything about the calculus: the reports only record what the
//! construction does when it is run.

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::coding::{encode, tag_table, to_hex, Code, Enumeration};
use crate::error::{Error, Result};
use crate::eval::{apply_with_fuel, eval_with_fuel, inhabits, Fuel, Value};
use crate::interp::{interpret_with, Options};
use crate::terms::{Obj, Term};

pub const DEFAULT_FUEL: u64 = 1_000_000;
/// Predicates compared against `d_n` by the residue check.
pub const DEFAULT_RESIDUE_CODES: u64 = 200;
/// Indices listed in a liar-probe report.
pub const DEFAULT_PROBE_SAMPLES: u64 = 20;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Stack for evaluator threads. Deep iterates recurse on the host stack.
const STACK_BYTES: usize = 256 << 20;

/// Runs `f` on a thread with a large stack.
pub fn on_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK_BYTES)
            .spawn_scoped(s, f)
            .expect("spawn evaluator thread")
            .join()
            .unwrap_or_else(|p| std::panic::resume_unwind(p))
    })
}

fn pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .stack_size(STACK_BYTES)
        .build()
        .expect("build thread pool")
}

/// sha256 over everything that fixes the order of the enumeration.
pub fn enumeration_hash() -> String {
    let mut h = Sha256::new();
    h.update(tag_table().as_bytes());
    h.update(b"order: byte length, then bytes\n");
    h.update(format!("max length: {}\n", crate::coding::DEFAULT_MAX_LENGTH).as_bytes());
    to_hex(&h.finalize())
}

/// `ẽ(u, a)`: interprets `u` at stratum `n`, then applies the arrow to `a`.
/// One budget covers both phases.
pub fn self_eval(n: u32, u: &Code, a: &Value, fuel: &mut Fuel) -> Result<Value> {
    if !inhabits(&u.dom, a)? {
        return Err(Error::IllTyped(format!("{a} is not an element of {}", u.dom)));
    }
    let r = interpret_with(n, u, Options::default(), fuel)?;
    apply_with_fuel(&r.value, a, fuel)
}

/// What a truth-valued computation came to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Bit(u8),
    StratumExceeded { code: u32, bound: u32 },
    FuelExhausted,
    Failed(&'static str),
}

impl Outcome {
    fn of(r: Result<Value>) -> Outcome {
        match r {
            Ok(v) => match v.as_u64() {
                Some(b @ (0 | 1)) => Outcome::Bit(b as u8),
                _ => Outcome::Failed("NotATruthValue"),
            },
            Err(Error::StratumExceeded { code, bound }) => Outcome::StratumExceeded { code, bound },
            Err(Error::FuelExhausted { .. }) => Outcome::FuelExhausted,
            Err(e) => Outcome::Failed(e.name()),
        }
    }

    pub fn bit(&self) -> Option<u8> {
        match self {
            Outcome::Bit(b) => Some(*b),
            _ => None,
        }
    }

    pub fn negated(&self) -> Outcome {
        match self {
            Outcome::Bit(b) => Outcome::Bit(1 - b),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Bit(b) => write!(f, "{b}"),
            Outcome::StratumExceeded { code, bound } => {
                write!(f, "StratumExceeded({code}>{bound})")
            }
            Outcome::FuelExhausted => f.write_str("FuelExhausted"),
            Outcome::Failed(name) => f.write_str(name),
        }
    }
}

fn predicates() -> Enumeration {
    Enumeration::new(Obj::Nat, Obj::two(), None)
}

/// `ẽ(u, i)` with a fresh budget, and the steps it took.
fn self_eval_at(n: u32, u: &Code, i: u64, budget: u64) -> (Outcome, u64) {
    let mut fuel = Fuel::new(budget);
    let out = Outcome::of(self_eval(n, u, &Value::nat(i), &mut fuel));
    (out, fuel.used())
}

/// `d_n(i)`, evaluated with a budget of `fuel` steps.
pub fn diagonal_predicate(n: u32, i: u64, fuel: u64) -> Result<Outcome> {
    let u = predicates().unrank(i)?;
    Ok(on_big_stack(|| self_eval_at(n, &u, i, fuel).0.negated()))
}

/// One row of a diagonal table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub index: u64,
    pub code: Code,
    /// `ẽ(#i, i)`.
    pub self_eval: Outcome,
    pub fuel_used: u64,
}

impl Sample {
    /// `d_n(i)`.
    pub fn diagonal(&self) -> Outcome {
        self.self_eval.negated()
    }
}

fn samples(n: u32, codes: &[Code], fuel: u64) -> Vec<Sample> {
    pool().install(|| {
        codes
            .par_iter()
            .enumerate()
            .map(|(i, u)| {
                let (out, used) = self_eval_at(n, u, i as u64, fuel);
                Sample {
                    index: i as u64,
                    code: u.clone(),
                    self_eval: out,
                    fuel_used: used,
                }
            })
            .collect()
    })
}

/// How one enumerated predicate compares with `d_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// First index where the two differ, or where the predicate ran out of
    /// fuel or failed.
    DiffersAt(u64),
    /// Equal on every index where `d_n` is defined.
    Agrees,
}

/// Checks each of `codes` against the table of `d_n`. The diagonal index
/// `j` is tried first for code `j`.
pub fn residue(table: &[Sample], codes: &[Code], fuel: u64) -> Vec<Comparison> {
    pool().install(|| {
        codes
            .par_iter()
            .enumerate()
            .map(|(j, c)| {
                let order = (j < table.len())
                    .then_some(j)
                    .into_iter()
                    .chain((0..table.len()).filter(|&i| i != j));
                for i in order {
                    let Some(want) = table[i].diagonal().bit() else {
                        continue;
                    };
                    let mut f = Fuel::new(fuel);
                    let got = Outcome::of(eval_with_fuel(&c.term, &Value::nat(i as u64), &mut f));
                    if got.bit() != Some(want) {
                        return Comparison::DiffersAt(i as u64);
                    }
                }
                Comparison::Agrees
            })
            .collect()
    })
}

/// Parameters of `diagonal_report`.
#[derive(Clone, Debug)]
pub struct DiagonalParams {
    pub stratum: u32,
    /// Indices `0..indices`.
    pub indices: u64,
    pub fuel: u64,
    pub residue_codes: u64,
    pub seed: u64,
}

/// The table of `d_n` on an initial segment of indices, with the residue
/// check against the first enumerated predicates.
#[derive(Clone, Debug)]
pub struct DiagonalReport {
    pub params: DiagonalParams,
    pub samples: Vec<Sample>,
    pub residue: Vec<Comparison>,
}

impl DiagonalReport {
    pub fn stratum_exceeded(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| matches!(s.self_eval, Outcome::StratumExceeded { .. }))
            .count()
    }

    pub fn fuel_exhausted(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| s.self_eval == Outcome::FuelExhausted)
            .count()
    }

    /// Codes that agree with `d_n` wherever it is defined.
    pub fn agreeing(&self) -> Vec<u64> {
        self.residue
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Comparison::Agrees)
            .map(|(j, _)| j as u64)
            .collect()
    }
}

pub fn diagonal_report(params: DiagonalParams) -> Result<DiagonalReport> {
    let mut e = predicates();
    let need = params.indices.max(params.residue_codes);
    let codes = e.take(need);
    if (codes.len() as u64) < need {
        // surfaces the length-bound error
        e.unrank(need - 1)?;
    }
    let table = on_big_stack(|| samples(params.stratum, &codes[..params.indices as usize], params.fuel));
    let residue = on_big_stack(|| residue(&table, &codes[..params.residue_codes as usize], params.fuel));
    Ok(DiagonalReport {
        params,
        samples: table,
        residue,
    })
}

fn header(out: &mut String, kind: &str, seed: u64) {
    let _ = writeln!(out, "report: {kind}");
    let _ = writeln!(out, "tool: pre {TOOL_VERSION}");
    let _ = writeln!(out, "seed: {seed:#x}");
    let _ = writeln!(out, "enumeration: N -> 2, by byte length then bytes");
    let _ = writeln!(out, "enumeration_hash: sha256:{}", enumeration_hash());
}

fn sample_rows(out: &mut String, samples: &[Sample]) {
    let _ = writeln!(out, "diagonal_samples:");
    let _ = writeln!(out, "  # index stratum self_eval d fuel_used code");
    for s in samples {
        let _ = writeln!(
            out,
            "  {} {} {} {} {} {}",
            s.index,
            s.code.stratum,
            s.self_eval,
            s.diagonal(),
            s.fuel_used,
            s.code
        );
    }
}

impl fmt::Display for DiagonalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        let mut out = String::new();
        header(&mut out, "diagonal", p.seed);
        let _ = writeln!(out, "stratum_bound: {}", p.stratum);
        let _ = writeln!(out, "indices: 0..{}", p.indices);
        let _ = writeln!(out, "fuel_per_evaluation: {}", p.fuel);
        let used: u64 = self.samples.iter().map(|s| s.fuel_used).sum();
        let _ = writeln!(out, "fuel_used: {used}");
        let _ = writeln!(out, "stratum_exceeded: {}/{}", self.stratum_exceeded(), p.indices);
        let _ = writeln!(out, "fuel_exhausted: {}/{}", self.fuel_exhausted(), p.indices);
        sample_rows(&mut out, &self.samples);
        let _ = writeln!(out, "residue:");
        let _ = writeln!(out, "  compared_codes: {}", self.residue.len());
        let agreeing = self.agreeing();
        let _ = writeln!(out, "  agreeing_codes: {}", agreeing.len());
        for j in agreeing {
            let _ = writeln!(out, "  agrees: {j}");
        }
        let _ = writeln!(out, "  # code first_difference");
        for (j, c) in self.residue.iter().enumerate() {
            if let Comparison::DiffersAt(i) = c {
                let _ = writeln!(out, "  {j} {i}");
            }
        }
        f.write_str(&out)
    }
}

/// Whether an ingredient of `d_n` has a surface term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ingredient {
    pub name: &'static str,
    pub surface: std::result::Result<String, String>,
}

/// The ingredients of `d_n` in the order they are checked.
pub fn ingredients(search_bound: u64) -> Vec<Ingredient> {
    let eps = Term::Eps(Obj::Nat, Obj::two());
    vec![
        Ingredient {
            name: "enumeration",
            surface: if search_bound == 0 {
                Err("empty enumeration".into())
            } else {
                Ok(format!("finite table of {search_bound} codes addressed by rank"))
            },
        },
        Ingredient {
            name: "interpretation",
            surface: Err("interpretation map not a surface term".into()),
        },
        Ingredient {
            name: "eps",
            surface: Ok(format!("{eps}")),
        },
        Ingredient {
            name: "not",
            surface: Ok(format!("{}", Term::Neg)),
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiarStatus {
    CodeNotInEnumeration(String),
    CodeFound { index: u64, outcome: Outcome },
}

impl fmt::Display for LiarStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiarStatus::CodeNotInEnumeration(why) => write!(f, "CodeNotInEnumeration({why:?})"),
            LiarStatus::CodeFound { index, outcome } => write!(f, "CodeFound({index}, {outcome})"),
        }
    }
}

/// Measurements on a user-supplied candidate for `d_n`.
#[derive(Clone, Debug)]
pub struct CandidateReport {
    pub term: Term,
    pub code: Option<Code>,
    pub rank: std::result::Result<u64, String>,
    /// `ẽ(⌜d⌝, q)` and `d_n(q)` when the candidate was found.
    pub self_eval: Option<Outcome>,
    pub diagonal: Option<Outcome>,
    /// The candidate evaluated directly at `q`.
    pub direct: Option<Outcome>,
}

#[derive(Clone, Debug)]
pub struct LiarParams {
    pub stratum: u32,
    pub search_bound: u64,
    pub fuel: u64,
    pub samples: u64,
    pub seed: u64,
    pub candidate: Option<Term>,
}

#[derive(Clone, Debug)]
pub struct StratumReport {
    pub params: LiarParams,
    pub ingredients: Vec<Ingredient>,
    pub diagonal_samples: Vec<Sample>,
    pub candidate: Option<CandidateReport>,
    pub liar_status: LiarStatus,
    pub fuel_used: u64,
}

/// The report on a candidate and the steps spent on it.
fn probe_candidate(t: &Term, p: &LiarParams) -> (CandidateReport, u64) {
    let mut rep = CandidateReport {
        term: t.clone(),
        code: None,
        rank: Err(String::new()),
        self_eval: None,
        diagonal: None,
        direct: None,
    };
    let code = match encode(t) {
        Ok(c) => c,
        Err(e) => {
            rep.rank = Err(format!("candidate has no code: {}", e.name()));
            return (rep, 0);
        }
    };
    rep.code = Some(code.clone());
    if code.dom != Obj::Nat || code.cod != Obj::two() {
        rep.rank = Err(format!("candidate is typed {} -> {}, not N -> 2", code.dom, code.cod));
        return (rep, 0);
    }
    rep.rank = match predicates().rank(&code) {
        Ok(q) if q < p.search_bound => Ok(q),
        Ok(q) => Err(format!("candidate rank {q} beyond search bound {}", p.search_bound)),
        Err(e) => Err(format!("candidate not ranked: {e}")),
    };
    let mut used = 0;
    if let Ok(q) = rep.rank {
        let (out, spent) = on_big_stack(|| self_eval_at(p.stratum, &code, q, p.fuel));
        used = spent;
        rep.diagonal = Some(out.negated());
        rep.self_eval = Some(out);
        let mut f = Fuel::new(p.fuel);
        rep.direct = Some(on_big_stack(|| {
            Outcome::of(eval_with_fuel(&code.term, &Value::nat(q), &mut f))
        }));
        used += f.used();
    }
    (rep, used)
}

/// Runs the liar construction at stratum `n` as far as it goes.
pub fn liar_probe(params: LiarParams) -> StratumReport {
    let ingredients = ingredients(params.search_bound);
    let missing = ingredients.iter().find_map(|g| g.surface.clone().err());

    let shown = params.samples.min(params.search_bound);
    let codes = predicates().take(shown);
    let diagonal_samples = on_big_stack(|| samples(params.stratum, &codes, params.fuel));
    let mut fuel_used: u64 = diagonal_samples.iter().map(|s| s.fuel_used).sum();

    let candidate = params.candidate.as_ref().map(|t| {
        let (rep, used) = probe_candidate(t, &params);
        fuel_used += used;
        rep
    });
    let liar_status = match (&candidate, missing) {
        _ if params.search_bound == 0 => LiarStatus::CodeNotInEnumeration("empty enumeration".into()),
        (Some(c), _) => match (&c.rank, &c.diagonal) {
            (Ok(q), Some(out)) => LiarStatus::CodeFound {
                index: *q,
                outcome: out.clone(),
            },
            (Err(why), _) => LiarStatus::CodeNotInEnumeration(why.clone()),
            (Ok(q), None) => LiarStatus::CodeNotInEnumeration(format!("candidate at {q} not evaluated")),
        },
        (None, Some(why)) => LiarStatus::CodeNotInEnumeration(why),
        (None, None) => LiarStatus::CodeNotInEnumeration("no candidate supplied".into()),
    };
    StratumReport {
        params,
        ingredients,
        diagonal_samples,
        candidate,
        liar_status,
        fuel_used,
    }
}

fn or_dash(o: &Option<Outcome>) -> String {
    o.as_ref().map_or_else(|| "-".into(), |x| x.to_string())
}

impl fmt::Display for StratumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        let mut out = String::new();
        header(&mut out, "liar-probe", p.seed);
        let _ = writeln!(out, "stratum_bound: {}", p.stratum);
        let _ = writeln!(out, "search_bound: {}", p.search_bound);
        let _ = writeln!(out, "fuel_per_evaluation: {}", p.fuel);
        let _ = writeln!(out, "construction:");
        for g in &self.ingredients {
            match &g.surface {
                Ok(t) => {
                    let _ = writeln!(out, "  {}: surface {t}", g.name);
                }
                Err(why) => {
                    let _ = writeln!(out, "  {}: missing ({why})", g.name);
                }
            }
        }
        sample_rows(&mut out, &self.diagonal_samples);
        match &self.candidate {
            None => {
                let _ = writeln!(out, "candidate: none");
            }
            Some(c) => {
                let _ = writeln!(out, "candidate:");
                let _ = writeln!(out, "  term: {}", c.term);
                match &c.code {
                    Some(code) => {
                        let _ = writeln!(out, "  code: {code}");
                        let _ = writeln!(out, "  type: {} -> {}", code.dom, code.cod);
                        let cmp = match code.stratum.cmp(&p.stratum) {
                            std::cmp::Ordering::Greater => ">",
                            std::cmp::Ordering::Equal => "=",
                            std::cmp::Ordering::Less => "<",
                        };
                        let _ = writeln!(
                            out,
                            "  stratum: {} {cmp} {} (bound)",
                            code.stratum, p.stratum
                        );
                    }
                    None => {
                        let _ = writeln!(out, "  code: -");
                    }
                }
                match &c.rank {
                    Ok(q) => {
                        let _ = writeln!(out, "  rank: {q}");
                    }
                    Err(why) => {
                        let _ = writeln!(out, "  rank: - ({why})");
                    }
                }
                let _ = writeln!(out, "  self_eval_at_rank: {}", or_dash(&c.self_eval));
                let _ = writeln!(out, "  d_at_rank: {}", or_dash(&c.diagonal));
                let _ = writeln!(out, "  candidate_at_rank: {}", or_dash(&c.direct));
            }
        }
        let _ = writeln!(out, "liar_status: {}", self.liar_status);
        let _ = writeln!(out, "fuel_used: {}", self.fuel_used);
        f.write_str(&out)
    }
}
