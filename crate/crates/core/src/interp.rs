//! Interpretation of codes as internal arrows.
//!
//! Constants are interpreted by their names; composite codes by the closed
//! internal operations applied to the interpretations of their parts. The
//! closed operations are themselves evaluated map terms: each is the
//! conjugate of an explicit evaluation diagram.

use std::fmt;

use crate::coding::Code;
use crate::error::{Error, Result};
use crate::eval::{eval_name_with_fuel, eval_with_fuel, Fuel, Value};
use crate::sample::{obs_eq, rng, sample_value};
use crate::terms::{conj, Obj, Term};
use crate::universal::embed_object;

fn arrow_type(v: &Value) -> Result<(Obj, Obj)> {
    match v {
        Value::Arrow(a) => Ok((a.dom.clone(), a.cod.clone())),
        other => Err(Error::TypeMismatch(format!("{other} is not an arrow"))),
    }
}

/// Evaluates a closed-operation term, recording the order it climbs to.
fn run_op(op: &Term, arg: &Value, fuel: &mut Fuel, used: &mut u32) -> Result<Value> {
    *used = (*used).max(op.stratum()?);
    eval_with_fuel(op, arg, fuel)
}

/// `∘̂: C^B × B^A -> C^A`, the conjugate of `ε ∘ (C^B × ε)` after
/// reassociation: `((g, f), a) |-> g(f(a))`.
pub fn closed_compose_term(a: &Obj, b: &Obj, c: &Obj) -> Result<Term> {
    let cb = Obj::exp(c.clone(), b.clone());
    let ba = Obj::exp(b.clone(), a.clone());
    let gf = Obj::prod(cb.clone(), ba.clone());
    let inner = Term::compose(
        Term::Eps(a.clone(), b.clone()),
        Term::pairing(
            Term::compose(Term::ProjR(cb.clone(), ba.clone()), Term::ProjL(gf.clone(), a.clone())),
            Term::ProjR(gf.clone(), a.clone()),
        ),
    );
    let outer = Term::compose(
        Term::Eps(b.clone(), c.clone()),
        Term::pairing(
            Term::compose(Term::ProjL(cb, ba), Term::ProjL(gf, a.clone())),
            inner,
        ),
    );
    conj(&outer)
}

/// `×̂: C^A × D^B -> (C×D)^(A×B)`: `((f, g), (a, b)) |-> (f(a), g(b))`.
pub fn closed_product_term(a: &Obj, b: &Obj, c: &Obj, d: &Obj) -> Result<Term> {
    let ca = Obj::exp(c.clone(), a.clone());
    let db = Obj::exp(d.clone(), b.clone());
    let fg = Obj::prod(ca.clone(), db.clone());
    let ab = Obj::prod(a.clone(), b.clone());
    let side = |proj_fn: Term, proj_arg: Term, x: &Obj, y: &Obj| {
        Term::compose(
            Term::Eps(x.clone(), y.clone()),
            Term::pairing(
                Term::compose(proj_fn, Term::ProjL(fg.clone(), ab.clone())),
                Term::compose(proj_arg, Term::ProjR(fg.clone(), ab.clone())),
            ),
        )
    };
    conj(&Term::pairing(
        side(
            Term::ProjL(ca.clone(), db.clone()),
            Term::ProjL(a.clone(), b.clone()),
            a,
            c,
        ),
        side(Term::ProjR(ca, db), Term::ProjR(a.clone(), b.clone()), b, d),
    ))
}

/// `§̂: A^A -> A^(A×N)`, the conjugate of the coconjugate
/// `r ∘ (ℓ, ε)^§ ∘ reassoc: A^A × (A×N) -> A`. Anchor `(v, (a, 0)) |-> a`;
/// step `(v, (a, n+1)) |-> ε(v, coco(v, (a, n)))`.
pub fn closed_iter_term(a: &Obj) -> Result<Term> {
    let aa = Obj::exp(a.clone(), a.clone());
    let an = Obj::prod(a.clone(), Obj::Nat);
    let dom = Obj::prod(aa.clone(), an.clone());
    let reassoc = Term::pairing(
        Term::pairing(
            Term::ProjL(aa.clone(), an.clone()),
            Term::compose(Term::ProjL(a.clone(), Obj::Nat), Term::ProjR(aa.clone(), an.clone())),
        ),
        Term::compose(Term::ProjR(a.clone(), Obj::Nat), Term::ProjR(aa.clone(), an)),
    );
    let step = Term::pairing(
        Term::ProjL(aa.clone(), a.clone()),
        Term::Eps(a.clone(), a.clone()),
    );
    let coco = Term::chain([Term::ProjR(aa, a.clone()), Term::iter(step), reassoc]);
    debug_assert_eq!(coco.typecheck().map(|t| t.0), Ok(dom));
    conj(&coco)
}

/// The internal `hom[A](-)` at a fixed arrow `γ: B -> C`: `B^A -> C^A`,
/// `(h, a) |-> γ(h(a))`.
pub fn closed_hom_term(gamma: &Value, a: &Obj) -> Result<Term> {
    let (b, c) = arrow_type(gamma)?;
    let ba = Obj::exp(b.clone(), a.clone());
    let ha = Obj::prod(ba.clone(), a.clone());
    let cb = Obj::exp(c.clone(), b.clone());
    conj(&Term::compose(
        Term::Eps(b.clone(), c),
        Term::pairing(
            Term::compose(Term::lit(gamma.clone(), cb)?, Term::Terminal(ha)),
            Term::Eps(a.clone(), b),
        ),
    ))
}

pub fn closed_compose(g: &Value, f: &Value) -> Result<Value> {
    closed_compose_fuel(g, f, &mut Fuel::unlimited(), &mut 0)
}

fn closed_compose_fuel(g: &Value, f: &Value, fuel: &mut Fuel, used: &mut u32) -> Result<Value> {
    let (b, c) = arrow_type(g)?;
    let (a, b2) = arrow_type(f)?;
    if b != b2 {
        return Err(Error::TypeMismatch(format!(
            "closed composition of {b} -> {c} after {a} -> {b2}"
        )));
    }
    let op = closed_compose_term(&a, &b, &c)?;
    run_op(&op, &Value::pair(g.clone(), f.clone()), fuel, used)
}

pub fn closed_product(f: &Value, g: &Value) -> Result<Value> {
    closed_product_fuel(f, g, &mut Fuel::unlimited(), &mut 0)
}

fn closed_product_fuel(f: &Value, g: &Value, fuel: &mut Fuel, used: &mut u32) -> Result<Value> {
    let (a, c) = arrow_type(f)?;
    let (b, d) = arrow_type(g)?;
    let op = closed_product_term(&a, &b, &c, &d)?;
    run_op(&op, &Value::pair(f.clone(), g.clone()), fuel, used)
}

pub fn closed_iter(f: &Value) -> Result<Value> {
    closed_iter_fuel(f, &mut Fuel::unlimited(), &mut 0)
}

fn closed_iter_fuel(f: &Value, fuel: &mut Fuel, used: &mut u32) -> Result<Value> {
    let (a, a2) = arrow_type(f)?;
    if a != a2 {
        return Err(Error::TypeMismatch(format!(
            "closed iteration of the non-endo arrow {a} -> {a2}"
        )));
    }
    let op = closed_iter_term(&a)?;
    run_op(&op, f, fuel, used)
}

fn closed_hom_fuel(gamma: &Value, a: &Obj, used: &mut u32) -> Result<Value> {
    let (b, c) = arrow_type(gamma)?;
    let body = closed_hom_term(gamma, a)?;
    *used = (*used).max(body.stratum()?);
    Ok(Value::arrow(body, Obj::exp(b, a.clone()), Obj::exp(c, a.clone())))
}

/// `N -> B` from the interpretations of the two branches.
fn closed_case(zero: &Value, succ: &Value, used: &mut u32) -> Result<Value> {
    let (_, b) = arrow_type(zero)?;
    let branch = |v: &Value, dom: Obj| -> Result<Term> {
        let (d, c) = arrow_type(v)?;
        Ok(Term::compose(
            Term::Eps(d.clone(), c.clone()),
            Term::pairing(
                Term::compose(Term::lit(v.clone(), Obj::exp(c, d))?, Term::Terminal(dom.clone())),
                Term::Id(dom),
            ),
        ))
    };
    let body = Term::case_nat(branch(zero, Obj::One)?, branch(succ, Obj::Nat)?);
    *used = (*used).max(body.stratum()?);
    Ok(Value::arrow(body, Obj::Nat, b))
}

/// The outcome of interpreting one code.
#[derive(Clone, Debug)]
pub struct InterpResult {
    /// An arrow in `cod^dom`.
    pub value: Value,
    pub dom: Obj,
    pub cod: Obj,
    /// The largest order of any object the interpretation passed through.
    pub used_stratum: u32,
    pub trace: Vec<String>,
}

impl InterpResult {
    /// The interpretation embedded into the chain member `U_level`.
    pub fn embedded(&self, level: u32) -> Result<Value> {
        embed_object(&Obj::exp(self.cod.clone(), self.dom.clone()), &self.value, level)
    }
}

/// Interpretation options.
#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub trace: bool,
}

/// `int^n`: interprets a code of stratum at most `n` as its arrow.
pub fn interpret(n: u32, u: &Code) -> Result<InterpResult> {
    interpret_with(n, u, Options::default(), &mut Fuel::unlimited())
}

pub fn interpret_with(n: u32, u: &Code, opts: Options, fuel: &mut Fuel) -> Result<InterpResult> {
    if u.stratum > n {
        return Err(Error::StratumExceeded {
            code: u.stratum,
            bound: n,
        });
    }
    let mut state = State {
        fuel,
        used: 1,
        trace: opts.trace.then(Vec::new),
    };
    let value = state.go(&u.term, 0)?;
    Ok(InterpResult {
        value,
        dom: u.dom.clone(),
        cod: u.cod.clone(),
        used_stratum: state.used,
        trace: state.trace.unwrap_or_default(),
    })
}

struct State<'a> {
    fuel: &'a mut Fuel,
    used: u32,
    trace: Option<Vec<String>>,
}

impl State<'_> {
    fn note(&mut self, depth: usize, what: &str, t: &Term) {
        if let Some(tr) = &mut self.trace {
            tr.push(format!("{}{what}: {t}", "  ".repeat(depth)));
        }
    }

    fn touch(&mut self, v: &Value) -> Result<()> {
        let (d, c) = arrow_type(v)?;
        self.used = self.used.max(Obj::exp(c, d).ord());
        Ok(())
    }

    fn go(&mut self, t: &Term, depth: usize) -> Result<Value> {
        let v = match t {
            Term::Compose(g, f) => {
                self.note(depth, "compose", t);
                let gv = self.go(g, depth + 1)?;
                let fv = self.go(f, depth + 1)?;
                closed_compose_fuel(&gv, &fv, self.fuel, &mut self.used)?
            }
            Term::PairProd(f, g) => {
                self.note(depth, "product", t);
                let fv = self.go(f, depth + 1)?;
                let gv = self.go(g, depth + 1)?;
                closed_product_fuel(&fv, &gv, self.fuel, &mut self.used)?
            }
            Term::Iter(f) => {
                self.note(depth, "iterate", t);
                let fv = self.go(f, depth + 1)?;
                closed_iter_fuel(&fv, self.fuel, &mut self.used)?
            }
            Term::Pairing(f, g) => {
                // <f, g> = (f x g) . diag
                self.note(depth, "pairing", t);
                let (dom, _) = t.typecheck()?;
                let fv = self.go(f, depth + 1)?;
                let gv = self.go(g, depth + 1)?;
                let prod = closed_product_fuel(&fv, &gv, self.fuel, &mut self.used)?;
                self.touch(&prod)?;
                let diag = self.name(&Term::Diagonal(dom), depth + 1)?;
                closed_compose_fuel(&prod, &diag, self.fuel, &mut self.used)?
            }
            Term::HomCo(a, g) => {
                self.note(depth, "hom", t);
                let gv = self.go(g, depth + 1)?;
                closed_hom_fuel(&gv, a, &mut self.used)?
            }
            Term::CaseNat(f0, fs) => {
                self.note(depth, "case", t);
                let zv = self.go(f0, depth + 1)?;
                let sv = self.go(fs, depth + 1)?;
                closed_case(&zv, &sv, &mut self.used)?
            }
            Term::Lit(..) | Term::XEnc(_) | Term::XDec(..) => {
                return Err(Error::NotCodable(format!("`{t}` is not a surface term")))
            }
            _ => return self.name(t, depth),
        };
        self.touch(&v)?;
        Ok(v)
    }

    fn name(&mut self, t: &Term, depth: usize) -> Result<Value> {
        self.note(depth, "name", t);
        let v = eval_name_with_fuel(t, self.fuel)?;
        self.used = self.used.max(crate::terms::name_term(t)?.stratum()?);
        self.touch(&v)?;
        Ok(v)
    }
}

/// One line of an objectivity report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectivityRow {
    pub name: String,
    pub stratum: u32,
    pub used_stratum: Option<u32>,
    pub samples: usize,
    pub agreed: usize,
    /// Why the row failed, if it did.
    pub failure: Option<String>,
}

impl ObjectivityRow {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.agreed == self.samples
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectivityReport {
    pub stratum: u32,
    pub seed: u64,
    pub rows: Vec<ObjectivityRow>,
}

impl ObjectivityReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(ObjectivityRow::passed)
    }
}

impl fmt::Display for ObjectivityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "objectivity at stratum {} (seed {:#x})", self.stratum, self.seed)?;
        writeln!(f, "{:<12} {:>7} {:>5} {:>9}  result", "map", "stratum", "used", "agreed")?;
        for r in &self.rows {
            let used = r.used_stratum.map_or("-".to_string(), |u| u.to_string());
            let verdict = match &r.failure {
                Some(why) => format!("FAIL {why}"),
                None if r.passed() => "pass".to_string(),
                None => "FAIL disagreement".to_string(),
            };
            writeln!(
                f,
                "{:<12} {:>7} {:>5} {:>4}/{:<4}  {verdict}",
                r.name, r.stratum, used, r.agreed, r.samples
            )?;
        }
        Ok(())
    }
}

/// Checks `ε(int(⌜f⌝), a) = f(a)` on sampled `a` for every map of a corpus.
/// Failures become report rows, never errors.
pub fn check_objectivity(
    n: u32,
    corpus: &[(String, Term)],
    samples: usize,
    seed: u64,
) -> ObjectivityReport {
    let rows = corpus
        .iter()
        .enumerate()
        .map(|(k, (name, t))| objectivity_row(n, name, t, samples, seed.wrapping_add(k as u64)))
        .collect();
    ObjectivityReport {
        stratum: n,
        seed,
        rows,
    }
}

fn objectivity_row(n: u32, name: &str, t: &Term, samples: usize, seed: u64) -> ObjectivityRow {
    let mut row = ObjectivityRow {
        name: name.to_string(),
        stratum: t.stratum().unwrap_or(0),
        used_stratum: None,
        samples,
        agreed: 0,
        failure: None,
    };
    let result = (|| -> Result<()> {
        let code = crate::coding::encode(t)?;
        let res = interpret(n, &code)?;
        row.used_stratum = Some(res.used_stratum);
        let mut r = rng(seed);
        for k in 0..samples {
            let a = sample_value(&code.dom, &mut r, 6 + k as u64)?;
            let lhs = crate::eval::apply(&res.value, &a)?;
            let rhs = crate::eval::eval(t, &a)?;
            if obs_eq(&code.cod, &lhs, &rhs, seed)? {
                row.agreed += 1;
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        row.failure = Some(e.to_string());
    }
    row
}

/// The standard corpus of the objectivity check.
pub fn std_corpus() -> Vec<(String, Term)> {
    let mut out: Vec<(String, Term)> = ["add", "mult", "pred", "subtrunc", "eqnat", "not", "leq"]
        .iter()
        .map(|n| (n.to_string(), crate::eval::stdlib::lookup(n).expect("stdlib map")))
        .collect();
    out.push(("id".into(), Term::Id(Obj::Nat)));
    out.push(("it(s)".into(), Term::iter(Term::Succ)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::{code_compose, encode};
    use crate::eval::{apply, eval};
    use crate::syntax::parse_term;

    fn n(k: u64) -> Value {
        Value::nat(k)
    }

    fn name(src: &str) -> Value {
        crate::eval::eval_name(&parse_term(src).unwrap()).unwrap()
    }

    #[test]
    fn closed_operations() {
        let s = name("s");
        let ss = closed_compose(&s, &s).unwrap();
        assert_eq!(apply(&ss, &n(3)).unwrap(), n(5));
        let p = closed_product(&s, &s).unwrap();
        assert_eq!(
            apply(&p, &Value::pair(n(1), n(2))).unwrap(),
            Value::pair(n(2), n(3))
        );
        let it = closed_iter(&s).unwrap();
        assert_eq!(apply(&it, &Value::pair(n(2), n(3))).unwrap(), n(5));
        assert_eq!(apply(&it, &Value::pair(n(9), n(0))).unwrap(), n(9));
        assert_eq!(
            closed_compose(&s, &name("eq")).unwrap_err().name(),
            "TypeMismatch"
        );
    }

    #[test]
    fn closed_terms_typecheck() {
        let x = Obj::x();
        let (d, c) = closed_compose_term(&Obj::Nat, &x, &Obj::two())
            .unwrap()
            .typecheck()
            .unwrap();
        assert_eq!(
            d,
            Obj::prod(Obj::exp(Obj::two(), x.clone()), Obj::exp(x, Obj::Nat))
        );
        assert_eq!(c, Obj::exp(Obj::two(), Obj::Nat));
    }

    #[test]
    fn interpretation_examples() {
        let r = interpret(1, &encode(&Term::Succ).unwrap()).unwrap();
        assert_eq!(apply(&r.value, &n(7)).unwrap(), n(8));
        let s = encode(&Term::Succ).unwrap();
        let r = interpret(1, &code_compose(&s, &s).unwrap()).unwrap();
        assert_eq!(apply(&r.value, &n(3)).unwrap(), n(5));
        let eps = encode(&Term::Eps(Obj::Nat, Obj::two())).unwrap();
        assert_eq!(eps.stratum, 2);
        assert_eq!(
            interpret(1, &eps).unwrap_err(),
            Error::StratumExceeded { code: 2, bound: 1 }
        );
        let r = interpret(2, &eps).unwrap();
        assert!(r.used_stratum <= 4);
    }

    #[test]
    fn interpretation_agrees_with_evaluation() {
        for src in [
            "<s, id[N]>",
            "case(0, s . s)",
            "hom[N](eq) . lam[N,N]",
            "eps[N,2] . <hom[N](eq) . lam[N,N], s>",
            "it(s) . <id[N], s>",
        ] {
            let t = parse_term(src).unwrap();
            let code = encode(&t).unwrap();
            let r = interpret(code.stratum, &code).unwrap();
            assert!(r.used_stratum <= 2 * code.stratum, "{src}");
            for k in 0..6 {
                let direct = eval(&t, &n(k)).unwrap();
                let via = apply(&r.value, &n(k)).unwrap();
                assert!(crate::sample::obs_eq(&code.cod, &direct, &via, 1).unwrap(), "{src} at {k}");
            }
        }
    }

    #[test]
    fn std_corpus_is_objective() {
        let report = check_objectivity(1, &std_corpus(), 25, crate::sample::DEFAULT_SEED);
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn trace_records_cases() {
        let code = encode(&parse_term("it(s) . <id[N], s>").unwrap()).unwrap();
        let r = interpret_with(1, &code, Options { trace: true }, &mut Fuel::unlimited()).unwrap();
        assert_eq!(r.trace[0], "compose: it(s) . <id[N], s>");
        assert!(r.trace.iter().any(|l| l.trim_start().starts_with("iterate")));
    }
}
