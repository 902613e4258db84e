//! The ascending chain `U_1 = X`, `U_{n+1} = X^{U_n}` and the coretractive
//! embeddings of arbitrary objects into it.
//!
//! All embeddings and retractions are built as map terms, so an embedding of
//! `B^A` can precompose with the retraction of `A` as an arrow. Values are
//! obtained by evaluating those terms.

use crate::error::{Error, Result};
use crate::eval::{eval, inhabits, Value};
use crate::terms::{conj, hom_co, hom_contra, Obj, Term};

use super::codec::default_point;

/// `U_n`.
pub fn level(n: u32) -> Result<Obj> {
    if n == 0 {
        return Err(Error::LevelMismatch("the chain starts at level 1".into()));
    }
    let mut u = Obj::x();
    for _ in 1..n {
        u = Obj::exp(Obj::x(), u);
    }
    Ok(u)
}

fn x_zero() -> Value {
    Value::x(0)
}

/// `U_n ⊏ U_{n+1}` as a term.
///
/// Level one is the constant embedding `X^! . conj[l]`; higher levels
/// precompose with the retraction one level down.
pub fn chain_embed_term(n: u32) -> Result<Term> {
    if n == 0 {
        return Err(Error::LevelMismatch("the chain starts at level 1".into()));
    }
    let x = Obj::x();
    if n == 1 {
        let constant = conj(&Term::ProjL(x.clone(), Obj::One))?;
        return Ok(Term::compose(
            hom_contra(&x, &Term::Terminal(x.clone()))?,
            constant,
        ));
    }
    hom_contra(&x, &chain_retract_term(n - 1)?)
}

/// `U_{n+1} ⊐ U_n` as a term.
///
/// Level one evaluates at the point `⟨0⟩`; higher levels precompose with
/// the embedding one level down.
pub fn chain_retract_term(n: u32) -> Result<Term> {
    if n == 0 {
        return Err(Error::LevelMismatch("the chain starts at level 1".into()));
    }
    let x = Obj::x();
    if n == 1 {
        let at_zero = hom_contra(&x, &Term::lit(x_zero(), x.clone())?)?;
        let x1 = Obj::exp(x.clone(), Obj::One);
        let apply = Term::compose(
            Term::Eps(Obj::One, x),
            Term::pairing(Term::Id(x1.clone()), Term::Terminal(x1)),
        );
        return Ok(Term::compose(apply, at_zero));
    }
    hom_contra(&x, &chain_embed_term(n - 1)?)
}

fn check_level(n: u32, v: &Value) -> Result<()> {
    let u = level(n)?;
    if !inhabits(&u, v)? {
        return Err(Error::LevelMismatch(format!("{v} is not an element of U_{n} = {u}")));
    }
    Ok(())
}

/// `⊏: U_n -> U_{n+1}` applied to a value.
pub fn chain_up(n: u32, v: &Value) -> Result<Value> {
    check_level(n, v)?;
    eval(&chain_embed_term(n)?, v)
}

/// `⊐: U_{n+1} -> U_n` applied to a value.
pub fn chain_down(n: u32, w: &Value) -> Result<Value> {
    check_level(n + 1, w)?;
    eval(&chain_retract_term(n)?, w)
}

/// `U_from -> U_to` for `from <= to`, composed from single steps.
pub fn lift_term(from: u32, to: u32) -> Result<Term> {
    if from == 0 || from > to {
        return Err(Error::LevelMismatch(format!("cannot lift U_{from} to U_{to}")));
    }
    if from == to {
        return Ok(Term::Id(level(to)?));
    }
    let steps: Result<Vec<Term>> = (from..to).rev().map(chain_embed_term).collect();
    Ok(Term::chain(steps?))
}

/// `U_from -> U_to` for `from >= to`.
pub fn lower_term(from: u32, to: u32) -> Result<Term> {
    if to == 0 || to > from {
        return Err(Error::LevelMismatch(format!("cannot lower U_{from} to U_{to}")));
    }
    if from == to {
        return Ok(Term::Id(level(to)?));
    }
    let steps: Result<Vec<Term>> = (to..from).map(chain_retract_term).collect();
    Ok(Term::chain(steps?))
}

/// An object's embedding into its chain member `U_level` and the retraction
/// back. The retraction needs points and may be unavailable.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub object: Obj,
    pub normal: Obj,
    pub level: u32,
    pub embed: Result<Term>,
    pub retract: Result<Term>,
}

fn unsupported(a: &Obj) -> Error {
    Error::Unsupported(format!(
        "no embedding for {a}: subset objects over higher-order carriers are not handled"
    ))
}

fn not_pointed(e: Error) -> Error {
    match e {
        Error::NoPoint(m) => Error::NotPointed(m),
        e => e,
    }
}

/// Builds the embedding pair for any object term.
///
/// First-order objects go through the codec. `B^A` with `B` first-order is
/// `⊏_B^U . B^{⊐_A}` one way and `⊐_B^A . X^{⊏_A}` back. Exponentials over
/// exponential or product bases pass through the currying and distribution
/// isomorphisms first. Higher-order products pair their lifted components
/// pointwise inside `X`.
pub fn embedding(a: &Obj) -> Result<Embedding> {
    let (embed, retract) = build(a)?;
    Ok(Embedding {
        object: a.clone(),
        normal: a.normalize_exp(),
        level: a.ord(),
        embed,
        retract,
    })
}

type Pair = (Result<Term>, Result<Term>);

fn build(a: &Obj) -> Result<Pair> {
    if a.is_first_order() {
        let retract = default_point(a)
            .map(|p| Term::XDec(a.clone(), std::sync::Arc::new(p)))
            .map_err(not_pointed);
        return Ok((Ok(Term::XEnc(a.clone())), retract));
    }
    match a {
        Obj::One | Obj::Nat => unreachable!("first-order"),
        Obj::Subset(..) => Err(unsupported(a)),
        Obj::Prod(a1, a2) => build_product(a, a1, a2),
        Obj::Exp(base, exponent) => match &**base {
            Obj::Exp(c, d) => {
                let (to, from) = curry_iso(c, d, exponent)?;
                let normal = Obj::exp((**c).clone(), Obj::prod((**d).clone(), (**exponent).clone()));
                let (e, r) = build(&normal)?;
                Ok((e.map(|e| Term::compose(e, to)), r.map(|r| Term::compose(from, r))))
            }
            Obj::Prod(b1, b2) => {
                let (to, from) = distribute_iso(b1, b2, exponent)?;
                let split = Obj::prod(
                    Obj::exp((**b1).clone(), (**exponent).clone()),
                    Obj::exp((**b2).clone(), (**exponent).clone()),
                );
                let (e, r) = build(&split)?;
                Ok((e.map(|e| Term::compose(e, to)), r.map(|r| Term::compose(from, r))))
            }
            b if b.is_first_order() => build_exp(b, exponent),
            _ => Err(unsupported(a)),
        },
    }
}

/// `B^A` for first-order `B`, into `U_{1 + ord A}`.
fn build_exp(b: &Obj, a: &Obj) -> Result<Pair> {
    let n = a.ord();
    let un = level(n)?;
    let (ea, ra) = build(a)?;
    let (eb, rb) = build(b)?;
    let embed = (|| {
        let ra = ra.clone()?;
        Ok(Term::compose(hom_co(&un, &eb?)?, hom_contra(b, &ra)?))
    })();
    let retract = (|| {
        let ea = ea?;
        Ok(Term::compose(hom_co(a, &rb?)?, hom_contra(&Obj::x(), &ea)?))
    })();
    Ok((embed, retract))
}

/// Higher-order `A1 * A2` into `U_n`, `n = ord(A1 * A2) >= 2`: lift both
/// components to `U_n` and code the pair of their values pointwise.
fn build_product(a: &Obj, a1: &Obj, a2: &Obj) -> Result<Pair> {
    let n = a.ord();
    let u = level(n)?;
    let w = level(n - 1)?;
    let x = Obj::x();
    let xx = Obj::prod(x.clone(), x.clone());
    let uu = Obj::prod(u.clone(), u.clone());

    let component = |proj: Term| {
        Term::compose(
            Term::Eps(w.clone(), x.clone()),
            Term::pair_prod(proj, Term::Id(w.clone())),
        )
    };
    let pack = conj(&Term::compose(
        Term::XEnc(xx.clone()),
        Term::pairing(
            component(Term::ProjL(u.clone(), u.clone())),
            component(Term::ProjR(u.clone(), u.clone())),
        ),
    ))?;
    debug_assert_eq!(pack.typecheck().map(|t| t.0), Ok(uu));
    let xx_point = std::sync::Arc::new(Value::pair(x_zero(), x_zero()));
    let half = |proj: Term| hom_co(&w, &Term::compose(proj, Term::XDec(xx.clone(), xx_point.clone())));
    let unpack = Term::pairing(
        half(Term::ProjL(x.clone(), x.clone()))?,
        half(Term::ProjR(x.clone(), x.clone()))?,
    );

    let (e1, r1) = build(a1)?;
    let (e2, r2) = build(a2)?;
    let (k1, k2) = (a1.ord(), a2.ord());
    let embed = (|| {
        let l1 = Term::compose(lift_term(k1, n)?, e1?);
        let l2 = Term::compose(lift_term(k2, n)?, e2?);
        Ok(Term::compose(pack, Term::pair_prod(l1, l2)))
    })();
    let retract = (|| {
        let d1 = Term::compose(r1?, lower_term(n, k1)?);
        let d2 = Term::compose(r2?, lower_term(n, k2)?);
        Ok(Term::compose(Term::pair_prod(d1, d2), unpack))
    })();
    Ok((embed, retract))
}

/// `(C^D)^A ≅ C^(D*A)`, both directions.
fn curry_iso(c: &Obj, d: &Obj, a: &Obj) -> Result<(Term, Term)> {
    let cd = Obj::exp(c.clone(), d.clone());
    let cda = Obj::exp(cd.clone(), a.clone());
    let da = Obj::prod(d.clone(), a.clone());
    let flat = Obj::exp(c.clone(), da.clone());

    // (phi, (d, a)) |-> phi(a)(d)
    let uncurry = conj(&Term::compose(
        Term::Eps(d.clone(), c.clone()),
        Term::pairing(
            Term::compose(
                Term::Eps(a.clone(), cd.clone()),
                Term::pairing(
                    Term::ProjL(cda.clone(), da.clone()),
                    Term::compose(
                        Term::ProjR(d.clone(), a.clone()),
                        Term::ProjR(cda.clone(), da.clone()),
                    ),
                ),
            ),
            Term::compose(
                Term::ProjL(d.clone(), a.clone()),
                Term::ProjR(cda.clone(), da.clone()),
            ),
        ),
    ))?;

    // ((psi, a), d) |-> psi(d, a)
    let psi_a = Obj::prod(flat.clone(), a.clone());
    let curry = conj(&conj(&Term::compose(
        Term::Eps(da, c.clone()),
        Term::pairing(
            Term::compose(
                Term::ProjL(flat.clone(), a.clone()),
                Term::ProjL(psi_a.clone(), d.clone()),
            ),
            Term::pairing(
                Term::ProjR(psi_a.clone(), d.clone()),
                Term::compose(
                    Term::ProjR(flat, a.clone()),
                    Term::ProjL(psi_a, d.clone()),
                ),
            ),
        ),
    ))?)?;
    Ok((uncurry, curry))
}

/// `(B1*B2)^A ≅ B1^A * B2^A`, both directions.
fn distribute_iso(b1: &Obj, b2: &Obj, a: &Obj) -> Result<(Term, Term)> {
    let split = Term::pairing(
        hom_co(a, &Term::ProjL(b1.clone(), b2.clone()))?,
        hom_co(a, &Term::ProjR(b1.clone(), b2.clone()))?,
    );
    let e1 = Obj::exp(b1.clone(), a.clone());
    let e2 = Obj::exp(b2.clone(), a.clone());
    let joined = conj(&Term::pairing(
        Term::compose(
            Term::Eps(a.clone(), b1.clone()),
            Term::pair_prod(Term::ProjL(e1.clone(), e2.clone()), Term::Id(a.clone())),
        ),
        Term::compose(
            Term::Eps(a.clone(), b2.clone()),
            Term::pair_prod(Term::ProjR(e1, e2), Term::Id(a.clone())),
        ),
    ))?;
    Ok((split, joined))
}

/// Embeds a value of `a` into `U_target`, `target >= ord(a)`, stepping up
/// the chain one level at a time.
pub fn embed_object(a: &Obj, v: &Value, target: u32) -> Result<Value> {
    let emb = embedding(a)?;
    if target < emb.level {
        return Err(Error::LevelMismatch(format!(
            "{a} has order {} and does not embed into U_{target}",
            emb.level
        )));
    }
    if !inhabits(a, v)? {
        return Err(Error::IllTyped(format!("{v} does not inhabit {a}")));
    }
    let mut w = eval(&emb.embed?, v)?;
    for n in emb.level..target {
        w = chain_up(n, &w)?;
    }
    Ok(w)
}

/// The retraction `U_source -> a`, `source >= ord(a)`.
pub fn retract_object(a: &Obj, w: &Value, source: u32) -> Result<Value> {
    let emb = embedding(a)?;
    if source < emb.level {
        return Err(Error::LevelMismatch(format!(
            "{a} has order {} and is not retracted from U_{source}",
            emb.level
        )));
    }
    let retract = emb.retract?;
    let mut w = w.clone();
    for n in (emb.level..source).rev() {
        w = chain_down(n, &w)?;
    }
    check_level(emb.level, &w)?;
    eval(&retract, &w)
}

/// The composite embedding term `A -> U_target`.
pub fn embed_term_at(a: &Obj, target: u32) -> Result<Term> {
    let emb = embedding(a)?;
    Ok(Term::compose(lift_term(emb.level, target)?, emb.embed?))
}

/// The composite retraction term `U_source -> A`.
pub fn retract_term_at(a: &Obj, source: u32) -> Result<Term> {
    let emb = embedding(a)?;
    Ok(Term::compose(emb.retract?, lower_term(source, emb.level)?))
}
