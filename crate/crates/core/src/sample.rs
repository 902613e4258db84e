//! Seeded pseudo-random values, arrows and terms, and observational
//! equality of values.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::eval::{apply, inhabits, stdlib, Value};
use crate::terms::{Obj, Term};
use crate::universal::default_point;

/// The default seed of every sampled check.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Number of sample points in an observational comparison.
pub const OBSERVATIONS: usize = 20;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random element of `a`. Naturals stay below `size`.
pub fn sample_value<R: Rng>(a: &Obj, rng: &mut R, size: u64) -> Result<Value> {
    sample_at(a, rng, size.max(1), 3)
}

fn sample_at<R: Rng>(a: &Obj, rng: &mut R, size: u64, depth: u32) -> Result<Value> {
    if a.is_x() {
        return Ok(Value::x(rng.gen_range(0..4 * size)));
    }
    if a.is_two() {
        return Ok(Value::nat(rng.gen_range(0..2)));
    }
    match a {
        Obj::One => Ok(Value::Unit),
        Obj::Nat => Ok(Value::nat(rng.gen_range(0..size))),
        Obj::Prod(x, y) => Ok(Value::pair(
            sample_at(x, rng, size, depth)?,
            sample_at(y, rng, size, depth)?,
        )),
        Obj::Subset(c, _) => {
            for _ in 0..200 {
                let v = sample_at(c, rng, size, depth)?;
                if inhabits(a, &v)? {
                    return Ok(v);
                }
            }
            default_point(a)
        }
        Obj::Exp(base, exponent) => sample_arrow_at(exponent, base, rng, size, depth),
    }
}

/// A random arrow `dom -> cod`: a lookup table on `N` read through an
/// observer `dom -> N`.
pub fn sample_arrow<R: Rng>(dom: &Obj, cod: &Obj, rng: &mut R, size: u64) -> Result<Value> {
    sample_arrow_at(dom, cod, rng, size.max(1), 3)
}

fn sample_arrow_at<R: Rng>(dom: &Obj, cod: &Obj, rng: &mut R, size: u64, depth: u32) -> Result<Value> {
    let obs = observer(dom)?;
    let rows = if depth == 0 { 1 } else { rng.gen_range(1..=4) };
    let mut entries = Vec::with_capacity(rows);
    for _ in 0..rows {
        let v = if depth == 0 {
            default_point(cod)?
        } else {
            sample_at(cod, rng, size, depth - 1)?
        };
        entries.push(Term::lit(v, cod.clone())?);
    }
    let table = lookup_table(&entries);
    Ok(Value::arrow(Term::compose(table, obs), dom.clone(), cod.clone()))
}

/// `N -> B` returning `entries[k]` at `k` and the last entry beyond.
fn lookup_table(entries: &[Term]) -> Term {
    let (last, init) = entries.split_last().expect("at least one row");
    let mut t = Term::compose(last.clone(), Term::Terminal(Obj::Nat));
    for e in init.iter().rev() {
        t = Term::case_nat(e.clone(), t);
    }
    t
}

/// A map `a -> N` that distinguishes many elements of `a`.
pub fn observer(a: &Obj) -> Result<Term> {
    Ok(match a {
        Obj::One => Term::compose(Term::Zero, Term::Terminal(Obj::One)),
        Obj::Nat => Term::Id(Obj::Nat),
        Obj::Subset(c, _) => Term::compose(observer(c)?, Term::Incl(a.clone())),
        Obj::Prod(x, y) => Term::compose(
            stdlib::add(),
            Term::pair_prod(
                Term::compose(stdlib::double(), observer(x)?),
                observer(y)?,
            ),
        ),
        Obj::Exp(base, exponent) => {
            let at = Term::lit(default_point(exponent)?, (**exponent).clone())?;
            Term::chain([
                observer(base)?,
                Term::Eps((**exponent).clone(), (**base).clone()),
                Term::pairing(
                    Term::Id(a.clone()),
                    Term::compose(at, Term::Terminal(a.clone())),
                ),
            ])
        }
    })
}

/// Observational equality: equal on first-order data, and for arrows equal
/// after `ε` at `OBSERVATIONS` sampled points, recursively.
pub fn obs_eq(a: &Obj, v: &Value, w: &Value, seed: u64) -> Result<bool> {
    obs_eq_n(a, v, w, seed, OBSERVATIONS)
}

pub fn obs_eq_n(a: &Obj, v: &Value, w: &Value, seed: u64, samples: usize) -> Result<bool> {
    match a {
        Obj::Exp(base, exponent) => {
            let mut r = rng(seed);
            for k in 0..samples {
                let x = sample_value(exponent, &mut r, 8 + 4 * k as u64)?;
                let (fv, fw) = (apply(v, &x)?, apply(w, &x)?);
                if !obs_eq_n(base, &fv, &fw, seed.wrapping_add(k as u64 + 1), samples.min(4))? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Obj::Prod(x, y) => match (v.as_pair(), w.as_pair()) {
            (Some((v1, v2)), Some((w1, w2))) => {
                Ok(obs_eq_n(x, v1, w1, seed, samples)? && obs_eq_n(y, v2, w2, seed, samples)?)
            }
            _ => Ok(v == w),
        },
        Obj::Subset(c, _) => obs_eq_n(c, v, w, seed, samples),
        _ => Ok(v == w),
    }
}

fn first_order_objects() -> Vec<Obj> {
    vec![Obj::Nat, Obj::One, Obj::two(), Obj::x(), Obj::prod(Obj::Nat, Obj::Nat)]
}

/// A random well-typed surface term with domain `dom`, of nesting at most
/// `depth`. The codomain is whatever the construction produces.
pub fn rand_term_from<R: Rng>(dom: &Obj, rng: &mut R, depth: u32) -> Term {
    let atoms = atoms_from(dom, rng);
    if depth == 0 {
        return atoms.choose(rng).expect("identity is always available").clone();
    }
    let pick = rng.gen_range(0..10);
    match pick {
        0..=2 => {
            let f = rand_term_from(dom, rng, depth - 1);
            let g = rand_term_from(&f.cod_unchecked(), rng, depth - 1);
            Term::compose(g, f)
        }
        3 => Term::pairing(rand_term_from(dom, rng, depth - 1), rand_term_from(dom, rng, depth - 1)),
        4 => match dom {
            Obj::Prod(a, b) => {
                Term::pair_prod(rand_term_from(a, rng, depth - 1), rand_term_from(b, rng, depth - 1))
            }
            _ => Term::pairing(rand_term_from(dom, rng, depth - 1), Term::Id(dom.clone())),
        },
        5 => match dom {
            Obj::Prod(a, n) if **n == Obj::Nat => match rand_endo(a, rng, depth - 1) {
                Some(f) => Term::iter(f),
                None => atoms.choose(rng).expect("nonempty").clone(),
            },
            _ => atoms.choose(rng).expect("nonempty").clone(),
        },
        6 if *dom == Obj::Nat => {
            let f0 = rand_term_from(&Obj::One, rng, depth - 1);
            let b = f0.cod_unchecked();
            match rand_term_to(&Obj::Nat, &b, rng, depth - 1) {
                Some(fs) => Term::case_nat(f0, fs),
                None => Term::case_nat(Term::Zero, Term::Id(Obj::Nat)),
            }
        }
        7 => match dom {
            Obj::Exp(b, a) => Term::hom_co((**a).clone(), rand_term_from(b, rng, depth - 1)),
            _ => {
                let f = rand_term_from(dom, rng, depth - 1);
                Term::compose(Term::Lambda(f.cod_unchecked(), Obj::Nat), f)
            }
        },
        _ => atoms.choose(rng).expect("nonempty").clone(),
    }
}

fn atoms_from<R: Rng>(dom: &Obj, rng: &mut R) -> Vec<Term> {
    let mut out = vec![
        Term::Id(dom.clone()),
        Term::Terminal(dom.clone()),
        Term::Diagonal(dom.clone()),
    ];
    let extra = first_order_objects().choose(rng).expect("nonempty").clone();
    out.push(Term::Lambda(dom.clone(), extra));
    match dom {
        Obj::One => out.push(Term::Zero),
        Obj::Nat => {
            out.push(Term::Succ);
            out.push(stdlib::pred());
            out.push(stdlib::is_zero());
        }
        Obj::Prod(a, b) => {
            out.push(Term::ProjL((**a).clone(), (**b).clone()));
            out.push(Term::ProjR((**a).clone(), (**b).clone()));
            if let Obj::Exp(base, exponent) = &**a {
                if **exponent == **b {
                    out.push(Term::Eps((**b).clone(), (**base).clone()));
                }
            }
            if **a == Obj::Nat && **b == Obj::Nat {
                out.push(Term::EqNat);
                out.push(stdlib::add());
            }
        }
        Obj::Subset(..) => out.push(Term::Incl(dom.clone())),
        Obj::Exp(..) => {}
    }
    if dom.is_two() {
        out.push(Term::Neg);
    }
    out
}

/// A random endo map on `a`, if one is found quickly.
fn rand_endo<R: Rng>(a: &Obj, rng: &mut R, depth: u32) -> Option<Term> {
    rand_term_to(a, a, rng, depth)
}

/// A random term `dom -> cod`, by rejection, falling back to the identity
/// or a constant when one fits.
pub fn rand_term_to<R: Rng>(dom: &Obj, cod: &Obj, rng: &mut R, depth: u32) -> Option<Term> {
    for _ in 0..40 {
        let t = rand_term_from(dom, rng, depth);
        if t.cod_unchecked() == *cod && t.typecheck().is_ok() {
            return Some(t);
        }
    }
    if dom == cod {
        return Some(Term::Id(dom.clone()));
    }
    None
}

/// A random closed first-order or exponential object from a small corpus.
pub fn rand_object<R: Rng>(rng: &mut R) -> Obj {
    let fo = first_order_objects();
    let a = fo.choose(rng).expect("nonempty").clone();
    match rng.gen_range(0..4) {
        0 => Obj::prod(a, fo.choose(rng).expect("nonempty").clone()),
        1 => Obj::exp(a, fo.choose(rng).expect("nonempty").clone()),
        _ => a,
    }
}
