//! The first-order universal object `X`: codes of singletons and of nested
//! pairs of naturals.
//!
//! A singleton `n` is coded `2n`; a pair of codes `(a, b)` is coded
//! `2 * cantor(a, b) + 1`. Parity tells the two apart and every natural
//! decodes, so `X` is all of `N`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::eval::{inhabits, Value};
use crate::terms::{Obj, Term};

/// Upper bound on the search for a point of a subset object.
pub const POINT_SEARCH_BOUND: u64 = 10_000;

/// A binary bracketed tuple of naturals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum XTuple {
    Single(BigUint),
    Pair(Box<XTuple>, Box<XTuple>),
}

pub fn cantor(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

pub fn uncantor(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

pub fn encode_single(n: &BigUint) -> BigUint {
    n * 2u32
}

pub fn encode_pair(a: &BigUint, b: &BigUint) -> BigUint {
    cantor(a, b) * 2u32 + 1u32
}

impl XTuple {
    pub fn encode(&self) -> BigUint {
        match self {
            XTuple::Single(n) => encode_single(n),
            XTuple::Pair(a, b) => encode_pair(&a.encode(), &b.encode()),
        }
    }

    pub fn decode(code: &BigUint) -> XTuple {
        if (code % 2u32).is_zero() {
            XTuple::Single(code / 2u32)
        } else {
            let (a, b) = uncantor(&(code / 2u32));
            XTuple::Pair(Box::new(XTuple::decode(&a)), Box::new(XTuple::decode(&b)))
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            XTuple::Single(_) => 0,
            XTuple::Pair(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Renders as nested `⟨a;b⟩` brackets, singletons as `⟨n⟩`.
impl fmt::Display for XTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XTuple::Single(n) => write!(f, "⟨{n}⟩"),
            XTuple::Pair(a, b) => write!(f, "⟨{a};{b}⟩"),
        }
    }
}

fn code_of(a: &Obj, v: &Value) -> Result<BigUint> {
    let bad = || Error::IllTyped(format!("{v} does not inhabit {a}"));
    if a.is_x() {
        return match v {
            Value::X(n) => Ok(n.clone()),
            _ => Err(bad()),
        };
    }
    match (a, v) {
        (Obj::One, Value::Unit) => Ok(encode_single(&BigUint::zero())),
        (Obj::Nat, Value::Num(n)) => Ok(encode_single(n)),
        (Obj::Subset(c, _), v) => code_of(c, v),
        (Obj::Prod(x, y), Value::Pair(p, q)) => Ok(encode_pair(&code_of(x, p)?, &code_of(y, q)?)),
        (Obj::Exp(..), _) => Err(Error::NotFirstOrder(format!("{a} has order {}", a.ord()))),
        _ => Err(bad()),
    }
}

/// `⊏_A: A -> X` for a first-order object `A`.
pub fn embed_first_order(a: &Obj, v: &Value) -> Result<Value> {
    if !a.is_first_order() {
        return Err(Error::NotFirstOrder(format!("{a} has order {}", a.ord())));
    }
    Ok(Value::X(code_of(a, v)?))
}

/// Decodes a code as an element of `a`, or `None` off the image of `⊏_A`.
fn decode_at(a: &Obj, code: &BigUint) -> Result<Option<Value>> {
    if a.is_x() {
        return Ok(Some(Value::X(code.clone())));
    }
    Ok(match a {
        Obj::One => Some(Value::Unit),
        Obj::Nat => match XTuple::decode(code) {
            XTuple::Single(n) => Some(Value::Num(n)),
            XTuple::Pair(..) => None,
        },
        Obj::Subset(c, _) => match decode_at(c, code)? {
            Some(v) if inhabits(a, &v)? => Some(v),
            _ => None,
        },
        Obj::Prod(x, y) => {
            if (code % 2u32).is_zero() {
                None
            } else {
                let (p, q) = uncantor(&(code / 2u32));
                match (decode_at(x, &p)?, decode_at(y, &q)?) {
                    (Some(vp), Some(vq)) => Some(Value::pair(vp, vq)),
                    _ => None,
                }
            }
        }
        Obj::Exp(..) => return Err(Error::NotFirstOrder(format!("{a}"))),
    })
}

/// `⊐_A: X -> A` with an explicit fallback point for off-image codes.
pub fn retract_with_point(a: &Obj, v: &Value, point: &Value) -> Result<Value> {
    let code = match v {
        Value::X(n) => n,
        other => return Err(Error::IllTyped(format!("{other} is not an X-code"))),
    };
    Ok(decode_at(a, code)?.unwrap_or_else(|| point.clone()))
}

/// `⊐_A: X -> A`, off-image codes going to the default point of `A`.
pub fn retract_first_order(a: &Obj, v: &Value) -> Result<Value> {
    if !a.is_first_order() {
        return Err(Error::NotFirstOrder(format!("{a} has order {}", a.ord())));
    }
    let point = default_point(a)?;
    retract_with_point(a, v, &point)
}

/// The default point `a₀: 1 -> A`.
///
/// `0` for `N`, `⟨0⟩` for `X`, componentwise for products, the least carrier
/// element satisfying the predicate (searched up to [`POINT_SEARCH_BOUND`])
/// for subsets, and the constant arrow at the base's point for exponentials.
pub fn default_point(a: &Obj) -> Result<Value> {
    if a.is_x() {
        return Ok(Value::X(BigUint::zero()));
    }
    match a {
        Obj::One => Ok(Value::Unit),
        Obj::Nat => Ok(Value::Num(BigUint::zero())),
        Obj::Prod(x, y) => Ok(Value::pair(default_point(x)?, default_point(y)?)),
        Obj::Exp(base, exponent) => {
            let b0 = default_point(base)?;
            let body = Term::constant(b0, (**base).clone(), (**exponent).clone())?;
            Ok(Value::arrow(body, (**exponent).clone(), (**base).clone()))
        }
        Obj::Subset(c, _) => {
            for i in 0..=POINT_SEARCH_BOUND {
                let i = BigUint::from(i);
                let candidate = if **c == Obj::Nat {
                    Some(Value::Num(i))
                } else if c.is_first_order() {
                    decode_at(c, &i)?
                } else {
                    return Err(Error::NoPoint(format!(
                        "no point search over the higher-order carrier {c}"
                    )));
                };
                if let Some(v) = candidate {
                    if inhabits(a, &v)? {
                        return Ok(v);
                    }
                }
            }
            Err(Error::NoPoint(format!(
                "no element of {a} among the first {} candidates",
                POINT_SEARCH_BOUND + 1
            )))
        }
    }
}

/// Whether a code is a singleton code.
pub fn is_singleton(code: &BigUint) -> bool {
    !(code % 2u32).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::terms::Pred;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn cantor_values() {
        assert_eq!(cantor(&big(2), &big(4)), big(25));
        for z in 0..500u64 {
            let (x, y) = uncantor(&big(z));
            assert_eq!(cantor(&x, &y), big(z));
        }
    }

    #[test]
    fn worked_embeddings() {
        assert_eq!(
            embed_first_order(&Obj::Nat, &Value::nat(5)).unwrap(),
            Value::x(10)
        );
        let nn = Obj::prod(Obj::Nat, Obj::Nat);
        assert_eq!(
            embed_first_order(&nn, &Value::pair(Value::nat(1), Value::nat(2))).unwrap(),
            Value::x(51)
        );
        assert_eq!(
            embed_first_order(&Obj::One, &Value::Unit).unwrap(),
            Value::x(0)
        );
        assert_eq!(
            embed_first_order(&Obj::exp(Obj::Nat, Obj::Nat), &Value::Unit)
                .unwrap_err()
                .name(),
            "NotFirstOrder"
        );
    }

    #[test]
    fn worked_retractions() {
        assert_eq!(
            retract_first_order(&Obj::Nat, &Value::x(10)).unwrap(),
            Value::nat(5)
        );
        assert_eq!(
            retract_first_order(&Obj::Nat, &Value::x(51)).unwrap(),
            Value::nat(0)
        );
        assert_eq!(
            retract_first_order(&Obj::two(), &Value::X(encode_single(&big(7)))).unwrap(),
            Value::nat(0)
        );
        assert_eq!(
            retract_first_order(&Obj::two(), &Value::x(2)).unwrap(),
            Value::nat(1)
        );
    }

    #[test]
    fn parity_discriminates() {
        for c in 0..200u64 {
            let t = XTuple::decode(&big(c));
            assert_eq!(matches!(t, XTuple::Single(_)), c % 2 == 0);
            assert_eq!(t.encode(), big(c));
        }
    }

    #[test]
    fn pretty_tuples() {
        assert_eq!(XTuple::decode(&big(51)).to_string(), "⟨⟨1⟩;⟨2⟩⟩");
    }

    #[test]
    fn points() {
        assert_eq!(default_point(&Obj::x()).unwrap(), Value::x(0));
        let odd = crate::syntax::parse_obj("{N | not . eq . <id[N], 0 . ![N]>}").unwrap();
        assert_eq!(default_point(&odd).unwrap(), Value::nat(1));
        let empty = Obj::Subset(
            Arc::new(Obj::Nat),
            Pred::Map(Arc::new(crate::syntax::parse_term("not . eq . diag[N]").unwrap())),
        );
        assert_eq!(default_point(&empty).unwrap_err().name(), "NoPoint");
    }
}
