#![allow(dead_code)]

use num_bigint::BigUint;
use pre_core::eval::{stdlib, Value};
use pre_core::syntax::{parse_obj, parse_term};
use pre_core::terms::{Obj, Term};

pub fn t(src: &str) -> Term {
    parse_term(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn o(src: &str) -> Obj {
    parse_obj(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn n(k: u64) -> Value {
    Value::nat(k)
}

pub fn pair(a: Value, b: Value) -> Value {
    Value::pair(a, b)
}

/// Cantor pairing by the textbook formula, on machine integers.
pub fn cantor_oracle(x: u64, y: u64) -> u64 {
    (x + y) * (x + y + 1) / 2 + y
}

/// Nested tuples of naturals, independent of the library codec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tuple {
    Leaf(u64),
    Node(Box<Tuple>, Box<Tuple>),
}

impl Tuple {
    /// Singletons go to `2n`, pairs to `2 * cantor + 1`.
    pub fn code(&self) -> BigUint {
        match self {
            Tuple::Leaf(k) => BigUint::from(2 * k),
            Tuple::Node(a, b) => {
                let (x, y) = (a.code(), b.code());
                let s = &x + &y;
                ((&s * (&s + 1u32)) / 2u32 + y) * 2u32 + 1u32
            }
        }
    }
}

/// Maps of the standard library with an arithmetic oracle each.
pub fn arithmetic() -> Vec<(&'static str, Term, fn(u64, u64) -> u64)> {
    vec![
        ("add", stdlib::add(), |a, b| a + b),
        ("mult", stdlib::mult(), |a, b| a * b),
        ("subtrunc", stdlib::subtrunc(), |a, b| a.saturating_sub(b)),
        ("leq", stdlib::leq(), |a, b| (a <= b) as u64),
        ("eqnat", stdlib::eqnat(), |a, b| (a == b) as u64),
    ]
}

/// Thirty maps for the objectivity check, across types and strata.
pub fn corpus30() -> Vec<(String, Term)> {
    let mut out: Vec<(String, Term)> = stdlib::stdlib()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    for src in [
        "id[N]",
        "it(s)",
        "s",
        "s . s",
        "0 . ![N]",
        "eq . diag[N]",
        "not . eq . <s, id[N]>",
        "case(0, s . s)",
        "case(s . 0, id[N])",
        "projl[N,N] x s",
        "<projr[N,N], projl[N,N]>",
        "it(s . s)",
        "it(<projr[N,N], projl[N,N]>)",
        "lam[N,N]",
        "hom[N](projr[N,N]) . lam[N,N]",
        "eps[N,N*N] . <lam[N,N], s>",
        "eps[N,2] . <hom[N](eq) . lam[N,N], s>",
        "hom[N](eq) . lam[N,N]",
        "eps[N,N] x id[N]",
        "eps[N,N]",
        "lam[N,N^N]",
        "<s, eq . diag[N]>",
        "diag[N*N]",
    ] {
        out.push((src.to_string(), t(src)));
    }
    out
}

/// Fifteen objects across strata 1 to 3 for the embedding check.
pub fn objects15() -> Vec<Obj> {
    [
        "N", "1", "2", "X", "N*N", "N*2", "X*N", "(N*N)*X",
        "N^N", "X^X", "2^N", "(X^X)^X", "N^N*N", "X^(X^X)", "2^(N^N)",
    ]
    .iter()
    .map(|s| o(s))
    .collect()
}
