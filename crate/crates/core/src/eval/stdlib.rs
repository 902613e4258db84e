//! Primitive recursive arithmetic written in the term language.

use crate::terms::{x_predicate, Obj, Term};

fn nn() -> Obj {
    Obj::prod(Obj::Nat, Obj::Nat)
}

/// `(a, n) -> a + n`, the iterated successor.
pub fn add() -> Term {
    Term::iter(Term::Succ)
}

/// `(a, n) -> a * n`: iterate `(a, acc) -> (a, acc + a)` from `(a, 0)`.
pub fn mult() -> Term {
    let step = Term::pairing(
        Term::ProjL(Obj::Nat, Obj::Nat),
        Term::compose(
            add(),
            Term::pairing(Term::ProjR(Obj::Nat, Obj::Nat), Term::ProjL(Obj::Nat, Obj::Nat)),
        ),
    );
    let start = Term::pair_prod(
        Term::pairing(
            Term::Id(Obj::Nat),
            Term::compose(Term::Zero, Term::Terminal(Obj::Nat)),
        ),
        Term::Id(Obj::Nat),
    );
    Term::chain([Term::ProjR(Obj::Nat, Obj::Nat), Term::iter(step), start])
}

/// Truncated predecessor.
pub fn pred() -> Term {
    Term::case_nat(Term::Zero, Term::Id(Obj::Nat))
}

/// `(a, n) -> a - n`, truncated at zero.
pub fn subtrunc() -> Term {
    Term::iter(pred())
}

/// `(a, b) -> a <= b`.
pub fn leq() -> Term {
    Term::compose(
        Term::EqNat,
        Term::pairing(subtrunc(), Term::compose(Term::Zero, Term::Terminal(nn()))),
    )
}

pub fn eqnat() -> Term {
    Term::EqNat
}

pub fn not() -> Term {
    Term::Neg
}

/// `n -> 2n`.
pub fn double() -> Term {
    Term::compose(add(), Term::Diagonal(Obj::Nat))
}

/// `n -> (n == 0)`.
pub fn is_zero() -> Term {
    Term::compose(
        Term::EqNat,
        Term::pairing(
            Term::Id(Obj::Nat),
            Term::compose(Term::Zero, Term::Terminal(Obj::Nat)),
        ),
    )
}

/// The constantly true predicate on `N`.
pub fn always() -> Term {
    x_predicate()
}

/// The named standard maps.
pub fn stdlib() -> Vec<(&'static str, Term)> {
    vec![
        ("add", add()),
        ("mult", mult()),
        ("pred", pred()),
        ("subtrunc", subtrunc()),
        ("leq", leq()),
        ("eqnat", eqnat()),
        ("not", not()),
    ]
}

pub fn lookup(name: &str) -> Option<Term> {
    match name {
        "double" => Some(double()),
        "is_zero" => Some(is_zero()),
        "always" => Some(always()),
        _ => stdlib().into_iter().find(|(n, _)| *n == name).map(|(_, t)| t),
    }
}
