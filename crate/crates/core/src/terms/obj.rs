use std::sync::Arc;

use super::map::Term;

/// Object terms: the types of the calculus.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Obj {
    One,
    Nat,
    Prod(Arc<Obj>, Arc<Obj>),
    /// `Exp(base, exponent)` is the internal hom `base^exponent`.
    Exp(Arc<Obj>, Arc<Obj>),
    /// A predicate subset `{carrier | predicate}`.
    Subset(Arc<Obj>, Pred),
}

/// The characteristic map of a subset object.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Pred {
    /// `n < 2`, the predicate carving the truth-value object out of `N`.
    /// Built in because its own codomain is the object it defines.
    LessThanTwo,
    Map(Arc<Term>),
}

impl Obj {
    pub fn prod(a: Obj, b: Obj) -> Obj {
        Obj::Prod(Arc::new(a), Arc::new(b))
    }

    /// `base^exponent`.
    pub fn exp(base: Obj, exponent: Obj) -> Obj {
        Obj::Exp(Arc::new(base), Arc::new(exponent))
    }

    /// The truth-value object `2 = {n in N | n < 2}`.
    pub fn two() -> Obj {
        Obj::Subset(Arc::new(Obj::Nat), Pred::LessThanTwo)
    }

    /// The first-order universal object. With the even/odd Cantor codec every
    /// natural is a code, so its predicate is constantly true: `eq . diag[N]`.
    pub fn x() -> Obj {
        Obj::Subset(Arc::new(Obj::Nat), Pred::Map(Arc::new(x_predicate())))
    }

    pub fn is_two(&self) -> bool {
        matches!(self, Obj::Subset(c, Pred::LessThanTwo) if **c == Obj::Nat)
    }

    pub fn is_x(&self) -> bool {
        match self {
            Obj::Subset(c, Pred::Map(p)) => **c == Obj::Nat && **p == x_predicate(),
            _ => false,
        }
    }

    pub fn is_first_order(&self) -> bool {
        self.ord() == 1
    }

    /// Order of an object term.
    ///
    /// `1` and `N` have order one, products take the maximum, subsets inherit
    /// their carrier's order. An exponential over a first-order base has order
    /// `1 + ord(exponent)`; an exponential whose base is itself an exponential
    /// is measured through the reduction `(C^B)^A = C^(B*A)`. Product and subset
    /// bases are measured componentwise, which agrees with the first-order
    /// clause whenever the base is first-order.
    pub fn ord(&self) -> u32 {
        match self {
            Obj::One | Obj::Nat => 1,
            Obj::Prod(a, b) => a.ord().max(b.ord()),
            Obj::Subset(c, _) => c.ord(),
            Obj::Exp(base, exponent) => exp_ord(base, exponent),
        }
    }

    /// Rewrites every `(C^B)^A` into `C^(B*A)`, innermost first, until no
    /// exponential has an exponential base. Subset objects are left untouched:
    /// their predicate is typed against the carrier as written.
    pub fn normalize_exp(&self) -> Obj {
        match self {
            Obj::One | Obj::Nat | Obj::Subset(..) => self.clone(),
            Obj::Prod(a, b) => Obj::prod(a.normalize_exp(), b.normalize_exp()),
            Obj::Exp(base, exponent) => rebase(base.normalize_exp(), exponent.normalize_exp()),
        }
    }

    pub fn is_normal(&self) -> bool {
        match self {
            Obj::One | Obj::Nat | Obj::Subset(..) => true,
            Obj::Prod(a, b) => a.is_normal() && b.is_normal(),
            Obj::Exp(base, exponent) => {
                !matches!(**base, Obj::Exp(..)) && base.is_normal() && exponent.is_normal()
            }
        }
    }

    /// Number of constructor nodes, subset predicates counted as one.
    pub fn size(&self) -> usize {
        match self {
            Obj::One | Obj::Nat | Obj::Subset(..) => 1,
            Obj::Prod(a, b) | Obj::Exp(a, b) => 1 + a.size() + b.size(),
        }
    }
}

fn exp_ord(base: &Obj, exponent: &Obj) -> u32 {
    match base {
        Obj::One | Obj::Nat => 1 + exponent.ord(),
        Obj::Subset(c, _) => exp_ord(c, exponent),
        Obj::Prod(b1, b2) => exp_ord(b1, exponent).max(exp_ord(b2, exponent)),
        Obj::Exp(c, b) => exp_ord(c, &Obj::Prod(b.clone(), Arc::new(exponent.clone()))),
    }
}

fn rebase(base: Obj, exponent: Obj) -> Obj {
    match base {
        Obj::Exp(c, b) => Obj::Exp(c, Arc::new(Obj::Prod(b, Arc::new(exponent)))),
        base => Obj::exp(base, exponent),
    }
}

/// `eq . diag[N]`, constantly true on `N`.
pub fn x_predicate() -> Term {
    Term::compose(Term::EqNat, Term::Diagonal(Obj::Nat))
}
