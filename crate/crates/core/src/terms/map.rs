use std::sync::Arc;

use super::obj::{Obj, Pred};
use crate::error::{Error, Result};
use crate::eval::Value;

/// Map terms of the calculus.
///
/// `Lit`, `XEnc` and `XDec` are evaluator-internal: they appear inside
/// closure values and universal-chain embeddings but have no code.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    /// `0: 1 -> N`
    Zero,
    /// `s: N -> N`
    Succ,
    Id(Obj),
    /// `!: A -> 1`
    Terminal(Obj),
    /// `l: A*B -> A`
    ProjL(Obj, Obj),
    /// `r: A*B -> B`
    ProjR(Obj, Obj),
    /// `A -> A*A`
    Diagonal(Obj),
    /// `Compose(g, f)` is `g . f`.
    Compose(Arc<Term>, Arc<Term>),
    /// `f x g: A*B -> C*D`
    PairProd(Arc<Term>, Arc<Term>),
    /// `<f, g>: A -> C*D`, an abbreviation of `(f x g) . diag`.
    Pairing(Arc<Term>, Arc<Term>),
    /// `f: A -> A` gives the iterated `A*N -> A`.
    Iter(Arc<Term>),
    /// `eps[A,B]: B^A * A -> B`
    Eps(Obj, Obj),
    /// `lam[A,B]: A -> (A*B)^B`
    Lambda(Obj, Obj),
    /// Covariant internal hom on a map: `hom[A](g): B^A -> C^A` for `g: B -> C`.
    HomCo(Obj, Arc<Term>),
    /// Inclusion of a subset object into its carrier.
    Incl(Obj),
    /// `not: 2 -> 2`
    Neg,
    /// `eq: N*N -> 2`
    EqNat,
    /// `case(f0, fs): N -> B` for `f0: 1 -> B`, `fs: N -> B`; the successor
    /// branch receives the predecessor.
    CaseNat(Arc<Term>, Arc<Term>),
    /// A literal point `1 -> A`.
    Lit(Arc<Value>, Obj),
    /// The first-order embedding `A -> X`.
    XEnc(Obj),
    /// The retraction `X -> A`, falling back to the stored default point.
    XDec(Obj, Arc<Value>),
}

/// The typing of a term together with its stratum and depth.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Typing {
    pub dom: Obj,
    pub cod: Obj,
    pub stratum: u32,
    pub depth: u32,
}

impl Term {
    pub fn compose(g: Term, f: Term) -> Term {
        Term::Compose(Arc::new(g), Arc::new(f))
    }

    /// Composes a chain given outermost first: `chain([h, g, f]) = h . (g . f)`.
    pub fn chain<I: IntoIterator<Item = Term>>(maps: I) -> Term
    where
        I::IntoIter: DoubleEndedIterator,
    {
        let mut it = maps.into_iter().rev();
        let mut acc = it.next().expect("chain of at least one map");
        for g in it {
            acc = Term::compose(g, acc);
        }
        acc
    }

    pub fn pair_prod(f: Term, g: Term) -> Term {
        Term::PairProd(Arc::new(f), Arc::new(g))
    }

    pub fn pairing(f: Term, g: Term) -> Term {
        Term::Pairing(Arc::new(f), Arc::new(g))
    }

    pub fn iter(f: Term) -> Term {
        Term::Iter(Arc::new(f))
    }

    pub fn hom_co(exponent: Obj, g: Term) -> Term {
        Term::HomCo(exponent, Arc::new(g))
    }

    pub fn case_nat(f0: Term, fs: Term) -> Term {
        Term::CaseNat(Arc::new(f0), Arc::new(fs))
    }

    /// A literal point, checked for membership.
    pub fn lit(v: Value, obj: Obj) -> Result<Term> {
        if !crate::eval::inhabits(&obj, &v)? {
            return Err(Error::IllTyped(format!("literal {v} does not inhabit {obj}")));
        }
        Ok(Term::Lit(Arc::new(v), obj))
    }

    /// The constant map `A -> B` with value `v`, i.e. `lit . !`.
    pub fn constant(v: Value, value_obj: Obj, dom: Obj) -> Result<Term> {
        Ok(Term::compose(Term::lit(v, value_obj)?, Term::Terminal(dom)))
    }

    /// Direct children, in code order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Compose(a, b)
            | Term::PairProd(a, b)
            | Term::Pairing(a, b)
            | Term::CaseNat(a, b) => vec![a, b],
            Term::Iter(a) | Term::HomCo(_, a) => vec![a],
            _ => Vec::new(),
        }
    }

    /// Whether the term lies in the codable surface fragment.
    pub fn is_surface(&self) -> bool {
        match self {
            Term::Lit(..) | Term::XEnc(_) | Term::XDec(..) => false,
            _ => self.children().into_iter().all(Term::is_surface),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> u32 {
        1 + self
            .children()
            .into_iter()
            .map(Term::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn typecheck(&self) -> Result<(Obj, Obj)> {
        let t = self.analyze()?;
        Ok((t.dom, t.cod))
    }

    /// Minimal stratum containing the term: the largest order among the
    /// domains and codomains of all its subterms.
    pub fn stratum(&self) -> Result<u32> {
        Ok(self.analyze()?.stratum)
    }

    /// Type inference with stratum and depth, computed bottom-up in one pass.
    pub fn analyze(&self) -> Result<Typing> {
        let leaf = |dom: Obj, cod: Obj| -> Result<Typing> {
            check_obj(&dom)?;
            check_obj(&cod)?;
            Ok(Typing {
                stratum: dom.ord().max(cod.ord()),
                dom,
                cod,
                depth: 1,
            })
        };
        let node = |dom: Obj, cod: Obj, kids: &[&Typing]| -> Typing {
            let stratum = kids
                .iter()
                .map(|k| k.stratum)
                .chain([dom.ord(), cod.ord()])
                .max()
                .unwrap_or(1);
            let depth = 1 + kids.iter().map(|k| k.depth).max().unwrap_or(0);
            Typing {
                dom,
                cod,
                stratum,
                depth,
            }
        };
        match self {
            Term::Zero => leaf(Obj::One, Obj::Nat),
            Term::Succ => leaf(Obj::Nat, Obj::Nat),
            Term::Id(a) => leaf(a.clone(), a.clone()),
            Term::Terminal(a) => leaf(a.clone(), Obj::One),
            Term::ProjL(a, b) => leaf(Obj::prod(a.clone(), b.clone()), a.clone()),
            Term::ProjR(a, b) => leaf(Obj::prod(a.clone(), b.clone()), b.clone()),
            Term::Diagonal(a) => leaf(a.clone(), Obj::prod(a.clone(), a.clone())),
            Term::Eps(a, b) => leaf(
                Obj::prod(Obj::exp(b.clone(), a.clone()), a.clone()),
                b.clone(),
            ),
            Term::Lambda(a, b) => leaf(
                a.clone(),
                Obj::exp(Obj::prod(a.clone(), b.clone()), b.clone()),
            ),
            Term::Incl(s) => match s {
                Obj::Subset(c, _) => leaf(s.clone(), (**c).clone()),
                other => Err(Error::TypeMismatch(format!(
                    "incl expects a subset object, got {other}"
                ))),
            },
            Term::Neg => leaf(Obj::two(), Obj::two()),
            Term::EqNat => leaf(Obj::prod(Obj::Nat, Obj::Nat), Obj::two()),
            Term::Lit(_, a) => leaf(Obj::One, a.clone()),
            Term::XEnc(a) => {
                if !a.is_first_order() {
                    return Err(Error::NotFirstOrder(format!("xenc[{a}]")));
                }
                leaf(a.clone(), Obj::x())
            }
            Term::XDec(a, _) => {
                if !a.is_first_order() {
                    return Err(Error::NotFirstOrder(format!("xdec[{a}]")));
                }
                leaf(Obj::x(), a.clone())
            }
            Term::Compose(g, f) => {
                let tf = f.analyze()?;
                let tg = g.analyze()?;
                if tf.cod != tg.dom {
                    return Err(Error::TypeMismatch(format!(
                        "composition `{self}`: codomain {} of the inner map differs from domain {} of the outer map",
                        tf.cod, tg.dom
                    )));
                }
                Ok(node(tf.dom.clone(), tg.cod.clone(), &[&tg, &tf]))
            }
            Term::PairProd(f, g) => {
                let tf = f.analyze()?;
                let tg = g.analyze()?;
                Ok(node(
                    Obj::prod(tf.dom.clone(), tg.dom.clone()),
                    Obj::prod(tf.cod.clone(), tg.cod.clone()),
                    &[&tf, &tg],
                ))
            }
            Term::Pairing(f, g) => {
                let tf = f.analyze()?;
                let tg = g.analyze()?;
                if tf.dom != tg.dom {
                    return Err(Error::TypeMismatch(format!(
                        "pairing `{self}`: domains {} and {} differ",
                        tf.dom, tg.dom
                    )));
                }
                Ok(node(
                    tf.dom.clone(),
                    Obj::prod(tf.cod.clone(), tg.cod.clone()),
                    &[&tf, &tg],
                ))
            }
            Term::Iter(f) => {
                let tf = f.analyze()?;
                if tf.dom != tf.cod {
                    return Err(Error::TypeMismatch(format!(
                        "iteration `{self}`: {} -> {} is not an endo map",
                        tf.dom, tf.cod
                    )));
                }
                Ok(node(
                    Obj::prod(tf.dom.clone(), Obj::Nat),
                    tf.cod.clone(),
                    &[&tf],
                ))
            }
            Term::HomCo(a, g) => {
                check_obj(a)?;
                let tg = g.analyze()?;
                Ok(node(
                    Obj::exp(tg.dom.clone(), a.clone()),
                    Obj::exp(tg.cod.clone(), a.clone()),
                    &[&tg],
                ))
            }
            Term::CaseNat(f0, fs) => {
                let t0 = f0.analyze()?;
                let ts = fs.analyze()?;
                if t0.dom != Obj::One || ts.dom != Obj::Nat || t0.cod != ts.cod {
                    return Err(Error::TypeMismatch(format!(
                        "case `{self}`: branches {} -> {} and {} -> {} do not fit 1 -> B and N -> B",
                        t0.dom, t0.cod, ts.dom, ts.cod
                    )));
                }
                Ok(node(Obj::Nat, t0.cod.clone(), &[&t0, &ts]))
            }
        }
    }

    /// Codomain without validation; the term is assumed well typed.
    pub fn cod_unchecked(&self) -> Obj {
        match self {
            Term::Zero | Term::Succ => Obj::Nat,
            Term::Id(a) | Term::ProjL(a, _) | Term::Lit(_, a) | Term::XDec(a, _) => a.clone(),
            Term::Terminal(_) => Obj::One,
            Term::ProjR(_, b) | Term::Eps(_, b) => b.clone(),
            Term::Diagonal(a) => Obj::prod(a.clone(), a.clone()),
            Term::Compose(g, _) => g.cod_unchecked(),
            Term::PairProd(f, g) | Term::Pairing(f, g) => {
                Obj::prod(f.cod_unchecked(), g.cod_unchecked())
            }
            Term::Iter(f) => f.cod_unchecked(),
            Term::Lambda(a, b) => Obj::exp(Obj::prod(a.clone(), b.clone()), b.clone()),
            Term::HomCo(a, g) => Obj::exp(g.cod_unchecked(), a.clone()),
            Term::Incl(s) => match s {
                Obj::Subset(c, _) => (**c).clone(),
                other => other.clone(),
            },
            Term::Neg | Term::EqNat => Obj::two(),
            Term::CaseNat(f0, _) => f0.cod_unchecked(),
            Term::XEnc(_) => Obj::x(),
        }
    }
}

/// Well-formedness of an object term: every subset predicate must be a map
/// from the carrier into `2`.
pub fn check_obj(a: &Obj) -> Result<()> {
    match a {
        Obj::One | Obj::Nat => Ok(()),
        Obj::Prod(x, y) | Obj::Exp(x, y) => {
            check_obj(x)?;
            check_obj(y)
        }
        Obj::Subset(c, Pred::LessThanTwo) => {
            if **c == Obj::Nat {
                Ok(())
            } else {
                Err(Error::IllFormedSubset(format!(
                    "the built-in predicate n<2 lives on N, not {c}"
                )))
            }
        }
        Obj::Subset(c, Pred::Map(chi)) => {
            check_obj(c)?;
            let (dom, cod) = chi
                .typecheck()
                .map_err(|e| Error::IllFormedSubset(format!("predicate `{chi}`: {e}")))?;
            if dom != **c || !cod.is_two() {
                return Err(Error::IllFormedSubset(format!(
                    "predicate `{chi}` has type {dom} -> {cod}, expected {c} -> 2"
                )));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_typings() {
        assert_eq!(
            Term::Eps(Obj::Nat, Obj::two()).typecheck().unwrap(),
            (
                Obj::prod(Obj::exp(Obj::two(), Obj::Nat), Obj::Nat),
                Obj::two()
            )
        );
        assert_eq!(
            Term::Id(Obj::Nat).typecheck().unwrap(),
            (Obj::Nat, Obj::Nat)
        );
        assert_eq!(
            Term::compose(Term::Succ, Term::Zero).typecheck().unwrap(),
            (Obj::One, Obj::Nat)
        );
        assert_eq!(
            Term::Lambda(Obj::Nat, Obj::two()).typecheck().unwrap(),
            (
                Obj::Nat,
                Obj::exp(Obj::prod(Obj::Nat, Obj::two()), Obj::two())
            )
        );
        assert_eq!(
            Term::iter(Term::Succ).typecheck().unwrap(),
            (Obj::prod(Obj::Nat, Obj::Nat), Obj::Nat)
        );
    }

    #[test]
    fn composition_mismatch() {
        let bad = Term::compose(Term::Zero, Term::Succ);
        assert_eq!(bad.typecheck().unwrap_err().name(), "TypeMismatch");
        let bad_iter = Term::iter(Term::Zero);
        assert_eq!(bad_iter.typecheck().unwrap_err().name(), "TypeMismatch");
    }

    #[test]
    fn ill_formed_subset() {
        let s = Obj::Subset(Arc::new(Obj::Nat), Pred::Map(Arc::new(Term::Succ)));
        assert_eq!(
            Term::Id(s).typecheck().unwrap_err().name(),
            "IllFormedSubset"
        );
        let s = Obj::Subset(Arc::new(Obj::One), Pred::LessThanTwo);
        assert_eq!(
            Term::Id(s).typecheck().unwrap_err().name(),
            "IllFormedSubset"
        );
        assert!(Term::Id(Obj::x()).typecheck().is_ok());
    }

    #[test]
    fn stratum_and_depth() {
        assert_eq!(Term::Succ.stratum().unwrap(), 1);
        assert_eq!(Term::Eps(Obj::Nat, Obj::two()).stratum().unwrap(), 2);
        let t = Term::compose(Term::Succ, Term::compose(Term::Succ, Term::Zero));
        assert_eq!(t.depth(), 3);
        assert_eq!(t.analyze().unwrap().depth, 3);
        assert_eq!(Term::Succ.depth(), 1);
    }

    #[test]
    fn cod_unchecked_matches_typecheck() {
        let t = Term::hom_co(
            Obj::Nat,
            Term::pairing(Term::Succ, Term::compose(Term::EqNat, Term::Diagonal(Obj::Nat))),
        );
        assert_eq!(t.cod_unchecked(), t.typecheck().unwrap().1);
    }
}
