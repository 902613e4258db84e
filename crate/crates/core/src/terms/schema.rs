//! The derived schemata of the closed structure: conjugation, coconjugation
//! and the two internal hom functors. Each returns the literal defining
//! composite; nothing is evaluated or simplified.

use super::map::Term;
use super::obj::Obj;
use crate::error::{Error, Result};

/// `conj[f] = f^B . lam[A,B]` for `f: A*B -> C`, giving `A -> C^B`.
pub fn conj(f: &Term) -> Result<Term> {
    let (dom, _) = f.typecheck()?;
    let Obj::Prod(a, b) = dom else {
        return Err(Error::TypeMismatch(format!(
            "conj expects a map out of a product, `{f}` has domain {dom}"
        )));
    };
    let (a, b) = ((*a).clone(), (*b).clone());
    Ok(Term::compose(Term::hom_co(b.clone(), f.clone()), Term::Lambda(a, b)))
}

/// `coconj[g] = eps[B,C] . (g x id[B])` for `g: A -> C^B`, giving `A*B -> C`.
pub fn coconj(g: &Term) -> Result<Term> {
    let (_, cod) = g.typecheck()?;
    let Obj::Exp(c, b) = cod else {
        return Err(Error::TypeMismatch(format!(
            "coconj expects a map into an exponential, `{g}` has codomain {cod}"
        )));
    };
    let (b, c) = ((*b).clone(), (*c).clone());
    Ok(Term::compose(
        Term::Eps(b.clone(), c),
        Term::pair_prod(g.clone(), Term::Id(b)),
    ))
}

/// `g^A = conj[g . eps[A,B]]: B^A -> C^A` for `g: B -> C`.
pub fn hom_co(a: &Obj, g: &Term) -> Result<Term> {
    let (b, _) = g.typecheck()?;
    conj(&Term::compose(g.clone(), Term::Eps(a.clone(), b)))
}

/// `A^g = conj[eps[C,A] . (id[A^C] x g)]: A^C -> A^B` for `g: B -> C`.
pub fn hom_contra(a: &Obj, g: &Term) -> Result<Term> {
    let (_, c) = g.typecheck()?;
    conj(&Term::compose(
        Term::Eps(c.clone(), a.clone()),
        Term::pair_prod(Term::Id(Obj::exp(a.clone(), c)), g.clone()),
    ))
}

/// The name-forming term `conj[f . r[1,A]]: 1 -> B^A` of `f: A -> B`.
pub fn name_term(f: &Term) -> Result<Term> {
    let (a, _) = f.typecheck()?;
    conj(&Term::compose(f.clone(), Term::ProjR(Obj::One, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conj_types() {
        let f = Term::ProjR(Obj::One, Obj::Nat);
        let c = conj(&f).unwrap();
        assert_eq!(
            c.typecheck().unwrap(),
            (Obj::One, Obj::exp(Obj::Nat, Obj::Nat))
        );
        assert_eq!(conj(&Term::Succ).unwrap_err().name(), "TypeMismatch");
    }

    #[test]
    fn coconj_literal_shape() {
        let g = Term::Lambda(Obj::Nat, Obj::Nat);
        let c = coconj(&g).unwrap();
        assert_eq!(
            c,
            Term::compose(
                Term::Eps(Obj::Nat, Obj::prod(Obj::Nat, Obj::Nat)),
                Term::pair_prod(g, Term::Id(Obj::Nat))
            )
        );
        assert_eq!(coconj(&Term::Succ).unwrap_err().name(), "TypeMismatch");
    }

    #[test]
    fn functor_types() {
        let n = Obj::Nat;
        let co = hom_co(&Obj::two(), &Term::Succ).unwrap();
        assert_eq!(
            co.typecheck().unwrap(),
            (Obj::exp(n.clone(), Obj::two()), Obj::exp(n.clone(), Obj::two()))
        );
        let contra = hom_contra(&Obj::x(), &Term::Zero).unwrap();
        assert_eq!(
            contra.typecheck().unwrap(),
            (Obj::exp(Obj::x(), n.clone()), Obj::exp(Obj::x(), Obj::One))
        );
    }
}
