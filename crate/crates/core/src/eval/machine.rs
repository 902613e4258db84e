use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::value::{Arrow, Value};
use crate::error::{Error, Result};
use crate::terms::{name_term, Obj, Pred, Term};
use crate::universal::codec;

/// Closure nesting beyond this depth counts as exhausting the budget.
pub const MAX_NESTING: u32 = 10_000;
/// Evaluator recursion beyond this depth counts as exhausting the budget.
pub const MAX_DEPTH: u32 = 20_000;

/// Step budget. One unit is one constructor case fired by the evaluator.
#[derive(Clone, Debug)]
pub struct Fuel {
    budget: u64,
    used: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Fuel {
        Fuel { budget, used: 0 }
    }

    pub fn unlimited() -> Fuel {
        Fuel::new(u64::MAX)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn exhausted(&self) -> Error {
        Error::FuelExhausted {
            budget: self.budget,
        }
    }

    fn tick(&mut self) -> Result<()> {
        if self.used >= self.budget {
            return Err(self.exhausted());
        }
        self.used += 1;
        Ok(())
    }
}

/// Evaluates a well-typed term at a value inhabiting its domain.
pub fn eval(t: &Term, v: &Value) -> Result<Value> {
    eval_with_fuel(t, v, &mut Fuel::unlimited())
}

pub fn eval_with_fuel(t: &Term, v: &Value, fuel: &mut Fuel) -> Result<Value> {
    let (dom, _) = t.typecheck()?;
    if !inhabits(&dom, v)? {
        return Err(Error::IllTyped(format!(
            "value {v} does not inhabit the domain {dom} of `{t}`"
        )));
    }
    run(t, v, fuel, 0)
}

/// Closed evaluation `eps(f, a)` of an arrow value, without type checks.
pub fn apply(f: &Value, a: &Value) -> Result<Value> {
    apply_with_fuel(f, a, &mut Fuel::unlimited())
}

pub fn apply_with_fuel(f: &Value, a: &Value, fuel: &mut Fuel) -> Result<Value> {
    match f {
        Value::Arrow(arrow) => run(&arrow.body, a, fuel, 0),
        other => Err(Error::IllTyped(format!("{other} is not an arrow"))),
    }
}

/// The name of `f: A -> B` as an arrow value, `eval(conj[f . r[1,A]], ())`.
pub fn eval_name(f: &Term) -> Result<Value> {
    eval_name_with_fuel(f, &mut Fuel::unlimited())
}

pub fn eval_name_with_fuel(f: &Term, fuel: &mut Fuel) -> Result<Value> {
    let name = name_term(f)?;
    run(&name, &Value::Unit, fuel, 0)
}

/// Membership of a value in an object. Subset membership evaluates the
/// predicate.
pub fn inhabits(a: &Obj, v: &Value) -> Result<bool> {
    Ok(match (a, v) {
        (Obj::One, Value::Unit) => true,
        (Obj::Nat, Value::Num(_)) => true,
        (Obj::Prod(x, y), Value::Pair(p, q)) => inhabits(x, p)? && inhabits(y, q)?,
        (Obj::Exp(cod, dom), Value::Arrow(f)) => f.dom == **dom && f.cod == **cod,
        (s, Value::X(_)) if s.is_x() => true,
        (s, _) if s.is_x() => false,
        (Obj::Subset(c, Pred::LessThanTwo), Value::Num(n)) => {
            **c == Obj::Nat && *n < BigUint::from(2u8)
        }
        (Obj::Subset(c, Pred::Map(chi)), v) => {
            inhabits(c, v)? && run(chi, v, &mut Fuel::unlimited(), 0)? == Value::nat(1)
        }
        _ => false,
    })
}

fn nesting_of(v: &Value) -> u32 {
    match v {
        Value::Arrow(a) => a.nesting,
        Value::Pair(a, b) => nesting_of(a).max(nesting_of(b)),
        _ => 0,
    }
}

fn shape_error(t: &Term, v: &Value) -> Error {
    Error::IllTyped(format!("`{t}` cannot be applied to {v}"))
}

fn run(t: &Term, v: &Value, fuel: &mut Fuel, depth: u32) -> Result<Value> {
    fuel.tick()?;
    if depth > MAX_DEPTH {
        return Err(fuel.exhausted());
    }
    let d = depth + 1;
    match t {
        Term::Zero => Ok(Value::Num(BigUint::zero())),
        Term::Succ => match v {
            Value::Num(n) => Ok(Value::Num(n + 1u32)),
            _ => Err(shape_error(t, v)),
        },
        Term::Id(_) => Ok(v.clone()),
        // Subset elements are carrier elements; only X-codes change tag.
        Term::Incl(_) => match v {
            Value::X(n) => Ok(Value::Num(n.clone())),
            _ => Ok(v.clone()),
        },
        Term::Terminal(_) => Ok(Value::Unit),
        Term::ProjL(..) => v
            .as_pair()
            .map(|(a, _)| a.clone())
            .ok_or_else(|| shape_error(t, v)),
        Term::ProjR(..) => v
            .as_pair()
            .map(|(_, b)| b.clone())
            .ok_or_else(|| shape_error(t, v)),
        Term::Diagonal(_) => Ok(Value::pair(v.clone(), v.clone())),
        Term::Compose(g, f) => {
            let mid = run(f, v, fuel, d)?;
            run(g, &mid, fuel, d)
        }
        Term::PairProd(f, g) => {
            let (a, b) = v.as_pair().ok_or_else(|| shape_error(t, v))?;
            Ok(Value::pair(run(f, a, fuel, d)?, run(g, b, fuel, d)?))
        }
        Term::Pairing(f, g) => Ok(Value::pair(run(f, v, fuel, d)?, run(g, v, fuel, d)?)),
        Term::Iter(f) => {
            let (a, n) = v.as_pair().ok_or_else(|| shape_error(t, v))?;
            let Value::Num(n) = n else {
                return Err(shape_error(t, v));
            };
            let mut acc = a.clone();
            let mut k = n.clone();
            while !k.is_zero() {
                acc = run(f, &acc, fuel, d)?;
                k -= 1u32;
            }
            Ok(acc)
        }
        Term::Eps(..) => {
            let (f, a) = v.as_pair().ok_or_else(|| shape_error(t, v))?;
            match f {
                Value::Arrow(arrow) => run(&arrow.body, a, fuel, d),
                _ => Err(shape_error(t, v)),
            }
        }
        Term::Lambda(a, b) => {
            let nesting = 1 + nesting_of(v);
            if nesting > MAX_NESTING {
                return Err(fuel.exhausted());
            }
            let body = Term::pairing(
                Term::compose(
                    Term::Lit(Arc::new(v.clone()), a.clone()),
                    Term::Terminal(b.clone()),
                ),
                Term::Id(b.clone()),
            );
            Ok(Value::Arrow(Arc::new(Arrow {
                body,
                dom: b.clone(),
                cod: Obj::prod(a.clone(), b.clone()),
                nesting,
            })))
        }
        Term::HomCo(_, g) => match v {
            Value::Arrow(h) => {
                let nesting = h.nesting + 1;
                if nesting > MAX_NESTING {
                    return Err(fuel.exhausted());
                }
                Ok(Value::Arrow(Arc::new(Arrow {
                    body: Term::Compose(g.clone(), Arc::new(h.body.clone())),
                    dom: h.dom.clone(),
                    cod: g.cod_unchecked(),
                    nesting,
                })))
            }
            _ => Err(shape_error(t, v)),
        },
        Term::Neg => match v.as_u64() {
            Some(0) => Ok(Value::nat(1)),
            Some(1) => Ok(Value::nat(0)),
            _ => Err(shape_error(t, v)),
        },
        Term::EqNat => {
            let (a, b) = v.as_pair().ok_or_else(|| shape_error(t, v))?;
            match (a.as_num(), b.as_num()) {
                (Some(x), Some(y)) => Ok(Value::bool(x == y)),
                _ => Err(shape_error(t, v)),
            }
        }
        Term::CaseNat(f0, fs) => match v {
            Value::Num(n) if n.is_zero() => run(f0, &Value::Unit, fuel, d),
            Value::Num(n) => run(fs, &Value::Num(n - BigUint::one()), fuel, d),
            _ => Err(shape_error(t, v)),
        },
        Term::Lit(c, _) => Ok((**c).clone()),
        Term::XEnc(a) => codec::embed_first_order(a, v),
        Term::XDec(a, point) => codec::retract_with_point(a, v, point),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{coconj, conj, hom_co, hom_contra};

    fn n(k: u64) -> Value {
        Value::nat(k)
    }

    fn succ_arrow() -> Value {
        Value::arrow(Term::Succ, Obj::Nat, Obj::Nat)
    }

    #[test]
    fn eps_applies_arrows() {
        let v = Value::pair(succ_arrow(), n(4));
        assert_eq!(eval(&Term::Eps(Obj::Nat, Obj::Nat), &v).unwrap(), n(5));
    }

    #[test]
    fn iteration_adds() {
        let v = Value::pair(n(2), n(3));
        assert_eq!(eval(&Term::iter(Term::Succ), &v).unwrap(), n(5));
    }

    #[test]
    fn identity() {
        let v = Value::pair(n(1), Value::Unit);
        let a = Obj::prod(Obj::Nat, Obj::One);
        assert_eq!(eval(&Term::Id(a), &v).unwrap(), v);
    }

    #[test]
    fn lambda_then_eps_pairs() {
        let arrow = eval(&Term::Lambda(Obj::Nat, Obj::Nat), &n(2)).unwrap();
        let out = eval(
            &Term::Eps(Obj::Nat, Obj::prod(Obj::Nat, Obj::Nat)),
            &Value::pair(arrow, n(7)),
        )
        .unwrap();
        assert_eq!(out, Value::pair(n(2), n(7)));
    }

    #[test]
    fn names_evaluate_to_their_map() {
        let name = eval_name(&Term::Succ).unwrap();
        assert_eq!(apply(&name, &n(9)).unwrap(), n(10));
        let name = eval_name(&Term::Id(Obj::Nat)).unwrap();
        assert_eq!(apply(&name, &n(0)).unwrap(), n(0));
        let add = super::super::stdlib::add();
        let name = eval_name(&add).unwrap();
        assert_eq!(apply(&name, &Value::pair(n(20), n(22))).unwrap(), n(42));
    }

    #[test]
    fn conj_of_add_is_curried_addition() {
        let c = conj(&super::super::stdlib::add()).unwrap();
        let curried = eval(&c, &n(2)).unwrap();
        assert_eq!(apply(&curried, &n(3)).unwrap(), n(5));
    }

    #[test]
    fn coconj_of_constant_name() {
        let name = Term::lit(eval_name(&Term::Succ).unwrap(), Obj::exp(Obj::Nat, Obj::Nat)).unwrap();
        let uncurried = coconj(&name).unwrap();
        assert_eq!(
            eval(&uncurried, &Value::pair(Value::Unit, n(4))).unwrap(),
            n(5)
        );
    }

    #[test]
    fn covariant_hom_postcomposes() {
        let h = hom_co(&Obj::Nat, &Term::Succ).unwrap();
        let idname = eval_name(&Term::Id(Obj::Nat)).unwrap();
        let out = eval(&h, &idname).unwrap();
        assert_eq!(apply(&out, &n(7)).unwrap(), n(8));
    }

    #[test]
    fn contravariant_hom_precomposes_with_a_point() {
        let zero = Term::lit(Value::x(0), Obj::x()).unwrap();
        let h = hom_contra(&Obj::x(), &zero).unwrap();
        let k = Term::case_nat(
            Term::lit(Value::x(5), Obj::x()).unwrap(),
            Term::constant(Value::x(9), Obj::x(), Obj::Nat).unwrap(),
        );
        let arrow = Value::arrow(Term::compose(k, Term::Incl(Obj::x())), Obj::x(), Obj::x());
        let out = eval(&h, &arrow).unwrap();
        assert_eq!(apply(&out, &Value::Unit).unwrap(), Value::x(5));
    }

    #[test]
    fn ill_typed_input_rejected() {
        let err = eval(&Term::Succ, &Value::Unit).unwrap_err();
        assert_eq!(err.name(), "IllTyped");
        let err = eval(&Term::Neg, &n(2)).unwrap_err();
        assert_eq!(err.name(), "IllTyped");
    }

    #[test]
    fn fuel_is_counted_and_enforced() {
        let mut fuel = Fuel::new(1_000);
        let add = super::super::stdlib::add();
        let out = eval_with_fuel(&add, &Value::pair(n(1), n(10)), &mut fuel).unwrap();
        assert_eq!(out, n(11));
        assert_eq!(fuel.used(), 11);
        let mut small = Fuel::new(5);
        let err = eval_with_fuel(&add, &Value::pair(n(1), n(10)), &mut small).unwrap_err();
        assert_eq!(err.name(), "FuelExhausted");
    }

    #[test]
    fn membership() {
        assert!(inhabits(&Obj::two(), &n(1)).unwrap());
        assert!(!inhabits(&Obj::two(), &n(2)).unwrap());
        assert!(inhabits(&Obj::x(), &Value::x(12)).unwrap());
        assert!(!inhabits(&Obj::x(), &n(12)).unwrap());
        assert!(Term::lit(n(3), Obj::two()).is_err());
    }
}
