use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;

use crate::terms::{Obj, Term};

/// Runtime denotations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Value {
    Unit,
    Num(BigUint),
    Pair(Arc<Value>, Arc<Value>),
    /// An element of the universal object `X`, carried as its code.
    X(BigUint),
    /// An element of `cod^dom`.
    Arrow(Arc<Arrow>),
}

/// A closure: a map term, possibly capturing literals, with its typing.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub body: Term,
    pub dom: Obj,
    pub cod: Obj,
    /// How many closure-building steps produced this arrow. Bounds the
    /// nesting of captured bodies; not part of equality.
    pub(crate) nesting: u32,
}

impl Arrow {
    pub fn new(body: Term, dom: Obj, cod: Obj) -> Arrow {
        Arrow {
            body,
            dom,
            cod,
            nesting: 0,
        }
    }
}

impl PartialEq for Arrow {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body && self.dom == other.dom && self.cod == other.cod
    }
}

impl Eq for Arrow {}

impl Hash for Arrow {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.body.hash(state);
        self.dom.hash(state);
        self.cod.hash(state);
    }
}

impl Value {
    pub fn nat(n: u64) -> Value {
        Value::Num(BigUint::from(n))
    }

    pub fn x(n: u64) -> Value {
        Value::X(BigUint::from(n))
    }

    pub fn bool(b: bool) -> Value {
        Value::nat(b as u64)
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn arrow(body: Term, dom: Obj, cod: Obj) -> Value {
        Value::Arrow(Arc::new(Arrow::new(body, dom, cod)))
    }

    pub fn as_num(&self) -> Option<&BigUint> {
        match self {
            Value::Num(n) | Value::X(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.as_num().and_then(|n| u64::try_from(n).ok())
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_arrow(&self) -> Option<&Arc<Arrow>> {
        match self {
            Value::Arrow(a) => Some(a),
            _ => None,
        }
    }
}
