use std::fmt;

use crate::error::{Error, Result};
use crate::terms::{Obj, Term};

use super::bytes::{parse, serialize};

/// A map code: a surface term together with its typing, stratum and
/// canonical bytes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Code {
    pub term: Term,
    pub dom: Obj,
    pub cod: Obj,
    pub stratum: u32,
    pub bytes: Vec<u8>,
}

impl Code {
    /// Bytes as lowercase hex.
    pub fn hex(&self) -> String {
        to_hex(&self.bytes)
    }

    /// Bytes as text. Every tag is printable ASCII.
    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.bytes).into_owned()
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

pub fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn from_hex(text: &str) -> Result<Vec<u8>> {
    let digits: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    if digits.len() % 2 != 0 {
        return Err(Error::DecodeError("odd number of hex digits".into()));
    }
    digits
        .chunks(2)
        .map(|pair| {
            std::str::from_utf8(pair)
                .ok()
                .and_then(|s| u8::from_str_radix(s, 16).ok())
                .ok_or_else(|| {
                    Error::DecodeError(format!("`{}` is not a hex byte", pair.escape_ascii()))
                })
        })
        .collect()
}

/// The code of a well-typed surface term.
pub fn encode(t: &Term) -> Result<Code> {
    let bytes = serialize(t)?;
    let typing = t.analyze()?;
    Ok(Code {
        term: t.clone(),
        dom: typing.dom,
        cod: typing.cod,
        stratum: typing.stratum,
        bytes,
    })
}

/// Parses and type-checks canonical bytes.
pub fn decode(bytes: &[u8]) -> Result<Code> {
    let t = parse(bytes)?;
    let typing = t.analyze()?;
    Ok(Code {
        term: t,
        dom: typing.dom,
        cod: typing.cod,
        stratum: typing.stratum,
        bytes: bytes.to_vec(),
    })
}

fn joined(tag: u8, parts: &[&[u8]]) -> Vec<u8> {
    let mut out = vec![tag];
    for p in parts {
        out.extend_from_slice(p);
    }
    out
}

/// `v ⊙ u`: the code of the composite, by concatenation.
pub fn code_compose(v: &Code, u: &Code) -> Result<Code> {
    if v.dom != u.cod {
        return Err(Error::TypeMismatch(format!(
            "code composition: {} -> {} after {} -> {}",
            v.dom, v.cod, u.dom, u.cod
        )));
    }
    Ok(Code {
        term: Term::compose(v.term.clone(), u.term.clone()),
        dom: u.dom.clone(),
        cod: v.cod.clone(),
        stratum: v.stratum.max(u.stratum),
        bytes: joined(b'.', &[&v.bytes, &u.bytes]),
    })
}

/// The code of `f x g` from the codes of `f` and `g`.
pub fn code_product(u: &Code, v: &Code) -> Result<Code> {
    let dom = Obj::prod(u.dom.clone(), v.dom.clone());
    let cod = Obj::prod(u.cod.clone(), v.cod.clone());
    Ok(Code {
        term: Term::pair_prod(u.term.clone(), v.term.clone()),
        stratum: u.stratum.max(v.stratum).max(dom.ord()).max(cod.ord()),
        dom,
        cod,
        bytes: joined(b'x', &[&u.bytes, &v.bytes]),
    })
}

/// The code of `it(f)` from the code of an endo map `f`.
pub fn code_iter(u: &Code) -> Result<Code> {
    if u.dom != u.cod {
        return Err(Error::NotEndo(format!(
            "iteration needs an endo map, got {} -> {}",
            u.dom, u.cod
        )));
    }
    let dom = Obj::prod(u.dom.clone(), Obj::Nat);
    Ok(Code {
        term: Term::iter(u.term.clone()),
        stratum: u.stratum.max(dom.ord()),
        dom,
        cod: u.cod.clone(),
        bytes: joined(b'$', &[&u.bytes]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::stdlib;
    use crate::syntax::parse_term;

    fn code(src: &str) -> Code {
        encode(&parse_term(src).unwrap()).unwrap()
    }

    #[test]
    fn structure_preservation() {
        assert_eq!(
            code_compose(&code("s"), &code("0")).unwrap(),
            code("s . 0")
        );
        assert_eq!(code_product(&code("s"), &code("s")).unwrap(), code("s x s"));
        assert_eq!(code_iter(&code("s")).unwrap(), encode(&stdlib::add()).unwrap());
    }

    #[test]
    fn no_simplification() {
        let c = code_compose(&code("id[N]"), &code("s")).unwrap();
        assert_eq!(decode(&c.bytes).unwrap().term, parse_term("id[N] . s").unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(code_compose(&code("s"), &code("eq")).unwrap_err().name(), "TypeMismatch");
        assert_eq!(code_iter(&code("eq")).unwrap_err().name(), "NotEndo");
        let lit = Term::lit(crate::eval::Value::nat(0), Obj::Nat).unwrap();
        assert_eq!(encode(&lit).unwrap_err().name(), "NotCodable");
    }

    #[test]
    fn hex_roundtrip() {
        let c = code("eq . diag[N]");
        assert_eq!(c.hex(), "2e3d644e");
        assert_eq!(from_hex(&c.hex()).unwrap(), c.bytes);
        assert_eq!(from_hex("2g").unwrap_err().name(), "DecodeError");
    }
}
