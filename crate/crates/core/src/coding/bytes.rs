//! Canonical byte serialization of surface terms.
//!
//! Every constructor is one printable tag byte followed by its object
//! decorations and subterms in prefix order, so the code of a composite is
//! the concatenation of its tag with the codes of its parts. The scheme is
//! prefix-free: no code is a proper prefix of another.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::terms::{check_obj, Obj, Pred, Term};

/// The tag table: byte, constructor, and what follows the tag.
pub const TAGS: &[(u8, &str, &str)] = &[
    (b'1', "object 1", ""),
    (b'N', "object N", ""),
    (b'2', "object 2", ""),
    (b'X', "object X", ""),
    (b'*', "object A*B", "A B"),
    (b'^', "object B^A", "B A"),
    (b'{', "object {C | t}", "C t"),
    (b'0', "zero", ""),
    (b's', "successor", ""),
    (b'i', "id[A]", "A"),
    (b'!', "![A]", "A"),
    (b'l', "projl[A,B]", "A B"),
    (b'r', "projr[A,B]", "A B"),
    (b'd', "diag[A]", "A"),
    (b'.', "g . f", "g f"),
    (b'x', "f x g", "f g"),
    (b',', "<f, g>", "f g"),
    (b'$', "it(f)", "f"),
    (b'e', "eps[A,B]", "A B"),
    (b'L', "lam[A,B]", "A B"),
    (b'h', "hom[A](g)", "A g"),
    (b'c', "incl[S]", "S"),
    (b'~', "not", ""),
    (b'=', "eq", ""),
    (b'?', "case(f0, fs)", "f0 fs"),
];

/// The tag table rendered one entry per line.
pub fn tag_table() -> String {
    TAGS.iter()
        .map(|(b, name, args)| format!("{} {name} {args}\n", *b as char))
        .collect()
}

fn not_codable(what: &str) -> Error {
    Error::NotCodable(format!("{what} has no surface code"))
}

pub fn write_obj(a: &Obj, out: &mut Vec<u8>) -> Result<()> {
    if a.is_two() {
        out.push(b'2');
        return Ok(());
    }
    if a.is_x() {
        out.push(b'X');
        return Ok(());
    }
    match a {
        Obj::One => out.push(b'1'),
        Obj::Nat => out.push(b'N'),
        Obj::Prod(x, y) => {
            out.push(b'*');
            write_obj(x, out)?;
            write_obj(y, out)?;
        }
        Obj::Exp(base, exponent) => {
            out.push(b'^');
            write_obj(base, out)?;
            write_obj(exponent, out)?;
        }
        Obj::Subset(c, Pred::Map(t)) => {
            out.push(b'{');
            write_obj(c, out)?;
            write_term(t, out)?;
        }
        Obj::Subset(_, Pred::LessThanTwo) => {
            return Err(not_codable("a truth-value predicate over a carrier other than N"))
        }
    }
    Ok(())
}

pub fn write_term(t: &Term, out: &mut Vec<u8>) -> Result<()> {
    match t {
        Term::Zero => out.push(b'0'),
        Term::Succ => out.push(b's'),
        Term::Neg => out.push(b'~'),
        Term::EqNat => out.push(b'='),
        Term::Id(a) => {
            out.push(b'i');
            write_obj(a, out)?;
        }
        Term::Terminal(a) => {
            out.push(b'!');
            write_obj(a, out)?;
        }
        Term::Diagonal(a) => {
            out.push(b'd');
            write_obj(a, out)?;
        }
        Term::Incl(a) => {
            out.push(b'c');
            write_obj(a, out)?;
        }
        Term::ProjL(a, b) | Term::ProjR(a, b) | Term::Eps(a, b) | Term::Lambda(a, b) => {
            out.push(match t {
                Term::ProjL(..) => b'l',
                Term::ProjR(..) => b'r',
                Term::Eps(..) => b'e',
                _ => b'L',
            });
            write_obj(a, out)?;
            write_obj(b, out)?;
        }
        Term::Compose(g, f) | Term::PairProd(g, f) | Term::Pairing(g, f) | Term::CaseNat(g, f) => {
            out.push(match t {
                Term::Compose(..) => b'.',
                Term::PairProd(..) => b'x',
                Term::Pairing(..) => b',',
                _ => b'?',
            });
            write_term(g, out)?;
            write_term(f, out)?;
        }
        Term::Iter(f) => {
            out.push(b'$');
            write_term(f, out)?;
        }
        Term::HomCo(a, g) => {
            out.push(b'h');
            write_obj(a, out)?;
            write_term(g, out)?;
        }
        Term::Lit(..) => return Err(not_codable("a literal")),
        Term::XEnc(_) | Term::XDec(..) => return Err(not_codable("a codec map")),
    }
    Ok(())
}

/// The canonical bytes of a surface term.
pub fn serialize(t: &Term) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    write_term(t, &mut out)?;
    Ok(out)
}

pub fn serialize_obj(a: &Obj) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    write_obj(a, &mut out)?;
    Ok(out)
}

/// Nesting bound for parsing untrusted bytes.
const MAX_NESTING: usize = 4096;

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Reader<'_> {
    fn fail(&self, msg: &str) -> Error {
        Error::DecodeError(format!("at byte {}: {msg}", self.pos))
    }

    fn next(&mut self) -> Result<u8> {
        let b = *self
            .bytes
            .get(self.pos)
            .ok_or_else(|| self.fail("unexpected end of code"))?;
        self.pos += 1;
        Ok(b)
    }

    fn obj(&mut self) -> Result<Obj> {
        self.nested(Self::obj_inner)
    }

    fn term(&mut self) -> Result<Term> {
        self.nested(Self::term_inner)
    }

    fn nested<T>(&mut self, f: fn(&mut Self) -> Result<T>) -> Result<T> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self.fail("nesting too deep"));
        }
        let out = f(self);
        self.depth -= 1;
        out
    }

    fn obj_inner(&mut self) -> Result<Obj> {
        let start = self.pos;
        let b = self.next()?;
        Ok(match b {
            b'1' => Obj::One,
            b'N' => Obj::Nat,
            b'2' => Obj::two(),
            b'X' => Obj::x(),
            b'*' => Obj::prod(self.obj()?, self.obj()?),
            b'^' => Obj::exp(self.obj()?, self.obj()?),
            b'{' => {
                let c = self.obj()?;
                let t = self.term()?;
                let s = Obj::Subset(Arc::new(c), Pred::Map(Arc::new(t)));
                if s.is_x() {
                    self.pos = start;
                    return Err(self.fail("the universal object must be written X"));
                }
                check_obj(&s).map_err(|e| self.fail(&e.to_string()))?;
                s
            }
            other => {
                self.pos = start;
                return Err(self.fail(&format!("`{}` is not an object tag", other.escape_ascii())));
            }
        })
    }

    fn term_inner(&mut self) -> Result<Term> {
        let start = self.pos;
        let b = self.next()?;
        Ok(match b {
            b'0' => Term::Zero,
            b's' => Term::Succ,
            b'~' => Term::Neg,
            b'=' => Term::EqNat,
            b'i' => Term::Id(self.obj()?),
            b'!' => Term::Terminal(self.obj()?),
            b'd' => Term::Diagonal(self.obj()?),
            b'c' => Term::Incl(self.obj()?),
            b'l' => Term::ProjL(self.obj()?, self.obj()?),
            b'r' => Term::ProjR(self.obj()?, self.obj()?),
            b'e' => Term::Eps(self.obj()?, self.obj()?),
            b'L' => Term::Lambda(self.obj()?, self.obj()?),
            b'.' => Term::compose(self.term()?, self.term()?),
            b'x' => Term::pair_prod(self.term()?, self.term()?),
            b',' => Term::pairing(self.term()?, self.term()?),
            b'?' => Term::case_nat(self.term()?, self.term()?),
            b'$' => Term::iter(self.term()?),
            b'h' => Term::hom_co(self.obj()?, self.term()?),
            other => {
                self.pos = start;
                return Err(self.fail(&format!("`{}` is not a term tag", other.escape_ascii())));
            }
        })
    }
}

/// Parses canonical bytes back into a term. Rejects trailing bytes and any
/// string that is not the serialization of what it parses to.
pub fn parse(bytes: &[u8]) -> Result<Term> {
    let mut r = Reader { bytes, pos: 0, depth: 0 };
    let t = r.term()?;
    if r.pos != bytes.len() {
        return Err(r.fail("trailing bytes after a complete code"));
    }
    if serialize(&t)? != bytes {
        return Err(Error::DecodeError("not in canonical form".into()));
    }
    Ok(t)
}

pub fn parse_obj_bytes(bytes: &[u8]) -> Result<Obj> {
    let mut r = Reader { bytes, pos: 0, depth: 0 };
    let a = r.obj()?;
    if r.pos != bytes.len() {
        return Err(r.fail("trailing bytes after a complete object"));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    #[test]
    fn tags_are_distinct_and_printable() {
        let mut seen = std::collections::HashSet::new();
        for (b, _, _) in TAGS {
            assert!(b.is_ascii_graphic());
            assert!(seen.insert(*b));
        }
    }

    #[test]
    fn composite_is_concatenation() {
        let g = parse_term("s").unwrap();
        let f = parse_term("0").unwrap();
        let both = serialize(&Term::compose(g.clone(), f.clone())).unwrap();
        let mut expect = vec![b'.'];
        expect.extend(serialize(&g).unwrap());
        expect.extend(serialize(&f).unwrap());
        assert_eq!(both, expect);
        assert_eq!(both, b".s0");
    }

    #[test]
    fn roundtrips() {
        for src in [
            "s",
            "eq . diag[N]",
            "it(s)",
            "hom[N](s) . lam[N,N]",
            "incl[{N | not . eq . <id[N], 0 . ![N]>}]",
            "case(0, s) x eps[X, 2^X]",
        ] {
            let t = parse_term(src).unwrap();
            let b = serialize(&t).unwrap();
            assert_eq!(parse(&b).unwrap(), t, "{src}");
        }
    }

    #[test]
    fn rejects_non_canonical_and_garbage() {
        assert_eq!(parse(b"i{N.=dN").unwrap_err().name(), "DecodeError");
        assert_eq!(parse(b"iX").unwrap(), Term::Id(Obj::x()));
        assert_eq!(parse(b"ss").unwrap_err().name(), "DecodeError");
        assert_eq!(parse(b".s").unwrap_err().name(), "DecodeError");
        assert_eq!(parse(b"#").unwrap_err().name(), "DecodeError");
        assert_eq!(parse(b"").unwrap_err().name(), "DecodeError");
    }

    #[test]
    fn literals_are_not_codable() {
        let t = Term::lit(crate::eval::Value::nat(1), Obj::Nat).unwrap();
        assert_eq!(serialize(&t).unwrap_err().name(), "NotCodable");
    }
}
