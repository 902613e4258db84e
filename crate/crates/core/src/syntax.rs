//! Line-oriented surface syntax for objects, map terms and values.
//!
//! ```text
//! obj   ::= expo ('*' expo)*                 left associative
//! expo  ::= base ('^' expo)?                 right associative
//! base  ::= '1' | 'N' | '2' | 'X' | '(' obj ')' | '{' obj '|' term '}'
//!
//! term  ::= prod ('.' term)?                 g . f  is "g after f"
//! prod  ::= atom ('x' atom)*                 cartesian product of maps
//! atom  ::= '0' | 's' | 'not' | 'eq'
//!         | 'id[' obj ']' | '![' obj ']' | 'diag[' obj ']' | 'incl[' obj ']'
//!         | 'projl[' obj ',' obj ']' | 'projr[' obj ',' obj ']'
//!         | 'eps[' obj ',' obj ']' | 'lam[' obj ',' obj ']'
//!         | '<' term ',' term '>' | 'it(' term ')' | 'case(' term ',' term ')'
//!         | 'hom[' obj '](' term ')'
//!         | 'lit[' obj '](' value ')' | 'xenc[' obj ']' | 'xdec[' obj '](' value ')'
//!         | '(' term ')'
//!
//! value ::= '()' | numeral | '(' value ',' value ')' | 'fn(' term ')'
//! ```
//!
//! Values are parsed against an expected object; a numeral at `X` is an
//! X-code. The `lit`, `xenc` and `xdec` forms are accepted for closures but
//! lie outside the codable fragment.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::eval::{Arrow, Value};
use crate::terms::{Obj, Pred, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(BigUint),
    Sym(&'static str),
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const SYMBOLS: [&str; 15] = [
    "->", ".", ",", "<", ">", "(", ")", "[", "]", "{", "}", "|", "*", "^", "!",
];

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = (line, column);
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                i += 1;
                column += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: start.0,
                column: start.1,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
                column += 1;
            }
            let n = s.parse::<BigUint>().expect("digits");
            out.push(Spanned {
                tok: Tok::Num(n),
                line: start.0,
                column: start.1,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                i += sym.len();
                column += sym.len();
                out.push(Spanned {
                    tok: Tok::Sym(sym),
                    line: start.0,
                    column: start.1,
                });
            }
            None => {
                return Err(Error::SyntaxError {
                    line,
                    column,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::SyntaxError {
            line: s.line,
            column: s.column,
            message: message.into(),
        })
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == sym)
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.is_sym(sym) {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected `{sym}`, found {}", describe(self.peek())))
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.err(format!("unexpected trailing {}", describe(self.peek())))
        }
    }

    fn obj(&mut self) -> Result<Obj> {
        let mut acc = self.expo()?;
        while self.is_sym("*") {
            self.next();
            let rhs = self.expo()?;
            acc = Obj::prod(acc, rhs);
        }
        Ok(acc)
    }

    fn expo(&mut self) -> Result<Obj> {
        let base = self.obj_base()?;
        if self.is_sym("^") {
            self.next();
            let exponent = self.expo()?;
            return Ok(Obj::exp(base, exponent));
        }
        Ok(base)
    }

    fn obj_base(&mut self) -> Result<Obj> {
        match self.peek().clone() {
            Tok::Num(n) if n == BigUint::from(1u8) => {
                self.next();
                Ok(Obj::One)
            }
            Tok::Num(n) if n == BigUint::from(2u8) => {
                self.next();
                Ok(Obj::two())
            }
            Tok::Ident(s) if s == "N" => {
                self.next();
                Ok(Obj::Nat)
            }
            Tok::Ident(s) if s == "X" => {
                self.next();
                Ok(Obj::x())
            }
            Tok::Sym("(") => {
                self.next();
                let o = self.obj()?;
                self.expect(")")?;
                Ok(o)
            }
            Tok::Sym("{") => {
                self.next();
                let carrier = self.obj()?;
                self.expect("|")?;
                let chi = self.term()?;
                self.expect("}")?;
                Ok(Obj::Subset(Arc::new(carrier), Pred::Map(Arc::new(chi))))
            }
            other => self.err(format!("expected an object, found {}", describe(&other))),
        }
    }

    fn bracket_objs(&mut self, n: usize) -> Result<Vec<Obj>> {
        self.expect("[")?;
        let mut v = vec![self.obj()?];
        for _ in 1..n {
            self.expect(",")?;
            v.push(self.obj()?);
        }
        self.expect("]")?;
        Ok(v)
    }

    fn term(&mut self) -> Result<Term> {
        let lhs = self.term_prod()?;
        if self.is_sym(".") {
            self.next();
            let rhs = self.term()?;
            return Ok(Term::compose(lhs, rhs));
        }
        Ok(lhs)
    }

    fn term_prod(&mut self) -> Result<Term> {
        let mut acc = self.term_atom()?;
        while self.is_ident("x") {
            self.next();
            let rhs = self.term_atom()?;
            acc = Term::pair_prod(acc, rhs);
        }
        Ok(acc)
    }

    fn term_atom(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Num(n) if n == BigUint::from(0u8) => {
                self.next();
                Ok(Term::Zero)
            }
            Tok::Sym("(") => {
                self.next();
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Tok::Sym("<") => {
                self.next();
                let f = self.term()?;
                self.expect(",")?;
                let g = self.term()?;
                self.expect(">")?;
                Ok(Term::pairing(f, g))
            }
            Tok::Sym("!") => {
                self.next();
                let a = self.bracket_objs(1)?;
                Ok(Term::Terminal(a[0].clone()))
            }
            Tok::Ident(name) => {
                self.next();
                match name.as_str() {
                    "s" => Ok(Term::Succ),
                    "not" => Ok(Term::Neg),
                    "eq" => Ok(Term::EqNat),
                    "id" => Ok(Term::Id(self.bracket_objs(1)?.remove(0))),
                    "diag" => Ok(Term::Diagonal(self.bracket_objs(1)?.remove(0))),
                    "incl" => Ok(Term::Incl(self.bracket_objs(1)?.remove(0))),
                    "xenc" => Ok(Term::XEnc(self.bracket_objs(1)?.remove(0))),
                    "projl" | "projr" | "eps" | "lam" => {
                        let v = self.bracket_objs(2)?;
                        let (a, b) = (v[0].clone(), v[1].clone());
                        Ok(match name.as_str() {
                            "projl" => Term::ProjL(a, b),
                            "projr" => Term::ProjR(a, b),
                            "eps" => Term::Eps(a, b),
                            _ => Term::Lambda(a, b),
                        })
                    }
                    "it" => {
                        self.expect("(")?;
                        let f = self.term()?;
                        self.expect(")")?;
                        Ok(Term::iter(f))
                    }
                    "case" => {
                        self.expect("(")?;
                        let f0 = self.term()?;
                        self.expect(",")?;
                        let fs = self.term()?;
                        self.expect(")")?;
                        Ok(Term::case_nat(f0, fs))
                    }
                    "hom" => {
                        let a = self.bracket_objs(1)?.remove(0);
                        self.expect("(")?;
                        let g = self.term()?;
                        self.expect(")")?;
                        Ok(Term::hom_co(a, g))
                    }
                    "lit" | "xdec" => {
                        let a = self.bracket_objs(1)?.remove(0);
                        self.expect("(")?;
                        let v = self.value(&a)?;
                        self.expect(")")?;
                        if name == "lit" {
                            Term::lit(v, a)
                        } else {
                            Ok(Term::XDec(a, Arc::new(v)))
                        }
                    }
                    other => {
                        self.pos -= 1;
                        self.err(format!("unknown map constant `{other}`"))
                    }
                }
            }
            other => self.err(format!("expected a map term, found {}", describe(&other))),
        }
    }

    fn value(&mut self, at: &Obj) -> Result<Value> {
        match at {
            Obj::One => {
                self.expect("(")?;
                self.expect(")")?;
                Ok(Value::Unit)
            }
            Obj::Nat => match self.next() {
                Tok::Num(n) => Ok(Value::Num(n)),
                other => {
                    self.pos -= 1;
                    self.err(format!("expected a numeral, found {}", describe(&other)))
                }
            },
            Obj::Subset(c, _) => {
                let v = self.value(c)?;
                Ok(match (at.is_x(), v) {
                    (true, Value::Num(n)) => Value::X(n),
                    (_, v) => v,
                })
            }
            Obj::Prod(a, b) => {
                self.expect("(")?;
                let va = self.value(a)?;
                self.expect(",")?;
                let vb = self.value(b)?;
                self.expect(")")?;
                Ok(Value::pair(va, vb))
            }
            Obj::Exp(cod, dom) => {
                if !self.is_ident("fn") {
                    return self.err(format!(
                        "expected an arrow literal `fn(...)` at {at}, found {}",
                        describe(self.peek())
                    ));
                }
                self.next();
                self.expect("(")?;
                let body = self.term()?;
                self.expect(")")?;
                let (d, c) = body.typecheck()?;
                if d != **dom || c != **cod {
                    return Err(Error::TypeMismatch(format!(
                        "arrow literal `{body}` has type {d} -> {c}, expected {dom} -> {cod}"
                    )));
                }
                Ok(Value::Arrow(Arc::new(Arrow::new(body, d, c))))
            }
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::End => "end of input".to_string(),
    }
}

pub fn parse_obj(text: &str) -> Result<Obj> {
    let mut p = Parser::new(text)?;
    let o = p.obj()?;
    p.finish()?;
    Ok(o)
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a value literal expected to inhabit `at`.
pub fn parse_value(text: &str, at: &Obj) -> Result<Value> {
    let mut p = Parser::new(text)?;
    let v = p.value(at)?;
    p.finish()?;
    Ok(v)
}

/// Parses a type filter such as `N -> 2`.
pub fn parse_signature(text: &str) -> Result<(Obj, Obj)> {
    let mut p = Parser::new(text)?;
    let dom = p.obj()?;
    p.expect("->")?;
    let cod = p.obj()?;
    p.finish()?;
    Ok((dom, cod))
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::One => write!(f, "1"),
            Obj::Nat => write!(f, "N"),
            _ if self.is_two() => write!(f, "2"),
            _ if self.is_x() => write!(f, "X"),
            Obj::Subset(c, Pred::Map(chi)) => write!(f, "{{{c} | {chi}}}"),
            Obj::Subset(c, Pred::LessThanTwo) => write!(f, "{{{c} | <2}}"),
            Obj::Prod(a, b) => {
                write!(f, "{a}*")?;
                if matches!(**b, Obj::Prod(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Obj::Exp(base, exponent) => {
                if matches!(**base, Obj::Prod(..) | Obj::Exp(..)) {
                    write!(f, "({base})^")?;
                } else {
                    write!(f, "{base}^")?;
                }
                if matches!(**exponent, Obj::Prod(..) | Obj::Exp(..)) {
                    write!(f, "({exponent})")
                } else {
                    write!(f, "{exponent}")
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::Succ => write!(f, "s"),
            Term::Neg => write!(f, "not"),
            Term::EqNat => write!(f, "eq"),
            Term::Id(a) => write!(f, "id[{a}]"),
            Term::Terminal(a) => write!(f, "![{a}]"),
            Term::Diagonal(a) => write!(f, "diag[{a}]"),
            Term::Incl(a) => write!(f, "incl[{a}]"),
            Term::XEnc(a) => write!(f, "xenc[{a}]"),
            Term::ProjL(a, b) => write!(f, "projl[{a},{b}]"),
            Term::ProjR(a, b) => write!(f, "projr[{a},{b}]"),
            Term::Eps(a, b) => write!(f, "eps[{a},{b}]"),
            Term::Lambda(a, b) => write!(f, "lam[{a},{b}]"),
            Term::Pairing(a, b) => write!(f, "<{a}, {b}>"),
            Term::Iter(a) => write!(f, "it({a})"),
            Term::CaseNat(a, b) => write!(f, "case({a}, {b})"),
            Term::HomCo(a, g) => write!(f, "hom[{a}]({g})"),
            Term::Lit(v, a) => write!(f, "lit[{a}]({v})"),
            Term::XDec(a, v) => write!(f, "xdec[{a}]({v})"),
            Term::Compose(g, h) => {
                if matches!(**g, Term::Compose(..)) {
                    write!(f, "({g}) . {h}")
                } else {
                    write!(f, "{g} . {h}")
                }
            }
            Term::PairProd(a, b) => {
                if matches!(**a, Term::Compose(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                if matches!(**b, Term::Compose(..) | Term::PairProd(..)) {
                    write!(f, " x ({b})")
                } else {
                    write!(f, " x {b}")
                }
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => write!(f, "()"),
            Value::Num(n) | Value::X(n) => write!(f, "{n}"),
            Value::Pair(a, b) => write!(f, "({a},{b})"),
            Value::Arrow(a) => write!(f, "fn({})", a.body),
        }
    }
}
