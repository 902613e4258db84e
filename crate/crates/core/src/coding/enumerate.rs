//! The count of map codes of a fixed type, in order of byte length and then
//! lexicographic byte order.
//!
//! Codes are generated top-down from the required domain, one exact length
//! at a time, with every (length, domain, codomain) table memoized. Objects
//! needed as free decorations (the second argument of `lam`) are generated
//! the same way.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::terms::{Obj, Pred, Term};

use super::bytes::{serialize_obj, write_obj};
use super::code::Code;

/// Longest code length the enumeration will generate.
pub const DEFAULT_MAX_LENGTH: usize = 16;

#[derive(Clone, Debug)]
struct Entry {
    bytes: Arc<[u8]>,
    term: Term,
    cod: Obj,
    stratum: u32,
}

#[derive(Clone, Debug)]
struct ObjEntry {
    bytes: Arc<[u8]>,
    obj: Obj,
}

/// The codomain constraint of a generation request.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Want {
    Exact(Obj),
    /// Any codomain that some term of at most this many bytes accepts as
    /// its domain.
    Within(usize),
}

impl Want {
    fn admits(&self, c: &Obj) -> bool {
        match self {
            Want::Exact(want) => want == c,
            Want::Within(b) => min_len(c) <= *b,
        }
    }
}

/// A lower bound on the length of any code with domain `d`, from the
/// constructors that can consume `d` directly. Composites are never shorter
/// than their innermost consumer.
fn min_len(d: &Obj) -> usize {
    let Ok(bytes) = serialize_obj(d) else {
        return usize::MAX;
    };
    let size = bytes.len();
    let mut best = 1 + size;
    if *d == Obj::One || *d == Obj::Nat || d.is_two() || *d == Obj::prod(Obj::Nat, Obj::Nat) {
        best = 1;
    }
    match d {
        Obj::Prod(a, b) => {
            best = best.min(size);
            best = best.min(1usize.saturating_add(min_len(a)).saturating_add(min_len(b)));
            if **b == Obj::Nat {
                best = best.min(1usize.saturating_add(min_len(a)));
            }
            if let Obj::Exp(c, b2) = &**a {
                if b2 == b {
                    let lens = serialize_obj(b).and_then(|x| Ok(x.len() + serialize_obj(c)?.len()));
                    if let Ok(l) = lens {
                        best = best.min(1 + l);
                    }
                }
            }
        }
        Obj::Exp(c, a) => {
            if let Ok(ab) = serialize_obj(a) {
                best = best.min((1 + ab.len()).saturating_add(min_len(c)));
            }
        }
        _ => {}
    }
    best
}

type Key = (usize, Obj, Want);

#[derive(Default)]
struct Generator {
    max_stratum: Option<u32>,
    terms: HashMap<Key, Arc<Vec<Entry>>>,
    objs: HashMap<usize, Arc<Vec<ObjEntry>>>,
}

fn cat(parts: &[&[u8]]) -> Arc<[u8]> {
    parts.concat().into()
}

impl Generator {
    fn allowed(&self, ord: u32) -> bool {
        self.max_stratum.is_none_or(|n| ord <= n)
    }

    fn objects(&mut self, len: usize) -> Arc<Vec<ObjEntry>> {
        if let Some(hit) = self.objs.get(&len) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if len == 1 {
            for a in [Obj::One, Obj::Nat, Obj::two(), Obj::x()] {
                out.push(ObjEntry {
                    bytes: serialize_obj(&a).expect("atomic object").into(),
                    obj: a,
                });
            }
        } else if len >= 3 {
            for la in 1..len - 1 {
                let left = self.objects(la);
                let right = self.objects(len - 1 - la);
                for a in left.iter() {
                    for b in right.iter() {
                        for (tag, obj) in [
                            (b"*", Obj::prod(a.obj.clone(), b.obj.clone())),
                            (b"^", Obj::exp(a.obj.clone(), b.obj.clone())),
                        ] {
                            out.push(ObjEntry {
                                bytes: cat(&[tag, &a.bytes, &b.bytes]),
                                obj,
                            });
                        }
                    }
                }
                for c in left.iter() {
                    let preds = self.terms(len - 1 - la, &c.obj, &Want::Exact(Obj::two()));
                    for p in preds.iter() {
                        let s = Obj::Subset(
                            Arc::new(c.obj.clone()),
                            Pred::Map(Arc::new(p.term.clone())),
                        );
                        if s.is_x() {
                            continue;
                        }
                        out.push(ObjEntry {
                            bytes: cat(&[b"{", &c.bytes, &p.bytes]),
                            obj: s,
                        });
                    }
                }
            }
        }
        out.retain(|e| self.allowed(e.obj.ord()));
        out.sort_by(|x, y| x.bytes.cmp(&y.bytes));
        let out = Arc::new(out);
        self.objs.insert(len, out.clone());
        out
    }

    fn terms(&mut self, len: usize, dom: &Obj, want: &Want) -> Arc<Vec<Entry>> {
        let key = (len, dom.clone(), want.clone());
        if let Some(hit) = self.terms.get(&key) {
            return hit.clone();
        }
        let out = Arc::new(self.build(len, dom, want));
        self.terms.insert(key, out.clone());
        out
    }

    fn build(&mut self, len: usize, dom: &Obj, want: &Want) -> Vec<Entry> {
        let mut out = Vec::new();
        if len == 0 || !self.allowed(dom.ord()) {
            return out;
        }
        let Ok(dom_bytes) = serialize_obj(dom) else {
            return out;
        };
        let dl = dom_bytes.len();
        let dom_ord = dom.ord();
        let leaf = |out: &mut Vec<Entry>, bytes: Arc<[u8]>, term: Term, c: Obj| {
            out.push(Entry {
                bytes,
                term,
                stratum: dom_ord.max(c.ord()),
                cod: c,
            });
        };

        // Constants.
        if len == 1 {
            match dom {
                Obj::One => leaf(&mut out, cat(&[b"0"]), Term::Zero, Obj::Nat),
                Obj::Nat => leaf(&mut out, cat(&[b"s"]), Term::Succ, Obj::Nat),
                _ => {}
            }
            if dom.is_two() {
                leaf(&mut out, cat(&[b"~"]), Term::Neg, Obj::two());
            }
            if *dom == Obj::prod(Obj::Nat, Obj::Nat) {
                leaf(&mut out, cat(&[b"="]), Term::EqNat, Obj::two());
            }
        }
        if len == 1 + dl {
            leaf(&mut out, cat(&[b"i", &dom_bytes]), Term::Id(dom.clone()), dom.clone());
            leaf(&mut out, cat(&[b"!", &dom_bytes]), Term::Terminal(dom.clone()), Obj::One);
            leaf(
                &mut out,
                cat(&[b"d", &dom_bytes]),
                Term::Diagonal(dom.clone()),
                Obj::prod(dom.clone(), dom.clone()),
            );
            if let Obj::Subset(c, _) = dom {
                leaf(&mut out, cat(&[b"c", &dom_bytes]), Term::Incl(dom.clone()), (**c).clone());
            }
        }
        if let Obj::Prod(a, b) = dom {
            let (a, b) = ((**a).clone(), (**b).clone());
            if len == dl {
                let tail = &dom_bytes[1..];
                leaf(&mut out, cat(&[b"l", tail]), Term::ProjL(a.clone(), b.clone()), a.clone());
                leaf(&mut out, cat(&[b"r", tail]), Term::ProjR(a.clone(), b.clone()), b.clone());
            }
            if let Obj::Exp(base, exponent) = &a {
                if **exponent == b {
                    let mut bytes = vec![b'e'];
                    write_obj(&b, &mut bytes).expect("serializable");
                    write_obj(base, &mut bytes).expect("serializable");
                    if bytes.len() == len {
                        leaf(
                            &mut out,
                            bytes.into(),
                            Term::Eps(b.clone(), (**base).clone()),
                            (**base).clone(),
                        );
                    }
                }
            }
        }
        if len > 1 + dl {
            // lam[A,B] has codomain (A*B)^B, which no term shorter than
            // |B| + 2 bytes accepts.
            let bl = len - 1 - dl;
            let reachable = match want {
                Want::Within(b) => bl + 2 <= *b,
                Want::Exact(Obj::Exp(p, b)) => {
                    matches!(&**p, Obj::Prod(a2, b2) if **a2 == *dom && b2 == b)
                }
                Want::Exact(_) => false,
            };
            if reachable {
                if let Want::Exact(Obj::Exp(_, b)) = want {
                    if serialize_obj(b).map(|x| x.len()) == Ok(bl) {
                        let c = Obj::exp(Obj::prod(dom.clone(), (**b).clone()), (**b).clone());
                        let bytes = cat(&[b"L", &dom_bytes, &serialize_obj(b).expect("sized")]);
                        leaf(&mut out, bytes, Term::Lambda(dom.clone(), (**b).clone()), c);
                    }
                } else {
                    let objs = self.objects(bl);
                    for b in objs.iter() {
                        let c = Obj::exp(Obj::prod(dom.clone(), b.obj.clone()), b.obj.clone());
                        leaf(
                            &mut out,
                            cat(&[b"L", &dom_bytes, &b.bytes]),
                            Term::Lambda(dom.clone(), b.obj.clone()),
                            c,
                        );
                    }
                }
            }
        }

        out.retain(|e| want.admits(&e.cod));
        out.extend(self.composites(len, dom, want));
        out.retain(|e| self.allowed(e.stratum));
        out.sort_by(|x, y| x.bytes.cmp(&y.bytes));
        out
    }

    /// Terms with a tag and subterms. Every result admits `want`.
    fn composites(&mut self, len: usize, dom: &Obj, want: &Want) -> Vec<Entry> {
        let mut out = Vec::new();
        if len < 2 {
            return out;
        }
        let dom_ord = dom.ord();
        let mk = |bytes: Arc<[u8]>, term: Term, c: Obj, kids: u32| Entry {
            stratum: kids.max(dom_ord).max(c.ord()),
            bytes,
            term,
            cod: c,
        };

        // it(f)
        if let Obj::Prod(a, n) = dom {
            if **n == Obj::Nat && want.admits(a) {
                let fs = self.terms(len - 1, a, &Want::Exact((**a).clone()));
                for f in fs.iter() {
                    out.push(mk(
                        cat(&[b"$", &f.bytes]),
                        Term::iter(f.term.clone()),
                        f.cod.clone(),
                        f.stratum,
                    ));
                }
            }
        }
        if len < 3 {
            return out;
        }

        // g . f
        for lf in 1..len - 1 {
            let lg = len - 1 - lf;
            let fs = self.terms(lf, dom, &Want::Within(lg));
            for f in fs.iter() {
                let gs = self.terms(lg, &f.cod, want);
                for g in gs.iter() {
                    out.push(mk(
                        cat(&[b".", &g.bytes, &f.bytes]),
                        Term::compose(g.term.clone(), f.term.clone()),
                        g.cod.clone(),
                        g.stratum.max(f.stratum),
                    ));
                }
            }
        }

        // <f, g> and f x g. A product codomain accepted within `b` bytes has
        // components each accepted within `b + 1`.
        let parts = match want {
            Want::Within(b) => Some((Want::Within(b + 1), Want::Within(b + 1))),
            Want::Exact(Obj::Prod(c1, c2)) => {
                Some((Want::Exact((**c1).clone()), Want::Exact((**c2).clone())))
            }
            Want::Exact(_) => None,
        };
        if let Some((wl, wr)) = parts {
            let mut pairs = Vec::new();
            for lf in 1..len - 1 {
                let fs = self.terms(lf, dom, &wl);
                if fs.is_empty() {
                    continue;
                }
                let gs = self.terms(len - 1 - lf, dom, &wr);
                for f in fs.iter() {
                    for g in gs.iter() {
                        pairs.push(mk(
                            cat(&[b",", &f.bytes, &g.bytes]),
                            Term::pairing(f.term.clone(), g.term.clone()),
                            Obj::prod(f.cod.clone(), g.cod.clone()),
                            f.stratum.max(g.stratum),
                        ));
                    }
                }
            }
            if let Obj::Prod(a, b) = dom {
                for lf in 1..len - 1 {
                    let fs = self.terms(lf, a, &wl);
                    if fs.is_empty() {
                        continue;
                    }
                    let gs = self.terms(len - 1 - lf, b, &wr);
                    for f in fs.iter() {
                        for g in gs.iter() {
                            pairs.push(mk(
                                cat(&[b"x", &f.bytes, &g.bytes]),
                                Term::pair_prod(f.term.clone(), g.term.clone()),
                                Obj::prod(f.cod.clone(), g.cod.clone()),
                                f.stratum.max(g.stratum),
                            ));
                        }
                    }
                }
            }
            pairs.retain(|e| want.admits(&e.cod));
            out.extend(pairs);
        }

        // case(f0, fs)
        if *dom == Obj::Nat {
            for l0 in 1..len - 1 {
                let zs = self.terms(l0, &Obj::One, want);
                for z in zs.iter() {
                    let ss = self.terms(len - 1 - l0, &Obj::Nat, &Want::Exact(z.cod.clone()));
                    for s in ss.iter() {
                        out.push(mk(
                            cat(&[b"?", &z.bytes, &s.bytes]),
                            Term::case_nat(z.term.clone(), s.term.clone()),
                            z.cod.clone(),
                            z.stratum.max(s.stratum),
                        ));
                    }
                }
            }
        }

        // hom[A](g): the codomain C^A is accepted within `b` bytes exactly
        // when C is accepted within `b - 1 - |A|`.
        if let Obj::Exp(b, a) = dom {
            if let Ok(a_bytes) = serialize_obj(a) {
                let al = a_bytes.len();
                let inner = match want {
                    Want::Within(w) => w.checked_sub(1 + al).map(Want::Within),
                    Want::Exact(Obj::Exp(c, a2)) if **a2 == **a => Some(Want::Exact((**c).clone())),
                    Want::Exact(_) => None,
                };
                if let Some(inner) = inner {
                    if len > 1 + al {
                        let gs = self.terms(len - 1 - al, b, &inner);
                        for g in gs.iter() {
                            out.push(mk(
                                cat(&[b"h", &a_bytes, &g.bytes]),
                                Term::hom_co((**a).clone(), g.term.clone()),
                                Obj::exp(g.cod.clone(), (**a).clone()),
                                g.stratum,
                            ));
                        }
                    }
                }
            }
        }
        out
    }
}

/// All codes of one type, ranked by (byte length, bytes).
pub struct Enumeration {
    dom: Obj,
    cod: Obj,
    max_length: usize,
    gen: Generator,
    /// `levels[len]` holds the codes of exactly `len` bytes.
    levels: Vec<Arc<Vec<Entry>>>,
    /// `offsets[len]` is the number of codes shorter than `len`.
    offsets: Vec<u64>,
}

impl Enumeration {
    pub fn new(dom: Obj, cod: Obj, max_stratum: Option<u32>) -> Enumeration {
        Enumeration {
            dom,
            cod,
            max_length: DEFAULT_MAX_LENGTH,
            gen: Generator {
                max_stratum,
                ..Generator::default()
            },
            levels: vec![Arc::new(Vec::new())],
            offsets: vec![0],
        }
    }

    pub fn with_max_length(mut self, max_length: usize) -> Enumeration {
        self.max_length = max_length;
        self
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn max_stratum(&self) -> Option<u32> {
        self.gen.max_stratum
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    /// Generates codes of every length up to `len`.
    fn extend_to(&mut self, len: usize) {
        while self.levels.len() <= len.min(self.max_length) {
            let l = self.levels.len();
            let prev = self.offsets[l - 1] + self.levels[l - 1].len() as u64;
            let (dom, cod) = (self.dom.clone(), self.cod.clone());
            let level = self.gen.terms(l, &dom, &Want::Exact(cod));
            self.levels.push(level);
            self.offsets.push(prev);
        }
    }

    /// Number of codes no longer than `len` bytes.
    pub fn count_up_to(&mut self, len: usize) -> u64 {
        self.extend_to(len);
        let l = len.min(self.levels.len() - 1);
        self.offsets[l] + self.levels[l].len() as u64
    }

    /// The `i`-th code.
    pub fn unrank(&mut self, i: u64) -> Result<Code> {
        loop {
            let l = self.levels.len() - 1;
            let end = self.offsets[l] + self.levels[l].len() as u64;
            if i < end {
                let pos = self.offsets.partition_point(|&o| o <= i) - 1;
                return Ok(self.code_at(pos, (i - self.offsets[pos]) as usize));
            }
            if l >= self.max_length {
                return Err(Error::Unsupported(format!(
                    "index {i} lies beyond the {end} codes of at most {} bytes",
                    self.max_length
                )));
            }
            self.extend_to(l + 1);
        }
    }

    fn code_at(&self, len: usize, pos: usize) -> Code {
        let e = &self.levels[len][pos];
        Code {
            term: e.term.clone(),
            dom: self.dom.clone(),
            cod: e.cod.clone(),
            stratum: e.stratum,
            bytes: e.bytes.to_vec(),
        }
    }

    /// The position of a code in the count.
    pub fn rank(&mut self, c: &Code) -> Result<u64> {
        let miss = |why: String| Error::RankNotFound(format!("`{c}`: {why}"));
        if c.dom != self.dom || c.cod != self.cod {
            return Err(miss(format!(
                "typed {} -> {}, the count is of {} -> {}",
                c.dom, c.cod, self.dom, self.cod
            )));
        }
        if let Some(n) = self.gen.max_stratum {
            if c.stratum > n {
                return Err(miss(format!("stratum {} exceeds the bound {n}", c.stratum)));
            }
        }
        let len = c.bytes.len();
        if len > self.max_length {
            return Err(miss(format!(
                "{len} bytes exceeds the enumerated length {}",
                self.max_length
            )));
        }
        self.extend_to(len);
        let level = &self.levels[len];
        match level.binary_search_by(|e| (*e.bytes).cmp(&c.bytes[..])) {
            Ok(pos) => Ok(self.offsets[len] + pos as u64),
            Err(_) => Err(miss("not a well-typed canonical code".into())),
        }
    }

    /// The first `k` codes, fewer if the length bound is reached.
    pub fn take(&mut self, k: u64) -> Vec<Code> {
        let mut out = Vec::new();
        for i in 0..k {
            match self.unrank(i) {
                Ok(c) => out.push(c),
                Err(_) => break,
            }
        }
        out
    }
}
