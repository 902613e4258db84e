//! Acceptance checks, one line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{corpus30, o, objects15};
use pre_core::coding::{code_compose, code_iter, code_product, encode, Enumeration};
use pre_core::diagonal::{diagonal_report, on_big_stack, DiagonalParams, DEFAULT_FUEL};
use pre_core::eval::{eval, eval_name, stdlib, Value};
use pre_core::interp::{check_objectivity, closed_compose, closed_iter, closed_product};
use pre_core::sample::{obs_eq, rand_object, rand_term_from, rand_term_to, rng, sample_value, DEFAULT_SEED};
use pre_core::terms::{coconj, conj, Obj, Term};
use pre_core::universal::{
    chain_down, chain_up, embed_first_order, embed_object, level, retract_first_order,
    retract_object,
};
use rand::seq::SliceRandom;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/enumeration").join(name)
}

fn read_golden(name: &str) -> Result<String, String> {
    std::fs::read_to_string(golden(name)).map_err(|e| format!("{name}: {e}"))
}

fn pre(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pre")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("pre {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn ord_suite() -> Result<String, String> {
    for (src, want) in [("2", 1), ("X", 1), ("X^(X^X)", 3), ("N", 1), ("N^N", 2)] {
        let got = o(src).ord();
        ensure(got == want, || format!("ord {src} = {got}, expected {want}"))?;
    }
    for k in 1..=6 {
        let got = level(k).map_err(|e| e.to_string())?.ord();
        ensure(got == k, || format!("ord(level({k})) = {got}"))?;
    }
    Ok("worked values and levels 1..6".into())
}

fn adjunction_suite() -> Result<String, String> {
    let mut r = rng(DEFAULT_SEED);
    let mut points = 0;
    for k in 0..200u64 {
        let depth = (k % 7) as u32;
        let (a, b) = (rand_object(&mut r), rand_object(&mut r));
        // conj then co
        let f = rand_term_from(&Obj::prod(a.clone(), b.clone()), &mut r, depth);
        let (dom, cod) = f.typecheck().map_err(|e| e.to_string())?;
        let back = coconj(&conj(&f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        // co then conj, on a map into an exponential
        let h = rand_term_from(&Obj::prod(a.clone(), b.clone()), &mut r, depth / 2);
        let pre = rand_term_from(&rand_object(&mut r), &mut r, 0);
        let g = match rand_term_to(&pre.cod_unchecked(), &a, &mut r, depth / 2) {
            Some(k) => Term::compose(conj(&h).unwrap(), Term::compose(k, pre)),
            None => conj(&h).unwrap(),
        };
        let (gdom, gcod) = g.typecheck().map_err(|e| e.to_string())?;
        let again = conj(&coconj(&g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for s in 0..20 {
            let v = sample_value(&dom, &mut r, 6 + s).unwrap();
            let (x, y) = (eval(&f, &v).unwrap(), eval(&back, &v).unwrap());
            ensure(obs_eq(&cod, &x, &y, s).unwrap(), || format!("co/conj fails for {f} at {v}"))?;
            let w = sample_value(&gdom, &mut r, 6 + s).unwrap();
            let (x, y) = (eval(&g, &w).unwrap(), eval(&again, &w).unwrap());
            ensure(obs_eq(&gcod, &x, &y, s).unwrap(), || format!("conj/co fails for {g} at {w}"))?;
            points += 2;
        }
    }
    Ok(format!("200 instances of each law, {points} points"))
}

fn embedding_suite() -> Result<String, String> {
    let mut r = rng(DEFAULT_SEED);
    let first_order: Vec<Obj> =
        ["N", "1", "2", "X", "N*N", "N*2", "X*N", "(N*1)*X"].iter().map(|s| o(s)).collect();
    for k in 0..200u64 {
        let a = first_order.choose(&mut r).unwrap();
        let v = sample_value(a, &mut r, 3 + k / 4).unwrap();
        let w = embed_first_order(a, &v).map_err(|e| e.to_string())?;
        let back = retract_first_order(a, &w).map_err(|e| e.to_string())?;
        ensure(back == v, || format!("{a}: {v} came back as {back}"))?;
    }
    for lvl in 1..=3 {
        let u = level(lvl).unwrap();
        for s in 0..20 {
            let w = sample_value(&u, &mut r, 10).unwrap();
            let back = chain_down(lvl, &chain_up(lvl, &w).unwrap()).map_err(|e| e.to_string())?;
            ensure(obs_eq(&u, &w, &back, s).unwrap(), || format!("chain at level {lvl}"))?;
        }
    }
    let objs = objects15();
    for a in &objs {
        for s in 0..5 {
            let v = sample_value(a, &mut r, 9).unwrap();
            let w = embed_object(a, &v, a.ord()).map_err(|e| format!("{a}: {e}"))?;
            let back = retract_object(a, &w, a.ord()).map_err(|e| format!("{a}: {e}"))?;
            ensure(obs_eq(a, &v, &back, s).unwrap(), || format!("{a} at {v}"))?;
        }
    }
    Ok(format!("200 first-order values, levels 1..3, {} objects", objs.len()))
}

fn homomorphism_suite() -> Result<String, String> {
    let mut r = rng(DEFAULT_SEED);
    let mut iterated = 0;
    for _ in 0..300 {
        let dom = rand_object(&mut r);
        let f = rand_term_from(&dom, &mut r, 2);
        let g = rand_term_from(&f.cod_unchecked(), &mut r, 2);
        let (cf, cg) = (encode(&f).unwrap(), encode(&g).unwrap());
        let whole = encode(&Term::compose(g.clone(), f.clone())).unwrap();
        ensure(whole == code_compose(&cg, &cf).unwrap(), || format!("composition {g} . {f}"))?;
        let both = encode(&Term::pair_prod(f.clone(), g.clone())).unwrap();
        ensure(both == code_product(&cf, &cg).unwrap(), || format!("product {f} x {g}"))?;
        if let Some(e) = rand_term_to(&dom, &dom, &mut r, 2) {
            let ce = encode(&e).unwrap();
            ensure(encode(&Term::iter(e.clone())).unwrap() == code_iter(&ce).unwrap(), || {
                format!("iteration of {e}")
            })?;
            iterated += 1;
        }
    }
    Ok(format!("300 pairs, {iterated} iterations"))
}

fn closed_suite() -> Result<String, String> {
    let mut lib: Vec<Term> = stdlib::stdlib().into_iter().map(|(_, f)| f).collect();
    lib.extend([Term::Succ, stdlib::double(), stdlib::is_zero(), Term::Id(Obj::Nat)]);
    // iterates are sampled at counts in the eighties, so steps must not grow fast
    let steps = [Term::Succ, stdlib::pred(), common::t("0 . ![N]"), common::t("case(s . 0, 0 . ![N])")];
    let name = |f: &Term| eval_name(f).map_err(|e| e.to_string());
    let mut r = rng(DEFAULT_SEED);
    let mut combos = 0;
    while combos < 50 {
        let f = lib.choose(&mut r).unwrap();
        let g = lib.choose(&mut r).unwrap();
        let (fd, fc) = f.typecheck().unwrap();
        let (gd, gc) = g.typecheck().unwrap();
        if gd == fc {
            let lhs = name(&Term::compose(g.clone(), f.clone()))?;
            let rhs = closed_compose(&name(g)?, &name(f)?).map_err(|e| e.to_string())?;
            ensure(obs_eq(&Obj::exp(gc.clone(), fd.clone()), &lhs, &rhs, combos).unwrap(), || {
                format!("composition {g} . {f}")
            })?;
        }
        let lhs = name(&Term::pair_prod(f.clone(), g.clone()))?;
        let rhs = closed_product(&name(f)?, &name(g)?).map_err(|e| e.to_string())?;
        let obj = Obj::exp(Obj::prod(fc, gc), Obj::prod(fd, gd));
        ensure(obs_eq(&obj, &lhs, &rhs, combos).unwrap(), || format!("product {f} x {g}"))?;

        let e = Term::compose(steps.choose(&mut r).unwrap().clone(), steps.choose(&mut r).unwrap().clone());
        let lhs = name(&Term::iter(e.clone()))?;
        let it = closed_iter(&name(&e)?).map_err(|e| e.to_string())?;
        let obj = Obj::exp(Obj::Nat, Obj::prod(Obj::Nat, Obj::Nat));
        ensure(obs_eq(&obj, &lhs, &it, combos).unwrap(), || format!("iteration of {e}"))?;
        combos += 1;
    }
    let pair = |a: u64, b: u64| Value::pair(Value::nat(a), Value::nat(b));
    for f in [Term::Succ, stdlib::double(), stdlib::pred()] {
        let fv = name(&f)?;
        let it = closed_iter(&fv).unwrap();
        for a in [0, 2, 5] {
            let anchor = pre_core::eval::apply(&it, &pair(a, 0)).unwrap();
            ensure(anchor == Value::nat(a), || format!("anchor of {f} at {a}"))?;
            for k in 0..15 {
                let prev = pre_core::eval::apply(&it, &pair(a, k)).unwrap();
                let next = pre_core::eval::apply(&it, &pair(a, k + 1)).unwrap();
                ensure(next == pre_core::eval::apply(&fv, &prev).unwrap(), || {
                    format!("step of {f} at ({a}, {k})")
                })?;
            }
        }
    }
    Ok("50 combinations, recurrence to 15".into())
}

fn objectivity_suite() -> Result<String, String> {
    let corpus = corpus30();
    let mut checked = 0;
    for bound in 1..=3 {
        let rep = check_objectivity(bound, &corpus, 25, DEFAULT_SEED);
        for row in &rep.rows {
            if row.stratum > bound {
                continue;
            }
            ensure(row.passed(), || format!("{} at {bound}: {:?}", row.name, row.failure))?;
            let used = row.used_stratum.unwrap_or(u32::MAX);
            ensure(used <= 2 * row.stratum, || {
                format!("{} used stratum {used} > 2 * {}", row.name, row.stratum)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{} terms, {checked} runs at bounds 1..3", corpus.len()))
}

fn enumeration_suite() -> Result<String, String> {
    let want = read_golden("n_to_2_first_500.txt")?;
    let got = pre(&["enumerate", "--type", "N->2", "--count", "500"])?;
    ensure(got == want, || "enumeration output differs from golden".into())?;
    let mut e = Enumeration::new(Obj::Nat, Obj::two(), None);
    let mut rows = 0;
    for line in want.lines().filter(|l| !l.starts_with('#')) {
        let mut cols = line.split('\t');
        let i: u64 = cols.next().and_then(|c| c.parse().ok()).ok_or("bad index column")?;
        let bytes = cols.next().ok_or("missing bytes column")?;
        let c = e.unrank(i).map_err(|e| e.to_string())?;
        ensure(c.bytes == bytes.as_bytes(), || format!("rank {i}: {bytes}"))?;
        ensure(e.rank(&c).map_err(|e| e.to_string())? == i, || format!("rank of unrank {i}"))?;
        ensure(i == rows, || format!("row {rows} has index {i}"))?;
        rows += 1;
    }
    ensure(rows == 500, || format!("{rows} rows"))?;
    Ok("500 codes".into())
}

fn report_suite() -> Result<String, String> {
    let cases: [(&[&str], &str); 2] = [
        (&["diagonal", "--stratum", "2", "--indices", "0..200"], "diagonal_stratum2_0_200.txt"),
        (&["liar-probe", "--stratum", "2", "--search-bound", "500"], "liar_probe_stratum2_bound500.txt"),
    ];
    let mut status = String::new();
    for (args, file) in cases {
        let want = read_golden(file)?;
        let (a, b) = (pre(args)?, pre(args)?);
        ensure(a == b, || format!("{file}: runs differ"))?;
        ensure(a == want, || format!("{file}: differs from golden"))?;
        if let Some(line) = a.lines().find(|l| l.starts_with("liar_status:")) {
            status = line["liar_status:".len()..].trim().to_string();
            ensure(!status.is_empty(), || "liar_status is empty".into())?;
        }
    }
    ensure(!status.is_empty(), || "no liar_status field".into())?;
    Ok(format!("liar_status {status}"))
}

fn residue_suite() -> Result<String, String> {
    let params = DiagonalParams {
        stratum: 2,
        indices: 200,
        fuel: DEFAULT_FUEL,
        residue_codes: 200,
        seed: DEFAULT_SEED,
    };
    let rep = diagonal_report(params).map_err(|e| e.to_string())?;
    let agreeing = rep.agreeing();
    ensure(agreeing.is_empty(), || format!("codes agreeing with d: {agreeing:?}"))?;
    Ok(format!(
        "0 of 200 codes agree; stratum exceeded {}/200, fuel exhausted {}/200",
        rep.stratum_exceeded(),
        rep.fuel_exhausted()
    ))
}

fn main() {
    let criteria: [(&str, Check, u64); 9] = [
        ("ord", ord_suite, 1),
        ("adjunction", adjunction_suite, 30),
        ("embedding", embedding_suite, 30),
        ("coding homomorphism", homomorphism_suite, 10),
        ("closed operations", closed_suite, 60),
        ("interpretation objectivity", objectivity_suite, 60),
        ("enumeration determinism", enumeration_suite, 10),
        ("diagonal reports", report_suite, 120),
        ("diagonal residue", residue_suite, 120),
    ];
    let mut failed = 0;
    for (k, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = on_big_stack(|| {
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panic: {msg}"))
            })
        });
        let took = start.elapsed();
        let result = match result {
            Ok(_) if took > Duration::from_secs(limit) => {
                Err(format!("took {:.2}s, limit {limit}s", took.as_secs_f64()))
            }
            other => other,
        };
        match result {
            Ok(detail) => {
                println!("criterion {}: PASS {name} ({:.2}s) {detail}", k + 1, took.as_secs_f64())
            }
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({:.2}s) {why}", k + 1, took.as_secs_f64())
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
