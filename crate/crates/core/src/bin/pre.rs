use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pre_core::coding::{decode, encode, from_hex, Code, Enumeration};
use pre_core::diagonal::{
    diagonal_report, enumeration_hash, liar_probe, on_big_stack, DiagonalParams, LiarParams,
    DEFAULT_FUEL, DEFAULT_PROBE_SAMPLES, DEFAULT_RESIDUE_CODES, TOOL_VERSION,
};
use pre_core::eval::{eval_with_fuel, inhabits, stdlib, Fuel, Value};
use pre_core::interp::{check_objectivity, interpret_with, std_corpus, Options};
use pre_core::sample::{obs_eq, rng, sample_value, DEFAULT_SEED, OBSERVATIONS};
use pre_core::syntax::{parse_obj, parse_signature, parse_term, parse_value};
use pre_core::terms::{Obj, Term};
use pre_core::universal::{chain_down, chain_up, embed_object, level, retract_object, XTuple};
use pre_core::{Error, Result};

const CODE_HEADER: &str = "PRE-CODE v1";

/// Command line front end of the primitive-recursive combinator kernel.
#[derive(Parser)]
#[command(name = "pre", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Seed of every randomized check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_parser = parse_u64)]
    seed: u64,
    /// Print X-codes as nested tuples.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the type of a map term.
    Typecheck { term: String },
    /// Print the order of an object.
    Ord { object: String },
    /// Evaluate a map term at a value.
    Eval {
        term: String,
        value: String,
        #[arg(long, default_value_t = u64::MAX)]
        fuel: u64,
    },
    /// Print the code file of a map term.
    Encode {
        term: String,
        /// Write the code file here instead of standard output.
        #[arg(long)]
        out: Option<String>,
    },
    /// Decode a code file or a hex string.
    Decode { code: String },
    /// List codes of one type in enumeration order.
    Enumerate {
        #[arg(long = "type")]
        signature: String,
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[arg(long)]
        max_stratum: Option<u32>,
    },
    /// Embed a value of an object into the chain member U_n.
    Embed {
        #[arg(long)]
        object: String,
        #[arg(long)]
        level: u32,
        value: String,
    },
    /// Retract a value of U_n onto an object.
    Retract {
        #[arg(long)]
        object: String,
        #[arg(long)]
        level: u32,
        value: String,
    },
    /// Check that one chain step down undoes one step up.
    ChainRoundtrip {
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = OBSERVATIONS)]
        samples: usize,
    },
    /// Interpret a code at a stratum bound.
    Interpret {
        term: String,
        #[arg(long)]
        stratum: u32,
        /// Also print the interpretation embedded into U_n.
        #[arg(long)]
        embed: bool,
        #[arg(long)]
        trace: bool,
    },
    /// Compare interpretation with evaluation on a corpus.
    Objectivity {
        #[arg(long, default_value = "std")]
        corpus: String,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        stratum: u32,
    },
    /// Tabulate the anti-diagonal predicate.
    Diagonal {
        #[arg(long)]
        stratum: u32,
        /// Index range `0..K`.
        #[arg(long, default_value = "0..200")]
        indices: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Predicates compared by the residue check.
        #[arg(long, default_value_t = DEFAULT_RESIDUE_CODES)]
        residue: u64,
    },
    /// Run the liar construction as far as it goes.
    LiarProbe {
        #[arg(long)]
        stratum: u32,
        #[arg(long)]
        search_bound: u64,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long, default_value_t = DEFAULT_PROBE_SAMPLES)]
        samples: u64,
        /// File holding a term claimed to compute the anti-diagonal.
        #[arg(long)]
        candidate: Option<String>,
    },
}

fn parse_u64(s: &str) -> std::result::Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| e.to_string())
}

/// Distinguishes bad invocations from domain errors.
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

type Out = std::result::Result<String, Failure>;

fn term_from_text(text: &str) -> Result<Term> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix(CODE_HEADER) {
        let hex: String = rest.lines().skip(1).collect();
        return Ok(decode(&from_hex(&hex)?)?.term);
    }
    match stdlib::lookup(text) {
        Some(t) => Ok(t),
        None => parse_term(text),
    }
}

/// A term given inline, as a library name, or as a file.
fn load_term(arg: &str) -> std::result::Result<Term, Failure> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?;
        return Ok(term_from_text(&text)?);
    }
    Ok(term_from_text(arg)?)
}

fn code_file(c: &Code) -> String {
    format!("{CODE_HEADER} {} -> {}\n{}\n", c.dom, c.cod, c.hex())
}

fn render(a: &Obj, v: &Value, pretty: bool) -> String {
    if pretty && a.is_x() {
        if let Some(n) = v.as_num() {
            return XTuple::decode(n).to_string();
        }
    }
    match (a, v.as_pair()) {
        (Obj::Prod(x, y), Some((p, q))) => {
            format!("({},{})", render(x, p, pretty), render(y, q, pretty))
        }
        (Obj::Subset(c, _), _) if !a.is_x() => render(c, v, pretty),
        _ => v.to_string(),
    }
}

fn value_in(text: &str, a: &Obj) -> Result<Value> {
    let v = parse_value(text, a)?;
    if !inhabits(a, &v)? {
        return Err(Error::IllTyped(format!("{v} is not an element of {a}")));
    }
    Ok(v)
}

fn report_header(out: &mut String, kind: &str, seed: u64) {
    let _ = writeln!(out, "report: {kind}");
    let _ = writeln!(out, "tool: pre {TOOL_VERSION}");
    let _ = writeln!(out, "seed: {seed:#x}");
    let _ = writeln!(out, "enumeration_hash: sha256:{}", enumeration_hash());
}

fn indices(text: &str) -> std::result::Result<u64, Failure> {
    let bad = || Failure::Usage(format!("indices must be written 0..K, got `{text}`"));
    let (start, end) = text.split_once("..").ok_or_else(bad)?;
    if start.trim() != "0" {
        return Err(bad());
    }
    end.trim().parse().map_err(|_| bad())
}

fn run(cmd: Command, g: Global) -> Out {
    let mut out = String::new();
    match cmd {
        Command::Typecheck { term } => {
            let t = load_term(&term)?;
            let a = t.analyze()?;
            let _ = writeln!(out, "{} -> {}", a.dom, a.cod);
        }
        Command::Ord { object } => {
            let a = parse_obj(&object)?;
            let _ = writeln!(out, "{}", a.ord());
        }
        Command::Eval { term, value, fuel } => {
            let t = load_term(&term)?;
            let (dom, cod) = t.typecheck()?;
            let v = value_in(&value, &dom)?;
            let w = eval_with_fuel(&t, &v, &mut Fuel::new(fuel))?;
            let _ = writeln!(out, "{}", render(&cod, &w, g.pretty));
        }
        Command::Encode { term, out: path } => {
            let c = encode(&load_term(&term)?)?;
            match path {
                Some(p) => std::fs::write(&p, code_file(&c))
                    .map_err(|e| Failure::Usage(format!("cannot write {p}: {e}")))?,
                None => out.push_str(&code_file(&c)),
            }
        }
        Command::Decode { code } => {
            let text = if Path::new(&code).is_file() {
                std::fs::read_to_string(&code)
                    .map_err(|e| Failure::Usage(format!("cannot read {code}: {e}")))?
            } else {
                code
            };
            let text = text.trim();
            let hex: String = match text.strip_prefix(CODE_HEADER) {
                Some(rest) => rest.lines().skip(1).collect(),
                None => text.to_string(),
            };
            let c = decode(&from_hex(&hex)?)?;
            let _ = writeln!(out, "{}", c.term);
            let _ = writeln!(out, "type: {} -> {}", c.dom, c.cod);
            let _ = writeln!(out, "stratum: {}", c.stratum);
        }
        Command::Enumerate { signature, count, max_stratum } => {
            let (dom, cod) = parse_signature(&signature)?;
            let mut e = Enumeration::new(dom.clone(), cod.clone(), max_stratum);
            let _ = writeln!(out, "# type: {dom} -> {cod}");
            let bound = max_stratum.map_or("none".to_string(), |n| n.to_string());
            let _ = writeln!(out, "# max_stratum: {bound}");
            let _ = writeln!(out, "# tool: pre {TOOL_VERSION}");
            let _ = writeln!(out, "# enumeration_hash: sha256:{}", enumeration_hash());
            let _ = writeln!(out, "# index\tbytes\tterm\tstratum");
            for i in 0..count {
                let c = e.unrank(i)?;
                let _ = writeln!(out, "{i}\t{c}\t{}\t{}", c.term, c.stratum);
            }
        }
        Command::Embed { object, level: n, value } => {
            let a = parse_obj(&object)?;
            let v = value_in(&value, &a)?;
            let w = embed_object(&a, &v, n)?;
            let _ = writeln!(out, "{}", render(&level(n)?, &w, g.pretty));
        }
        Command::Retract { object, level: n, value } => {
            let a = parse_obj(&object)?;
            let u = level(n)?;
            let w = value_in(&value, &u)?;
            let v = retract_object(&a, &w, n)?;
            let _ = writeln!(out, "{}", render(&a, &v, g.pretty));
        }
        Command::ChainRoundtrip { level: n, samples } => {
            let u = level(n)?;
            let mut r = rng(g.seed);
            let mut agreed = 0;
            for k in 0..samples {
                let v = sample_value(&u, &mut r, 8 + k as u64)?;
                let back = chain_down(n, &chain_up(n, &v)?)?;
                if obs_eq(&u, &v, &back, g.seed.wrapping_add(k as u64))? {
                    agreed += 1;
                }
            }
            let _ = writeln!(out, "level: {n}");
            let _ = writeln!(out, "seed: {:#x}", g.seed);
            let _ = writeln!(out, "roundtrips: {agreed}/{samples}");
            if agreed != samples {
                return Err(Error::Unsupported(format!(
                    "{} of {samples} roundtrips differ",
                    samples - agreed
                ))
                .into());
            }
        }
        Command::Interpret { term, stratum, embed, trace } => {
            let c = encode(&load_term(&term)?)?;
            let r = interpret_with(stratum, &c, Options { trace }, &mut Fuel::unlimited())?;
            let _ = writeln!(out, "code: {c}");
            let _ = writeln!(out, "type: {} -> {}", c.dom, c.cod);
            let _ = writeln!(out, "stratum: {}", c.stratum);
            let _ = writeln!(out, "used_stratum: {}", r.used_stratum);
            let _ = writeln!(out, "name: {}", r.value);
            if embed {
                let u = level(stratum)?;
                let _ = writeln!(out, "embedded: {}", render(&u, &r.embedded(stratum)?, g.pretty));
            }
            if trace {
                let _ = writeln!(out, "trace:");
                for line in &r.trace {
                    let _ = writeln!(out, "  {line}");
                }
            }
        }
        Command::Objectivity { corpus, samples, stratum } => {
            if corpus != "std" {
                return Err(Failure::Usage(format!("unknown corpus `{corpus}`")));
            }
            let rep = check_objectivity(stratum, &std_corpus(), samples, g.seed);
            report_header(&mut out, "objectivity", g.seed);
            let _ = write!(out, "{rep}");
            if !rep.all_passed() {
                print!("{out}");
                return Err(Error::Unsupported("objectivity failed on some rows".into()).into());
            }
        }
        Command::Diagonal { stratum, indices: range, fuel, residue } => {
            let rep = diagonal_report(DiagonalParams {
                stratum,
                indices: indices(&range)?,
                fuel,
                residue_codes: residue,
                seed: g.seed,
            })?;
            let _ = write!(out, "{rep}");
        }
        Command::LiarProbe { stratum, search_bound, fuel, samples, candidate } => {
            let candidate = candidate.map(|c| load_term(&c)).transpose()?;
            let rep = liar_probe(LiarParams {
                stratum,
                search_bound,
                fuel,
                samples,
                seed: g.seed,
                candidate,
            });
            let _ = write!(out, "{rep}");
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match on_big_stack(move || run(cli.command, cli.global)) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
