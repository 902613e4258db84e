use std::path::PathBuf;
use std::process::{Command, Output};

fn pre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pre")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/enumeration").join(name)
}

#[test]
fn success_prints_to_stdout() {
    let out = pre(&["ord", "X^(X^X)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "3\n");

    assert_eq!(stdout(&pre(&["eval", "it(s)", "(2,3)"])), "5\n");
    assert_eq!(stdout(&pre(&["eval", "add", "(2,3)"])), "5\n");
    assert_eq!(stdout(&pre(&["typecheck", "add"])), "N*N -> N\n");
    assert_eq!(stdout(&pre(&["embed", "--object", "N*N", "--level", "1", "(1,2)"])), "51\n");
}

#[test]
fn domain_errors_exit_one() {
    let out = pre(&["typecheck", "s . eq"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: TypeMismatch"));

    let out = pre(&["interpret", "eps[N,2]", "--stratum", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: StratumExceeded"));

    let out = pre(&["eval", "mult", "(50,50)", "--fuel", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: FuelExhausted"));

    let out = pre(&["decode", "zz"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: DecodeError"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pre(&["bogus"]).status.code(), Some(2));
    assert_eq!(pre(&["ord"]).status.code(), Some(2));
    assert_eq!(pre(&["diagonal", "--indices", "five"]).status.code(), Some(2));
}

#[test]
fn encode_then_decode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.code");
    let path = path.to_str().unwrap();
    let out = pre(&["encode", "eq . diag[N]", "--out", path]);
    assert_eq!(out.status.code(), Some(0));
    let file = std::fs::read_to_string(path).unwrap();
    assert_eq!(file, "PRE-CODE v1 N -> 2\n2e3d644e\n");
    let out = pre(&["decode", path]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("eq . diag[N]"));
}

#[test]
fn liar_probe_with_empty_enumeration() {
    let out = pre(&["liar-probe", "--stratum", "2", "--search-bound", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("liar_status: CodeNotInEnumeration(\"empty enumeration\")"));
}

#[test]
fn enumeration_matches_golden() {
    let out = pre(&["enumerate", "--type", "N->2", "--count", "500"]);
    let want = std::fs::read_to_string(golden("n_to_2_first_500.txt")).unwrap();
    assert_eq!(stdout(&out), want);
}

#[test]
fn reports_match_golden() {
    let cases: [(&[&str], &str); 3] = [
        (&["diagonal", "--stratum", "2", "--indices", "0..200"], "diagonal_stratum2_0_200.txt"),
        (&["liar-probe", "--stratum", "2", "--search-bound", "500"], "liar_probe_stratum2_bound500.txt"),
        (
            &["liar-probe", "--stratum", "1", "--search-bound", "10000", "--candidate", "CANDIDATE"],
            "liar_probe_stratum1_candidate.txt",
        ),
    ];
    let candidate = golden("candidate_stratum2.pre");
    for (args, file) in cases {
        let args: Vec<&str> = args
            .iter()
            .map(|a| if *a == "CANDIDATE" { candidate.to_str().unwrap() } else { a })
            .collect();
        let out = pre(&args);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let want = std::fs::read_to_string(golden(file)).unwrap();
        assert_eq!(stdout(&out), want, "{file}");
    }
}
