use std::path::Path;
use std::process::{Command, Output};

use lolab_cli::commands::{AntichainReport, ExtremalReport, PartialRun, VerifyReport};
use lolab_core::search::{LedgerEntry, SearchOutcome};
use lolab_core::{AtomDistribution, BoundReport, Rational, VecD};

fn lolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lolab"))
        .args(args)
        .env("LOLAB_THREADS", "2")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = lolab(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

/// Parses `text` into `T` and checks that serializing it back gives the same JSON.
fn round_trip<T: serde::Serialize + serde::de::DeserializeOwned>(text: &str) -> T {
    let value: T = serde_json::from_str(text).unwrap();
    let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(again, text);
    value
}

#[test]
fn bound_examples() {
    let b: BoundReport = round_trip(&ok(&["bound", "--n", "4", "--norm-sq", "1"]));
    assert_eq!(b.bound, r("1/4"));
    assert_eq!(format!("{:?}", b.which_theorem), "NonUniform");
    let b: BoundReport = round_trip(&ok(&["bound", "--n", "4", "--zero"]));
    assert_eq!(b.bound, r("3/8"));
    assert_eq!(format!("{:?}", b.which_theorem), "ErdosKleitman");
    let b: BoundReport = round_trip(&ok(&["bound", "--n", "3", "--zero"]));
    assert_eq!(b.bound, r("1/4"));
    assert_eq!(format!("{:?}", b.which_theorem), "ZeroOdd");
    let b: BoundReport = round_trip(&ok(&["bound", "--n", "1", "--x", "(3/5,4/5)"]));
    assert_eq!(b.bound, r("1/2"));
    let b: BoundReport = round_trip(&ok(&[
        "bound",
        "--n",
        "9",
        "--norm-sq",
        "9",
        "--zero-weights",
    ]));
    assert_eq!(b.bound, r("84/512"));
}

#[test]
fn bound_csv() {
    assert_eq!(
        ok(&["bound", "--n", "4", "--norm-sq", "1", "--format", "csv"]),
        "n,k,delta,bound,which_theorem\n4,1,1,1/4,NonUniform\n"
    );
}

#[test]
fn atom_and_dist_examples() {
    let p: Rational = round_trip(&ok(&["atom", "--weights", "1,1,1", "--x", "1"]));
    assert_eq!(p, r("3/8"));
    let p: Rational = round_trip(&ok(&["atom", "--weights", "(1,0),(0,1)", "--x", "(1,1)"]));
    assert_eq!(p, r("1/4"));
    let law: AtomDistribution = round_trip(&ok(&["dist", "--weights", "1,1"]));
    let atoms: Vec<(VecD, Rational)> = law.iter().map(|(x, p)| (x.clone(), p.clone())).collect();
    assert_eq!(
        atoms,
        vec![
            (VecD::from_ints(&[-2]), r("1/4")),
            (VecD::from_ints(&[0]), r("1/2")),
            (VecD::from_ints(&[2]), r("1/4")),
        ]
    );
    assert_eq!(
        ok(&["dist", "--weights", "1,1", "--format", "csv"]),
        "x1,probability\n-2,1/4\n0,1/2\n2,1/4\n"
    );
    let p: Rational = round_trip(&ok(&["atom", "--weights", "1/2", "--m", "3", "--x", "0"]));
    assert_eq!(p, r("1/3"));
}

#[test]
fn weights_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("w.json");
    std::fs::write(&json, r#"[["1","0"],["0","1"]]"#).unwrap();
    let csv = dir.path().join("w.csv");
    std::fs::write(&csv, "1\n1\n1\n").unwrap();
    let p: Rational = serde_json::from_str(&ok(&[
        "atom",
        "--weights-file",
        json.to_str().unwrap(),
        "--x",
        "(1,1)",
    ]))
    .unwrap();
    assert_eq!(p, r("1/4"));
    let p: Rational = serde_json::from_str(&ok(&[
        "atom",
        "--weights-file",
        csv.to_str().unwrap(),
        "--x",
        "1",
    ]))
    .unwrap();
    assert_eq!(p, r("3/8"));
}

#[test]
fn verify_examples() {
    for args in [
        [
            "verify",
            "--theorem",
            "2",
            "--n",
            "8",
            "--d",
            "1",
            "--count",
            "100",
            "--seed",
            "7",
        ],
        [
            "verify",
            "--theorem",
            "4",
            "--n",
            "7",
            "--d",
            "2",
            "--count",
            "50",
            "--seed",
            "7",
        ],
        [
            "verify",
            "--theorem",
            "1",
            "--n",
            "6",
            "--d",
            "3",
            "--count",
            "50",
            "--seed",
            "7",
        ],
    ] {
        let out = ok(&args);
        assert!(out.starts_with("0 violations"), "{out}");
        assert_eq!(out.lines().count(), 1);
    }
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = [
        "verify",
        "--theorem",
        "2",
        "--n",
        "5",
        "--count",
        "20",
        "--out",
        path.to_str().unwrap(),
    ];
    ok(&args);
    let first = std::fs::read_to_string(&path).unwrap();
    let report: VerifyReport = round_trip(&first);
    assert!(matches!(report, VerifyReport::Campaign(ref c) if c.violations.is_empty()));
    ok(&args);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    let path3 = dir.path().join("report3.json");
    let out = ok(&[
        "verify",
        "--theorem",
        "3",
        "--n",
        "5",
        "--count",
        "10",
        "--out",
        path3.to_str().unwrap(),
    ]);
    assert!(out.starts_with("0 violations"));
    let report: VerifyReport = round_trip(&std::fs::read_to_string(&path3).unwrap());
    assert!(matches!(report, VerifyReport::ZeroWeights(ref t) if t.extremal_attained));
}

#[test]
fn extremal_and_antichain_examples() {
    let dir = tempfile::tempdir().unwrap();
    let weights = dir.path().join("w.json");
    let e: ExtremalReport = round_trip(&ok(&[
        "extremal",
        "--n",
        "3",
        "--d",
        "1",
        "--x",
        "1",
        "--weights-out",
        weights.to_str().unwrap(),
    ]));
    assert!(e.equality);
    assert_eq!(e.config.weights(), &vec![VecD::from_ints(&[1]); 3][..]);
    let p: Rational = serde_json::from_str(&ok(&[
        "atom",
        "--weights-file",
        weights.to_str().unwrap(),
        "--x",
        "1",
    ]))
    .unwrap();
    assert_eq!(p, r("3/8"));

    let e: ExtremalReport = round_trip(&ok(&["extremal", "--n", "6", "--d", "2", "--x", "(1,1)"]));
    assert!(e.equality);
    let e: ExtremalReport = round_trip(&ok(&["extremal", "--zero-weights", "--x", "2"]));
    assert!(e.equality);
    assert_eq!(e.probability, r("1/4"));

    let a: AntichainReport = round_trip(&ok(&["antichain", "--weights", "1,1,1", "--x", "1"]));
    assert_eq!(a.size, 3);
    assert!(a.antichain && a.k_intersecting && a.milner);
    assert_eq!(a.milner_bound, "3");
    assert_eq!(a.probability, r("3/8"));
}

#[test]
fn search_example_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let (ledger, full, cp, resumed) = (
        p("ledger.jsonl"),
        p("full.json"),
        p("cp.json"),
        p("resumed.json"),
    );
    let base = [
        "search",
        "--conjecture",
        "2",
        "--norm",
        "linf",
        "--n",
        "8",
        "--d",
        "2",
        "--budget",
        "10000",
        "--seed",
        "1",
    ];
    let mut args = base.to_vec();
    args.extend(["--ledger", &ledger, "--out", &full]);
    let line = ok(&args);
    let entry: LedgerEntry = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(entry.cell.conjecture, "C2(linf)");
    assert!(entry.best_margin.is_some());
    let outcome: SearchOutcome = round_trip(&std::fs::read_to_string(&full).unwrap());
    assert_eq!(outcome.best_margin(), entry.best_margin.as_ref());

    let mut args = base.to_vec();
    args.extend(["--checkpoint", &cp, "--stop-after", "1000"]);
    let partial: PartialRun = round_trip(&ok(&args));
    assert!(!partial.complete);
    ok(&[
        "search", "--resume", &cp, "--out", &resumed, "--ledger", &ledger,
    ]);
    assert_eq!(
        std::fs::read_to_string(&full).unwrap(),
        std::fs::read_to_string(&resumed).unwrap()
    );
    let lines = std::fs::read_to_string(&ledger).unwrap();
    assert_eq!(lines.lines().count(), 2);
    assert_eq!(lines.lines().next(), lines.lines().nth(1));
}

#[test]
fn search_reports_certified_counterexample() {
    // box-bounded weights against the Euclidean bound: (1,1) alone beats it
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("o.json");
    let out = lolab(&[
        "search",
        "--conjecture",
        "2",
        "--norm",
        "l2",
        "--constraint",
        "linf",
        "--n",
        "2",
        "--d",
        "2",
        "--budget",
        "500",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let outcome: SearchOutcome =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(!outcome.certificates.is_empty());
    let engine = lolab_core::Engine::default();
    assert!(outcome
        .certificates
        .iter()
        .all(|c| c.reverify(&engine).unwrap()));
}

#[test]
fn exit_codes() {
    assert_eq!(
        lolab(&["bound", "--n", "4", "--norm-sq", "1/x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(lolab(&["bound", "--n", "4"]).status.code(), Some(2));
    assert_eq!(lolab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        lolab(&["atom", "--weights", "2", "--x", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lolab(&["search", "--conjecture", "1", "--m", "2", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    let capped = lolab(&["dist", "--weights", "1,1,1,1,1,1", "--cap-full", "4"]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap 4"));
    assert_eq!(
        lolab(&[
            "atom",
            "--weights",
            "1,1,1,1,1,1",
            "--x",
            "0",
            "--cap-mitm",
            "4"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn identical_arguments_identical_bytes() {
    let args = [
        "verify",
        "--theorem",
        "2",
        "--n",
        "6",
        "--d",
        "2",
        "--count",
        "30",
        "--format",
        "csv",
        "--seed",
        "3",
    ];
    let run = |threads: &str| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cells.csv");
        let mut a = args.to_vec();
        a.extend(["--out", path.to_str().unwrap()]);
        let out = Command::new(env!("CARGO_BIN_EXE_lolab"))
            .args(&a)
            .env("LOLAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        (
            stdout(&out),
            std::fs::read_to_string(Path::new(&path)).unwrap(),
        )
    };
    assert_eq!(run("1"), run("3"));
}
