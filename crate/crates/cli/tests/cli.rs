use std::path::PathBuf;
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use kida_cli::report::{FindTReport, KidaReport, LedgerReport, SieveReport};

fn kida(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kida"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = kida(&full);
    (
        serde_json::from_slice(&out.stdout).unwrap(),
        out.status.code().unwrap(),
    )
}

/// Parses a JSON report into `T`, re-serializes it, and checks the bytes match.
fn round_trips<T: DeserializeOwned + Serialize>(text: &str) {
    let parsed: T = serde_json::from_str(text).unwrap();
    assert_eq!(
        serde_json::to_string_pretty(&parsed).unwrap(),
        text.trim_end()
    );
}

#[test]
fn sieve_to_1e5_finds_the_two_smallest_primes() {
    let (v, code) = json(&["sieve", "--bound", "100000"]);
    assert_eq!(code, 0);
    assert_eq!(v["primes"], serde_json::json!([63241, 63901]));
    assert_eq!(v["stats"]["primes_examined"], 9589);
}

#[test]
fn sieve_below_the_first_prime_is_empty_and_succeeds() {
    let (v, code) = json(&["sieve", "--bound", "100"]);
    assert_eq!(code, 0);
    assert_eq!(v["primes"], serde_json::json!([]));
}

#[test]
fn oversized_bound_hits_the_cost_guard() {
    let out = kida(&["sieve", "--bound", "1000000001"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_arguments_are_config_errors() {
    assert_eq!(kida(&["sieve"]).status.code(), Some(2));
    assert_eq!(kida(&["sieve", "--bound", "x"]).status.code(), Some(2));
    assert_eq!(
        kida(&["--workers", "0", "sieve", "--bound", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(kida(&["find-t"]).status.code(), Some(2));
    assert_eq!(kida(&["kida", "/nonexistent.toml"]).status.code(), Some(2));
}

#[test]
fn sieve_json_round_trips() {
    let out = kida(&["--format", "json", "sieve", "--bound", "200000"]);
    round_trips::<SieveReport>(&stdout(&out));
}

#[test]
fn worker_count_does_not_change_output() {
    let one = kida(&[
        "--format",
        "json",
        "--workers",
        "1",
        "sieve",
        "--bound",
        "1000000",
    ]);
    let eight = kida(&[
        "--format",
        "json",
        "--workers",
        "8",
        "sieve",
        "--bound",
        "1000000",
    ]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, eight.stdout);
    let a = kida(&[
        "--workers",
        "1",
        "find-t",
        "--primes",
        "63241",
        "--max-candidates",
        "6",
    ]);
    let b = kida(&[
        "--workers",
        "8",
        "find-t",
        "--primes",
        "63241",
        "--max-candidates",
        "6",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn warm_cache_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("primes.txt");
    let cache = cache.to_str().unwrap();
    let plain = kida(&["--format", "json", "sieve", "--bound", "600000"]);
    let cold = kida(&[
        "--format", "json", "sieve", "--bound", "600000", "--cache", cache,
    ]);
    let warm = kida(&[
        "--format", "json", "sieve", "--bound", "600000", "--cache", cache,
    ]);
    assert_eq!(warm.status.code(), Some(0));
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(cold.stdout, warm.stdout);
    assert!(String::from_utf8_lossy(&warm.stderr).contains("read 3 primes"));
    let text = std::fs::read_to_string(dir.path().join("primes.txt")).unwrap();
    assert!(text.starts_with("# kida-primes bound=600000 filter=1"));
}

#[test]
fn admissibility_switch_keeps_the_prime_list() {
    let (on, _) = json(&["sieve", "--bound", "300000"]);
    let (off, _) = json(&["sieve", "--bound", "300000", "--no-admissibility"]);
    assert_eq!(on["primes"], off["primes"]);
    assert_eq!(off["admissibility"], false);
}

#[test]
fn find_t_rejects_a_prime_that_fails_the_filter() {
    let out = kida(&["find-t", "--primes", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c1"));
    assert_eq!(
        kida(&["find-t", "--primes", "63241", "63241"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kida(&["find-t", "--primes", "63240"]).status.code(),
        Some(2)
    );
}

#[test]
fn published_parameter_verifies() {
    let out = kida(&[
        "--format",
        "json",
        "find-t",
        "--primes",
        "63241",
        "63901",
        "--check-t",
        "1059545078",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    round_trips::<FindTReport>(&text);
    let v: Value = serde_json::from_str(&text).unwrap();
    let r = &v["reports"][0];
    assert_eq!(r["status"], "verified");
    assert_eq!(r["lambda_bound"], 4);
    assert_eq!(r["t"], "1059545078");
    let factors: Vec<&str> = r["factorization"]["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|pair| pair[0].as_str().unwrap())
        .collect();
    assert_eq!(
        factors,
        [
            "13",
            "401",
            "63241",
            "63901",
            "21068381440942021",
            "23007701426021875081",
            "24504438741475825204304998173516406719475833143478257969366221",
        ]
    );
    assert_eq!(v["verified"], serde_json::json!(["1059545078"]));
    let shifts = &v["splittings"][0]["shifts"];
    assert_eq!(
        *shifts,
        serde_json::json!([9130, 26600, 28822, 31643, 37410, 60303])
    );
}

#[test]
fn starved_budget_reports_not_found() {
    let out = kida(&[
        "find-t",
        "--primes",
        "63241",
        "63901",
        "--check-t",
        "1059545078",
        "--rho-budget",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("unverified"));
}

#[test]
fn a_non_root_is_rejected() {
    let (v, code) = json(&["find-t", "--primes", "63241", "--check-t", "0"]);
    assert_eq!(code, 4);
    assert_eq!(v["reports"][0]["status"], "rejected");
}

#[test]
fn seed_does_not_change_a_completed_factorization() {
    let run = |seed: &str| {
        kida(&[
            "--format",
            "json",
            "--seed",
            seed,
            "find-t",
            "--primes",
            "63241",
            "--max-candidates",
            "4",
        ])
        .stdout
    };
    assert_eq!(run("0"), run("17"));
}

#[test]
fn kida_split_multiplicative_example() {
    let (v, code) = json(&["kida", &fixture("tower_split_mult.toml")]);
    assert_eq!(code, 0);
    assert_eq!(v["lambda_l"], 4);
    assert_eq!(v["herbrand"]["lambda"], 4);
    assert_eq!(v["herbrand"]["ord_p"], 1);
    assert_eq!(v["places"][0]["class"], "P1");
    assert_eq!(v["places"][1]["class"], "Neither");
}

#[test]
fn kida_unramified_tower_scales_lambda() {
    let (v, code) = json(&["kida", &fixture("tower_unramified.toml")]);
    assert_eq!(code, 0);
    assert_eq!(v["lambda_l"], 18);
    assert!(v["herbrand"].is_null());
}

#[test]
fn kida_p2_place() {
    let (v, _) = json(&["kida", &fixture("tower_p2.toml")]);
    assert_eq!(v["lambda_l"], 13);
    assert_eq!(v["herbrand"]["agrees"], true);
}

#[test]
fn kida_assumption_failures_exit_5() {
    for name in ["tower_infinitely_decomposed.toml", "tower_mu_positive.toml"] {
        let out = kida(&["kida", &fixture(name)]);
        assert_eq!(out.status.code(), Some(5), "{name}");
        assert!(out.stdout.is_empty());
    }
    let out = kida(&["kida", &fixture("tower_mu_positive.toml")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu_zero_cotorsion"));
}

#[test]
fn kida_schema_errors_exit_2() {
    let out = kida(&["kida", &fixture("tower_unknown_key.toml")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    assert_eq!(
        kida(&["kida", &fixture("ledger_exact.toml")]).status.code(),
        Some(2)
    );
}

#[test]
fn ledger_examples() {
    let out = kida(&["ledger", &fixture("ledger_lower_bound.toml")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("λ₂ >= 4"));
    assert!(stdout(&kida(&["ledger", &fixture("ledger_balanced.toml")])).contains("λ₂ = λ₁"));
    let (v, code) = json(&["ledger", &fixture("ledger_exact.toml")]);
    assert_eq!(code, 0);
    assert_eq!(v["lambda_2"], serde_json::json!({"lo": 6, "hi": 6}));
    assert_eq!(
        v["imprimitive_lambda"],
        serde_json::json!({"lo": 8, "hi": 8})
    );
    assert_eq!(v["statement"], "λ₂ = 6");
    assert_eq!(
        kida(&["ledger", &fixture("ledger_negative.toml")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn iwasawa_reports_round_trip() {
    for name in [
        "tower_split_mult.toml",
        "tower_unramified.toml",
        "tower_p2.toml",
    ] {
        round_trips::<KidaReport>(&stdout(&kida(&[
            "--format",
            "json",
            "kida",
            &fixture(name),
        ])));
    }
    for name in [
        "ledger_lower_bound.toml",
        "ledger_exact.toml",
        "ledger_balanced.toml",
    ] {
        round_trips::<LedgerReport>(&stdout(&kida(&[
            "--format",
            "json",
            "ledger",
            &fixture(name),
        ])));
    }
}
