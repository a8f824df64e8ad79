//! The binary, run as a subprocess so each invocation starts with empty memos.

use std::fs;
use std::path::Path;
use std::process::Command;

use moduli::cache::{CacheStore, LoadStatus, CACHE_VERSION};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn moduli(cache: Option<&Path>, args: &str) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_moduli"));
    cmd.args(args.split_whitespace());
    match cache {
        Some(p) => cmd.env("MODULI_CACHE", p),
        None => cmd.arg("--no-cache"),
    };
    let out = cmd.output().expect("spawn moduli");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(args: &str) -> String {
    let r = moduli(None, args);
    assert_eq!(r.code, 0, "{args}: {}", r.stderr);
    r.stdout
}

#[test]
fn psi_prints_reduced_fractions() {
    assert_eq!(ok("psi --g 1 --d 1"), "1/24\n");
    assert_eq!(ok("psi --g 0 --d 0,0,0"), "1\n");
    assert_eq!(ok("psi --g 0 --d 0,0,1"), "0\n");
    for route in ["dvv", "effective", "npoint"] {
        assert_eq!(ok(&format!("psi --g 2 --d 2,3 --route {route}")), "29/5760\n", "{route}");
    }
}

#[test]
fn other_commands_print_known_values() {
    assert_eq!(ok("hodge --g 2 --lambda 1,1,1"), "1/2880\n");
    assert_eq!(ok("hodge --g 2 --lambda 1,1,1 --route l3g"), "1/2880\n");
    assert_eq!(ok("wp --g 1 --n 1"), "1/24\n");
    assert_eq!(ok("faber-rank --g 18 --k 8"), "16\n");
    assert_eq!(ok("mocktheta --n 15"), "82\n");
    assert_eq!(ok("mocktheta --n 15 --route alt"), "82\n");
    assert_eq!(ok("rspin --r 3 --g 1 --ins 1,0"), "1/12\n");
    assert_eq!(ok("rspin --r 4 --g 2 --ins 2,1 2,1"), "11/960\n");
    assert_eq!(ok("npoint --g 1 --n 2 --d 2,0"), "1/24\n");
}

#[test]
fn faber_rank_table_row_nine() {
    let out = ok("table faber-rank --g 2..12 --format csv");
    assert!(out.lines().any(|l| l == "9,14,\"1,1,2,3,3,2,1,1\""), "{out}");
    assert_eq!(out.lines().count(), 12);
}

#[test]
fn omega_table_column() {
    let out = ok("table omega --g 18..23 --format csv");
    let col: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(col, ["101", "122", "146", "176", "210", "248"]);
}

#[test]
fn rspin_table_genus_one() {
    let out = ok("table rspin3 --g 1 --format records");
    assert!(out.contains(r#"{"g":"1","correlator":"<t1,0>","value":"1/12"}"#), "{out}");
}

#[test]
fn verify_suites_pass() {
    for args in [
        "verify dvv-vs-npoint --bound 10",
        "verify mock-garthwaite --n 100",
        "verify rspin-tables",
        "verify hodge-closed-forms --bound 3",
        "verify wp-routes --bound 2",
        "verify faber-fa3 --bound 3",
    ] {
        let out = ok(args);
        assert!(out.lines().skip(1).all(|l| l.ends_with("PASS")), "{args}: {out}");
    }
}

#[test]
fn garthwaite_output_labels_the_float() {
    let out = ok("mocktheta --n 100 --route garthwaite --format records");
    assert!(out.contains(r#""float_partial_sum":"1.99500199"#), "{out}");
    assert!(out.contains(r#""exact":"1995002""#), "{out}");
}

#[test]
fn exit_codes() {
    let code = |a: &str| moduli(None, a).code;
    assert_eq!(code("psi --g 1 --d 1"), 0);
    assert_eq!(code("--help"), 0);
    assert_eq!(code("psi --g 1"), 1);
    assert_eq!(code("psi --g 1 --d x"), 1);
    assert_eq!(code("psi --g 0 --d 0,0"), 1);
    assert_eq!(code("psi --g 1 --d 1 --route magic"), 1);
    assert_eq!(code("verify nope"), 1);
    assert_eq!(code("table omega --g 9..3"), 1);
    assert_eq!(code("rspin --r 7 --g 1 --ins 1,0"), 1);
    assert_eq!(code("psi --g 5 --d 13 --bound 10"), 3);
    assert_eq!(code("table faber-rank --g 2..99"), 3);
    assert_eq!(code("mocktheta --n 100 --route garthwaite --k-max 3"), 2);
}

#[test]
fn output_is_deterministic_across_runs_and_formats() {
    for fmt in ["text", "csv", "records"] {
        for args in ["npoint --g 2 --n 3", "table rspin4 --g 1..2", "verify wp-routes --bound 2"] {
            let a = format!("{args} --format {fmt}");
            assert_eq!(ok(&a), ok(&a), "{a}");
        }
    }
}

#[test]
fn cache_cold_warm_and_corrupted_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub/cache.txt");
    let cmds = ["psi --g 3 --d 2,2,3,3", "rspin --r 4 --g 2 --ins 2,1 2,1", "npoint --g 2 --n 2"];
    let run_all = || -> Vec<String> {
        cmds.iter()
            .map(|a| {
                let r = moduli(Some(&path), a);
                assert_eq!(r.code, 0, "{a}: {}", r.stderr);
                r.stdout
            })
            .collect()
    };
    let cold = run_all();
    let store = CacheStore::open(&path).unwrap();
    assert_eq!(store.status, LoadStatus::Loaded);
    assert!(store.entries.keys().any(|k| k.starts_with("psi:")));
    assert!(store.entries.contains_key("rspin:4;2;2,1;2,1"));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(&format!("{CACHE_VERSION}\n")));

    assert_eq!(run_all(), cold);
    assert_eq!(fs::read_to_string(&path).unwrap(), text, "warm runs add nothing");

    fs::write(&path, "moduli-cache 1\npsi:1;1=1/24\n#?!garbage\n").unwrap();
    assert_eq!(run_all(), cold);
    assert_eq!(CacheStore::open(&path).unwrap().status, LoadStatus::Loaded);

    fs::write(&path, "moduli-cache 0\npsi:1;1=7\n").unwrap();
    assert_eq!(run_all(), cold);
    let rebuilt = CacheStore::open(&path).unwrap();
    assert_eq!(rebuilt.status, LoadStatus::Loaded);
    assert_eq!(rebuilt.entries.get("psi:1;1").map(String::as_str), Some("1/24"));
}

#[test]
fn verify_reports_a_poisoned_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.txt");
    fs::write(&path, format!("{CACHE_VERSION}\npsi:1;1=5\n")).unwrap();
    let r = moduli(Some(&path), "verify dvv-vs-npoint --bound 2");
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert!(r.stdout.contains("FAIL"));
}
