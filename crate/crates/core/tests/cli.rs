use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

use crossint::cli::{run_with, EXIT_ERROR, EXIT_FALSE, EXIT_OK};
use crossint::constructions::legal_params;
use crossint::fam::decode_pair;

fn schema(name: &str) -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    JSONSchema::compile(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name} schema rejects output: {msgs:?}\n{v:#}");
}

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(std::iter::once("crossint").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\nstdout: {out}\nstderr: {err}"));
    (code, v)
}

fn binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossint")).args(args).output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_verify_classify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let mut count = 0;
    for ell in 0..=3usize {
        for n in 1..=8usize {
            for p in legal_params(n, ell) {
                let file = dir.path().join(format!("c_{n}_{ell}_{}_{}_{}.fam", p.kappa, p.tau, p.nprime));
                let (kappa, tau, nprime) = (p.kappa.to_string(), p.tau.to_string(), p.nprime.to_string());
                let (n_s, ell_s) = (n.to_string(), ell.to_string());
                let args = [
                    "construct", "--kind", "canonical", "--n", &n_s, "--ell", &ell_s, "--kappa", &kappa, "--tau", &tau,
                    "--nprime", &nprime, "-o", path_str(&file), "--json",
                ];
                let (code, v) = run_json(&args);
                assert_eq!(code, EXIT_OK, "{p}");
                assert_valid("construct", &v);
                assert_eq!(v["cross_intersecting"], true);
                assert_eq!(v["product"].as_u64().unwrap() as u128, p.product());

                let (code, v) = run_json(&["verify", path_str(&file), "--json"]);
                assert_eq!(code, EXIT_OK, "{p}");
                assert_valid("verify", &v);

                let (code, v) = run_json(&["classify", path_str(&file), "--json"]);
                assert_eq!(code, EXIT_OK, "{p}");
                assert_valid("classify", &v);
                assert_eq!(v["matched"], true, "{p}");
                assert_eq!(v["extension"], ell == 0);
                count += 1;
            }
        }
    }
    assert!(count > 250);
}

#[test]
fn search_reports_match_schema_and_values() {
    let (code, v) = run_json(&["search", "--n", "4", "--ell", "2", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_valid("search", &v);
    assert_eq!(v["value"], 6);
    assert_eq!(v["conjectured_max"], 6);

    let (_, v) = run_json(&["search", "--n", "5", "--ell", "1", "--all-optima", "--workers", "3", "--json"]);
    assert_valid("search", &v);
    assert_eq!(v["value"], 16);
    assert_eq!(v["witnesses"].as_array().unwrap().len() as u64, v["optima_found"].as_u64().unwrap());
    assert_eq!(v["workers"], 3);

    let (_, v) = run_json(&["search", "--n", "3", "--ell", "2", "--prune", "none", "--json"]);
    assert_valid("search", &v);
    assert_eq!(v["value"], 3);
    assert_eq!(v["conjectured_max"], Value::Null);
    assert_eq!((v["prune_product"].clone(), v["prune_dimension"].clone()), (false.into(), false.into()));

    let (_, v) = run_json(&["search", "--n", "4", "--ell", "1", "--prune", "dimension", "--json"]);
    assert_eq!((v["prune_product"].clone(), v["prune_dimension"].clone()), (false.into(), true.into()));
    assert_eq!(v["value"], 8);
}

#[test]
fn search_witness_file_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("w.fam");
    let (code, _, _) = run(&["search", "--n", "5", "--ell", "2", "-o", path_str(&file)]);
    assert_eq!(code, EXIT_OK);
    let p = decode_pair(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(p.product(), 12);
    let (code, v) = run_json(&["analyze", path_str(&file), "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_valid("analyze", &v);
    assert!(v["k_plus_h"].as_u64().unwrap() <= 5);
}

#[test]
fn bounds_and_analyze_reports() {
    let (code, v) = run_json(&["bounds", "--n", "10", "--ell", "3", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_valid("bounds", &v);
    assert_eq!(v["sperner"], 252);
    assert_eq!(v["frankl_rodl"], 512);
    assert_eq!(v["conjectured_max"], 320);

    let (_, v) = run_json(&["bounds", "--n", "3", "--ell", "2", "--json"]);
    assert_valid("bounds", &v);
    assert_eq!(v["construction_lower_bound"], Value::Null);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.fam");
    let args = ["construct", "--kind", "canonical", "--n", "5", "--ell", "2", "--kappa", "3", "--tau", "2", "-o", path_str(&file)];
    assert_eq!(run(&args).0, EXIT_OK);
    let (code, v) = run_json(&["analyze", path_str(&file), "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_valid("analyze", &v);
    assert_eq!(v["k_plus_h"], 5);
    assert_eq!(v["duality"], true);
}

#[test]
fn matrix_and_acz_constructions() {
    for variant in ["omega", "o1", "o2"] {
        let (ell, n) = match variant {
            "omega" => ("2", "6"),
            "o1" => ("2", "5"),
            _ => ("2", "6"),
        };
        let (code, v) = run_json(&["construct", "--kind", "matrix", "--variant", variant, "--n", n, "--ell", ell, "--json"]);
        assert_eq!(code, EXIT_OK, "{variant}");
        assert_valid("construct", &v);
        assert_eq!(v["variant"], variant);
    }
    let (code, v) = run_json(&["construct", "--kind", "acz", "--n", "6", "--ell", "2", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_valid("construct", &v);
    assert_eq!(v["product"], 24);

    let (code, _, err) = run(&["construct", "--kind", "matrix", "--variant", "o1", "--n", "2", "--ell", "1"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("no legal instance"));
}

#[test]
fn classify_all_optima_report() {
    let (code, v) = run_json(&["classify", "--n", "5", "--ell", "2", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_valid("optima", &v);
    assert_eq!(v["unmatched"], 0);
    assert_eq!(v["value"], 12);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fam");
    std::fs::write(&bad, "n 2\nA: 1\n%%\nB: 2\nell 1\n").unwrap();
    let (code, v) = run_json(&["verify", path_str(&bad), "--json"]);
    assert_eq!(code, EXIT_FALSE);
    assert_eq!(v["cross_intersecting"], false);
    assert_eq!(run(&["classify", path_str(&bad)]).0, EXIT_ERROR);

    let sub = dir.path().join("sub.fam");
    std::fs::write(&sub, "n 2\nA: 1\n%%\nB: 1\nell 1\n").unwrap();
    assert_eq!(run(&["classify", path_str(&sub)]).0, EXIT_FALSE);

    let garbage = dir.path().join("garbage.fam");
    std::fs::write(&garbage, "hello\n").unwrap();
    assert_eq!(run(&["verify", path_str(&garbage)]).0, EXIT_ERROR);
    assert_eq!(run(&["verify", path_str(&dir.path().join("missing.fam"))]).0, EXIT_ERROR);
    assert_eq!(run(&["search", "--n", "9", "--ell", "1"]).0, EXIT_ERROR);
    assert_eq!(run(&["search", "--n", "3", "--ell", "1", "--workers", "0"]).0, EXIT_ERROR);
    assert_eq!(run(&["search", "--n", "3", "--ell", "1", "--prune", "none", "--prune", "product"]).0, EXIT_ERROR);
    assert_eq!(run(&["construct", "--kind", "canonical", "--n", "4", "--ell", "1"]).0, EXIT_ERROR);
    assert_eq!(run(&["frobnicate"]).0, EXIT_ERROR);
    assert_eq!(run(&["classify", "--n", "4"]).0, EXIT_ERROR);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_exit_codes_and_selftest() {
    let out = binary(&["bounds", "--n", "6", "--ell", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("frankl_rodl"));
    assert_eq!(binary(&["search", "--n", "0", "--ell", "0"]).status.code(), Some(EXIT_ERROR));

    let a = binary(&["selftest", "--seed", "7", "--cases", "50"]);
    let b = binary(&["selftest", "--seed", "7", "--cases", "50"]);
    assert_eq!(a.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn hard_cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_crossint"))
        .args(["search", "--n", "9", "--ell", "4", "--json"])
        .env("CROSSINT_HARD_CAP", "9")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid("search", &v);
    assert!(v["value"].as_u64().unwrap() >= 70 * 2);

    let out = Command::new(env!("CARGO_BIN_EXE_crossint"))
        .args(["search", "--n", "3", "--ell", "1"])
        .env("CROSSINT_HARD_CAP", "13")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
}
