use assert_cmd::Command;
use serde_json::Value;
use std::io::Write;

fn cli() -> Command {
    Command::cargo_bin("ellip-limits").expect("binary")
}

fn json_of(args: &[&str]) -> Value {
    let out = cli().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).expect("JSON on stdout")
}

fn value(v: &Value) -> (f64, f64) {
    let re = v["value"][0].as_f64().expect("re");
    let im = v["value"][1].as_f64().expect("im");
    (re, im)
}

fn params_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(text.as_bytes()).expect("write");
    f
}

#[test]
fn empty_partition_interpolates_to_one() {
    let v = json_of(&["eval", "interp", "--n", "1", "--lambda", "[]"]);
    let (re, im) = value(&v);
    assert!((re - 1.0).abs() < 1e-14 && im.abs() < 1e-14);
    assert_eq!(v["target"], "interp");
    assert_eq!(v["inputs"]["n"], 1);
}

#[test]
fn biorthogonal_function_is_one_at_the_principal_point() {
    let (re, im) = value(&json_of(&["eval", "biortho", "--lambda", "[1]", "--at", "principal"]));
    assert!((re - 1.0).abs() < 1e-9 && im.abs() < 1e-9, "{re}{im:+}i");
}

#[test]
fn pastro_expansions_agree() {
    let get = |e: &str| value(&json_of(&["eval", "pastro-p", "--lambda", "[2,1]", "--expansion", e]));
    let (a, b, c) = (get("t2"), get("t3"), get("t0"));
    let scale = a.0.hypot(a.1);
    assert!((a.0 - b.0).hypot(a.1 - b.1) <= 1e-9 * scale);
    assert!((a.0 - c.0).hypot(a.1 - c.1) <= 1e-9 * scale);
}

#[test]
fn params_file_overrides_defaults() {
    let f = params_file(r#"{"q": "0.3+0.1i", "t": [0.4, -0.2], "p": 0.02, "lambda": [1], "z": [0.5, "0.2-0.6i"]}"#);
    let v = json_of(&["eval", "interp", "--params", f.path().to_str().unwrap()]);
    assert_eq!(v["inputs"]["q"], serde_json::json!([0.3, 0.1]));
    assert_eq!(v["inputs"]["n"], 2);
    assert_eq!(v["inputs"]["lambda"], serde_json::json!([1]));
}

#[test]
fn top_family_matches_macdonald_target() {
    let mac = value(&json_of(&["eval", "macdonald", "--lambda", "[2,1]", "--n", "2"]));
    let probe = json_of(&["limit", "probe", "--target", "interp", "--family", "T", "--lambda", "[2,1]", "--n", "2"]);
    let lc = (probe["expected"]["lc"][0].as_f64().unwrap(), probe["expected"]["lc"][1].as_f64().unwrap());
    assert!((mac.0 - lc.0).hypot(mac.1 - lc.1) <= 1e-9 * lc.0.hypot(lc.1));
    assert_eq!(probe["converged"], true);
}

#[test]
fn malformed_input_exits_2() {
    cli().args(["eval", "interp", "--lambda", "[1,2]"]).assert().code(2);
    cli().args(["limit", "classify", "--v", "1/0,0,0"]).assert().code(2);
    cli().args(["limit", "classify", "--v", "1,2"]).assert().code(2);
    let f = params_file(r#"{"q": "0.3+0.1i", "bogus": 1}"#);
    cli().args(["eval", "interp", "--params", f.path().to_str().unwrap()]).assert().code(2);
    let f = params_file("not json");
    cli().args(["eval", "interp", "--params", f.path().to_str().unwrap()]).assert().code(2);
    cli().args(["verify", "--suite", "nonesuch"]).assert().code(2);
    cli().args(["verify", "--suite", "kernels", "--tol", "-1"]).assert().code(2);
}

#[test]
fn pole_exits_3_and_names_the_factor() {
    let f = params_file(r#"{"t": 1}"#);
    let out = cli().args(["eval", "interp", "--lambda", "[1]", "--params", f.path().to_str().unwrap()]).assert().code(3);
    let err = String::from_utf8_lossy(&out.get_output().stderr).to_string();
    assert!(err.contains("pole") && err.contains("factor"), "{err}");
}

#[test]
fn classify_names_vertex_and_octahedron() {
    let v = json_of(&["limit", "classify", "--v", "0,0,0"]);
    assert_eq!(v["family"], "V");
    let s = json_of(&["limit", "classify", "--v", "1/2,1/2,0"]);
    assert_eq!(s["family"], "S");
    assert_eq!(s["octahedral"], true);
}

#[test]
fn verify_kernels_passes_and_is_byte_stable() {
    let run = || cli().args(["verify", "--suite", "kernels", "--trials", "50", "--seed", "7"]).assert().success().get_output().stdout.clone();
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["trials"], 50);
}

#[test]
fn verify_is_independent_of_thread_count() {
    let run = |k: &str| {
        cli()
            .env("ELLIP_LIMITS_THREADS", k)
            .args(["verify", "--suite", "csymbols", "--trials", "8", "--seed", "3"])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(run("1"), run("4"));
    cli().env("ELLIP_LIMITS_THREADS", "many").args(["verify", "--suite", "kernels"]).assert().code(2);
}

#[test]
fn verify_exits_1_on_failures() {
    let out = cli().args(["verify", "--suite", "kernels", "--trials", "5", "--tol", "1e-300"]).assert().code(1);
    let v: Value = serde_json::from_slice(&out.get_output().stdout).unwrap();
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_csv_has_header_and_suite_row() {
    let out = cli().args(["verify", "--suite", "kernels", "--trials", "2", "--csv"]).assert().success();
    let text = String::from_utf8_lossy(&out.get_output().stdout).to_string();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("kind,suite,"));
    assert!(lines.next().unwrap().starts_with("suite,kernels,2,"));
}

#[test]
fn timing_is_opt_in() {
    let v = json_of(&["verify", "--suite", "kernels", "--trials", "2"]);
    assert!(v["elapsed"].is_null());
    let v = json_of(&["verify", "--suite", "kernels", "--trials", "2", "--timing"]);
    assert!(v["elapsed"].as_f64().is_some());
}

#[test]
fn omega_probe_matches_both_single_term_forms() {
    for (lam, kap, e, form) in [
        ("[2,1]", "[1]", "1/8,3/8,1/4,0,1/2,1/8", "mu=lambda"),
        ("[2,1]", "[1]", "1/2,0,1/4,1/4,1/4,0", "mu=kappa"),
    ] {
        let v = json_of(&["limit", "probe", "--target", "omega", "--lambda", lam, "--kappa", kap, "--exponents", e]);
        assert_eq!(v["form"], form);
        assert_eq!(v["probe"]["val"], "0");
        assert_eq!(v["converged"], true);
        assert!(v["rel_err"].as_f64().unwrap() < 1e-3);
    }
    cli()
        .args(["limit", "probe", "--target", "omega", "--lambda", "[1]", "--exponents", "1/4,1/8,0,1/2,3/8,1/8"])
        .assert()
        .code(2);
}
