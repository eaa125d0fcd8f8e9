use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const CASE1: &str =
    "[[0,1,0,0,0,0],[0,1,0,0,0,0],[1,0,0,1,1,1],[0,0,1,0,0,0],[0,0,1,0,0,0],[0,0,1,0,0,0]]";
const CASE2: &str = "[[0,1,0,0,0,0,0,0,0,0,0,0],[0,1,0,0,0,0,0,0,0,0,0,0],[1,0,1,1,1,0,0,0,1,1,0,0],\
[0,0,1,0,0,0,0,0,0,0,0,0],[0,0,1,0,0,0,0,0,0,0,0,0],[1,0,0,1,1,0,0,0,1,1,0,0],[1,0,0,1,1,0,0,0,1,1,0,0],\
[0,0,0,0,0,1,1,1,0,0,1,1],[0,0,0,0,0,0,0,1,0,0,0,0],[0,0,0,0,0,0,0,1,0,0,0,0],[0,0,0,0,0,1,1,0,0,0,1,1],\
[0,0,0,0,0,1,1,0,0,0,1,1]]";
const GOLDEN: &str = "[[1,1],[1,0]]";
const SWAP: &str = "[[0,1],[1,0]]";

fn nadyn(args: &[&str], stdin: &str) -> Output {
    nadyn_env(args, stdin, &[])
}

fn nadyn_env(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nadyn"));
    cmd.args(args)
        .env_remove("NADYN_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Writes `contents` to a fresh file under the target temp dir.
fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("nadyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn zeta_quotients() {
    let out = nadyn(&["zeta", "--matrix", "-", "--excluded", "2"], CASE1);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["human"], "(1+t)/(1-3t^2)");
    assert_eq!(v["numerator_divides_product"], true);
    assert_eq!(v["coprime"], true);

    let v = json(&nadyn(
        &["zeta", "--matrix", "-", "--excluded", "1,1"],
        CASE2,
    ));
    assert_eq!(v["human"], "1/(1-3t)");

    let v = json(&nadyn(&["zeta", "--matrix", "-"], GOLDEN));
    assert_eq!(v["human"], "1/(1-t-t^2)");
}

#[test]
fn entropy_of_matrices() {
    let v = json(&nadyn(&["entropy", "--matrix", "-"], CASE1));
    assert_eq!(v["entropy"], "0.549306144");
    let v = json(&nadyn(&["entropy", "--matrix", "-"], CASE2));
    assert_eq!(v["entropy"], "1.09861229");
}

#[test]
fn tolerance_from_environment() {
    let coarse = json(&nadyn_env(
        &["entropy", "--matrix", "-"],
        GOLDEN,
        &[("NADYN_TOL", "1/8")],
    ));
    let fine = json(&nadyn(&["entropy", "--matrix", "-"], GOLDEN));
    let width = |v: &Value| {
        let lo: f64 = parse_rational(v["leading_root"]["lo"].as_str().unwrap());
        let hi: f64 = parse_rational(v["leading_root"]["hi"].as_str().unwrap());
        hi - lo
    };
    assert!(width(&coarse) <= 0.125 && width(&coarse) > 1e-6);
    assert!(width(&fine) <= 1e-12);
    assert_eq!(
        code(&nadyn_env(
            &["entropy", "--matrix", "-"],
            GOLDEN,
            &[("NADYN_TOL", "zero")]
        )),
        2
    );
}

fn parse_rational(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

#[test]
fn golden_realization_round_trip() {
    let bundle = temp_file("golden.json", "");
    let out = nadyn(
        &[
            "realize", "--matrix", "-", "--p", "2", "--seeds", "paper", "--M", "14", "--output",
            &bundle,
        ],
        GOLDEN,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    let terms: Vec<&str> = v["map"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["human"].as_str().unwrap())
        .collect();
    assert_eq!(
        terms,
        [
            "2^7*z/(2^7-z^14)",
            "2^33*(z+3)/(2^35-(z-1)^14)",
            "2^21*(z-2)/(2^21-(z-3)^14)"
        ]
    );
    assert_eq!(v["m_min"], 8);

    let out = nadyn(&["verify", "--bundle", &bundle], "");
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["ok"], true);

    let out = nadyn(&["analyze", "--system", &bundle], "");
    let v = json(&out);
    assert_eq!(v["zeta_human"], "1/(1-t-t^2)");
    assert_eq!(v["adjacency"]["rows"], serde_json::json!([[1, 1], [1, 0]]));
    assert_eq!(v["entropy_decimal"], "0.481211825");
}

#[test]
fn tampered_bundle_fails_verification() {
    let out = nadyn(
        &["realize", "--matrix", "-", "--p", "2", "--seeds", "paper"],
        GOLDEN,
    );
    let mut v = json(&out);
    v["map"]["terms"][1]["numerator"]["coeffs"][0] = "7".into();
    let bundle = temp_file("tampered.json", &v.to_string());
    let out = nadyn(&["verify", "--bundle", &bundle], "");
    assert_eq!(code(&out), 5);
}

#[test]
fn swap_realization() {
    let out = nadyn(
        &[
            "realize", "--matrix", "-", "--p", "2", "--seeds", "paper", "--M", "6",
        ],
        SWAP,
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not_markov"));
    let v = json(&out);
    assert_eq!(
        v["human"],
        "2^3*z/(2^3-z^6) + 2^14*(z+5)/(2^15-(z-1)^6) + 2^14*(z-1)/(2^15-(z-3)^6)"
    );
    let bundle = temp_file("swap.json", &v.to_string());
    let e = json(&nadyn(&["entropy", "--system", &bundle], ""));
    assert_eq!(e["entropy"], "0");
    assert_eq!(e["exact"], true);
}

#[test]
fn exit_codes() {
    let identity = r#"{"n":2,"rows":[[1,0],[0,1]]}"#;
    assert_eq!(
        code(&nadyn(&["realize", "--matrix", "-", "--p", "2"], identity)),
        4
    );
    assert_eq!(
        code(&nadyn(
            &["verify", "--matrix", "-", "--p", "2", "--seeds", "paper", "--M", "4"],
            GOLDEN
        )),
        5
    );
    assert_eq!(code(&nadyn(&["zeta", "--matrix", "-"], "[[1,2],[3]]")), 2);
    assert_eq!(code(&nadyn(&["zeta", "--matrix", "-"], "not json")), 2);
    assert_eq!(
        code(&nadyn(&["zeta", "--matrix", "/nonexistent/file.json"], "")),
        2
    );
    assert_eq!(
        code(&nadyn(&["realize", "--matrix", "-", "--p", "4"], GOLDEN)),
        2
    );
    assert_eq!(
        code(&nadyn(
            &["realize", "--matrix", "-", "--p", "2", "--M", "7"],
            GOLDEN
        )),
        2
    );

    // One split is needed, and none is allowed.
    let system = r#"{"p":2,"pieces":[
        {"domain":{"center":"1","radius_exp":"3"},"alpha":"1","beta":"2"},
        {"domain":{"center":"3","radius_exp":"2"},"alpha":"1/2","beta":"-1/2"}]}"#;
    assert_eq!(
        code(&nadyn(
            &["entropy", "--system", "-", "--cap-splits", "0"],
            system
        )),
        3
    );
    assert_eq!(code(&nadyn(&["analyze", "--system", "-"], system)), 0);
}

#[test]
fn multigraph_realization_uses_subdivision() {
    let b = "[[2,1],[1,1]]";
    assert_eq!(
        code(&nadyn(&["realize", "--matrix", "-", "--p", "2"], b)),
        2
    );
    let out = nadyn(
        &[
            "realize", "--matrix", "-", "--p", "2", "--n0", "2", "--j0", "1",
        ],
        b,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["spectral"]["ok"], true);
}

#[test]
fn augment_and_admissible() {
    let v = json(&nadyn(&["augment", "--matrix", "-", "--n", "2"], "[[2]]"));
    assert_eq!(
        v["rows"],
        serde_json::json!([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    );

    let v = json(&nadyn(
        &["admissible", "--matrix", "-"],
        "[[1,1,1],[1,1,1],[1,1,0]]",
    ));
    assert_eq!(v["report"]["ok"], true);
    assert_eq!(
        v["hierarchy"]["classes"][1]["members"],
        serde_json::json!([0, 1])
    );
}

#[test]
fn bundled_examples() {
    for name in ["golden", "swap", "tame", "wild"] {
        let out = nadyn(&["examples", "--name", name], "");
        assert_eq!(
            code(&out),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(json(&out)["ok"], true);
    }
    assert_eq!(code(&nadyn(&["examples", "--name", "unknown"], "")), 2);
}
