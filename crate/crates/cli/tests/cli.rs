use std::process::{Command, Output};

use serde_json::Value;

fn mf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mf"))
        .args(args)
        .env_remove("MF_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = mf(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn invariants_of_the_square_lattice() {
    let v = json(&["invariants", "--tau", "i"]);
    let (re, im) = complex(&v["j_paper"]);
    assert!((re - 1.0).abs() < 1e-8 && im.abs() < 1e-8, "{re} {im}");
    let (g3, _) = complex(&v["g3"]);
    assert!(g3.abs() < 1e-8);
}

#[test]
fn invariants_from_lambda() {
    let v = json(&["invariants", "--lambda", "-1"]);
    let (re, im) = complex(&v["j_paper"]);
    assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);
    assert_eq!(v["lambda_orbit"].as_array().unwrap().len(), 6);
}

#[test]
fn malformed_json_is_an_input_error() {
    assert_eq!(
        mf(&["invariants", "--curve", "{not json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mf(&["theta", "--tau", "i", "--z", "[[0,"]).status.code(),
        Some(2)
    );
}

#[test]
fn degenerate_lambda_is_an_input_error() {
    assert_eq!(mf(&["invariants", "--lambda", "1"]).status.code(), Some(2));
}

#[test]
fn monodromy_of_the_square_root() {
    let v = json(&["monodromy", "y^2 - z"]);
    assert_eq!(v["image_order"], 2);
    assert_eq!(v["transitive"], true);
    assert_eq!(v["product_is_identity"], true);
}

#[test]
fn monodromy_of_an_elliptic_curve() {
    let v = json(&["monodromy", "y^2 - (1-z^2)(1-z^2/4)"]);
    assert_eq!(v["permutations"].as_array().unwrap().len(), 4);
    assert_eq!(v["image_order"], 2);
    assert_eq!(v["infinity_permutation"], "()");
}

#[test]
fn coset_indices() {
    for (sub, sup, index, galois) in [
        ("gamma2", "full", 6, true),
        ("gamma24", "gamma2", 2, true),
        ("gamma28", "gamma2", 4, true),
    ] {
        let v = json(&["cosets", "--sub", sub, "--super", sup]);
        assert_eq!(v["index"], index, "{sub} in {sup}");
        assert_eq!(v["transitive"], true);
        assert_eq!(v["galois"], galois);
        assert_eq!(v["representatives"].as_array().unwrap().len(), index);
    }
}

#[test]
fn improper_coset_pair_is_rejected() {
    assert_eq!(
        mf(&["cosets", "--sub", "full", "--super", "gamma2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn difference_equation_examples() {
    for (coeffs, want) in [
        (vec!["1"], "z"),
        (vec!["0", "1"], "1/2*z^2 - 1/2*z"),
        (vec!["0", "0", "1"], "1/3*z^3 - 1/2*z^2 + 1/6*z"),
    ] {
        let mut args = vec!["diffeq"];
        args.extend(coeffs);
        let v = json(&args);
        assert_eq!(v["exact"], true);
        assert_eq!(v["g_display"], want);
        assert_eq!(v["residual"], 0.0);
    }
}

#[test]
fn difference_equation_float_coefficients() {
    let v = json(&["diffeq", "0.5+1i", "2"]);
    assert_eq!(v["exact"], false);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn theta_at_the_square_lattice() {
    let v = json(&["theta", "--tau", "i"]);
    let (re, im) = complex(&v["value"]);
    // theta(0, i) = pi^(1/4) / Gamma(3/4)
    assert!(
        (re - 1.086_434_811_213_308).abs() < 1e-12 && im.abs() < 1e-14,
        "{re}"
    );
}

#[test]
fn continuation_of_log_around_the_origin() {
    let v = json(&[
        "continue",
        "--germ",
        "log",
        "--path",
        "[[1,0],[0,1],[-1,0],[0,-1],[1,0]]",
    ]);
    let (re, im) = complex(&v["end_value"]);
    assert!(re.abs() < 1e-9 && (im - 2.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn continuation_csv_has_a_row_per_vertex() {
    let out = mf(&[
        "--format",
        "csv",
        "continue",
        "--germ",
        "sqrt",
        "--path",
        "[[1,0],[2,0],[3,0]]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("re,im,value_re,value_im"));
}

#[test]
fn verify_suites_pass() {
    for suite in [
        "wp-ode",
        "legendre-relations",
        "theta-fe",
        "riemann-relations",
        "monodromy-theorem",
    ] {
        let v = json(&["verify", suite]);
        assert_eq!(v["pass"], true, "{suite}: {v}");
    }
}

#[test]
fn unknown_suite_is_an_input_error() {
    assert_eq!(mf(&["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn seed_determines_output() {
    let a = mf(&["--seed", "3", "verify", "wp-ode"]).stdout;
    let b = mf(&["--seed", "3", "--threads", "4", "verify", "wp-ode"]).stdout;
    assert_eq!(a, b);
}
