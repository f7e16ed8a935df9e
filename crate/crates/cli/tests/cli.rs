//! End-to-end runs of the binary against the checked-in fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pifinite"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn dw_surface_z2_genus_2_is_8() {
    let out = run(&[
        "dw",
        "surface",
        "--group",
        fixture("Z2.json").to_str().unwrap(),
        "--genus",
        "2",
        "--format",
        "json",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["value"]["conductor"], 1);
    assert_eq!(json["value"]["coeffs"][0][0], "8");
    assert_eq!(json["value"]["coeffs"][0][1], "1");
    assert_eq!(json["approx"][0], 8.0);
}

#[test]
fn dw_surface_twisted_klein_torus_is_1() {
    let out = run(&[
        "dw",
        "surface",
        "--group",
        fixture("V4.json").to_str().unwrap(),
        "--genus",
        "1",
        "--cocycle",
        fixture("klein_cocycle.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["value"]["coeffs"][0][0], "1");
    assert_eq!(json["route"], "frobenius_genus");
}

#[test]
fn dw_manifold_presentation_matches_surface() {
    let out = run(&[
        "dw",
        "manifold",
        "--group",
        fixture("S3.json").to_str().unwrap(),
        "--presentation",
        fixture("genus2_presentation.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let json = stdout_json(&out);
    // |Hom(pi_1 Sigma_2, S3)| / 6
    let num: i64 = json["value"]["coeffs"][0][0].as_str().unwrap().parse().unwrap();
    assert!(num > 0);
    let surf = run(&[
        "dw",
        "surface",
        "--group",
        fixture("S3.json").to_str().unwrap(),
        "--genus",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(stdout_json(&surf)["value"], json["value"]);
}

#[test]
fn dw_sphere_algebra_s3() {
    let out = run(&[
        "dw",
        "sphere-algebra",
        "--group",
        fixture("S3.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["dim"], 3);
    assert_eq!(json["semisimple"], true);
    assert_eq!(json["window_invertible"], true);
}

#[test]
fn dw_distinguish_directories() {
    let out = run(&[
        "dw",
        "distinguish",
        "--manifolds",
        fixture("manifolds").to_str().unwrap(),
        "--theories",
        fixture("theories").to_str().unwrap(),
        "--format",
        "json",
        "--parallel",
        "2",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["blocks"].as_array().unwrap().len(), 3);
    assert_eq!(json["values"][0][0]["coeffs"][0][0], "2");
    assert_eq!(json["values"][1][0]["coeffs"][0][0], "8");
    assert_eq!(json["values"][2][0]["coeffs"][0][0], "32");
}

#[test]
fn moebius_divisor_poset() {
    let out = run(&[
        "moebius",
        "--category",
        fixture("divisors12.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["product_is_identity"], true);
    // mu(1, 12) = 0: divisor order 1,2,3,4,6,12 -> entry (5, 0)
    assert_eq!(json["moebius"][5][0]["coeffs"][0][0], "0");
}

#[test]
fn pairing_gram_finset_rank_7() {
    let out = run(&[
        "pairing",
        "gram",
        "--category",
        fixture("finset6.json").to_str().unwrap(),
        "--rows",
        "0..6",
        "--cols",
        "0..6",
        "--format",
        "json",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["rank"], 7);
    assert_eq!(json["gram"][3][2]["coeffs"][0][0], "9");
}

#[test]
fn cardinality_pi_data() {
    let out = run(&["cardinality", "--pi", "2,3", "--format", "json"]);
    let json = stdout_json(&out);
    assert_eq!(json["value"]["coeffs"][0][0], "3");
    assert_eq!(json["value"]["coeffs"][0][1], "2");
}

#[test]
fn frobenius_dual_numbers_report() {
    let out = run(&[
        "frobenius",
        "--algebra",
        fixture("dual_numbers.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["semisimple"], false);
    assert_eq!(json["radical"], 1);
    assert_eq!(json["window_invertible"], false);
}

#[test]
fn selftest_single_criterion_is_deterministic() {
    let first = run(&["selftest", "--criterion", "5", "--format", "json", "--seed", "7"]);
    let second = run(&["selftest", "--criterion", "5", "--format", "json", "--seed", "7"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let json = stdout_json(&first);
    assert_eq!(json["criteria"][0]["passed"], true);
}

#[test]
fn malformed_input_exits_with_pointer() {
    let dir = std::env::temp_dir().join("pifinite_bad_input");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ \"order\": 2, \"mul\": [[0, 1]] }").unwrap();
    let out = run(&["dw", "surface", "--group", bad.to_str().unwrap(), "--genus", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad.json"), "stderr should name the file: {}", stderr);
}

#[test]
fn exceeded_bound_names_the_bound() {
    let out = run(&[
        "dw",
        "surface",
        "--group",
        fixture("S3.json").to_str().unwrap(),
        "--genus",
        "3",
        "--max-hom-enum",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("100"), "stderr should name the bound: {}", stderr);
}
