//! The acceptance suite: one test per criterion, each printing its pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! full matrix.

use pifinite::selftest::{run_criterion, DEFAULT_SEED};

fn run(id: usize) {
    let report = run_criterion(id, DEFAULT_SEED);
    println!(
        "criterion {:2} [{}] {}: {}",
        report.id,
        if report.passed { "PASS" } else { "FAIL" },
        report.name,
        report.details
    );
    assert!(report.passed, "criterion {} failed: {}", report.id, report.details);
}

#[test]
fn criterion_01_finset_pairing_matrix() {
    run(1);
}

#[test]
fn criterion_02_lovasz_factorization() {
    run(2);
}

#[test]
fn criterion_03_moebius_divisor_posets() {
    run(3);
}

#[test]
fn criterion_04_finset4_factorized_inverse() {
    run(4);
}

#[test]
fn criterion_05_span_functoriality() {
    run(5);
}

#[test]
fn criterion_06_fubini() {
    run(6);
}

#[test]
fn criterion_07_norm_maps() {
    run(7);
}

#[test]
fn criterion_08_untwisted_three_way() {
    run(8);
}

#[test]
fn criterion_09_twisted_klein() {
    run(9);
}

#[test]
fn criterion_10_sphere_semisimplicity() {
    run(10);
}

#[test]
fn criterion_11_span_vs_center() {
    run(11);
}

#[test]
fn criterion_12_pontryagin_nondegeneracy() {
    run(12);
}

#[test]
fn criterion_13_pairing_factorization_identities() {
    run(13);
}

#[test]
fn criterion_14_postnikov_factorizations() {
    run(14);
}

#[test]
fn criterion_15_dw_as_pairing() {
    run(15);
}

#[test]
fn criterion_16_distinguish_surfaces() {
    run(16);
}
