//! Acceptance suite: one test per criterion, each printing its pass/fail
//! line with the measured numbers. The same checks back the
//! `orthoseries accept` subcommand.

use orthoseries::accept;
use orthoseries::report::CriterionResult;

fn check(c: CriterionResult) {
    println!(
        "criterion {} ({}): {} — {}",
        c.id,
        c.name,
        if c.passed { "PASS" } else { "FAIL" },
        c.details
    );
    assert!(c.passed, "criterion {} ({}) failed: {}", c.id, c.name, c.details);
}

#[test]
fn criterion_1_kernel_oracle() {
    check(accept::criterion_kernel_oracle());
}

#[test]
fn criterion_2_construction_oracle() {
    check(accept::criterion_construction_oracle());
}

#[test]
fn criterion_3_enumeration_exhaustiveness() {
    check(accept::criterion_enumeration_exhaustiveness());
}

#[test]
fn criterion_4_continuation_oracle() {
    check(accept::criterion_continuation_zeta());
}

#[test]
fn criterion_5_basmajian_identity() {
    check(accept::criterion_basmajian());
}

#[test]
fn criterion_6_bridgeman_identity() {
    check(accept::criterion_bridgeman());
}

#[test]
fn criterion_7_eta_vanishes_at_zero() {
    check(accept::criterion_eta_vanishes());
}

#[test]
fn criterion_8_eta_xy_equals_inverse_euler_characteristic() {
    check(accept::criterion_eta_xy());
}

#[test]
fn criterion_9_determinism() {
    check(accept::criterion_determinism());
}
