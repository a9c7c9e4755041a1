//! One test per acceptance criterion; each prints its pass/fail line.

use iforge::suite::{run_criterion, SuiteConfig};

fn criterion(id: u8) {
    let report = run_criterion(id, &SuiteConfig::default());
    println!("{}", report.line());
    for n in &report.notes {
        println!("    {n}");
    }
    assert!(report.passed, "{}", report.line());
}

#[test]
fn c1_morphisms_vs_naive() {
    criterion(1);
}

#[test]
fn c2_t_coding_iso() {
    criterion(2);
}

#[test]
fn c3_universal_embedding() {
    criterion(3);
}

#[test]
fn c4_r_coding() {
    criterion(4);
}

#[test]
fn c5_w_space() {
    criterion(5);
}

#[test]
fn c6_parity_group() {
    criterion(6);
}

#[test]
fn c7_schroeder_bernstein() {
    criterion(7);
}

#[test]
fn c8_coding_arithmetic() {
    criterion(8);
}

#[test]
fn c9_pairing_swap() {
    criterion(9);
}
