//! Acceptance suite: every criterion runs at its pinned tolerance and
//! prints one pass/fail line. `cargo test -p adelic-core --test acceptance`
//! runs all sixteen.

use adelic_core::verify::{run_criterion, default_jobs};

fn run(id: usize) {
    let outcome = run_criterion(id, default_jobs());
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_t3_spectrum() {
    run(1);
}

#[test]
fn criterion_02_t2_matrix_and_eigenpairs() {
    run(2);
}

#[test]
fn criterion_03_divisibility_table_mod3() {
    run(3);
}

#[test]
fn criterion_04_exact_identity_suite() {
    run(4);
}

#[test]
fn criterion_05_t6_jordan_defect() {
    run(5);
}

#[test]
fn criterion_06_gap_pair_at_34() {
    run(6);
}

#[test]
fn criterion_07_circle_law_to_40() {
    run(7);
}

#[test]
fn criterion_08_stratification_to_30() {
    run(8);
}

#[test]
fn criterion_09_odd_radius_level_50() {
    run(9);
}

#[test]
fn criterion_10_graph_suite() {
    run(10);
}

#[test]
fn criterion_11_edge_laplacian_identity() {
    run(11);
}

#[test]
fn criterion_12_tree_suite() {
    run(12);
}

#[test]
fn criterion_13_ceiling_bound_brute_force() {
    run(13);
}

#[test]
fn criterion_14_dirichlet_suite() {
    run(14);
}

#[test]
fn criterion_15_block_correspondence() {
    run(15);
}

#[test]
fn criterion_16_eigensolver_oracle() {
    run(16);
}
