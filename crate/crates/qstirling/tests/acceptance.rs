//! Acceptance suite: one test per criterion, each printing a pass line
//! once its exact checks hold (tolerance is literal zero except for the
//! floating-point corroboration, which is pinned at 1e-9).
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use qstirling::boson::{
    extract_reduced_factor, inverse_normal_form, normal_order_power, reorder_right, QChoice,
    ReducedKind, ShatFirstTable, ShatSecondTable,
};
use qstirling::bracket::{check_bracket_identity, BracketIdentity, BracketKind};
use qstirling::expansion::{
    commutator_residual, hamiltonian_degree1_at_t_neg_s, hamiltonian_residual,
};
use qstirling::fock::{
    float_corroboration, oracle_normal_coeffs, verify_genfun, verify_identity_on_levels,
    verify_operator_identity, OpIdentity, OpParams,
};
use qstirling::poly::{Poly, Sym};
use qstirling::rational::rat;
use qstirling::stirling::{
    build_table, check_classical_limit, check_tilde_relation, check_wachs_white_reduction,
    duality_pairs, falling_product_expand, verify_defining_relations, verify_duality,
    FallingProduct, StirlingFamily,
};

const N_MAX: usize = 10;
const DIM: usize = 10;

/// Brute-force count of partitions of `{1..n}` into exactly `k`
/// nonempty blocks.
fn count_set_partitions(n: usize, k: usize) -> i64 {
    fn go(next: usize, n: usize, blocks: &mut Vec<Vec<usize>>, k: usize, acc: &mut i64) {
        if next > n {
            if blocks.len() == k {
                *acc += 1;
            }
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(next);
            go(next + 1, n, blocks, k, acc);
            blocks[i].pop();
        }
        if blocks.len() < k {
            blocks.push(vec![next]);
            go(next + 1, n, blocks, k, acc);
            blocks.pop();
        }
    }
    let mut acc = 0;
    go(1, n, &mut Vec::new(), k, &mut acc);
    acc
}

#[test]
fn criterion_01_stirling_limits() {
    for family in StirlingFamily::ALL {
        let report = check_classical_limit(family, N_MAX);
        assert!(report.pass, "{} failed: {:?}", report.what, report.witness);
    }
    // Anchors computed by independent means.
    let second = build_table(StirlingFamily::ClassicalSecond, 3);
    assert_eq!(second.entry(3, 2), Poly::int(count_set_partitions(3, 2)));
    assert_eq!(second.entry(3, 2), Poly::int(3));
    let product = falling_product_expand(FallingProduct::Classical, 3);
    let first = build_table(StirlingFamily::ClassicalFirst, 3);
    assert_eq!(first.entry(3, 2), product.coefficient_of(Sym::X, 2));
    assert_eq!(first.entry(3, 2), Poly::int(-3));
    println!("criterion 1 (Stirling limits at q=p=1, n_max=10): PASS");
}

#[test]
fn criterion_02_defining_relations() {
    for family in [
        StirlingFamily::ClassicalSecond,
        StirlingFamily::QSecond,
        StirlingFamily::TildeSecond,
    ] {
        let report = verify_defining_relations(family, N_MAX);
        assert!(report.pass, "{} failed: {:?}", report.what, report.witness);
    }
    // The first-kind expansions agree with the recurrence tables.
    for family in [
        StirlingFamily::ClassicalFirst,
        StirlingFamily::QFirst,
        StirlingFamily::TildeFirst,
    ] {
        let report = verify_defining_relations(family, N_MAX);
        assert!(report.pass, "{} failed: {:?}", report.what, report.witness);
    }
    println!("criterion 2 (defining relations, m <= 10): PASS");
}

#[test]
fn criterion_03_duality() {
    for (first, second) in duality_pairs() {
        let f = build_table(first, N_MAX);
        let s = build_table(second, N_MAX);
        let report = verify_duality(&f, &s).expect("matched pair");
        assert!(report.pass, "{} failed: {:?}", report.what, report.witness);
    }
    println!("criterion 3 (duality for classical, q, tilde and Ξ'/ξ pairs, indices <= 10): PASS");
}

#[test]
fn criterion_04_tilde_and_wachs_white() {
    let tilde = check_tilde_relation(N_MAX);
    assert!(tilde.pass, "{:?}", tilde.witness);
    let ww = check_wachs_white_reduction(N_MAX);
    assert!(ww.pass, "{:?}", ww.witness);
    println!("criterion 4 (tilde relation and Wachs-White reduction, n_max=10): PASS");
}

#[test]
fn criterion_05_operator_identities() {
    for kind in BracketKind::ALL {
        for order in 1..=5 {
            for id in [
                OpIdentity::E24Commutator,
                OpIdentity::E28Falling,
                OpIdentity::E31BracketFalling,
                OpIdentity::E30NormalOrder,
                OpIdentity::E33Inverse,
                OpIdentity::E34GeneralNormal,
                OpIdentity::E45RightForm,
            ] {
                let report =
                    verify_operator_identity(id, &OpParams::new(order, kind), DIM).unwrap();
                assert!(
                    report.pass,
                    "{} kind {kind} order {order}: {:?}",
                    report.id, report.counterexample
                );
            }
        }
        // The right-placed coefficients carry the p^(k(k-m)) factor.
        for m in 1..=5 {
            let nf = normal_order_power(m, BracketKind::G, QChoice::QEqualsQ);
            reorder_right(&nf).expect("right form is well defined");
        }
        // Negative control: the raising identity must fail on the edge
        // state.
        let edge = verify_identity_on_levels(
            OpIdentity::E24Commutator,
            &OpParams::new(2, kind),
            DIM,
            &[DIM - 1],
        )
        .unwrap();
        assert!(!edge.pass, "edge control unexpectedly passed for {kind}");
    }
    println!("criterion 5 (operator identities on the Fock oracle, D=10, k,m <= 5, with edge-state control): PASS");
}

#[test]
fn criterion_06_two_path_agreement() {
    for kind in BracketKind::ALL {
        for m in 1..=5 {
            let oracle = oracle_normal_coeffs(m, kind, DIM).unwrap();
            let table = ShatSecondTable::build(m, QChoice::QEqualsQ, kind);
            for k in 1..=m {
                let shat = table.entry(m, k);
                for l in 0..DIM - k {
                    assert_eq!(
                        oracle.values[&(k, l)],
                        shat.eval(l as i64).unwrap(),
                        "kind {kind} m={m} k={k} l={l}"
                    );
                }
            }
        }
    }
    println!("criterion 6 (Fock-solved coefficients match recurrence values, m <= 5, all kinds): PASS");
}

#[test]
fn criterion_07_reduced_factor_structure() {
    let second = ShatSecondTable::build(6, QChoice::QEqualsQ, BracketKind::G);
    let first = ShatFirstTable::build(6, BracketKind::G);
    let xi = build_table(StirlingFamily::ReducedSecondXi, 6);
    let xi_first = build_table(StirlingFamily::ReducedFirstXi, 6);
    for m in 1..=6 {
        for k in 1..=m {
            let scalar = extract_reduced_factor(&second.entry(m, k), m, k, ReducedKind::SecondKind)
                .expect("second-kind factorization");
            assert_eq!(scalar, xi.entry(m, k), "Ξ({m},{k})");
            let scalar = extract_reduced_factor(&first.entry(m, k), k, m, ReducedKind::FirstKind)
                .expect("first-kind factorization");
            assert_eq!(scalar, xi_first.entry(m, k), "ξ({m},{k})");
        }
    }
    // And the inverse forms expose the same structure per entry.
    for k in 1..=6 {
        let inv = inverse_normal_form(k, BracketKind::G);
        for (m, coeff) in &inv.coeffs {
            extract_reduced_factor(coeff, *m, k, ReducedKind::FirstKind)
                .expect("inverse coefficients factor");
        }
    }
    println!("criterion 7 (reduced-factor structure for m <= 6, no factorization failures): PASS");
}

#[test]
fn criterion_08_generating_function() {
    let report = verify_genfun(5, 8, BracketKind::G).unwrap();
    assert!(report.pass, "{:?}", report.counterexample);
    for k in 1..=5 {
        for m in 0..=5 {
            let r = check_bracket_identity(BracketIdentity::PowerSub, &[k, m]).unwrap();
            assert!(r.pass, "POWER_SUB k={k} m={m}");
            let r = check_bracket_identity(BracketIdentity::KmExpand, &[k, m]).unwrap();
            assert!(r.pass, "KM_EXPAND k={k} m={m}");
        }
    }
    println!("criterion 8 (generating function, k <= 5 at D=8, plus auxiliary identities): PASS");
}

#[test]
fn criterion_09_series_expansions() {
    for l in 0..=12 {
        assert!(
            hamiltonian_residual(l, 2).is_zero(),
            "hamiltonian mismatch at l={l}"
        );
        assert!(
            commutator_residual(l, 3).is_zero(),
            "commutator mismatch at l={l}"
        );
        assert_eq!(
            hamiltonian_degree1_at_t_neg_s(l),
            rat(0),
            "degree-1 coefficient survives t=-s at l={l}"
        );
    }
    println!("criterion 9 (spectrum expansions: degree-1 Hamiltonian, degree-2 commutator, t=-s control, l <= 12): PASS");
}

#[test]
fn criterion_10_float_corroboration() {
    let report = float_corroboration(DIM, 20, 5);
    assert!(
        report.pass,
        "max relative residual {} is not below {}",
        report.max_relative_residual, report.tolerance
    );
    println!(
        "criterion 10 (symmetric-normalization corroboration, 20 samples, residual {:.2e} < 1e-9): PASS",
        report.max_relative_residual
    );
}
