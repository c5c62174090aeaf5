//! The truncated Fock-space oracle at work: operator identities checked
//! exactly, the truncation-edge negative control, and the two-path
//! coefficient agreement.
//!
//! Run with: cargo run --example fock_verification

use qstirling::boson::{QChoice, ShatSecondTable};
use qstirling::bracket::BracketKind;
use qstirling::fock::{
    oracle_normal_coeffs, verify_identity_on_levels, verify_operator_identity, OpIdentity,
    OpParams,
};

fn main() {
    let dim = 10;
    println!("operator identities at D={dim} (exact, safe subspace):");
    for kind in BracketKind::ALL {
        for id in [
            OpIdentity::E24Commutator,
            OpIdentity::E28Falling,
            OpIdentity::E31BracketFalling,
            OpIdentity::E30NormalOrder,
            OpIdentity::E33Inverse,
            OpIdentity::E34GeneralNormal,
            OpIdentity::E45RightForm,
        ] {
            let mut ok = true;
            for order in 1..=5 {
                let report =
                    verify_operator_identity(id, &OpParams::new(order, kind), dim).unwrap();
                ok &= report.pass;
            }
            println!("  {:<22} kind {kind}: {}", id.name(), if ok { "pass" } else { "FAIL" });
        }
    }

    println!("\ntruncation-edge negative control (must fail at l = D-1):");
    let edge = verify_identity_on_levels(
        OpIdentity::E24Commutator,
        &OpParams::new(2, BracketKind::G),
        dim,
        &[dim - 1],
    )
    .unwrap();
    match edge.counterexample {
        Some(c) => println!("  failed as required at l={} with residual {}", c.level, c.residual),
        None => println!("  UNEXPECTED: edge state satisfied the identity"),
    }

    println!("\ntwo-path agreement for m=3, kind G:");
    let oracle = oracle_normal_coeffs(3, BracketKind::G, dim).unwrap();
    let table = ShatSecondTable::build(3, QChoice::QEqualsQ, BracketKind::G);
    for k in 1..=3 {
        let recurrence = table.entry(3, k);
        let sample = &oracle.values[&(k, 2)];
        println!(
            "  k={k}: oracle c_{k}(2) = {sample}   recurrence at n=2: {}",
            recurrence.eval(2).unwrap()
        );
    }
}
