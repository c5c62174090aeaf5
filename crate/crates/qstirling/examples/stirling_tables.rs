//! All Stirling families side by side, with their defining relations and
//! duality checked on the spot.
//!
//! Run with: cargo run --example stirling_tables

use qstirling::stirling::{
    build_table, duality_pairs, verify_defining_relations, verify_duality, StirlingFamily,
};

fn main() {
    let n = 5;
    for family in StirlingFamily::ALL {
        let table = build_table(family, n);
        println!("{} up to {n}:", family.name());
        for r in 1..=n {
            let row: Vec<String> = (1..=r).map(|c| table.entry(r, c).to_string()).collect();
            println!("  row {r}: {}", row.join(" | "));
        }
        println!();
    }

    println!("defining relations (X^m against the expanded falling products):");
    for family in [
        StirlingFamily::ClassicalSecond,
        StirlingFamily::QSecond,
        StirlingFamily::TildeSecond,
        StirlingFamily::ReducedSecondXiPrime,
    ] {
        let report = verify_defining_relations(family, 8);
        println!("  {:<28} {}", family.name(), if report.pass { "pass" } else { "FAIL" });
    }

    println!("\nduality (both matrix products equal the identity):");
    for (first, second) in duality_pairs() {
        let f = build_table(first, 8);
        let s = build_table(second, 8);
        let report = verify_duality(&f, &s).unwrap();
        println!(
            "  {:<22} x {:<24} {}",
            first.name(),
            second.name(),
            if report.pass { "pass" } else { "FAIL" }
        );
    }
}
