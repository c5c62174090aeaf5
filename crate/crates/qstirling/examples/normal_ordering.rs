//! Normally ordered expansions of powers of the deformed number operator
//! and their inverses, for all three boson kinds.
//!
//! Run with: cargo run --example normal_ordering

use qstirling::boson::{
    extract_reduced_factor, inverse_normal_form, normal_order_power, reorder_right, QChoice,
    ReducedKind,
};
use qstirling::bracket::BracketKind;

fn main() {
    for kind in BracketKind::ALL {
        println!("[n̂]^m for the {kind} kind (coefficients between (a†)^k and a^k):");
        for m in 1..=4 {
            let nf = normal_order_power(m, kind, QChoice::QEqualsQ);
            let parts: Vec<String> = nf
                .coeffs
                .iter()
                .map(|(k, e)| format!("k={k}: {}", e.render()))
                .collect();
            println!("  m={m}:  {}", parts.join(" ; "));
        }
        println!();
    }

    println!("inverse forms (a†)^k a^k as functions of [n̂]:");
    for kind in BracketKind::ALL {
        for k in 1..=3 {
            let inv = inverse_normal_form(k, kind);
            let parts: Vec<String> = inv
                .coeffs
                .iter()
                .map(|(m, e)| format!("m={m}: {}", e.render()))
                .collect();
            println!("  {kind} k={k}:  {}", parts.join(" ; "));
        }
    }

    println!("\nreduced factors of the G-kind coefficients (the n̂-free parts):");
    for m in 1..=4usize {
        let nf = normal_order_power(m, BracketKind::G, QChoice::QEqualsQ);
        for (k, coeff) in &nf.coeffs {
            let xi = extract_reduced_factor(coeff, m, *k, ReducedKind::SecondKind).unwrap();
            println!("  Ξ({m},{k}) = {xi}");
        }
    }

    println!("\nright-placed coefficients pick up the p^(k(k-m)) factor:");
    let nf = normal_order_power(3, BracketKind::G, QChoice::QEqualsQ);
    let right = reorder_right(&nf).unwrap();
    for (k, e) in &right.coeffs {
        println!("  k={k}: {}", e.render());
    }
}
