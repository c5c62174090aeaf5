//! Deformed number brackets: the three families, their specializations,
//! and the bracket-arithmetic identities.
//!
//! Run with: cargo run --example brackets

use qstirling::bracket::{
    bracket, bracket_factorial, check_bracket_identity, g_binomial, g_pochhammer, BracketIdentity,
    BracketKind,
};
use qstirling::poly::Poly;

fn main() {
    println!("brackets [x] for x = -2..=4:");
    for x in -2..=4 {
        println!(
            "  [{x}]_M = {:<18} [{x}]_P = {:<22} [{x}]_G = {}",
            bracket(x, BracketKind::M).to_string(),
            bracket(x, BracketKind::P).to_string(),
            bracket(x, BracketKind::G)
        );
    }

    println!("\nG-factorials and binomials:");
    for k in 0..=4 {
        println!("  [{k}]_G! = {}", bracket_factorial(k));
    }
    for (l, i) in [(2, 1), (4, 2), (5, 3)] {
        println!("  [{l} choose {i}]_G = {}", g_binomial(l, i).unwrap());
    }

    println!("\nPochhammer products (λ; 1)^(l):");
    for l in 0..=3 {
        println!("  l={l}: {}", g_pochhammer(l, &Poly::one()));
    }

    println!("\nidentity spot checks:");
    for (id, args) in [
        (BracketIdentity::ShiftM, vec![3i64, 1]),
        (BracketIdentity::GSub, vec![3, 1]),
        (BracketIdentity::GAdd, vec![2, 3]),
        (BracketIdentity::GNeg, vec![2]),
        (BracketIdentity::PowerSub, vec![2, 3]),
        (BracketIdentity::KmExpand, vec![2, 1]),
    ] {
        let report = check_bracket_identity(id, &args).unwrap();
        println!(
            "  {} {:?}: {}",
            id.name(),
            report.args,
            if report.pass { "pass" } else { "FAIL" }
        );
    }
}
