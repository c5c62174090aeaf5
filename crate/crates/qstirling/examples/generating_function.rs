//! The G-binomial theorem and the generating-function route to the
//! normally ordered products, with derivatives replaced by exact
//! coefficient extraction.
//!
//! Run with: cargo run --example generating_function

use qstirling::bracket::{bracket_factorial, g_binomial, g_pochhammer, BracketKind};
use qstirling::fock::verify_genfun;
use qstirling::poly::{Poly, Sym};

fn main() {
    println!("(λ; 1)^(l) expanded, with λ^k coefficients:");
    for l in 0..=4u32 {
        let poch = g_pochhammer(l, &Poly::one());
        println!("  l={l}: {poch}");
        for k in 0..=l {
            println!(
                "      λ^{k}: {}   (G-binomial [{}|{}] = {})",
                poch.coefficient_of(Sym::Lambda, k as i64),
                l,
                k,
                g_binomial(l, k).unwrap()
            );
        }
    }

    println!("\nfactorials entering the scaling: [k]_G!/k!:");
    for k in 0..=5 {
        println!("  [{k}]_G! = {}", bracket_factorial(k));
    }

    println!("\nfull generating-function check (k <= 5, D = 8):");
    for kind in BracketKind::ALL {
        let report = verify_genfun(5, 8, kind).unwrap();
        println!("  kind {kind}: {}", if report.pass { "pass" } else { "FAIL" });
    }
}
