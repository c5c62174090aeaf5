//! Deformed-oscillator spectrum expansions in s = ln q, t = ln p: the
//! Hamiltonian levels, the coordinate–momentum commutator levels, and
//! the special role of the constraint t = -s.
//!
//! Run with: cargo run --example oscillator_expansion

use qstirling::expansion::{
    commutator_residual, commutator_series, hamiltonian_degree1_at_t_neg_s, hamiltonian_residual,
    hamiltonian_series,
};

fn main() {
    println!("Hamiltonian levels ([l] + [l+1])/2 through total degree 1:");
    for l in 0..=4 {
        let h = hamiltonian_series(l, 1);
        let residual = hamiltonian_residual(l, 1);
        println!(
            "  l={l}: {}   residual vs closed form: {}",
            h.series,
            residual
        );
    }

    println!("\ncommutator levels [l+1] - [l] through total degree 2:");
    for l in 0..=4 {
        let c = commutator_series(l, 2);
        let residual = commutator_residual(l, 2);
        println!("  l={l}: {}   residual: {}", c.series, residual);
    }

    println!("\ndegree-1 coefficient after substituting t = -s (all must vanish):");
    for l in 0..=8 {
        println!("  l={l}: {}", hamiltonian_degree1_at_t_neg_s(l));
    }
}
