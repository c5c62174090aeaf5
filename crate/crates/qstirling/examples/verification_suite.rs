//! Runs the complete verification catalog programmatically — the same
//! checks the `qstirling verify` subcommand performs.
//!
//! Run with: cargo run --release --example verification_suite

use qstirling::verify::{run_suite, SuiteConfig};

fn main() {
    let config = SuiteConfig::default();
    let outcomes = run_suite(&config);
    let mut failures = 0;
    for o in &outcomes {
        println!("[{}] {} {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.params);
        if !o.pass {
            failures += 1;
            if let Some(detail) = &o.counterexample {
                println!("        {detail}");
            }
        }
    }
    println!("\n{} checks, {} failures", outcomes.len(), failures);
    std::process::exit(if failures == 0 { 0 } else { 1 });
}
