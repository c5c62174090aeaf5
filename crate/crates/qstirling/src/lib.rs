//! Exact computer algebra for deformed (q,p)-Stirling numbers and the
//! normal ordering of powers of the deformed boson number operator.
//!
//! Everything is computed over exact rational Laurent polynomials in the
//! fixed symbols `q, p, Q, X, λ`; every identity in the crate is checked
//! by subtracting both sides and asserting the result is the empty
//! polynomial. A truncated Fock-space representation with exact entries
//! serves as an independent brute-force verifier for all operator
//! statements.
//!
//! Entry points:
//! - [`bracket`]: deformed numbers `[x]_M`, `[x]_P`, `[x]_G`, G-binomials
//!   and G-Pochhammer products.
//! - [`stirling`]: all scalar Stirling families by their recurrences.
//! - [`boson`]: operator-valued Stirling numbers and normal forms.
//! - [`fock`]: the truncated Fock oracle and identity suite.
//! - [`expansion`]: oscillator spectrum expansions in `s = ln q`,
//!   `t = ln p`.
//! - [`verify`]: the full named check catalog used by the CLI.

pub mod boson;
pub mod bracket;
pub mod expansion;
pub mod fock;
pub mod poly;
pub mod pseries;
pub mod rational;
pub mod stirling;
pub mod verify;

pub use bracket::{bracket, bracket_factorial, check_bracket_identity, g_binomial, g_pochhammer, BracketKind};
pub use poly::{Poly, PolyError, Sym};
pub use pseries::PowerSeries2;
pub use rational::Rational;
