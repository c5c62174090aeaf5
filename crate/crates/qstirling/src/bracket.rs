//! Deformed number brackets and their arithmetic.
//!
//! Three bracket families are supported: the one-parameter `[x]_M`
//! (geometric sum in `q`), the symmetric `[x]_P` (Laurent in `q`), and
//! the two-parameter `[x]_G` which contains the other two under the
//! substitutions `p -> 1` and `p -> q^-1`. Brackets are always computed
//! as finite sums so everything stays inside the Laurent polynomial
//! ring; negative arguments use `[-b] = -(pq)^-b [b]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Poly, PolyError, Sym};
use crate::rational::binomial;

/// The bracket family: M, P, or the two-parameter G form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BracketKind {
    M,
    P,
    G,
}

impl BracketKind {
    pub const ALL: [BracketKind; 3] = [BracketKind::M, BracketKind::P, BracketKind::G];

    /// The value that plays the role of `p` for this kind, always an
    /// invertible monomial.
    pub fn p_value(self) -> Poly {
        match self {
            BracketKind::M => Poly::one(),
            BracketKind::P => Poly::sym(Sym::Q).pow(-1).expect("monomial"),
            BracketKind::G => Poly::sym(Sym::P),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BracketKind::M => "M",
            BracketKind::P => "P",
            BracketKind::G => "G",
        }
    }

    pub fn from_name(s: &str) -> Option<BracketKind> {
        match s {
            "M" | "m" => Some(BracketKind::M),
            "P" | "p" => Some(BracketKind::P),
            "G" | "g" => Some(BracketKind::G),
            _ => None,
        }
    }
}

impl fmt::Display for BracketKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BracketError {
    #[error("unknown identity name: {0}")]
    UnknownIdentity(String),
    #[error("identity {id} expects {expected} integer argument(s), got {got}")]
    BadArity { id: &'static str, expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `[x]` for the given kind. For `x >= 0` this is the finite sum
/// `Σ_{j<x} q^j p^(x-1-j)` with the kind's `p`; negative arguments are
/// defined through `[-b] = -(pq)^-b [b]`.
pub fn bracket(x: i64, kind: BracketKind) -> Poly {
    let p_val = kind.p_value();
    if x < 0 {
        let pos = bracket(-x, kind);
        let scale = p_val
            .mul_ref(&Poly::sym(Sym::Q))
            .pow(x)
            .expect("pq is an invertible monomial");
        return pos.mul_ref(&scale).neg_ref();
    }
    let q = Poly::sym(Sym::Q);
    let mut acc = Poly::zero();
    for j in 0..x {
        let term = q
            .pow(j)
            .expect("nonnegative power")
            .mul_ref(&p_val.pow(x - 1 - j).expect("monomial power"));
        acc = acc.add_ref(&term);
    }
    acc
}

/// `[k]_G! = [1]_G [2]_G ... [k]_G`, with the empty product equal to 1.
pub fn bracket_factorial(k: u32) -> Poly {
    let mut acc = Poly::one();
    for j in 1..=k as i64 {
        acc = acc.mul_ref(&bracket(j, BracketKind::G));
    }
    acc
}

/// G-binomial coefficient `[l choose i]_G = [l]!/([i]![l-i]!)`.
///
/// Computed by the quotient definition; the division is exact for all
/// valid inputs, and a failed division signals an implementation bug.
pub fn g_binomial(l: u32, i: u32) -> Result<Poly, PolyError> {
    assert!(i <= l, "g_binomial requires i <= l");
    let num = bracket_factorial(l);
    let den = bracket_factorial(i).mul_ref(&bracket_factorial(l - i));
    num.div_exact(&den)
}

/// The product `(λ; x)^(l) = (λ+x)(pλ+qx)...(p^(l-1)λ + q^(l-1)x)`.
pub fn g_pochhammer(l: u32, x_value: &Poly) -> Poly {
    let q = Poly::sym(Sym::Q);
    let p = Poly::sym(Sym::P);
    let lam = Poly::sym(Sym::Lambda);
    let mut acc = Poly::one();
    for j in 0..l as i64 {
        let factor = p
            .pow(j)
            .unwrap()
            .mul_ref(&lam)
            .add_ref(&q.pow(j).unwrap().mul_ref(x_value));
        acc = acc.mul_ref(&factor);
    }
    acc
}

/// Named bracket-arithmetic identities, each checked as an exact
/// polynomial identity for a concrete integer instantiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketIdentity {
    /// `[x]_P = q^(-x+1) [x]_{M(q^2)}`
    Eq5Pm,
    /// `[x]_G = p^(x-1) [x]_{M(q/p)}`
    Eq5Gm,
    /// `[x]_{G(p^2,q^2)} = (pq)^(x-1) [x]_{P(q/p)}` — the P-to-G relation
    /// with both parameters squared so it stays inside the Laurent ring.
    Eq5Gp,
    /// `[a]_M - [b]_M = q^b [a-b]_M`
    ShiftM,
    /// `[a-b]_G = q^-b ([a]_G - p^(a-b) [b]_G)`
    GSub,
    /// `[a+b]_G = q^b [a]_G + p^a [b]_G`
    GAdd,
    /// `[-b]_G = -(pq)^-b [b]_G`
    GNeg,
    /// `[m]_{G(p^k,q^k)} [k]_G = [km]_G`
    PowerSub,
    /// `[km]_G = Σ_i C(k,i) (q-p)^(i-1) [m]_G^i p^(m(k-i))`
    KmExpand,
}

impl BracketIdentity {
    pub const ALL: [BracketIdentity; 9] = [
        BracketIdentity::Eq5Pm,
        BracketIdentity::Eq5Gm,
        BracketIdentity::Eq5Gp,
        BracketIdentity::ShiftM,
        BracketIdentity::GSub,
        BracketIdentity::GAdd,
        BracketIdentity::GNeg,
        BracketIdentity::PowerSub,
        BracketIdentity::KmExpand,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BracketIdentity::Eq5Pm => "EQ5_PM",
            BracketIdentity::Eq5Gm => "EQ5_GM",
            BracketIdentity::Eq5Gp => "EQ5_GP",
            BracketIdentity::ShiftM => "SHIFT_M",
            BracketIdentity::GSub => "G_SUB",
            BracketIdentity::GAdd => "G_ADD",
            BracketIdentity::GNeg => "G_NEG",
            BracketIdentity::PowerSub => "POWER_SUB",
            BracketIdentity::KmExpand => "KM_EXPAND",
        }
    }

    pub fn from_name(s: &str) -> Option<BracketIdentity> {
        BracketIdentity::ALL.iter().copied().find(|i| i.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            BracketIdentity::Eq5Pm | BracketIdentity::Eq5Gm | BracketIdentity::Eq5Gp => 1,
            BracketIdentity::GNeg => 1,
            _ => 2,
        }
    }
}

/// Outcome of a bracket-identity check: `pass` is true iff the witness
/// (LHS − RHS) is the zero polynomial.
#[derive(Debug, Clone)]
pub struct BracketReport {
    pub id: BracketIdentity,
    pub args: Vec<i64>,
    pub pass: bool,
    pub witness: Poly,
}

/// Instantiates and checks one bracket identity.
pub fn check_bracket_identity(id: BracketIdentity, args: &[i64]) -> Result<BracketReport, BracketError> {
    if args.len() != id.arity() {
        return Err(BracketError::BadArity {
            id: id.name(),
            expected: id.arity(),
            got: args.len(),
        });
    }
    let q = Poly::sym(Sym::Q);
    let p = Poly::sym(Sym::P);
    let witness = match id {
        BracketIdentity::Eq5Pm => {
            let x = args[0];
            let lhs = bracket(x, BracketKind::P);
            let rhs = bracket(x, BracketKind::M)
                .substitute(Sym::Q, &q.pow(2)?)?
                .mul_ref(&q.pow(-x + 1)?);
            lhs.sub_ref(&rhs)
        }
        BracketIdentity::Eq5Gm => {
            let x = args[0];
            let q_over_p = q.mul_ref(&p.pow(-1)?);
            let lhs = bracket(x, BracketKind::G);
            let rhs = bracket(x, BracketKind::M)
                .substitute(Sym::Q, &q_over_p)?
                .mul_ref(&p.pow(x - 1)?);
            lhs.sub_ref(&rhs)
        }
        BracketIdentity::Eq5Gp => {
            let x = args[0];
            let q_over_p = q.mul_ref(&p.pow(-1)?);
            let lhs = bracket(x, BracketKind::G)
                .substitute(Sym::Q, &q.pow(2)?)?
                .substitute(Sym::P, &p.pow(2)?)?;
            let rhs = bracket(x, BracketKind::P)
                .substitute(Sym::Q, &q_over_p)?
                .mul_ref(&p.mul_ref(&q).pow(x - 1)?);
            lhs.sub_ref(&rhs)
        }
        BracketIdentity::ShiftM => {
            let (a, b) = (args[0], args[1]);
            let lhs = bracket(a, BracketKind::M).sub_ref(&bracket(b, BracketKind::M));
            let rhs = q.pow(b)?.mul_ref(&bracket(a - b, BracketKind::M));
            lhs.sub_ref(&rhs)
        }
        BracketIdentity::GSub => {
            let (a, b) = (args[0], args[1]);
            let lhs = bracket(a - b, BracketKind::G);
            let rhs = q.pow(-b)?.mul_ref(
                &bracket(a, BracketKind::G)
                    .sub_ref(&p.pow(a - b)?.mul_ref(&bracket(b, BracketKind::G))),
            );
            lhs.sub_ref(&rhs)
        }
        BracketIdentity::GAdd => {
            let (a, b) = (args[0], args[1]);
            let lhs = bracket(a + b, BracketKind::G);
            let rhs = q
                .pow(b)?
                .mul_ref(&bracket(a, BracketKind::G))
                .add_ref(&p.pow(a)?.mul_ref(&bracket(b, BracketKind::G)));
            lhs.sub_ref(&rhs)
        }
        BracketIdentity::GNeg => {
            let b = args[0];
            let lhs = bracket(-b, BracketKind::G);
            let rhs = p
                .mul_ref(&q)
                .pow(-b)?
                .mul_ref(&bracket(b, BracketKind::G))
                .neg_ref();
            lhs.sub_ref(&rhs)
        }
        BracketIdentity::PowerSub => {
            let (k, m) = (args[0], args[1]);
            let lhs = bracket(m, BracketKind::G)
                .substitute(Sym::Q, &q.pow(k)?)?
                .substitute(Sym::P, &p.pow(k)?)?
                .mul_ref(&bracket(k, BracketKind::G));
            let rhs = bracket(k * m, BracketKind::G);
            lhs.sub_ref(&rhs)
        }
        BracketIdentity::KmExpand => {
            let (k, m) = (args[0], args[1]);
            assert!(k >= 1 && m >= 0, "KM_EXPAND expects k >= 1, m >= 0");
            let lhs = bracket(k * m, BracketKind::G);
            let q_minus_p = q.sub_ref(&p);
            let bm = bracket(m, BracketKind::G);
            let mut rhs = Poly::zero();
            for i in 1..=k {
                let term = Poly::constant(binomial(k as u32, i as u32))
                    .mul_ref(&q_minus_p.pow(i - 1)?)
                    .mul_ref(&bm.pow(i)?)
                    .mul_ref(&p.pow(m * (k - i))?);
                rhs = rhs.add_ref(&term);
            }
            lhs.sub_ref(&rhs)
        }
    };
    Ok(BracketReport {
        id,
        args: args.to_vec(),
        pass: witness.is_zero(),
        witness,
    })
}

/// Checks an identity given by its name, e.g. from CLI input.
pub fn check_bracket_identity_by_name(
    name: &str,
    args: &[i64],
) -> Result<BracketReport, BracketError> {
    let id = BracketIdentity::from_name(name)
        .ok_or_else(|| BracketError::UnknownIdentity(name.to_string()))?;
    check_bracket_identity(id, args)
}

/// Convenience: `C(l+1,i) = p^(l+1-i) C(l,i-1) + q^i C(l,i)`, used as the
/// independent route for testing `g_binomial`.
pub fn g_binomial_by_recurrence(l: u32, i: u32) -> Poly {
    if i > l {
        return Poly::zero();
    }
    if i == 0 || i == l {
        return Poly::one();
    }
    let q = Poly::sym(Sym::Q);
    let p = Poly::sym(Sym::P);
    let a = p
        .pow((l - i) as i64)
        .unwrap()
        .mul_ref(&g_binomial_by_recurrence(l - 1, i - 1));
    let b = q
        .pow(i as i64)
        .unwrap()
        .mul_ref(&g_binomial_by_recurrence(l - 1, i));
    a.add_ref(&b)
}

/// Triangular-number helper `n(n-1)/2`, used in many exponent formulas.
pub fn tri(n: i64) -> i64 {
    n * (n - 1) / 2
}
