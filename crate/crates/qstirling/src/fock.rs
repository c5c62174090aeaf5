//! Truncated Fock-space oracle with exact polynomial matrix entries.
//!
//! Every operator statement in the crate can be checked brute-force by
//! applying both sides to the basis states of a dimension-`D` cutoff of
//! the deformed Fock space and comparing exact polynomials.
//!
//! The representation uses the asymmetric ladder normalization
//! `a|l> = [l]|l-1>`, `a†|l> = |l+1>` instead of the symmetric `√[l]`
//! convention. The two are related by the diagonal similarity transform
//! `S|l> = ([l]!)^(-1/2) |l>`, so a polynomial identity in `a`, `a†`,
//! `n̂` holds in one normalization iff it holds in the other — and the
//! asymmetric choice keeps every matrix entry inside the rational
//! Laurent ring, with no formal square roots. [`float_corroboration`]
//! backs this argument by re-checking the identity suite in the
//! symmetric normalization at random numeric parameter values.
//!
//! Truncation is handled by restricting each check to the safe subspace
//! of states that cannot reach the cutoff edge; see [`safe_levels`].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::boson::{QChoice, ShatFirstTable, ShatSecondTable};
use crate::bracket::{bracket, g_pochhammer, tri, BracketKind};
use crate::poly::{Poly, PolyError, Sym};
use crate::rational::{ratio, Rational};
use crate::stirling::{build_table, StirlingFamily};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FockError {
    #[error("no safe basis states: raising shift {shift} with dimension {dim}")]
    EmptySafeRange { shift: usize, dim: usize },
    #[error("triangular solve failed: {0}")]
    SingularSystem(String),
    #[error("oracle solution inconsistent at level {level}")]
    Inconsistent { level: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Dense matrix over the Laurent-polynomial scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockMatrix {
    dim: usize,
    entries: Vec<Vec<Poly>>,
}

impl FockMatrix {
    pub fn zero(dim: usize) -> FockMatrix {
        FockMatrix {
            dim,
            entries: vec![vec![Poly::zero(); dim]; dim],
        }
    }

    pub fn identity(dim: usize) -> FockMatrix {
        let mut m = FockMatrix::zero(dim);
        for i in 0..dim {
            m.entries[i][i] = Poly::one();
        }
        m
    }

    /// Diagonal matrix with entry `f(l)` at level `l`.
    pub fn diagonal(dim: usize, f: impl Fn(usize) -> Poly) -> FockMatrix {
        let mut m = FockMatrix::zero(dim);
        for l in 0..dim {
            m.entries[l][l] = f(l);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row][col]
    }

    pub fn mul(&self, rhs: &FockMatrix) -> FockMatrix {
        assert_eq!(self.dim, rhs.dim);
        let mut out = FockMatrix::zero(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..self.dim {
                    if rhs.entries[k][j].is_zero() {
                        continue;
                    }
                    let prod = self.entries[i][k].mul_ref(&rhs.entries[k][j]);
                    out.entries[i][j] = out.entries[i][j].add_ref(&prod);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &FockMatrix) -> FockMatrix {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[i][j] = out.entries[i][j].add_ref(&rhs.entries[i][j]);
            }
        }
        out
    }

    pub fn sub(&self, rhs: &FockMatrix) -> FockMatrix {
        self.add(&rhs.scale(&Poly::int(-1)))
    }

    pub fn scale(&self, by: &Poly) -> FockMatrix {
        let mut out = FockMatrix::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[i][j] = self.entries[i][j].mul_ref(by);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> FockMatrix {
        let mut acc = FockMatrix::identity(self.dim);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Column `l`: the image of the basis state `|l>`.
    pub fn column(&self, l: usize) -> Vec<Poly> {
        (0..self.dim).map(|r| self.entries[r][l].clone()).collect()
    }
}

/// Truncated representation of one deformed boson algebra.
#[derive(Debug, Clone)]
pub struct FockRep {
    pub dim: usize,
    pub kind: BracketKind,
    /// Lowering: `a|l> = [l]|l-1>`.
    pub a: FockMatrix,
    /// Raising: `a†|l> = |l+1>`, with `a†|D-1> = 0` by truncation.
    pub adag: FockMatrix,
    /// Number operator: `n̂|l> = l|l>`.
    pub n: FockMatrix,
}

/// Builds the dimension-`dim` representation for a bracket kind.
pub fn build_fock_rep(dim: usize, kind: BracketKind) -> FockRep {
    assert!(dim >= 2, "Fock dimension must be at least 2");
    let mut a = FockMatrix::zero(dim);
    for l in 1..dim {
        a.entries[l - 1][l] = bracket(l as i64, kind);
    }
    let mut adag = FockMatrix::zero(dim);
    for l in 0..dim - 1 {
        adag.entries[l + 1][l] = Poly::one();
    }
    let n = FockMatrix::diagonal(dim, |l| Poly::int(l as i64));
    FockRep { dim, kind, a, adag, n }
}

/// The sub-range of levels `0 <= l < dim - shift` on which truncation
/// cannot corrupt an identity whose maximum intermediate raising is
/// `shift`.
pub fn safe_levels(shift: usize, dim: usize) -> Result<std::ops::Range<usize>, FockError> {
    if shift >= dim {
        return Err(FockError::EmptySafeRange { shift, dim });
    }
    Ok(0..dim - shift)
}

/// The operator identities checked on the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OpIdentity {
    /// `a^k a† - Q^k a† a^k = Φ(k,n̂) a^(k-1)`
    E24Commutator,
    /// `Π_{i<k} [n̂-i] = (a†)^k a^k`
    E28Falling,
    /// `Π_{i<k} ([n̂] - p^(n̂-i)[i]) = q^(k(k-1)/2) (a†)^k a^k`
    E31BracketFalling,
    /// `[n̂]^m = Σ_k C_k(n̂) (a†)^k a^k` with scalar-route coefficients
    /// from the reduced Stirling tables.
    E30NormalOrder,
    /// `(a†)^k a^k = Σ_m ŝ(k,m,n̂) [n̂]^m`
    E33Inverse,
    /// `[n̂]^m = Σ_k (a†)^k Ŝ(m,k,n̂) a^k` with recurrence-built Ŝ.
    E34GeneralNormal,
    /// `[n̂]^m = Σ_k (a†)^k a^k Ŝ(m,k,n̂-k)`
    E45RightForm,
    /// The generating-function identity, checked per level and order.
    E51Genfun,
}

impl OpIdentity {
    pub const ALL: [OpIdentity; 8] = [
        OpIdentity::E24Commutator,
        OpIdentity::E28Falling,
        OpIdentity::E31BracketFalling,
        OpIdentity::E30NormalOrder,
        OpIdentity::E33Inverse,
        OpIdentity::E34GeneralNormal,
        OpIdentity::E45RightForm,
        OpIdentity::E51Genfun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpIdentity::E24Commutator => "E24_COMMUTATOR",
            OpIdentity::E28Falling => "E28_FALLING",
            OpIdentity::E31BracketFalling => "E31_BRACKET_FALLING",
            OpIdentity::E30NormalOrder => "E30_NORMAL_ORDER",
            OpIdentity::E33Inverse => "E33_INVERSE",
            OpIdentity::E34GeneralNormal => "E34_GENERAL_NORMAL",
            OpIdentity::E45RightForm => "E45_RIGHT_FORM",
            OpIdentity::E51Genfun => "E51_GENFUN",
        }
    }

    pub fn from_name(s: &str) -> Option<OpIdentity> {
        OpIdentity::ALL.iter().copied().find(|i| i.name() == s)
    }

    /// Maximum intermediate raising above the starting level.
    pub fn max_raising_shift(self) -> usize {
        match self {
            OpIdentity::E24Commutator => 1,
            _ => 0,
        }
    }
}

/// Parameters of one identity check: the order (`k` or `m` depending on
/// the identity), the bracket kind, and the commutator-parameter choice.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OpParams {
    pub order: usize,
    pub kind: BracketKind,
    pub q_choice: QChoice,
}

impl OpParams {
    pub fn new(order: usize, kind: BracketKind) -> OpParams {
        OpParams { order, kind, q_choice: QChoice::QEqualsQ }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub level: usize,
    pub residual: String,
}

/// Outcome of one oracle check.
#[derive(Debug, Clone, Serialize)]
pub struct FockReport {
    pub id: String,
    pub params: OpParams,
    pub dim: usize,
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
}

fn falling_bracket_product(l: i64, k: usize, kind: BracketKind) -> Poly {
    let mut acc = Poly::one();
    for i in 0..k as i64 {
        acc = acc.mul_ref(&bracket(l - i, kind));
    }
    acc
}

/// Builds the two sides of an identity as matrices.
fn identity_sides(
    id: OpIdentity,
    params: &OpParams,
    rep: &FockRep,
) -> Result<(FockMatrix, FockMatrix), FockError> {
    let dim = rep.dim;
    let kind = params.kind;
    let q = Poly::sym(Sym::Q);
    let p_val = kind.p_value();
    match id {
        OpIdentity::E24Commutator => {
            let k = params.order;
            let q_val = params.q_choice.q_value(kind);
            let ak = rep.a.pow(k);
            let lhs = ak
                .mul(&rep.adag)
                .sub(&rep.adag.mul(&ak).scale(&q_val.pow(k as i64)?));
            // Φ(k,l) = [l+k] - Q^k [l], evaluated per level.
            let phi = FockMatrix::diagonal(dim, |l| {
                bracket(l as i64 + k as i64, kind)
                    .sub_ref(&q_val.pow(k as i64).unwrap().mul_ref(&bracket(l as i64, kind)))
            });
            let rhs = phi.mul(&rep.a.pow(k - 1));
            Ok((lhs, rhs))
        }
        OpIdentity::E28Falling => {
            let k = params.order;
            let lhs = FockMatrix::diagonal(dim, |l| falling_bracket_product(l as i64, k, kind));
            let rhs = rep.adag.pow(k).mul(&rep.a.pow(k));
            Ok((lhs, rhs))
        }
        OpIdentity::E31BracketFalling => {
            let k = params.order;
            let lhs = FockMatrix::diagonal(dim, |l| {
                let mut acc = Poly::one();
                for i in 0..k as i64 {
                    let factor = bracket(l as i64, kind).sub_ref(
                        &p_val
                            .pow(l as i64 - i)
                            .unwrap()
                            .mul_ref(&bracket(i, kind)),
                    );
                    acc = acc.mul_ref(&factor);
                }
                acc
            });
            let rhs = rep
                .adag
                .pow(k)
                .mul(&rep.a.pow(k))
                .scale(&q.pow(tri(k as i64))?);
            Ok((lhs, rhs))
        }
        OpIdentity::E30NormalOrder => {
            let m = params.order;
            // Scalar route: coefficients from the reduced second-kind
            // table, C_k(j) = q^(k(k-1)/2) p^((m-k)j) Ξ(m,k) with the
            // kind's p substituted. Independent of the operator-valued
            // recurrence checked by E34.
            let xi = build_table(StirlingFamily::ReducedSecondXi, m);
            let lhs = FockMatrix::diagonal(dim, |l| {
                bracket(l as i64, kind).pow(m as i64).unwrap()
            });
            let mut rhs = FockMatrix::zero(dim);
            for k in 1..=m {
                let xi_spec = xi.entry(m, k).substitute(Sym::P, &p_val)?;
                let scale = q.pow(tri(k as i64))?.mul_ref(&xi_spec);
                let coeff = FockMatrix::diagonal(dim, |j| {
                    scale.mul_ref(
                        &p_val
                            .pow((m as i64 - k as i64) * j as i64)
                            .unwrap(),
                    )
                });
                let term = rep.adag.pow(k).mul(&coeff).mul(&rep.a.pow(k));
                rhs = rhs.add(&term);
            }
            Ok((lhs, rhs))
        }
        OpIdentity::E34GeneralNormal => {
            let m = params.order;
            let table = ShatSecondTable::build(m, params.q_choice, kind);
            let lhs = FockMatrix::diagonal(dim, |l| {
                bracket(l as i64, kind).pow(m as i64).unwrap()
            });
            let mut rhs = FockMatrix::zero(dim);
            for k in 1..=m {
                let shat = table.entry(m, k);
                let coeff = FockMatrix::diagonal(dim, |j| shat.eval(j as i64).unwrap());
                let term = rep.adag.pow(k).mul(&coeff).mul(&rep.a.pow(k));
                rhs = rhs.add(&term);
            }
            Ok((lhs, rhs))
        }
        OpIdentity::E33Inverse => {
            let k = params.order;
            let table = ShatFirstTable::build(k, kind);
            let lhs = rep.adag.pow(k).mul(&rep.a.pow(k));
            let rhs = FockMatrix::diagonal(dim, |l| {
                let mut acc = Poly::zero();
                for m in 1..=k {
                    let coeff = table.entry(k, m).eval(l as i64).unwrap();
                    let power = bracket(l as i64, kind).pow(m as i64).unwrap();
                    acc = acc.add_ref(&coeff.mul_ref(&power));
                }
                acc
            });
            Ok((lhs, rhs))
        }
        OpIdentity::E45RightForm => {
            let m = params.order;
            let table = ShatSecondTable::build(m, params.q_choice, kind);
            let lhs = FockMatrix::diagonal(dim, |l| {
                bracket(l as i64, kind).pow(m as i64).unwrap()
            });
            let mut rhs = FockMatrix::zero(dim);
            for k in 1..=m {
                let shifted = table.entry(m, k).shift(-(k as i64));
                let coeff = FockMatrix::diagonal(dim, |l| shifted.eval(l as i64).unwrap());
                let term = rep.adag.pow(k).mul(&rep.a.pow(k)).mul(&coeff);
                rhs = rhs.add(&term);
            }
            Ok((lhs, rhs))
        }
        OpIdentity::E51Genfun => {
            unreachable!("E51 is dispatched to verify_genfun")
        }
    }
}

/// Checks one identity on its safe subspace, exactly.
pub fn verify_operator_identity(
    id: OpIdentity,
    params: &OpParams,
    dim: usize,
) -> Result<FockReport, FockError> {
    let levels: Vec<usize> = safe_levels(id.max_raising_shift(), dim)?.collect();
    verify_identity_on_levels(id, params, dim, &levels)
}

/// Checks one identity on an explicit set of levels. Including the edge
/// state `dim - 1` for a raising identity is the deliberate negative
/// control: truncation must make it fail there.
pub fn verify_identity_on_levels(
    id: OpIdentity,
    params: &OpParams,
    dim: usize,
    levels: &[usize],
) -> Result<FockReport, FockError> {
    if id == OpIdentity::E51Genfun {
        return verify_genfun(params.order, dim, params.kind);
    }
    let rep = build_fock_rep(dim, params.kind);
    let (lhs, rhs) = identity_sides(id, params, &rep)?;
    let mut counterexample = None;
    'outer: for &l in levels {
        let cl = lhs.column(l);
        let cr = rhs.column(l);
        for row in 0..dim {
            let residual = cl[row].sub_ref(&cr[row]);
            if !residual.is_zero() {
                counterexample = Some(Counterexample {
                    level: l,
                    residual: residual.to_string(),
                });
                break 'outer;
            }
        }
    }
    Ok(FockReport {
        id: id.name().to_string(),
        params: *params,
        dim,
        pass: counterexample.is_none(),
        counterexample,
    })
}

/// Generating-function identity: for every level `l` and order `k`, the
/// `λ^k` coefficient of the Pochhammer product `(λ;1)^(l)` rescaled per
/// the closed form must reproduce the diagonal of `(a†)^k a^k` (the
/// `λ`-derivative is replaced by `k!` times exact coefficient
/// extraction, and the `k!` cancels).
pub fn verify_genfun(k_max: usize, dim: usize, kind: BracketKind) -> Result<FockReport, FockError> {
    assert!(dim > k_max, "need dim >= k_max + 1");
    let q = Poly::sym(Sym::Q);
    let p_val = kind.p_value();
    let params = OpParams { order: k_max, kind, q_choice: QChoice::QEqualsQ };
    let mut counterexample = None;
    'outer: for l in 0..dim {
        // (λ;1)^(l) with this kind's p.
        let poch = g_pochhammer(l as u32, &Poly::one()).substitute(Sym::P, &p_val)?;
        let mut factorial = Poly::one();
        for k in 0..=k_max {
            if k > 0 {
                factorial = factorial.mul_ref(&bracket(k as i64, kind));
            }
            let coeff = poch.coefficient_of(Sym::Lambda, k as i64);
            let lhs = falling_bracket_product(l as i64, k, kind)
                .mul_ref(&p_val.pow(tri(k as i64))?)
                .mul_ref(&q.pow(tri(l as i64 - k as i64))?);
            let rhs = factorial.mul_ref(&coeff);
            let residual = lhs.sub_ref(&rhs);
            if !residual.is_zero() {
                counterexample = Some(Counterexample {
                    level: l,
                    residual: residual.to_string(),
                });
                break 'outer;
            }
        }
    }
    Ok(FockReport {
        id: OpIdentity::E51Genfun.name().to_string(),
        params,
        dim,
        pass: counterexample.is_none(),
        counterexample,
    })
}

/// Pointwise normal-ordering coefficients determined from the Fock
/// action alone, with no use of the operator-valued recurrence.
///
/// The expansion `[l]^m = Σ_k c_k(l-k) Π_{i<k}[l-i]` does not pin the
/// coefficient functions pointwise (each unknown value appears in
/// exactly one level equation), so the solve uses the single-exponential
/// shape `c_k(j) = Ξ̂_k p^((m-k)j)` that the coefficients are required to
/// have: levels `1..=m` then determine the scalars `Ξ̂_k` triangularly,
/// and every remaining level up to the cutoff is an overdetermined
/// consistency check that must come out exactly.
pub struct OracleCoeffs {
    pub m: usize,
    pub kind: BracketKind,
    pub dim: usize,
    /// `(k, l) -> c_k(l)`.
    pub values: std::collections::BTreeMap<(usize, usize), Poly>,
}

pub fn oracle_normal_coeffs(
    m: usize,
    kind: BracketKind,
    dim: usize,
) -> Result<OracleCoeffs, FockError> {
    assert!(m >= 1 && dim > m, "need dim > m >= 1");
    let p_val = kind.p_value();
    let mut scalars: Vec<Poly> = Vec::with_capacity(m);
    for k in 1..=m {
        let l = k as i64;
        let mut residual = bracket(l, kind).pow(m as i64)?;
        for (j, scalar) in scalars.iter().enumerate() {
            let j = j + 1;
            let value = scalar.mul_ref(
                &p_val.pow((m as i64 - j as i64) * (l - j as i64))?,
            );
            residual = residual.sub_ref(&value.mul_ref(&falling_bracket_product(l, j, kind)));
        }
        let divisor = falling_bracket_product(l, k, kind);
        if divisor.is_zero() {
            return Err(FockError::SingularSystem(format!(
                "vanishing falling product at level {k}"
            )));
        }
        let scalar = residual
            .div_exact(&divisor)
            .map_err(|_| FockError::SingularSystem(format!("inexact division at level {k}")))?;
        scalars.push(scalar);
    }
    // Consistency at every remaining level: the solved coefficients must
    // reproduce [l]^m exactly all the way to the cutoff.
    for l in (m + 1)..dim {
        let li = l as i64;
        let mut sum = Poly::zero();
        for k in 1..=m {
            let value = scalars[k - 1].mul_ref(
                &p_val.pow((m as i64 - k as i64) * (li - k as i64))?,
            );
            sum = sum.add_ref(&value.mul_ref(&falling_bracket_product(li, k, kind)));
        }
        if sum != bracket(li, kind).pow(m as i64)? {
            return Err(FockError::Inconsistent { level: l });
        }
    }
    let mut values = std::collections::BTreeMap::new();
    for k in 1..=m {
        for l in 0..dim.saturating_sub(k) {
            let v = scalars[k - 1].mul_ref(
                &p_val.pow((m as i64 - k as i64) * l as i64)?,
            );
            values.insert((k, l), v);
        }
    }
    Ok(OracleCoeffs { m, kind, dim, values })
}

// ---------------------------------------------------------------------------
// Floating-point corroboration of the asymmetric-normalization argument
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct FloatReport {
    pub dim: usize,
    pub samples: usize,
    pub max_order: usize,
    pub max_relative_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

type FMat = Vec<Vec<f64>>;

fn fmat_zero(dim: usize) -> FMat {
    vec![vec![0.0; dim]; dim]
}

fn fmat_identity(dim: usize) -> FMat {
    let mut m = fmat_zero(dim);
    for i in 0..dim {
        m[i][i] = 1.0;
    }
    m
}

fn fmat_mul(a: &FMat, b: &FMat) -> FMat {
    let dim = a.len();
    let mut out = fmat_zero(dim);
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k] == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn fmat_pow(a: &FMat, e: usize) -> FMat {
    let mut acc = fmat_identity(a.len());
    for _ in 0..e {
        acc = fmat_mul(&acc, a);
    }
    acc
}

fn fmat_diag(dim: usize, f: impl Fn(usize) -> f64) -> FMat {
    let mut m = fmat_zero(dim);
    for l in 0..dim {
        m[l][l] = f(l);
    }
    m
}

fn fmat_add(a: &FMat, b: &FMat) -> FMat {
    let dim = a.len();
    let mut out = fmat_zero(dim);
    for i in 0..dim {
        for j in 0..dim {
            out[i][j] = a[i][j] + b[i][j];
        }
    }
    out
}

fn fmat_axpy(a: &FMat, s: f64, b: &FMat) -> FMat {
    let dim = a.len();
    let mut out = fmat_zero(dim);
    for i in 0..dim {
        for j in 0..dim {
            out[i][j] = a[i][j] + s * b[i][j];
        }
    }
    out
}

/// Relative residual between two matrices restricted to the given
/// columns.
fn rel_residual(lhs: &FMat, rhs: &FMat, cols: std::ops::Range<usize>) -> f64 {
    let dim = lhs.len();
    let mut num: f64 = 0.0;
    let mut den: f64 = 1.0;
    for j in cols {
        for i in 0..dim {
            num = num.max((lhs[i][j] - rhs[i][j]).abs());
            den = den.max(lhs[i][j].abs()).max(rhs[i][j].abs());
        }
    }
    num / den
}

/// Re-checks the operator-identity suite in the symmetric `√[l]`
/// normalization at random rational `(q, p)` in `(1/2, 2)`, in floating
/// point. Finite residuals below the tolerance corroborate that the
/// exact asymmetric representation proves the same identities.
pub fn float_corroboration(dim: usize, samples: usize, max_order: usize) -> FloatReport {
    let tolerance = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c1a_11ed);
    let mut worst: f64 = 0.0;
    let point = |q0: &Rational, p0: &Rational| -> [Rational; 5] {
        [
            q0.clone(),
            p0.clone(),
            q0.clone(), // Q = q throughout this suite
            ratio(1, 1),
            ratio(1, 1),
        ]
    };
    for _ in 0..samples {
        // Random rationals in (1/2, 2): denominator 8..16, numerator
        // strictly inside the open interval.
        let mut draw = || {
            let d = rng.gen_range(8i64..=16);
            let n = rng.gen_range(d / 2 + 1..=2 * d - 1);
            ratio(n, d)
        };
        let q0 = draw();
        let p0_raw = draw();
        for kind in BracketKind::ALL {
            let p0 = match kind {
                BracketKind::M => ratio(1, 1),
                BracketKind::P => q0.recip(),
                BracketKind::G => p0_raw.clone(),
            };
            let at = point(&q0, &p0);
            let br = |l: i64| bracket(l, kind).eval_f64(&at).unwrap();
            // Symmetric ladder matrices.
            let mut a = fmat_zero(dim);
            for l in 1..dim {
                a[l - 1][l] = br(l as i64).sqrt();
            }
            let mut adag = fmat_zero(dim);
            for l in 0..dim - 1 {
                adag[l + 1][l] = br(l as i64 + 1).sqrt();
            }
            let q0f = Poly::sym(Sym::Q).eval_f64(&at).unwrap();
            for order in 1..=max_order {
                worst = worst.max(float_identity_residuals(
                    dim, kind, order, &a, &adag, &br, q0f, &at,
                ));
            }
        }
    }
    FloatReport {
        dim,
        samples,
        max_order,
        max_relative_residual: worst,
        tolerance,
        pass: worst < tolerance,
    }
}

#[allow(clippy::too_many_arguments)]
fn float_identity_residuals(
    dim: usize,
    kind: BracketKind,
    order: usize,
    a: &FMat,
    adag: &FMat,
    br: &dyn Fn(i64) -> f64,
    q0: f64,
    at: &[Rational; 5],
) -> f64 {
    let k = order;
    let m = order;
    let p0 = kind.p_value().eval_f64(at).unwrap();
    let mut worst: f64 = 0.0;
    let safe_all = 0..dim;
    let safe_e24 = 0..dim - 1;

    // E24: a^k a† - q^k a† a^k = Φ(k,n̂) a^(k-1)
    let ak = fmat_pow(a, k);
    let lhs = fmat_axpy(&fmat_mul(&ak, adag), -q0.powi(k as i32), &fmat_mul(adag, &ak));
    let phi = fmat_diag(dim, |l| br(l as i64 + k as i64) - q0.powi(k as i32) * br(l as i64));
    let rhs = fmat_mul(&phi, &fmat_pow(a, k - 1));
    worst = worst.max(rel_residual(&lhs, &rhs, safe_e24.clone()));

    let falling = |l: i64, k: usize| -> f64 {
        (0..k as i64).map(|i| br(l - i)).product()
    };
    let adagk_ak = fmat_mul(&fmat_pow(adag, k), &fmat_pow(a, k));

    // E28
    let lhs = fmat_diag(dim, |l| falling(l as i64, k));
    worst = worst.max(rel_residual(&lhs, &adagk_ak, safe_all.clone()));

    // E31
    let lhs = fmat_diag(dim, |l| {
        (0..k as i64)
            .map(|i| br(l as i64) - p0.powi((l as i64 - i) as i32) * br(i))
            .product()
    });
    let rhs = {
        let scale = q0.powi(tri(k as i64) as i32);
        fmat_axpy(&fmat_zero(dim), scale, &adagk_ak)
    };
    worst = worst.max(rel_residual(&lhs, &rhs, safe_all.clone()));

    // E30 / E34 (numerically identical coefficient values) and E45.
    let table = ShatSecondTable::build(m, QChoice::QEqualsQ, kind);
    let lhs = fmat_diag(dim, |l| br(l as i64).powi(m as i32));
    let mut rhs = fmat_zero(dim);
    let mut rhs_right = fmat_zero(dim);
    for kk in 1..=m {
        let shat = table.entry(m, kk);
        let coeff = fmat_diag(dim, |j| shat.eval(j as i64).unwrap().eval_f64(at).unwrap());
        rhs = fmat_add(
            &rhs,
            &fmat_mul(&fmat_mul(&fmat_pow(adag, kk), &coeff), &fmat_pow(a, kk)),
        );
        let shifted = shat.shift(-(kk as i64));
        let coeff_r = fmat_diag(dim, |l| shifted.eval(l as i64).unwrap().eval_f64(at).unwrap());
        rhs_right = fmat_add(
            &rhs_right,
            &fmat_mul(&fmat_mul(&fmat_pow(adag, kk), &fmat_pow(a, kk)), &coeff_r),
        );
    }
    worst = worst.max(rel_residual(&lhs, &rhs, safe_all.clone()));
    worst = worst.max(rel_residual(&lhs, &rhs_right, safe_all.clone()));

    // E33
    let first = ShatFirstTable::build(k, kind);
    let rhs = fmat_diag(dim, |l| {
        (1..=k)
            .map(|mm| {
                first.entry(k, mm).eval(l as i64).unwrap().eval_f64(at).unwrap()
                    * br(l as i64).powi(mm as i32)
            })
            .sum()
    });
    worst = worst.max(rel_residual(&adagk_ak, &rhs, safe_all));

    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boson::shat_second_kind;
    use crate::bracket::bracket_factorial;

    #[test]
    fn fock_rep_spec_cases() {
        // D=3, M: a†a = diag(0, 1, 1+q)
        let rep = build_fock_rep(3, BracketKind::M);
        let prod = rep.adag.mul(&rep.a);
        for l in 0..3 {
            assert_eq!(*prod.entry(l, l), bracket(l as i64, BracketKind::M));
        }
        // D=3, G: a a† = diag([1], [2]) below the edge.
        let rep = build_fock_rep(3, BracketKind::G);
        let prod = rep.a.mul(&rep.adag);
        for l in 0..2 {
            assert_eq!(*prod.entry(l, l), bracket(l as i64 + 1, BracketKind::G));
        }
        // D=2: N = diag(0, 1)
        let rep = build_fock_rep(2, BracketKind::P);
        assert_eq!(*rep.n.entry(0, 0), Poly::zero());
        assert_eq!(*rep.n.entry(1, 1), Poly::one());
    }

    #[test]
    fn safe_levels_examples() {
        assert_eq!(safe_levels(0, 8).unwrap(), 0..8);
        assert_eq!(safe_levels(1, 8).unwrap(), 0..7);
        assert!(matches!(
            safe_levels(8, 8),
            Err(FockError::EmptySafeRange { .. })
        ));
    }

    #[test]
    fn identity_suite_all_kinds() {
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
                        verify_operator_identity(id, &OpParams::new(order, kind), 10).unwrap();
                    assert!(
                        report.pass,
                        "{} kind {} order {} failed: {:?}",
                        report.id, kind, order, report.counterexample
                    );
                }
            }
        }
    }

    #[test]
    fn normal_forms_hold_through_order_six() {
        for kind in BracketKind::ALL {
            let report = verify_operator_identity(
                OpIdentity::E34GeneralNormal,
                &OpParams::new(6, kind),
                10,
            )
            .unwrap();
            assert!(report.pass, "kind {kind} m=6: {:?}", report.counterexample);
            let report =
                verify_operator_identity(OpIdentity::E30NormalOrder, &OpParams::new(6, kind), 10)
                    .unwrap();
            assert!(report.pass, "kind {kind} m=6 scalar route");
        }
    }

    #[test]
    fn e24_reduces_to_phi_at_k_equals_one() {
        for kind in BracketKind::ALL {
            let report =
                verify_operator_identity(OpIdentity::E24Commutator, &OpParams::new(1, kind), 10)
                    .unwrap();
            assert!(report.pass);
        }
    }

    #[test]
    fn e24_alternative_q_choices() {
        for kind in BracketKind::ALL {
            for q_choice in [QChoice::Symbolic, QChoice::QEqualsP, QChoice::QEqualsOne] {
                for k in 1..=4 {
                    let params = OpParams { order: k, kind, q_choice };
                    let report =
                        verify_operator_identity(OpIdentity::E24Commutator, &params, 8).unwrap();
                    assert!(report.pass, "kind {kind} {q_choice:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn e34_with_symbolic_q() {
        for kind in BracketKind::ALL {
            for m in 1..=4 {
                let params = OpParams { order: m, kind, q_choice: QChoice::Symbolic };
                let report =
                    verify_operator_identity(OpIdentity::E34GeneralNormal, &params, 8).unwrap();
                assert!(report.pass, "kind {kind} m={m}: {:?}", report.counterexample);
            }
        }
    }

    #[test]
    fn edge_state_negative_control() {
        // E24 evaluated at the truncation edge l = D-1 must fail.
        for kind in BracketKind::ALL {
            let dim = 8;
            let report = verify_identity_on_levels(
                OpIdentity::E24Commutator,
                &OpParams::new(2, kind),
                dim,
                &[dim - 1],
            )
            .unwrap();
            assert!(!report.pass, "edge control unexpectedly passed for {kind}");
            assert_eq!(report.counterexample.unwrap().level, dim - 1);
        }
    }

    #[test]
    fn oracle_coeffs_match_recurrence() {
        let dim = 10;
        for kind in BracketKind::ALL {
            for m in 1..=5 {
                let oracle = oracle_normal_coeffs(m, kind, dim).unwrap();
                let table = ShatSecondTable::build(m, QChoice::QEqualsQ, kind);
                for k in 1..=m {
                    let shat = table.entry(m, k);
                    for l in 0..dim - k {
                        let expect = shat.eval(l as i64).unwrap();
                        assert_eq!(
                            oracle.values[&(k, l)],
                            expect,
                            "kind {kind} m={m} k={k} l={l}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_coeffs_spec_cases() {
        // m=1: c_1(l) = 1 for all l.
        let oracle = oracle_normal_coeffs(1, BracketKind::M, 8).unwrap();
        for l in 0..7 {
            assert_eq!(oracle.values[&(1, l)], Poly::one());
        }
        // m=2, M: c_1 = 1, c_2 = q.
        let oracle = oracle_normal_coeffs(2, BracketKind::M, 8).unwrap();
        for l in 0..6 {
            assert_eq!(oracle.values[&(1, l)], Poly::one());
            assert_eq!(oracle.values[&(2, l)], Poly::sym(Sym::Q));
        }
        // m=2, G: c_1(l) = p^l, c_2 = q.
        let oracle = oracle_normal_coeffs(2, BracketKind::G, 8).unwrap();
        for l in 0..6 {
            assert_eq!(
                oracle.values[&(1, l)],
                Poly::sym(Sym::P).pow(l as i64).unwrap()
            );
            assert_eq!(oracle.values[&(2, l)], Poly::sym(Sym::Q));
        }
    }

    #[test]
    fn genfun_all_kinds() {
        for kind in BracketKind::ALL {
            let report = verify_genfun(5, 8, kind).unwrap();
            assert!(report.pass, "genfun failed for {kind}: {:?}", report.counterexample);
        }
    }

    #[test]
    fn genfun_spec_example_values() {
        // k=2, l=2, G: λ^2 coefficient of (λ+1)(pλ+q) is p; the scaled
        // coefficient equals [2][1] = p + q.
        let poch = g_pochhammer(2, &Poly::one());
        let c2 = poch.coefficient_of(Sym::Lambda, 2);
        assert_eq!(c2, Poly::sym(Sym::P));
        let factorial = bracket_factorial(2);
        let lhs = falling_bracket_product(2, 2, BracketKind::G)
            .mul_ref(&Poly::sym(Sym::P).pow(1).unwrap())
            .mul_ref(&Poly::sym(Sym::Q).pow(0).unwrap());
        assert_eq!(lhs, factorial.mul_ref(&c2));
    }

    #[test]
    fn e34_spec_example_on_state_two() {
        // m=2, G at l=2: p [2] + q [2][1] = [2]^2.
        let p = Poly::sym(Sym::P);
        let q = Poly::sym(Sym::Q);
        let b2 = bracket(2, BracketKind::G);
        let b1 = bracket(1, BracketKind::G);
        let lhs = p.mul_ref(&b2).add_ref(&q.mul_ref(&b2).mul_ref(&b1));
        assert_eq!(lhs, b2.pow(2).unwrap());
        let s21 = shat_second_kind(2, 1, QChoice::QEqualsQ, BracketKind::G);
        assert_eq!(s21.eval(0).unwrap(), Poly::one());
    }

    #[test]
    fn float_corroboration_passes() {
        let report = float_corroboration(10, 20, 5);
        assert!(
            report.pass,
            "max relative residual {} exceeds {}",
            report.max_relative_residual, report.tolerance
        );
        assert!(report.max_relative_residual.is_finite());
    }
}
