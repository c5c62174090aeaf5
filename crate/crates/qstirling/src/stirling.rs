//! Scalar Stirling families: classical, q-deformed, tilde-q-deformed,
//! Wachs–White, and the reduced Ξ/ξ/Ξ′ numbers.
//!
//! Each family is a triangular table built from its recurrence with
//! `entry(1,1) = 1` and implicit zeros outside `1 <= col <= row`.
//! First-kind tables are indexed `(k, m)` — row `k` is the order of the
//! falling product; second-kind tables are indexed `(m, k)` — row `m`
//! is the power being expanded.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bracket::{bracket, tri, BracketKind};
use crate::poly::{Poly, Sym};
use crate::rational::rat;

/// All supported Stirling families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StirlingFamily {
    ClassicalFirst,
    ClassicalSecond,
    QFirst,
    QSecond,
    TildeFirst,
    TildeSecond,
    WachsWhiteSecond,
    ReducedSecondXi,
    ReducedFirstXi,
    ReducedSecondXiPrime,
}

impl StirlingFamily {
    pub const ALL: [StirlingFamily; 10] = [
        StirlingFamily::ClassicalFirst,
        StirlingFamily::ClassicalSecond,
        StirlingFamily::QFirst,
        StirlingFamily::QSecond,
        StirlingFamily::TildeFirst,
        StirlingFamily::TildeSecond,
        StirlingFamily::WachsWhiteSecond,
        StirlingFamily::ReducedSecondXi,
        StirlingFamily::ReducedFirstXi,
        StirlingFamily::ReducedSecondXiPrime,
    ];

    /// The exact spelling accepted by the CLI and used in serialized
    /// tables.
    pub fn name(self) -> &'static str {
        match self {
            StirlingFamily::ClassicalFirst => "classical_first",
            StirlingFamily::ClassicalSecond => "classical_second",
            StirlingFamily::QFirst => "q_first",
            StirlingFamily::QSecond => "q_second",
            StirlingFamily::TildeFirst => "tilde_first",
            StirlingFamily::TildeSecond => "tilde_second",
            StirlingFamily::WachsWhiteSecond => "wachs_white_second",
            StirlingFamily::ReducedSecondXi => "reduced_second_Xi",
            StirlingFamily::ReducedFirstXi => "reduced_first_xi",
            StirlingFamily::ReducedSecondXiPrime => "reduced_second_XiPrime",
        }
    }

    pub fn from_name(s: &str) -> Option<StirlingFamily> {
        StirlingFamily::ALL.iter().copied().find(|f| f.name() == s)
    }

    pub fn is_first_kind(self) -> bool {
        matches!(
            self,
            StirlingFamily::ClassicalFirst
                | StirlingFamily::QFirst
                | StirlingFamily::TildeFirst
                | StirlingFamily::ReducedFirstXi
        )
    }
}

/// Triangular table of one Stirling family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    pub family: StirlingFamily,
    pub n_max: usize,
    rows: Vec<Vec<Poly>>,
}

impl StirlingTable {
    /// Entry at 1-based `(row, col)`; zero outside the triangle.
    pub fn entry(&self, row: usize, col: usize) -> Poly {
        if row >= 1 && col >= 1 && col <= row && row <= self.n_max {
            self.rows[row - 1][col - 1].clone()
        } else {
            Poly::zero()
        }
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StirlingError {
    #[error("tables are not a matched first/second-kind pair: {0} vs {1}")]
    MismatchedTables(&'static str, &'static str),
}

/// Builds the full triangular table for a family by its recurrence.
pub fn build_table(family: StirlingFamily, n_max: usize) -> StirlingTable {
    assert!(n_max >= 1, "n_max must be at least 1");
    if family == StirlingFamily::ReducedSecondXiPrime {
        // Ξ'(m,k) = p^(k(k-m)) Ξ(m,k): a rescaling of the Ξ table.
        let xi = build_table(StirlingFamily::ReducedSecondXi, n_max);
        let p = Poly::sym(Sym::P);
        let rows = (1..=n_max)
            .map(|m| {
                (1..=m)
                    .map(|k| {
                        let scale = p.pow(k as i64 * (k as i64 - m as i64)).unwrap();
                        xi.entry(m, k).mul_ref(&scale)
                    })
                    .collect()
            })
            .collect();
        return StirlingTable { family, n_max, rows };
    }

    let mut rows: Vec<Vec<Poly>> = vec![vec![Poly::one()]];
    for next in 2..=n_max {
        let prev_row = &rows[next - 2];
        let at = |col: usize| -> Poly {
            if col >= 1 && col <= prev_row.len() {
                prev_row[col - 1].clone()
            } else {
                Poly::zero()
            }
        };
        let mut row = Vec::with_capacity(next);
        for col in 1..=next {
            row.push(recurrence_step(family, next, col, &at));
        }
        rows.push(row);
    }
    StirlingTable { family, n_max, rows }
}

/// One application of the family's recurrence producing `entry(next, col)`
/// from the previous row. `next` is the new row index.
fn recurrence_step(
    family: StirlingFamily,
    next: usize,
    col: usize,
    prev: &dyn Fn(usize) -> Poly,
) -> Poly {
    let q = Poly::sym(Sym::Q);
    let p = Poly::sym(Sym::P);
    let k_prev = (next - 1) as i64; // first kind: previous product order
    match family {
        // s(k+1,m) = s(k,m-1) - k s(k,m)
        StirlingFamily::ClassicalFirst => {
            prev(col - 1).sub_ref(&prev(col).scale(&rat(k_prev)))
        }
        // S(m+1,k) = S(m,k-1) + k S(m,k)
        StirlingFamily::ClassicalSecond => {
            prev(col - 1).add_ref(&prev(col).scale(&rat(col as i64)))
        }
        // s_q(k+1,m) = q^-k (s_q(k,m-1) - [k]_M s_q(k,m))
        StirlingFamily::QFirst => {
            let inner = prev(col - 1).sub_ref(&bracket(k_prev, BracketKind::M).mul_ref(&prev(col)));
            q.pow(-k_prev).unwrap().mul_ref(&inner)
        }
        // S_q(m+1,k) = q^(k-1) S_q(m,k-1) + [k]_M S_q(m,k)
        StirlingFamily::QSecond => q
            .pow(col as i64 - 1)
            .unwrap()
            .mul_ref(&prev(col - 1))
            .add_ref(&bracket(col as i64, BracketKind::M).mul_ref(&prev(col))),
        // s~(k+1,m) = s~(k,m-1) - [k]_M s~(k,m)
        StirlingFamily::TildeFirst => {
            prev(col - 1).sub_ref(&bracket(k_prev, BracketKind::M).mul_ref(&prev(col)))
        }
        // S~(m+1,k) = S~(m,k-1) + [k]_M S~(m,k)
        StirlingFamily::TildeSecond => {
            prev(col - 1).add_ref(&bracket(col as i64, BracketKind::M).mul_ref(&prev(col)))
        }
        // S_pq(m+1,k) = p^(k-1) S_pq(m,k-1) + [k]_G S_pq(m,k)
        StirlingFamily::WachsWhiteSecond => p
            .pow(col as i64 - 1)
            .unwrap()
            .mul_ref(&prev(col - 1))
            .add_ref(&bracket(col as i64, BracketKind::G).mul_ref(&prev(col))),
        // Ξ(m+1,k) = p^(m-k+1) Ξ(m,k-1) + [k]_G Ξ(m,k)
        StirlingFamily::ReducedSecondXi => {
            let m_prev = (next - 1) as i64;
            p.pow(m_prev - col as i64 + 1)
                .unwrap()
                .mul_ref(&prev(col - 1))
                .add_ref(&bracket(col as i64, BracketKind::G).mul_ref(&prev(col)))
        }
        // ξ(k+1,m) = ξ(k,m-1) - p^-k [k]_G ξ(k,m)
        StirlingFamily::ReducedFirstXi => {
            let penalty = p
                .pow(-k_prev)
                .unwrap()
                .mul_ref(&bracket(k_prev, BracketKind::G));
            prev(col - 1).sub_ref(&penalty.mul_ref(&prev(col)))
        }
        StirlingFamily::ReducedSecondXiPrime => unreachable!("built by rescaling"),
    }
}

/// Falling-product flavors expanded as polynomials in the formal `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallingProduct {
    /// `X (X-1) ... (X-k+1)` — the classical product, `X` a plain variable.
    Classical,
    /// `Π q^-i (X - [i]_M)` — each `[x-i]_M` rewritten through
    /// `[a]-[b] = q^b [a-b]`; coefficients are `s_q(k, ·)`.
    MShifted,
    /// `Π (X - [i]_M)` — the bracket-difference form; coefficients are
    /// the tilde numbers.
    MBracketDiff,
    /// `Π (X - p^-i [i]_G)` — the G form in the rescaled operator
    /// variable `p^-n̂ [n̂]_G`; coefficients are the reduced ξ numbers.
    GOperator,
}

impl FallingProduct {
    /// The first-kind family whose entries appear as the coefficients of
    /// this product, and the matching second-kind family for inversion.
    pub fn first_kind_family(self) -> StirlingFamily {
        match self {
            FallingProduct::Classical => StirlingFamily::ClassicalFirst,
            FallingProduct::MShifted => StirlingFamily::QFirst,
            FallingProduct::MBracketDiff => StirlingFamily::TildeFirst,
            FallingProduct::GOperator => StirlingFamily::ReducedFirstXi,
        }
    }

    pub fn second_kind_family(self) -> StirlingFamily {
        match self {
            FallingProduct::Classical => StirlingFamily::ClassicalSecond,
            FallingProduct::MShifted => StirlingFamily::QSecond,
            FallingProduct::MBracketDiff => StirlingFamily::TildeSecond,
            FallingProduct::GOperator => StirlingFamily::ReducedSecondXiPrime,
        }
    }

    pub fn for_second_kind(family: StirlingFamily) -> Option<FallingProduct> {
        match family {
            StirlingFamily::ClassicalSecond => Some(FallingProduct::Classical),
            StirlingFamily::QSecond => Some(FallingProduct::MShifted),
            StirlingFamily::TildeSecond => Some(FallingProduct::MBracketDiff),
            StirlingFamily::ReducedSecondXiPrime => Some(FallingProduct::GOperator),
            _ => None,
        }
    }

    pub fn for_first_kind(family: StirlingFamily) -> Option<FallingProduct> {
        match family {
            StirlingFamily::ClassicalFirst => Some(FallingProduct::Classical),
            StirlingFamily::QFirst => Some(FallingProduct::MShifted),
            StirlingFamily::TildeFirst => Some(FallingProduct::MBracketDiff),
            StirlingFamily::ReducedFirstXi => Some(FallingProduct::GOperator),
            _ => None,
        }
    }
}

/// Expands the order-`k` falling product as a polynomial in `X`.
pub fn falling_product_expand(flavor: FallingProduct, k: usize) -> Poly {
    assert!(k >= 1, "falling product order must be at least 1");
    let x = Poly::sym(Sym::X);
    let q = Poly::sym(Sym::Q);
    let p = Poly::sym(Sym::P);
    let mut acc = Poly::one();
    for i in 0..k as i64 {
        let factor = match flavor {
            FallingProduct::Classical => x.sub_ref(&Poly::int(i)),
            FallingProduct::MShifted => q
                .pow(-i)
                .unwrap()
                .mul_ref(&x.sub_ref(&bracket(i, BracketKind::M))),
            FallingProduct::MBracketDiff => x.sub_ref(&bracket(i, BracketKind::M)),
            FallingProduct::GOperator => {
                x.sub_ref(&p.pow(-i).unwrap().mul_ref(&bracket(i, BracketKind::G)))
            }
        };
        acc = acc.mul_ref(&factor);
    }
    acc
}

/// A named verification outcome with the first nonzero residual kept as
/// a witness.
#[derive(Debug, Clone)]
pub struct TableReport {
    pub what: String,
    pub pass: bool,
    pub witness: Option<(String, Poly)>,
}

impl TableReport {
    fn ok(what: impl Into<String>) -> TableReport {
        TableReport { what: what.into(), pass: true, witness: None }
    }

    fn fail(what: impl Into<String>, place: impl Into<String>, residual: Poly) -> TableReport {
        TableReport {
            what: what.into(),
            pass: false,
            witness: Some((place.into(), residual)),
        }
    }
}

/// Checks that the second-kind table inverts the expanded first-kind
/// products: `X^m = Σ_k T(m,k) · product_k(X)` for all `m <= n_max`.
/// Given a first-kind family instead, checks that the product expansion
/// coefficients reproduce the table entries.
pub fn verify_defining_relations(family: StirlingFamily, n_max: usize) -> TableReport {
    let what = format!("defining relations for {}", family.name());
    let table = build_table(family, n_max);
    if family.is_first_kind() {
        let flavor = match FallingProduct::for_first_kind(family) {
            Some(f) => f,
            None => return TableReport::fail(what, "no product flavor", Poly::one()),
        };
        for k in 1..=n_max {
            let product = falling_product_expand(flavor, k);
            for m in 1..=n_max {
                let got = product.coefficient_of(Sym::X, m as i64);
                let residual = got.sub_ref(&table.entry(k, m));
                if !residual.is_zero() {
                    return TableReport::fail(what, format!("(k={k}, m={m})"), residual);
                }
            }
        }
        return TableReport::ok(what);
    }
    let flavor = match FallingProduct::for_second_kind(family) {
        Some(f) => f,
        None => {
            // The Wachs-White family has no defining relation of this
            // shape; reject loudly rather than fabricating one.
            return TableReport::fail(what, "family has no defining relation", Poly::one());
        }
    };
    let x = Poly::sym(Sym::X);
    for m in 1..=n_max {
        let mut rhs = Poly::zero();
        for k in 1..=m {
            rhs = rhs.add_ref(&table.entry(m, k).mul_ref(&falling_product_expand(flavor, k)));
        }
        let residual = x.pow(m as i64).unwrap().sub_ref(&rhs);
        if !residual.is_zero() {
            return TableReport::fail(what, format!("m={m}"), residual);
        }
    }
    TableReport::ok(what)
}

/// The matched (first, second) duality pairs.
pub fn duality_pairs() -> [(StirlingFamily, StirlingFamily); 4] {
    [
        (StirlingFamily::ClassicalFirst, StirlingFamily::ClassicalSecond),
        (StirlingFamily::QFirst, StirlingFamily::QSecond),
        (StirlingFamily::TildeFirst, StirlingFamily::TildeSecond),
        (StirlingFamily::ReducedFirstXi, StirlingFamily::ReducedSecondXiPrime),
    ]
}

/// Verifies the two dual sums `Σ_m s(k,m) S(m,k') = δ(k,k')` and
/// `Σ_k S(m,k) s(k,m') = δ(m,m')` exactly for all indices up to `n_max`.
pub fn verify_duality(
    first: &StirlingTable,
    second: &StirlingTable,
) -> Result<TableReport, StirlingError> {
    let matched = duality_pairs()
        .iter()
        .any(|(f, s)| *f == first.family && *s == second.family);
    if !matched || first.n_max != second.n_max {
        return Err(StirlingError::MismatchedTables(
            first.family.name(),
            second.family.name(),
        ));
    }
    let n = first.n_max;
    let what = format!(
        "duality between {} and {}",
        first.family.name(),
        second.family.name()
    );
    for k in 1..=n {
        for kp in 1..=n {
            let mut sum = Poly::zero();
            for m in 1..=n {
                sum = sum.add_ref(&first.entry(k, m).mul_ref(&second.entry(m, kp)));
            }
            let expect = if k == kp { Poly::one() } else { Poly::zero() };
            let residual = sum.sub_ref(&expect);
            if !residual.is_zero() {
                return Ok(TableReport::fail(what, format!("(k={k}, k'={kp})"), residual));
            }
        }
    }
    for m in 1..=n {
        for mp in 1..=n {
            let mut sum = Poly::zero();
            for k in 1..=n {
                sum = sum.add_ref(&second.entry(m, k).mul_ref(&first.entry(k, mp)));
            }
            let expect = if m == mp { Poly::one() } else { Poly::zero() };
            let residual = sum.sub_ref(&expect);
            if !residual.is_zero() {
                return Ok(TableReport::fail(what, format!("(m={m}, m'={mp})"), residual));
            }
        }
    }
    Ok(TableReport::ok(what))
}

/// Checks `s~(k,m) = q^(k(k-1)/2) s_q(k,m)` and
/// `S~(m,k) = q^(-k(k-1)/2) S_q(m,k)` entrywise.
pub fn check_tilde_relation(n_max: usize) -> TableReport {
    let what = "tilde relation".to_string();
    let q = Poly::sym(Sym::Q);
    let s_q = build_table(StirlingFamily::QFirst, n_max);
    let s_tilde = build_table(StirlingFamily::TildeFirst, n_max);
    let cap_q = build_table(StirlingFamily::QSecond, n_max);
    let cap_tilde = build_table(StirlingFamily::TildeSecond, n_max);
    for row in 1..=n_max {
        for col in 1..=row {
            let scale = q.pow(tri(row as i64)).unwrap();
            let residual = s_tilde.entry(row, col).sub_ref(&scale.mul_ref(&s_q.entry(row, col)));
            if !residual.is_zero() {
                return TableReport::fail(what, format!("first kind (k={row}, m={col})"), residual);
            }
            let scale = q.pow(-tri(col as i64)).unwrap();
            let residual = cap_tilde
                .entry(row, col)
                .sub_ref(&scale.mul_ref(&cap_q.entry(row, col)));
            if !residual.is_zero() {
                return TableReport::fail(what, format!("second kind (m={row}, k={col})"), residual);
            }
        }
    }
    TableReport::ok(what)
}

/// Checks that the Wachs–White table specializes at `p = 1` to the tilde
/// second-kind table, entrywise.
pub fn check_wachs_white_reduction(n_max: usize) -> TableReport {
    let what = "Wachs-White reduction at p=1".to_string();
    let ww = build_table(StirlingFamily::WachsWhiteSecond, n_max);
    let tilde = build_table(StirlingFamily::TildeSecond, n_max);
    for m in 1..=n_max {
        for k in 1..=m {
            let specialized = ww.entry(m, k).substitute(Sym::P, &Poly::one()).unwrap();
            let residual = specialized.sub_ref(&tilde.entry(m, k));
            if !residual.is_zero() {
                return TableReport::fail(what, format!("(m={m}, k={k})"), residual);
            }
        }
    }
    TableReport::ok(what)
}

/// JSON form of a table: `{family, n_max, entries: [[string, ...], ...]}`
/// with polynomials in the canonical text format, one ragged row per
/// table row.
pub fn table_to_json(table: &StirlingTable) -> serde_json::Value {
    let entries: Vec<Vec<String>> = table
        .rows()
        .iter()
        .map(|row| row.iter().map(|p| p.to_string()).collect())
        .collect();
    serde_json::json!({
        "family": table.family.name(),
        "n_max": table.n_max,
        "entries": entries,
    })
}

/// Reads a table back from its JSON form.
pub fn table_from_json(value: &serde_json::Value) -> Result<StirlingTable, String> {
    let family = value
        .get("family")
        .and_then(|v| v.as_str())
        .and_then(StirlingFamily::from_name)
        .ok_or("missing or unknown family")?;
    let n_max = value
        .get("n_max")
        .and_then(|v| v.as_u64())
        .ok_or("missing n_max")? as usize;
    let entries = value
        .get("entries")
        .and_then(|v| v.as_array())
        .ok_or("missing entries")?;
    if entries.len() != n_max {
        return Err(format!("expected {n_max} rows, found {}", entries.len()));
    }
    let mut rows = Vec::with_capacity(n_max);
    for (r, row) in entries.iter().enumerate() {
        let row = row.as_array().ok_or("row is not an array")?;
        if row.len() != r + 1 {
            return Err(format!("row {} must have {} entries", r + 1, r + 1));
        }
        let mut out = Vec::with_capacity(row.len());
        for cell in row {
            let text = cell.as_str().ok_or("entry is not a string")?;
            let poly: Poly = text.parse().map_err(|e| format!("{e}"))?;
            out.push(poly);
        }
        rows.push(out);
    }
    Ok(StirlingTable { family, n_max, rows })
}

/// CSV form: one `row,col,polynomial` triple per line.
pub fn table_to_csv(table: &StirlingTable) -> String {
    let mut out = String::new();
    for (r, row) in table.rows().iter().enumerate() {
        for (c, poly) in row.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", r + 1, c + 1, poly));
        }
    }
    out
}

/// Plain-text form: one `(row,col) polynomial` line per entry.
pub fn table_to_text(table: &StirlingTable) -> String {
    let mut out = String::new();
    for (r, row) in table.rows().iter().enumerate() {
        for (c, poly) in row.iter().enumerate() {
            out.push_str(&format!("({},{}) {}\n", r + 1, c + 1, poly));
        }
    }
    out
}

/// Checks that a deformed family collapses to its classical counterpart
/// at `q = 1, p = 1`.
pub fn check_classical_limit(family: StirlingFamily, n_max: usize) -> TableReport {
    let what = format!("classical limit of {}", family.name());
    let classical = if family.is_first_kind() {
        build_table(StirlingFamily::ClassicalFirst, n_max)
    } else {
        build_table(StirlingFamily::ClassicalSecond, n_max)
    };
    let table = build_table(family, n_max);
    for row in 1..=n_max {
        for col in 1..=row {
            let specialized = table
                .entry(row, col)
                .substitute(Sym::Q, &Poly::one())
                .unwrap()
                .substitute(Sym::P, &Poly::one())
                .unwrap();
            let residual = specialized.sub_ref(&classical.entry(row, col));
            if !residual.is_zero() {
                return TableReport::fail(what, format!("({row}, {col})"), residual);
            }
        }
    }
    TableReport::ok(what)
}
