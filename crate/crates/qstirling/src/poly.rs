//! Exact multivariate Laurent polynomials over the rationals.
//!
//! The scalar ring for the whole crate: polynomials in the five fixed
//! symbols `q`, `p`, `Q`, `X`, `λ` with integer (possibly negative)
//! exponents and [`Rational`] coefficients. Terms are stored in a
//! `BTreeMap` keyed by the dense exponent vector, so every value is in
//! canonical form and equality is structural. All identity checks in the
//! crate reduce to "lhs − rhs is the empty polynomial".
//!
//! The rendered text form (see [`Poly::fmt`]) is a stable contract used
//! by the CLI and by golden tests: terms in ascending lexicographic
//! exponent order, explicit `*`, `^` for exponents, rationals as `a/b`,
//! e.g. `-1/2*q^-1*p^2 + 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::{rat, Rational};

/// Number of symbols in the fixed universe.
pub const NSYMS: usize = 5;

/// The fixed symbol universe. The order here defines the canonical
/// term order and the rendering order inside a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    /// Deformation parameter `q`.
    Q = 0,
    /// Second deformation parameter `p`.
    P = 1,
    /// Commutator parameter `Q`.
    BigQ = 2,
    /// Formal variable standing for a bracket (or a plain variable).
    X = 3,
    /// Expansion variable `λ` of the generating function.
    Lambda = 4,
}

impl Sym {
    pub const ALL: [Sym; NSYMS] = [Sym::Q, Sym::P, Sym::BigQ, Sym::X, Sym::Lambda];

    pub fn name(self) -> &'static str {
        match self {
            Sym::Q => "q",
            Sym::P => "p",
            Sym::BigQ => "Q",
            Sym::X => "X",
            Sym::Lambda => "λ",
        }
    }

    pub fn from_name(s: &str) -> Option<Sym> {
        match s {
            "q" => Some(Sym::Q),
            "p" => Some(Sym::P),
            "Q" => Some(Sym::BigQ),
            "X" => Some(Sym::X),
            "λ" | "lambda" => Some(Sym::Lambda),
            _ => None,
        }
    }
}

/// Dense exponent vector, one signed entry per symbol.
pub type Expo = [i64; NSYMS];

const ZERO_EXPO: Expo = [0; NSYMS];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    /// Inversion of a non-monomial requested (only monomials are units
    /// in the Laurent ring).
    #[error("non-invertible polynomial: only single-term monomials can be raised to negative powers")]
    NonInvertible,
    /// An exact division did not come out even.
    #[error("polynomial division is not exact")]
    DivisionNotExact,
    /// Evaluation hit `0^negative`.
    #[error("evaluation requires a nonzero value for a symbol with negative exponent")]
    ZeroToNegativePower,
    /// The canonical text form could not be parsed.
    #[error("cannot parse polynomial text: {0}")]
    Parse(String),
}

/// Multivariate Laurent polynomial in `q, p, Q, X, λ` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Expo, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ZERO_EXPO, c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(rat(n))
    }

    /// The monomial `sym^1`.
    pub fn sym(sym: Sym) -> Poly {
        Poly::monomial(rat(1), &[(sym, 1)])
    }

    /// `coeff * Π sym_i^e_i`.
    pub fn monomial(coeff: Rational, powers: &[(Sym, i64)]) -> Poly {
        let mut expo = ZERO_EXPO;
        for &(s, e) in powers {
            expo[s as usize] += e;
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(expo, coeff);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.term_count() == 1 && self.terms.get(&ZERO_EXPO).is_some_and(|c| c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Constant value, if the polynomial is constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(rat(0));
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&ZERO_EXPO) {
                return Some(c.clone());
            }
        }
        None
    }

    /// The single `(exponents, coefficient)` pair of a monomial.
    pub fn as_monomial(&self) -> Option<(Expo, Rational)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((*e, c.clone()))
        } else {
            None
        }
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Expo, &Rational)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, expo: Expo, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(expo) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_ref(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, c.clone());
        }
        out
    }

    pub fn sub_ref(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, -c.clone());
        }
        out
    }

    pub fn mul_ref(&self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for i in 0..NSYMS {
                    e[i] += eb[i];
                }
                out.insert_term(e, ca * cb);
            }
        }
        out
    }

    pub fn neg_ref(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Integer power. Negative exponents are only defined for monomials.
    pub fn pow(&self, e: i64) -> Result<Poly, PolyError> {
        if e == 0 {
            return Ok(Poly::one());
        }
        if e < 0 {
            let (expo, coeff) = self.as_monomial().ok_or(PolyError::NonInvertible)?;
            if coeff.is_zero() {
                return Err(PolyError::NonInvertible);
            }
            let inv = Poly {
                terms: [(expo.map(|x| -x), coeff.recip())].into_iter().collect(),
            };
            return inv.pow(-e);
        }
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = e as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_ref(&base);
            }
        }
        Ok(acc)
    }

    /// Substitutes `value` for `sym`. Negative exponents of `sym` require
    /// `value` to be an invertible monomial.
    pub fn substitute(&self, sym: Sym, value: &Poly) -> Result<Poly, PolyError> {
        let idx = sym as usize;
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let k = e[idx];
            let mut rest = *e;
            rest[idx] = 0;
            let factor = value.pow(k)?;
            let mono = Poly {
                terms: [(rest, c.clone())].into_iter().collect(),
            };
            out = out.add_ref(&mono.mul_ref(&factor));
        }
        Ok(out)
    }

    /// The coefficient of `sym^exponent`, a polynomial in the remaining
    /// symbols. Absent exponents give zero.
    pub fn coefficient_of(&self, sym: Sym, exponent: i64) -> Poly {
        let idx = sym as usize;
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[idx] == exponent {
                let mut rest = *e;
                rest[idx] = 0;
                out.insert_term(rest, c.clone());
            }
        }
        out
    }

    /// Largest exponent of `sym` among the terms (0 for the zero poly).
    pub fn degree_in(&self, sym: Sym) -> i64 {
        self.terms.keys().map(|e| e[sym as usize]).max().unwrap_or(0)
    }

    /// Exact division: returns `self / divisor` when the quotient exists
    /// in the Laurent ring, `DivisionNotExact` otherwise.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionNotExact);
        }
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        // Exponent box the quotient must live in, per symbol:
        // [min(self) - max(div), max(self) - min(div)].
        let mut lo = [i64::MAX; NSYMS];
        let mut hi = [i64::MIN; NSYMS];
        for i in 0..NSYMS {
            let (s_min, s_max) = minmax(self.terms.keys().map(|e| e[i]));
            let (d_min, d_max) = minmax(divisor.terms.keys().map(|e| e[i]));
            lo[i] = s_min - d_max;
            hi[i] = s_max - d_min;
        }
        let (d_lead, d_coeff) = {
            let (e, c) = divisor.terms.iter().next_back().unwrap();
            (*e, c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            let (r_lead, r_coeff) = {
                let (e, c) = rem.terms.iter().next_back().unwrap();
                (*e, c.clone())
            };
            let mut qe = ZERO_EXPO;
            for i in 0..NSYMS {
                qe[i] = r_lead[i] - d_lead[i];
                if qe[i] < lo[i] || qe[i] > hi[i] {
                    return Err(PolyError::DivisionNotExact);
                }
            }
            let qc = r_coeff / &d_coeff;
            let qterm = Poly {
                terms: [(qe, qc)].into_iter().collect(),
            };
            rem = rem.sub_ref(&qterm.mul_ref(divisor));
            quot = quot.add_ref(&qterm);
        }
        Ok(quot)
    }

    /// True when `divisor` divides `self` exactly.
    pub fn divisible_by(&self, divisor: &Poly) -> bool {
        self.div_exact(divisor).is_ok()
    }

    /// Evaluates at rational points for all five symbols. A zero value is
    /// only rejected when it meets a negative exponent.
    pub fn eval(&self, at: &[Rational; NSYMS]) -> Result<Rational, PolyError> {
        let mut acc = rat(0);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NSYMS {
                t *= rat_pow(&at[i], e[i])?;
            }
            acc += t;
        }
        Ok(acc)
    }

    /// `eval` followed by a lossy conversion, for the floating-point
    /// corroboration path.
    pub fn eval_f64(&self, at: &[Rational; NSYMS]) -> Result<f64, PolyError> {
        Ok(self.eval(at)?.to_f64().unwrap_or(f64::NAN))
    }
}

fn minmax(mut it: impl Iterator<Item = i64>) -> (i64, i64) {
    let first = it.next().expect("nonempty");
    it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

fn rat_pow(base: &Rational, e: i64) -> Result<Rational, PolyError> {
    if e == 0 {
        return Ok(rat(1));
    }
    if base.is_zero() {
        if e < 0 {
            return Err(PolyError::ZeroToNegativePower);
        }
        return Ok(rat(0));
    }
    let b = if e < 0 { base.recip() } else { base.clone() };
    let mut acc = rat(1);
    for _ in 0..e.unsigned_abs() {
        acc *= &b;
    }
    Ok(acc)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_ref(rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.sub_ref(rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_ref(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (expo, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = Sym::ALL
                .iter()
                .filter(|s| expo[**s as usize] != 0)
                .map(|s| {
                    let e = expo[*s as usize];
                    if e == 1 {
                        s.name().to_string()
                    } else {
                        format!("{}^{}", s.name(), e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", coeff)?;
            } else if coeff.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = PolyError;

    /// Parses the canonical text form produced by `Display`.
    fn from_str(s: &str) -> Result<Poly, PolyError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        if s == "0" {
            return Ok(Poly::zero());
        }
        let mut out = Poly::zero();
        for term in s.split(" + ") {
            let mut coeff = rat(1);
            let mut expo = ZERO_EXPO;
            let mut saw_factor = false;
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(PolyError::Parse(format!("empty factor in {term:?}")));
                }
                saw_factor = true;
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => {
                        let exp: i64 = e
                            .parse()
                            .map_err(|_| PolyError::Parse(format!("bad exponent in {factor:?}")))?;
                        (n, exp)
                    }
                    None => (factor, 1),
                };
                if let Some(sym) = Sym::from_name(name) {
                    expo[sym as usize] += exp;
                } else if exp == 1 {
                    let c = Rational::from_str(name)
                        .map_err(|_| PolyError::Parse(format!("bad coefficient {name:?}")))?;
                    coeff *= c;
                } else {
                    return Err(PolyError::Parse(format!("unknown symbol {name:?}")));
                }
            }
            if !saw_factor {
                return Err(PolyError::Parse(format!("empty term in {s:?}")));
            }
            out.insert_term(expo, coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn q() -> Poly {
        Poly::sym(Sym::Q)
    }

    #[test]
    fn arith_examples() {
        let qp1 = q().add_ref(&Poly::one());
        let qm1 = q().sub_ref(&Poly::one());
        let q2m1 = q().pow(2).unwrap().sub_ref(&Poly::one());
        assert_eq!(qp1.mul_ref(&qm1), q2m1);

        let p = Poly::monomial(ratio(-1, 2), &[(Sym::Q, -1), (Sym::P, 2)]).add_ref(&Poly::one());
        assert_eq!(p.add_ref(&Poly::zero()), p);

        let geo = Poly::one().add_ref(&q()).add_ref(&q().pow(2).unwrap());
        assert_eq!(geo.sub_ref(&Poly::one()), q().add_ref(&q().pow(2).unwrap()));
    }

    #[test]
    fn pow_examples() {
        let inv2 = q().pow(-2).unwrap();
        assert_eq!(inv2, Poly::monomial(rat(1), &[(Sym::Q, -2)]));

        let sq = q().add_ref(&Poly::one()).pow(2).unwrap();
        let expect = Poly::one()
            .add_ref(&q().scale(&rat(2)))
            .add_ref(&q().pow(2).unwrap());
        assert_eq!(sq, expect);

        assert_eq!(
            q().add_ref(&Poly::one()).pow(-1),
            Err(PolyError::NonInvertible)
        );
    }

    #[test]
    fn substitute_examples() {
        // [2]_G = p + q at p -> 1 gives 1 + q, at p -> q^-1 gives q^-1 + q.
        let bracket2 = Poly::sym(Sym::P).add_ref(&q());
        let m = bracket2.substitute(Sym::P, &Poly::one()).unwrap();
        assert_eq!(m, Poly::one().add_ref(&q()));
        let p_kind = bracket2
            .substitute(Sym::P, &q().pow(-1).unwrap())
            .unwrap();
        assert_eq!(p_kind, q().pow(-1).unwrap().add_ref(&q()));

        let sum = q().add_ref(&q().pow(2).unwrap());
        assert_eq!(sum.substitute(Sym::Q, &Poly::one()).unwrap(), Poly::int(2));
    }

    #[test]
    fn coefficient_examples() {
        // p*λ^2 + (p+q)*λ + q
        let lam = Poly::sym(Sym::Lambda);
        let p = Poly::sym(Sym::P);
        let poch = p
            .mul_ref(&lam.pow(2).unwrap())
            .add_ref(&p.add_ref(&q()).mul_ref(&lam))
            .add_ref(&q());
        assert_eq!(poch.coefficient_of(Sym::Lambda, 1), p.add_ref(&q()));
        assert_eq!(poch.coefficient_of(Sym::Lambda, 5), Poly::zero());
        let t = Poly::monomial(rat(1), &[(Sym::Q, 2), (Sym::Lambda, 3)]);
        assert_eq!(t.coefficient_of(Sym::Lambda, 3), q().pow(2).unwrap());
    }

    #[test]
    fn display_contract() {
        let p = Poly::monomial(ratio(-1, 2), &[(Sym::Q, -1), (Sym::P, 2)]).add_ref(&Poly::one());
        assert_eq!(p.to_string(), "-1/2*q^-1*p^2 + 1");
        assert_eq!(Poly::zero().to_string(), "0");
        let s = q().scale(&rat(2)).add_ref(&q().pow(2).unwrap());
        assert_eq!(s.to_string(), "2*q + q^2");
        let neg = Poly::monomial(rat(-1), &[(Sym::Q, -1)]);
        assert_eq!(neg.to_string(), "-1*q^-1");
    }

    #[test]
    fn parse_round_trip_examples() {
        for text in ["-1/2*q^-1*p^2 + 1", "2*q + q^2", "0", "-1*q^-1", "p^3 + 2*q*p^2 + 2*q^2*p + q^3"] {
            let p: Poly = text.parse().unwrap();
            assert_eq!(p.to_string(), text);
        }
        assert!("2q".parse::<Poly>().is_err());
        assert!("y + 1".parse::<Poly>().is_err());
    }

    #[test]
    fn exact_division() {
        let a = q().pow(2).unwrap().sub_ref(&Poly::sym(Sym::P).pow(2).unwrap());
        let d = q().sub_ref(&Poly::sym(Sym::P));
        let quot = a.div_exact(&d).unwrap();
        assert_eq!(quot, q().add_ref(&Poly::sym(Sym::P)));
        assert_eq!(
            Poly::one().div_exact(&q().add_ref(&Poly::one())),
            Err(PolyError::DivisionNotExact)
        );
        // Laurent divisor with negative exponents.
        let lau = q().pow(-1).unwrap().add_ref(&q());
        let prod = lau.mul_ref(&d);
        assert_eq!(prod.div_exact(&lau).unwrap(), d);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            (
                prop::array::uniform5(-3i64..=3),
                -6i64..=6,
                1i64..=3,
            ),
            0..6,
        )
        .prop_map(|terms| {
            let mut p = Poly::zero();
            for (e, n, d) in terms {
                p.insert_term(e, ratio(n, d));
            }
            p
        })
    }

    fn arb_point() -> impl Strategy<Value = [Rational; NSYMS]> {
        prop::array::uniform5((1i64..=9, 1i64..=9)).prop_map(|pairs| pairs.map(|(n, d)| ratio(n, d)))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
            prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
            prop_assert_eq!(
                a.add_ref(&b).add_ref(&c),
                a.add_ref(&b.add_ref(&c))
            );
            prop_assert_eq!(
                a.mul_ref(&b).mul_ref(&c),
                a.mul_ref(&b.mul_ref(&c))
            );
            prop_assert_eq!(
                a.mul_ref(&b.add_ref(&c)),
                a.mul_ref(&b).add_ref(&a.mul_ref(&c))
            );
            prop_assert_eq!(a.sub_ref(&a), Poly::zero());
        }

        #[test]
        fn substitute_identity(a in arb_poly()) {
            for s in Sym::ALL {
                prop_assert_eq!(a.substitute(s, &Poly::sym(s)).unwrap(), a.clone());
            }
        }

        #[test]
        fn eval_is_ring_homomorphism(a in arb_poly(), b in arb_poly(), at in arb_point()) {
            let ea = a.eval(&at).unwrap();
            let eb = b.eval(&at).unwrap();
            prop_assert_eq!(a.add_ref(&b).eval(&at).unwrap(), ea.clone() + eb.clone());
            prop_assert_eq!(a.mul_ref(&b).eval(&at).unwrap(), ea * eb);
        }

        #[test]
        fn display_parse_round_trip(a in arb_poly()) {
            let text = a.to_string();
            let back: Poly = text.parse().unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let prod = a.mul_ref(&b);
            prop_assert_eq!(prod.div_exact(&b).unwrap(), a);
        }
    }
}
