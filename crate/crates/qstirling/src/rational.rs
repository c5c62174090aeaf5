//! Arbitrary-precision rational scalars.
//!
//! `Rational` is the coefficient field for every polynomial in the crate.
//! It is kept in canonical form (gcd-reduced, positive denominator) by
//! construction, so equality is structural.

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Rational = BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `n!` as a rational, for series coefficients and binomials.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::from(1);
    for i in 2..=n as i64 {
        acc *= i;
    }
    BigRational::from_integer(acc)
}

/// Conventional binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return rat(0);
    }
    BigRational::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_display() {
        assert_eq!(ratio(2, 4).to_string(), "1/2");
        assert_eq!(ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(ratio(8, 2).to_string(), "4");
        assert_eq!(rat(0).to_string(), "0");
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), rat(1));
        assert_eq!(factorial(5), rat(120));
        assert_eq!(binomial(5, 2), rat(10));
        assert_eq!(binomial(4, 0), rat(1));
        assert_eq!(binomial(3, 5), rat(0));
    }
}
