//! Oscillator spectrum expansions in `s = ln q` and `t = ln p`.
//!
//! Per eigenvalue `l`, the deformed bracket `[l]_G = Σ_j e^(js) e^((l-1-j)t)`
//! is expanded as a truncated bivariate series (the finite-sum form is
//! division-free, unlike the quotient definition, which is a 0/0 form in
//! two variables). From it come the deformed-oscillator Hamiltonian
//! levels `([l] + [l+1])/2` (ħω₀ = 1) and the coordinate–momentum
//! commutator levels `[l+1] - [l]`, each compared order by order against
//! its closed reference form.

use crate::pseries::{PowerSeries2, SeriesVar};
use crate::rational::{rat, ratio, Rational};

/// A per-level truncated series, e.g. one oscillator eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenSeries {
    pub level: u32,
    pub series: PowerSeries2,
}

/// `[l]_G` expanded to the given total order: `Σ_{j<l} e^(js) e^((l-1-j)t)`.
pub fn bracket_series(level: u32, order: u32) -> PowerSeries2 {
    let mut acc = PowerSeries2::zero(order);
    for j in 0..level {
        let es = PowerSeries2::exp_linear(&rat(j as i64), SeriesVar::S, order);
        let et = PowerSeries2::exp_linear(&rat((level - 1 - j) as i64), SeriesVar::T, order);
        acc = acc.add(&es.mul(&et));
    }
    acc
}

/// Hamiltonian level `l`: `([l] + [l+1]) / 2`.
pub fn hamiltonian_series(level: u32, order: u32) -> EigenSeries {
    let sum = bracket_series(level, order).add(&bracket_series(level + 1, order));
    EigenSeries { level, series: sum.scale(&ratio(1, 2)) }
}

/// The displayed closed form for the Hamiltonian level, a degree-1
/// polynomial in `(s, t)`:
/// `(s+t)/8 + (1 - (s+t)/2)(l + 1/2) + (s+t)/2 (l + 1/2)^2`.
pub fn hamiltonian_reference(level: u32, order: u32) -> PowerSeries2 {
    let half = ratio(1, 2);
    let n_half = rat(level as i64) + &half; // l + 1/2
    let mut s_plus_t = PowerSeries2::zero(order);
    s_plus_t.set((1, 0), rat(1));
    s_plus_t.set((0, 1), rat(1));
    let mut acc = s_plus_t.scale(&ratio(1, 8));
    let linear = PowerSeries2::constant(rat(1), order).sub(&s_plus_t.scale(&half));
    acc = acc.add(&linear.scale(&n_half));
    acc = acc.add(&s_plus_t.scale(&(&half * &n_half * &n_half)));
    acc
}

/// Commutator level `l`: `[l+1] - [l]`.
pub fn commutator_series(level: u32, order: u32) -> EigenSeries {
    let diff = bracket_series(level + 1, order).sub(&bracket_series(level, order));
    EigenSeries { level, series: diff }
}

/// The displayed closed form for the commutator level, a degree-2
/// polynomial in `(s, t)`:
/// `1 + (s + t - (s+t)^2/2) l + ((s^2 + st + t^2)/2) l(l+1)`.
pub fn commutator_reference(level: u32, order: u32) -> PowerSeries2 {
    let l = rat(level as i64);
    let mut s_plus_t = PowerSeries2::zero(order);
    s_plus_t.set((1, 0), rat(1));
    s_plus_t.set((0, 1), rat(1));
    let mut quad = PowerSeries2::zero(order);
    quad.set((2, 0), ratio(1, 2));
    quad.set((1, 1), ratio(1, 2));
    quad.set((0, 2), ratio(1, 2));
    let mut acc = PowerSeries2::constant(rat(1), order);
    let linear_part = s_plus_t.sub(&s_plus_t.mul(&s_plus_t).scale(&ratio(1, 2)));
    acc = acc.add(&linear_part.scale(&l));
    acc = acc.add(&quad.scale(&(&l * (&l + rat(1)))));
    acc
}

/// The total degree through which each reference form is asserted: the
/// Hamiltonian form is displayed through degree 1, the commutator form
/// through degree 2.
pub const HAMILTONIAN_ASSERTED_DEGREE: u32 = 1;
pub const COMMUTATOR_ASSERTED_DEGREE: u32 = 2;

/// Residual `computed - reference` truncated to the asserted degree;
/// zero means the level matches the closed form.
pub fn hamiltonian_residual(level: u32, order: u32) -> PowerSeries2 {
    let asserted = order.min(HAMILTONIAN_ASSERTED_DEGREE);
    hamiltonian_series(level, order)
        .series
        .sub(&hamiltonian_reference(level, order))
        .truncate(asserted)
}

pub fn commutator_residual(level: u32, order: u32) -> PowerSeries2 {
    let asserted = order.min(COMMUTATOR_ASSERTED_DEGREE);
    commutator_series(level, order)
        .series
        .sub(&commutator_reference(level, order))
        .truncate(asserted)
}

/// Degree-1 part of the Hamiltonian level after the P-type constraint
/// `t = -s`; the claim is that it vanishes identically, killing the
/// quadratic anharmonicity at first order.
pub fn hamiltonian_degree1_at_t_neg_s(level: u32) -> Rational {
    let series = hamiltonian_series(level, 1).series;
    let collapsed = series.collapse_t_to_neg_s();
    collapsed.get(&1).cloned().unwrap_or_else(|| rat(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_series_examples() {
        assert!(bracket_series(0, 4).is_zero());
        assert_eq!(bracket_series(1, 4), PowerSeries2::constant(rat(1), 4));
        // [2] at order 1: 2 + s + t
        let b2 = bracket_series(2, 1);
        assert_eq!(b2.coeff(0, 0), rat(2));
        assert_eq!(b2.coeff(1, 0), rat(1));
        assert_eq!(b2.coeff(0, 1), rat(1));
    }

    #[test]
    fn hamiltonian_spec_levels() {
        // l=0 at order 1: exactly 1/2 (no degree-1 terms on either side).
        let h0 = hamiltonian_series(0, 1);
        assert_eq!(h0.series.coeff(0, 0), ratio(1, 2));
        assert!(hamiltonian_residual(0, 1).is_zero());
        // l=1: 3/2 + (s+t)/2.
        let h1 = hamiltonian_series(1, 1);
        assert_eq!(h1.series.coeff(0, 0), ratio(3, 2));
        assert_eq!(h1.series.coeff(1, 0), ratio(1, 2));
        assert_eq!(h1.series.coeff(0, 1), ratio(1, 2));
        assert!(hamiltonian_residual(1, 1).is_zero());
    }

    #[test]
    fn hamiltonian_degree_one_coefficient_is_half_l_squared() {
        for l in 0..=12u32 {
            let h = hamiltonian_series(l, 1);
            let expect = ratio((l as i64) * (l as i64), 2);
            assert_eq!(h.series.coeff(1, 0), expect, "s-coefficient at l={l}");
            assert_eq!(h.series.coeff(0, 1), expect, "t-coefficient at l={l}");
        }
    }

    #[test]
    fn hamiltonian_matches_reference_through_degree_one() {
        for l in 0..=12 {
            assert!(
                hamiltonian_residual(l, 3).is_zero(),
                "hamiltonian mismatch at l={l}"
            );
        }
    }

    #[test]
    fn commutator_spec_levels() {
        // l=0: [1]-[0] = 1 exactly.
        let c0 = commutator_series(0, 2);
        assert_eq!(c0.series, PowerSeries2::constant(rat(1), 2));
        // l=1: 1 + (s+t) + (s^2+t^2)/2.
        let c1 = commutator_series(1, 2).series;
        assert_eq!(c1.coeff(0, 0), rat(1));
        assert_eq!(c1.coeff(1, 0), rat(1));
        assert_eq!(c1.coeff(0, 1), rat(1));
        assert_eq!(c1.coeff(2, 0), ratio(1, 2));
        assert_eq!(c1.coeff(0, 2), ratio(1, 2));
        assert_eq!(c1.coeff(1, 1), rat(0));
        assert!(commutator_residual(1, 2).is_zero());
        assert!(commutator_residual(2, 2).is_zero());
    }

    #[test]
    fn commutator_matches_reference_through_degree_two() {
        for l in 0..=12 {
            assert!(
                commutator_residual(l, 4).is_zero(),
                "commutator mismatch at l={l}"
            );
        }
    }

    #[test]
    fn p_type_constraint_kills_degree_one() {
        for l in 0..=12 {
            assert_eq!(hamiltonian_degree1_at_t_neg_s(l), rat(0), "l={l}");
        }
    }

    #[test]
    fn order_zero_is_undeformed() {
        for l in 0..=12u32 {
            let h = hamiltonian_series(l, 0).series;
            assert_eq!(h.coeff(0, 0), rat(l as i64) + ratio(1, 2));
            let c = commutator_series(l, 0).series;
            assert_eq!(c.coeff(0, 0), rat(1));
        }
    }
}
