//! Truncated bivariate power series in `s = ln q` and `t = ln p`.
//!
//! Terms beyond the stated total degree are dropped by every operation,
//! so a series is always a faithful jet of the exact object.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::rational::{factorial, rat, Rational};

/// Which of the two series variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVar {
    S,
    T,
}

/// Truncated power series: map `(deg_s, deg_t) -> coefficient`, with all
/// stored degrees satisfying `deg_s + deg_t <= order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries2 {
    order: u32,
    terms: BTreeMap<(u32, u32), Rational>,
}

impl PowerSeries2 {
    pub fn zero(order: u32) -> PowerSeries2 {
        PowerSeries2 { order, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational, order: u32) -> PowerSeries2 {
        let mut s = PowerSeries2::zero(order);
        s.set((0, 0), c);
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, ds: u32, dt: u32) -> Rational {
        self.terms.get(&(ds, dt)).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn set(&mut self, deg: (u32, u32), c: Rational) {
        if deg.0 + deg.1 > self.order {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&deg);
        } else {
            self.terms.insert(deg, c);
        }
    }

    fn add_to(&mut self, deg: (u32, u32), c: Rational) {
        if deg.0 + deg.1 > self.order || c.is_zero() {
            return;
        }
        let cur = self.coeff(deg.0, deg.1) + c;
        self.set(deg, cur);
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &PowerSeries2) -> PowerSeries2 {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for (d, c) in &rhs.terms {
            out.add_to(*d, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &PowerSeries2) -> PowerSeries2 {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for (d, c) in &rhs.terms {
            out.add_to(*d, -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &PowerSeries2) -> PowerSeries2 {
        let order = self.order.min(rhs.order);
        let mut out = PowerSeries2::zero(order);
        for (da, ca) in &self.terms {
            for (db, cb) in &rhs.terms {
                out.add_to((da.0 + db.0, da.1 + db.1), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> PowerSeries2 {
        let mut out = PowerSeries2::zero(self.order);
        for (d, k) in &self.terms {
            out.add_to(*d, k * c);
        }
        out
    }

    pub fn truncate(&self, order: u32) -> PowerSeries2 {
        let mut out = PowerSeries2::zero(order);
        for (d, c) in &self.terms {
            out.add_to(*d, c.clone());
        }
        out
    }

    /// `exp(c * s)` or `exp(c * t)`, truncated.
    pub fn exp_linear(c: &Rational, which: SeriesVar, order: u32) -> PowerSeries2 {
        let mut out = PowerSeries2::zero(order);
        let mut power = rat(1);
        for j in 0..=order {
            let coeff = &power / factorial(j);
            match which {
                SeriesVar::S => out.add_to((j, 0), coeff),
                SeriesVar::T => out.add_to((0, j), coeff),
            }
            power *= c;
        }
        out
    }

    /// Substitutes `t = -s`, collapsing to a univariate jet in `s`.
    pub fn collapse_t_to_neg_s(&self) -> BTreeMap<u32, Rational> {
        let mut out: BTreeMap<u32, Rational> = BTreeMap::new();
        for ((ds, dt), c) in &self.terms {
            let sign = if dt % 2 == 0 { rat(1) } else { rat(-1) };
            let entry = out.entry(ds + dt).or_insert_with(|| rat(0));
            *entry += c * sign;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Sum of coefficients of total degree exactly `d`.
    pub fn total_degree_part(&self, d: u32) -> Vec<((u32, u32), Rational)> {
        self.terms
            .iter()
            .filter(|((a, b), _)| a + b == d)
            .map(|(k, v)| (*k, v.clone()))
            .collect()
    }
}

impl PowerSeries2 {
    /// JSON object keyed `"s^a t^b" -> "rational"`, in ascending degree
    /// order.
    pub fn to_json_map(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for ((ds, dt), c) in &self.terms {
            map.insert(format!("s^{ds} t^{dt}"), serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for PowerSeries2 {
    /// Terms in ascending `(deg_s, deg_t)` order: `c*s^a*t^b`, joined by
    /// ` + `, mirroring the polynomial text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((ds, dt), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut mono = Vec::new();
            if *ds > 0 {
                mono.push(if *ds == 1 { "s".to_string() } else { format!("s^{ds}") });
            }
            if *dt > 0 {
                mono.push(if *dt == 1 { "t".to_string() } else { format!("t^{dt}") });
            }
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c == &rat(1) {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", c, mono.join("*"))?;
            }
        }
        Ok(())
    }
}
