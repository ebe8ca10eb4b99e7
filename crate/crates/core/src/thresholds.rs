//! Minimum-degree threshold coefficients, kept exact.
//!
//! The `r = 4` coefficient `(2 + √(13/2)) / 5` is irrational, so coefficients
//! are quadratic surds `a + b√c` with rational `a`, `b >= 0`, `c >= 0`, and
//! every comparison is decided by squaring.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, int, ratio, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Surd {
            a,
            b: Rational::zero(),
            c: Rational::zero(),
        }
    }

    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if b.is_negative() || c.is_negative() {
            return Err(Error::InvalidParameters("surd needs b >= 0 and c >= 0".into()));
        }
        Ok(Surd { a, b, c })
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() || self.c.is_zero() || is_square(&self.c)
    }

    /// Exact comparison of `a + b√c` with a rational.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        let gap = x - &self.a; // compare b√c with gap
        if gap.is_negative() {
            return Ordering::Greater;
        }
        let lhs = &self.b * &self.b * &self.c;
        let rhs = &gap * &gap;
        lhs.cmp(&rhs)
    }

    pub fn scale(&self, k: &Rational) -> Surd {
        assert!(!k.is_negative(), "scaling by a negative factor");
        Surd {
            a: &self.a * k,
            b: &self.b * k,
            c: self.c.clone(),
        }
    }

    /// Largest integer `m` with `m <= self`.
    pub fn floor(&self) -> BigInt {
        let approx = self.to_f64().floor();
        let mut m = BigInt::from(approx as i64);
        while self.cmp_rational(&Rational::from_integer(m.clone())) == Ordering::Less {
            m -= 1;
        }
        while self.cmp_rational(&Rational::from_integer(&m + 1)) != Ordering::Less {
            m += 1;
        }
        m
    }

    /// Smallest integer `m` with `m >= self`.
    pub fn ceil(&self) -> BigInt {
        let f = self.floor();
        if self.cmp_rational(&Rational::from_integer(f.clone())) == Ordering::Equal {
            f
        } else {
            f + 1
        }
    }

    /// `⌈self · n⌉`, the least integer degree meeting the coefficient.
    pub fn ceil_times(&self, n: usize) -> usize {
        self.scale(&int(n as i64)).ceil().to_usize().unwrap_or(0)
    }

    /// Decimal expansion of a non-negative surd, rounded half-up to `places`
    /// digits.
    pub fn round_decimal(&self, places: u32) -> String {
        let scale = BigInt::from(10u32).pow(places);
        let shifted = self.scale(&Rational::from_integer(scale.clone()));
        let half = Surd {
            a: &shifted.a + ratio(1, 2),
            ..shifted
        };
        let m = half.floor();
        let (q, r) = m.div_mod_floor(&scale);
        if places == 0 {
            return q.to_string();
        }
        format!("{q}.{:0>width$}", r.to_string(), width = places as usize)
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.a) + rational::to_f64(&self.b) * rational::to_f64(&self.c).sqrt()
    }
}

fn is_square(x: &Rational) -> bool {
    let root = |v: &BigInt| {
        let s = v.sqrt();
        &s * &s == *v
    };
    !x.is_negative() && root(x.numer()) && root(x.denom())
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() || self.c.is_zero() {
            return write!(f, "{}", rational::format(&self.a));
        }
        write!(
            f,
            "{} + {}*sqrt({})",
            rational::format(&self.a),
            rational::format(&self.b),
            rational::format(&self.c)
        )
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Minimum colour-degree coefficients for perfect rainbow-`K_r`-tilings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdFormula {
    pub r: usize,
    /// Coefficient proven sufficient asymptotically.
    pub proven: Surd,
    /// Conjectured optimal coefficient `1 - (r-1)/(r^2-2)`.
    #[serde(with = "rational::as_str")]
    pub conjectured: Rational,
}

pub fn threshold_formula(r: usize) -> Result<ThresholdFormula> {
    if r < 3 {
        return Err(Error::InvalidParameters(format!("r={r}: requires r >= 3")));
    }
    let ri = r as i64;
    let proven = match r {
        3 => Surd::rational(ratio(5, 6)),
        4 => Surd::new(ratio(2, 5), ratio(1, 5), ratio(13, 2))?,
        _ => Surd::rational(int(1) - ratio(1, (2 * ri - 3) * ri)),
    };
    Ok(ThresholdFormula {
        r,
        proven,
        conjectured: int(1) - ratio(ri - 1, ri * ri - 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let t3 = threshold_formula(3).unwrap();
        assert_eq!(t3.proven, Surd::rational(ratio(5, 6)));
        assert_eq!(t3.conjectured, ratio(5, 7));
        assert_eq!(threshold_formula(5).unwrap().proven, Surd::rational(ratio(34, 35)));
        assert_eq!(threshold_formula(4).unwrap().conjectured, ratio(11, 14));
        assert!(threshold_formula(2).is_err());
    }

    #[test]
    fn r4_surd() {
        let s = threshold_formula(4).unwrap().proven;
        assert!(!s.is_rational());
        assert_eq!(s.round_decimal(4), "0.9099");
        // 0.9099 < s < 0.91
        assert_eq!(s.cmp_rational(&ratio(9099, 10000)), Ordering::Greater);
        assert_eq!(s.cmp_rational(&ratio(91, 100)), Ordering::Less);
        assert_eq!(s.ceil_times(12), 11);
        assert_eq!(s.ceil_times(100), 91);
    }

    #[test]
    fn rational_surds() {
        let s = Surd::rational(ratio(5, 6));
        assert_eq!(s.ceil_times(12), 10);
        assert_eq!(s.ceil_times(7), 6);
        assert_eq!(s.floor(), BigInt::from(0));
        assert_eq!(s.round_decimal(2), "0.83");
        // √4 is rational
        let t = Surd::new(int(0), int(1), int(4)).unwrap();
        assert!(t.is_rational());
        assert_eq!(t.cmp_rational(&int(2)), Ordering::Equal);
        assert_eq!(t.ceil(), BigInt::from(2));
        assert_eq!(Surd::rational(int(-3)).floor(), BigInt::from(-3));
        assert_eq!(Surd::rational(ratio(-1, 2)).round_decimal(0), "0");
    }
}
