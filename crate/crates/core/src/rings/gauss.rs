use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{is_prime_u128, round_div, to_i64, EuclideanRing};
use crate::error::{Error, Result};

/// A Gaussian integer `re + im·i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }
}

impl From<i64> for GaussInt {
    fn from(v: i64) -> Self {
        Self::new(v, 0)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}{im}i"),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

/// Nearest Gaussian integer to `x`; exact half-integer ties round toward −∞
/// on each axis.
pub fn round_to_ring(x: Complex64) -> GaussInt {
    let r = |v: f64| (v - 0.5).ceil() as i64;
    GaussInt::new(r(x.re), r(x.im))
}

impl Add for GaussInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        EuclideanRing::checked_add(self, rhs).expect("GaussInt overflow")
    }
}

impl Sub for GaussInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        EuclideanRing::checked_sub(self, rhs).expect("GaussInt overflow")
    }
}

impl Mul for GaussInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        EuclideanRing::checked_mul(self, rhs).expect("GaussInt overflow")
    }
}

impl Neg for GaussInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

const GAUSS_UNITS: [GaussInt; 4] =
    [GaussInt::new(1, 0), GaussInt::new(0, 1), GaussInt::new(-1, 0), GaussInt::new(0, -1)];

impl EuclideanRing for GaussInt {
    const NAME: &'static str = "Zi";

    fn zero() -> Self {
        Self::new(0, 0)
    }

    fn one() -> Self {
        Self::new(1, 0)
    }

    fn from_i64(v: i64) -> Self {
        Self::new(v, 0)
    }

    fn checked_add(self, rhs: Self) -> Option<Self> {
        Some(Self::new(self.re.checked_add(rhs.re)?, self.im.checked_add(rhs.im)?))
    }

    fn checked_sub(self, rhs: Self) -> Option<Self> {
        Some(Self::new(self.re.checked_sub(rhs.re)?, self.im.checked_sub(rhs.im)?))
    }

    fn checked_mul(self, rhs: Self) -> Option<Self> {
        let (a, b, c, d) = (self.re as i128, self.im as i128, rhs.re as i128, rhs.im as i128);
        Some(Self::new(to_i64(a * c - b * d)?, to_i64(a * d + b * c)?))
    }

    fn norm(&self) -> u128 {
        let a = self.re.unsigned_abs() as u128;
        let b = self.im.unsigned_abs() as u128;
        a * a + b * b
    }

    fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    fn units() -> &'static [Self] {
        &GAUSS_UNITS
    }

    fn div_round(self, d: Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let n = i128::try_from(d.norm()).ok()?;
        let (a, b, c, e) = (self.re as i128, self.im as i128, d.re as i128, d.im as i128);
        // self · conj(d)
        let p = a.checked_mul(c)?.checked_add(b.checked_mul(e)?)?;
        let q = b.checked_mul(c)?.checked_sub(a.checked_mul(e)?)?;
        Some(Self::new(to_i64(round_div(p, n))?, to_i64(round_div(q, n))?))
    }

    fn nearest(z: Complex64) -> Option<Self> {
        let ok = |v: f64| v.is_finite() && v.abs() < 9.0e18;
        (ok(z.re) && ok(z.im)).then(|| round_to_ring(z))
    }

    fn canonical_unit(&self) -> Self {
        if self.is_zero() {
            return Self::one();
        }
        for u in GAUSS_UNITS {
            let v = u * *self;
            if v.re > 0 && v.im >= 0 {
                return u;
            }
        }
        unreachable!("every nonzero Gaussian integer has an associate in the first quadrant")
    }

    fn is_prime(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Zero("primality of 0"));
        }
        let a = self.re.unsigned_abs() as u128;
        let b = self.im.unsigned_abs() as u128;
        Ok(if a == 1 && b == 1 {
            true
        } else if a == 0 || b == 0 {
            let c = a.max(b);
            is_prime_u128(c) && c % 4 == 3
        } else {
            let n = a * a + b * b;
            is_prime_u128(n) && n % 4 == 1
        })
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    fn box_elements(b: i64) -> Vec<Self> {
        let mut v = Vec::new();
        for re in -b..=b {
            for im in -b..=b {
                v.push(Self::new(re, im));
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    #[test]
    fn primes() {
        assert!(g(3, 0).is_prime().unwrap());
        assert!(g(1, 1).is_prime().unwrap());
        assert!(!g(2, 0).is_prime().unwrap());
        assert!(g(2, 1).is_prime().unwrap());
        assert!(!g(5, 0).is_prime().unwrap());
        assert!(!g(1, 0).is_prime().unwrap());
        assert!(g(0, 0).is_prime().is_err());
    }

    #[test]
    fn rounding_examples() {
        assert_eq!(round_to_ring(Complex64::new(0.4, -1.6)), g(0, -2));
        assert_eq!(round_to_ring(Complex64::new(0.5, 0.5)), g(0, 0));
        assert_eq!(round_to_ring(Complex64::new(-0.5, -0.5)), g(-1, -1));
        assert_eq!(round_to_ring(Complex64::new(3.0, 4.0)), g(3, 4));
    }

    #[test]
    fn canonical_associates() {
        assert_eq!(g(-2, 0).canonical(), g(2, 0));
        assert_eq!(g(0, 3).canonical(), g(3, 0));
        assert_eq!(g(-1, 1).canonical(), g(1, 1));
        assert_eq!(g(0, 0).canonical(), g(0, 0));
    }

    #[test]
    fn division_remainder_is_small() {
        let x = g(7, -3);
        let d = g(2, 1);
        let r = x.rem_round(d).unwrap();
        assert!(2 * r.norm() <= d.norm());
    }

    fn small() -> impl Strategy<Value = GaussInt> {
        (-50i64..50, -50i64..50).prop_map(|(a, b)| g(a, b))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small(), b in small(), c in small()) {
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a * b, b * a);
        }

        #[test]
        fn norm_multiplicative(a in small(), b in small()) {
            prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
        }

        #[test]
        fn primality_unit_invariant(a in small()) {
            prop_assume!(!a.is_zero());
            let p = a.is_prime().unwrap();
            for &u in GaussInt::units() {
                prop_assert_eq!((u * a).is_prime().unwrap(), p);
            }
            prop_assert_eq!(g(a.im, a.re).is_prime().unwrap(), p);
        }

        #[test]
        fn rounding_is_nearest(re in -20.0f64..20.0, im in -20.0f64..20.0) {
            let x = Complex64::new(re, im);
            let z = round_to_ring(x);
            let best = (x - z.to_complex()).norm();
            for dr in -2..=2 {
                for di in -2..=2 {
                    let w = g(z.re + dr, z.im + di);
                    prop_assert!(best <= (x - w.to_complex()).norm() + 1e-12);
                }
            }
        }

        #[test]
        fn euclidean_division(a in small(), d in small()) {
            prop_assume!(!d.is_zero());
            let q = a.div_round(d).unwrap();
            let r = a - q * d;
            prop_assert!(2 * r.norm() <= d.norm());
        }
    }
}
