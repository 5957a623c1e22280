use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{is_prime_u128, to_i64, EuclideanRing};
use crate::error::{Error, Result};

/// An Eisenstein integer `a + b·ω` with `ω = e^{2πi/3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EisenInt {
    pub a: i64,
    pub b: i64,
}

impl EisenInt {
    pub const OMEGA: EisenInt = EisenInt { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    fn in_sector(&self) -> bool {
        0 <= self.b && self.b < self.a
    }
}

impl fmt::Display for EisenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}w"),
            (a, b) if b < 0 => write!(f, "{a}{b}w"),
            (a, b) => write!(f, "{a}+{b}w"),
        }
    }
}

impl Add for EisenInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        EuclideanRing::checked_add(self, rhs).expect("EisenInt overflow")
    }
}

impl Sub for EisenInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        EuclideanRing::checked_sub(self, rhs).expect("EisenInt overflow")
    }
}

impl Mul for EisenInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        EuclideanRing::checked_mul(self, rhs).expect("EisenInt overflow")
    }
}

impl Neg for EisenInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

const EISEN_UNITS: [EisenInt; 6] = [
    EisenInt::new(1, 0),
    EisenInt::new(1, 1),
    EisenInt::new(0, 1),
    EisenInt::new(-1, 0),
    EisenInt::new(-1, -1),
    EisenInt::new(0, -1),
];

fn norm_i128(a: i128, b: i128) -> i128 {
    a * a - a * b + b * b
}

impl EuclideanRing for EisenInt {
    const NAME: &'static str = "Zw";

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
        Some(Self::new(self.a.checked_add(rhs.a)?, self.b.checked_add(rhs.b)?))
    }

    fn checked_sub(self, rhs: Self) -> Option<Self> {
        Some(Self::new(self.a.checked_sub(rhs.a)?, self.b.checked_sub(rhs.b)?))
    }

    fn checked_mul(self, rhs: Self) -> Option<Self> {
        let (a, b, c, d) = (self.a as i128, self.b as i128, rhs.a as i128, rhs.b as i128);
        Some(Self::new(to_i64(a * c - b * d)?, to_i64(a * d + b * c - b * d)?))
    }

    fn norm(&self) -> u128 {
        norm_i128(self.a as i128, self.b as i128) as u128
    }

    fn conj(self) -> Self {
        Self::new(self.a - self.b, -self.b)
    }

    fn units() -> &'static [Self] {
        &EISEN_UNITS
    }

    fn div_round(self, d: Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let n = i128::try_from(d.norm()).ok()?;
        let dc = d.conj();
        let (a, b, c, e) = (self.a as i128, self.b as i128, dc.a as i128, dc.b as i128);
        let p = a.checked_mul(c)?.checked_sub(b.checked_mul(e)?)?;
        let q = a.checked_mul(e)?.checked_add(b.checked_mul(c)?)?.checked_sub(b.checked_mul(e)?)?;
        // The target p/n + (q/n)ω lies in a rhombus split into two equilateral
        // triangles; the nearest lattice point is one of its four corners.
        let fp = p.div_euclid(n);
        let fq = q.div_euclid(n);
        let mut best = (fp, fq);
        let mut best_norm = i128::MAX;
        for (dp, dq) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let (cp, cq) = (fp + dp, fq + dq);
            let nr = norm_i128(p - n * cp, q - n * cq);
            if nr < best_norm {
                best_norm = nr;
                best = (cp, cq);
            }
        }
        Some(Self::new(to_i64(best.0)?, to_i64(best.1)?))
    }

    fn nearest(z: Complex64) -> Option<Self> {
        let h = 3f64.sqrt() / 2.0;
        let b = z.im / h;
        let a = z.re + b / 2.0;
        if !(a.is_finite() && b.is_finite() && a.abs() < 9.0e18 && b.abs() < 9.0e18) {
            return None;
        }
        let (fa, fb) = (a.floor(), b.floor());
        let mut best: Option<(f64, Self)> = None;
        for (da, db) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            let c = Self::new((fa + da) as i64, (fb + db) as i64);
            let d = (c.to_complex() - z).norm_sqr();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, c));
            }
        }
        best.map(|(_, c)| c)
    }

    fn canonical_unit(&self) -> Self {
        if self.is_zero() {
            return Self::one();
        }
        for u in EISEN_UNITS {
            if (u * *self).in_sector() {
                return u;
            }
        }
        unreachable!("every nonzero Eisenstein integer has an associate in the sector")
    }

    fn is_prime(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Zero("primality of 0"));
        }
        if is_prime_u128(self.norm()) {
            return Ok(true);
        }
        let c = self.canonical();
        Ok(c.b == 0 && is_prime_u128(c.a as u128) && c.a % 3 == 2)
    }

    fn to_complex(&self) -> Complex64 {
        let s = 3f64.sqrt() / 2.0;
        Complex64::new(self.a as f64 - 0.5 * self.b as f64, s * self.b as f64)
    }

    fn box_elements(b: i64) -> Vec<Self> {
        let mut v = Vec::new();
        for x in -b..=b {
            for y in -b..=b {
                v.push(Self::new(x, y));
            }
        }
        v
    }
}
