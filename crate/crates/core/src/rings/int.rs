use num_complex::Complex64;

use super::{is_prime_u128, round_div, EuclideanRing};
use crate::error::{Error, Result};

impl EuclideanRing for i64 {
    const NAME: &'static str = "Z";

    fn zero() -> Self {
        0
    }

    fn one() -> Self {
        1
    }

    fn from_i64(v: i64) -> Self {
        v
    }

    fn checked_add(self, rhs: Self) -> Option<Self> {
        i64::checked_add(self, rhs)
    }

    fn checked_sub(self, rhs: Self) -> Option<Self> {
        i64::checked_sub(self, rhs)
    }

    fn checked_mul(self, rhs: Self) -> Option<Self> {
        i64::checked_mul(self, rhs)
    }

    fn norm(&self) -> u128 {
        let a = self.unsigned_abs() as u128;
        a * a
    }

    fn residue_count(&self) -> u128 {
        self.unsigned_abs() as u128
    }

    fn conj(self) -> Self {
        self
    }

    fn units() -> &'static [Self] {
        &[1, -1]
    }

    fn div_round(self, d: Self) -> Option<Self> {
        if d == 0 {
            return None;
        }
        let (n, d) = if d < 0 { (-(self as i128), -(d as i128)) } else { (self as i128, d as i128) };
        super::to_i64(round_div(n, d))
    }

    fn nearest(z: Complex64) -> Option<Self> {
        let r = (z.re - 0.5).ceil();
        (r.is_finite() && r.abs() < 9.0e18).then_some(r as i64)
    }

    fn canonical_unit(&self) -> Self {
        if *self < 0 {
            -1
        } else {
            1
        }
    }

    fn is_prime(&self) -> Result<bool> {
        if *self == 0 {
            return Err(Error::Zero("primality of 0"));
        }
        Ok(is_prime_u128(self.unsigned_abs() as u128))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self as f64, 0.0)
    }

    fn box_elements(b: i64) -> Vec<Self> {
        (-b..=b).collect()
    }
}
