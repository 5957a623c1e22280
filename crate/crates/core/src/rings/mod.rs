//! Exact arithmetic in the Euclidean domains Z, Z[i] and Z[ω] and their
//! quotient rings.

mod eisen;
mod gauss;
mod int;
mod residue;

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eisen::EisenInt;
pub use gauss::{round_to_ring, GaussInt};
pub use residue::{lift_sigma, project_sigma, Residue};

/// A Euclidean domain with a multiplicative norm and a fixed choice of
/// canonical associates.
///
/// The `std::ops` implementations panic on overflow; the `checked_*` variants
/// are used wherever overflow must surface as an error.
pub trait EuclideanRing:
    Copy
    + Eq
    + Hash
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;

    fn checked_add(self, rhs: Self) -> Option<Self>;
    fn checked_sub(self, rhs: Self) -> Option<Self>;
    fn checked_mul(self, rhs: Self) -> Option<Self>;

    /// Squared absolute value, computed without overflow.
    fn norm(&self) -> u128;
    /// |T/⟨self⟩|; the norm for Z[i] and Z[ω], |self| for Z.
    fn residue_count(&self) -> u128 {
        self.norm()
    }
    fn conj(self) -> Self;
    fn units() -> &'static [Self];

    /// Nearest ring element to `self / d`. Ties are resolved deterministically
    /// (half toward −∞ on each coordinate axis). `None` when `d` is zero.
    fn div_round(self, d: Self) -> Option<Self>;

    /// A nearest ring element to a complex number; `None` if out of range.
    fn nearest(z: Complex64) -> Option<Self>;

    /// The unit `u` such that `u * self` is the canonical associate.
    fn canonical_unit(&self) -> Self;

    fn is_prime(&self) -> Result<bool>;
    fn to_complex(&self) -> Complex64;

    /// All elements whose integer coordinates lie in `[-b, b]`.
    fn box_elements(b: i64) -> Vec<Self>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// Inverse of a unit. Every unit of the supported rings has norm one, so
    /// the inverse is its conjugate.
    fn unit_inverse(self) -> Option<Self> {
        if self.is_unit() {
            Some(self.conj())
        } else {
            None
        }
    }

    fn canonical(self) -> Self {
        self.canonical_unit() * self
    }

    /// Euclidean remainder `self - d * round(self / d)`.
    fn rem_round(self, d: Self) -> Option<Self> {
        let q = self.div_round(d)?;
        self.checked_sub(q.checked_mul(d)?)
    }

    fn divides(self, x: Self) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        matches!(x.rem_round(self), Some(r) if r.is_zero())
    }

    /// `x / self` when the division is exact.
    fn exact_div(x: Self, d: Self) -> Option<Self> {
        let q = x.div_round(d)?;
        if q.checked_mul(d)? == x {
            Some(q)
        } else {
            None
        }
    }
}

/// Extended Euclid: returns `(g, s, t)` with `s·a + t·b = g`, `g` a canonical gcd.
pub fn ext_gcd<R: EuclideanRing>(a: R, b: R) -> Result<(R, R, R)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Zero("ext_gcd of (0, 0)"));
    }
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (R::one(), R::zero());
    let (mut t0, mut t1) = (R::zero(), R::one());
    while !r1.is_zero() {
        let q = r0.div_round(r1).ok_or(Error::Overflow)?;
        let step = |x: R, y: R| -> Result<R> {
            x.checked_sub(q.checked_mul(y).ok_or(Error::Overflow)?).ok_or(Error::Overflow)
        };
        let r2 = step(r0, r1)?;
        let s2 = step(s0, s1)?;
        let t2 = step(t0, t1)?;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let u = r0.canonical_unit();
    Ok((u * r0, u * s0, u * t0))
}

pub(crate) fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Nearest integer to `num / den` (`den > 0`), ties toward −∞.
pub(crate) fn round_div(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    // ceil((2·num − den) / (2·den))
    let a = 2 * num - den;
    let b = 2 * den;
    -((-a).div_euclid(b))
}

pub(crate) fn to_i64(v: i128) -> Option<i64> {
    i64::try_from(v).ok()
}
