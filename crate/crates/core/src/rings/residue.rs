use std::ops::{Add, Mul, Neg, Sub};

use super::{ext_gcd, EuclideanRing};

/// A coset `value + ⟨modulus⟩`, stored through its minimal-norm representative.
///
/// The modulus is kept in canonical-associate form so that the representative
/// depends only on the ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue<R: EuclideanRing> {
    value: R,
    modulus: R,
}

impl<R: EuclideanRing> Residue<R> {
    /// # Panics
    /// If `modulus` is zero.
    pub fn new(x: R, modulus: R) -> Self {
        assert!(!modulus.is_zero(), "residue modulo zero");
        let modulus = modulus.canonical();
        let value = x.rem_round(modulus).expect("residue reduction overflow");
        Self { value, modulus }
    }

    pub fn zero(modulus: R) -> Self {
        Self::new(R::zero(), modulus)
    }

    pub fn value(&self) -> R {
        self.value
    }

    pub fn modulus(&self) -> R {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        let (g, s, _) = ext_gcd(self.value, self.modulus).ok()?;
        if g.is_unit() {
            Some(Self::new(s * g.unit_inverse()?, self.modulus))
        } else {
            None
        }
    }

    pub fn scale(&self, c: R) -> Self {
        Self::new(self.value * c, self.modulus)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "residue modulus mismatch");
    }
}

impl<R: EuclideanRing> Add for Residue<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self::new(self.value + rhs.value, self.modulus)
    }
}

impl<R: EuclideanRing> Sub for Residue<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self::new(self.value - rhs.value, self.modulus)
    }
}

impl<R: EuclideanRing> Mul for Residue<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self::new(self.value * rhs.value, self.modulus)
    }
}

impl<R: EuclideanRing> Neg for Residue<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.modulus)
    }
}

/// The natural projection σ: T → T/⟨π⟩.
pub fn project_sigma<R: EuclideanRing>(z: R, pi: R) -> Residue<R> {
    Residue::new(z, pi)
}

/// The minimal-norm lift σ̃: T/⟨π⟩ → T.
pub fn lift_sigma<R: EuclideanRing>(r: Residue<R>) -> R {
    r.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{EisenInt, GaussInt};
    use proptest::prelude::*;

    #[test]
    fn lift_of_mod5_pair() {
        let lifted: Vec<i64> = [1i64, 3].iter().map(|&c| lift_sigma(project_sigma(c, 5))).collect();
        assert_eq!(lifted, vec![1, -2]);
        assert_eq!(lift_sigma(project_sigma(GaussInt::new(3, -6), GaussInt::new(3, 0))), GaussInt::new(0, 0));
    }

    #[test]
    fn inverses_mod_three() {
        let pi = GaussInt::new(3, 0);
        for a in -1..=1 {
            for b in -1..=1 {
                let r = Residue::new(GaussInt::new(a, b), pi);
                match r.inverse() {
                    Some(inv) => assert_eq!((r * inv).value(), GaussInt::new(1, 0)),
                    None => assert!(r.is_zero()),
                }
            }
        }
        assert!(Residue::new(2i64, 4).inverse().is_none());
        assert_eq!(Residue::new(5i64, 12).inverse().unwrap().value(), 5);
    }

    #[test]
    fn unit_modulus_invariance() {
        let x = GaussInt::new(4, 7);
        let a = Residue::new(x, GaussInt::new(2, 1));
        let b = Residue::new(x, GaussInt::new(-1, 2));
        assert_eq!(a, b);
    }

    fn gauss() -> impl Strategy<Value = GaussInt> {
        (-30i64..30, -30i64..30).prop_map(|(a, b)| GaussInt::new(a, b))
    }

    proptest! {
        #[test]
        fn section_property(x in gauss()) {
            let pi = GaussInt::new(3, 0);
            let r = project_sigma(x, pi);
            prop_assert_eq!(project_sigma(lift_sigma(r), pi), r);
        }

        #[test]
        fn lift_is_locally_minimal(x in gauss(), pr in 1i64..6, pi_im in -3i64..4) {
            let pi = GaussInt::new(pr, pi_im);
            let w = lift_sigma(project_sigma(x, pi));
            prop_assert!((x - w).rem_round(pi).unwrap().is_zero());
            for c in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let shift = GaussInt::new(c.0, c.1) * pi;
                prop_assert!(w.norm() <= (w + shift).norm());
            }
        }

        #[test]
        fn residue_ring_axioms(a in gauss(), b in gauss(), c in gauss()) {
            let pi = GaussInt::new(2, 1);
            let (a, b, c) = (Residue::new(a, pi), Residue::new(b, pi), Residue::new(c, pi));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - a, Residue::zero(pi));
        }

        #[test]
        fn eisenstein_residues(a in -20i64..20, b in -20i64..20, c in -20i64..20, d in -20i64..20) {
            let pi = EisenInt::new(2, 0);
            let x = Residue::new(EisenInt::new(a, b), pi);
            let y = Residue::new(EisenInt::new(c, d), pi);
            prop_assert_eq!(x * y, y * x);
            prop_assert!(x.value().norm() <= 1);
        }
    }
}
