use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rings::{round_to_ring, EuclideanRing, GaussInt};

/// Uncoded m²-QAM with physical-layer network coding over Z[i]/⟨m⟩.
///
/// Symbols are digit pairs w = a + b·i with a, b ∈ {0, …, m−1}, sent as
/// x = w − (m−1)/2·(1+i).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QamScheme {
    pub m: i64,
    pub n: usize,
}

impl QamScheme {
    pub fn new(m: i64, n: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Invalid(format!("QAM order {m}² is too small")));
        }
        Ok(Self { m, n })
    }

    /// 2(m²−1)/12 per complex symbol.
    pub fn power(&self) -> f64 {
        2.0 * ((self.m * self.m - 1) as f64) / 12.0
    }

    pub fn r_mes(&self) -> f64 {
        2.0 * (self.m as f64).log2()
    }

    fn offset(&self) -> Complex64 {
        let h = (self.m - 1) as f64 / 2.0;
        Complex64::new(h, h)
    }

    pub fn reduce(&self, x: GaussInt) -> GaussInt {
        GaussInt::new(x.re.rem_euclid(self.m), x.im.rem_euclid(self.m))
    }

    pub fn random_message<R: Rng>(&self, rng: &mut R) -> Vec<GaussInt> {
        (0..self.n).map(|_| GaussInt::new(rng.gen_range(0..self.m), rng.gen_range(0..self.m))).collect()
    }

    pub fn encode(&self, w: &[GaussInt]) -> Vec<Complex64> {
        let d = self.offset();
        w.iter().map(|x| x.to_complex() - d).collect()
    }

    /// Σ a_ℓ w_ℓ reduced digit-wise modulo m.
    pub fn combine(&self, a: &[GaussInt], msgs: &[Vec<GaussInt>]) -> Vec<GaussInt> {
        (0..self.n)
            .map(|j| self.reduce(a.iter().zip(msgs).fold(GaussInt::default(), |acc, (&c, w)| acc + c * w[j])))
            .collect()
    }

    /// Rounds α·y + (Σ a_ℓ)·(m−1)/2·(1+i) and reduces modulo m.
    pub fn decode(&self, y: &[Complex64], a: &[GaussInt], alpha: Complex64) -> Result<Vec<GaussInt>> {
        if y.len() != self.n {
            return Err(Error::Dimension(format!("received vector must have length {}", self.n)));
        }
        let shift: Complex64 = a.iter().map(|c| c.to_complex()).sum::<Complex64>() * self.offset();
        Ok(y.iter().map(|&v| self.reduce(round_to_ring(alpha * v + shift))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constellation_energy() {
        let q = QamScheme::new(3, 1).unwrap();
        let mean: f64 = (0..3)
            .flat_map(|a| (0..3).map(move |b| GaussInt::new(a, b)))
            .map(|w| q.encode(&[w])[0].norm_sqr())
            .sum::<f64>()
            / 9.0;
        assert!((mean - q.power()).abs() < 1e-12);
        assert!((q.power() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn qpsk_with_rotated_channel() {
        // h = a = (1, i), m = 2: every pair of symbols
        let q = QamScheme::new(2, 1).unwrap();
        let a = [GaussInt::new(1, 0), GaussInt::new(0, 1)];
        let h = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        for s in 0..16 {
            let w1 = vec![GaussInt::new(s % 2, (s / 2) % 2)];
            let w2 = vec![GaussInt::new((s / 4) % 2, s / 8)];
            let y = [h[0] * q.encode(&w1)[0] + h[1] * q.encode(&w2)[0]];
            let got = q.decode(&y, &a, Complex64::new(1.0, 0.0)).unwrap();
            assert_eq!(got, q.combine(&a, &[w1, w2]));
        }
    }

    #[test]
    fn nine_qam_sum() {
        let q = QamScheme::new(3, 1).unwrap();
        let a = [GaussInt::new(1, 0); 2];
        for s in 0..81 {
            let w1 = vec![GaussInt::new(s % 3, (s / 3) % 3)];
            let w2 = vec![GaussInt::new((s / 9) % 3, s / 27)];
            let y = [q.encode(&w1)[0] + q.encode(&w2)[0]];
            assert_eq!(q.decode(&y, &a, Complex64::new(1.0, 0.0)).unwrap(), q.combine(&a, &[w1, w2]));
        }
    }
}
