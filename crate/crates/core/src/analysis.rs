//! Union-bound estimates of the probability of decoding the wrong linear
//! combination.

use num_complex::Complex64;

use crate::codec::mmse_alpha;
use crate::coeffs::GramContext;
use crate::error::{Error, Result};
use crate::rings::{EuclideanRing, GaussInt};

#[derive(Debug, Clone)]
pub struct BoundInputs {
    pub d_sq: f64,
    pub kissing: f64,
    pub h: Vec<Complex64>,
    pub a: Vec<GaussInt>,
    /// P / N0
    pub snr: f64,
    pub n0: f64,
    /// Receiver scaling; the MMSE choice when absent.
    pub alpha: Option<Complex64>,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        if !(self.d_sq >= 0.0) || !(self.kissing >= 1.0) || !(self.n0 > 0.0) || !(self.snr > 0.0) {
            return Err(Error::Invalid("union bound needs d² ≥ 0, K ≥ 1, N0 > 0 and SNR > 0".into()));
        }
        if self.h.len() != self.a.len() || self.h.is_empty() {
            return Err(Error::Dimension("h and a must have the same nonzero length".into()));
        }
        Ok(())
    }

    /// Effective noise variance in units of N0: a·M·aᴴ, or |α|² + SNR·‖αh − a‖².
    pub fn q(&self) -> Result<f64> {
        match self.alpha {
            Some(alpha) => {
                let dist: f64 =
                    self.h.iter().zip(&self.a).map(|(hl, al)| (alpha * hl - al.to_complex()).norm_sqr()).sum();
                Ok(alpha.norm_sqr() + self.snr * dist)
            }
            None => Ok(GramContext::new(&self.h, self.snr)?.quadratic_form(&self.a)),
        }
    }
}

/// K·exp(−d² / (4·N0·Q)).
pub fn union_bound_estimate(b: &BoundInputs) -> Result<f64> {
    b.validate()?;
    Ok(b.kissing * (-b.d_sq / (4.0 * b.n0 * b.q()?)).exp())
}

/// K·exp(−(3/2)·γ_c·2^(−R_mes)·SNR / a·M·aᴴ) for hypercube shaping.
pub fn union_bound_gain_form(gamma_c: f64, kissing: f64, r_mes: f64, snr: f64, a_m_a: f64) -> f64 {
    kissing * (-1.5 * gamma_c * (-r_mes).exp2() * snr / a_m_a).exp()
}

/// The MMSE scaling used when `alpha` is absent.
pub fn optimal_alpha(b: &BoundInputs) -> Complex64 {
    mmse_alpha(&b.h, &b.a, b.snr)
}
