//! Dithered lattice encoding over Z[i]ⁿ, the compute-and-forward decoder, and
//! the QAM network-coding comparator.

mod qam;
mod viterbi;

pub use qam::QamScheme;
pub use viterbi::{exhaustive_quantize, viterbi_quantize, Trellis};

use num_complex::Complex64;
use rand::Rng;

use crate::constructions::{construct_a_complex, gain_report_for, Alphabet, Built, GainReport, LinearCode, SchemeDef};
use crate::error::{Error, Result};
use crate::lattices::Message;
use crate::rings::{round_to_ring, EuclideanRing, GaussInt, Residue};
use crate::rng::{centered_uniform, keyed, PURPOSE_DITHER, PURPOSE_MESSAGE};

/// Nearest-point search in the fine lattice.
#[derive(Debug, Clone)]
pub enum Quantizer {
    /// Λ = Z[i]ⁿ: round every coordinate.
    Coordinate,
    /// Λ = σ⁻¹(C) for a terminated convolutional code.
    Trellis(Trellis),
}

/// A lattice network code with hypercube shaping Λ' = βZ[i]ⁿ.
#[derive(Debug, Clone)]
pub struct LncScheme {
    pub name: String,
    pub built: Built,
    pub beta: GaussInt,
    pub quantizer: Quantizer,
    pub report: GainReport,
}

/// One transmitter's frame: message, dither and channel input.
#[derive(Debug, Clone)]
pub struct Frame {
    pub message: Message<GaussInt>,
    pub dither: Vec<Complex64>,
    pub x: Vec<Complex64>,
}

impl LncScheme {
    pub fn from_def(name: &str, def: &SchemeDef) -> Result<Self> {
        let report = gain_report_for(def)?.with_name(name);
        let (built, quantizer) = match def {
            SchemeDef::Baseline { pi, n } => {
                let code = LinearCode::trivial(Alphabet::complex(*pi)?, *n);
                (construct_a_complex(&code)?, Quantizer::Coordinate)
            }
            SchemeDef::Convolutional { code, mu } => {
                if code.nu > 3 {
                    return Err(Error::Budget(format!("trellis with {} states", code.num_states())));
                }
                (construct_a_complex(&code.block_code(*mu)?)?, Quantizer::Trellis(Trellis::new(code)))
            }
            SchemeDef::HammingD { .. }
            | SchemeDef::Qam { .. }
            | SchemeDef::ConstructionA { .. }
            | SchemeDef::ConstructionD { .. } => {
                return Err(Error::Invalid(format!("scheme {name} has no lattice decoder")));
            }
        };
        let beta = built
            .quotient
            .coarse_scale()?
            .ok_or_else(|| Error::Invalid("coarse lattice is not a scaled Z[i]^n".into()))?;
        Ok(Self { name: name.to_string(), built, beta, quantizer, report })
    }

    pub fn n(&self) -> usize {
        self.built.quotient.dim()
    }

    /// Average energy per complex coordinate of a dithered codeword, |β|²/6.
    pub fn power(&self) -> f64 {
        self.beta.norm() as f64 / 6.0
    }

    pub fn r_mes(&self) -> f64 {
        self.built.labeling.r_mes()
    }

    pub fn random_message<R: Rng>(&self, rng: &mut R) -> Message<GaussInt> {
        Message { components: self.built.labeling.pis().iter().map(|&pi| uniform_residue(rng, pi)).collect() }
    }

    /// Uniform dither over β·(−1/2, 1/2]² per coordinate.
    pub fn random_dither<R: Rng>(&self, rng: &mut R) -> Vec<Complex64> {
        let b = self.beta.to_complex();
        (0..self.n()).map(|_| b * Complex64::new(centered_uniform(rng), centered_uniform(rng))).collect()
    }

    /// The message and dither of transmitter `tx` in `frame`, both derived from `seed`.
    pub fn frame(&self, seed: u64, frame: u64, tx: u8) -> Result<Frame> {
        let message = self.random_message(&mut keyed(seed, frame, PURPOSE_MESSAGE.wrapping_add(tx)));
        let dither = self.random_dither(&mut keyed(seed, frame, PURPOSE_DITHER.wrapping_add(tx)));
        let x = self.encode(&message, &dither)?;
        Ok(Frame { message, dither, x })
    }

    /// x = [φ̃(w) + d] mod Λ'
    pub fn encode(&self, w: &Message<GaussInt>, dither: &[Complex64]) -> Result<Vec<Complex64>> {
        let lambda = self.built.labeling.embed(w)?;
        if dither.len() != lambda.len() {
            return Err(Error::Dimension(format!("dither of length {} in dimension {}", dither.len(), lambda.len())));
        }
        let b = self.beta.to_complex();
        Ok(lambda.iter().zip(dither).map(|(l, d)| wrap(l.to_complex() + d, b)).collect())
    }

    /// Nearest point of Λ to `t`.
    pub fn quantize(&self, t: &[Complex64]) -> Result<Vec<GaussInt>> {
        match &self.quantizer {
            Quantizer::Coordinate => Ok(t.iter().map(|&v| round_to_ring(v)).collect()),
            Quantizer::Trellis(trellis) => trellis.quantize(t),
        }
    }

    /// Estimate of Σ a_ℓ w_ℓ from y = Σ h_ℓ x_ℓ + z.
    pub fn decode(
        &self,
        y: &[Complex64],
        a: &[GaussInt],
        dithers: &[&[Complex64]],
        alpha: Complex64,
    ) -> Result<Message<GaussInt>> {
        if a.len() != dithers.len() {
            return Err(Error::Dimension("one dither per coefficient".into()));
        }
        let n = self.n();
        if y.len() != n || dithers.iter().any(|d| d.len() != n) {
            return Err(Error::Dimension(format!("received vector must have length {n}")));
        }
        let t: Vec<Complex64> = (0..n)
            .map(|j| alpha * y[j] - a.iter().zip(dithers).map(|(c, d)| c.to_complex() * d[j]).sum::<Complex64>())
            .collect();
        let lambda = self.quantize(&t)?;
        self.built.labeling.label(&lambda)
    }
}

/// v mod bZ[i], with representative in b·(−1/2, 1/2]².
fn wrap(v: Complex64, b: Complex64) -> Complex64 {
    v - b * round_to_ring(v / b).to_complex()
}

/// α = (Σ a_ℓ h̄_ℓ)·SNR / (‖h‖²·SNR + 1); as SNR → ∞ this tends to a·hᴴ/‖h‖².
pub fn mmse_alpha(h: &[Complex64], a: &[GaussInt], snr: f64) -> Complex64 {
    let ah: Complex64 = h.iter().zip(a).map(|(hl, al)| al.to_complex() * hl.conj()).sum();
    let hh: f64 = h.iter().map(|x| x.norm_sqr()).sum();
    if snr.is_infinite() {
        ah / hh
    } else {
        ah * snr / (hh * snr + 1.0)
    }
}

/// A uniformly distributed element of Z[i]/⟨π⟩.
///
/// With g = gcd(re π, im π) the set {x + y·i : 0 ≤ x < |π|²/g, 0 ≤ y < g} is a
/// complete residue system.
pub fn uniform_residue<R: Rng>(rng: &mut R, pi: GaussInt) -> Residue<GaussInt> {
    let g = gcd(pi.re.unsigned_abs(), pi.im.unsigned_abs()) as i64;
    let n = pi.norm() as i64;
    let x = rng.gen_range(0..n / g);
    let y = rng.gen_range(0..g);
    Residue::new(GaussInt::new(x, y), pi)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
