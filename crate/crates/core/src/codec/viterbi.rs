use num_complex::Complex64;

use crate::constructions::{symbol_from_index, ConvCode};
use crate::error::{Error, Result};
use crate::rings::{round_to_ring, EuclideanRing, GaussInt};

const THREE: f64 = 3.0;

/// Nearest point of σ̃(x) + 3Z[i] to `t`.
fn nearest_in_coset(x: GaussInt, t: Complex64) -> GaussInt {
    let s = x.to_complex();
    let r = round_to_ring((s - t) / THREE);
    GaussInt::new(x.re - 3 * r.re, x.im - 3 * r.im)
}

fn coset_metric(x: GaussInt, t: Complex64) -> f64 {
    (nearest_in_coset(x, t).to_complex() - t).norm_sqr()
}

fn steps(code: &ConvCode, t: &[Complex64]) -> Result<usize> {
    if !t.len().is_multiple_of(2) || t.len() / 2 <= code.nu {
        return Err(Error::Dimension(format!(
            "target of length {} does not fit a terminated trellis with memory {}",
            t.len(),
            code.nu
        )));
    }
    Ok(t.len() / 2)
}

/// A convolutional code with its precomputed branch table: `next[state][input]`
/// and the two output symbol indices of each branch.
#[derive(Debug, Clone)]
pub struct Trellis {
    pub code: ConvCode,
    next: Vec<[u32; 9]>,
    out: Vec<[[u8; 2]; 9]>,
}

impl Trellis {
    pub fn new(code: &ConvCode) -> Self {
        let s = code.num_states();
        let mut next = vec![[0u32; 9]; s];
        let mut out = vec![[[0u8; 2]; 9]; s];
        for st in 0..s {
            for u in 0..9 {
                next[st][u] = code.next_state(st, u) as u32;
                let [a, b] = code.outputs(st, u);
                out[st][u] = [a as u8, b as u8];
            }
        }
        Self { code: code.clone(), next, out }
    }

    /// Nearest point to `t` in the Construction A lattice of the terminated code,
    /// by the Viterbi algorithm over the 9^ν-state trellis. On equal path metrics the
    /// predecessor with the lowest state index survives.
    pub fn quantize(&self, t: &[Complex64]) -> Result<Vec<GaussInt>> {
        let code = &self.code;
        let len = steps(code, t)?;
        let mu = len - code.nu;
        let symbols: Vec<GaussInt> = (0..9).map(symbol_from_index).collect();
        let s = code.num_states();
        let mut metric = vec![f64::INFINITY; s];
        metric[0] = 0.0;
        // survivors[τ][state] = (previous state, input)
        let mut survivors: Vec<Vec<(u32, u8)>> = Vec::with_capacity(len);
        let mut table = [[0f64; 9]; 2];
        for tau in 0..len {
            for (o, row) in table.iter_mut().enumerate() {
                for (x, m) in row.iter_mut().enumerate() {
                    *m = coset_metric(symbols[x], t[2 * tau + o]);
                }
            }
            let inputs = if tau < mu { 9 } else { 1 };
            let mut next = vec![f64::INFINITY; s];
            let mut surv = vec![(u32::MAX, 0u8); s];
            for st in 0..s {
                let m = metric[st];
                if m.is_infinite() {
                    continue;
                }
                for u in 0..inputs {
                    let [a, b] = self.out[st][u];
                    let cand = m + table[0][a as usize] + table[1][b as usize];
                    let ns = self.next[st][u] as usize;
                    if cand < next[ns] {
                        next[ns] = cand;
                        surv[ns] = (st as u32, u as u8);
                    }
                }
            }
            metric = next;
            survivors.push(surv);
        }
        let mut inputs = vec![0usize; len];
        let mut state = 0usize;
        for tau in (0..len).rev() {
            let (prev, u) = survivors[tau][state];
            inputs[tau] = u as usize;
            state = prev as usize;
        }
        let u: Vec<GaussInt> = inputs[..mu].iter().map(|&i| symbols[i]).collect();
        let c = code.encode(&u);
        Ok(c.iter().zip(t).map(|(&x, &tj)| nearest_in_coset(x, tj)).collect())
    }
}

/// Viterbi quantization with a freshly built trellis; see [`Trellis::quantize`].
pub fn viterbi_quantize(code: &ConvCode, t: &[Complex64]) -> Result<Vec<GaussInt>> {
    Trellis::new(code).quantize(t)
}

/// Nearest lattice point by trying every codeword; for small μ only.
pub fn exhaustive_quantize(code: &ConvCode, t: &[Complex64]) -> Result<Vec<GaussInt>> {
    let len = steps(code, t)?;
    let mu = len - code.nu;
    if mu > 6 {
        return Err(Error::Budget(format!("9^{mu} codewords")));
    }
    let mut best: Option<(f64, Vec<GaussInt>)> = None;
    for idx in 0..9usize.pow(mu as u32) {
        let u: Vec<GaussInt> = (0..mu).map(|k| symbol_from_index((idx / 9usize.pow(k as u32)) % 9)).collect();
        let point: Vec<GaussInt> = code.encode(&u).iter().zip(t).map(|(&x, &tj)| nearest_in_coset(x, tj)).collect();
        let d: f64 = point.iter().zip(t).map(|(p, tj)| (p.to_complex() - tj).norm_sqr()).sum();
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, point));
        }
    }
    Ok(best.expect("at least one codeword").1)
}
