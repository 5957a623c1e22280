use serde::Serialize;

use super::code::{Alphabet, CodeFamily, LinearCode};
use crate::error::{Error, Result};
use crate::rings::{EuclideanRing, GaussInt};

/// Rate-1/2 feed-forward convolutional encoder over Z[i]/⟨3⟩.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvCode {
    /// Tap coefficients of the two output polynomials, lowest degree first.
    pub taps: [Vec<GaussInt>; 2],
    pub nu: usize,
}

/// Index of the symbol a + b·i (a, b ∈ {0, 1, 2}) as a + 3b.
pub fn symbol_index(x: GaussInt) -> usize {
    let a = x.re.rem_euclid(3) as usize;
    let b = x.im.rem_euclid(3) as usize;
    a + 3 * b
}

/// Minimal-norm representative of the symbol with the given index.
pub fn symbol_from_index(i: usize) -> GaussInt {
    ALPHABET.reduce(GaussInt::new((i % 3) as i64, (i / 3) as i64))
}

pub const ALPHABET: Alphabet = Alphabet::Complex(GaussInt::new(3, 0));

impl ConvCode {
    pub fn new(g0: Vec<GaussInt>, g1: Vec<GaussInt>) -> Result<Self> {
        if g0.len() != g1.len() || g0.is_empty() {
            return Err(Error::Invalid("tap vectors must be nonempty and of equal length".into()));
        }
        let nu = g0.len() - 1;
        Ok(Self { taps: [g0, g1], nu })
    }

    /// g(D) = [1 + (1+i)D, (1+i) + D]
    pub fn nu1() -> Self {
        let g = GaussInt::new;
        Self::new(vec![g(1, 0), g(1, 1)], vec![g(1, 1), g(1, 0)]).expect("valid taps")
    }

    /// g(D) = [1 + D + (1+i)D², (1+i) + (1−i)D + D²]
    pub fn nu2() -> Self {
        let g = GaussInt::new;
        Self::new(vec![g(1, 0), g(1, 0), g(1, 1)], vec![g(1, 1), g(1, -1), g(1, 0)]).expect("valid taps")
    }

    pub fn num_states(&self) -> usize {
        9usize.pow(self.nu as u32)
    }

    /// The input delayed by `k` steps (k ≥ 1) stored in `state`.
    fn delayed(&self, state: usize, k: usize) -> usize {
        (state / 9usize.pow((k - 1) as u32)) % 9
    }

    pub fn next_state(&self, state: usize, input: usize) -> usize {
        if self.nu == 0 {
            return 0;
        }
        let keep = 9usize.pow((self.nu - 1) as u32);
        input + 9 * (state % keep)
    }

    /// The two output symbol indices for `input` leaving `state`.
    pub fn outputs(&self, state: usize, input: usize) -> [usize; 2] {
        let mut out = [0usize; 2];
        for (o, taps) in out.iter_mut().zip(&self.taps) {
            let mut acc = taps[0] * symbol_from_index(input);
            for (k, &t) in taps.iter().enumerate().skip(1) {
                acc = acc + t * symbol_from_index(self.delayed(state, k));
            }
            *o = symbol_index(acc);
        }
        out
    }

    /// Encodes μ input symbols followed by a ν-symbol zero tail.
    pub fn encode(&self, inputs: &[GaussInt]) -> Vec<GaussInt> {
        let mut state = 0;
        let mut out = Vec::with_capacity(2 * (inputs.len() + self.nu));
        let tail = std::iter::repeat_n(GaussInt::default(), self.nu);
        for u in inputs.iter().copied().chain(tail) {
            let ui = symbol_index(u);
            let [a, b] = self.outputs(state, ui);
            out.push(symbol_from_index(a));
            out.push(symbol_from_index(b));
            state = self.next_state(state, ui);
        }
        out
    }

    /// The terminated [2(μ+ν), μ] block code, with the even columns 0, 2, …, 2(μ−1)
    /// as information set.
    pub fn block_code(&self, mu: usize) -> Result<LinearCode> {
        let n = 2 * (mu + self.nu);
        let rows: Vec<Vec<GaussInt>> = (0..mu)
            .map(|t| {
                let mut row = vec![GaussInt::default(); n];
                for k in 0..=self.nu {
                    row[2 * (t + k)] = self.taps[0][k];
                    row[2 * (t + k) + 1] = self.taps[1][k];
                }
                row
            })
            .collect();
        let info: Vec<usize> = (0..mu).map(|t| 2 * t).collect();
        let mut code = LinearCode::with_info_set(ALPHABET, n, &rows, &info)?;
        code.family = CodeFamily::Convolutional { nu: self.nu, mu };
        Ok(code)
    }

    /// Minimum Euclidean weight of the terminated code with μ inputs and the
    /// number of codewords attaining it, by a min-plus search on the trellis.
    pub fn min_weight(&self, mu: usize) -> Result<(u128, u64)> {
        if mu == 0 {
            return Err(Error::Invalid("μ must be positive".into()));
        }
        let s = self.num_states();
        let weight: Vec<u128> = (0..9).map(|i| symbol_from_index(i).norm()).collect();
        // (state, nonzero input seen) -> (weight, count)
        let mut cur = vec![[(u128::MAX, 0u64); 2]; s];
        cur[0][0] = (0, 1);
        for t in 0..mu + self.nu {
            let mut next = vec![[(u128::MAX, 0u64); 2]; s];
            let inputs = if t < mu { 0..9 } else { 0..1 };
            for st in 0..s {
                for f in 0..2 {
                    let (w, c) = cur[st][f];
                    if w == u128::MAX {
                        continue;
                    }
                    for u in inputs.clone() {
                        let [a, b] = self.outputs(st, u);
                        let nw = w + weight[a] + weight[b];
                        let nf = (f == 1 || u != 0) as usize;
                        let slot = &mut next[self.next_state(st, u)][nf];
                        if nw < slot.0 {
                            *slot = (nw, c);
                        } else if nw == slot.0 {
                            slot.1 = slot.1.saturating_add(c);
                        }
                    }
                }
            }
            cur = next;
        }
        let (w, c) = cur[0][1];
        if w == u128::MAX {
            return Err(Error::Invalid("no nonzero codeword".into()));
        }
        Ok((w, c))
    }
}
