use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rings::{round_to_ring, EuclideanRing, GaussInt};

pub const DELTA: f64 = 0.75;

/// A reduced basis `basis = t · input` with `t` unimodular over Z[i].
#[derive(Debug, Clone)]
pub struct Reduced {
    pub basis: Vec<Vec<Complex64>>,
    pub t: Vec<Vec<GaussInt>>,
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

/// Gram–Schmidt coefficients μ and squared lengths ‖b*_i‖².
fn gram_schmidt(b: &[Vec<Complex64>]) -> (Vec<Vec<Complex64>>, Vec<f64>) {
    let n = b.len();
    let mut star: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut len = vec![0.0; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = inner(&b[i], &star[j]) / len[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * s;
            }
        }
        len[i] = norm_sqr(&v);
        star.push(v);
    }
    (mu, len)
}

/// Complex LLL reduction with δ = 0.75 of the rows of `basis`.
pub fn lll_reduce(basis: &[Vec<Complex64>]) -> Result<Reduced> {
    let n = basis.len();
    if n == 0 {
        return Err(Error::Dimension("empty basis".into()));
    }
    let scale = basis.iter().map(|r| norm_sqr(r)).fold(0.0, f64::max);
    let mut b = basis.to_vec();
    let mut t: Vec<Vec<GaussInt>> = (0..n).map(|i| (0..n).map(|j| GaussInt::from((i == j) as i64)).collect()).collect();
    let (_, len) = gram_schmidt(&b);
    if len.iter().any(|&l| !(l > 1e-13 * scale)) {
        return Err(Error::Singular);
    }
    let mut k = 1;
    let mut iterations = 0usize;
    while k < n {
        iterations += 1;
        if iterations > 100_000 {
            return Err(Error::Budget("LLL did not converge".into()));
        }
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&b);
            let r = round_to_ring(mu[k][j]);
            if !r.is_zero() {
                let rc = r.to_complex();
                for c in 0..b[k].len() {
                    let sub = rc * b[j][c];
                    b[k][c] -= sub;
                }
                for c in 0..n {
                    t[k][c] = t[k][c] - r * t[j][c];
                }
            }
        }
        let (mu, len) = gram_schmidt(&b);
        if len[k] >= (DELTA - mu[k][k - 1].norm_sqr()) * len[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            t.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    Ok(Reduced { basis: b, t })
}
