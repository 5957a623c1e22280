use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rings::{EuclideanRing, GaussInt, Residue};

/// Symbol alphabet of a linear code: Z/⟨p⟩ (lifted into Z ⊂ Z[i]) or Z[i]/⟨π⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Alphabet {
    Real(i64),
    Complex(GaussInt),
}

impl Alphabet {
    pub fn real(p: i64) -> Result<Self> {
        if p < 2 || !p.is_prime()? {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Self::Real(p))
    }

    pub fn complex(pi: GaussInt) -> Result<Self> {
        if pi.is_zero() || !pi.is_prime()? {
            return Err(Error::NotPrime(pi.to_string()));
        }
        Ok(Self::Complex(pi.canonical()))
    }

    /// The modulus as a Gaussian integer.
    pub fn modulus(&self) -> GaussInt {
        match *self {
            Self::Real(p) => GaussInt::from(p),
            Self::Complex(pi) => pi,
        }
    }

    /// |alphabet|
    pub fn size(&self) -> u128 {
        match *self {
            Self::Real(p) => p as u128,
            Self::Complex(pi) => pi.norm(),
        }
    }

    /// Minimal-norm representative of `x` modulo the alphabet's modulus.
    pub fn reduce(&self, x: GaussInt) -> GaussInt {
        match *self {
            Self::Real(p) => {
                debug_assert_eq!(x.im, 0);
                GaussInt::from(Residue::new(x.re, p).value())
            }
            Self::Complex(pi) => Residue::new(x, pi).value(),
        }
    }

    pub fn add(&self, a: GaussInt, b: GaussInt) -> GaussInt {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: GaussInt, b: GaussInt) -> GaussInt {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: GaussInt, b: GaussInt) -> GaussInt {
        self.reduce(a * b)
    }

    pub fn inv(&self, a: GaussInt) -> Option<GaussInt> {
        match *self {
            Self::Real(p) => Residue::new(a.re, p).inverse().map(|r| GaussInt::from(r.value())),
            Self::Complex(pi) => Residue::new(a, pi).inverse().map(|r| r.value()),
        }
    }

    /// All symbols, as minimal-norm representatives in a fixed order.
    pub fn elements(&self) -> Vec<GaussInt> {
        match *self {
            Self::Real(p) => (0..p).map(|v| self.reduce(GaussInt::from(v))).collect(),
            Self::Complex(pi) => {
                let b = (pi.norm() as f64).sqrt().ceil() as i64;
                let set: BTreeSet<GaussInt> = GaussInt::box_elements(b).into_iter().map(|x| self.reduce(x)).collect();
                let mut v: Vec<GaussInt> = set.into_iter().collect();
                v.sort_by_key(|x| (x.norm(), *x));
                v
            }
        }
    }

    /// Euclidean weight ‖σ̃(x)‖² of a symbol.
    pub fn weight(&self, x: GaussInt) -> u128 {
        self.reduce(x).norm()
    }

    /// Number of lifts of `x` attaining the minimal norm (in Z for real
    /// alphabets, in Z[i] for complex ones).
    pub fn minimal_lift_count(&self, x: GaussInt) -> u64 {
        let x = self.reduce(x);
        let m = self.modulus();
        let w = x.norm();
        match *self {
            Self::Real(_) => (-1..=1).filter(|&c| (x + m * GaussInt::from(c)).norm() == w).count() as u64,
            Self::Complex(_) => {
                GaussInt::box_elements(1).into_iter().filter(|&c| (x + m * c).norm() == w).count() as u64
            }
        }
    }
}

/// Structured code families whose weight enumerator is known analytically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CodeFamily {
    Unstructured,
    /// Binary extended Hamming code of length 2^m.
    ExtendedHamming,
    /// Terminated convolutional code; weights come from a trellis search.
    Convolutional {
        nu: usize,
        mu: usize,
    },
}

/// A linear block code in systematic form: `generator[:, info_set] = I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    pub alphabet: Alphabet,
    pub n: usize,
    pub generator: Vec<Vec<GaussInt>>,
    pub info_set: Vec<usize>,
    pub family: CodeFamily,
}

impl LinearCode {
    /// Row-reduces the given rows; the resulting pivot columns form the
    /// information set. Dependent rows are dropped.
    pub fn from_rows(alphabet: Alphabet, n: usize, rows: &[Vec<GaussInt>]) -> Result<Self> {
        let (generator, info_set) = rref(alphabet, n, rows)?;
        Ok(Self { alphabet, n, generator, info_set, family: CodeFamily::Unstructured })
    }

    /// Reduces the rows so that the given columns carry the identity.
    pub fn with_info_set(alphabet: Alphabet, n: usize, rows: &[Vec<GaussInt>], info_set: &[usize]) -> Result<Self> {
        let k = rows.len();
        if info_set.len() != k {
            return Err(Error::Dimension("information set size must equal the number of rows".into()));
        }
        let mut g: Vec<Vec<GaussInt>> = rows.iter().map(|r| r.iter().map(|&x| alphabet.reduce(x)).collect()).collect();
        check_len(n, &g)?;
        for (i, &col) in info_set.iter().enumerate() {
            let p = (i..k)
                .find(|&r| !g[r][col].is_zero())
                .ok_or_else(|| Error::Invalid("columns are not an information set".into()))?;
            g.swap(i, p);
            let inv = alphabet.inv(g[i][col]).expect("nonzero field element");
            g[i] = g[i].iter().map(|&x| alphabet.mul(x, inv)).collect();
            for r in 0..k {
                if r != i && !g[r][col].is_zero() {
                    let f = g[r][col];
                    let pivot_row = g[i].clone();
                    for (x, &y) in g[r].iter_mut().zip(&pivot_row) {
                        *x = alphabet.sub(*x, alphabet.mul(f, y));
                    }
                }
            }
        }
        Ok(Self { alphabet, n, generator: g, info_set: info_set.to_vec(), family: CodeFamily::Unstructured })
    }

    /// The [n, n] code.
    pub fn trivial(alphabet: Alphabet, n: usize) -> Self {
        let generator = (0..n).map(|i| (0..n).map(|j| GaussInt::from((i == j) as i64)).collect()).collect();
        Self { alphabet, n, generator, info_set: (0..n).collect(), family: CodeFamily::Unstructured }
    }

    /// Binary extended Hamming code of length n = 2^m (m ≥ 2).
    pub fn extended_hamming(n: usize) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::Invalid(format!("extended Hamming length {n} is not a power of two ≥ 4")));
        }
        let h = extended_hamming_parity(n);
        let alphabet = Alphabet::Real(2);
        let g = null_space(alphabet, n, &h)?;
        let mut code = Self::from_rows(alphabet, n, &g)?;
        code.family = CodeFamily::ExtendedHamming;
        Ok(code)
    }

    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn encode(&self, msg: &[GaussInt]) -> Vec<GaussInt> {
        let a = self.alphabet;
        let mut c = vec![GaussInt::default(); self.n];
        for (m, row) in msg.iter().zip(&self.generator) {
            if m.is_zero() {
                continue;
            }
            for (x, &g) in c.iter_mut().zip(row) {
                *x = a.add(*x, a.mul(*m, g));
            }
        }
        c
    }

    pub fn contains(&self, word: &[GaussInt]) -> bool {
        let info: Vec<GaussInt> = self.info_set.iter().map(|&j| self.alphabet.reduce(word[j])).collect();
        let c = self.encode(&info);
        c.iter().zip(word).all(|(&x, &y)| x == self.alphabet.reduce(y))
    }

    pub fn euclidean_weight(&self, word: &[GaussInt]) -> u128 {
        word.iter().map(|&x| self.alphabet.weight(x)).sum()
    }

    pub fn codewords(&self) -> Result<Vec<Vec<GaussInt>>> {
        let total = self.alphabet.size().checked_pow(self.k() as u32).unwrap_or(u128::MAX);
        if total > 1 << 22 {
            return Err(Error::Budget(format!("{total} codewords")));
        }
        let elems = self.alphabet.elements();
        let q = elems.len();
        let mut out = Vec::with_capacity(total as usize);
        let mut digits = vec![0usize; self.k()];
        loop {
            let msg: Vec<GaussInt> = digits.iter().map(|&d| elems[d]).collect();
            out.push(self.encode(&msg));
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return Ok(out);
                }
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

fn check_len(n: usize, rows: &[Vec<GaussInt>]) -> Result<()> {
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("code rows must have length {n}")));
    }
    Ok(())
}

/// Reduced row echelon form over the alphabet field; returns nonzero rows and pivot columns.
pub(crate) fn rref(a: Alphabet, n: usize, rows: &[Vec<GaussInt>]) -> Result<(Vec<Vec<GaussInt>>, Vec<usize>)> {
    check_len(n, rows)?;
    let mut g: Vec<Vec<GaussInt>> = rows.iter().map(|r| r.iter().map(|&x| a.reduce(x)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == g.len() {
            break;
        }
        let Some(p) = (r..g.len()).find(|&i| !g[i][col].is_zero()) else {
            continue;
        };
        g.swap(r, p);
        let inv = a.inv(g[r][col]).expect("nonzero field element");
        g[r] = g[r].iter().map(|&x| a.mul(x, inv)).collect();
        for i in 0..g.len() {
            if i != r && !g[i][col].is_zero() {
                let f = g[i][col];
                let pr = g[r].clone();
                for (x, &y) in g[i].iter_mut().zip(&pr) {
                    *x = a.sub(*x, a.mul(f, y));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    g.truncate(r);
    Ok((g, pivots))
}

/// Basis of {x : H xᵀ = 0}.
pub(crate) fn null_space(a: Alphabet, n: usize, h: &[Vec<GaussInt>]) -> Result<Vec<Vec<GaussInt>>> {
    let (hr, pivots) = rref(a, n, h)?;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&f| {
            let mut v = vec![GaussInt::default(); n];
            v[f] = GaussInt::from(1);
            for (row, &pc) in hr.iter().zip(&pivots) {
                v[pc] = a.reduce(-row[f]);
            }
            v
        })
        .collect())
}

/// Parity-check matrix of the extended Hamming code: column j is (1, binary(j)).
pub fn extended_hamming_parity(n: usize) -> Vec<Vec<GaussInt>> {
    let m = n.trailing_zeros() as usize;
    let mut h = vec![vec![GaussInt::from(1); n]];
    for bit in 0..m {
        h.push((0..n).map(|j| GaussInt::from(((j >> bit) & 1) as i64)).collect());
    }
    h
}

/// Minimum Euclidean weight over nonzero codewords and the number of codewords attaining it.
pub fn min_euclidean_weight(code: &LinearCode) -> Result<(u128, u64)> {
    let n = code.n as u128;
    match code.family {
        CodeFamily::ExtendedHamming => return Ok((4, (n * (n - 1) * (n - 2) / 24) as u64)),
        CodeFamily::Convolutional { .. } => {
            return Err(Error::Invalid("convolutional weights come from the trellis search".into()))
        }
        CodeFamily::Unstructured => {}
    }
    if code.k() == 0 {
        return Err(Error::Invalid("the zero code has no nonzero codewords".into()));
    }
    if code.k() == code.n {
        // weight-one words whose symbol lifts to a unit
        let units: BTreeSet<GaussInt> = match code.alphabet {
            Alphabet::Real(_) => [1i64, -1].iter().map(|&u| code.alphabet.reduce(GaussInt::from(u))).collect(),
            Alphabet::Complex(_) => GaussInt::units().iter().map(|&u| code.alphabet.reduce(u)).collect(),
        };
        return Ok((1, (units.len() * code.n) as u64));
    }
    let mut best = (u128::MAX, 0u64);
    for c in code.codewords()? {
        let w = code.euclidean_weight(&c);
        if w == 0 {
            continue;
        }
        if w < best.0 {
            best = (w, 1);
        } else if w == best.0 {
            best.1 += 1;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64) -> GaussInt {
        GaussInt::from(re)
    }

    #[test]
    fn mod5_weight() {
        let code = LinearCode::from_rows(Alphabet::real(5).unwrap(), 2, &[vec![g(1), g(3)]]).unwrap();
        assert_eq!(code.euclidean_weight(&[g(1), g(3)]), 5);
        assert_eq!(min_euclidean_weight(&code).unwrap().0, 5);
    }

    #[test]
    fn ternary_repetition() {
        let code = LinearCode::from_rows(Alphabet::real(3).unwrap(), 2, &[vec![g(1), g(1)]]).unwrap();
        assert_eq!(min_euclidean_weight(&code).unwrap(), (2, 2));
    }

    #[test]
    fn composite_rejected() {
        assert!(Alphabet::real(4).is_err());
        assert!(Alphabet::complex(GaussInt::new(2, 0)).is_err());
        assert!(Alphabet::complex(GaussInt::new(1, 1)).is_ok());
    }

    #[test]
    fn alphabet_sizes() {
        for (pi, size) in [(GaussInt::new(1, 1), 2), (GaussInt::new(3, 0), 9), (GaussInt::new(2, 1), 5)] {
            let a = Alphabet::complex(pi).unwrap();
            assert_eq!(a.elements().len(), size);
            assert_eq!(a.size(), size as u128);
        }
        let a = Alphabet::complex(GaussInt::new(1, 1)).unwrap();
        assert_eq!(a.minimal_lift_count(GaussInt::from(1)), 4);
        assert_eq!(Alphabet::Real(2).minimal_lift_count(GaussInt::from(1)), 2);
        assert_eq!(Alphabet::Real(3).minimal_lift_count(GaussInt::from(1)), 1);
    }

    #[test]
    fn systematic_form() {
        let a = Alphabet::real(3).unwrap();
        let code = LinearCode::from_rows(a, 3, &[vec![g(2), g(1), g(0)], vec![g(1), g(1), g(1)]]).unwrap();
        assert_eq!(code.info_set, vec![0, 1]);
        for (i, &c) in code.info_set.iter().enumerate() {
            for (r, row) in code.generator.iter().enumerate() {
                assert_eq!(row[c], g((r == i) as i64));
            }
        }
        assert!(code.contains(&[g(2), g(1), g(0)]));
    }

    #[test]
    fn extended_hamming_parameters() {
        for (n, k) in [(8, 4), (32, 26), (64, 57)] {
            let code = LinearCode::extended_hamming(n).unwrap();
            assert_eq!(code.k(), k);
            let h = extended_hamming_parity(n);
            for row in &code.generator {
                for hr in &h {
                    let s: i64 = row.iter().zip(hr).map(|(x, y)| x.re * y.re).sum();
                    assert_eq!(s.rem_euclid(2), 0);
                }
            }
        }
        let mut code = LinearCode::extended_hamming(8).unwrap();
        code.family = CodeFamily::Unstructured;
        assert_eq!(min_euclidean_weight(&code).unwrap(), (4, 14));
    }

    #[test]
    fn trivial_code_weights() {
        assert_eq!(min_euclidean_weight(&LinearCode::trivial(Alphabet::Real(2), 3)).unwrap(), (1, 3));
        assert_eq!(min_euclidean_weight(&LinearCode::trivial(Alphabet::Real(3), 3)).unwrap(), (1, 6));
        let c = LinearCode::trivial(Alphabet::complex(GaussInt::new(3, 0)).unwrap(), 2);
        assert_eq!(min_euclidean_weight(&c).unwrap(), (1, 8));
    }
}
