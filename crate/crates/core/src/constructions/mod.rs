//! Nested lattice pairs from linear codes (Constructions A, complex A and D),
//! their coding gains and kissing numbers, and the named scheme catalog.

mod catalog;
mod code;
mod conv;

use serde::Serialize;

pub use catalog::{catalog, gain_report_for, hamming_chain, lookup, CatalogEntry, SchemeDef};
pub use code::{extended_hamming_parity, min_euclidean_weight, Alphabet, CodeFamily, LinearCode};
pub use conv::{symbol_from_index, symbol_index, ConvCode};

use crate::error::{Error, Result};
use crate::lattices::{build_labeling, to_db, LatticeQuotient, LinearLabeling};
use crate::rings::{EuclideanRing, GaussInt};
use crate::smith::RingMatrix;

/// A lattice quotient together with its labeling.
#[derive(Debug, Clone)]
pub struct Built {
    pub quotient: LatticeQuotient<GaussInt>,
    pub labeling: LinearLabeling<GaussInt>,
}

fn construct_a(code: &LinearCode, m: GaussInt) -> Result<Built> {
    let n = code.n;
    let mut rows: Vec<Vec<GaussInt>> = code.generator.clone();
    let mut diag = vec![m; code.k()];
    for j in (0..n).filter(|j| !code.info_set.contains(j)) {
        let mut row = vec![GaussInt::default(); n];
        row[j] = m;
        rows.push(row);
        diag.push(GaussInt::from(1));
    }
    let quotient = LatticeQuotient::new(RingMatrix::from_rows(&rows)?, RingMatrix::diagonal(&diag))?;
    let labeling = build_labeling(&quotient)?;
    Ok(Built { quotient, labeling })
}

/// Λ = σ⁻¹(C) ⊕ i·σ⁻¹(C) for a code over Z/⟨p⟩, Λ' = pZ[i]ⁿ.
pub fn construct_a_real(code: &LinearCode) -> Result<Built> {
    match code.alphabet {
        Alphabet::Real(p) => construct_a(code, GaussInt::from(p)),
        Alphabet::Complex(_) => Err(Error::Invalid("real Construction A needs a code over Z/p".into())),
    }
}

/// Λ = σ⁻¹(C) for a code over Z[i]/⟨π⟩, Λ' = πZ[i]ⁿ.
pub fn construct_a_complex(code: &LinearCode) -> Result<Built> {
    match code.alphabet {
        Alphabet::Complex(pi) => construct_a(code, pi),
        Alphabet::Real(_) => Err(Error::Invalid("complex Construction A needs a code over Z[i]/π".into())),
    }
}

/// C_1 ⊆ C_2 ⊆ … ⊆ C_s over Z/⟨p⟩.
#[derive(Debug, Clone)]
pub struct NestedCodeChain {
    pub p: i64,
    pub n: usize,
    pub codes: Vec<LinearCode>,
}

impl NestedCodeChain {
    pub fn new(codes: Vec<LinearCode>) -> Result<Self> {
        let first = codes.first().ok_or_else(|| Error::Invalid("empty code chain".into()))?;
        let Alphabet::Real(p) = first.alphabet else {
            return Err(Error::Invalid("Construction D needs codes over Z/p".into()));
        };
        let n = first.n;
        for c in &codes {
            if c.alphabet != Alphabet::Real(p) || c.n != n {
                return Err(Error::Invalid("codes in a chain must share alphabet and length".into()));
            }
        }
        for w in codes.windows(2) {
            if w[0].k() > w[1].k() || !w[0].generator.iter().all(|row| w[1].contains(row)) {
                return Err(Error::Invalid("codes are not nested".into()));
            }
        }
        Ok(Self { p, n, codes })
    }

    pub fn s(&self) -> usize {
        self.codes.len()
    }

    /// Basis g_1, …, g_n adapted to the chain and the level of each row
    /// (level i−1 for rows added by C_i, level s for the completing unit vectors).
    pub fn basis(&self) -> Result<(Vec<Vec<GaussInt>>, Vec<u32>)> {
        let a = Alphabet::Real(self.p);
        let mut rows: Vec<Vec<GaussInt>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let mut levels: Vec<u32> = Vec::new();
        for (level, code) in self.codes.iter().enumerate() {
            for g in &code.generator {
                let mut v: Vec<GaussInt> = g.iter().map(|&x| a.reduce(x)).collect();
                for (row, &pc) in rows.iter().zip(&pivots) {
                    let f = v[pc];
                    if !f.is_zero() {
                        for (x, &y) in v.iter_mut().zip(row) {
                            *x = a.sub(*x, a.mul(f, y));
                        }
                    }
                }
                let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
                    continue;
                };
                let inv = a.inv(v[lead]).ok_or_else(|| Error::Invalid("no unit pivot".into()))?;
                let v: Vec<GaussInt> = v.iter().map(|&x| a.mul(x, inv)).collect();
                rows.push(v);
                pivots.push(lead);
                levels.push(level as u32);
            }
            if rows.len() != code.k() {
                return Err(Error::Invalid("chain dimensions are inconsistent".into()));
            }
        }
        for j in 0..self.n {
            if !pivots.contains(&j) {
                let mut e = vec![GaussInt::default(); self.n];
                e[j] = GaussInt::from(1);
                rows.push(e);
                pivots.push(j);
                levels.push(self.s() as u32);
            }
        }
        Ok((rows, levels))
    }
}

/// Λ = Σ_j p^{level_j} g̃_j Z[i] + …, Λ' = p^s Z[i]ⁿ.
pub fn construct_d(chain: &NestedCodeChain) -> Result<Built> {
    let (rows, levels) = chain.basis()?;
    let s = chain.s() as u32;
    let p = chain.p;
    let g_rows: Vec<Vec<GaussInt>> =
        rows.iter().zip(&levels).map(|(r, &l)| r.iter().map(|&x| x * GaussInt::from(p.pow(l))).collect()).collect();
    let diag: Vec<GaussInt> = levels.iter().map(|&l| GaussInt::from(p.pow(s - l))).collect();
    let quotient = LatticeQuotient::new(RingMatrix::from_rows(&g_rows)?, RingMatrix::diagonal(&diag))?;
    let labeling = build_labeling(&quotient)?;
    Ok(Built { quotient, labeling })
}

/// An exact value or an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Exact(f64),
    Bounds { lower: Option<f64>, upper: Option<f64> },
}

impl Quantity {
    pub fn exact(&self) -> Option<f64> {
        match *self {
            Self::Exact(v) => Some(v),
            Self::Bounds { .. } => None,
        }
    }

    /// The exact value, or the lower bound.
    pub fn lower(&self) -> Option<f64> {
        match *self {
            Self::Exact(v) => Some(v),
            Self::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> Option<f64> {
        match *self {
            Self::Exact(v) => Some(v),
            Self::Bounds { upper, .. } => upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Bound,
    Bruteforce,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainReport {
    pub name: Option<String>,
    pub n: usize,
    pub d_sq: Quantity,
    pub kissing: Quantity,
    /// Exact value or lower bound.
    pub gamma_c: f64,
    pub gamma_c_db: f64,
    pub r_mes: f64,
    pub method: Method,
    /// Minimum Euclidean weight of each constituent code.
    pub w_min: Vec<u128>,
    /// Number of minimum-weight codewords of each constituent code, when known.
    pub counts: Vec<Option<u64>>,
}

impl GainReport {
    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }
}

/// Parameters of a code used by the gain formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeSummary {
    pub n: usize,
    pub k: usize,
    pub w_min: u128,
    pub count: Option<u64>,
}

impl CodeSummary {
    pub fn of(code: &LinearCode) -> Result<Self> {
        let (w_min, count) = match code.family {
            CodeFamily::Convolutional { nu, mu } => {
                return Err(Error::Invalid(format!("use ConvCode::min_weight for the ν={nu}, μ={mu} trellis code")))
            }
            _ => min_euclidean_weight(code)?,
        };
        Ok(Self { n: code.n, k: code.k(), w_min, count: Some(count) })
    }
}

/// γ_c and K for Construction A (`real`: code over Z/p lifted to Z[i]; otherwise over Z[i]/π
/// with |π|² = `modulus_norm`).
pub fn gain_report_construction_a(summary: CodeSummary, modulus_norm: u128, real: bool) -> GainReport {
    let CodeSummary { n, k, w_min, count } = summary;
    let rate = k as f64 / n as f64;
    // V(Λ)^{1/n} = |m|^{2(1 − k/n)}
    let vol = (modulus_norm as f64).powf(1.0 - rate);
    let gamma = w_min as f64 / vol;
    let kissing = count.map(|a| {
        let a = a as f64;
        let w = w_min as i32;
        if real {
            if modulus_norm == 4 {
                2.0 * a * 2f64.powi(w)
            } else {
                2.0 * a
            }
        } else if modulus_norm == 2 {
            a * 4f64.powi(w)
        } else {
            a
        }
    });
    GainReport {
        name: None,
        n,
        d_sq: Quantity::Exact(w_min as f64),
        kissing: match kissing {
            Some(v) => Quantity::Exact(v),
            None => Quantity::Bounds { lower: None, upper: None },
        },
        gamma_c: gamma,
        gamma_c_db: to_db(gamma),
        r_mes: rate * (modulus_norm as f64).log2(),
        method: Method::Formula,
        w_min: vec![w_min],
        counts: vec![count],
    }
}

/// Lower bound on γ_c and upper bound on K for Construction D. For s = 2,
/// p = 2, d(C_1) ≥ 4 and C_2 = the full space the values are exact.
pub fn gain_report_construction_d(p: i64, summaries: &[CodeSummary]) -> Result<GainReport> {
    let first = summaries.first().ok_or_else(|| Error::Invalid("empty chain".into()))?;
    let n = first.n;
    let s = summaries.len() as i32;
    let p2 = (p * p) as f64;
    let terms: Vec<f64> = summaries.iter().enumerate().map(|(i, c)| p2.powi(i as i32) * c.w_min as f64).collect();
    let d_lb = terms.iter().copied().fold(f64::INFINITY, f64::min);
    let ksum: f64 = summaries.iter().map(|c| c.k as f64).sum::<f64>() / n as f64;
    let vol = p2.powf(s as f64 - ksum);
    let gamma = d_lb / vol;
    let k_ub = summaries
        .iter()
        .zip(&terms)
        .filter(|(_, &t)| t == d_lb)
        .try_fold(0.0, |acc, (c, _)| {
            let mult = if p == 2 { 2f64.powi(c.w_min as i32) } else { 1.0 };
            c.count.map(|a| acc + a as f64 * mult)
        })
        .map(|v| 2.0 * v);
    let exact = s == 2 && p == 2 && first.w_min >= 4 && summaries[1].k == n;
    let (d_sq, kissing, method) = if exact {
        (
            Quantity::Exact(d_lb),
            k_ub.map_or(Quantity::Bounds { lower: None, upper: None }, Quantity::Exact),
            Method::Formula,
        )
    } else {
        (
            Quantity::Bounds { lower: Some(d_lb), upper: None },
            Quantity::Bounds { lower: None, upper: k_ub },
            Method::Bound,
        )
    };
    Ok(GainReport {
        name: None,
        n,
        d_sq,
        kissing,
        gamma_c: gamma,
        gamma_c_db: to_db(gamma),
        r_mes: ksum * p2.log2(),
        method,
        w_min: summaries.iter().map(|c| c.w_min).collect(),
        counts: summaries.iter().map(|c| c.count).collect(),
    })
}

pub fn gain_report_chain(chain: &NestedCodeChain) -> Result<GainReport> {
    let summaries: Vec<CodeSummary> = chain.codes.iter().map(CodeSummary::of).collect::<Result<_>>()?;
    gain_report_construction_d(chain.p, &summaries)
}

/// γ_c and K of a terminated convolutional code used in complex Construction A.
pub fn gain_report_conv(code: &ConvCode, mu: usize) -> Result<GainReport> {
    let (w, a) = code.min_weight(mu)?;
    let summary = CodeSummary { n: 2 * (mu + code.nu), k: mu, w_min: w, count: Some(a) };
    Ok(gain_report_construction_a(summary, 9, false))
}

/// Brute-force (d², K) of a built quotient, with the γ_c they imply.
pub fn gain_report_bruteforce(built: &Built, bound: i64) -> Result<GainReport> {
    let (d, k) = crate::lattices::min_intercoset_distance_bruteforce(&built.labeling, bound)?;
    let n = built.quotient.dim();
    let gamma = crate::lattices::nominal_coding_gain(d as f64, built.labeling.log2_fine_volume(), n);
    Ok(GainReport {
        name: None,
        n,
        d_sq: Quantity::Exact(d as f64),
        kissing: Quantity::Exact(k as f64),
        gamma_c: gamma,
        gamma_c_db: to_db(gamma),
        r_mes: built.labeling.r_mes(),
        method: Method::Bruteforce,
        w_min: vec![],
        counts: vec![],
    })
}

/// Hamming-weight screening: the number of words of each weight 1..=max_w in the null space of `h` (binary).
pub fn low_weight_codewords(h: &[Vec<GaussInt>], n: usize, max_w: usize) -> Vec<u64> {
    let syndromes: Vec<u64> = (0..n)
        .map(|j| h.iter().enumerate().fold(0u64, |acc, (r, row)| acc | (((row[j].re & 1) as u64) << r)))
        .collect();
    let mut counts = vec![0u64; max_w + 1];
    fn rec(start: usize, depth: usize, acc: u64, syn: &[u64], max_w: usize, counts: &mut [u64]) {
        if depth > 0 && acc == 0 {
            counts[depth] += 1;
        }
        if depth == max_w {
            return;
        }
        for j in start..syn.len() {
            rec(j + 1, depth + 1, acc ^ syn[j], syn, max_w, counts);
        }
    }
    rec(0, 0, 0, &syndromes, max_w, &mut counts);
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: i64) -> GaussInt {
        GaussInt::from(x)
    }

    #[test]
    fn trivial_code_is_baseline() {
        let code = LinearCode::trivial(Alphabet::real(3).unwrap(), 3);
        let b = construct_a_real(&code).unwrap();
        assert_eq!(b.labeling.pis(), &[g(3); 3]);
        let r = gain_report_construction_a(CodeSummary::of(&code).unwrap(), 9, true);
        assert!((r.gamma_c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mod5_index() {
        let code = LinearCode::from_rows(Alphabet::real(5).unwrap(), 2, &[vec![g(1), g(1)]]).unwrap();
        let b = construct_a_real(&code).unwrap();
        assert_eq!(b.labeling.size(), Some(25));
        assert!((b.labeling.r_mes() - 25f64.log2() / 2.0).abs() < 1e-12);
        assert!(!g(5).is_prime().unwrap());
        assert!(g(3).is_prime().unwrap());
    }

    #[test]
    fn ternary_gain() {
        let code = LinearCode::from_rows(Alphabet::real(3).unwrap(), 2, &[vec![g(1), g(1)]]).unwrap();
        let r = gain_report_construction_a(CodeSummary::of(&code).unwrap(), 9, true);
        assert!((r.gamma_c - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn complex_alphabets() {
        let code = LinearCode::trivial(Alphabet::complex(GaussInt::new(3, 0)).unwrap(), 2);
        let b = construct_a_complex(&code).unwrap();
        assert_eq!(b.labeling.size(), Some(81));
        let code = LinearCode::trivial(Alphabet::complex(GaussInt::new(1, 1)).unwrap(), 2);
        let b = construct_a_complex(&code).unwrap();
        assert!(b.labeling.pis().iter().all(|p| p.norm() == 2));
        assert!(construct_a_real(&code).is_err());
    }

    #[test]
    fn construction_d_single_level_is_construction_a() {
        let code = LinearCode::from_rows(Alphabet::real(2).unwrap(), 3, &[vec![g(1), g(1), g(0)]]).unwrap();
        let d = construct_d(&NestedCodeChain::new(vec![code.clone()]).unwrap()).unwrap();
        let a = construct_a_real(&code).unwrap();
        for x in GaussInt::box_elements(2) {
            for y in GaussInt::box_elements(1) {
                let p = vec![x, y, x - y];
                assert_eq!(d.labeling.contains(&p).unwrap(), a.labeling.contains(&p).unwrap());
                assert_eq!(d.labeling.in_coarse(&p).unwrap(), a.labeling.in_coarse(&p).unwrap());
            }
        }
    }

    #[test]
    fn hamming_chain_message_space() {
        let c1 = LinearCode::extended_hamming(8).unwrap();
        let c2 = LinearCode::trivial(Alphabet::Real(2), 8);
        let chain = NestedCodeChain::new(vec![c1, c2]).unwrap();
        let b = construct_d(&chain).unwrap();
        let mut pis: Vec<GaussInt> = b.labeling.pis().to_vec();
        pis.sort_by_key(|p| p.norm());
        assert_eq!(pis, [vec![g(2); 4], vec![g(4); 4]].concat());
        assert!((b.labeling.r_mes() - (4.0 + 8.0) / 8.0 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_nested_chain_rejected() {
        let a = Alphabet::Real(2);
        let c1 = LinearCode::from_rows(a, 2, &[vec![g(1), g(0)]]).unwrap();
        let c2 = LinearCode::from_rows(a, 2, &[vec![g(1), g(1)]]).unwrap();
        assert!(NestedCodeChain::new(vec![c1, c2]).is_err());
    }

    #[test]
    fn hamming_chain_gains() {
        for (n, expect) in [(32, 3.08), (64, 3.44), (128, 3.67), (256, 3.81)] {
            let chain = NestedCodeChain::new(vec![
                LinearCode::extended_hamming(n).unwrap(),
                LinearCode::trivial(Alphabet::Real(2), n),
            ])
            .unwrap();
            let r = gain_report_chain(&chain).unwrap();
            assert!((r.gamma_c - expect).abs() < 0.005, "n={n}: {}", r.gamma_c);
            assert_eq!(r.method, Method::Formula);
        }
    }

    #[test]
    fn published_bounds() {
        let oe = [
            CodeSummary { n: 64800, k: 54000, w_min: 4, count: None },
            CodeSummary { n: 64800, k: 64800, w_min: 1, count: Some(64800) },
        ];
        let r = gain_report_construction_d(2, &oe).unwrap();
        assert!((r.gamma_c_db - 5.02).abs() < 0.005);
        assert!((r.r_mes - 3.67).abs() < 0.005);
        let turbo =
            [CodeSummary { n: 6, k: 2, w_min: 28, count: None }, CodeSummary { n: 6, k: 3, w_min: 13, count: None }];
        let r = gain_report_construction_d(2, &turbo).unwrap();
        assert!((r.gamma_c_db - 7.45).abs() < 0.005);
        assert!((r.r_mes - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.method, Method::Bound);
    }

    #[test]
    fn hamming_screening() {
        let h = extended_hamming_parity(32);
        let counts = low_weight_codewords(&h, 32, 4);
        assert_eq!(&counts[1..4], &[0, 0, 0]);
        assert_eq!(counts[4], 32 * 31 * 30 / 24);
    }

    #[test]
    fn small_hamming_chain_bruteforce() {
        let chain = NestedCodeChain::new(vec![
            LinearCode::extended_hamming(4).unwrap(),
            LinearCode::trivial(Alphabet::Real(2), 4),
        ])
        .unwrap();
        let formula = gain_report_chain(&chain).unwrap();
        let brute = gain_report_bruteforce(&construct_d(&chain).unwrap(), 2).unwrap();
        assert_eq!(formula.d_sq, brute.d_sq);
        assert_eq!(formula.kissing, brute.kissing);
        assert!((formula.gamma_c - brute.gamma_c).abs() < 1e-12);
    }
}
