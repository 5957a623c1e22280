//! Coefficient selection for compute-and-forward: the computation rate, shortest
//! integer combinations and dominant solutions.

mod lll;

pub use lll::{lll_reduce, Reduced, DELTA};

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rings::{EuclideanRing, GaussInt, Residue};

/// The quadratic form a ↦ a·M·aᴴ for one receiver.
#[derive(Debug, Clone)]
pub struct GramContext {
    pub h: Vec<Complex64>,
    pub snr: f64,
    /// M = SNR·I − SNR²/(SNR·‖h‖² + 1)·hᴴh
    pub m_matrix: Vec<Vec<Complex64>>,
    /// Lower triangular with M = chol·cholᴴ.
    pub chol_factor: Vec<Vec<Complex64>>,
}

/// Which coefficient vectors are admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// a ≢ 0 modulo π.
    NonzeroModPi(GaussInt),
    /// Every entry of a is nonzero modulo π.
    AllNonzero(GaussInt),
}

impl Constraint {
    pub fn admits(&self, a: &[GaussInt]) -> bool {
        match self {
            Constraint::NonzeroModPi(pi) => a.iter().any(|&x| !Residue::new(x, *pi).is_zero()),
            Constraint::AllNonzero(pi) => a.iter().all(|&x| !Residue::new(x, *pi).is_zero()),
        }
    }
}

/// A coefficient vector with its weighted length ‖a·chol‖² and computation rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub a: Vec<GaussInt>,
    pub norm_sq: f64,
    pub rate: f64,
}

fn cholesky(m: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let n = m.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        let d = m[i][i].re - (0..i).map(|k| c[i][k].norm_sqr()).sum::<f64>();
        if !(d > 0.0) {
            return Err(Error::Singular);
        }
        c[i][i] = Complex64::new(d.sqrt(), 0.0);
        for j in i + 1..n {
            let s: Complex64 = (0..i).map(|k| c[j][k] * c[i][k].conj()).sum();
            c[j][i] = (m[j][i] - s) / c[i][i].re;
        }
    }
    Ok(c)
}

impl GramContext {
    pub fn new(h: &[Complex64], snr: f64) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::Dimension("empty channel vector".into()));
        }
        if !(snr > 0.0 && snr.is_finite()) {
            return Err(Error::Invalid(format!("SNR must be positive and finite, got {snr}")));
        }
        let l = h.len();
        let hh: f64 = h.iter().map(|x| x.norm_sqr()).sum();
        let c = snr * snr / (snr * hh + 1.0);
        let m_matrix: Vec<Vec<Complex64>> = (0..l)
            .map(|i| {
                (0..l).map(|j| Complex64::new(if i == j { snr } else { 0.0 }, 0.0) - c * h[i].conj() * h[j]).collect()
            })
            .collect();
        let chol_factor = cholesky(&m_matrix)?;
        Ok(Self { h: h.to_vec(), snr, m_matrix, chol_factor })
    }

    pub fn from_db(h: &[Complex64], snr_db: f64) -> Result<Self> {
        Self::new(h, 10f64.powf(snr_db / 10.0))
    }

    pub fn num_tx(&self) -> usize {
        self.h.len()
    }

    /// a·chol
    pub fn weighted(&self, a: &[GaussInt]) -> Vec<Complex64> {
        let l = self.num_tx();
        (0..l).map(|k| (k..l).map(|i| a[i].to_complex() * self.chol_factor[i][k]).sum()).collect()
    }

    /// ‖a·chol‖² = a·M·aᴴ
    pub fn norm_sq(&self, a: &[GaussInt]) -> f64 {
        self.weighted(a).iter().map(|v| v.norm_sqr()).sum()
    }

    /// a·M·aᴴ evaluated from M directly.
    pub fn quadratic_form(&self, a: &[GaussInt]) -> f64 {
        let l = self.num_tx();
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..l {
            for j in 0..l {
                s += a[i].to_complex() * self.m_matrix[i][j] * a[j].to_complex().conj();
            }
        }
        s.re
    }

    fn candidate(&self, a: Vec<GaussInt>) -> Candidate {
        let norm_sq = self.norm_sq(&a);
        Candidate { rate: (self.snr / norm_sq).log2(), a, norm_sq }
    }

    /// Every nonzero a with ‖a·chol‖² ≤ radius_sq, one per unit class, sorted by
    /// (length, a).
    pub fn enumerate(&self, reduced: &Reduced, radius_sq: f64) -> Vec<Candidate> {
        let l = self.num_tx();
        let n = 2 * l;
        // real generator: rows Re/Im of b_i and i·b_i
        let realify = |v: &[Complex64]| -> Vec<f64> { v.iter().flat_map(|z| [z.re, z.im]).collect() };
        let mut g: Vec<Vec<f64>> = Vec::with_capacity(n);
        for b in &reduced.basis {
            g.push(realify(b));
            let ib: Vec<Complex64> = b.iter().map(|z| z * Complex64::i()).collect();
            g.push(realify(&ib));
        }
        let gram: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| g[i].iter().zip(&g[j]).map(|(x, y)| x * y).sum()).collect()).collect();
        // A = Rᵀ R, R upper triangular
        let mut r = vec![vec![0.0; n]; n];
        for i in 0..n {
            let d = gram[i][i] - (0..i).map(|k| r[k][i] * r[k][i]).sum::<f64>();
            r[i][i] = d.max(0.0).sqrt();
            for j in i + 1..n {
                r[i][j] = (gram[i][j] - (0..i).map(|k| r[k][i] * r[k][j]).sum::<f64>()) / r[i][i];
            }
        }
        let bound = radius_sq * (1.0 + 1e-9) + 1e-12;
        let mut z = vec![0i64; n];
        let mut found: BTreeSet<Vec<GaussInt>> = BTreeSet::new();
        search(&r, n, bound, 0.0, &mut z, &mut |z| {
            let coeffs: Vec<GaussInt> = (0..l).map(|i| GaussInt::new(z[2 * i], z[2 * i + 1])).collect();
            let a: Vec<GaussInt> = (0..l)
                .map(|c| coeffs.iter().zip(&reduced.t).fold(GaussInt::default(), |acc, (&x, row)| acc + x * row[c]))
                .collect();
            found.insert(canonical_vector(&a));
        });
        let mut out: Vec<Candidate> = found.into_iter().map(|a| self.candidate(a)).collect();
        out.retain(|c| c.norm_sq <= bound);
        out.sort_by(|x, y| x.norm_sq.total_cmp(&y.norm_sq).then_with(|| x.a.cmp(&y.a)));
        out
    }

    fn reduced(&self) -> Result<Reduced> {
        lll_reduce(&self.chol_factor)
    }

    /// Shortest admissible coefficient vector.
    pub fn best_single_coefficient(&self, constraint: Constraint) -> Result<Candidate> {
        let (Constraint::NonzeroModPi(pi) | Constraint::AllNonzero(pi)) = constraint;
        if pi.is_unit() || pi.is_zero() {
            return Err(Error::Invalid(format!("no vector is nonzero modulo {pi}")));
        }
        let reduced = self.reduced()?;
        let mut radius_sq = reduced.basis.iter().map(|b| norm(b)).fold(f64::INFINITY, f64::min);
        for _ in 0..64 {
            if let Some(c) = self.enumerate(&reduced, radius_sq).into_iter().find(|c| constraint.admits(&c.a)) {
                return Ok(c);
            }
            radius_sq *= 1.5 * 1.5;
        }
        Err(Error::Budget("no admissible coefficient vector found".into()))
    }

    /// m shortest vectors, greedily chosen to be linearly independent modulo a
    /// prime π.
    pub fn dominant_solution(&self, m: usize, pi: GaussInt) -> Result<Vec<Candidate>> {
        let l = self.num_tx();
        if m == 0 || m > l {
            return Err(Error::Dimension(format!("{m} combinations from {l} transmitters")));
        }
        if !pi.is_prime()? {
            return Err(Error::NotPrime(pi.to_string()));
        }
        let reduced = self.reduced()?;
        let mut lengths: Vec<f64> = reduced.basis.iter().map(|b| norm(b)).collect();
        lengths.sort_by(f64::total_cmp);
        let mut radius_sq = lengths[m - 1];
        for _ in 0..64 {
            let list = self.enumerate(&reduced, radius_sq);
            let chosen = greedy_independent(&list, m, pi);
            if chosen.len() == m {
                return Ok(chosen);
            }
            radius_sq *= 1.5 * 1.5;
        }
        Err(Error::Budget("too few independent vectors in the enumeration sphere".into()))
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn search(r: &[Vec<f64>], level: usize, bound: f64, partial: f64, z: &mut Vec<i64>, emit: &mut dyn FnMut(&[i64])) {
    if level == 0 {
        if z.iter().any(|&x| x != 0) {
            emit(z);
        }
        return;
    }
    let i = level - 1;
    let n = r.len();
    let center = -(i + 1..n).map(|j| r[i][j] * z[j] as f64).sum::<f64>() / r[i][i];
    let rem = bound - partial;
    if rem < 0.0 {
        return;
    }
    let half = rem.sqrt() / r[i][i];
    let lo = (center - half).ceil() as i64;
    let hi = (center + half).floor() as i64;
    for v in lo..=hi {
        let d = r[i][i] * (v as f64 - center);
        let p = partial + d * d;
        if p <= bound {
            z[i] = v;
            search(r, i, bound, p, z, emit);
        }
    }
    z[i] = 0;
}

/// The unit multiple of `a` whose first nonzero entry is a canonical associate.
pub fn canonical_vector(a: &[GaussInt]) -> Vec<GaussInt> {
    match a.iter().find(|x| !x.is_zero()) {
        Some(x) => {
            let u = x.canonical_unit();
            a.iter().map(|&y| u * y).collect()
        }
        None => a.to_vec(),
    }
}

/// Incremental independence test over the field Z[i]/⟨π⟩.
#[derive(Debug, Clone)]
pub struct IndependenceTracker {
    pi: GaussInt,
    rows: Vec<(usize, Vec<Residue<GaussInt>>)>,
}

impl IndependenceTracker {
    pub fn new(pi: GaussInt) -> Self {
        Self { pi, rows: Vec::new() }
    }

    fn reduce(&self, a: &[GaussInt]) -> Vec<Residue<GaussInt>> {
        let mut v: Vec<Residue<GaussInt>> = a.iter().map(|&x| Residue::new(x, self.pi)).collect();
        for (p, row) in &self.rows {
            let f = v[*p];
            if !f.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = *x - f * *y;
                }
            }
        }
        v
    }

    pub fn is_independent(&self, a: &[GaussInt]) -> bool {
        self.reduce(a).iter().any(|x| !x.is_zero())
    }

    /// Adds `a` if it is independent of the vectors seen so far.
    pub fn insert(&mut self, a: &[GaussInt]) -> bool {
        let v = self.reduce(a);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inverse().expect("nonzero element of a field");
        let row: Vec<Residue<GaussInt>> = v.iter().map(|&x| x * inv).collect();
        for (_, other) in self.rows.iter_mut() {
            let f = other[p];
            if !f.is_zero() {
                for (x, y) in other.iter_mut().zip(&row) {
                    *x = *x - f * *y;
                }
            }
        }
        self.rows.push((p, row));
        true
    }
}

/// The greedy scan: walk the sorted list and keep each vector independent of
/// those already kept, until m are found.
pub fn greedy_independent(list: &[Candidate], m: usize, pi: GaussInt) -> Vec<Candidate> {
    let mut tracker = IndependenceTracker::new(pi);
    let mut out = Vec::with_capacity(m);
    for c in list {
        if out.len() == m {
            break;
        }
        if tracker.insert(&c.a) {
            out.push(c.clone());
        }
    }
    out
}

/// R = log2(SNR / a·M·aᴴ), possibly negative.
pub fn computation_rate(ctx: &GramContext, a: &[GaussInt]) -> Result<f64> {
    if a.len() != ctx.num_tx() {
        return Err(Error::Dimension(format!("{} coefficients for {} transmitters", a.len(), ctx.num_tx())));
    }
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::Zero("coefficient vector"));
    }
    Ok((ctx.snr / ctx.quadratic_form(a)).log2())
}

/// log2(SNR / (|α|² + SNR·‖αh − a‖²)) for a given scaling α.
pub fn rate_with_alpha(h: &[Complex64], a: &[GaussInt], snr: f64, alpha: Complex64) -> f64 {
    let dist: f64 = h.iter().zip(a).map(|(hl, al)| (alpha * hl - al.to_complex()).norm_sqr()).sum();
    (snr / (alpha.norm_sqr() + snr * dist)).log2()
}
