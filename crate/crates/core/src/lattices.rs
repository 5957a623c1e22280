//! Nested lattice quotients Λ/Λ', their linear labelings φ and embeddings φ̃.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rings::{round_to_ring, EuclideanRing, GaussInt, Residue};
use crate::smith::{matrix_inverse_unimodular, smith_normal_form, RingMatrix};

/// An element of W = T/⟨π_1⟩ × … × T/⟨π_k⟩.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message<R: EuclideanRing> {
    pub components: Vec<Residue<R>>,
}

impl<R: EuclideanRing> Message<R> {
    pub fn zero(pis: &[R]) -> Self {
        Self { components: pis.iter().map(|&p| Residue::zero(p)).collect() }
    }

    pub fn from_values(values: &[R], pis: &[R]) -> Result<Self> {
        if values.len() != pis.len() {
            return Err(Error::Dimension(format!("{} values for {} moduli", values.len(), pis.len())));
        }
        Ok(Self { components: values.iter().zip(pis).map(|(&v, &p)| Residue::new(v, p)).collect() })
    }

    pub fn values(&self) -> Vec<R> {
        self.components.iter().map(Residue::value).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Residue::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { components: self.components.iter().zip(&other.components).map(|(&a, &b)| a + b).collect() }
    }

    pub fn scale(&self, c: R) -> Self {
        Self { components: self.components.iter().map(|r| r.scale(c)).collect() }
    }

    /// Σ a_ℓ w_ℓ
    pub fn combine(coeffs: &[R], msgs: &[Self]) -> Self {
        let pis: Vec<R> = msgs[0].components.iter().map(Residue::modulus).collect();
        coeffs.iter().zip(msgs).fold(Self::zero(&pis), |acc, (&a, m)| acc.add(&m.scale(a)))
    }
}

/// Exact solver for `r · G = λ` through a Euclidean triangularisation
/// `U · Gᵀ = H` with `H` upper triangular.
#[derive(Debug, Clone)]
pub struct Coordinatizer<R: EuclideanRing> {
    ut: RingMatrix<R>,
    h: RingMatrix<R>,
}

impl<R: EuclideanRing> Coordinatizer<R> {
    pub fn new(g: &RingMatrix<R>) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::Dimension("generator matrix must be square".into()));
        }
        let n = g.rows();
        let mut h = g.transpose();
        let mut u = RingMatrix::identity(n);
        for c in 0..n {
            loop {
                let pivot = (c..n).filter(|&i| !h[(i, c)].is_zero()).min_by_key(|&i| (h[(i, c)].norm(), i));
                let Some(p) = pivot else {
                    return Err(Error::Singular);
                };
                h.swap_rows(p, c);
                u.swap_rows(p, c);
                let mut done = true;
                for i in c + 1..n {
                    if h[(i, c)].is_zero() {
                        continue;
                    }
                    let q = h[(i, c)].div_round(h[(c, c)]).ok_or(Error::Overflow)?;
                    h.add_row_multiple(i, c, -q)?;
                    u.add_row_multiple(i, c, -q)?;
                    done &= h[(i, c)].is_zero();
                }
                if done {
                    break;
                }
            }
        }
        Ok(Self { ut: u.transpose(), h })
    }

    /// Coordinates `r` with `r · G = λ`, or `None` if `λ` is not in the lattice.
    pub fn solve(&self, lambda: &[R]) -> Result<Option<Vec<R>>> {
        let n = self.h.rows();
        if lambda.len() != n {
            return Err(Error::Dimension(format!("point of length {} in dimension {n}", lambda.len())));
        }
        let mut rhs = self.ut.vec_mul(lambda)?;
        let mut r = vec![R::zero(); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for (j, &rj) in r.iter().enumerate().skip(i + 1) {
                let hij = self.h[(i, j)];
                if !hij.is_zero() && !rj.is_zero() {
                    acc = acc.checked_sub(hij.checked_mul(rj).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
                }
            }
            match R::exact_div(acc, self.h[(i, i)]) {
                Some(q) => r[i] = q,
                None => return Ok(None),
            }
            rhs[i] = acc;
        }
        Ok(Some(r))
    }

    /// log2 |det G|² (the complex-convention volume for Z[i]-lattices).
    pub fn log2_norm_det(&self) -> f64 {
        (0..self.h.rows()).map(|i| (self.h[(i, i)].norm() as f64).log2()).sum()
    }
}

/// Optional geometric placement `x ↦ γ · x · U` of exact lattice points.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub gamma: f64,
    pub unitary: Option<Vec<Vec<Complex64>>>,
}

impl Default for Geometry {
    fn default() -> Self {
        Self { gamma: 1.0, unitary: None }
    }
}

/// A nested pair Λ' ⊆ Λ given by `G_Λ` and the transition `J` with `G_Λ' = J · G_Λ`.
#[derive(Debug, Clone)]
pub struct LatticeQuotient<R: EuclideanRing> {
    pub g_fine: RingMatrix<R>,
    pub j: RingMatrix<R>,
    pub geometry: Geometry,
}

impl<R: EuclideanRing> LatticeQuotient<R> {
    pub fn new(g_fine: RingMatrix<R>, j: RingMatrix<R>) -> Result<Self> {
        if !g_fine.is_square() || !j.is_square() || g_fine.rows() != j.rows() {
            return Err(Error::Dimension("g_fine and j must be square of equal size".into()));
        }
        Ok(Self { g_fine, j, geometry: Geometry::default() })
    }

    pub fn with_geometry(mut self, geometry: Geometry) -> Result<Self> {
        if let Some(u) = &geometry.unitary {
            let n = self.dim();
            if u.len() != n || u.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension("unitary must be n x n".into()));
            }
        }
        self.geometry = geometry;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.g_fine.rows()
    }

    pub fn g_coarse(&self) -> Result<RingMatrix<R>> {
        self.j.mul(&self.g_fine)
    }

    /// The scalar β with Λ' = β·Tⁿ, if the coarse lattice has that shape.
    pub fn coarse_scale(&self) -> Result<Option<R>> {
        let gc = self.g_coarse()?;
        let mut beta = R::zero();
        for &x in gc.entries() {
            if !x.is_zero() {
                beta = if beta.is_zero() { x.canonical() } else { crate::rings::ext_gcd(beta, x)?.0 };
            }
        }
        if beta.is_zero() {
            return Ok(None);
        }
        let scaled: Vec<R> = gc.entries().iter().map(|&x| R::exact_div(x, beta).expect("gcd divides")).collect();
        let m = RingMatrix::from_vec(gc.rows(), gc.cols(), scaled)?;
        match m.determinant() {
            Ok(d) if d.is_unit() => Ok(Some(beta)),
            _ => Ok(None),
        }
    }
}

/// φ: Λ → W and its section φ̃ built from the Smith normal form of `J`.
#[derive(Debug, Clone)]
pub struct LinearLabeling<R: EuclideanRing> {
    n: usize,
    pis: Vec<R>,
    positions: Vec<usize>,
    q: RingMatrix<R>,
    q_inv: RingMatrix<R>,
    g_normal: RingMatrix<R>,
    embed_rows: Vec<Vec<(usize, R)>>,
    fast_columns: Option<Vec<usize>>,
    fine: Coordinatizer<R>,
    coarse: Coordinatizer<R>,
}

pub fn build_labeling<R: EuclideanRing>(q: &LatticeQuotient<R>) -> Result<LinearLabeling<R>> {
    let n = q.dim();
    let snf = smith_normal_form(&q.j)?;
    if snf.d.iter().any(|x| x.is_zero()) {
        return Err(Error::Singular);
    }
    let positions: Vec<usize> = (0..n).filter(|&i| !snf.d[i].is_unit()).collect();
    let pis: Vec<R> = positions.iter().map(|&i| snf.d[i]).collect();
    let q_inv = matrix_inverse_unimodular(&snf.q)?;
    let g_normal = q_inv.mul(&q.g_fine)?;
    let embed_rows = positions
        .iter()
        .map(|&p| g_normal.row(p).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, &x)| (j, x)).collect())
        .collect();
    let fine = Coordinatizer::new(&q.g_fine)?;
    let coarse = Coordinatizer::new(&q.g_coarse()?)?;
    let fast_columns = detect_fast_columns(&q.g_fine, &snf.q, &positions, &pis);
    Ok(LinearLabeling { n, pis, positions, q: snf.q, q_inv, g_normal, embed_rows, fast_columns, fine, coarse })
}

/// For each labeled component find an ambient column whose entries agree with
/// the corresponding column of `Q` modulo π, so that φ can read λ directly.
fn detect_fast_columns<R: EuclideanRing>(
    g: &RingMatrix<R>,
    q: &RingMatrix<R>,
    positions: &[usize],
    pis: &[R],
) -> Option<Vec<usize>> {
    let n = g.rows();
    let columns: Vec<Vec<R>> = (0..n).map(|c| g.column(c)).collect();
    let mut out = Vec::with_capacity(positions.len());
    for (&p, &pi) in positions.iter().zip(pis) {
        let target: Vec<Residue<R>> = (0..n).map(|r| Residue::new(q[(r, p)], pi)).collect();
        let r0 = target.iter().position(|x| !x.is_zero())?;
        let col = (0..n).find(|&c| {
            Residue::new(columns[c][r0], pi) == target[r0]
                && columns[c].iter().zip(&target).all(|(&x, t)| Residue::new(x, pi) == *t)
        })?;
        out.push(col);
    }
    Some(out)
}

impl<R: EuclideanRing> LinearLabeling<R> {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Invariant factors π_1 | π_2 | … | π_k.
    pub fn pis(&self) -> &[R] {
        &self.pis
    }

    /// The reversed order π_k, …, π_1 used for packet headers.
    pub fn pis_header_order(&self) -> Vec<R> {
        self.pis.iter().rev().copied().collect()
    }

    pub fn k(&self) -> usize {
        self.pis.len()
    }

    /// log2 |W|
    pub fn log2_size(&self) -> f64 {
        self.pis.iter().map(|p| (p.residue_count() as f64).log2()).sum()
    }

    /// |W| when it fits in 128 bits.
    pub fn size(&self) -> Option<u128> {
        self.pis.iter().try_fold(1u128, |acc, p| acc.checked_mul(p.residue_count()))
    }

    /// Message rate (1/n) log2 |W|.
    pub fn r_mes(&self) -> f64 {
        self.log2_size() / self.n as f64
    }

    pub fn log2_fine_volume(&self) -> f64 {
        self.fine.log2_norm_det()
    }

    /// Generator matrix rows aligned with the Smith form of `J`.
    pub fn g_normal(&self) -> &RingMatrix<R> {
        &self.g_normal
    }

    pub fn uses_fast_path(&self) -> bool {
        self.fast_columns.is_some()
    }

    /// φ(r · G_Λ) for coordinates `r`.
    pub fn label_coords(&self, r: &[R]) -> Result<Message<R>> {
        let c = self.q.vec_mul(r)?;
        Ok(Message {
            components: self.positions.iter().zip(&self.pis).map(|(&p, &pi)| Residue::new(c[p], pi)).collect(),
        })
    }

    /// Coordinates of a lattice point, or `None` if it lies outside Λ.
    pub fn coordinates(&self, lambda: &[R]) -> Result<Option<Vec<R>>> {
        self.fine.solve(lambda)
    }

    pub fn contains(&self, lambda: &[R]) -> Result<bool> {
        Ok(self.fine.solve(lambda)?.is_some())
    }

    pub fn in_coarse(&self, lambda: &[R]) -> Result<bool> {
        Ok(self.coarse.solve(lambda)?.is_some())
    }

    /// φ(λ) for a point given in ambient coordinates.
    pub fn label(&self, lambda: &[R]) -> Result<Message<R>> {
        if lambda.len() != self.n {
            return Err(Error::Dimension(format!("point of length {} in dimension {}", lambda.len(), self.n)));
        }
        if let Some(cols) = &self.fast_columns {
            return Ok(Message {
                components: cols.iter().zip(&self.pis).map(|(&c, &pi)| Residue::new(lambda[c], pi)).collect(),
            });
        }
        let r = self.fine.solve(lambda)?.ok_or_else(|| Error::Invalid("point is not in the fine lattice".into()))?;
        self.label_coords(&r)
    }

    /// φ̃(w) = (w_1, …, w_k at the invariant-factor positions, 0, …) · G_normal.
    pub fn embed(&self, w: &Message<R>) -> Result<Vec<R>> {
        if w.components.len() != self.k() {
            return Err(Error::Dimension(format!(
                "message with {} components, expected {}",
                w.components.len(),
                self.k()
            )));
        }
        let mut out = vec![R::zero(); self.n];
        for (row, comp) in self.embed_rows.iter().zip(&w.components) {
            let v = comp.value();
            if v.is_zero() {
                continue;
            }
            for &(j, x) in row {
                out[j] = out[j].checked_add(v.checked_mul(x).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            }
        }
        Ok(out)
    }

    /// Coordinates of φ̃(w) with respect to `G_Λ`.
    pub fn embed_coords(&self, w: &Message<R>) -> Result<Vec<R>> {
        let mut c = vec![R::zero(); self.n];
        for (&p, comp) in self.positions.iter().zip(&w.components) {
            c[p] = comp.value();
        }
        self.q_inv.vec_mul(&c)
    }
}

/// `x mod Λ'` for a coarse lattice of the form β·Z[i]ⁿ (in the quotient's geometry).
pub fn mod_coarse(q: &LatticeQuotient<GaussInt>, x: &[Complex64]) -> Result<Vec<Complex64>> {
    let beta = q.coarse_scale()?.ok_or_else(|| Error::Invalid("coarse lattice is not a scaled Z[i]^n".into()))?;
    if x.len() != q.dim() {
        return Err(Error::Dimension(format!("vector of length {} in dimension {}", x.len(), q.dim())));
    }
    let b = beta.to_complex() * q.geometry.gamma;
    let local = match &q.geometry.unitary {
        Some(u) => (0..x.len()).map(|j| (0..x.len()).map(|k| x[k] * u[j][k].conj()).sum()).collect(),
        None => x.to_vec(),
    };
    let reduced: Vec<Complex64> = local.iter().map(|&v| v - b * round_to_ring(v / b).to_complex()).collect();
    Ok(match &q.geometry.unitary {
        Some(u) => (0..x.len()).map(|j| (0..x.len()).map(|k| reduced[k] * u[k][j]).sum()).collect(),
        None => reduced,
    })
}

/// Brute-force minimum inter-coset distance and kissing number: the shortest
/// points of Λ∖Λ' among ambient points with every coordinate in `[-bound, bound]`.
/// Correct whenever `bound ≥ d(Λ/Λ')`.
pub fn min_intercoset_distance_bruteforce<R: EuclideanRing>(
    labeling: &LinearLabeling<R>,
    bound: i64,
) -> Result<(u128, u64)> {
    const BUDGET: f64 = 5e7;
    if labeling.k() == 0 {
        return Err(Error::Invalid("Λ = Λ'; no inter-coset points".into()));
    }
    let elems = R::box_elements(bound);
    let n = labeling.dim();
    if (elems.len() as f64).powi(n as i32) > BUDGET {
        return Err(Error::Budget(format!("{}^{n} points", elems.len())));
    }
    let limit = (bound as u128) * (bound as u128);
    let mut best: Option<(u128, u64)> = None;
    let mut point = vec![R::zero(); n];
    // odometer with partial-norm pruning
    fn rec<R: EuclideanRing>(
        depth: usize,
        acc: u128,
        elems: &[R],
        point: &mut Vec<R>,
        limit: u128,
        labeling: &LinearLabeling<R>,
        best: &mut Option<(u128, u64)>,
    ) -> Result<()> {
        if depth == point.len() {
            if acc == 0 || best.is_some_and(|(d, _)| acc > d) {
                return Ok(());
            }
            if labeling.contains(point)? && !labeling.label(point)?.is_zero() {
                *best = match *best {
                    Some((d, c)) if d == acc => Some((d, c + 1)),
                    _ => Some((acc, 1)),
                };
            }
            return Ok(());
        }
        for &e in elems {
            let a = acc + e.norm();
            if a > limit {
                continue;
            }
            point[depth] = e;
            rec(depth + 1, a, elems, point, limit, labeling, best)?;
        }
        point[depth] = R::zero();
        Ok(())
    }
    rec(0, 0, &elems, &mut point, limit, labeling, &mut best)?;
    best.ok_or_else(|| Error::Invalid(format!("no inter-coset point within radius {bound}")))
}

/// γ_c = d² / V(Λ)^{1/n}, with the volume given as log2 V.
pub fn nominal_coding_gain(d_sq: f64, log2_fine_volume: f64, n: usize) -> f64 {
    d_sq / (log2_fine_volume / n as f64).exp2()
}

pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    fn baseline(n: usize, pi: GaussInt) -> LatticeQuotient<GaussInt> {
        LatticeQuotient::new(RingMatrix::identity(n), RingMatrix::diagonal(&vec![pi; n])).unwrap()
    }

    #[test]
    fn z_i_mod_three() {
        let q = baseline(1, g(3, 0));
        let l = build_labeling(&q).unwrap();
        assert_eq!(l.pis(), &[g(3, 0)]);
        assert!(l.uses_fast_path());
        assert_eq!(l.label(&[g(4, 1)]).unwrap().values(), vec![g(1, 1)]);
        let w = Message::from_values(&[g(2, 0)], l.pis()).unwrap();
        assert_eq!(l.embed(&w).unwrap(), vec![g(-1, 0)]);
        assert_eq!(l.label(&l.embed(&w).unwrap()).unwrap(), w);
        assert_eq!(l.label(&[g(0, 0)]).unwrap(), Message::zero(l.pis()));
        assert_eq!(l.size(), Some(9));
    }

    #[test]
    fn hexagonal_over_z() {
        let q = LatticeQuotient::new(RingMatrix::<i64>::identity(2), RingMatrix::diagonal(&[3, 3])).unwrap();
        let l = build_labeling(&q).unwrap();
        assert_eq!(l.pis(), &[3, 3]);
        let m = l.label_coords(&[4, -5]).unwrap();
        assert_eq!(m.values(), vec![1, 1]);
        assert!(l.label_coords(&[3, -6]).unwrap().is_zero());
        assert_eq!(l.size(), Some(9));
        assert!((l.r_mes() - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn unimodular_transition_is_trivial() {
        let j = RingMatrix::from_rows(&[vec![0i64, 1], vec![1, 0]]).unwrap();
        let q = LatticeQuotient::new(RingMatrix::identity(2), j).unwrap();
        let l = build_labeling(&q).unwrap();
        assert_eq!(l.k(), 0);
        assert_eq!(l.size(), Some(1));
        assert!(min_intercoset_distance_bruteforce(&l, 2).is_err());
    }

    #[test]
    fn non_diagonal_transition() {
        // Λ = Z², Λ' generated by (2,1),(0,2): W ≅ Z/4
        let j = RingMatrix::from_rows(&[vec![2i64, 1], vec![0, 2]]).unwrap();
        let q = LatticeQuotient::new(RingMatrix::identity(2), j).unwrap();
        let l = build_labeling(&q).unwrap();
        assert_eq!(l.pis(), &[4]);
        for a in -4..4 {
            for b in -4..4 {
                let lab = l.label(&[a, b]).unwrap();
                assert_eq!(lab.is_zero(), l.in_coarse(&[a, b]).unwrap());
            }
        }
        for w in 0..4 {
            let m = Message::from_values(&[w], l.pis()).unwrap();
            assert_eq!(l.label(&l.embed(&m).unwrap()).unwrap(), m);
        }
    }

    #[test]
    fn baseline_distance() {
        let l = build_labeling(&baseline(1, g(3, 0))).unwrap();
        assert_eq!(min_intercoset_distance_bruteforce(&l, 2).unwrap(), (1, 4));
        for n in [2, 3] {
            let l = build_labeling(&baseline(n, g(3, 0))).unwrap();
            assert_eq!(min_intercoset_distance_bruteforce(&l, 1).unwrap(), (1, 4 * n as u64));
        }
    }

    #[test]
    fn baseline_gain_is_one() {
        for pi in [g(3, 0), g(1, 1), g(2, 1)] {
            let l = build_labeling(&baseline(4, pi)).unwrap();
            assert!((nominal_coding_gain(1.0, l.log2_fine_volume(), 4) - 1.0).abs() < 1e-12);
            assert!((l.r_mes() - (pi.norm() as f64).log2()).abs() < 1e-12);
        }
        assert!((nominal_coding_gain(4.0, 8.0, 2) - 4.0 * nominal_coding_gain(1.0, 8.0, 2)).abs() < 1e-12);
        assert!((nominal_coding_gain(4.0, 4.0, 2) - nominal_coding_gain(1.0, 0.0, 2)).abs() < 1e-12);
    }

    #[test]
    fn coarse_reduction() {
        let q = baseline(2, g(3, 0));
        let x = vec![Complex64::new(4.0, 1.0), Complex64::new(-1.2, 1.5)];
        let r = mod_coarse(&q, &x).unwrap();
        assert!((r[0] - Complex64::new(1.0, 1.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(-1.2, 1.5)).norm() < 1e-12);
        let shifted: Vec<Complex64> = x.iter().map(|v| v + Complex64::new(3.0, -6.0)).collect();
        assert_eq!(mod_coarse(&q, &shifted).unwrap(), r);
        assert_eq!(mod_coarse(&q, &r).unwrap(), r);
        let zero = mod_coarse(&q, &[Complex64::new(3.0, -3.0), Complex64::new(0.0, 6.0)]).unwrap();
        assert!(zero.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn rotated_coarse_reduction() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = vec![
            vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        ];
        let q = baseline(2, g(3, 0)).with_geometry(Geometry { gamma: 2.0, unitary: Some(u.clone()) }).unwrap();
        let x = vec![Complex64::new(0.3, 0.2), Complex64::new(-0.1, 0.4)];
        let lattice_pt: Vec<Complex64> =
            (0..2).map(|j| (0..2).map(|k| Complex64::new(6.0 * (k as f64 + 1.0), 0.0) * u[k][j]).sum()).collect();
        let y: Vec<Complex64> = x.iter().zip(&lattice_pt).map(|(a, b)| a + b).collect();
        let rx = mod_coarse(&q, &x).unwrap();
        let ry = mod_coarse(&q, &y).unwrap();
        for (a, b) in rx.iter().zip(&ry) {
            assert!((a - b).norm() < 1e-9);
        }
    }
}
