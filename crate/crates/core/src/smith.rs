//! Dense matrices over a Euclidean ring, Smith normal form and exact
//! unimodular inversion.

use std::fmt;

use crate::error::{Error, Result};
use crate::rings::{ext_gcd, EuclideanRing};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix<R: EuclideanRing> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: EuclideanRing> fmt::Debug for RingMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[R]> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_struct("RingMatrix").field("rows", &self.rows).field("cols", &self.cols).field("data", &rows).finish()
    }
}

fn ovf<T>(v: Option<T>) -> Result<T> {
    v.ok_or(Error::Overflow)
}

impl<R: EuclideanRing> RingMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn diagonal(d: &[R]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<R>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<R>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let p = ovf(a.checked_mul(b))?;
                    out[(i, j)] = ovf(out[(i, j)].checked_add(p))?;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[R]) -> Result<Vec<R>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} times {}x{}", v.len(), self.rows, self.cols)));
        }
        let mut out = vec![R::zero(); self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self[(i, j)];
                if !b.is_zero() {
                    *o = ovf(o.checked_add(ovf(a.checked_mul(b))?))?;
                }
            }
        }
        Ok(out)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += c · row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: R) -> Result<()> {
        for j in 0..self.cols {
            let s = self[(src, j)];
            if !s.is_zero() {
                self[(dst, j)] = ovf(self[(dst, j)].checked_add(ovf(c.checked_mul(s))?))?;
            }
        }
        Ok(())
    }

    /// `col[dst] += c · col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: R) -> Result<()> {
        for i in 0..self.rows {
            let s = self[(i, src)];
            if !s.is_zero() {
                self[(i, dst)] = ovf(self[(i, dst)].checked_add(ovf(c.checked_mul(s))?))?;
            }
        }
        Ok(())
    }

    pub fn scale_row(&mut self, i: usize, c: R) -> Result<()> {
        for j in 0..self.cols {
            self[(i, j)] = ovf(self[(i, j)].checked_mul(c))?;
        }
        Ok(())
    }

    pub fn scale_col(&mut self, j: usize, c: R) -> Result<()> {
        for i in 0..self.rows {
            self[(i, j)] = ovf(self[(i, j)].checked_mul(c))?;
        }
        Ok(())
    }

    /// Determinant by Euclidean elimination (no division outside the ring).
    pub fn determinant(&self) -> Result<R> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = R::one();
        for c in 0..n {
            loop {
                let pivot = (c..n).filter(|&i| !a[(i, c)].is_zero()).min_by_key(|&i| (a[(i, c)].norm(), i));
                let Some(p) = pivot else { return Ok(R::zero()) };
                if p != c {
                    a.swap_rows(p, c);
                    sign = -sign;
                }
                let mut done = true;
                for i in c + 1..n {
                    if a[(i, c)].is_zero() {
                        continue;
                    }
                    let q = ovf(a[(i, c)].div_round(a[(c, c)]))?;
                    a.add_row_multiple(i, c, -q)?;
                    if !a[(i, c)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
        }
        let mut d = sign;
        for i in 0..n {
            d = ovf(d.checked_mul(a[(i, i)]))?;
        }
        Ok(d)
    }
}

impl<R: EuclideanRing> std::ops::Index<(usize, usize)> for RingMatrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R: EuclideanRing> std::ops::IndexMut<(usize, usize)> for RingMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

/// `P · A · Q = diag(d)` with `P`, `Q` unimodular and `d_1 | d_2 | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult<R: EuclideanRing> {
    pub d: Vec<R>,
    pub p: RingMatrix<R>,
    pub q: RingMatrix<R>,
}

impl<R: EuclideanRing> SnfResult<R> {
    /// The diagonal matrix with the shape of the input.
    pub fn d_matrix(&self) -> RingMatrix<R> {
        let mut m = RingMatrix::zeros(self.p.rows(), self.q.cols());
        for (i, &x) in self.d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }
}

/// Left-multiplies rows `i` and `k` of `m` by [[s, t], [u, v]].
fn mix_rows<R: EuclideanRing>(m: &mut RingMatrix<R>, i: usize, k: usize, c: [R; 4]) -> Result<()> {
    let [s, t, u, v] = c;
    for j in 0..m.cols {
        let (x, y) = (m[(i, j)], m[(k, j)]);
        let lin = |a: R, b: R| -> Result<R> { ovf(ovf(a.checked_mul(x))?.checked_add(ovf(b.checked_mul(y))?)) };
        m[(i, j)] = lin(s, t)?;
        m[(k, j)] = lin(u, v)?;
    }
    Ok(())
}

/// Row echelon form with each pivot canonical and the entries above it
/// reduced; row operations are mirrored in `p`.
fn row_hermite<R: EuclideanRing>(a: &mut RingMatrix<R>, p: &mut RingMatrix<R>) -> Result<()> {
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        loop {
            let mut pivot: Option<(u128, usize)> = None;
            for i in r..a.rows {
                let x = a[(i, c)];
                if !x.is_zero() && pivot.is_none_or(|b| (x.norm(), i) < b) {
                    pivot = Some((x.norm(), i));
                }
            }
            let Some((_, pi)) = pivot else { break };
            a.swap_rows(r, pi);
            p.swap_rows(r, pi);
            let d = a[(r, c)];
            let mut clean = true;
            for i in r + 1..a.rows {
                let y = a[(i, c)];
                if y.is_zero() {
                    continue;
                }
                let q = ovf(y.div_round(d))?;
                a.add_row_multiple(i, r, -q)?;
                p.add_row_multiple(i, r, -q)?;
                clean &= a[(i, c)].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        let w = a[(r, c)].canonical_unit();
        if w != R::one() {
            a.scale_row(r, w)?;
            p.scale_row(r, w)?;
        }
        let d = a[(r, c)];
        for k in 0..r {
            let q = ovf(a[(k, c)].div_round(d))?;
            if !q.is_zero() {
                a.add_row_multiple(k, r, -q)?;
                p.add_row_multiple(k, r, -q)?;
            }
        }
        r += 1;
    }
    Ok(())
}

fn is_diagonal<R: EuclideanRing>(a: &RingMatrix<R>) -> bool {
    (0..a.rows).all(|i| (0..a.cols).all(|j| i == j || a[(i, j)].is_zero()))
}

const MAX_ROUNDS: usize = 10_000;

/// Smith normal form by alternating row and column Hermite reductions until the
/// matrix is diagonal, followed by the 2×2 gcd/lcm exchange on the diagonal.
pub fn smith_normal_form<R: EuclideanRing>(a: &RingMatrix<R>) -> Result<SnfResult<R>> {
    let (m, n) = (a.rows(), a.cols());
    let mut a = a.clone();
    let mut p = RingMatrix::identity(m);
    let mut q = RingMatrix::identity(n);
    let r = m.min(n);

    let mut rounds = 0;
    while !is_diagonal(&a) {
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(Error::Budget("Smith normal form did not converge".into()));
        }
        row_hermite(&mut a, &mut p)?;
        if is_diagonal(&a) {
            break;
        }
        let mut at = a.transpose();
        let mut qt = q.transpose();
        row_hermite(&mut at, &mut qt)?;
        a = at.transpose();
        q = qt.transpose();
    }

    for i in 0..r {
        for j in i + 1..r {
            let (x, y) = (a[(i, i)], a[(j, j)]);
            if x.divides(y) {
                continue;
            }
            if x.is_zero() {
                a.swap_rows(i, j);
                p.swap_rows(i, j);
                a.swap_cols(i, j);
                q.swap_cols(i, j);
                continue;
            }
            // [[s, t], [−y/g, x/g]]·diag(x, y)·[[1, −t·y/g], [1, s·x/g]] = diag(g, x·y/g)
            let (g, s, t) = ext_gcd(x, y)?;
            let yg = ovf(R::exact_div(y, g))?;
            let xg = ovf(R::exact_div(x, g))?;
            mix_rows(&mut a, i, j, [s, t, -yg, xg])?;
            mix_rows(&mut p, i, j, [s, t, -yg, xg])?;
            let c = [R::one(), R::one(), -ovf(t.checked_mul(yg))?, ovf(s.checked_mul(xg))?];
            let mut at = a.transpose();
            let mut qt = q.transpose();
            mix_rows(&mut at, i, j, c)?;
            mix_rows(&mut qt, i, j, c)?;
            a = at.transpose();
            q = qt.transpose();
        }
    }
    for i in 0..r {
        let u = a[(i, i)].canonical_unit();
        if u != R::one() {
            a.scale_row(i, u)?;
            p.scale_row(i, u)?;
        }
    }

    let d: Vec<R> = (0..r).map(|i| a[(i, i)]).collect();
    shrink_transforms(&d, &mut p, &mut q)?;
    Ok(SnfResult { d, p, q })
}

fn col_norm<R: EuclideanRing>(m: &RingMatrix<R>, j: usize) -> f64 {
    (0..m.rows).map(|i| m[(i, j)].norm() as f64).sum()
}

fn row_norm<R: EuclideanRing>(m: &RingMatrix<R>, i: usize) -> f64 {
    (0..m.cols).map(|j| m[(i, j)].norm() as f64).sum()
}

/// ⟨x, y⟩ / ⟨y, y⟩ rounded into the ring, from floating-point inner products.
fn projection<R: EuclideanRing>(x: &[R], y: &[R]) -> Option<R> {
    let (mut num, mut den) = (num_complex::Complex64::new(0.0, 0.0), 0.0);
    for (a, b) in x.iter().zip(y) {
        let (a, b) = (a.to_complex(), b.to_complex());
        num += a * b.conj();
        den += b.norm_sqr();
    }
    if den == 0.0 {
        return None;
    }
    R::nearest(num / den)
}

/// Shrinks `P` and `Q` without changing `P·A·Q = D`.
///
/// Column j of Q may absorb c·(column k) whenever d_j | d_k, provided row k of
/// P gives up c·(d_k/d_j)·(row j); dually for rows of P. Moves are applied
/// greedily while they lower the combined squared norm of the touched vectors.
fn shrink_transforms<R: EuclideanRing>(d: &[R], p: &mut RingMatrix<R>, q: &mut RingMatrix<R>) -> Result<()> {
    let dk = |k: usize| d.get(k).copied().unwrap_or_else(R::zero);
    let n = q.cols;
    let m = p.rows;
    for _ in 0..64 {
        let mut changed = false;
        for j in 0..n {
            for k in 0..n {
                if j == k || !dk(j).divides(dk(k)) || (dk(j).is_zero() && !dk(k).is_zero()) {
                    continue;
                }
                let Some(c) = projection(&q.column(j), &q.column(k)).map(|c| -c) else {
                    continue;
                };
                if c.is_zero() {
                    continue;
                }
                let ratio = if dk(k).is_zero() { R::zero() } else { ovf(R::exact_div(dk(k), dk(j)))? };
                let touch_p = k < m && !ratio.is_zero();
                let before = col_norm(q, j) + if touch_p { row_norm(p, k) } else { 0.0 };
                let (mut q2, mut p2) = (q.clone(), p.clone());
                if q2.add_col_multiple(j, k, c).is_err() {
                    continue;
                }
                if touch_p && p2.add_row_multiple(k, j, -ovf(c.checked_mul(ratio))?).is_err() {
                    continue;
                }
                let after = col_norm(&q2, j) + if touch_p { row_norm(&p2, k) } else { 0.0 };
                if after < before {
                    *q = q2;
                    *p = p2;
                    changed = true;
                }
            }
        }
        for j in 0..m {
            for k in 0..m {
                if j == k || !dk(j).divides(dk(k)) || (dk(j).is_zero() && !dk(k).is_zero()) {
                    continue;
                }
                let Some(c) = projection(p.row(j), p.row(k)).map(|c| -c) else {
                    continue;
                };
                if c.is_zero() {
                    continue;
                }
                let ratio = if dk(k).is_zero() { R::zero() } else { ovf(R::exact_div(dk(k), dk(j)))? };
                let touch_q = k < n && !ratio.is_zero();
                let before = row_norm(p, j) + if touch_q { col_norm(q, k) } else { 0.0 };
                let (mut q2, mut p2) = (q.clone(), p.clone());
                if p2.add_row_multiple(j, k, c).is_err() {
                    continue;
                }
                if touch_q && q2.add_col_multiple(k, j, -ovf(c.checked_mul(ratio))?).is_err() {
                    continue;
                }
                let after = row_norm(&p2, j) + if touch_q { col_norm(&q2, k) } else { 0.0 };
                if after < before {
                    *q = q2;
                    *p = p2;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(())
}

/// Non-unit invariant factors of a nonsingular square matrix, in divisibility order.
pub fn invariant_factors_of_quotient<R: EuclideanRing>(j: &RingMatrix<R>) -> Result<Vec<R>> {
    if !j.is_square() {
        return Err(Error::Dimension("transition matrix must be square".into()));
    }
    let snf = smith_normal_form(j)?;
    if snf.d.iter().any(|x| x.is_zero()) {
        return Err(Error::Singular);
    }
    Ok(snf.d.into_iter().filter(|x| !x.is_unit()).collect())
}

/// Exact inverse of a matrix whose determinant is a unit.
pub fn matrix_inverse_unimodular<R: EuclideanRing>(u: &RingMatrix<R>) -> Result<RingMatrix<R>> {
    if !u.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = u.rows();
    let mut a = u.clone();
    let mut inv = RingMatrix::identity(n);
    for c in 0..n {
        loop {
            let pivot = (c..n).filter(|&i| !a[(i, c)].is_zero()).min_by_key(|&i| (a[(i, c)].norm(), i));
            let Some(p) = pivot else {
                return Err(Error::NotUnimodular);
            };
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let mut done = true;
            for i in c + 1..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = ovf(a[(i, c)].div_round(a[(c, c)]))?;
                a.add_row_multiple(i, c, -q)?;
                inv.add_row_multiple(i, c, -q)?;
                done &= a[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        let Some(w) = a[(c, c)].unit_inverse() else {
            return Err(Error::NotUnimodular);
        };
        a.scale_row(c, w)?;
        inv.scale_row(c, w)?;
    }
    for c in (0..n).rev() {
        for i in 0..c {
            let x = a[(i, c)];
            if !x.is_zero() {
                a.add_row_multiple(i, c, -x)?;
                inv.add_row_multiple(i, c, -x)?;
            }
        }
    }
    Ok(inv)
}
