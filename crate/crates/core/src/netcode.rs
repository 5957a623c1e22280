//! Non-coherent network coding over a module W = T/⟨π_k⟩ × … × T/⟨π_1⟩ with
//! packet headers, and payload recovery by a generalized Gauss–Jordan
//! elimination.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rings::{ext_gcd, EuclideanRing, Residue};

/// A packet: `header_len` header components followed by payload components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModulePacket<R: EuclideanRing> {
    pub components: Vec<Residue<R>>,
    pub header_len: usize,
}

impl<R: EuclideanRing> ModulePacket<R> {
    pub fn new(components: Vec<Residue<R>>, header_len: usize) -> Result<Self> {
        if header_len > components.len() {
            return Err(Error::Dimension(format!("header of {header_len} in a packet of {}", components.len())));
        }
        Ok(Self { components, header_len })
    }

    /// Source packet `i` (0-based) of `m`: header e_i, then `payload`.
    pub fn source(i: usize, m: usize, moduli: &[R], payload: &[R]) -> Result<Self> {
        if i >= m || moduli.len() != m + payload.len() {
            return Err(Error::Dimension(format!(
                "{} moduli for a header of {m} and a payload of {}",
                moduli.len(),
                payload.len()
            )));
        }
        let components = moduli
            .iter()
            .enumerate()
            .map(|(j, &pi)| {
                let x = if j < m {
                    if j == i {
                        R::one()
                    } else {
                        R::zero()
                    }
                } else {
                    payload[j - m]
                };
                Residue::new(x, pi)
            })
            .collect();
        Ok(Self { components, header_len: m })
    }

    pub fn moduli(&self) -> Vec<R> {
        self.components.iter().map(|c| c.modulus()).collect()
    }

    pub fn header(&self) -> &[Residue<R>] {
        &self.components[..self.header_len]
    }

    pub fn payload(&self) -> &[Residue<R>] {
        &self.components[self.header_len..]
    }

    fn shape_matches(&self, other: &Self) -> bool {
        self.header_len == other.header_len && self.moduli() == other.moduli()
    }

    fn scaled(&self, c: R) -> Self {
        Self { components: self.components.iter().map(|x| x.scale(c)).collect(), header_len: self.header_len }
    }

    fn plus(&self, other: &Self) -> Self {
        Self {
            components: self.components.iter().zip(&other.components).map(|(&x, &y)| x + y).collect(),
            header_len: self.header_len,
        }
    }
}

/// Σ c_i·p_i, componentwise in each quotient.
pub fn combine<R: EuclideanRing>(packets: &[ModulePacket<R>], coeffs: &[R]) -> Result<ModulePacket<R>> {
    let first = packets.first().ok_or_else(|| Error::Dimension("no packets to combine".into()))?;
    if packets.len() != coeffs.len() {
        return Err(Error::Dimension(format!("{} coefficients for {} packets", coeffs.len(), packets.len())));
    }
    if packets.iter().any(|p| !p.shape_matches(first)) {
        return Err(Error::Dimension("packets of different shapes".into()));
    }
    let zero = ModulePacket {
        components: first.moduli().into_iter().map(Residue::zero).collect(),
        header_len: first.header_len,
    };
    Ok(packets.iter().zip(coeffs).fold(zero, |acc, (p, &c)| acc.plus(&p.scaled(c))))
}

/// (s, t, u, v, g) with [[s, t], [u, v]]·(a, b)ᵀ = (g, 0)ᵀ, g = gcd(a, b) and
/// sv − tu = 1.
pub fn row_echelon_2x1<R: EuclideanRing>(a: R, b: R) -> Result<(R, R, R, R, R)> {
    let (g, s, t) = ext_gcd(a, b)?;
    let u = -R::exact_div(b, g).ok_or(Error::Overflow)?;
    let v = R::exact_div(a, g).ok_or(Error::Overflow)?;
    Ok((s, t, u, v, g))
}

/// A row operation applied during recovery.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RowOp<R: EuclideanRing + Serialize> {
    /// (row_i, row_j) ← [[s, t], [u, v]]·(row_i, row_j)
    Pair { rows: (usize, usize), matrix: [R; 4] },
    /// row ← c·row, with c a unit modulo the pivot column's modulus
    Normalize { row: usize, c: R, modulus: R },
    /// dst ← dst − c·src
    Eliminate { dst: usize, src: usize, c: R },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Recovery<R: EuclideanRing + Serialize> {
    /// The m payloads in source order and the operations that produced them.
    Recovered { payloads: Vec<Vec<Residue<R>>>, ops: Vec<RowOp<R>> },
    /// The header matrix could not be reduced to the identity.
    Failed { column: usize, reason: String },
}

impl<R: EuclideanRing + Serialize> Recovery<R> {
    pub fn payloads(&self) -> Option<&[Vec<Residue<R>>]> {
        match self {
            Recovery::Recovered { payloads, .. } => Some(payloads),
            Recovery::Failed { .. } => None,
        }
    }
}

/// Reduces the header matrix of the received packets to the identity and
/// returns the source payloads.
pub fn recover<R: EuclideanRing + Serialize>(received: &[ModulePacket<R>], m: usize) -> Result<Recovery<R>> {
    let first = received.first().ok_or_else(|| Error::Dimension("no packets received".into()))?;
    if received.iter().any(|p| !p.shape_matches(first)) {
        return Err(Error::Dimension("packets of different shapes".into()));
    }
    if first.header_len != m {
        return Err(Error::Dimension(format!("header of length {} for {m} sources", first.header_len)));
    }
    if received.len() < m {
        return Ok(Recovery::Failed { column: received.len(), reason: format!("only {} packets", received.len()) });
    }
    let mut y = received.to_vec();
    let mut ops = Vec::new();
    for j in 0..m {
        for i in j + 1..y.len() {
            let a = y[j].components[j].value();
            let b = y[i].components[j].value();
            if b.is_zero() {
                continue;
            }
            let (s, t, u, v, _) = row_echelon_2x1(a, b)?;
            let new_j = y[j].scaled(s).plus(&y[i].scaled(t));
            let new_i = y[j].scaled(u).plus(&y[i].scaled(v));
            y[j] = new_j;
            y[i] = new_i;
            ops.push(RowOp::Pair { rows: (j, i), matrix: [s, t, u, v] });
        }
        let pivot = y[j].components[j];
        let Some(inv) = pivot.inverse() else {
            let reason = if pivot.is_zero() { "zero pivot" } else { "pivot is a zero divisor" };
            return Ok(Recovery::Failed { column: j, reason: reason.to_string() });
        };
        if inv.value() != R::one() {
            y[j] = y[j].scaled(inv.value());
            ops.push(RowOp::Normalize { row: j, c: inv.value(), modulus: pivot.modulus() });
        }
    }
    for j in (0..m).rev() {
        for i in 0..j {
            let c = y[i].components[j].value();
            if !c.is_zero() {
                y[i] = y[i].plus(&y[j].scaled(-c));
                ops.push(RowOp::Eliminate { dst: i, src: j, c });
            }
        }
    }
    for (i, row) in y.iter().take(m).enumerate() {
        for (j, x) in row.header().iter().enumerate() {
            let expected = if i == j { R::one() } else { R::zero() };
            if *x != Residue::new(expected, x.modulus()) {
                return Ok(Recovery::Failed { column: j, reason: "header did not reduce to the identity".into() });
            }
        }
    }
    Ok(Recovery::Recovered { payloads: y.iter().take(m).map(|p| p.payload().to_vec()).collect(), ops })
}
