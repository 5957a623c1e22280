//! JSON inputs: matrices, lattice quotients, scheme definitions and packets.

use num_complex::Complex64;
use serde::Deserialize;

use crate::constructions::{lookup, Alphabet, ConvCode, LinearCode, NestedCodeChain, SchemeDef};
use crate::error::{Error, Result};
use crate::lattices::{Geometry, LatticeQuotient};
use crate::netcode::ModulePacket;
use crate::rings::{EuclideanRing, GaussInt, Residue};
use crate::smith::RingMatrix;

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad JSON: {e}")))
}

/// A ring element written as `n`, `[re]` or `[re, im]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Pair(Vec<i64>),
}

impl Entry {
    pub fn gauss(&self) -> Result<GaussInt> {
        match self {
            Entry::Int(x) => Ok(GaussInt::from(*x)),
            Entry::Pair(v) => match v.as_slice() {
                [re] => Ok(GaussInt::from(*re)),
                [re, im] => Ok(GaussInt::new(*re, *im)),
                _ => Err(Error::Invalid(format!("entry {v:?} is not [re] or [re, im]"))),
            },
        }
    }

    pub fn int(&self) -> Result<i64> {
        let g = self.gauss()?;
        if g.im != 0 {
            return Err(Error::Invalid(format!("{g} is not an integer")));
        }
        Ok(g.re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum RingName {
    Z,
    Zi,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub ring: RingName,
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyMatrix {
    Z(RingMatrix<i64>),
    Zi(RingMatrix<GaussInt>),
}

impl MatrixJson {
    pub fn gauss(&self) -> Result<RingMatrix<GaussInt>> {
        let data = self.entries.iter().map(Entry::gauss).collect::<Result<_>>()?;
        RingMatrix::from_vec(self.rows, self.cols, data)
    }

    pub fn integer(&self) -> Result<RingMatrix<i64>> {
        let data = self.entries.iter().map(Entry::int).collect::<Result<_>>()?;
        RingMatrix::from_vec(self.rows, self.cols, data)
    }

    pub fn build(&self) -> Result<AnyMatrix> {
        match self.ring {
            RingName::Z => self.integer().map(AnyMatrix::Z),
            RingName::Zi => self.gauss().map(AnyMatrix::Zi),
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    parse::<MatrixJson>(text)?.build()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientJson {
    pub ring: RingName,
    pub g_fine: MatrixJson,
    pub j: MatrixJson,
    pub gamma: Option<f64>,
    /// Rows of [re, im] pairs.
    pub unitary: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone)]
pub enum AnyQuotient {
    Z(LatticeQuotient<i64>),
    Zi(LatticeQuotient<GaussInt>),
}

impl QuotientJson {
    fn geometry(&self) -> Result<Geometry> {
        let gamma = self.gamma.unwrap_or(1.0);
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Invalid(format!("gamma {gamma} must be positive")));
        }
        let unitary = self
            .unitary
            .as_ref()
            .map(|rows| rows.iter().map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect());
        Ok(Geometry { gamma, unitary })
    }

    pub fn build(&self) -> Result<AnyQuotient> {
        if self.g_fine.ring != self.ring || self.j.ring != self.ring {
            return Err(Error::Invalid("g_fine and j must use the quotient's ring".into()));
        }
        let geometry = self.geometry()?;
        match self.ring {
            RingName::Z => LatticeQuotient::new(self.g_fine.integer()?, self.j.integer()?)?
                .with_geometry(geometry)
                .map(AnyQuotient::Z),
            RingName::Zi => LatticeQuotient::new(self.g_fine.gauss()?, self.j.gauss()?)?
                .with_geometry(geometry)
                .map(AnyQuotient::Zi),
        }
    }
}

pub fn parse_quotient(text: &str) -> Result<AnyQuotient> {
    parse::<QuotientJson>(text)?.build()
}

/// A code given by generator rows, or one of the built-in families.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeJson {
    pub n: usize,
    #[serde(default)]
    pub rows: Vec<Vec<Entry>>,
    /// "extended-hamming" or "trivial"; `rows` is ignored when present.
    pub family: Option<String>,
}

impl CodeJson {
    fn build(&self, alphabet: Alphabet) -> Result<LinearCode> {
        match self.family.as_deref() {
            Some("extended-hamming") => {
                if alphabet != Alphabet::Real(2) {
                    return Err(Error::Invalid("extended Hamming codes are binary".into()));
                }
                LinearCode::extended_hamming(self.n)
            }
            Some("trivial") => Ok(LinearCode::trivial(alphabet, self.n)),
            Some(other) => Err(Error::Invalid(format!("unknown code family `{other}`"))),
            None => {
                let rows = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Entry::gauss).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                LinearCode::from_rows(alphabet, self.n, &rows)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionName {
    A,
    AComplex,
    D,
    Baseline,
    Qam,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeJson {
    pub name: String,
    pub construction: ConstructionName,
    pub p: Option<i64>,
    pub pi: Option<Entry>,
    pub code: Option<CodeJson>,
    pub chain: Option<Vec<CodeJson>>,
    pub mu: Option<usize>,
    pub nu: Option<usize>,
    /// Block length for baseline and QAM schemes.
    pub n: Option<usize>,
}

fn need<T>(v: Option<T>, field: &str, construction: &str) -> Result<T> {
    v.ok_or_else(|| Error::Invalid(format!("construction `{construction}` needs `{field}`")))
}

impl SchemeJson {
    pub fn build(&self) -> Result<SchemeDef> {
        match self.construction {
            ConstructionName::Baseline => {
                let pi = need(self.pi.as_ref(), "pi", "baseline")?.gauss()?;
                Alphabet::complex(pi)?;
                Ok(SchemeDef::Baseline { pi, n: need(self.n, "n", "baseline")? })
            }
            ConstructionName::Qam => {
                let m = need(self.p, "p", "qam")?;
                if m < 2 {
                    return Err(Error::Invalid(format!("QAM order {m} must be at least 2")));
                }
                Ok(SchemeDef::Qam { m, n: need(self.n, "n", "qam")? })
            }
            ConstructionName::A => {
                let alphabet = Alphabet::real(need(self.p, "p", "a")?)?;
                Ok(SchemeDef::ConstructionA { code: need(self.code.as_ref(), "code", "a")?.build(alphabet)? })
            }
            ConstructionName::AComplex => {
                if let Some(nu) = self.nu {
                    let code = match nu {
                        1 => ConvCode::nu1(),
                        2 => ConvCode::nu2(),
                        _ => return Err(Error::Invalid(format!("no built-in encoder with ν = {nu}"))),
                    };
                    return Ok(SchemeDef::Convolutional { code, mu: need(self.mu, "mu", "a-complex")? });
                }
                let pi = need(self.pi.as_ref(), "pi", "a-complex")?.gauss()?;
                let alphabet = Alphabet::complex(pi)?;
                Ok(SchemeDef::ConstructionA { code: need(self.code.as_ref(), "code", "a-complex")?.build(alphabet)? })
            }
            ConstructionName::D => {
                let alphabet = Alphabet::real(need(self.p, "p", "d")?)?;
                let codes = need(self.chain.as_ref(), "chain", "d")?
                    .iter()
                    .map(|c| c.build(alphabet))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SchemeDef::ConstructionD { chain: NestedCodeChain::new(codes)? })
            }
        }
    }
}

pub fn parse_scheme(text: &str) -> Result<(String, SchemeDef)> {
    let s: SchemeJson = parse(text)?;
    Ok((s.name.clone(), s.build()?))
}

/// A catalog name, or else the path of a scheme JSON file.
pub fn resolve_scheme(name_or_path: &str) -> Result<(String, SchemeDef)> {
    match lookup(name_or_path) {
        Ok(e) => Ok((e.name.to_string(), e.def)),
        Err(unknown) => {
            let path = std::path::Path::new(name_or_path);
            if !path.is_file() {
                return Err(unknown);
            }
            let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{name_or_path}: {e}")))?;
            parse_scheme(&text)
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketJson {
    pub moduli: Vec<Entry>,
    pub header_len: usize,
    pub components: Vec<Entry>,
}

impl PacketJson {
    pub fn build(&self) -> Result<ModulePacket<GaussInt>> {
        if self.moduli.len() != self.components.len() {
            return Err(Error::Dimension(format!(
                "{} moduli for {} components",
                self.moduli.len(),
                self.components.len()
            )));
        }
        let comps = self
            .moduli
            .iter()
            .zip(&self.components)
            .map(|(m, c)| {
                let m = m.gauss()?;
                if m.is_zero() || m.is_unit() {
                    return Err(Error::Invalid(format!("modulus {m} must be a nonzero non-unit")));
                }
                Ok(Residue::new(c.gauss()?, m))
            })
            .collect::<Result<Vec<_>>>()?;
        ModulePacket::new(comps, self.header_len)
    }
}

/// A single packet object or a list of them.
pub fn parse_packets(text: &str) -> Result<Vec<ModulePacket<GaussInt>>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<PacketJson>),
        One(PacketJson),
    }
    match parse::<OneOrMany>(text)? {
        OneOrMany::Many(v) => v.iter().map(PacketJson::build).collect(),
        OneOrMany::One(p) => Ok(vec![p.build()?]),
    }
}

/// A complex vector written as a list of numbers or [re, im] pairs.
pub fn parse_complex_vector(text: &str) -> Result<Vec<Complex64>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum C {
        Real(f64),
        Pair(Vec<f64>),
    }
    parse::<Vec<C>>(text)?
        .into_iter()
        .map(|c| match c {
            C::Real(x) => Ok(Complex64::new(x, 0.0)),
            C::Pair(v) => match v.as_slice() {
                [re] => Ok(Complex64::new(*re, 0.0)),
                [re, im] => Ok(Complex64::new(*re, *im)),
                _ => Err(Error::Invalid(format!("{v:?} is not [re] or [re, im]"))),
            },
        })
        .collect()
}

/// A Gaussian-integer vector written as a list of integers or [re, im] pairs.
pub fn parse_gauss_vector(text: &str) -> Result<Vec<GaussInt>> {
    parse::<Vec<Entry>>(text)?.iter().map(Entry::gauss).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::gain_report_for;

    #[test]
    fn matrices() {
        let m = parse_matrix(r#"{"ring":"Z","rows":2,"cols":2,"entries":[[2],[1],0,[2]]}"#).unwrap();
        assert_eq!(m, AnyMatrix::Z(RingMatrix::from_rows(&[vec![2, 1], vec![0, 2]]).unwrap()));
        let m = parse_matrix(r#"{"ring":"Zi","rows":1,"cols":2,"entries":[[1,1],[0,-1]]}"#).unwrap();
        assert_eq!(
            m,
            AnyMatrix::Zi(RingMatrix::from_rows(&[vec![GaussInt::new(1, 1), GaussInt::new(0, -1)]]).unwrap())
        );
        assert!(parse_matrix(r#"{"ring":"Z","rows":1,"cols":1,"entries":[[1,1]]}"#).is_err());
        assert!(parse_matrix(r#"{"ring":"Z","rows":2,"cols":2,"entries":[1]}"#).is_err());
        assert!(parse_matrix(r#"{"ring":"Q","rows":1,"cols":1,"entries":[1]}"#).is_err());
        assert!(parse_matrix("not json").is_err());
    }

    #[test]
    fn quotient() {
        let text = r#"{"ring":"Zi","g_fine":{"ring":"Zi","rows":1,"cols":1,"entries":[1]},
                       "j":{"ring":"Zi","rows":1,"cols":1,"entries":[[3,0]]},"gamma":2.0}"#;
        let AnyQuotient::Zi(q) = parse_quotient(text).unwrap() else { panic!("ring") };
        assert_eq!(q.geometry.gamma, 2.0);
        assert_eq!(q.j[(0, 0)], GaussInt::new(3, 0));
        let bad = text.replace("2.0", "-1.0");
        assert!(parse_quotient(&bad).is_err());
    }

    #[test]
    fn schemes() {
        let (name, def) = parse_scheme(r#"{"name":"c1","construction":"a-complex","nu":1,"mu":99}"#).unwrap();
        assert_eq!(name, "c1");
        assert!((gain_report_for(&def).unwrap().gamma_c - 2.0).abs() < 0.03);

        let (_, def) = parse_scheme(
            r#"{"name":"d32","construction":"d","p":2,
                "chain":[{"n":32,"family":"extended-hamming"},{"n":32,"family":"trivial"}]}"#,
        )
        .unwrap();
        assert!((gain_report_for(&def).unwrap().gamma_c - 3.08).abs() < 0.005);

        let (_, def) =
            parse_scheme(r#"{"name":"rep","construction":"a","p":2,"code":{"n":2,"rows":[[1,1]]}}"#).unwrap();
        let r = gain_report_for(&def).unwrap();
        assert!((r.gamma_c - 1.0).abs() < 1e-12);

        let (_, def) = parse_scheme(r#"{"name":"b","construction":"baseline","pi":[3,0],"n":4}"#).unwrap();
        assert!(matches!(def, SchemeDef::Baseline { n: 4, .. }));
        assert!(parse_scheme(r#"{"name":"b","construction":"baseline","n":4}"#).is_err());
        assert!(parse_scheme(r#"{"name":"b","construction":"e8"}"#).is_err());
        assert!(parse_scheme(r#"{"name":"q","construction":"qam","p":1,"n":4}"#).is_err());
    }

    #[test]
    fn packets() {
        let text = r#"[{"moduli":[4,2,2],"header_len":2,"components":[1,0,1]},
                       {"moduli":[4,2,2],"header_len":2,"components":[0,1,0]}]"#;
        let p = parse_packets(text).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].header_len, 2);
        assert_eq!(p[0].payload()[0].value(), GaussInt::from(1));
        assert_eq!(parse_packets(r#"{"moduli":[3],"header_len":1,"components":[1]}"#).unwrap().len(), 1);
        assert!(parse_packets(r#"{"moduli":[3,3],"header_len":1,"components":[1]}"#).is_err());
        assert!(parse_packets(r#"{"moduli":[1],"header_len":1,"components":[0]}"#).is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(
            parse_complex_vector("[[-1.17, 2.15], 0.5]").unwrap(),
            vec![Complex64::new(-1.17, 2.15), Complex64::new(0.5, 0.0)]
        );
        assert_eq!(parse_gauss_vector("[1, [2, -1]]").unwrap(), vec![GaussInt::from(1), GaussInt::new(2, -1)]);
        assert!(parse_gauss_vector("[[1, 2, 3]]").is_err());
    }

    #[test]
    fn catalog_names_resolve() {
        assert_eq!(resolve_scheme("conv-nu1").unwrap().0, "conv-nu1");
        assert!(matches!(resolve_scheme("no-such-scheme"), Err(Error::UnknownScheme(_))));
    }
}
