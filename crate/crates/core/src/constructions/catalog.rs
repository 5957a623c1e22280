use super::{
    gain_report_chain, gain_report_construction_a, gain_report_conv, Alphabet, CodeSummary, ConvCode, GainReport,
    LinearCode, NestedCodeChain,
};
use crate::error::{Error, Result};
use crate::rings::{EuclideanRing, GaussInt};

#[derive(Debug, Clone)]
pub enum SchemeDef {
    /// Z[i]ⁿ / πZ[i]ⁿ
    Baseline { pi: GaussInt, n: usize },
    /// Complex Construction A from a terminated convolutional code over Z[i]/⟨3⟩.
    Convolutional { code: ConvCode, mu: usize },
    /// Construction D from extended Hamming ⊂ full space.
    HammingD { n: usize },
    /// m²-QAM physical-layer network coding comparator.
    Qam { m: i64, n: usize },
    /// Construction A (real or complex, by the code alphabet) from an arbitrary code.
    ConstructionA { code: LinearCode },
    /// Construction D from an arbitrary nested chain.
    ConstructionD { chain: NestedCodeChain },
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub def: SchemeDef,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut v = vec![
        CatalogEntry { name: "conv-nu1", def: SchemeDef::Convolutional { code: ConvCode::nu1(), mu: 99 } },
        CatalogEntry { name: "conv-nu2", def: SchemeDef::Convolutional { code: ConvCode::nu2(), mu: 98 } },
    ];
    for (name, n) in
        [("hamming-ext-32", 32), ("hamming-ext-64", 64), ("hamming-ext-128", 128), ("hamming-ext-256", 256)]
    {
        v.push(CatalogEntry { name, def: SchemeDef::HammingD { n } });
    }
    v.push(CatalogEntry { name: "baseline-pi3", def: SchemeDef::Baseline { pi: GaussInt::new(3, 0), n: 200 } });
    v.push(CatalogEntry { name: "qam9", def: SchemeDef::Qam { m: 3, n: 200 } });
    v
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownScheme(name.to_string()))
}

pub fn hamming_chain(n: usize) -> Result<NestedCodeChain> {
    NestedCodeChain::new(vec![LinearCode::extended_hamming(n)?, LinearCode::trivial(Alphabet::Real(2), n)])
}

pub fn gain_report_for(def: &SchemeDef) -> Result<GainReport> {
    match def {
        SchemeDef::Baseline { pi, n } => {
            let summary = CodeSummary { n: *n, k: *n, w_min: 1, count: Some(*n as u64 * unit_residues(*pi)) };
            Ok(gain_report_construction_a(summary, pi.norm(), false))
        }
        SchemeDef::Convolutional { code, mu } => gain_report_conv(code, *mu),
        SchemeDef::HammingD { n } => gain_report_chain(&hamming_chain(*n)?),
        SchemeDef::Qam { m, n } => {
            let summary = CodeSummary { n: *n, k: *n, w_min: 1, count: Some(*n as u64 * 4) };
            Ok(gain_report_construction_a(summary, (m * m) as u128, false))
        }
        SchemeDef::ConstructionA { code } => {
            let real = matches!(code.alphabet, Alphabet::Real(_));
            Ok(gain_report_construction_a(CodeSummary::of(code)?, code.alphabet.modulus().norm(), real))
        }
        SchemeDef::ConstructionD { chain } => gain_report_chain(chain),
    }
}

/// Number of distinct residues of the units modulo π.
fn unit_residues(pi: GaussInt) -> u64 {
    let set: std::collections::BTreeSet<GaussInt> =
        GaussInt::units().iter().map(|&u| crate::rings::Residue::new(u, pi).value()).collect();
    set.len() as u64
}
