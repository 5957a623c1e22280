//! Seeded Monte-Carlo frame-error simulation of two-transmitter
//! compute-and-forward over fixed or Rayleigh-faded channels.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{union_bound_estimate, BoundInputs};
use crate::codec::{mmse_alpha, LncScheme, QamScheme};
use crate::coeffs::{Constraint, GramContext};
use crate::constructions::{lookup, SchemeDef};
use crate::error::{Error, Result};
use crate::lattices::Message;
use crate::rings::GaussInt;
use crate::rng::{complex_gaussian, keyed, PURPOSE_CHANNEL, PURPOSE_MESSAGE, PURPOSE_NOISE};

pub const NUM_TX: usize = 2;
pub const FRAME_LENGTH: usize = 200;
pub const CSV_HEADER: &str = "scheme,scenario,combination_index,snr_db,frames,frame_errors,fer,ube,seed";

/// The fixed channel of scenario 1.
pub fn scenario1_channel() -> Vec<Complex64> {
    vec![Complex64::new(-1.17, 2.15), Complex64::new(1.25, -1.63)]
}

#[derive(Debug, Clone)]
pub enum Fading {
    Fixed(Vec<Complex64>),
    /// i.i.d. CN(0, 1) gains, redrawn every frame.
    Rayleigh,
}

#[derive(Debug, Clone)]
pub enum CoefficientPolicy {
    Fixed(Vec<GaussInt>),
    /// The shortest vector meeting the constraint.
    Adaptive(Constraint),
    /// The two vectors of a dominant solution modulo π, decoded separately.
    Dominant {
        m: usize,
        pi: GaussInt,
    },
}

/// What is transmitted and how the receiver decides.
#[derive(Debug, Clone)]
pub enum SimScheme {
    Lattice(Box<LncScheme>),
    Qam(QamScheme),
    /// Error iff the message rate log2 3 is not below the computation rate.
    NgOutage,
}

impl SimScheme {
    pub fn from_def(name: &str, def: &SchemeDef) -> Result<Self> {
        match def {
            SchemeDef::Qam { m, n } => Ok(SimScheme::Qam(QamScheme::new(*m, *n)?)),
            _ => Ok(SimScheme::Lattice(Box::new(LncScheme::from_def(name, def)?))),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        if name == "ng-outage" {
            return Ok(SimScheme::NgOutage);
        }
        Self::from_def(name, &lookup(name)?.def)
    }

    pub fn r_mes(&self) -> f64 {
        match self {
            SimScheme::Lattice(s) => s.r_mes(),
            SimScheme::Qam(q) => q.r_mes(),
            SimScheme::NgOutage => 3f64.log2(),
        }
    }

    fn pi(&self) -> GaussInt {
        match self {
            SimScheme::Lattice(s) => s.built.labeling.pis().first().copied().unwrap_or(GaussInt::new(3, 0)),
            SimScheme::Qam(q) => GaussInt::new(q.m, 0),
            SimScheme::NgOutage => GaussInt::new(3, 0),
        }
    }

    fn is_baseline(&self) -> bool {
        match self {
            SimScheme::Lattice(s) => s.built.labeling.k() == s.n(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub scenario: u8,
    pub scheme_name: String,
    pub scheme: SimScheme,
    pub snr_grid_db: Vec<f64>,
    pub frames: u64,
    pub seed: u64,
    pub fading: Fading,
    pub policy: CoefficientPolicy,
    /// Drop the channel noise entirely (N0 → 0).
    pub noiseless: bool,
}

impl SimConfig {
    /// The fading and coefficient policy of `scenario` applied to `scheme`.
    pub fn new(
        scenario: u8,
        scheme_name: &str,
        scheme: SimScheme,
        snr_grid_db: Vec<f64>,
        frames: u64,
        seed: u64,
    ) -> Result<Self> {
        let pi = scheme.pi();
        let (fading, policy) = match (scenario, &scheme) {
            (1 | 2, SimScheme::Qam(_)) => {
                let fading = if scenario == 1 { Fading::Fixed(scenario1_channel()) } else { Fading::Rayleigh };
                (fading, CoefficientPolicy::Fixed(vec![GaussInt::new(1, 0); NUM_TX]))
            }
            (1, _) => (Fading::Fixed(scenario1_channel()), CoefficientPolicy::Adaptive(Constraint::NonzeroModPi(pi))),
            (2, s) if s.is_baseline() => (Fading::Rayleigh, CoefficientPolicy::Adaptive(Constraint::AllNonzero(pi))),
            (2, _) => (Fading::Rayleigh, CoefficientPolicy::Adaptive(Constraint::NonzeroModPi(pi))),
            (3, SimScheme::Qam(_)) => {
                return Err(Error::Invalid("scenario 3 needs two independent combinations; QAM has one".into()));
            }
            (3, _) => (Fading::Rayleigh, CoefficientPolicy::Dominant { m: 2, pi }),
            (s, _) => return Err(Error::Invalid(format!("unknown scenario {s}"))),
        };
        Ok(Self {
            scenario,
            scheme_name: scheme_name.to_string(),
            scheme,
            snr_grid_db,
            frames,
            seed,
            fading,
            policy,
            noiseless: false,
        })
    }

    pub fn for_scheme(scenario: u8, name: &str, snr_grid_db: Vec<f64>, frames: u64, seed: u64) -> Result<Self> {
        Self::new(scenario, name, SimScheme::by_name(name)?, snr_grid_db, frames, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 {
            return Err(Error::Invalid("at least one frame per point".into()));
        }
        if self.snr_grid_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("SNR grid must be finite".into()));
        }
        if let Fading::Fixed(h) = &self.fading {
            if h.len() != NUM_TX {
                return Err(Error::Dimension(format!("{} channel gains for {NUM_TX} transmitters", h.len())));
            }
        }
        if let CoefficientPolicy::Fixed(a) = &self.policy {
            if a.len() != NUM_TX {
                return Err(Error::Dimension(format!("{} coefficients for {NUM_TX} transmitters", a.len())));
            }
        }
        if let (SimScheme::Qam(_), CoefficientPolicy::Dominant { .. }) = (&self.scheme, &self.policy) {
            return Err(Error::Invalid("QAM decodes a single combination".into()));
        }
        Ok(())
    }

    fn combinations(&self) -> usize {
        match self.policy {
            CoefficientPolicy::Dominant { m, .. } => m,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRecord {
    pub scheme: String,
    pub scenario: u8,
    pub combination_index: usize,
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub fer: f64,
    /// Mean union-bound estimate over the simulated channels; absent for the
    /// outage comparator.
    pub ube: Option<f64>,
    pub seed: u64,
}

/// Per-frame outcome for each decoded combination.
#[derive(Debug, Clone, Copy, Default)]
struct Outcome {
    error: bool,
    ube: f64,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn channel(config: &SimConfig, frame: u64) -> Vec<Complex64> {
    match &config.fading {
        Fading::Fixed(h) => h.clone(),
        Fading::Rayleigh => {
            let mut rng = keyed(config.seed, frame, PURPOSE_CHANNEL);
            (0..NUM_TX).map(|_| complex_gaussian(&mut rng)).collect()
        }
    }
}

fn select(policy: &CoefficientPolicy, h: &[Complex64], snr: f64) -> Result<Vec<Vec<GaussInt>>> {
    match policy {
        CoefficientPolicy::Fixed(a) => Ok(vec![a.clone()]),
        CoefficientPolicy::Adaptive(c) => Ok(vec![GramContext::new(h, snr)?.best_single_coefficient(*c)?.a]),
        CoefficientPolicy::Dominant { m, pi } => {
            Ok(GramContext::new(h, snr)?.dominant_solution(*m, *pi)?.into_iter().map(|c| c.a).collect())
        }
    }
}

fn noise(config: &SimConfig, frame: u64, n: usize, n0: f64) -> Vec<Complex64> {
    if config.noiseless {
        return vec![Complex64::new(0.0, 0.0); n];
    }
    let mut rng = keyed(config.seed, frame, PURPOSE_NOISE);
    let s = n0.sqrt();
    (0..n).map(|_| complex_gaussian(&mut rng) * s).collect()
}

fn receive(h: &[Complex64], xs: &[&[Complex64]], z: &[Complex64]) -> Vec<Complex64> {
    (0..z.len()).map(|j| h.iter().zip(xs).map(|(hl, x)| hl * x[j]).sum::<Complex64>() + z[j]).collect()
}

fn ube(d_sq: f64, kissing: f64, h: &[Complex64], a: &[GaussInt], snr: f64, n0: f64) -> Result<f64> {
    let b = BoundInputs { d_sq, kissing, h: h.to_vec(), a: a.to_vec(), snr, n0, alpha: None };
    Ok(union_bound_estimate(&b)?.min(1.0))
}

fn simulate_frame(config: &SimConfig, snr: f64, frame: u64, fixed: Option<&[Vec<GaussInt>]>) -> Result<Vec<Outcome>> {
    let h = channel(config, frame);
    let coeffs = match fixed {
        Some(c) => c.to_vec(),
        None => select(&config.policy, &h, snr)?,
    };
    match &config.scheme {
        SimScheme::NgOutage => {
            let ctx = GramContext::new(&h, snr)?;
            Ok(coeffs
                .iter()
                .map(|a| Outcome { error: 3f64.log2() >= (snr / ctx.quadratic_form(a)).log2(), ube: f64::NAN })
                .collect())
        }
        SimScheme::Lattice(s) => {
            let frames: Vec<_> = (0..NUM_TX).map(|tx| s.frame(config.seed, frame, tx as u8)).collect::<Result<_>>()?;
            let n0 = s.power() / snr;
            let z = noise(config, frame, s.n(), n0);
            let xs: Vec<&[Complex64]> = frames.iter().map(|f| f.x.as_slice()).collect();
            let y = receive(&h, &xs, &z);
            let dithers: Vec<&[Complex64]> = frames.iter().map(|f| f.dither.as_slice()).collect();
            let msgs: Vec<Message<GaussInt>> = frames.iter().map(|f| f.message.clone()).collect();
            let d_sq = s.report.d_sq.exact().or(s.report.d_sq.lower()).unwrap_or(1.0);
            let kissing = s.report.kissing.exact().or(s.report.kissing.upper()).unwrap_or(1.0);
            coeffs
                .iter()
                .map(|a| {
                    let alpha = mmse_alpha(&h, a, snr);
                    let got = s.decode(&y, a, &dithers, alpha)?;
                    let want = Message::combine(a, &msgs);
                    Ok(Outcome { error: got != want, ube: ube(d_sq, kissing, &h, a, snr, n0)? })
                })
                .collect()
        }
        SimScheme::Qam(q) => {
            let msgs: Vec<Vec<GaussInt>> = (0..NUM_TX)
                .map(|tx| q.random_message(&mut keyed(config.seed, frame, PURPOSE_MESSAGE.wrapping_add(tx as u8))))
                .collect();
            let xs: Vec<Vec<Complex64>> = msgs.iter().map(|w| q.encode(w)).collect();
            let n0 = q.power() / snr;
            let z = noise(config, frame, q.n, n0);
            let xr: Vec<&[Complex64]> = xs.iter().map(|x| x.as_slice()).collect();
            let y = receive(&h, &xr, &z);
            coeffs
                .iter()
                .map(|a| {
                    let got = q.decode(&y, a, mmse_alpha(&h, a, snr))?;
                    let ube = ube(1.0, 4.0 * q.n as f64, &h, a, snr, n0)?;
                    Ok(Outcome { error: got != q.combine(a, &msgs), ube })
                })
                .collect()
        }
    }
}

/// Simulates one SNR point; one record per decoded combination.
pub fn run_cell(config: &SimConfig, snr_db: f64) -> Result<Vec<SimRecord>> {
    config.validate()?;
    let snr = db_to_linear(snr_db);
    let fixed = match config.fading {
        Fading::Fixed(ref h) => Some(select(&config.policy, h, snr)?),
        Fading::Rayleigh => None,
    };
    let outcomes: Vec<Vec<Outcome>> = (0..config.frames)
        .into_par_iter()
        .map(|f| simulate_frame(config, snr, f, fixed.as_deref()))
        .collect::<Result<_>>()?;
    let combos = config.combinations();
    Ok((0..combos)
        .map(|c| {
            let errors = outcomes.iter().filter(|o| o[c].error).count() as u64;
            let ube_sum: f64 = outcomes.iter().map(|o| o[c].ube).sum();
            let ube = ube_sum / config.frames as f64;
            SimRecord {
                scheme: config.scheme_name.clone(),
                scenario: config.scenario,
                combination_index: c + 1,
                snr_db,
                frames: config.frames,
                frame_errors: errors,
                fer: errors as f64 / config.frames as f64,
                ube: ube.is_finite().then_some(ube),
                seed: config.seed,
            }
        })
        .collect())
}

/// All SNR points in grid order.
pub fn sweep(config: &SimConfig) -> Result<Vec<SimRecord>> {
    let mut out = Vec::new();
    for &snr_db in &config.snr_grid_db {
        out.extend(run_cell(config, snr_db)?);
    }
    Ok(out)
}

pub fn write_csv<W: Write>(records: &[SimRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(',')).map_err(io_error)?;
    for r in records {
        w.serialize(r).map_err(io_error)?;
    }
    w.flush().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(())
}

fn io_error(e: csv::Error) -> Error {
    Error::Invalid(format!("writing CSV: {e}"))
}

/// Parses `LO:STEP:HI` into an inclusive grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Invalid(format!("SNR grid {spec:?} is not LO:STEP:HI"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
    let (lo, step, hi) = (v[0], v[1], v[2]);
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    if hi < lo {
        return Ok(Vec::new());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect())
}

/// SNR (dB) at which a FER curve first falls to `target`, interpolating
/// log10(FER) linearly between grid points.
pub fn crossing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    let lt = target.log10();
    for w in points.windows(2) {
        let (x0, f0) = w[0];
        let (x1, f1) = w[1];
        if f0 >= target && f1 < target {
            if f1 <= 0.0 {
                return Some(x0 + (x1 - x0) * 0.5);
            }
            let (l0, l1) = (f0.log10(), f1.log10());
            return Some(x0 + (x1 - x0) * (l0 - lt) / (l0 - l1));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_string(records: &[SimRecord]) -> String {
        let mut buf = Vec::new();
        write_csv(records, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:0.5:1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("10:1:12").unwrap(), vec![10.0, 11.0, 12.0]);
        assert_eq!(parse_grid("0:0.1:0.3").unwrap().len(), 4);
        assert!(parse_grid("2:1:1").unwrap().is_empty());
        assert!(parse_grid("0:0:1").is_err());
        assert!(parse_grid("a:b").is_err());
    }

    #[test]
    fn empty_grid_is_header_only() {
        let cfg = SimConfig::for_scheme(1, "baseline-pi3", vec![], 10, 1).unwrap();
        assert_eq!(csv_string(&sweep(&cfg).unwrap()), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn noiseless_integer_channel_is_error_free() {
        for name in ["baseline-pi3", "conv-nu1", "qam9"] {
            let mut cfg = SimConfig::for_scheme(1, name, vec![10.0], 200, 3).unwrap();
            cfg.fading = Fading::Fixed(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
            cfg.policy = CoefficientPolicy::Fixed(vec![GaussInt::new(1, 0), GaussInt::new(1, 0)]);
            cfg.noiseless = true;
            let r = run_cell(&cfg, 10.0).unwrap();
            assert_eq!(r[0].frame_errors, 0, "{name}");
        }
    }

    #[test]
    fn deterministic_and_row_counts() {
        let cfg = SimConfig::for_scheme(2, "baseline-pi3", vec![4.0, 8.0, 12.0], 30, 9).unwrap();
        let a = csv_string(&sweep(&cfg).unwrap());
        let b = csv_string(&sweep(&cfg).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 4);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| csv_string(&sweep(&cfg).unwrap()));
        assert_eq!(a, c);
        let cfg3 = SimConfig::for_scheme(3, "ng-outage", vec![4.0, 8.0, 12.0], 30, 9).unwrap();
        let s3 = csv_string(&sweep(&cfg3).unwrap());
        assert_eq!(s3.lines().count(), 7);
        assert!(s3.lines().nth(1).unwrap().ends_with(",,9"));
    }

    #[test]
    fn scenario_policies() {
        assert!(SimConfig::for_scheme(3, "qam9", vec![], 1, 0).is_err());
        assert!(SimConfig::for_scheme(4, "conv-nu1", vec![], 1, 0).is_err());
        assert!(SimConfig::for_scheme(1, "hamming-ext-32", vec![], 1, 0).is_err());
        assert!(SimConfig::for_scheme(1, "nope", vec![], 1, 0).is_err());
        let b = SimConfig::for_scheme(2, "baseline-pi3", vec![], 1, 0).unwrap();
        assert!(matches!(b.policy, CoefficientPolicy::Adaptive(Constraint::AllNonzero(_))));
        let c = SimConfig::for_scheme(2, "conv-nu2", vec![], 1, 0).unwrap();
        assert!(matches!(c.policy, CoefficientPolicy::Adaptive(Constraint::NonzeroModPi(_))));
        let q = SimConfig::for_scheme(2, "qam9", vec![], 1, 0).unwrap();
        assert!(matches!(q.policy, CoefficientPolicy::Fixed(_)));
    }

    #[test]
    fn message_rates() {
        let l3 = 3f64.log2();
        assert!((SimScheme::by_name("conv-nu1").unwrap().r_mes() - 0.99 * l3).abs() < 1e-12);
        assert!((SimScheme::by_name("conv-nu2").unwrap().r_mes() - 0.98 * l3).abs() < 1e-12);
        assert!((SimScheme::by_name("ng-outage").unwrap().r_mes() - l3).abs() < 1e-12);
        assert!((SimScheme::by_name("baseline-pi3").unwrap().r_mes() - 2.0 * l3).abs() < 1e-12);
        assert!((SimScheme::by_name("qam9").unwrap().r_mes() - 2.0 * l3).abs() < 1e-12);
    }

    #[test]
    fn fer_falls_with_snr() {
        let cfg = SimConfig::for_scheme(1, "baseline-pi3", vec![5.0, 25.0], 100, 4).unwrap();
        let r = sweep(&cfg).unwrap();
        assert!(r[0].fer > r[1].fer);
        assert!(r[0].fer == r[0].frame_errors as f64 / 100.0);
    }

    #[test]
    fn crossing_interpolates_in_log_domain() {
        let pts = [(0.0, 1.0), (1.0, 1e-1), (2.0, 1e-3)];
        assert!((crossing(&pts, 1e-2).unwrap() - 1.5).abs() < 1e-12);
        assert!(crossing(&pts, 1e-4).is_none());
    }
}
