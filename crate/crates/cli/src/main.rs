use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lnc_core::codec::mmse_alpha;
use lnc_core::coeffs::{computation_rate, Candidate, Constraint, GramContext};
use lnc_core::config::{
    parse_complex_vector, parse_gauss_vector, parse_matrix, parse_packets, resolve_scheme, AnyMatrix, Entry,
};
use lnc_core::constructions::gain_report_for;
use lnc_core::netcode::{recover, Recovery, RowOp};
use lnc_core::sim::{parse_grid, sweep, write_csv, SimConfig, SimScheme};
use lnc_core::{Error, EuclideanRing, GaussInt, Residue, RingMatrix};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lnc", version, about = "Lattice network coding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo frame error rates over an SNR grid, written as CSV.
    Simulate {
        #[arg(long)]
        scenario: u8,
        /// Catalog name, `ng-outage`, or a scheme JSON file.
        #[arg(long)]
        scheme: String,
        /// LO:STEP:HI in dB.
        #[arg(long = "snr-db", allow_hyphen_values = true)]
        snr_db: String,
        #[arg(long, default_value_t = 10_000)]
        frames: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Remove the channel noise.
        #[arg(long)]
        noiseless: bool,
    },
    /// Coding gain report of a scheme as JSON.
    Gain {
        #[arg(long)]
        scheme: String,
    },
    /// Computation rate and MMSE scaling for a channel and coefficient vector.
    Rate {
        /// JSON list of gains: numbers or [re, im].
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        /// JSON list of Gaussian integers: integers or [re, im].
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long = "snr-db", allow_hyphen_values = true)]
        snr_db: f64,
    },
    /// Smith normal form of a JSON matrix.
    Snf {
        #[arg(long)]
        input: PathBuf,
    },
    /// Shortest coefficient vectors for a channel.
    SelectCoeffs {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long = "snr-db", allow_hyphen_values = true)]
        snr_db: f64,
        /// Number of independent combinations.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Prime modulus as an integer or [re, im].
        #[arg(long, default_value = "3", allow_hyphen_values = true)]
        pi: String,
    },
    /// Recover source payloads from received module packets.
    Recover {
        #[arg(long)]
        packets: PathBuf,
        /// Number of sources; defaults to the header length.
        #[arg(long)]
        m: Option<usize>,
    },
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Overflow | Error::Budget(_) | Error::Singular | Error::NotUnimodular => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn config_error(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))
}

fn gauss(x: GaussInt) -> Value {
    json!([x.re, x.im])
}

fn residue(x: &Residue<GaussInt>) -> Value {
    json!({ "value": gauss(x.value()), "modulus": gauss(x.modulus()) })
}

fn matrix<R: EuclideanRing>(m: &RingMatrix<R>, f: impl Fn(R) -> Value) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|&x| f(x)).collect())).collect())
}

fn candidate(c: &Candidate) -> Value {
    json!({
        "a": c.a.iter().map(|&x| gauss(x)).collect::<Vec<_>>(),
        "norm_sq": c.norm_sq,
        "rate": c.rate,
    })
}

fn row_op(op: &RowOp<GaussInt>) -> Value {
    match op {
        RowOp::Pair { rows, matrix } => {
            json!({ "op": "pair", "rows": [rows.0, rows.1], "matrix": matrix.iter().map(|&x| gauss(x)).collect::<Vec<_>>() })
        }
        RowOp::Normalize { row, c, modulus } => {
            json!({ "op": "normalize", "row": row, "c": gauss(*c), "modulus": gauss(*modulus) })
        }
        RowOp::Eliminate { dst, src, c } => json!({ "op": "eliminate", "dst": dst, "src": src, "c": gauss(*c) }),
    }
}

fn print_json(v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure { code: 1, message: e.to_string() }),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { scenario, scheme, snr_db, frames, seed, out, noiseless } => {
            let grid = parse_grid(&snr_db)?;
            let sim_scheme = match SimScheme::by_name(&scheme) {
                Err(Error::UnknownScheme(_)) => {
                    let (name, def) = resolve_scheme(&scheme)?;
                    (name.clone(), SimScheme::from_def(&name, &def)?)
                }
                other => (scheme.clone(), other?),
            };
            let mut config = SimConfig::new(scenario, &sim_scheme.0, sim_scheme.1, grid, frames, seed)?;
            config.noiseless = noiseless;
            config.validate()?;
            let records = sweep(&config)?;
            match out {
                Some(path) => {
                    let file = fs::File::create(&path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
                    write_csv(&records, io::BufWriter::new(file))?;
                }
                None => write_csv(&records, io::stdout().lock())?,
            }
            Ok(())
        }
        Command::Gain { scheme } => {
            let (name, def) = resolve_scheme(&scheme)?;
            let report = gain_report_for(&def)?.with_name(&name);
            print_json(&serde_json::to_value(report).map_err(|e| Failure { code: 1, message: e.to_string() })?)
        }
        Command::Rate { h, a, snr_db } => {
            let h = parse_complex_vector(&h)?;
            let a = parse_gauss_vector(&a)?;
            let ctx = GramContext::from_db(&h, snr_db)?;
            let rate = computation_rate(&ctx, &a)?;
            let alpha = mmse_alpha(&h, &a, ctx.snr);
            print_json(&json!({
                "snr_db": snr_db,
                "rate": rate,
                "rate_positive": rate.max(0.0),
                "alpha": [alpha.re, alpha.im],
                "a_m_a": ctx.quadratic_form(&a),
            }))
        }
        Command::Snf { input } => {
            let text = read(&input)?;
            let v = match parse_matrix(&text)? {
                AnyMatrix::Z(m) => {
                    let s = lnc_core::smith::smith_normal_form(&m)?;
                    json!({ "ring": "Z", "d": s.d, "p": matrix(&s.p, |x| json!(x)), "q": matrix(&s.q, |x| json!(x)) })
                }
                AnyMatrix::Zi(m) => {
                    let s = lnc_core::smith::smith_normal_form(&m)?;
                    json!({
                        "ring": "Zi",
                        "d": s.d.iter().map(|&x| gauss(x)).collect::<Vec<_>>(),
                        "p": matrix(&s.p, gauss),
                        "q": matrix(&s.q, gauss),
                    })
                }
            };
            print_json(&v)
        }
        Command::SelectCoeffs { h, snr_db, m, pi } => {
            let h = parse_complex_vector(&h)?;
            let pi: Entry = serde_json::from_str(&pi).map_err(|e| config_error(format!("--pi: {e}")))?;
            let pi = pi.gauss()?;
            if !pi.is_prime()? {
                return Err(Error::NotPrime(pi.to_string()).into());
            }
            let ctx = GramContext::from_db(&h, snr_db)?;
            let list = if m == 1 {
                vec![ctx.best_single_coefficient(Constraint::NonzeroModPi(pi))?]
            } else {
                ctx.dominant_solution(m, pi)?
            };
            print_json(&Value::Array(list.iter().map(candidate).collect()))
        }
        Command::Recover { packets, m } => {
            let received = parse_packets(&read(&packets)?)?;
            let m = m.or_else(|| received.first().map(|p| p.header_len)).unwrap_or(0);
            let v = match recover(&received, m)? {
                Recovery::Recovered { payloads, ops } => json!({
                    "status": "recovered",
                    "payloads": payloads.iter().map(|p| p.iter().map(residue).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "ops": ops.iter().map(row_op).collect::<Vec<_>>(),
                }),
                Recovery::Failed { column, reason } => {
                    json!({ "status": "failed", "column": column, "reason": reason })
                }
            };
            print_json(&v)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
