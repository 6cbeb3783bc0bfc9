//! Command-line front end. Every subcommand prints one JSON document on
//! stdout and, unless `--quiet`, a one-line summary on stderr.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure (including an
//! oracle run that did not converge; its JSON is still printed).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::generators::gellmann;
use crate::linalg;
use crate::measures::{self, bounds_from_dsep, MeasureBounds};
use crate::oracle::{self, OracleConfig};
use crate::states::{self, fixture, DensityMatrix, PureState};
use crate::witnesses::{self, BoundCertificate};

/// A pure input may have a largest eigenvalue this far below 1.
const PURE_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "sepbound", version, about = "Certified lower bounds on bipartite entanglement")]
struct Cli {
    /// Suppress the stderr summary; only JSON is written.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Witness bound on D_sep plus the implied C, E, E_g bounds.
    Bound(BoundArgs),
    /// Writes the MUB witness with identity rotations.
    MubWitness {
        #[arg(long)]
        d: usize,
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spin-squeezing bound; shorthand for `bound --spin`.
    SpinBound {
        #[arg(long)]
        state: PathBuf,
    },
    /// Exact measures of a pure (rank-one) state.
    Pure {
        #[arg(long)]
        state: PathBuf,
    },
    /// Numerical upper bound on D_sep by explicit separable decomposition.
    Oracle {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Writes a named fixture.
    Fixtures {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagonal-unitary twirl of a two-qudit state.
    Twirl {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long)]
    state: PathBuf,
    #[command(flatten)]
    source: WitnessSource,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct WitnessSource {
    #[arg(long)]
    witness_file: Option<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["D", "L"])]
    mub: Option<Vec<usize>>,
    #[arg(long)]
    spin: bool,
}

/// Parses `argv` (program name first) and runs against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let _ = writeln!(out, "{}", outcome.json);
            if !cli.quiet {
                let _ = writeln!(err, "{}", outcome.summary);
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Outcome {
    json: String,
    summary: String,
    code: i32,
}

impl Outcome {
    fn ok(value: &impl Serialize, summary: String) -> Result<Self> {
        Ok(Outcome { json: serde_json::to_string(value)?, summary, code: 0 })
    }
}

#[derive(Serialize)]
struct BoundReport {
    certificate: BoundCertificate,
    bounds: MeasureBounds,
}

fn bound_report(cert: BoundCertificate) -> Result<Outcome> {
    let bounds = bounds_from_dsep(cert.dsep_lower)?;
    let summary = if cert.certified {
        format!(
            "entangled: Tr(Wρ) = {:.6e}, D_sep ≥ {:.6e}, C ≥ {:.6e}, E ≥ {:.6e} bits, E_g ≥ {:.6e}",
            cert.witness_value,
            bounds.dsep_lower,
            bounds.concurrence_lower,
            bounds.eof_lower,
            bounds.geometric_lower_sound
        )
    } else {
        format!("not detected: Tr(Wρ) = {:.6e} ≥ 0", cert.witness_value)
    };
    Outcome::ok(&BoundReport { certificate: cert, bounds }, summary)
}

fn spin_certificate(rho: &DensityMatrix) -> Result<BoundCertificate> {
    let d = rho.dims().local().ok_or_else(|| {
        Error::Dimension(format!(
            "spin-squeezing witness needs equal local dimensions, got {}",
            rho.dims()
        ))
    })?;
    witnesses::spin_bound(rho, &gellmann(d)?)
}

/// Writes `json` to `out` if given, otherwise returns it for stdout.
fn emit_document(json: String, out: Option<PathBuf>, what: &str) -> Result<Outcome> {
    match out {
        Some(path) => {
            fs::write(&path, &json)?;
            let summary = format!("wrote {what} to {}", path.display());
            Outcome::ok(&json!({ "written": path }), summary)
        }
        None => Ok(Outcome { json, summary: what.to_owned(), code: 0 }),
    }
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Bound(args) => {
            let rho = states::load_state(&args.state)?;
            let cert = match (args.source.witness_file, args.source.mub, args.source.spin) {
                (Some(path), _, _) => {
                    let w = states::load_witness(path)?;
                    witnesses::generic_bound(&w, &rho, None)?
                }
                (_, Some(dl), _) => {
                    let (d, l) = (dl[0], dl[1]);
                    let w = witnesses::standard_mub_witness(d, l)?;
                    witnesses::mub_bound(&w, l, &rho)?
                }
                _ => spin_certificate(&rho)?,
            };
            bound_report(cert)
        }
        Command::SpinBound { state } => bound_report(spin_certificate(&states::load_state(state)?)?),
        Command::MubWitness { d, l, out } => {
            let w = witnesses::standard_mub_witness(d, l)?;
            emit_document(states::witness_to_json(&w), out, &format!("MUB witness d={d} L={l}"))
        }
        Command::Pure { state } => {
            let rho = states::load_state(state)?;
            let psi = dominant_pure_state(&rho)?;
            let m = measures::pure_measures(&psi)?;
            let summary = format!(
                "Schmidt {:?}: dsep = {:.8}, C = {:.8}, E = {:.8} bits, E_g = {:.8}",
                m.schmidt, m.dsep, m.concurrence, m.eof, m.geometric
            );
            Outcome::ok(&m, summary)
        }
        Command::Oracle { state, restarts, seed } => {
            let rho = states::load_state(state)?;
            let defaults = OracleConfig::default();
            let cfg = OracleConfig {
                restarts: restarts.unwrap_or(defaults.restarts),
                seed: seed.unwrap_or(defaults.seed),
                ..defaults
            };
            let res = oracle::dsep_upper(&rho, &cfg)?;
            let summary = format!(
                "D_sep ≤ {:.8e} ({} product terms, {} iterations{})",
                res.dsep_upper,
                res.ensemble.len(),
                res.iterations_used,
                if res.converged { "" } else { ", NOT converged" }
            );
            let mut outcome = Outcome::ok(&res, summary)?;
            if !res.converged {
                outcome.code = 2;
            }
            Ok(outcome)
        }
        Command::Fixtures { name, out } => {
            let value = fixture(&name)?;
            emit_document(value.to_json(), out, &format!("fixture {name}"))
        }
        Command::Twirl { state, out } => {
            let twirled = measures::diagonal_twirl(&states::load_state(state)?)?;
            emit_document(states::state_to_json(&twirled), out, "twirled state")
        }
    }
}

/// The eigenvector of a rank-one state, rejecting mixed inputs.
fn dominant_pure_state(rho: &DensityMatrix) -> Result<PureState> {
    let eig = linalg::hermitian_eig(rho.matrix())?;
    let top = eig.max();
    if top < 1.0 - PURE_TOL {
        return Err(Error::Invariant { invariant: "rank-one state", deviation: 1.0 - top });
    }
    let n = rho.dims().total();
    PureState::normalized(rho.dims(), eig.vectors.column(n - 1))
}
