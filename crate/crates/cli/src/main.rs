mod commands;
mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::input::Inputs;

#[derive(Parser, Debug)]
#[command(
    name = "posgeom",
    version,
    about = "Positive geometry toolkit: amplitudes, canonical forms, CHY, amplituhedra, GKZ, signatures"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance (subcommand-specific default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Record wall time in the manifest (output is then not reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

/// Kinematic data from a file, from planar values, or sampled.
#[derive(Args, Debug, Clone)]
pub struct KinematicsArgs {
    /// Kinematics JSON: {"n": 5, "s": [["0", "1", ...], ...]}.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["planar", "sample"])]
    pub kinematics: Option<PathBuf>,
    /// Planar variables X_ij in diagonal order, e.g. 1,1,1,1,1.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "sample"
    )]
    pub planar: Option<Vec<String>>,
    /// Sample kinematics with --seed: generic, positive or abhy.
    #[arg(long, value_name = "MODE")]
    pub sample: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Triangulations of the n-gon and the tree amplitude.
    Amplitude {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        kin: KinematicsArgs,
    },
    /// Critical points of the scattering potential and the CHY sum.
    Chy {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        kin: KinematicsArgs,
    },
    /// Canonical function and adjoint of a polytope.
    CanonicalForm {
        /// Polytope JSON: {"dim": 2, "H": [{"a": [...], "b": "..."}]} or {"dim": 2, "V": [[...]]}.
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
        /// Evaluate at this interior point, e.g. 1/2,1/2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<String>>,
    },
    /// The ABHY pentagon for given mesh constants or kinematics.
    Abhy {
        /// Mesh constants c13,c14,c24.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        constants: Option<Vec<String>>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        kin: KinematicsArgs,
    },
    /// Dihedral u-equations or the u-space scattering equations.
    Dihedral {
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// u-equations or scattering.
        #[arg(long, default_value = "u-equations")]
        check: String,
        #[command(flatten)]
        kin: KinematicsArgs,
    },
    /// Membership of a line in the k = m = 2 amplituhedron.
    Amplituhedron {
        /// Z matrix JSON: {"Z": [[...], ...]}; the twisted cubic at 1..5 if omitted.
        #[arg(long = "Z", value_name = "FILE")]
        z: Option<PathBuf>,
        /// Line JSON: {"A": [...], "B": [...]} or {"p": [six Plücker coordinates]}.
        #[arg(long, value_name = "FILE")]
        line: PathBuf,
        /// Allow n != 5.
        #[arg(long)]
        extended: bool,
    },
    /// Adjoint hypersurface of the Gr(2,4) amplituhedron by interpolation.
    #[command(name = "adjoint-gr24")]
    AdjointGr24 {
        #[arg(long = "Z", value_name = "FILE")]
        z: Option<PathBuf>,
    },
    /// Whether a line meets the convex hull of the Z rows.
    Stabs {
        #[arg(long = "Z", value_name = "FILE")]
        z: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        line: PathBuf,
    },
    /// GKZ operators of an Euler integrand, optionally evaluated.
    Gkz {
        /// Integrand JSON; the two-site chain if omitted.
        #[arg(long, value_name = "FILE")]
        integrand: Option<PathBuf>,
        /// Coefficients c1..cN at which to evaluate the integral and residuals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Option<Vec<f64>>,
        /// Parameter values, in the integrand's parameter order.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<f64>>,
        /// Finite-difference step for annihilation residuals.
        #[arg(long, default_value_t = 1e-2)]
        h: f64,
    },
    /// ε → 0 limit of the five-point string integral.
    #[command(name = "string-limit")]
    StringLimit {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        kin: KinematicsArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05")]
        eps: Vec<f64>,
        /// Rescale the kinematics so the largest planar variable is 1.
        #[arg(long)]
        unit_scale: bool,
    },
    /// Truncated signature of a piecewise-linear path.
    Signature {
        /// Path JSON: {"points": [["0", "0"], ["1", "1/2"], ...]}.
        #[arg(long, value_name = "FILE", conflicts_with = "cyclic")]
        path: Option<PathBuf>,
        /// Nodes of a path on the moment curve, e.g. 1,2,3,4,5.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        cyclic: Option<Vec<String>>,
        /// Dimension of the moment curve for --cyclic.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        level: usize,
        /// Also verify every shuffle relation up to the truncation level.
        #[arg(long)]
        shuffles: bool,
    },
    /// Tree amplitude vs ABHY canonical function vs CHY sum at five points.
    Crosscheck {
        #[command(flatten)]
        kin: KinematicsArgs,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Amplitude { .. } => "amplitude",
            Command::Chy { .. } => "chy",
            Command::CanonicalForm { .. } => "canonical-form",
            Command::Abhy { .. } => "abhy",
            Command::Dihedral { .. } => "dihedral",
            Command::Amplituhedron { .. } => "amplituhedron",
            Command::AdjointGr24 { .. } => "adjoint-gr24",
            Command::Stabs { .. } => "stabs",
            Command::Gkz { .. } => "gkz",
            Command::StringLimit { .. } => "string-limit",
            Command::Signature { .. } => "signature",
            Command::Crosscheck { .. } => "crosscheck",
        }
    }
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numerical(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Validation(m) => ("validation", m),
            Failure::Numerical(m) => ("numerical", m),
            Failure::Invariant(m) => ("invariant", m),
        };
        json!({"error": {"kind": kind, "message": message}})
    }
}

impl From<posgeom::Error> for Failure {
    fn from(e: posgeom::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

fn dispatch(command: &Command, global: &GlobalArgs, inputs: &mut Inputs) -> CliResult<Value> {
    use commands as c;
    match command {
        Command::Amplitude { n, kin } => c::amplitude(*n, kin, global, inputs),
        Command::Chy { n, kin } => c::chy(*n, kin, global, inputs),
        Command::CanonicalForm { polytope, point } => {
            c::canonical_form(polytope, point.as_deref(), inputs)
        }
        Command::Abhy { constants, n, kin } => {
            c::abhy(constants.as_deref(), *n, kin, global, inputs)
        }
        Command::Dihedral { n, check, kin } => c::dihedral(*n, check, kin, global, inputs),
        Command::Amplituhedron { z, line, extended } => {
            c::amplituhedron(z.as_deref(), line, *extended, inputs)
        }
        Command::AdjointGr24 { z } => c::adjoint_gr24(z.as_deref(), inputs),
        Command::Stabs { z, line } => c::stabs(z.as_deref(), line, inputs),
        Command::Gkz {
            integrand,
            at,
            params,
            h,
        } => c::gkz(
            integrand.as_deref(),
            at.as_deref(),
            params.as_deref(),
            *h,
            global,
            inputs,
        ),
        Command::StringLimit {
            n,
            kin,
            eps,
            unit_scale,
        } => c::string_limit(*n, kin, eps, *unit_scale, global, inputs),
        Command::Signature {
            path,
            cyclic,
            dim,
            level,
            shuffles,
        } => c::signature(
            path.as_deref(),
            cyclic.as_deref(),
            *dim,
            *level,
            *shuffles,
            inputs,
        ),
        Command::Crosscheck { kin } => c::crosscheck(kin, global, inputs),
    }
}

fn emit(text: &str, global: &GlobalArgs) -> Result<(), Failure> {
    match &global.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        dispatch(&cli.command, &cli.global, &mut inputs)
    }))
    .unwrap_or_else(|_| Err(Failure::Invariant("internal error (panic)".into())));
    let result = match outcome {
        Ok(v) => v,
        Err(f) => {
            eprintln!("{}", f.to_json());
            return ExitCode::from(f.code());
        }
    };
    let mut manifest = json!({
        "subcommand": cli.command.name(),
        "inputs": inputs.to_json(),
        "seed": cli.global.seed,
        "tol": cli.global.tol,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if cli.global.timing {
        manifest["wall_time_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    let failed_check = result.get("passed") == Some(&Value::Bool(false));
    let doc = json!({"manifest": manifest, "result": result});
    let text = if cli.global.pretty {
        render::pretty(&doc)
    } else {
        format!("{}\n", serde_json::to_string(&doc).expect("json"))
    };
    if let Err(f) = emit(&text, &cli.global) {
        eprintln!("{}", f.to_json());
        return ExitCode::from(f.code());
    }
    if failed_check {
        let f = Failure::Invariant(format!("{} self-check failed", cli.command.name()));
        eprintln!("{}", f.to_json());
        return ExitCode::from(f.code());
    }
    ExitCode::SUCCESS
}
