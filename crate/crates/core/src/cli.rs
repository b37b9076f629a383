//! Command-line front end: argument model, validation and JSON rendering.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::certify;
use crate::families::{self, FamilySpec};
use crate::lattice::{self, TorusActionSpec};
use crate::log_canonical;
use crate::moment::{self, AmbientPoint};
use crate::polyhedral::{self, RationalVector};
use crate::rational::{self, Rational};
use crate::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Analyze,
    Polytope,
    Chambers,
    KnSolve,
    FibreProbe,
    GlctBound,
    Certify,
    Verify,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "chowquot", version, about = "Torus quotients of symmetric T-varieties and Kähler–Einstein certificates")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Family selector, e.g. `hypersurface:n=3,alpha=1,beta=2`, `quadric:n=3`, `blownup-quadric:n=3`.
    #[arg(long)]
    pub family: Option<String>,
    /// Character as comma-separated rationals, e.g. `1/2,0,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    /// Boundary coefficient for `glct-bound`.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Ambient point as `;`-separated factors of `,`-separated complex numbers, e.g. `1,0,0;0,1,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 24)]
    pub trials: usize,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Write the JSON document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated request; built before any computation runs.
#[derive(Clone, Debug)]
pub struct CommandRequest {
    pub command: Command,
    pub family: Option<FamilySpec>,
    pub u: Option<RationalVector>,
    pub gamma: Option<Rational>,
    pub point: Option<Vec<Vec<Complex64>>>,
    pub seed: u64,
    pub tol: f64,
    pub trials: usize,
    pub max_iter: usize,
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    fn compute(e: impl std::fmt::Display) -> Self {
        CliError::Compute(e.to_string())
    }

    fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

fn parse_point(s: &str) -> Result<Vec<Vec<Complex64>>, CliError> {
    s.split(';')
        .map(|factor| {
            factor
                .split(',')
                .map(|z| z.trim().parse::<Complex64>().map_err(|_| CliError::Input(format!("bad complex number {z:?}"))))
                .collect()
        })
        .collect()
}

impl CommandRequest {
    pub fn from_args(args: &Args) -> Result<Self, CliError> {
        if !(args.tol.is_finite() && args.tol > 0.0) {
            return Err(CliError::Input(format!("--tol must be positive, got {}", args.tol)));
        }
        let family = args.family.as_deref().map(str::parse::<FamilySpec>).transpose().map_err(CliError::input)?;
        let u = args.u.as_deref().map(str::parse::<RationalVector>).transpose().map_err(CliError::input)?;
        let gamma = args.gamma.as_deref().map(rational::parse_rational).transpose().map_err(CliError::input)?;
        let point = args.point.as_deref().map(parse_point).transpose()?;
        let needs_family = !matches!(args.command, Command::GlctBound | Command::Verify);
        if needs_family && family.is_none() {
            return Err(CliError::Input("--family is required".into()));
        }
        if matches!(args.command, Command::KnSolve | Command::FibreProbe) && u.is_none() {
            return Err(CliError::Input("--u is required".into()));
        }
        if args.command == Command::GlctBound && gamma.is_none() {
            return Err(CliError::Input("--gamma is required".into()));
        }
        Ok(CommandRequest {
            command: args.command,
            family,
            u,
            gamma,
            point,
            seed: args.seed,
            tol: args.tol,
            trials: args.trials,
            max_iter: args.max_iter,
            out: args.out.clone(),
        })
    }

    fn family(&self) -> &FamilySpec {
        self.family.as_ref().expect("validated")
    }

    fn spec(&self) -> Result<TorusActionSpec, CliError> {
        families::ambient_spec(self.family()).map_err(CliError::compute)
    }

    fn u_for(&self, spec: &TorusActionSpec) -> Result<RationalVector, CliError> {
        let u = self.u.clone().expect("validated");
        if u.dim() != spec.torus_rank() {
            return Err(CliError::Input(format!("--u has {} entries, the torus has rank {}", u.dim(), spec.torus_rank())));
        }
        Ok(u)
    }
}

/// Result of one run: the exit status and the JSON document.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub document: Value,
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn analyze(req: &CommandRequest) -> Result<Value, CliError> {
    let f = req.family();
    let spec = req.spec()?;
    let weights: Vec<Value> = spec
        .names()
        .iter()
        .zip(spec.weights())
        .map(|(name, w)| json!({ "coordinate": name, "weight": RationalVector::from_bigints(w) }))
        .collect();
    let equation: Vec<String> = spec
        .equation()
        .iter()
        .map(|t| {
            let mono: Vec<String> = t
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { spec.names()[i].clone() } else { format!("{}^{k}", spec.names()[i]) })
                .collect();
            format!("{}*{}", rational::format_rational(&t.coefficient), mono.join("*"))
        })
        .collect();
    let global = lattice::global_stabilizer(&spec).map_err(CliError::compute)?;
    let pair = families::chow_boundary(f).map_err(CliError::compute)?;
    let pair_check = families::boundary_from_stabilizers(f).map_err(CliError::compute)?;
    let quotient_space = match families::quotient_space_report(f) {
        Ok(s) => json!(s),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    Ok(json!({
        "family": f,
        "symbol": f.symbol(),
        "dim": f.dim(),
        "fano": f.is_fano(),
        "smooth": f.is_smooth(),
        "torus_rank": spec.torus_rank(),
        "effective_weights": weights,
        "effective_global_stabilizer": global,
        "equation": equation,
        "quotient_map": families::chow_quotient_map(f).map_err(CliError::compute)?,
        "chow_pair": {
            "base": pair.base(),
            "hyperplanes": pair.hyperplane_names(),
            "closed_form": pair,
            "from_stabilizers": pair_check,
            "agree": pair == pair_check,
        },
        "boundary_strata": families::boundary_strata(f).map_err(CliError::compute)?,
        "quotient_space": quotient_space,
    }))
}

fn polytope(req: &CommandRequest) -> Result<Value, CliError> {
    let spec = req.spec()?;
    let p = moment::moment_polytope(&spec).map_err(CliError::compute)?;
    let mut out = json!({ "torus_rank": spec.torus_rank(), "polytope": p });
    if req.u.is_some() {
        let u = req.u_for(&spec)?;
        out["u"] = to_value(&u);
        out["location"] = to_value(p.locate(&u).map_err(CliError::compute)?);
    }
    Ok(out)
}

fn chambers(req: &CommandRequest) -> Result<Value, CliError> {
    let (weights, supports) = families::chamber_input(req.family()).map_err(CliError::compute)?;
    let complex = polyhedral::git_chambers(&weights, &supports).map_err(CliError::compute)?;
    let supports: Vec<Vec<usize>> = supports.iter().map(|s| s.iter().copied().collect()).collect();
    Ok(json!({
        "weights": weights,
        "realizable_supports": supports,
        "full_dimensional_chambers": complex.full_dimensional().count(),
        "complex": complex,
    }))
}

fn kn_solve(req: &CommandRequest) -> Result<Value, CliError> {
    let spec = req.spec()?;
    let u = req.u_for(&spec)?;
    let p = match &req.point {
        Some(factors) => AmbientPoint::new(&spec, factors.clone()).map_err(CliError::input)?,
        None => moment::sample_point(&spec, &mut moment::sample_rng(req.seed, 0)).map_err(CliError::compute)?,
    };
    let result = moment::kn_minimize(&spec, &p, &u, req.tol, req.max_iter).map_err(CliError::compute)?;
    let exact = match moment::semistable_exact(&spec, &p.support(), &u) {
        Ok(b) => json!(b),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let point: Vec<Vec<[f64; 2]>> = p.factors().iter().map(|f| f.iter().map(|z| [z.re, z.im]).collect()).collect();
    Ok(json!({
        "u": u,
        "point": point,
        "support": p.support(),
        "result": result,
        "semistable_exact": exact,
    }))
}

fn fibre_probe(req: &CommandRequest) -> Result<Value, CliError> {
    let f = req.family();
    let spec = req.spec()?;
    let u = req.u_for(&spec)?;
    let map = families::chow_quotient_map(f).map_err(CliError::compute)?;
    let report = moment::fibre_orbit_probe(&spec, &map.monomials, &u, req.trials, req.seed, req.tol, req.max_iter)
        .map_err(|e| match e {
            moment::MomentError::OutsidePolytope(_) => CliError::input(e),
            other => CliError::compute(other),
        })?;
    Ok(json!({ "quotient_map": map.display, "report": report }))
}

fn glct_bound(req: &CommandRequest) -> Result<Value, CliError> {
    let gamma = req.gamma.clone().expect("validated");
    let bound = log_canonical::glct_bound(&gamma).map_err(CliError::input)?;
    let search = log_canonical::glct_bound_via_search(&gamma).map_err(CliError::input)?;
    Ok(json!({
        "gamma": rational::format_rational(&gamma),
        "bound": bound,
        "via_search": search,
        "agree": bound == search,
    }))
}

/// Runs a validated request.
pub fn run(req: &CommandRequest) -> Result<Outcome, CliError> {
    let exact = json!("exact");
    let tolerance = json!({ "tolerance": req.tol });
    let (result, precision, exit_code) = match req.command {
        Command::Analyze => (analyze(req)?, exact, EXIT_OK),
        Command::Polytope => (polytope(req)?, exact, EXIT_OK),
        Command::Chambers => (chambers(req)?, exact, EXIT_OK),
        Command::KnSolve => (kn_solve(req)?, tolerance, EXIT_OK),
        Command::FibreProbe => (fibre_probe(req)?, tolerance, EXIT_OK),
        Command::GlctBound => (glct_bound(req)?, exact, EXIT_OK),
        Command::Certify => (to_value(certify::certify(req.family()).map_err(CliError::compute)?), exact, EXIT_OK),
        Command::Verify => {
            let report = verify::run_all(req.seed);
            let code = if report.ok() { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
            (to_value(&report), json!("per-suite tolerances stated in suite names and checks"), code)
        }
    };
    let mut document = json!({
        "command": req.command,
        "seed": req.seed,
        "precision": precision,
        "result": result,
    });
    if let Some(f) = &req.family {
        document["family"] = to_value(f);
    }
    Ok(Outcome { exit_code, document })
}

/// Parses, runs and writes output; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = CommandRequest::from_args(&args).and_then(|req| run(&req));
    match outcome {
        Ok(o) => {
            let text = serde_json::to_string_pretty(&o.document).expect("serializable") + "\n";
            match &args.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_INPUT_ERROR;
                    }
                }
                None => print!("{text}"),
            }
            o.exit_code
        }
        Err(e) => {
            let doc = json!({ "error": e.to_string() });
            eprintln!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            EXIT_INPUT_ERROR
        }
    }
}
