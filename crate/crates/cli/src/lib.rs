//! The `frolic` command line: brackets, structure constants and the
//! verification suites, with JSON, CSV or text output.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or spec error,
//! 3 numeric domain error.

pub mod spec;

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use frolic::group::{builtin_group, heisenberg_center_quotient, registry, GroupKind};
use frolic::lie::{
    bracket_coords, pushforward_bracket_check, rj_isomorphism_check, structure_constants, verify_comm_identity,
    verify_lie_axioms, verify_mixed_partial_identity, verify_product_iso, verify_saturation, verify_t2_corollary,
    verify_tangent_functoriality, verify_trivialization, verify_xi_section, AxiomTolerances, Report,
};
use frolic::smooth::random::trial_rng;
use frolic::space::{euclidean, BUILTIN_SPACES};
use frolic::tangent::TX_TOL;
use frolic::Error;
use serde::Serialize;
use serde_json::json;

use crate::spec::{SpaceKind, Target};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "FROLIC_SEED";

/// Antisymmetry bound asserted before a structure table is printed.
const TABLE_ANTISYMMETRY_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "frolic", version, about = "Lie brackets of Frölicher groups")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Comm,
    Mixed,
    Trivialization,
    ProductIso,
    Functorial,
    Rj,
    Saturation,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bracket of two Lie algebra elements given in chart coordinates.
    Bracket {
        /// Group spec: inline JSON or @path.
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Brackets of all chart basis pairs.
    StructureConstants {
        #[arg(long)]
        group: String,
    },
    /// Runs a verification suite and prints its report.
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Tolerance; the axioms suite uses per-axiom defaults when omitted.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Lists builtin groups and spaces.
    List,
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self { code, stdout, stderr: String::new() }
    }

    fn err(code: i32, msg: impl Into<String>) -> Self {
        Self { code, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }
}

/// Failure of a command before any report exists.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(error_code(&e), e.to_string())
    }
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure(EXIT_USAGE, msg)
    }
}

/// Exit code for a library error.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::ZeroValuePart
        | Error::Domain { .. }
        | Error::SingularValuePart { .. }
        | Error::ChartDomain(_)
        | Error::CurveOutsideSpace { .. }
        | Error::CurveEscapesSubset { .. } => EXIT_DOMAIN,
        Error::NotAHomomorphism { .. } => EXIT_FAIL,
        Error::InvalidParameter(_)
        | Error::ArityMismatch { .. }
        | Error::SpaceMismatch { .. }
        | Error::BasePointMismatch
        | Error::NotAProductSpace(_)
        | Error::NoChart(_) => EXIT_USAGE,
    }
}

/// Parses `args` (program name first) and runs the command. `env_seed` is
/// the value of [`SEED_ENV`], if set.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(code, text)
            };
        }
    };
    let result = match &cli.command {
        Command::Bracket { group, v, w } => cmd_bracket(group, v, w, cli.format),
        Command::StructureConstants { group } => cmd_structure_constants(group, cli.format),
        Command::Verify { group, suite, trials, tol, seed } => {
            let seed = match env_seed {
                Some(s) => match s.trim().parse::<u64>() {
                    Ok(s) => s,
                    Err(_) => return Outcome::err(EXIT_USAGE, format!("{SEED_ENV} must be an unsigned integer")),
                },
                None => *seed,
            };
            cmd_verify(group, *suite, *trials, *tol, seed, cli.format)
        }
        Command::List => Ok((EXIT_PASS, cmd_list(cli.format))),
    };
    match result {
        Ok((code, stdout)) => Outcome::ok(code, stdout),
        Err(Failure(code, msg)) => Outcome::err(code, msg),
    }
}

fn parse_coords(text: &str, dim: usize) -> Result<Vec<f64>, Failure> {
    let coords = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a real number")))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != dim {
        return Err(Failure(EXIT_USAGE, format!("expected {dim} coordinates, got {}", coords.len())));
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Failure(EXIT_USAGE, "coordinates must be finite".into()));
    }
    Ok(coords)
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable output");
    s.push('\n');
    s
}

fn cmd_bracket(group: &str, v: &str, w: &str, format: Format) -> Result<(i32, String), Failure> {
    let target = spec::load(group)?;
    let g = target.group()?;
    let a = parse_coords(v, g.lie_dim())?;
    let b = parse_coords(w, g.lie_dim())?;
    let out = bracket_coords(&g, &a, &b)?;
    let text = match format {
        Format::Json => json_line(&json!({ "group": g.name(), "v": a, "w": b, "bracket": out.coords })),
        Format::Csv => format!("{}\n", join(&out.coords)),
        Format::Text => format!("[v, w] = ({})\n", join(&out.coords)),
    };
    Ok((EXIT_PASS, text))
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_structure_constants(group: &str, format: Format) -> Result<(i32, String), Failure> {
    let g = spec::load(group)?.group()?;
    let table = structure_constants(&g)?;
    let anti = table.antisymmetry_deviation();
    if !(anti <= TABLE_ANTISYMMETRY_TOL) {
        return Err(Failure(EXIT_FAIL, format!("structure table not antisymmetric (deviation {anti:e})")));
    }
    let text = match format {
        Format::Json => json_line(&json!({ "group": g.name(), "dim": table.dim, "c": table.c })),
        Format::Csv => {
            let mut s = String::from("i,j,k,c\n");
            for (i, j, k, c) in table.nonzero() {
                let _ = writeln!(s, "{i},{j},{k},{c}");
            }
            s
        }
        Format::Text => {
            let mut s = format!("{} (dim {})\n", g.name(), table.dim);
            for i in 0..table.dim {
                for j in (i + 1)..table.dim {
                    let _ = writeln!(s, "[e{i}, e{j}] = ({})", join(&table.c[i][j]));
                }
            }
            s
        }
    };
    Ok((EXIT_PASS, text))
}

fn run_suite(target: &Target, suite: Suite, trials: usize, tol: Option<f64>, seed: u64) -> Result<Report, Failure> {
    let t = tol.unwrap_or(DEFAULT_TOL);
    let report = match suite {
        Suite::Axioms => {
            let tols = tol.map(AxiomTolerances::uniform).unwrap_or_default();
            let mut r = verify_lie_axioms(&target.group()?, trials, tols, seed)?.overall();
            r.group = target.label();
            r
        }
        Suite::Comm => verify_comm_identity(&target.group()?, trials, t, seed)?,
        Suite::Mixed => {
            let g = target.group()?;
            Report::combine(
                "mixed",
                &[
                    verify_mixed_partial_identity(&g, trials, t, seed)?,
                    verify_xi_section(&g, trials, t, seed)?,
                    verify_t2_corollary(&g, trials, t, seed)?,
                ],
            )
        }
        Suite::Trivialization => verify_trivialization(&target.group()?, trials, t, seed)?,
        Suite::ProductIso => {
            let (a, b) = match target {
                Target::Space(SpaceKind::Product(a, b)) => (a.space()?, b.space()?),
                other => (std::sync::Arc::new(euclidean(2)?), other.space()?),
            };
            verify_product_iso(&a, &b, trials, t, seed)?
        }
        Suite::Functorial => {
            let g = target.group()?;
            let mut parts = vec![verify_tangent_functoriality(&g, trials, t, seed)?];
            let h = g.random_element(&mut trial_rng(seed, u64::MAX))?;
            let mut conj = pushforward_bracket_check(&g, &g, &g.conjugation_map(&h)?, trials, t, seed)?;
            conj.suite = "functorial".into();
            parts.push(conj);
            if matches!(target, Target::Group(GroupKind::Heisenberg3)) {
                let quotient = builtin_group(&GroupKind::Additive(2))?;
                parts.push(pushforward_bracket_check(&g, &quotient, &heisenberg_center_quotient()?, trials, t, seed)?);
            }
            Report::combine("functorial", &parts)
        }
        Suite::Rj => {
            let Target::Group(GroupKind::RPower(config)) = target else {
                return Err(Failure(EXIT_USAGE, "the rj suite requires an r_power group".into()));
            };
            rj_isomorphism_check(config, trials, t, seed)?.overall
        }
        Suite::Saturation => verify_saturation(&*target.space()?, tol.unwrap_or(TX_TOL), seed)?,
    };
    Ok(report)
}

fn cmd_verify(
    group: &str,
    suite: Suite,
    trials: usize,
    tol: Option<f64>,
    seed: u64,
    format: Format,
) -> Result<(i32, String), Failure> {
    if trials == 0 {
        return Err(Failure(EXIT_USAGE, "--trials must be positive".into()));
    }
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure(EXIT_USAGE, "--tol must be a positive real".into()));
        }
    }
    let target = spec::load(group)?;
    let report = run_suite(&target, suite, trials, tol, seed)?;
    let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
    let text = match format {
        Format::Json => json_line(&report),
        Format::Csv => format!(
            "suite,group,trials,worst_abs_dev,pass,seed\n{},{},{},{:e},{},{}\n",
            report.suite, report.group, report.trials, report.worst_abs_dev, report.pass, report.seed
        ),
        Format::Text => format!(
            "{} on {}: {} ({} trials, worst deviation {:e}, seed {})\n",
            report.suite,
            report.group,
            if report.pass { "PASS" } else { "FAIL" },
            report.trials,
            report.worst_abs_dev,
            report.seed
        ),
    };
    Ok((code, text))
}

fn cmd_list(format: Format) -> String {
    let groups = registry();
    match format {
        Format::Json => json_line(&json!({ "groups": groups, "spaces": BUILTIN_SPACES })),
        Format::Csv => {
            let mut s = String::from("kind,params,lie_dim\n");
            for e in &groups {
                let _ = writeln!(s, "{},\"{}\",{}", e.kind, e.params, e.lie_dim);
            }
            s
        }
        Format::Text => {
            let mut s = String::from("groups:\n");
            for e in &groups {
                let _ = writeln!(s, "  {:<12} lie_dim {:<24} {}", e.kind, e.lie_dim, e.params);
            }
            let _ = writeln!(s, "spaces:\n  {}", BUILTIN_SPACES.join(", "));
            s
        }
    }
}
