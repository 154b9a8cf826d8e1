//! `nnpres` command-line front end.
//!
//! Exit status: 0 on a pass or a successful evaluation, 2 when a check
//! fails with a witness, 1 on usage or validation errors.

mod input;
mod render;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nnpres::checkers::{self, DEFAULT_BUDGET, DEFAULT_TOL};
use nnpres::matfun::{self, Matrix};
use nnpres::niep::{self, Screen};
use nnpres::spectra::{self, structured_spectrum};
use nnpres::{divided_difference, CheckReport, MatrixClass, SamplerConfig, SpectrumTuple, Structure, Verdict};

#[derive(Parser, Debug)]
#[command(name = "nnpres", version, about = "Matrix functions and nonnegativity preservation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Human-readable output with aligned 10-digit matrices.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate f(A).
    Apply {
        #[command(flatten)]
        func: FuncArg,
        /// Matrix JSON file (or inline JSON).
        #[arg(long)]
        matrix: String,
        #[arg(long, value_enum, default_value_t = Method::Taylor)]
        method: Method,
        /// Annihilating polynomial for `--method companion`, ascending
        /// comma-separated coefficients.
        #[arg(long, allow_hyphen_values = true)]
        minpoly: Option<String>,
    },
    /// Run a preservation criterion.
    Check {
        #[command(flatten)]
        func: FuncArg,
        #[arg(long, value_enum)]
        class: CheckClass,
        /// Matrix order (divdiff, circulant, sym-parity, newnc).
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[command(flatten)]
        sampler: SamplerArgs,
    },
    /// Seeded search for a nonnegative matrix with a negative f(A) entry.
    Falsify {
        #[command(flatten)]
        func: FuncArg,
        #[arg(long, value_parser = parse_class)]
        class: MatrixClass,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, env = "NNPRES_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Screen a candidate spectrum.
    Niep {
        /// Comma-separated reals, or a JSON file `{"tuple": [...]}`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "matrix", required_unless_present = "matrix")]
        tuple: Option<String>,
        /// Screen the spectrum of this matrix instead.
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "moments,jll,newton", value_parser = parse_screen)]
        checks: Vec<Screen>,
        /// Shift r for Newton's inequalities; defaults to the spectral radius.
        #[arg(long)]
        shift: Option<f64>,
    },
    /// Divided difference f[x_1, ..., x_k].
    Divdiff {
        #[command(flatten)]
        func: FuncArg,
        /// Comma-separated nodes; repeats are confluent.
        #[arg(long, allow_hyphen_values = true)]
        nodes: String,
    },
}

#[derive(Args, Debug)]
struct FuncArg {
    /// Function JSON file (or inline JSON).
    #[arg(long)]
    func: String,
}

#[derive(Args, Debug)]
struct SamplerArgs {
    /// Random samples per scanned condition.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, env = "NNPRES_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
}

impl SamplerArgs {
    fn config(&self) -> Result<SamplerConfig> {
        let mut cfg = SamplerConfig::with_seed(self.seed);
        if let Some(s) = self.samples {
            cfg.random_samples = s;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(x) = self.grid_max {
            cfg.grid_max = x;
        }
        if let Some(g) = self.grid_points {
            cfg.grid_points = g;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Taylor,
    Newton,
    Triangular,
    Circulant,
    Block,
    Companion,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckClass {
    F1,
    Divdiff,
    Circulant,
    F2,
    SymParity,
    Newnc,
}

fn parse_class(s: &str) -> Result<MatrixClass, String> {
    MatrixClass::parse(s).ok_or_else(|| format!("unknown class `{s}` (general, triangular, circulant, symmetric)"))
}

fn parse_screen(s: &str) -> Result<Screen, String> {
    Screen::parse(s.trim()).ok_or_else(|| format!("unknown check `{s}` (moments, jll, newton)"))
}

/// Output of a command plus whether it counts as a failure.
struct Outcome {
    report: serde_json::Value,
    failed: bool,
}

impl Outcome {
    fn ok(report: impl Serialize) -> Result<Self> {
        Ok(Outcome {
            report: serde_json::to_value(report)?,
            failed: false,
        })
    }

    fn check(report: CheckReport) -> Result<Self> {
        let failed = report.verdict == Verdict::Fail;
        Ok(Outcome {
            report: serde_json::to_value(report)?,
            failed,
        })
    }
}

fn apply(f: &nnpres::FunctionSpec, a: &Matrix, method: Method, minpoly: Option<&str>) -> Result<Matrix> {
    Ok(match method {
        Method::Taylor => matfun::apply_taylor(f, a)?,
        Method::Newton => {
            let spectrum = structured_spectrum(a)?
                .ok_or_else(|| anyhow!("newton needs a symmetric, triangular or circulant matrix, got {}", a.structure()))?;
            matfun::apply_newton(f, a, &spectrum)?
        }
        Method::Triangular => matfun::apply_triangular_explicit(f, a)?,
        Method::Circulant => matfun::apply_circulant_matrix(f, a)?,
        Method::Block => matfun::apply_block_triangular(f, a)?,
        Method::Companion => {
            let p = match minpoly {
                Some(s) => input::parse_reals(s).context("--minpoly")?,
                None => matfun::characteristic_polynomial(a)?,
            };
            matfun::apply_companion(f, a, &p)?
        }
    })
}

fn niep_tuple(tuple: Option<&str>, matrix: Option<&str>) -> Result<(SpectrumTuple, Option<f64>)> {
    if let Some(t) = tuple {
        return Ok((input::load_tuple(t)?, None));
    }
    let a = input::load_matrix(matrix.expect("clap requires --tuple or --matrix"))?;
    let r = spectra::spectral_radius(&a)?;
    let t = match a.structure() {
        Structure::Circulant => SpectrumTuple::from_circulant_row(a.row(0))?,
        _ => {
            let s = structured_spectrum(&a)?
                .ok_or_else(|| anyhow!("no spectrum route for a {} matrix; declare its structure", a.structure()))?;
            SpectrumTuple::real(&s.real_values()?)?
        }
    };
    Ok((t, Some(r)))
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Apply {
            func,
            matrix,
            method,
            minpoly,
        } => {
            let f = input::load_function(&func.func)?;
            let a = input::load_matrix(matrix)?;
            Outcome::ok(apply(&f, &a, *method, minpoly.as_deref())?)
        }
        Command::Check {
            func,
            class,
            order,
            sampler,
        } => {
            let f = input::load_function(&func.func)?;
            let cfg = sampler.config()?;
            let report = match class {
                CheckClass::F1 => checkers::check_f1(&f, &cfg)?,
                CheckClass::Divdiff => checkers::check_divdiff_criterion(&f, *order, &cfg)?,
                CheckClass::Circulant => checkers::check_circulant_preservation(&f, *order, &cfg)?,
                CheckClass::F2 => checkers::check_f2(&f, &cfg)?,
                CheckClass::SymParity => checkers::check_sym_parity(&f, *order, &cfg)?,
                CheckClass::Newnc => checkers::check_newnc(&f, *order, &cfg)?,
            };
            Outcome::check(report)
        }
        Command::Falsify {
            func,
            class,
            order,
            budget,
            seed,
            tol,
        } => {
            let f = input::load_function(&func.func)?;
            Outcome::check(checkers::falsify_with_tol(&f, *class, *order, *budget, *seed, *tol)?)
        }
        Command::Niep {
            tuple,
            matrix,
            checks,
            shift,
        } => {
            if checks.is_empty() {
                bail!("--checks is empty");
            }
            let (t, radius) = niep_tuple(tuple.as_deref(), matrix.as_deref())?;
            let report = niep::screen(&t, checks, shift.or(radius))?;
            let failed = !report.passed;
            Ok(Outcome {
                report: serde_json::to_value(report)?,
                failed,
            })
        }
        Command::Divdiff { func, nodes } => {
            let f = input::load_function(&func.func)?;
            let nodes = input::parse_reals(nodes).context("--nodes")?;
            Outcome::ok(divided_difference(&f, &nodes)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.pretty {
                print!("{}", render::pretty(&out.report));
            } else {
                println!("{}", out.report);
            }
            if out.failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
