use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use opcat::cones::Cone;
use opcat::functors::{
    DualToFh, DualToRight, FhToDual, FhToLeft, Functor, LeftToFh, LeftToRight, RightToDual,
    RightToLeft,
};
use opcat::ideal::{Category, Morphism};
use opcat::io::{self, AnyMorphism, ConeFile, MatrixFile, MorphismFile};
use opcat::suites::{self, SuiteConfig, SuiteName};
use opcat::{Error, Field, Mat, Tolerances};

#[derive(Parser)]
#[command(name = "opcat", version, about = "Verify normal categories of operator ideals on K^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scalar field; inputs are promoted to it
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,

    /// Ambient dimension n of H = K^n
    #[arg(long, global = true)]
    dim: Option<usize>,

    /// Master seed for sampled suites
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Samples per suite
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,

    /// Equality tolerance eps_eq
    #[arg(long, global = true)]
    eps: Option<f64>,

    /// Input files
    #[arg(long = "in", global = true, num_args = 1..)]
    inputs: Vec<PathBuf>,

    /// Write the JSON result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a JSON report
    #[command(name = "run_suite", alias = "run-suite")]
    RunSuite {
        /// Suite to run (repeatable, or comma separated)
        #[arg(long = "suite", value_delimiter = ',')]
        suites: Vec<String>,
        /// Run every suite (the default when no suite is named)
        #[arg(long)]
        all: bool,
        /// Truncation sizes for l2-profile
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
    },
    /// Normal factorization q·u·j of a morphism
    Factorize,
    /// Compose two morphisms, first then second
    Compose,
    /// Norm of a matrix, morphism or cone
    Norm,
    /// Product of two cones
    #[command(name = "cone-product")]
    ConeProduct,
    /// Apply one of the category isomorphisms to a morphism
    #[command(name = "functor-apply")]
    FunctorApply {
        /// l-to-fh, fh-to-l, fh-to-dual, dual-to-fh, r-to-dual, dual-to-r, l-to-r, r-to-l
        #[arg(long)]
        functor: String,
    },
    /// Pseudoinverse T⁺ with T·T⁺·T = T
    #[command(name = "regularity-witness")]
    RegularityWitness,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse::<Field>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn tolerances(common: &Common) -> CliResult<Tolerances> {
    let default = Tolerances::default();
    match common.eps {
        None => Ok(default),
        Some(eps) => Tolerances::new(default.eps_rank.min(eps / 10.0), eps)
            .map_err(|e| Failure::Usage(e.to_string())),
    }
}

/// Returns whether the command's own checks passed.
fn run(cli: &Cli) -> CliResult<bool> {
    let common = &cli.common;
    if common.dim == Some(0) {
        return Err(Failure::Usage("--dim must be at least 1".into()));
    }
    let tol = tolerances(common)?;
    match &cli.command {
        Command::RunSuite { suites, all, dims } => run_suites(common, tol, suites, *all, dims),
        Command::Factorize => {
            let f = load_morphism(common, 0, &tol)?;
            let (q, u, j, residual) = factorize(&f, &tol)?;
            emit(
                common,
                &json!({ "q": q, "u": u, "j": j, "reconstruction_residual": residual }),
            )?;
            Ok(residual <= tol.eps_eq)
        }
        Command::Compose => {
            expect_inputs(common, 2)?;
            let f = load_morphism(common, 0, &tol)?;
            let g = load_morphism(common, 1, &tol)?;
            emit(common, &json!(f.compose(&g, &tol)?.to_file()))?;
            Ok(true)
        }
        Command::Norm => {
            expect_inputs(common, 1)?;
            let value = read_value(common, 0)?;
            let norm = if value.get("kind").is_some() {
                load_morphism(common, 0, &tol)?.norm()
            } else if value.get("flavor").is_some() {
                load_cone(common, 0, &tol)?.generator().operator_norm()
            } else {
                load_matrix(common, 0)?.operator_norm()
            };
            emit(common, &json!({ "norm": norm }))?;
            Ok(true)
        }
        Command::ConeProduct => {
            expect_inputs(common, 2)?;
            let c1 = load_cone(common, 0, &tol)?;
            let c2 = load_cone(common, 1, &tol)?;
            let product = c1.product(&c2, &tol)?;
            emit(common, &json!(ConeFile::from_cone(&product)))?;
            Ok(true)
        }
        Command::FunctorApply { functor } => {
            expect_inputs(common, 1)?;
            let f = load_morphism(common, 0, &tol)?;
            let image = apply_functor(functor, &f, &tol)?;
            emit(common, &json!(image.to_file()))?;
            Ok(true)
        }
        Command::RegularityWitness => {
            expect_inputs(common, 1)?;
            let t = load_matrix(common, 0)?;
            if !t.is_square() {
                return Err(Failure::Domain(format!(
                    "operator must be square, got {}x{}",
                    t.rows(),
                    t.cols()
                )));
            }
            let tp = t.pseudoinverse(&tol)?;
            let residual = opcat::relative_residual(&(&(&t * &tp) * &t), &t);
            emit(
                common,
                &json!({ "pseudoinverse": MatrixFile::from(&tp), "residual": residual }),
            )?;
            Ok(residual <= tol.eps_eq)
        }
    }
}

fn run_suites(
    common: &Common,
    tolerances: Tolerances,
    names: &[String],
    all: bool,
    dims: &[usize],
) -> CliResult<bool> {
    let defaults = SuiteConfig::default();
    let suites = if all || names.is_empty() {
        SuiteName::ALL.to_vec()
    } else {
        names
            .iter()
            .map(|n| n.parse::<SuiteName>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Usage(e.to_string()))?
    };
    let cfg = SuiteConfig {
        field: common.field.unwrap_or(defaults.field),
        ambient_dim: common.dim.unwrap_or(defaults.ambient_dim),
        samples: common.samples,
        seed: common.seed,
        tolerances,
        suites,
        dims: if dims.is_empty() { defaults.dims } else { dims.to_vec() },
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let report = suites::run(&cfg)?;
    for s in &report.suites {
        eprintln!(
            "{} {:<22} samples={:<4} max_residual={:.3e} time={:.0}ms",
            if s.passed { "PASS" } else { "FAIL" },
            s.name.as_str(),
            s.samples,
            s.max_residual,
            s.wall_time_ms
        );
    }
    emit(common, &serde_json::to_value(&report).map_err(Error::from)?)?;
    Ok(report.passed)
}

fn factorize(f: &AnyMorphism, tol: &Tolerances) -> CliResult<(Value, Value, Value, f64)> {
    fn parts<C: Category>(f: &Morphism<C>, tol: &Tolerances) -> opcat::Result<(Value, Value, Value, f64)> {
        let fac = f.normal_factorize(tol)?;
        let residual = fac.reconstruct(tol)?.residual(f, tol);
        let file = |m: &Morphism<C>| json!(io::morphism_file(m));
        Ok((file(&fac.q), file(&fac.u), file(&fac.j), residual))
    }
    Ok(match f {
        AnyMorphism::Left(f) => parts(f, tol)?,
        AnyMorphism::Right(f) => parts(f, tol)?,
        AnyMorphism::Fh(f) => parts(f, tol)?,
        AnyMorphism::Dual(f) => parts(f, tol)?,
    })
}

fn apply_functor(name: &str, f: &AnyMorphism, tol: &Tolerances) -> CliResult<AnyMorphism> {
    let mismatch = || {
        Failure::Domain(format!(
            "functor {name} does not accept a {} morphism",
            f.kind()
        ))
    };
    Ok(match (name, f) {
        (LeftToFh::NAME, AnyMorphism::Left(f)) => AnyMorphism::Fh(LeftToFh.morphism(f, tol)?),
        (FhToLeft::NAME, AnyMorphism::Fh(f)) => AnyMorphism::Left(FhToLeft.morphism(f, tol)?),
        (FhToDual::NAME, AnyMorphism::Fh(f)) => AnyMorphism::Dual(FhToDual.morphism(f, tol)?),
        (DualToFh::NAME, AnyMorphism::Dual(f)) => AnyMorphism::Fh(DualToFh.morphism(f, tol)?),
        (RightToDual::NAME, AnyMorphism::Right(f)) => {
            AnyMorphism::Dual(RightToDual.morphism(f, tol)?)
        }
        (DualToRight::NAME, AnyMorphism::Dual(f)) => {
            AnyMorphism::Right(DualToRight.morphism(f, tol)?)
        }
        (LeftToRight::NAME, AnyMorphism::Left(f)) => {
            AnyMorphism::Right(LeftToRight.morphism(f, tol)?)
        }
        (RightToLeft::NAME, AnyMorphism::Right(f)) => {
            AnyMorphism::Left(RightToLeft.morphism(f, tol)?)
        }
        (
            LeftToFh::NAME | FhToLeft::NAME | FhToDual::NAME | DualToFh::NAME | RightToDual::NAME
            | DualToRight::NAME | LeftToRight::NAME | RightToLeft::NAME,
            _,
        ) => return Err(mismatch()),
        _ => return Err(Failure::Usage(format!("unknown functor '{name}'"))),
    })
}

fn expect_inputs(common: &Common, count: usize) -> CliResult<()> {
    if common.inputs.len() != count {
        return Err(Failure::Usage(format!(
            "expected {count} --in file(s), got {}",
            common.inputs.len()
        )));
    }
    Ok(())
}

fn read_value(common: &Common, idx: usize) -> CliResult<Value> {
    let path = common
        .inputs
        .get(idx)
        .ok_or_else(|| Failure::Usage(format!("missing --in file #{}", idx + 1)))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{} is not valid JSON: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(common: &Common, idx: usize) -> CliResult<T> {
    let value = read_value(common, idx)?;
    serde_json::from_value(value).map_err(|e| {
        Failure::Usage(format!("{}: {e}", common.inputs[idx].display()))
    })
}

/// Apply `--field` and `--dim` to a matrix file.
fn conform(common: &Common, m: &mut MatrixFile, square: bool) -> CliResult<()> {
    match (common.field, m.field) {
        (Some(Field::Complex), _) => m.field = Field::Complex,
        (Some(Field::Real), Field::Complex) => {
            return Err(Failure::Usage(
                "--field real given for a complex input".into(),
            ))
        }
        _ => {}
    }
    if let Some(n) = common.dim {
        if m.rows != n || (square && m.cols != n) {
            return Err(Failure::Usage(format!(
                "input is {}x{}, but --dim is {n}",
                m.rows, m.cols
            )));
        }
    }
    Ok(())
}

fn load_matrix(common: &Common, idx: usize) -> CliResult<Mat> {
    let mut m: MatrixFile = parse(common, idx)?;
    conform(common, &mut m, false)?;
    Ok(m.to_mat()?)
}

fn load_morphism(common: &Common, idx: usize, tol: &Tolerances) -> CliResult<AnyMorphism> {
    expect_at_least(common, idx + 1)?;
    let mut f: MorphismFile = parse(common, idx)?;
    conform(common, &mut f.src, false)?;
    conform(common, &mut f.t, true)?;
    conform(common, &mut f.dst, false)?;
    Ok(f.to_morphism(tol)?)
}

fn load_cone(common: &Common, idx: usize, tol: &Tolerances) -> CliResult<Cone> {
    let mut c: ConeFile = parse(common, idx)?;
    conform(common, &mut c.gen, true)?;
    Ok(c.to_cone(tol)?)
}

fn expect_at_least(common: &Common, count: usize) -> CliResult<()> {
    if common.inputs.len() < count {
        return Err(Failure::Usage(format!(
            "expected at least {count} --in file(s), got {}",
            common.inputs.len()
        )));
    }
    Ok(())
}

fn emit(common: &Common, value: &Value) -> CliResult<()> {
    let text = io::to_json_pretty(value)?;
    match &common.out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}
