//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check or certificate failed, 2 bad input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lipfree::free_space::{certified_norm, example_molecule, EXAMPLE_MAX_N};
use lipfree::io::{self, CertificateFile, SpaceFile};
use lipfree::lab::{self, gen, Check, CheckResult, LabConfig};
use lipfree::{Error, LipFunction, MetricSpace, Molecule, Scalar, Tolerance};

#[derive(Parser)]
#[command(
    name = "lipfree",
    version,
    about = "Lipschitz and Lipschitz-free spaces over finite metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Compute in exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Relative tolerance for floating comparisons.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a space file satisfies the metric axioms.
    Validate {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Lipschitz number, sup norm and Lip norm of a function.
    Lipnorm {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Free-space norm of a molecule.
    Aenorm {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        molecule: PathBuf,
        /// Run both solvers and emit the cross-checked certificates.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Pairing of a molecule with a function.
    Pair {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        molecule: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite, or `all` of them.
    Verify {
        suite: String,
        #[command(flatten)]
        lab: LabArgs,
    },
    /// The alternating-molecule growth table.
    Example25 {
        #[command(flatten)]
        lab: LabArgs,
    },
    /// Write a space file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output path; standard output when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LabArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum GenKind {
    /// Random pointed space.
    Random {
        #[arg(long)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Line grid `0, spacing, ..., length` based at 0.
    Grid {
        #[arg(long)]
        length: f64,
        #[arg(long)]
        spacing: f64,
    },
    /// The dyadic points of [0,1] plus a base point at distance 1.
    AugmentedInterval {
        #[arg(long)]
        n: usize,
    },
}

/// A failed run: bad input (exit 2) or a failed check (exit 1).
enum Failure {
    Input(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn tolerance(common: &Common) -> Result<Tolerance, Error> {
    let mut tol = Tolerance::default();
    if let Some(rel) = common.tol {
        if !(rel > 0.0) || !rel.is_finite() {
            return Err(Error::NonPositive {
                what: "tolerance",
                value: rel,
            });
        }
        tol.rel = rel;
    }
    Ok(tol)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn load(path: &Path) -> Result<Arc<MetricSpace>, Error> {
    Ok(Arc::new(io::load_space(path)?))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { space, format } => validate(&space, format),
        Command::Lipnorm {
            space,
            function,
            common,
        } => {
            let x = load(&space)?;
            let f = io::load_function(&function, &x)?;
            let tol = tolerance(&common)?;
            if common.exact {
                lipnorm(&f.to_exact(&Arc::new(x.to_exact()))?, &tol, common.format)
            } else {
                lipnorm(&f, &tol, common.format)
            }
        }
        Command::Aenorm {
            space,
            molecule,
            certify,
            common,
        } => {
            let x = load(&space)?;
            let m = io::load_molecule(&molecule, &x)?;
            let tol = tolerance(&common)?;
            if common.exact {
                aenorm(
                    &m.to_exact(&Arc::new(x.to_exact()))?,
                    certify,
                    &tol,
                    common.format,
                )
            } else {
                aenorm(&m, certify, &tol, common.format)
            }
        }
        Command::Pair {
            space,
            function,
            molecule,
            common,
        } => {
            let x = load(&space)?;
            let f = io::load_function(&function, &x)?;
            let m = io::load_molecule(&molecule, &x)?;
            let (value, exact) = if common.exact {
                let xe = Arc::new(x.to_exact());
                let v = m.to_exact(&xe)?.pairing(&f.to_exact(&xe)?)?;
                (v.as_f64(), Some(v.to_string()))
            } else {
                (m.pairing(&f)?, None)
            };
            match common.format {
                Format::Text => println!(
                    "pairing {}",
                    exact.clone().unwrap_or_else(|| value.to_string())
                ),
                Format::Json => {
                    print_json(&serde_json::json!({ "pairing": value, "exact": exact }))?
                }
            }
            Ok(())
        }
        Command::Verify { suite, lab } => {
            let checks = if suite == "all" {
                Check::ALL.to_vec()
            } else {
                vec![suite.parse::<Check>()?]
            };
            verify(&checks, &lab, suite == "all")
        }
        Command::Example25 { lab } => verify(&[Check::Example25], &lab, false),
        Command::Gen { kind, out } => generate(kind, out.as_deref()),
    }
}

fn validate(path: &Path, format: Format) -> Outcome {
    let file: SpaceFile = io::read_json(path)?;
    match file.into_space() {
        Ok(x) => {
            let base = x.base().map(|b| x.id(b).to_string());
            match format {
                Format::Text => {
                    println!(
                        "valid metric space: {} points, diameter {}",
                        x.len(),
                        x.diameter()
                    );
                    println!("base point: {}", base.as_deref().unwrap_or("none"));
                }
                Format::Json => print_json(&serde_json::json!({
                    "valid": true, "points": x.len(), "base": base, "diameter": x.diameter(),
                }))?,
            }
            Ok(())
        }
        Err(Error::Metric(v)) => {
            if format == Format::Json {
                print_json(&serde_json::json!({ "valid": false, "violation": v.to_string() }))?;
            }
            Err(Failure::Check(v.to_string()))
        }
        Err(e) => Err(Failure::Input(e)),
    }
}

fn lipnorm<S: Scalar>(f: &LipFunction<S>, tol: &Tolerance, format: Format) -> Outcome {
    let l = f.lipschitz_number();
    let sup = f.sup_norm();
    let norm = f.lip_norm();
    let lip0 = f.space().is_pointed().then(|| f.in_lip0(tol)).transpose()?;
    match format {
        Format::Text => {
            println!("lipschitz_number {l}");
            println!("sup_norm {sup}");
            println!("lip_norm {norm}");
            if let Some(z) = lip0 {
                println!("vanishes_at_base {z}");
            }
        }
        Format::Json => print_json(&serde_json::json!({
            "lipschitz_number": l.as_f64(), "sup_norm": sup.as_f64(), "lip_norm": norm.as_f64(),
            "vanishes_at_base": lip0,
        }))?,
    }
    Ok(())
}

fn aenorm<S: Scalar>(m: &Molecule<S>, certify: bool, tol: &Tolerance, format: Format) -> Outcome {
    if !certify {
        let value = lipfree::ae_norm(m)?;
        match format {
            Format::Text => println!("ae_norm {value}"),
            Format::Json => print_json(&serde_json::json!({ "ae_norm": value.as_f64() }))?,
        }
        return Ok(());
    }
    let norm = certified_norm(m, tol, &Tolerance::DUALITY)?;
    let file = CertificateFile::from_norm(&norm);
    match format {
        Format::Text => {
            println!("primal {}", norm.primal);
            println!("dual {}", norm.dual);
            println!("gap {}", norm.primal.clone() - norm.dual.clone());
            println!(
                "certificates {}",
                if file.passed { "verified" } else { "FAILED" }
            );
            println!("witness:");
            for (id, v) in &file.witness {
                println!("  {id} {v}");
            }
            println!("plan:");
            for (from, to, flow) in &file.plan {
                println!("  {from} -> {to} {flow}");
            }
        }
        Format::Json => print_json(&file)?,
    }
    if file.passed {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "certificate checks failed: {}",
            file.failed_checks.join(", ")
        )))
    }
}

fn verify(checks: &[Check], args: &LabArgs, as_list: bool) -> Outcome {
    if args.trials == Some(0) {
        return Err(Failure::Input(Error::NonPositive {
            what: "trials",
            value: 0.0,
        }));
    }
    if args.n_max > EXAMPLE_MAX_N {
        return Err(Failure::Input(Error::ExampleOutOfRange(args.n_max)));
    }
    let cfg = LabConfig {
        seed: args.seed,
        trials: args.trials,
        tol: tolerance(&args.common)?,
        exact: args.common.exact,
        n_max: args.n_max,
        ..LabConfig::default()
    };
    let results = lab::run_many(checks, &cfg)?;
    match args.common.format {
        Format::Json if as_list => print_json(&results)?,
        Format::Json => print_json(&results[0])?,
        Format::Text => results.iter().for_each(print_result),
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.check.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join(", ")))
    }
}

fn print_result(r: &CheckResult) {
    let status = if r.passed { "PASS" } else { "FAIL" };
    println!(
        "{status} {:<17} trials={:<8} max_residual={:e}",
        r.check, r.trials, r.max_residual
    );
    if let Some(table) = &r.table {
        println!(
            "  {:>3} {:>20} {:>20} {:>6} {:>6} {:>12}",
            "N", "ae_norm", "(2/3)(1-4^-(N+1))", "<m+,1>", "<m,f>", "ratio"
        );
        for row in table {
            println!(
                "  {:>3} {:>20.17} {:>20.17} {:>6} {:>6} {:>12.6}",
                row.n,
                row.ae_norm,
                row.closed_form,
                row.positive_mass,
                row.witness_pairing,
                row.ratio
            );
        }
    }
    if let Some(ce) = &r.counterexample {
        println!(
            "  counterexample: {}",
            serde_json::to_string(ce).unwrap_or_default()
        );
    }
}

fn generate(kind: GenKind, out: Option<&Path>) -> Outcome {
    let space = match kind {
        GenKind::Random { points, seed } => {
            if points == 0 {
                return Err(Failure::Input(Error::EmptySpace));
            }
            if points > lipfree::metric::DEFAULT_MAX_POINTS {
                return Err(Failure::Input(Error::TooManyPoints {
                    count: points,
                    cap: lipfree::metric::DEFAULT_MAX_POINTS,
                }));
            }
            gen::random_space(&mut gen::suite_rng(seed, 0), points..=points, true)
        }
        GenKind::Grid { length, spacing } => MetricSpace::interval_grid(length, spacing)?,
        GenKind::AugmentedInterval { n } => example_molecule(n)?.0.as_ref().clone(),
    };
    let file = SpaceFile::from_space(&space);
    match out {
        Some(path) => io::write_json(path, &file)?,
        None => print_json(&file)?,
    }
    Ok(())
}
