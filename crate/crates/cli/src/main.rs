//! `slicequat` command-line driver.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 config or parse error,
//! 3 method misuse.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use slicequat::deform::{dimension_scan, FamilyParams};
use slicequat::report::{aut_csv, quat_field, scan_csv, to_canonical_json};
use slicequat::stem::{control_stem, random_monomial, stem_check, StemCheck, StemDomain, StemOracle};
use slicequat::suite::{default_grid, run_suite, suite_csv};
use slicequat::{aut, sampling, Error, Hopf, HopfCase, HopfParams, Quaternion, Term};

use config::{parse_quaternion, Common, CommonArgs, ConfigFile, Format, MethodArg, ParamsPatch};

#[derive(Debug, Parser)]
#[command(name = "slicequat", version)]
#[command(about = "Quaternionic Hopf surfaces: classification, automorphism dimensions, deformation scans")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Default, clap::Args)]
struct ParamArgs {
    #[arg(long)]
    p: Option<u32>,

    /// Quaternion: "0.5" or "w,x,y,z"
    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
    alpha: Option<Quaternion>,

    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
    beta: Option<Quaternion>,

    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
    lambda: Option<Quaternion>,
}

impl ParamArgs {
    fn patch(&self) -> ParamsPatch {
        ParamsPatch {
            p: self.p,
            alpha: self.alpha,
            beta: self.beta,
            lambda: self.lambda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    A1ToA3,
    A21ToB,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify Hopf parameters (exit 2 when invalid)
    Classify {
        #[command(flatten)]
        params: ParamArgs,
    },

    /// Numerical dimension of the automorphism group
    Autdim {
        #[command(flatten)]
        params: ParamArgs,

        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },

    /// Run the verification grid (default: the automorphism dimension table)
    VerifyTheorems {
        /// JSON array of {name, params, expected, method?} rows
        #[arg(long)]
        grid: Option<PathBuf>,

        /// Seeds for the stability re-runs [default: seed, seed + 1]
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
    },

    /// Automorphism dimensions along a deformation family
    ScanFamily {
        #[arg(long, value_enum)]
        kind: Option<KindArg>,

        /// Kind a1-to-a3 [default: 0.5]
        #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
        alpha: Option<Quaternion>,

        /// Kind a21-to-b [default: 2]
        #[arg(long)]
        p: Option<u32>,

        /// Kind a21-to-b, real [default: 0.5]
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,

        /// Fibre parameter; repeatable [default: 0 and j]
        #[arg(long = "lambda", value_parser = parse_quaternion, allow_hyphen_values = true)]
        lambdas: Vec<Quaternion>,
    },

    /// Search k with f^k(a) = b
    Orbit {
        #[command(flatten)]
        params: ParamArgs,

        #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
        z1: Quaternion,

        #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
        w1: Quaternion,

        #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
        z2: Quaternion,

        #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
        w2: Quaternion,

        #[arg(long, default_value_t = 20)]
        k_max: u32,

        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },

    /// Holomorphy and parity residuals of random monomial stems
    StemCheck {
        #[arg(long, default_value_t = 10)]
        count: usize,

        /// Points per stem
        #[arg(long, default_value_t = 100)]
        points: usize,

        #[arg(long, default_value_t = 1e-4)]
        h_step: f64,
    },
}

enum Failure {
    Verification,
    Config(String),
    Misuse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonlinearSystem(_) => Failure::Misuse(e.to_string()),
            e => Failure::Config(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Misuse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let file = ConfigFile::load(cli.common.config.as_deref()).map_err(Failure::Config)?;
    let common = cli.common.resolve(&file).map_err(Failure::Config)?;
    match cli.command {
        Command::Classify { params } => classify(&common, params.patch().or(file.params).finish()),
        Command::Autdim { params, method } => {
            let params = params.patch().or(file.params).finish();
            let method = method.or(file.method).unwrap_or(MethodArg::Auto);
            autdim(&common, params, method)
        }
        Command::VerifyTheorems { grid, seeds } => {
            let grid = match grid {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
                    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
                }
                None => file.grid.clone().unwrap_or_else(default_grid),
            };
            let seeds = seeds
                .or(file.seeds.clone())
                .unwrap_or_else(|| vec![common.seed, common.seed.wrapping_add(1)]);
            verify(&common, &grid, &seeds)
        }
        Command::ScanFamily { kind, alpha, p, beta, lambdas } => {
            let family = match (kind, file.family) {
                (Some(KindArg::A1ToA3), _) => FamilyParams::A1ToA3 {
                    alpha: alpha.unwrap_or(Quaternion::real(0.5)),
                },
                (Some(KindArg::A21ToB), _) => FamilyParams::A21ToB {
                    p: p.unwrap_or(2),
                    beta: beta.unwrap_or(0.5),
                },
                (None, Some(FamilyParams::A1ToA3 { alpha: a })) => FamilyParams::A1ToA3 { alpha: alpha.unwrap_or(a) },
                (None, Some(FamilyParams::A21ToB { p: fp, beta: fb })) => FamilyParams::A21ToB {
                    p: p.unwrap_or(fp),
                    beta: beta.unwrap_or(fb),
                },
                (None, None) => FamilyParams::A21ToB {
                    p: p.unwrap_or(2),
                    beta: beta.unwrap_or(0.5),
                },
            };
            let lambdas = if lambdas.is_empty() {
                file.lambdas.clone().unwrap_or_else(|| vec![Quaternion::ZERO, Quaternion::J])
            } else {
                lambdas
            };
            if lambdas.is_empty() {
                return Err(Failure::Config("the λ list is empty".into()));
            }
            scan(&common, &family, &lambdas)
        }
        Command::Orbit { params, z1, w1, z2, w2, k_max, tol } => {
            orbit(&common, params.patch().or(file.params).finish(), (z1, w1), (z2, w2), k_max, tol)
        }
        Command::StemCheck { count, points, h_step } => stems(&common, count, points, h_step),
    }
}

fn emit(common: &Common, body: &str) -> Outcome {
    match &common.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Config(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Config(e.to_string()))
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    Ok(to_canonical_json(value)?)
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    params: HopfParams,
    case: String,
    valid: bool,
    reason: Option<String>,
    constraint_residual: f64,
}

fn classify(common: &Common, params: HopfParams) -> Outcome {
    let case = params.classify(&common.aut.tol);
    let reason = match &case {
        HopfCase::Invalid(r) => Some(r.clone()),
        _ => None,
    };
    let report = ClassifyReport {
        params,
        case: case.label().to_owned(),
        valid: case.is_valid(),
        reason: reason.clone(),
        constraint_residual: params.constraint_residual(),
    };
    let body = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => format!(
            "case,valid,reason\n{},{},{}\n",
            report.case,
            report.valid,
            reason.unwrap_or_default().replace(',', ";")
        ),
    };
    emit(common, &body)?;
    if case.is_valid() {
        eprintln!("{case}");
        Ok(())
    } else {
        Err(Failure::Config(format!("invalid parameters: {case}")))
    }
}

fn autdim(common: &Common, params: HopfParams, method: MethodArg) -> Outcome {
    Hopf::with_tolerance(params, common.aut.tol)?;
    let report = aut::system_nullity(&params, method.resolve(&params), &common.aut)?;
    let body = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => aut_csv(std::slice::from_ref(&report))?,
    };
    emit(common, &body)?;
    eprintln!(
        "{} {}: nullity {} expected {:?} -> {}",
        report.case,
        report.method.label(),
        report.nullity,
        report.expected,
        if report.pass { "PASS" } else { "FAIL" }
    );
    verdict(report.pass)
}

fn verify(common: &Common, grid: &[slicequat::suite::GridRow], seeds: &[u64]) -> Outcome {
    if grid.is_empty() {
        return Err(Failure::Config("the grid is empty".into()));
    }
    if seeds.is_empty() {
        return Err(Failure::Config("no seeds given".into()));
    }
    let report = run_suite(grid, &common.aut, seeds);
    let body = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => suite_csv(&report)?,
    };
    emit(common, &body)?;
    for r in &report.rows {
        let detail = match &r.error {
            Some(e) => format!("error: {e}"),
            None => format!("nullities {:?} expected {:?}", r.nullities, r.expected),
        };
        eprintln!("{} {:<24} {:<8} {detail}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.case);
    }
    eprintln!("{} passed, {} failed", report.passed, report.failed);
    verdict(report.pass)
}

fn scan(common: &Common, family: &FamilyParams, lambdas: &[Quaternion]) -> Outcome {
    let scan = dimension_scan(family, lambdas, &common.aut)?;
    let body = match common.format {
        Format::Json => json(&scan)?,
        Format::Csv => scan_csv(&scan.rows)?,
    };
    emit(common, &body)?;
    for r in &scan.rows {
        eprintln!(
            "lambda [{}] {:<4} nullity {:>2} expected {:?}",
            quat_field(r.lambda),
            r.case,
            r.nullity,
            r.expected
        );
    }
    eprintln!("jump {} asserted {}", scan.jump, scan.asserted);
    verdict(scan.pass())
}

#[derive(Serialize)]
struct OrbitReport {
    params: HopfParams,
    case: String,
    a: (Quaternion, Quaternion),
    b: (Quaternion, Quaternion),
    k_max: u32,
    tol: f64,
    k: Option<i32>,
}

fn orbit(
    common: &Common,
    params: HopfParams,
    a: (Quaternion, Quaternion),
    b: (Quaternion, Quaternion),
    k_max: u32,
    tol: f64,
) -> Outcome {
    let hopf = Hopf::with_tolerance(params, common.aut.tol)?;
    let k = hopf.orbit_equivalent(a, b, k_max, tol)?;
    let report = OrbitReport {
        params,
        case: hopf.case().label().to_owned(),
        a,
        b,
        k_max,
        tol,
        k,
    };
    let body = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => format!("k\n{}\n", k.map(|k| k.to_string()).unwrap_or_default()),
    };
    emit(common, &body)?;
    match k {
        Some(k) => eprintln!("b = f^{k}(a)"),
        None => eprintln!("no k with |k| <= {k_max}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct StemRow {
    term: Term,
    check: StemCheck,
    pass: bool,
}

#[derive(Serialize)]
struct StemReport {
    seed: u64,
    stems: Vec<StemRow>,
    control: StemCheck,
    pass: bool,
}

fn stems(common: &Common, count: usize, points: usize, h_step: f64) -> Outcome {
    if count == 0 || points == 0 {
        return Err(Failure::Config("count and points must be positive".into()));
    }
    let domain = StemDomain::cube(0.7);
    let mut rng = sampling::rng(common.seed);
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let series = random_monomial(&mut rng);
        let term = series.terms().next().expect("one monomial");
        let check = stem_check(&StemOracle::from_series(&series, domain), points, h_step, common.seed + i as u64)?;
        let pass = check.parity <= 1e-12 && check.dbar <= 1e-8 && check.order >= 1.8;
        rows.push(StemRow { term, check, pass });
    }
    let control = stem_check(&control_stem(domain), points, h_step, common.seed)?;
    let pass = rows.iter().all(|r| r.pass) && control.dbar > 1e-2;
    let report = StemReport {
        seed: common.seed,
        stems: rows,
        control,
        pass,
    };
    let body = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut s = String::from("h,k,parity,dbar,order,pass\n");
            for r in &report.stems {
                s += &format!(
                    "{},{},{:e},{:e},{},{}\n",
                    r.term.h, r.term.k, r.check.parity, r.check.dbar, r.check.order, r.pass
                );
            }
            s
        }
    };
    emit(common, &body)?;
    eprintln!(
        "{} stems, control residual {:.3e} -> {}",
        report.stems.len(),
        report.control.dbar,
        if pass { "PASS" } else { "FAIL" }
    );
    verdict(pass)
}
