use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pencil_core::canon::{build_pencil, SpectralSpec};
use pencil_core::decomp::{decompose_spec, minimal_ell, signsum};
use pencil_core::lab::{predict, run_experiment, verify_appendix, EigClass, Scenario, CSV_HEADER};
use pencil_core::paramz::{phi_structured, sample_params, ParamVector};
use pencil_core::pencil::{PencilDoc, StructureTag};
use pencil_core::smith::{partial_multiplicities, EigenvalueRef, MultiplicityList};
use pencil_core::{GaussianRational, Pencil};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            _ => 2,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Parser)]
#[command(name = "pencil", version, about = "Exact structured matrix pencils and low-rank perturbation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the pencil described by a spectral spec JSON file.
    Build { spec: PathBuf },
    /// Split a spec's pencil into structured rank-one terms.
    Decompose {
        spec: PathBuf,
        /// Merge opposite signs to reach the smallest number of scalar terms (Hermitian only).
        #[arg(long)]
        minimal: bool,
    },
    /// Sum of the signs of the odd-sized blocks at a real eigenvalue.
    Signsum {
        spec: PathBuf,
        #[arg(long)]
        eigenvalue: String,
    },
    /// Draw a structured low-rank perturbation, or replay one from a parameter vector.
    Perturb {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long, default_value_t = 10)]
        bound: u32,
        /// ParamVector JSON to use instead of a random draw.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Partial multiplicities at an eigenvalue; input is a pencil or a spec.
    Multiplicities {
        input: PathBuf,
        #[arg(long)]
        eigenvalue: String,
    },
    /// Generic partial multiplicities after a rank-r structured perturbation.
    Predict {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        class: String,
        /// Comma separated list, e.g. 3,3
        #[arg(long)]
        list: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run a seeded scenario and print the JSON report.
    Experiment {
        scenario: PathBuf,
        /// Also write per-trial rows to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        bound: Option<u32>,
        /// Exit 1 on any mismatch, not only on dominance failures.
        #[arg(long)]
        strict: bool,
    },
    /// Check the determinant identities of the alternating witnesses.
    VerifyAppendix {
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long = "gamma", value_delimiter = ',')]
        gammas: Vec<String>,
    },
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn read_spec(path: &Path) -> Result<SpectralSpec, CliError> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

fn structure(s: &str) -> Result<StructureTag, CliError> {
    StructureTag::parse(s).ok_or_else(|| CliError::Input(format!("unknown structure {s:?}")))
}

fn eigenvalue(s: &str) -> Result<EigenvalueRef, CliError> {
    s.parse().map_err(input)
}

fn parse_list(s: &str) -> Result<MultiplicityList, CliError> {
    let v = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| CliError::Input(format!("bad list entry {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MultiplicityList::new(v))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(|source| CliError::Io { path: "stdout".into(), source })
}

/// A pencil document, or failing that a spectral spec.
fn read_pencil(path: &Path) -> Result<Pencil, CliError> {
    let text = read_text(path)?;
    if let Ok(doc) = serde_json::from_str::<PencilDoc>(&text) {
        return doc.to_pencil().map_err(input);
    }
    let spec: SpectralSpec = serde_json::from_str(&text)?;
    build_pencil(&spec).map_err(input)
}

#[derive(Serialize)]
struct PerturbOutput {
    pencil: PencilDoc,
    params: ParamVector,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { spec } => {
            let spec = read_spec(&spec)?;
            let p = build_pencil(&spec).map_err(input)?;
            print_json(&PencilDoc::from_pencil(&p, spec.structure))
        }
        Command::Decompose { spec, minimal } => {
            let spec = read_spec(&spec)?;
            let dec = if minimal { minimal_ell(&spec).map_err(input)?.1 } else { decompose_spec(&spec).map_err(input)? };
            print_json(&dec)
        }
        Command::Signsum { spec, eigenvalue: e } => {
            let spec = read_spec(&spec)?;
            println!("{}", signsum(&spec, &eigenvalue(&e)?).map_err(input)?);
            Ok(())
        }
        Command::Perturb { structure: tag, n, rank, s, seed, trial, bound, params } => {
            let tag = structure(&tag)?;
            let s = s.unwrap_or(if tag.forces_half_rank() { rank / 2 } else { 0 });
            let x = match params {
                Some(path) => serde_json::from_str(&read_text(&path)?)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(trial);
                    sample_params(tag, n, rank, s, &mut rng, bound).map_err(input)?
                }
            };
            let p = phi_structured(tag, n, rank, s, &x).map_err(input)?;
            print_json(&PerturbOutput { pencil: PencilDoc::from_pencil(&p, tag), params: x })
        }
        Command::Multiplicities { input: path, eigenvalue: e } => {
            let p = read_pencil(&path)?;
            println!("{}", partial_multiplicities(&p, &eigenvalue(&e)?).map_err(input)?);
            Ok(())
        }
        Command::Predict { structure: tag, class, list, rank, json } => {
            let tag = structure(&tag)?;
            let class = EigClass::parse(&class).ok_or_else(|| CliError::Input(format!("unknown class {class:?}")))?;
            let pred = predict(tag, class, &parse_list(&list)?, rank).map_err(input)?;
            if json {
                print_json(&pred)
            } else {
                let parts: Vec<String> = pred.expected.as_slice().iter().map(usize::to_string).collect();
                println!("{}", parts.join(","));
                Ok(())
            }
        }
        Command::Experiment { scenario, csv, trials, seed, bound, strict } => {
            let mut sc: Scenario = serde_json::from_str(&read_text(&scenario)?)?;
            sc.trials = trials.unwrap_or(sc.trials);
            sc.seed = seed.unwrap_or(sc.seed);
            sc.bound = bound.unwrap_or(sc.bound);
            let report = run_experiment(&sc).map_err(input)?;
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(CSV_HEADER)?;
                for row in report.csv_rows() {
                    w.write_record(&row)?;
                }
                w.flush().map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            }
            print_json(&report)?;
            if report.dominance_failures > 0 {
                return Err(CliError::Check(format!("dominance failed in {} observations", report.dominance_failures)));
            }
            if strict && !report.clean() {
                return Err(CliError::Check(format!(
                    "{} of {} trials matched every prediction",
                    report.full_matches, report.trials
                )));
            }
            Ok(())
        }
        Command::VerifyAppendix { kmax, gammas } => {
            if kmax == 0 {
                return Err(CliError::Input("--kmax must be at least 1".into()));
            }
            let gammas = if gammas.is_empty() {
                vec!["1/3".to_string(), "-2".to_string(), "5/7".to_string()]
            } else {
                gammas
            };
            let gammas = gammas
                .iter()
                .map(|g| {
                    let c: GaussianRational = g.parse().map_err(input)?;
                    if !c.is_real() || c.is_zero() {
                        return Err(CliError::Input(format!("gamma must be a nonzero rational, got {g}")));
                    }
                    Ok(c.re)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let report = verify_appendix(kmax, &gammas).map_err(input)?;
            print_json(&report)?;
            if !report.all_pass {
                return Err(CliError::Check("determinant identity failed".into()));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
