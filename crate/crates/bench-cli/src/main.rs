use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tridiag_hira::bessel::{agreement_digits, bessel_backward, bessel_via_hira, choose_n};
use tridiag_hira::eigensolve::{
    inverse_power, nearest_eigenvalue, sturm_bisect, InversePowerOptions, DEFAULT_SEED, DEFAULT_TOL,
};
use tridiag_hira::hira::{hira_eigenvector, simplified_eigenvector, write_eigenvector_csv};
use tridiag_hira::TridiagMatrix;
use tridiag_hira_bench::experiments::{
    run_experiment1, run_experiment2, run_experiment3, Settings, BESSEL_GRID, EXPERIMENT1_SCALES,
    INVERSE_POWER_ITERS,
};
use tridiag_hira_bench::init_thread_pool;
use tridiag_hira_bench::output::{fmt_f64, write_coordinates, write_records};

const EXIT_NUMERICAL: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tridiag-hira",
    version,
    about = "Eigenvectors of tridiagonal matrices to high relative accuracy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The k-th smallest eigenvalue of the power-law matrix.
    Lambda {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Eigenvector for the eigenvalue nearest `--lambda`, as CSV.
    Eigvec {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: f64,
        #[arg(long, value_enum)]
        method: EigMethod,
        #[arg(long, default_value_t = INVERSE_POWER_ITERS)]
        iters: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// J_0(x), ..., J_n(x) as CSV.
    Bessel {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        n: usize,
        /// Start order; chosen automatically if absent.
        #[arg(long = "N")]
        big_n: Option<usize>,
        #[arg(long, value_enum, default_value_t = BesselMethod::Both)]
        method: BesselMethod,
    },
    /// Runs one of the numerical experiments.
    Experiment {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Scales (experiment 1) or arguments (experiment 3) to run.
        #[arg(long, num_args = 1..)]
        c: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Directory for the CSV files; summary to standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EigMethod {
    Hira,
    Simplified,
    Invpow,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum BesselMethod {
    Backward,
    Hira,
    Both,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<tridiag_hira::Error>() {
            return match e {
                tridiag_hira::Error::InvalidParameter(_)
                | tridiag_hira::Error::InvalidProfile(_)
                | tridiag_hira::Error::Domain(_)
                | tridiag_hira::Error::DimensionMismatch { .. } => EXIT_USAGE,
                _ => EXIT_NUMERICAL,
            };
        }
    }
    EXIT_NUMERICAL
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let start = Instant::now();
    let result = init_thread_pool()
        .map_err(|e| usage(e.to_string()))
        .and_then(|_| run(cli.command));
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Lambda { a, c, n, k, tol } => {
            let m = TridiagMatrix::power_law(a, c, n)?;
            if k == 0 || k > n {
                return Err(usage(format!("k = {k} must lie in 1..={n}")));
            }
            let lambda = sturm_bisect(&m, k, tol)?;
            println!("k,lambda");
            println!("{k},{}", fmt_f64(lambda));
            Ok(())
        }
        Command::Eigvec {
            a,
            c,
            n,
            lambda,
            method,
            iters,
            seed,
            out,
        } => {
            let m = TridiagMatrix::power_law(a, c, n)?;
            let (k, lam) = nearest_eigenvalue(&m, lambda, DEFAULT_TOL)?;
            eprintln!("k = {k}, lambda_k = {}", fmt_f64(lam));
            let mut buf = Vec::new();
            match method {
                EigMethod::Hira => write_eigenvector_csv(&hira_eigenvector(&m, lam)?, &mut buf)?,
                EigMethod::Simplified => {
                    write_eigenvector_csv(&simplified_eigenvector(&m, lam)?, &mut buf)?
                }
                EigMethod::Invpow => {
                    let opts = InversePowerOptions {
                        max_iters: iters,
                        stop_tol: 0.0,
                        seed,
                    };
                    let (_, trace) = inverse_power(&m, lam, opts)?;
                    writeln!(buf, "index,value")?;
                    for (i, v) in trace.y.iter().enumerate() {
                        writeln!(buf, "{},{}", i + 1, fmt_f64(*v))?;
                    }
                }
            }
            emit(&buf, out.as_deref())
        }
        Command::Bessel {
            x,
            n,
            big_n,
            method,
        } => {
            let big_n = match big_n {
                Some(v) => v,
                None => choose_n(x, n)?,
            };
            eprintln!("N = {big_n}");
            let back = match method {
                BesselMethod::Hira => None,
                _ => Some(bessel_backward::<f64>(x, n, big_n)?.values),
            };
            let hira = match method {
                BesselMethod::Backward => None,
                _ => Some(bessel_via_hira(x, n, big_n)?.values),
            };
            let mut buf = Vec::new();
            match (&back, &hira) {
                (Some(b), Some(h)) => {
                    writeln!(buf, "order,backward,hira,agreement_digits")?;
                    for k in 0..=n {
                        let d = agreement_digits(h[k], b[k]);
                        writeln!(
                            buf,
                            "{k},{},{},{}",
                            fmt_f64(b[k]),
                            fmt_f64(h[k]),
                            fmt_f64(d)
                        )?;
                    }
                }
                (Some(v), None) | (None, Some(v)) => {
                    writeln!(buf, "order,value")?;
                    for (k, x) in v.iter().enumerate() {
                        writeln!(buf, "{k},{}", fmt_f64(*x))?;
                    }
                }
                (None, None) => unreachable!(),
            }
            emit(&buf, None)
        }
        Command::Experiment {
            which,
            c,
            seed,
            out,
        } => experiment(which, &c, seed, out.as_deref()),
    }
}

fn emit(buf: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, buf).with_context(|| format!("writing {}", path.display())),
        None => Ok(io::stdout().lock().write_all(buf)?),
    }
}

fn experiment(which: u8, scales: &[f64], seed: u64, out: Option<&Path>) -> Result<()> {
    let settings = Settings {
        seed,
        ..Settings::default()
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut summary = Vec::new();
    match which {
        1 => {
            let scales = if scales.is_empty() {
                &EXPERIMENT1_SCALES[..]
            } else {
                scales
            };
            if let Some(bad) = scales.iter().find(|c| !c.is_finite() || **c <= 0.0) {
                return Err(usage(format!("scale c = {bad} must be positive")));
            }
            let cases = run_experiment1(scales, settings)?;
            let records: Vec<_> = cases.iter().flat_map(|c| c.records.clone()).collect();
            write_records(&records, &mut summary)?;
            if let Some(dir) = out {
                for case in &cases {
                    let path = dir.join(format!("experiment1_c{:e}.csv", case.c));
                    let mut buf = Vec::new();
                    write_coordinates(case, &mut buf)?;
                    emit(&buf, Some(&path))?;
                }
            }
        }
        2 => {
            if !scales.is_empty() {
                return Err(usage("experiment 2 runs at c = 1000 only"));
            }
            let cases = run_experiment2(settings)?;
            let records: Vec<_> = cases.iter().flat_map(|c| c.records.clone()).collect();
            write_records(&records, &mut summary)?;
        }
        3 => {
            let rows: Vec<_> = if scales.is_empty() {
                BESSEL_GRID.to_vec()
            } else {
                let mut rows = Vec::new();
                for &x in scales {
                    match BESSEL_GRID.iter().find(|r| r.x == x) {
                        Some(r) => rows.push(*r),
                        None => bail!(usage(format!("no Bessel parameter row for x = {x}"))),
                    }
                }
                rows
            };
            let cases = run_experiment3(&rows)?;
            let records: Vec<_> = cases.iter().flat_map(|c| c.records.clone()).collect();
            write_records(&records, &mut summary)?;
        }
        _ => unreachable!("restricted by the parser"),
    }
    match out {
        Some(dir) => emit(&summary, Some(&dir.join(format!("experiment{which}.csv")))),
        None => emit(&summary, None),
    }
}
