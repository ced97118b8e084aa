//! `grosym` command line: norm reports, certified scalings, the
//! antisymmetric canonical form, symplectic taming, and the sweep
//! experiments, over JSON/CSV matrix files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use grosym::{
    abs_sum, antisym_canonical, blt_sweep, hs_norm, infty_one_exact, kg_upper, numerical_rank,
    scaling_search, sharpness_sweep, spectral_norm, tame, tame_bench, theorem1_check, Error,
    SweepReport, TameParams,
};

#[derive(Parser)]
#[command(name = "grosym", version, about = "Grothendieck-type scalings and symplectic taming")]
struct Cli {
    /// Constant used for certification (defaults to sinh(pi/2))
    #[arg(long, global = true)]
    kg: Option<f64>,
    /// Numerical tolerance for rank and certification checks
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Write the report to this path
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Norm report for a matrix: entry sum, Hilbert-Schmidt, spectral,
    /// rank, and the exact infinity-to-one norm with witnesses
    Norm { matrix: PathBuf },
    /// Diagonal scaling certificate for a square matrix
    Scale {
        matrix: PathBuf,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the sqrt-rank absolute-sum inequality
    CheckThm1 { matrix: PathBuf },
    /// Canonical form of an antisymmetric matrix
    Canonical { matrix: PathBuf },
    /// Construct a symplectic matrix taming a vector family
    Tame {
        vectors: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Sweep experiments
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
}

#[derive(Subcommand)]
enum SweepKind {
    /// Ratio of the entry sum to sqrt(rank) times the norm on orthogonal
    /// Fourier blocks
    Sharpness {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 4, 8])]
        ms: Vec<usize>,
        #[arg(long, default_value_t = 32)]
        pad: usize,
    },
    /// Empirical constant of the pairing inequality over Gaussian families
    Blt {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        vectors: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Achieved-versus-bound behaviour of the taming pipeline
    Tame {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        vectors: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(held) => {
            if held {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Input(_) => 2,
                Error::Capacity(_) => 3,
                Error::Consistency(_) => 1,
            };
            ExitCode::from(code)
        }
    }
}

/// Runs one command; `Ok(false)` means a certified check failed.
fn run(cli: &Cli) -> Result<bool, Error> {
    let kg = cli.kg.unwrap_or_else(kg_upper);
    match &cli.command {
        Command::Norm { matrix } => {
            let a = grosym::io::read_matrix(matrix)?;
            let norm = infty_one_exact(&a)?;
            let report = serde_json::json!({
                "rows": a.rows(),
                "cols": a.cols(),
                "abs_sum": abs_sum(&a),
                "hs_norm": hs_norm(&a),
                "spectral_norm": spectral_norm(&a),
                "rank": numerical_rank(&a, cli.tol),
                "infty_one": norm.value,
                "witness_t": norm.witness_t,
                "witness_s": norm.witness_s,
            });
            emit(cli, &report)?;
            Ok(true)
        }
        Command::Scale { matrix, iters, seed } => {
            let a = grosym::io::read_matrix(matrix)?;
            let cert = scaling_search(&a, *iters, *seed, kg)?;
            let certified = cert.certified;
            emit(cli, &serde_json::to_value(&cert).unwrap())?;
            Ok(certified)
        }
        Command::CheckThm1 { matrix } => {
            let a = grosym::io::read_matrix(matrix)?;
            let report = theorem1_check(&a, kg, cli.tol)?;
            let holds = report.holds;
            emit(cli, &serde_json::to_value(&report).unwrap())?;
            Ok(holds)
        }
        Command::Canonical { matrix } => {
            let a = grosym::io::read_matrix(matrix)?;
            let form = antisym_canonical(&a, cli.tol)?;
            let report = serde_json::json!({
                "mus": form.mus(),
                "pair_count": form.pair_count(),
                "q_rows": form.q_rows().data(),
                "ambient_dim": form.ambient_dim(),
            });
            emit(cli, &report)?;
            Ok(true)
        }
        Command::Tame { vectors, eps, seed } => {
            let fam = grosym::io::read_family(vectors)?;
            let params = TameParams {
                seed: *seed,
                tol: cli.tol,
                ..TameParams::default()
            };
            let result = tame(&fam, kg, *eps, &params)?;
            let report = serde_json::json!({
                "s_matrix": {
                    "rows": result.s_matrix.rows(),
                    "cols": result.s_matrix.cols(),
                    "data": result.s_matrix.data(),
                },
                "achieved_sum": result.achieved_sum,
                "limit_sum": result.limit_sum,
                "certified_bound": result.certified_bound,
                "empirical_bound": result.empirical_bound,
                "certified": result.certified,
                "case": format!("{:?}", result.case_tag),
                "eps": result.eps,
                "symplectic_residual": result.symplectic_residual,
                "kg": kg,
            });
            emit(cli, &report)?;
            Ok(result.certified && result.symplectic_residual <= cli.tol)
        }
        Command::Sweep { kind } => {
            let report = match kind {
                SweepKind::Sharpness { ms, pad } => sharpness_sweep(ms, *pad, kg)?,
                SweepKind::Blt {
                    ns,
                    vectors,
                    trials,
                    seed,
                } => blt_sweep(ns, *vectors, *trials, *seed, kg)?,
                SweepKind::Tame {
                    ns,
                    vectors,
                    trials,
                    seed,
                    eps,
                } => tame_bench(ns, *vectors, *trials, *seed, *eps, kg)?,
            };
            let all_hold = report.all_hold;
            emit_sweep(cli, &report)?;
            Ok(all_hold)
        }
    }
}

fn emit(cli: &Cli, report: &serde_json::Value) -> Result<(), Error> {
    if cli.format == Format::Csv {
        return Err(Error::Input(
            "csv output is only available for sweep reports".into(),
        ));
    }
    let text = serde_json::to_string_pretty(report).unwrap();
    println!("{text}");
    write_out(cli, &text)
}

fn emit_sweep(cli: &Cli, report: &SweepReport) -> Result<(), Error> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(report).unwrap(),
        Format::Csv => report.to_csv(),
    };
    println!("{text}");
    write_out(cli, &text)
}

fn write_out(cli: &Cli, text: &str) -> Result<(), Error> {
    if let Some(path) = &cli.out {
        std::fs::write(path, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
