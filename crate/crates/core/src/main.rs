//! Command-line front end: analyse operators, sample boundary values,
//! certify inequalities, generate Harper operators, and run cross-checks.
//!
//! Exit codes: 0 success, 1 usage, 2 parse/validation, 3 numerical failure
//! (including a failed oracle comparison).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jacobi_bands::bounds::{certify, harper_bound_demo};
use jacobi_bands::error::Error;
use jacobi_bands::io::{
    analyze, fmt_f64, oracle_check, sample_csv, write_atomic, AnalysisOptions,
    OperatorInputDocument,
};
use jacobi_bands::jacobi::harper;
use jacobi_bands::quasimomentum::QuasimomentumModel;

#[derive(Parser)]
#[command(name = "jacobi-bands", version, about = "Spectral analysis of periodic Jacobi operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AnalyzeFlags {
    /// Truncation height for the Dirichlet-integral quadratures.
    #[arg(long, default_value_t = 12.0)]
    ymax: f64,
    /// Maximum allowed | |D(edge)| - 2 | over the computed band edges.
    #[arg(long = "tol-edge", default_value_t = 1e-9)]
    tol_edge: f64,
    /// Skip the (slow) Dirichlet-integral verifications.
    #[arg(long = "skip-dirichlet")]
    skip_dirichlet: bool,
    /// Skip the Herglotz-representation cross-check.
    #[arg(long = "skip-herglotz")]
    skip_herglotz: bool,
    /// Include a wall-clock stamp in the output (breaks determinism).
    #[arg(long)]
    stamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: band structure, Q coefficients, certificate, verifiers.
    Analyze {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        flags: AnalyzeFlags,
    },
    /// Uniform boundary samples x, lambda, D, u, v as CSV.
    Sample {
        input: PathBuf,
        output: PathBuf,
        #[arg(long = "n-points", default_value_t = 1001)]
        n_points: usize,
    },
    /// Inequality certificate only.
    Bounds {
        input: PathBuf,
        /// Output path; prints to stdout when omitted.
        output: Option<PathBuf>,
    },
    /// Generate a Harper operator document and report its lower bound.
    Harper {
        p: i64,
        q: usize,
        #[arg(default_value_t = 0.0)]
        theta: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare band edges against the Bloch theta-sweep oracle.
    OracleCheck {
        input: PathBuf,
        #[arg(long = "n-theta", default_value_t = 721)]
        n_theta: usize,
    },
    /// Trace-formula residual for moment order n.
    TraceCheck {
        input: PathBuf,
        #[arg(short, long)]
        n: usize,
    },
}

fn bounds_report_text(rep: &jacobi_bands::bounds::BoundsReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "q = {}, c = {}, A = {}, h+ = {}\nTr L = {}, Tr L^2 = {}\n",
        rep.q,
        fmt_f64(rep.c),
        fmt_f64(rep.capacity),
        fmt_f64(rep.h_plus),
        fmt_f64(rep.trace_l),
        fmt_f64(rep.trace_l2)
    ));
    for r in &rep.records {
        let status = if r.degenerate {
            "degenerate"
        } else if r.satisfied {
            "ok"
        } else {
            "VIOLATED"
        };
        s.push_str(&format!(
            "{:<18} {} {} {}   margin {}   [{}]\n",
            r.name,
            fmt_f64(r.lhs),
            r.relation.symbol(),
            fmt_f64(r.rhs),
            fmt_f64(r.margin),
            status
        ));
    }
    s
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Analyze {
            input,
            output,
            flags,
        } => {
            let doc = OperatorInputDocument::from_file(&input)?;
            let opts = AnalysisOptions {
                ymax: flags.ymax,
                tol_edge: flags.tol_edge,
                skip_dirichlet: flags.skip_dirichlet,
                skip_herglotz: flags.skip_herglotz,
                stamp: flags.stamp,
            };
            let res = analyze(&doc, &opts)?;
            write_atomic(&output, &res.to_json())?;
            println!(
                "analyzed q={} operator: c = {}, {} open gap(s), report -> {}",
                doc.q,
                fmt_f64(res.c),
                res.closed_gaps.iter().filter(|f| !**f).count(),
                output.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample {
            input,
            output,
            n_points,
        } => {
            let doc = OperatorInputDocument::from_file(&input)?;
            let csv = sample_csv(&doc, n_points)?;
            write_atomic(&output, &csv)?;
            println!("wrote {n_points} samples -> {}", output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { input, output } => {
            let doc = OperatorInputDocument::from_file(&input)?;
            let rep = certify(&doc.operator()?)?;
            let text = bounds_report_text(&rep);
            match output {
                Some(path) => write_atomic(&path, &text)?,
                None => print!("{text}"),
            }
            if rep.all_satisfied() {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::Numerical("certificate contains violations".into()))
            }
        }
        Command::Harper {
            p,
            q,
            theta,
            output,
        } => {
            let j = harper(p, q, theta)?;
            let doc = OperatorInputDocument {
                q,
                a: j.a().to_vec(),
                b: j.b().to_vec(),
                label: Some(format!("harper({p},{q},{theta})")),
            };
            if let Some(path) = &output {
                write_atomic(path, &doc.to_json())?;
                println!("wrote harper({p},{q},{theta}) -> {}", path.display());
            } else {
                print!("{}", doc.to_json());
            }
            if q >= 3 && (2 * p).rem_euclid(q as i64) != 0 {
                let demo = harper_bound_demo(p, q)?;
                println!(
                    "lower bound {} < c = {}",
                    fmt_f64(demo.lower_bound),
                    fmt_f64(demo.c)
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleCheck { input, n_theta } => {
            let doc = OperatorInputDocument::from_file(&input)?;
            let rep = oracle_check(&doc, n_theta)?;
            print!("{}", rep.to_json());
            if rep.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::Numerical(format!(
                    "oracle distance {} exceeds threshold {}",
                    rep.max_distance, rep.threshold
                )))
            }
        }
        Command::TraceCheck { input, n } => {
            let doc = OperatorInputDocument::from_file(&input)?;
            let model = QuasimomentumModel::build(&doc.operator()?)?;
            let chk = model.trace_moment_check(n)?;
            println!(
                "n = {n}: lhs = {}, rhs = {}, residual = {}",
                fmt_f64(chk.lhs),
                fmt_f64(chk.rhs),
                fmt_f64(chk.residual)
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version output should still exit 0
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
