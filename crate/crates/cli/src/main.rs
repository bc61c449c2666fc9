use std::error::Error as StdError;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lvint_core::dynamics::{integrate, seeded_points};
use lvint_core::lax::char_poly_k;
use lvint_core::sigma::{sigma_identity_checks, MAX_K};
use lvint_core::verify::run_all;
use lvint_core::{IntegralFamily, SigmaMethod, SigmaTable, Suite, SystemSpec};
use serde_json::json;

const DEFAULT_SEED: u64 = 20240917;

#[derive(Parser)]
#[command(name = "lvint", version, about = "Integrals of Lotka-Volterra systems LV(n, k)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Involution,
    Independence,
    Rank,
    Structure,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Involution => vec![Suite::Involution],
            SuiteArg::Independence => vec![Suite::Independence],
            SuiteArg::Rank => vec![Suite::Rank],
            SuiteArg::Structure => vec![Suite::Structure],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print every first integral of LV(n, k).
    Integrals {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Characteristic polynomial of the Lax matrix and its coefficients K_i.
    Lax {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        kappa: u64,
        /// Number of trailing variables set to zero.
        #[arg(long, default_value_t = 0)]
        tail: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the sigma table for k.
    Sigma {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_K as u64))]
        k: u64,
        /// Also check the table identities.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Integrate LV(n, k) and write the trajectory with integral drifts as CSV.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 20.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Initial point; a seeded point in [0.5, 1.5]^n if omitted.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x0: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run verification suites for every LV(n, k) with n up to max-n.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u64).range(2..))]
        max_n: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

type Outcome = Result<bool, Box<dyn StdError>>;

fn print_json(out: &mut impl Write, v: &impl serde::Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

fn integrals(out: &mut impl Write, n: usize, k: usize, format: Format) -> Outcome {
    let fam = IntegralFamily::build(SystemSpec::new(n, k)?)?;
    match format {
        Format::Json => print_json(out, &fam)?,
        Format::Text => {
            writeln!(out, "{}", fam.spec)?;
            for (name, p) in fam.named() {
                writeln!(out, "{name} = {p}")?;
            }
        }
    }
    Ok(true)
}

fn lax(out: &mut impl Write, kappa: usize, tail: usize, format: Format) -> Outcome {
    let cp = char_poly_k(kappa, tail)?;
    let red = cp.reduced_spec();
    match format {
        Format::Json => print_json(
            out,
            &json!({
                "kappa": cp.kappa,
                "zero_tail": cp.zero_tail,
                "reduced": red,
                "det": cp.det_text(),
                "k": cp.k,
            }),
        )?,
        Format::Text => {
            writeln!(out, "det(X + l*M - u*Id) = {}", cp.det_text())?;
            writeln!(out, "reduced system {red}")?;
            for (i, p) in cp.k.iter().enumerate() {
                writeln!(out, "K{i} = {p}")?;
            }
        }
    }
    Ok(true)
}

fn sigma(out: &mut impl Write, k: usize, check: bool, format: Format) -> Outcome {
    let table = SigmaTable::compute(k, SigmaMethod::WeightedSum)?;
    let report = check.then(|| sigma_identity_checks(k));
    let ok = report.as_ref().is_none_or(|r| r.passed());
    match format {
        Format::Json => print_json(out, &json!({ "table": table, "report": report }))?,
        Format::Text => {
            write!(out, "{table}")?;
            if let Some(r) = &report {
                write!(out, "{r}")?;
            }
        }
    }
    Ok(ok)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    out: &mut impl Write,
    n: usize,
    k: usize,
    t_end: f64,
    tol: f64,
    x0: Option<Vec<f64>>,
    seed: u64,
    path: &PathBuf,
) -> Outcome {
    let spec = SystemSpec::new(n, k)?;
    let x0 = x0.unwrap_or_else(|| seeded_points(n, seed, 1).remove(0));
    let rec = integrate(spec, &x0, t_end, tol)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(rec.header())?;
    for row in rec.rows() {
        w.write_record(row.iter().map(f64::to_string))?;
    }
    w.flush()?;
    writeln!(
        out,
        "{spec}: {} samples to t = {t_end}, worst relative drift {:e}",
        rec.times.len(),
        rec.worst_drift()
    )?;
    Ok(true)
}

fn verify(out: &mut impl Write, suite: SuiteArg, max_n: usize, seed: u64, format: Format) -> Outcome {
    let reports = run_all(max_n, seed, &suite.suites());
    let ok = reports.iter().all(|r| r.passed());
    match format {
        Format::Json => print_json(out, &json!({ "passed": ok, "seed": seed, "reports": reports }))?,
        Format::Text => {
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            writeln!(out, "{} reports, {failed} failed", reports.len())?;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let res = match cli.command {
        Command::Integrals { n, k, format } => integrals(&mut out, n, k, format),
        Command::Lax { kappa, tail, format } => lax(&mut out, kappa as usize, tail, format),
        Command::Sigma { k, check, format } => sigma(&mut out, k as usize, check, format),
        Command::Simulate { n, k, t_end, tol, x0, seed, out: path } => {
            simulate(&mut out, n, k, t_end, tol, x0, seed, &path)
        }
        Command::Verify { suite, max_n, seed, format } => verify(&mut out, suite, max_n as usize, seed, format),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
