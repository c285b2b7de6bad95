use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use interval34_core::verifier::{
    cmd_decompose, cmd_lower_bound, cmd_observations, cmd_verify_analytic, cmd_verify_corollary,
    cmd_verify_direct, default_analytic_samples, observations_contract_ok, ReportFormat,
    WriteReport, E12_CEIL,
};
use interval34_core::Error;

#[derive(Parser)]
#[command(name = "interval34")]
#[command(about = "Checks for a prime in [3n, 4n]: finite sweeps, exact factorizations, analytic bounds")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Smallest prime in [3n, 4n] for every n up to nmax
    VerifyDirect {
        #[arg(long, default_value_t = E12_CEIL)]
        nmax: u64,

        /// Include the witness prime for every n
        #[arg(long)]
        witnesses: bool,

        /// Worker threads; 1 runs serially, 0 uses all cores
        #[arg(long, default_value_t = 0)]
        threads: usize,

        #[command(flatten)]
        output: Output,
    },
    /// A prime p with n < p < 4(n + 2)/3 for every n in [3, nmax]
    VerifyCorollary {
        #[arg(long)]
        nmax: u64,

        #[arg(long)]
        witnesses: bool,

        #[arg(long, default_value_t = 0)]
        threads: usize,

        #[command(flatten)]
        output: Output,
    },
    /// Compare the count lower bound with the number of primes in (3n, 4n)
    LowerBound {
        #[arg(long)]
        n: u64,

        #[command(flatten)]
        output: Output,
    },
    /// Positivity and growth of the T3 lower bound at sample points above e^12
    VerifyAnalytic {
        #[arg(long, value_delimiter = ',')]
        samples: Option<Vec<u64>>,

        #[command(flatten)]
        output: Output,
    },
    /// Factor C(4n, 3n) as T1·T2·T3 and run every applicable inequality
    Decompose {
        #[arg(long)]
        n: u64,

        #[command(flatten)]
        output: Output,
    },
    /// Run the 22 interval observations over [nmin, nmax]
    Observations {
        #[arg(long)]
        nmin: u64,

        #[arg(long)]
        nmax: u64,

        #[arg(long, default_value_t = 0)]
        threads: usize,

        #[command(flatten)]
        output: Output,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity { .. } | Error::Coverage { .. } => 3,
        Error::Domain(_) | Error::Precondition(_) => 2,
        Error::Indeterminate { .. } | Error::Internal(_) | Error::Report(_) => 1,
    }
}

fn emit<R: WriteReport>(report: &R, output: &Output, default: Format) -> Result<(), Error> {
    let body = report.render(output.format.unwrap_or(default).into())?;
    match &output.out {
        Some(path) => fs::write(path, body)?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

/// Emits the report and returns whether it met its contract.
fn run(cmd: Command) -> Result<bool, Error> {
    match cmd {
        Command::VerifyDirect {
            nmax,
            witnesses,
            threads,
            output,
        } => {
            let r = cmd_verify_direct(nmax, witnesses, threads)?;
            emit(&r, &output, Format::Csv)?;
            eprintln!("verify-direct [1, {nmax}]: {} failure(s)", r.failures.len());
            Ok(r.ok())
        }
        Command::VerifyCorollary {
            nmax,
            witnesses,
            threads,
            output,
        } => {
            let r = cmd_verify_corollary(nmax, witnesses, threads)?;
            emit(&r, &output, Format::Text)?;
            Ok(r.ok())
        }
        Command::LowerBound { n, output } => {
            let r = cmd_lower_bound(n)?;
            emit(&r, &output, Format::Text)?;
            Ok(r.satisfied)
        }
        Command::VerifyAnalytic { samples, output } => {
            let samples = samples.unwrap_or_else(default_analytic_samples);
            let r = cmd_verify_analytic(&samples)?;
            emit(&r, &output, Format::Text)?;
            Ok(r.ok())
        }
        Command::Decompose { n, output } => {
            let r = cmd_decompose(n)?;
            emit(&r, &output, Format::Text)?;
            Ok(r.ok())
        }
        Command::Observations {
            nmin,
            nmax,
            threads,
            output,
        } => {
            let r = cmd_observations(nmin, nmax, threads)?;
            emit(&r, &output, Format::Text)?;
            Ok(observations_contract_ok(&r))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("contract check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
