use std::io::Write;
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use theta_sw_cli::{alpha, decomposition, parse_range, AlphaOutput, CliError, Suite};
use theta_sw_core::ParityFilter;

#[derive(Parser)]
#[command(name = "theta-sw", version, about = "Verify Stiefel-Whitney computations for theta characteristics")]
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
    All,
    Genus3,
    Counts,
    Sigmastate,
    Independence,
    Polyrec,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Genus3 => Suite::Genus3,
            SuiteArg::Counts => Suite::Counts,
            SuiteArg::Sigmastate => Suite::Sigmastate,
            SuiteArg::Independence => Suite::Independence,
            SuiteArg::Polyrec => Suite::Polyrec,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Odd,
    Even,
    All,
}

impl From<ParityArg> for ParityFilter {
    fn from(p: ParityArg) -> ParityFilter {
        match p {
            ParityArg::Odd => ParityFilter::Odd,
            ParityArg::Even => ParityFilter::Even,
            ParityArg::All => ParityFilter::All,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Genus range, e.g. 3..6.
        #[arg(long, value_parser = parse_range)]
        g: Option<RangeInclusive<usize>>,
        /// Range of n for the polynomial suites, e.g. 1..5.
        #[arg(long, value_parser = parse_range)]
        n: Option<RangeInclusive<usize>>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the etale algebra of theta characteristics of the test curve.
    Decompose {
        #[arg(long)]
        g: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print one Galois-Stiefel-Whitney class of that algebra.
    Alpha {
        #[arg(long)]
        g: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn execute(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Verify { suite, g, n, format } => {
            let report = theta_sw_cli::suites::run(suite.into(), g, n)?;
            match format {
                Format::Text => emit(&report.render_text(false)),
                Format::Json => emit(&format!("{}\n", to_json(&report))),
            }
            Ok(report.passed())
        }
        Command::Decompose { g, parity, format } => {
            let d = decomposition(g, parity.into())?;
            match format {
                Format::Text => emit(&format!("{}\n", d.to_text())),
                Format::Json => emit(&format!("{}\n", to_json(&d))),
            }
            Ok(true)
        }
        Command::Alpha {
            g,
            parity,
            degree,
            format,
        } => {
            let class = alpha(g, parity.into(), degree)?;
            match format {
                Format::Text => emit(&format!("{class}\n")),
                Format::Json => emit(&format!(
                    "{}\n",
                    to_json(&AlphaOutput {
                        g,
                        parity: parity.into(),
                        degree,
                        class: class.to_string(),
                    })
                )),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("theta-sw: {e}");
            ExitCode::from(2)
        }
    }
}
