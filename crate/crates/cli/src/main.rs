//! `gtc`: build groupoid toric code models, count ground states, check the
//! algebra and report syndromes.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "gtc",
    version,
    about = "Groupoid toric code models: degeneracies, checks and syndromes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the algebraic checks for a model and/or a groupoid.
    Validate(ValidateArgs),
    /// Ground-state degeneracy of a model.
    Gsd(ModelArgs),
    /// Syndrome of an error string.
    Excite(ExciteArgs),
}

#[derive(Args, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Args, Clone)]
pub struct ModelArgs {
    /// m1, m2, m3exp, mhoriz, mvert, mnondeg, boundary, zn:N (or zn with --n).
    #[arg(long)]
    pub model: String,
    /// torus:MxN or open:MxN (M columns, N rows).
    #[arg(long, default_value = "torus:2x2")]
    pub lattice: String,
    /// Qudit dimension; must match the model when both are given.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, value_enum, default_value_t = Method::Stabilizer)]
    pub method: Method,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Clone)]
pub struct ValidateArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, default_value = "torus:2x2")]
    pub lattice: String,
    #[arg(long)]
    pub n: Option<u32>,
    /// sis:N, isotropy-z2 or file:PATH (JSON).
    #[arg(long)]
    pub groupoid: Option<String>,
    /// Also run the four-corner commutation enumeration for the groupoid.
    #[arg(long)]
    pub appendix_b: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Clone)]
pub struct ExciteArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Error string such as "Z@(1,1).E X@(0,0).W".
    #[arg(long)]
    pub op: String,
    /// Basis configuration for the dense ground state, e.g. "*=1; (0,0).N=2".
    #[arg(long)]
    pub seed_config: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Stabilizer,
    Dense,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, format) = match &cli.command {
        Command::Validate(a) => (commands::validate(a), a.common.format),
        Command::Gsd(a) => (commands::gsd(a), a.common.format),
        Command::Excite(a) => (commands::excite(a), a.model.common.format),
    };
    match result {
        Ok(report) => {
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("plain data")
                ),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
