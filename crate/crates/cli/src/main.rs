//! `penta`: batch driver for the associator solver, the double shuffle
//! verifications and the numeric checks.

mod commands;
mod docs;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "penta", version, about = "Cyclotomic associators and double shuffle relations")]
struct Cli {
    /// Print the JSON report on stdout instead of the human summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the chosen equations degree by degree in exact arithmetic.
    Solve(SolveArgs),
    /// Mixed pentagon implies the generalized double shuffle relation.
    #[command(name = "verify-theorem1")]
    VerifyTheorem1(Theorem1Args),
    /// Solutions with the octagon lie in the double shuffle torsor.
    #[command(name = "verify-theorem2")]
    VerifyTheorem2(Theorem2Args),
    /// Evaluate residuals and identities on a stored pair, or round-trip a document.
    Check(CheckArgs),
    /// Functional identities of the bar elements on a pair.
    Lemmas(LemmasArgs),
    /// Cocycle certification, series shuffle and pullback checks in the bar complex.
    Barcheck(BarcheckArgs),
    /// A multiple L-value with an error bound.
    Mlv(MlvArgs),
    /// The numeric KZ associator and its residuals.
    Phikz(PhikzArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqArg {
    Pentagon,
    Hexagons,
    MixedPentagon,
    Octagon,
    SpecialAction,
    Distribution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Pentagon,
    Hexagons,
    MixedPentagon,
    Octagon,
    SpecialAction,
    Distribution,
    DoubleShuffle,
    Regularization,
    Normalization,
    /// Bar tensor documents: cocycle and ideal annihilation.
    Cocycle,
}

#[derive(Args, Debug, Serialize)]
pub struct SolveArgs {
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long = "D")]
    pub d: u32,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub a: i64,
    /// Equations to impose; hexagons are added whenever mu is nonzero.
    #[arg(long, value_delimiter = ',', default_values = ["pentagon", "hexagons", "mixed-pentagon"])]
    pub eq: Vec<EqArg>,
    /// Fix free parameters pseudo-randomly from this seed instead of setting them to zero.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct Theorem1Args {
    #[arg(long = "N", required_unless_present = "input")]
    pub n: Option<u32>,
    #[arg(long = "D", required_unless_present = "input")]
    pub d: Option<u32>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    pub mu: Option<String>,
    #[arg(long, conflicts_with = "input")]
    pub seed: Option<u64>,
    /// Verify a stored pair instead of solving.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["n", "d"])]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct Theorem2Args {
    #[arg(long = "N", required_unless_present = "input")]
    pub n: Option<u32>,
    #[arg(long = "D", required_unless_present = "input")]
    pub d: Option<u32>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    pub a: Option<i64>,
    #[arg(long, conflicts_with = "input")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "PATH", conflicts_with_all = ["n", "d"])]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct CheckArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// What to evaluate; defaults to the equations recorded in the pair.
    #[arg(long, value_delimiter = ',')]
    pub eq: Vec<CheckKind>,
    /// Target levels N' for the distribution relation (default: all proper divisors).
    #[arg(long, value_delimiter = ',')]
    pub target: Vec<u32>,
    /// Weight bound for the regularization relation (default: the truncation degree).
    #[arg(long)]
    pub weight: Option<u32>,
    /// Check that the document survives serialization unchanged.
    #[arg(long)]
    pub roundtrip: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct LemmasArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5, 6])]
    pub lemma: Vec<u32>,
    /// Bound on the total weight of the indices.
    #[arg(long, default_value_t = 3)]
    pub weight: u32,
    #[arg(long = "N", required_unless_present = "input")]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 5, conflicts_with = "input")]
    pub seed: u64,
    #[arg(long, value_name = "PATH", conflicts_with = "n")]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct BarcheckArgs {
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub weight: u32,
    /// Also certify a stored bar tensor.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct MlvArgs {
    /// Index pair such as "1,2;0,0@1" (exponents; root exponents @ level).
    #[arg(long, allow_hyphen_values = true)]
    pub index: String,
    #[arg(long, default_value_t = 12)]
    pub digits: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct PhikzArgs {
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub weight: u32,
    #[arg(long, default_value_t = 12)]
    pub digits: u32,
    #[arg(long, default_value_t = 1e-5)]
    pub tolerance: f64,
    /// Matching point of the two local solutions in (0, 1).
    #[arg(long)]
    pub split: Option<f64>,
    /// Write all coefficients to this file.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .format_target(false)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("penta: {f}");
            return ExitCode::from(f.code());
        }
    };
    let doc = serde_json::to_string_pretty(&report.to_json()).expect("serializable") + "\n";
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &doc) {
            eprintln!("penta: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let out = if cli.json { doc } else { report.human() };
    let _ = std::io::stdout().write_all(out.as_bytes());
    ExitCode::from(if report.passed() { 0 } else { 1 })
}
