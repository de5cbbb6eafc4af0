use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::{CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "coxforge", version, about = "Rational surface automorphisms fixing three concurrent lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Write the report here instead of stdout.
    #[arg(long = "out", global = true)]
    out_path: Option<PathBuf>,

    /// Width of root enclosures, e.g. `1e-12` or `1/1000`.
    #[arg(long, global = true, env = "COXFORGE_EPS", default_value = "1e-12")]
    eps: String,

    /// Seed for sampled points in birational checks.
    #[arg(long, global = true, default_value_t = coxforge::groupengine::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Line rotation in cycle notation: id, (12), (123), ...
    #[arg(long, conflicts_with = "sigma")]
    pub tau: Option<String>,
    /// Orbit-data permutation; the first tau with tau^n = sigma is used.
    #[arg(long)]
    pub sigma: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a map and verify its orbit data.
    Construct(MapArgs),
    /// Track the exceptional-line orbits of a map.
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
    },
    /// The induced action on the Picard lattice.
    Action(MapArgs),
    /// Characteristic polynomial of the action against the orbit-data formula.
    Charpoly(MapArgs),
    /// Salem predicates; without --coeffs, the standard suite.
    Salem {
        /// Coefficients from the leading term down, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        #[arg(long, default_value_t = 5)]
        max_power: usize,
    },
    /// Relations, normal forms and structure of the generated group.
    Group {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Also verify the dihedral and commutation relations.
        #[arg(long)]
        certify: bool,
        /// Report on one word, e.g. "f(12) fid^-1".
        #[arg(long)]
        word: Option<String>,
    },
    /// The non-realizability certificate for the W_14 element.
    Theoremc,
    /// Compare the derived n = 5 maps and actions with the printed ones.
    Errata,
    /// Construct every tau and classify the group for a range of n.
    Sweep {
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
}

pub struct Ctx {
    pub eps: num_rational::BigRational,
    pub seed: u64,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let eps = coxforge::exactnum::parse_rational_literal(&cli.eps).map_err(|e| CliError::Usage(e.to_string()))?;
    if eps <= num_rational::BigRational::from_integer(0.into()) {
        return Err(CliError::Usage("eps must be positive".into()));
    }
    let ctx = Ctx { eps, seed: cli.seed };
    match &cli.command {
        Command::Construct(m) => commands::construct(m),
        Command::Orbit { map, max_iter } => commands::orbit(map, *max_iter),
        Command::Action(m) => commands::action(&ctx, m),
        Command::Charpoly(m) => commands::charpoly(&ctx, m),
        Command::Salem { coeffs, max_power } => commands::salem(coeffs.as_deref(), *max_power),
        Command::Group { n, max_len, certify, word } => commands::group(&ctx, *n, *max_len, *certify, word.as_deref()),
        Command::Theoremc => Ok(commands::theoremc()),
        Command::Errata => commands::errata(),
        Command::Sweep { n_min, n_max, max_len } => commands::sweep(*n_min, *n_max, *max_len),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), String> {
    match &cli.out_path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun `coxforge --help` for usage.");
            return ExitCode::from(2);
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let rendered = match cli.output {
        Output::Json => report.json_string(),
        Output::Text => report.text.clone(),
    };
    if let Err(e) = emit(&cli, &rendered) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
