use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zygops_cli::{init_threads, run, Command, RunConfig};

#[derive(Parser)]
#[command(name = "zygops", version, about = "Generalized weighted composition operators on Zygmund-type spaces")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Boundedness, compactness and essential norm of one operator.
    Analyze(Common),
    /// Verdicts over a grid of (alpha, beta) or symbol parameters.
    Sweep(Common),
    /// Run property suites.
    Verify(Common),
    /// The monomial sequence j^(alpha-2) ‖D I^(j+1)‖.
    Monomials(Common),
    /// Weighted composition between weighted-type spaces.
    WeightedType(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a config key, e.g. --set grid.k_max=10.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Sub::Analyze(c) => (Command::Analyze, c),
        Sub::Sweep(c) => (Command::Sweep, c),
        Sub::Verify(c) => (Command::Verify, c),
        Sub::Monomials(c) => (Command::Monomials, c),
        Sub::WeightedType(c) => (Command::WeightedType, c),
    };
    let result = init_threads()
        .and_then(|_| RunConfig::load(&common.config, &common.set))
        .and_then(|mut config| {
            if let Some(out) = common.out {
                config.output.dir = Some(out);
            }
            run(command, &config)
        });
    match result {
        Ok(outcome) => {
            for l in outcome.lines {
                println!("{l}");
            }
            println!("report: {}", outcome.report.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("zygops: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
