use std::process::ExitCode;

use clap::{Parser, Subcommand};

use af_tail::harness::{run_suites, HarnessError, Source, VerifyConfig};
use af_tail::tower::{block_multiplicities, dimension_vector};
use af_tail::{BratteliDiagram, Vertex};

/// Exact finite-level models of the AF-algebra of a Bratteli diagram.
#[derive(Parser)]
#[command(name = "af-tail", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the diagram conditions and list every violation.
    Validate {
        /// Diagram file or built-in name (car, pascal, fibonacci, uhf3).
        source: String,
    },
    /// Number of rooted paths ending at each vertex of a level.
    Counts {
        source: String,
        #[arg(long)]
        level: usize,
    },
    /// Block sizes and dimension of A_n for each level up to a bound.
    Dims {
        source: String,
        #[arg(long)]
        max_level: usize,
    },
    /// Run the verification suites.
    Verify {
        source: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Restrict to the named suite; may be repeated.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
    /// Multiplicity matrix realized by the embedding A_n -> A_{n+1}.
    EmbedMatrix {
        source: String,
        #[arg(long)]
        level: usize,
    },
}

fn load(source: &str) -> Result<BratteliDiagram, HarnessError> {
    Source::parse(source).load(None)
}

fn run(command: Command) -> Result<bool, HarnessError> {
    match command {
        Command::Validate { source } => {
            let report = load(&source)?.validate();
            for v in &report {
                println!("{v}");
            }
            if report.is_empty() {
                println!("VALID");
            }
            Ok(report.is_empty())
        }
        Command::Counts { source, level } => {
            let d = load(&source)?;
            for (v, c) in d.path_counts(level)?.iter().enumerate() {
                println!("{} {c}", Vertex::new(level, v));
            }
            Ok(true)
        }
        Command::Dims { source, max_level } => {
            let d = load(&source)?;
            for n in 0..=max_level {
                let (blocks, dim) = dimension_vector(&d, n)?;
                let blocks: Vec<String> = blocks.iter().map(ToString::to_string).collect();
                println!("level {n} blocks {} dim {dim}", blocks.join(" "));
            }
            Ok(true)
        }
        Command::Verify { source, depth, seed, samples, suites } => {
            let config = VerifyConfig { source: Source::parse(&source), depth, seed, samples, suites };
            let report = run_suites(&config)?;
            print!("{}", report.render());
            Ok(report.passed())
        }
        Command::EmbedMatrix { source, level } => {
            let d = load(&source)?;
            for row in block_multiplicities(d.into(), level)? {
                let row: Vec<String> = row.iter().map(ToString::to_string).collect();
                println!("{}", row.join(" "));
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
