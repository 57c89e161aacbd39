use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ramify_cli::{Direction, Failure, Outcome, Structure};
use ramify_core::tower::oracle::DEFAULT_PRECISION;
use ramify_core::Execution;

#[derive(Parser)]
#[command(name = "ramify", version, about = "Ramification data of Artin-Schreier covers and towers")]
struct Cli {
    /// Input document, `-` for stdin.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Output file, `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    /// Use the data-parallel code paths.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    ToUpper,
    ToLower,
}

#[derive(Subcommand)]
enum Command {
    /// Standard form, conductor and connectedness of a cover.
    StandardForm,
    /// Convert a filtration between lower and upper numbering.
    Jumps {
        #[arg(long, value_enum)]
        direction: Dir,
    },
    /// Bounds on the dimension of the deformation space.
    Dimension {
        #[arg(long)]
        abelian: bool,
        #[arg(long)]
        ordinary: bool,
        #[arg(long)]
        reducible: bool,
    },
    /// Lower jumps of a tower, analytic and by the valuation oracle.
    Verify {
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
    /// The quaternion family over F_q.
    QuaternionDemo {
        #[arg(long)]
        field_size: u64,
        #[arg(long)]
        sweep: bool,
    },
}

fn read_input(path: &str) -> io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(PathBuf::from(path))
    }
}

fn write_output(path: &str, text: &str) -> io::Result<()> {
    if path == "-" {
        io::stdout().write_all(text.as_bytes())
    } else {
        fs::write(path, text)
    }
}

fn run(cli: &Cli) -> Outcome {
    let exec = Execution::from_flag(cli.parallel);
    let input = || read_input(&cli.input).map_err(|e| Failure::Parse(format!("{}: {e}", cli.input)));
    match &cli.command {
        Command::StandardForm => ramify_cli::standard_form(&input()?),
        Command::Jumps { direction } => {
            let d = match direction {
                Dir::ToUpper => Direction::ToUpper,
                Dir::ToLower => Direction::ToLower,
            };
            ramify_cli::jumps(&input()?, d)
        }
        Command::Dimension {
            abelian,
            ordinary,
            reducible,
        } => {
            let s = Structure {
                abelian: *abelian,
                ordinary: *ordinary,
                reducible: *reducible,
            };
            ramify_cli::dimension(&input()?, s, exec)
        }
        Command::Verify { precision } => ramify_cli::verify(&input()?, *precision),
        Command::QuaternionDemo { field_size, sweep } => {
            ramify_cli::quaternion_demo(*field_size, *sweep, exec)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => match write_output(&cli.output, &ramify_cli::render(&v)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{}: {e}", cli.output);
                ExitCode::from(1)
            }
        },
        Err(f) => {
            eprint!("{}", ramify_cli::render(&f.to_json()));
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
