use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "schemata", version)]
#[command(about = "Stable models of normal and cardinality-constraint logic programs")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Refuse programs whose universe has more atoms than this
    #[arg(long, global = true)]
    max_atoms: Option<usize>,

    /// Give up model enumeration after this many milliseconds
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Equations,
    Bruteforce,
    Schemes,
    /// Run every method and report whether they agree
    Both,
}

/// `--minimal` (default) or `--full` support families.
#[derive(Args, Clone, Copy, Debug)]
pub struct Reduction {
    /// Use inclusion-minimal (or ⪯-minimal) supports only
    #[arg(long, conflicts_with = "full")]
    minimal: bool,

    /// Use the supports of all proof schemes
    #[arg(long)]
    full: bool,
}

impl Reduction {
    pub fn reduced(&self) -> bool {
        !self.full
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the stable models of a program
    Solve {
        /// Program file, `-` for standard input
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Equations)]
        method: Method,
        #[command(flatten)]
        reduction: Reduction,
        /// Write the defining-equation theory as DIMACS CNF
        #[arg(long)]
        export_cnf: Option<PathBuf>,
    },
    /// Check whether an interpretation is a stable model
    Check {
        file: PathBuf,
        /// Comma-separated atoms of the interpretation
        #[arg(long, default_value = "")]
        model: String,
    },
    /// Print the Gelfond-Lifschitz reduct with respect to an interpretation
    Reduct {
        file: PathBuf,
        #[arg(long, default_value = "")]
        model: String,
    },
    /// List the irredundant proof schemes concluding an atom
    Schemes {
        file: PathBuf,
        #[arg(long)]
        atom: String,
        /// Longest scheme to report; defaults to the universe size
        #[arg(long, alias = "max")]
        max_steps: Option<usize>,
    },
    /// Print the supports of every atom, or of one atom
    Supports {
        file: PathBuf,
        #[arg(long)]
        atom: Option<String>,
        #[command(flatten)]
        reduction: Reduction,
    },
    /// Print the defining equations of a program
    Equations {
        file: PathBuf,
        #[command(flatten)]
        reduction: Reduction,
        #[arg(long)]
        export_cnf: Option<PathBuf>,
    },
    /// Operator experiments
    #[command(subcommand)]
    Lab(LabCommand),
    /// Programs with cardinality constraints
    #[command(subcommand)]
    Cc(CcCommand),
}

#[derive(Subcommand)]
enum LabCommand {
    /// Check that antimonotone tables are realized as GL operators
    Realize {
        #[arg(long, default_value_t = 3)]
        atoms: usize,
        /// Check every antimonotone table (at most 3 atoms)
        #[arg(long)]
        exhaustive: bool,
        /// Number of random tables when not exhaustive
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Minimal-support counts along a program family
    Fsp {
        /// e2 or ex3
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 6)]
        to: usize,
    },
    /// Check the GL operator of a program for antimonotonicity
    Antimono { file: PathBuf },
}

#[derive(Subcommand)]
enum CcCommand {
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Equations)]
        method: Method,
        #[command(flatten)]
        reduction: Reduction,
        #[arg(long)]
        export_cnf: Option<PathBuf>,
    },
    /// Print the NSS-reduct with respect to an interpretation
    Reduct {
        file: PathBuf,
        #[arg(long, default_value = "")]
        model: String,
    },
    Supports {
        file: PathBuf,
        #[arg(long)]
        atom: Option<String>,
        #[command(flatten)]
        reduction: Reduction,
    },
    Equations {
        file: PathBuf,
        #[command(flatten)]
        reduction: Reduction,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = commands::Options {
        max_atoms: cli.max_atoms,
        timeout: cli.timeout_ms.map(std::time::Duration::from_millis),
    };
    let result = match cli.command {
        Command::Solve {
            file,
            method,
            reduction,
            export_cnf,
        } => commands::solve(&opts, &file, method, reduction, export_cnf.as_deref()),
        Command::Check { file, model } => commands::check(&opts, &file, &model),
        Command::Reduct { file, model } => commands::reduct(&opts, &file, &model),
        Command::Schemes {
            file,
            atom,
            max_steps,
        } => commands::schemes(&opts, &file, &atom, max_steps),
        Command::Supports {
            file,
            atom,
            reduction,
        } => commands::supports(&opts, &file, atom.as_deref(), reduction),
        Command::Equations {
            file,
            reduction,
            export_cnf,
        } => commands::equations(&opts, &file, reduction, export_cnf.as_deref()),
        Command::Lab(LabCommand::Realize {
            atoms,
            exhaustive,
            samples,
            seed,
        }) => commands::lab_realize(atoms, exhaustive, samples, seed),
        Command::Lab(LabCommand::Fsp { family, to }) => commands::lab_fsp(&family, to),
        Command::Lab(LabCommand::Antimono { file }) => commands::lab_antimono(&opts, &file),
        Command::Cc(CcCommand::Solve {
            file,
            method,
            reduction,
            export_cnf,
        }) => commands::cc_solve(&opts, &file, method, reduction, export_cnf.as_deref()),
        Command::Cc(CcCommand::Reduct { file, model }) => commands::cc_reduct(&opts, &file, &model),
        Command::Cc(CcCommand::Supports {
            file,
            atom,
            reduction,
        }) => commands::cc_supports(&opts, &file, atom.as_deref(), reduction),
        Command::Cc(CcCommand::Equations { file, reduction }) => {
            commands::cc_equations(&opts, &file, reduction)
        }
    };
    match result {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", out.json),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
