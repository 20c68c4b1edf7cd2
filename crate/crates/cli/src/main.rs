use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use algd_cli::job::{run, Command, Job};

/// Exact integrability certificates and integrable lifts for transitive
/// abelian Lie algebroids.
///
/// Every subcommand reads one JSON input file and writes one JSON report,
/// byte-identical across runs for identical inputs. Set TOOL_LOG=info for
/// timing output on stderr.
#[derive(Parser)]
#[command(name = "algd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Betti numbers, torsion and cycle bases of a chain complex
    Homology(CommonArgs),
    /// Monodromy generators and the discreteness decision
    /// (exit code 2 when not integrable)
    Integrability(CommonArgs),
    /// The Almeida-Molino integrable lift
    LiftAm(CommonArgs),
    /// The de Rham integrable lift
    LiftDr(CommonArgs),
    /// Build both lifts and verify every extension property
    Verify(CommonArgs),
    /// Finite deck-group action: assumptions, equivariance and the
    /// discreteness certificate
    Equivariant(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Input JSON file
    #[arg(long)]
    input: PathBuf,
    /// Report file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Pretty-print the report
    #[arg(long)]
    pretty: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("TOOL_LOG")).init();
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        CliCommand::Homology(a) => (Command::Homology, a),
        CliCommand::Integrability(a) => (Command::Integrability, a),
        CliCommand::LiftAm(a) => (Command::LiftAm, a),
        CliCommand::LiftDr(a) => (Command::LiftDr, a),
        CliCommand::Verify(a) => (Command::Verify, a),
        CliCommand::Equivariant(a) => (Command::Equivariant, a),
    };
    let job = Job {
        command,
        input: args.input,
        output: args.output,
        pretty: args.pretty,
    };
    let report = run(&job);
    let text = report.to_json(job.pretty);
    let write_result = match &job.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = write_result {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(report.exit_code() as u8)
}
