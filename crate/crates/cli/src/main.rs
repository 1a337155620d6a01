use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hgx::{run_text, Command, Diagnostic, Options, Report};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Exact verification of chain-level Hopf-Galois structures.
///
/// Exit codes: 0 all checks pass, 1 a check failed, 2 input or usage error.
#[derive(Parser, Debug)]
#[command(name = "hgx", version)]
struct Cli {
    command: Command,
    file: PathBuf,
    /// Run on this object, morphism or extension only.
    #[arg(long)]
    object: Option<String>,
    /// Highest degree to report.
    #[arg(long)]
    upto: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let file = cli.file.display().to_string();
    let opts = Options {
        object: cli.object.clone(),
        upto: cli.upto,
    };
    let report = match std::fs::read_to_string(&cli.file) {
        Ok(text) => run_text(&text, cli.command, &file, &opts),
        Err(e) => {
            let mut r = Report::new(cli.command.name(), &file, opts.object.as_deref());
            r.diagnostics.push(Diagnostic::new(&file, e.to_string()));
            r.finish();
            r
        }
    };
    let rendered = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(report.exit_code as u8)
}
