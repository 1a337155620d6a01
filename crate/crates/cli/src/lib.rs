//! Command-line front end: parse a structure-constant document, build the
//! objects it names and run a verification pipeline on them.

pub mod build;
pub mod document;
pub mod export;
pub mod report;
pub mod run;

use std::time::Instant;

use hgx_core::linalg::{PrimeField, Rationals};

pub use document::{parse, Diagnostic, Document};
pub use report::{Report, Status};
pub use run::{Command, Options};

/// Why a pipeline stopped: bad input, or an error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid input")]
    Input(Vec<Diagnostic>),
    #[error(transparent)]
    Core(#[from] hgx_core::Error),
}

/// Run `cmd` on a parsed document.
pub fn run_document(doc: &Document, cmd: Command, file: &str, opts: &Options) -> Report {
    let start = Instant::now();
    let mut report = Report::new(cmd.name(), file, opts.object.as_deref());
    report.max_degree = Some(doc.max_degree);
    match doc.field {
        document::FieldDoc::Fp { p } => match PrimeField::new(p) {
            Ok(f) => {
                report.field = Some(format!("F_{p}"));
                run::run_on(f, doc, cmd, opts, &mut report);
            }
            Err(e) => report.diagnostics.push(Diagnostic::new("field.p", e.to_string())),
        },
        document::FieldDoc::Q => {
            report.field = Some("Q".into());
            run::run_on(Rationals, doc, cmd, opts, &mut report);
        }
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    report.finish();
    report
}

/// Parse `text` and run `cmd` on it.
pub fn run_text(text: &str, cmd: Command, file: &str, opts: &Options) -> Report {
    match parse(text) {
        Ok(doc) => run_document(&doc, cmd, file, opts),
        Err(diags) => {
            let mut report = Report::new(cmd.name(), file, opts.object.as_deref());
            report.diagnostics = diags;
            report.finish();
            report
        }
    }
}
