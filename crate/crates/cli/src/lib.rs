//! Command-line front end for `qphase`.
//!
//! Subcommands print a JSON run record (or CSV) whose `command` field is a
//! fully explicit invocation reproducing the same record.

pub mod angle;
pub mod args;
pub mod commands;
pub mod record;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use commands::{execute, exit, Failure, Layout, Outcome, Report};

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    exit::OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    exit::USAGE
                }
            };
        }
    };
    let outcome = execute(&cli.command);
    if let Some(f) = &outcome.failure {
        let _ = writeln!(stderr, "error[{}]: {}", f.code, f.message);
    }
    // a CSV table has no place for an error, so failures only go to stderr
    if outcome.failure.is_some() && outcome.format == args::Format::Csv {
        return outcome.exit_code();
    }
    let written = match &outcome.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = io::BufWriter::new(f);
            render(&outcome, &mut w)?;
            w.flush()
        }),
        None => render(&outcome, stdout),
    };
    match written {
        Ok(()) => outcome.exit_code(),
        Err(e) => {
            let _ = writeln!(stderr, "error[io]: {e}");
            exit::IO
        }
    }
}

/// Serializes an outcome in its requested format.
pub fn render(outcome: &Outcome, w: &mut dyn Write) -> io::Result<()> {
    use args::Format;
    match (&outcome.report, outcome.format) {
        (Report::Record(rec, _), Format::Json) => json(rec, w),
        (Report::Sweep(rep), Format::Json) => json(rep, w),
        (Report::Record(rec, Layout::Histogram), Format::Csv) => {
            record::write_histogram_csv(rec, w).map_err(io::Error::other)
        }
        (Report::Record(rec, Layout::Summary), Format::Csv) => {
            record::write_summary_csv(rec, w).map_err(io::Error::other)
        }
        (Report::Sweep(rep), Format::Csv) => {
            record::write_sweep_csv(&rep.rows, w).map_err(io::Error::other)
        }
    }
}

fn json<T: serde::Serialize>(value: &T, w: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}
