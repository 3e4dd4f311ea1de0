//! Command-line front end for [`matchlab`].
//!
//! [`run`] is the whole program; `main` only wires it to the process
//! streams, which keeps every subcommand testable in-process.

mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::Cli;
use output::Artifact;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(matchlab::Error),
    Io(String),
    /// A closed form disagreed with the generic engine.
    Mismatch(String),
    /// The command ran but its check failed; the artifact is still written.
    Defect(Box<Artifact>, String),
}

impl From<matchlab::Error> for CliError {
    fn from(e: matchlab::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Domain(e) => format!("error: {e}"),
            CliError::Io(m) => format!("i/o error: {m}"),
            CliError::Mismatch(m) => format!("engine mismatch: {m}"),
            CliError::Defect(_, m) => format!("check failed: {m}"),
        }
    }
}

/// Parses `argv`, runs the subcommand and returns the exit code: 0 on
/// success, 1 on domain or I/O errors and failed checks, 2 on usage errors.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                2
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.message());
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| CliError::Io(e.to_string()))?;
    match pool.install(|| commands::execute(cli)) {
        Ok(artifact) => output::emit(cli, &artifact, stdout),
        Err(CliError::Defect(artifact, msg)) => {
            output::emit(cli, &artifact, stdout)?;
            Err(CliError::Defect(artifact, msg))
        }
        Err(e) => Err(e),
    }
}
