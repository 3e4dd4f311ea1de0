use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::args::{Cli, Format};
use crate::CliError;

/// Rectangular result for CSV output.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N], rows: Vec<Vec<String>>) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows }
    }
}

/// Everything a subcommand produces, before formatting.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub text: String,
    pub result: Value,
    pub table: Option<Table>,
}

fn config_value(cli: &Cli) -> Value {
    serde_json::to_value(cli).expect("config is serializable")
}

fn render_json(cli: &Cli, artifact: &Artifact) -> String {
    let envelope = json!({
        "engine": matchlab::ENGINE_VERSION,
        "config": config_value(cli),
        "result": artifact.result,
    });
    let mut s = serde_json::to_string_pretty(&envelope).expect("valid JSON");
    s.push('\n');
    s
}

fn render_csv(cli: &Cli, artifact: &Artifact) -> Result<String, CliError> {
    let table = artifact
        .table
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{} has no tabular output", cli.command.name())))?;
    let mut out = format!("# {}\n", config_value(cli)).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&table.header).map_err(io)?;
        for row in &table.rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(String::from_utf8(out).expect("CSV of UTF-8 fields"))
}

fn target(out: &Path, format: Format, several: bool) -> PathBuf {
    if several {
        let mut name = out.as_os_str().to_owned();
        name.push(".");
        name.push(format.extension());
        PathBuf::from(name)
    } else {
        out.to_path_buf()
    }
}

/// Text always goes to stdout. JSON and CSV go to `--out` when given and
/// to stdout otherwise.
pub fn emit(cli: &Cli, artifact: &Artifact, stdout: &mut dyn Write) -> Result<(), CliError> {
    let files: Vec<Format> = cli.format.iter().copied().filter(|f| *f != Format::Text).collect();
    let several = files.len() > 1;
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    for &format in &cli.format {
        let body = match format {
            Format::Text => {
                writeln!(stdout, "{}", artifact.text).map_err(io)?;
                continue;
            }
            Format::Json => render_json(cli, artifact),
            Format::Csv => render_csv(cli, artifact)?,
        };
        match &cli.out {
            Some(out) => {
                let path = target(out, format, several);
                std::fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            None => stdout.write_all(body.as_bytes()).map_err(io)?,
        }
    }
    Ok(())
}
