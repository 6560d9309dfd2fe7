use std::fs;
use std::io::Write;

use crate::args::{Format, OutputArgs};
use crate::commands::Report;
use crate::{CliError, CliResult};

/// Renders a report in the requested format.
pub fn render<R: Report>(report: &R, format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Other(format!("serializing report: {e}")))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in report.rows() {
                writer
                    .serialize(row)
                    .map_err(|e| CliError::Other(format!("writing csv: {e}")))?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| CliError::Other(format!("writing csv: {e}")))?;
            String::from_utf8(bytes).map_err(|e| CliError::Other(e.to_string()))
        }
    }
}

/// Writes the rendered report to `--output` or standard output.
pub fn emit<R: Report>(report: &R, out: &OutputArgs) -> CliResult<()> {
    let text = render(report, out.format)?;
    match &out.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Other(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Other(format!("stdout: {e}"))),
    }
}
