use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const TOOL: &str = "lacunary";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const CSV_PREFIX: &str = "# lacunary ";

/// What a command produced, before it is framed as CSV or JSON.
pub struct Output {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

impl Output {
    pub fn new(header: &[&'static str], json: Value) -> Self {
        Self { header: header.to_vec(), rows: Vec::new(), json }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    /// Adds one row per record via serde, in the record's field order.
    pub fn serialize_rows<T: Serialize>(&mut self, records: &[T]) -> Result<(), CliError> {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for r in records {
            writer.serialize(r)?;
        }
        let bytes = writer.into_inner().map_err(|e| CliError::validation("io", e.to_string()))?;
        let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(bytes.as_slice());
        for record in reader.records() {
            self.rows.push(record?.iter().map(str::to_owned).collect());
        }
        Ok(())
    }
}

/// Shortest round-trip form of a float; `inf`/`nan` spelled out.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn render(config: &RunConfig, output: &Output) -> Result<String, CliError> {
    let config_json = serde_json::to_value(config).expect("configs serialize");
    match config.format {
        Format::Json => {
            let doc = json!({ "tool": TOOL, "version": VERSION, "config": config_json, "result": output.json });
            let mut text = serde_json::to_string_pretty(&doc).expect("artifacts serialize");
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let mut text = format!("{CSV_PREFIX}{VERSION} config={config_json}\n");
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(&output.header)?;
            for row in &output.rows {
                writer.write_record(row)?;
            }
            let bytes = writer.into_inner().map_err(|e| CliError::validation("io", e.to_string()))?;
            text.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
            Ok(text)
        }
    }
}

/// Recovers the config embedded in a CSV or JSON artifact.
pub fn parse_artifact_config(text: &str) -> Result<RunConfig, CliError> {
    let bad = |msg: String| CliError::validation("artifact", msg);
    if let Some(rest) = text.strip_prefix(CSV_PREFIX) {
        let line = rest.lines().next().unwrap_or_default();
        let (_, config) = line.split_once(" config=").ok_or_else(|| bad("CSV header lacks config".into()))?;
        return serde_json::from_str(config).map_err(|e| bad(format!("embedded config: {e}")));
    }
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(format!("artifact is neither CSV nor JSON: {e}")))?;
    if doc.get("tool").and_then(Value::as_str) != Some(TOOL) {
        return Err(bad("artifact was not written by this tool".into()));
    }
    let config = doc.get("config").cloned().ok_or_else(|| bad("JSON artifact lacks config".into()))?;
    serde_json::from_value(config).map_err(|e| bad(format!("embedded config: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Command, PartialConfig};

    #[test]
    fn number_format() {
        assert_eq!(num(10.0), "10.0");
        assert_eq!(num(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(num(f64::INFINITY), "inf");
    }

    #[test]
    fn header_round_trip() {
        let mut cfg = PartialConfig { d: Some(2), spectrum: Some(vec![100]), ..Default::default() }
            .resolve(Command::Ratio)
            .unwrap();
        let out = Output::new(&["a"], json!({}));
        for format in [Format::Csv, Format::Json] {
            cfg.format = format;
            let text = render(&cfg, &out).unwrap();
            assert_eq!(parse_artifact_config(&text).unwrap(), cfg);
        }
        assert!(parse_artifact_config("# lacunary 0.1.0 nothing").is_err());
        assert!(parse_artifact_config(r#"{"tool":"other","config":{}}"#).is_err());
    }
}
