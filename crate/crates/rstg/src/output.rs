//! CSV and JSON emission.

use std::io::Write;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::experiments::{ExperimentResult, TrialRecord};
use crate::io::format_g17;
use crate::Result;

/// Integral values print as integers, everything else with 17 significant
/// digits.
pub fn format_value(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 9.007_199_254_740_992e15 {
        format!("{}", x as i64)
    } else {
        format_g17(x)
    }
}

pub fn csv_header(columns: &[String]) -> String {
    let mut fields = vec!["trial", "seed", "n", "p", "status"];
    fields.extend(columns.iter().map(String::as_str));
    fields.join(",")
}

pub fn csv_row(r: &TrialRecord) -> String {
    let mut fields = vec![
        r.trial.to_string(),
        r.seed.to_string(),
        r.n.to_string(),
        r.p.map(format_g17).unwrap_or_default(),
        r.status.name().to_string(),
    ];
    fields.extend(r.values.iter().map(|v| v.map(format_value).unwrap_or_default()));
    fields.join(",")
}

/// Streams records as CSV rows after the header.
pub struct CsvSink<W: Write> {
    out: W,
}

impl<W: Write> CsvSink<W> {
    pub fn new(mut out: W, columns: &[String]) -> Result<Self> {
        writeln!(out, "{}", csv_header(columns))?;
        Ok(CsvSink { out })
    }

    pub fn write(&mut self, r: &TrialRecord) -> Result<()> {
        writeln!(self.out, "{}", csv_row(r))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Whole result as CSV.
pub fn write_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut sink = CsvSink::new(out, &result.columns)?;
    for r in &result.records {
        sink.write(r)?;
    }
    sink.finish()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    config: &'a ExperimentConfig,
    columns: &'a [String],
    records: &'a [TrialRecord],
    summaries: &'a [crate::experiments::PointSummary],
    report: &'a crate::experiments::Report,
}

/// Whole result as one JSON document echoing the config.
pub fn write_json<W: Write>(result: &ExperimentResult, mut out: W) -> Result<()> {
    let doc = JsonDocument {
        config: &result.config,
        columns: &result.columns,
        records: &result.records,
        summaries: &result.summaries,
        report: &result.report,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}
