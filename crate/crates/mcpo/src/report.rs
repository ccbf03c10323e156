use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{PipelineError, Result};
use crate::pipeline::RunReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Text,
}

pub const CSV_HEADER: [&str; 8] = [
    "scenario",
    "algorithm",
    "irregular_pieces",
    "total_panels",
    "material_usage_pct",
    "shared_edge_length",
    "seed",
    "duration_ms",
];

/// One CSV record per report. The seed is left empty for greedy runs.
pub fn csv_string(reports: &[RunReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("writing to memory");
    for r in reports {
        let m = &r.metrics;
        w.write_record([
            r.scenario.clone(),
            r.algorithm.name().to_string(),
            m.irregular_pieces.to_string(),
            m.total_panels.to_string(),
            format!("{:.2}", m.material_usage_pct),
            format!("{:.2}", m.shared_edge_length),
            r.seed().map(|s| s.to_string()).unwrap_or_default(),
            r.duration_ms.to_string(),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}

pub fn text_string(reports: &[RunReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let m = &r.metrics;
        let cell = r.panel.oriented(r.orientation);
        let _ = writeln!(out, "scenario        {}", r.scenario);
        let _ = writeln!(out, "algorithm       {}", r.algorithm);
        let _ = writeln!(
            out,
            "stock panel     {} ({} x {}, {:?})",
            r.panel.id, cell.width, cell.height, r.orientation
        );
        for s in &r.sections {
            let _ = writeln!(out, "  section {:<12} whole {:>4}  pieces {:>4}", s.name, s.whole_panels, s.pieces);
        }
        let _ = writeln!(out, "irregular       {}", m.irregular_pieces);
        let _ = writeln!(
            out,
            "panels          {} ({} whole + {} for nesting)",
            m.total_panels, m.whole_panels, m.nesting_panels
        );
        let _ = writeln!(out, "material usage  {:.2} %", m.material_usage_pct);
        let _ = writeln!(out, "shared edges    {:.2}", m.shared_edge_length);
        let _ = writeln!(out, "fitness         {:.2}", r.result.best_fitness.value());
        let _ = writeln!(out, "evaluations     {}", r.result.evaluations);
        let trace: Vec<String> = r
            .result
            .trace
            .iter()
            .map(|(i, f)| format!("{i}:{:.2}", f.value()))
            .collect();
        let _ = writeln!(out, "trace           {}", trace.join(" "));
        let _ = writeln!(out, "duration        {} ms", r.duration_ms);
        out.push('\n');
    }
    out
}

pub fn emit_report(reports: &[RunReport], format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let body = match format {
        ReportFormat::Csv => csv_string(reports),
        ReportFormat::Text => text_string(reports),
    };
    fs::write(path, body).map_err(|e| PipelineError::io(path, e))
}

pub fn save_report(r: &RunReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let json = serde_json::to_string_pretty(r).expect("reports serialise");
    fs::write(path, json).map_err(|e| PipelineError::io(path, e))
}

pub fn load_report(path: impl AsRef<Path>) -> Result<RunReport> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| PipelineError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
