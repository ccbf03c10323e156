//! File formats, orchestration and drawings around `mcpo-core`.
//!
//! [`run_pipeline`] takes a [`Scenario`] through both phases: one stock
//! panel is chosen for all sections, each section is tiled, and the off-cuts
//! of every section are nested together as one pool.

pub mod error;
pub mod pipeline;
pub mod render;
pub mod report;
pub mod scenario;

pub use error::{PipelineError, Result};
pub use pipeline::{material_usage, run_pipeline, RunMetrics, RunReport, SectionSummary};
pub use render::{render_layout, svg_string, View};
pub use report::{csv_string, emit_report, load_report, save_report, text_string, ReportFormat};
pub use scenario::{load_scenario, parse_scenario, save_scenario, scenario_to_toml, AlgorithmConfig, GeometrySource, Scenario, Section};
