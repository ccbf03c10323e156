use std::time::Instant;

use mcpo_core::nesting::Piece;
use mcpo_core::optimizers::{solve_ga, solve_greedy, solve_mc, OptimizationResult};
use mcpo_core::overlay::{rank_stock_panels, Orientation, OverlayPlan, StockPanel};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scenario::{AlgorithmConfig, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionSummary {
    pub name: String,
    pub whole_panels: usize,
    pub pieces: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub total_panels: usize,
    pub whole_panels: usize,
    pub nesting_panels: usize,
    /// Covered area over the area of every panel used, in percent.
    pub material_usage_pct: f64,
    pub shared_edge_length: f64,
    pub irregular_pieces: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub panel: StockPanel,
    pub orientation: Orientation,
    pub sections: Vec<SectionSummary>,
    pub overlays: Vec<OverlayPlan>,
    /// Merged off-cut pool; ids are dense and follow section order.
    pub pool: Vec<Piece>,
    /// Section index of every pool piece.
    pub pool_sections: Vec<usize>,
    pub algorithm: AlgorithmConfig,
    pub result: OptimizationResult,
    pub metrics: RunMetrics,
    pub duration_ms: u64,
}

impl RunReport {
    pub fn seed(&self) -> Option<u64> {
        self.algorithm.seed()
    }
}

/// Material usage recomputed from the plans embedded in a report.
pub fn material_usage(overlays: &[OverlayPlan], pool: &[Piece], total_panels: usize, panel: &StockPanel) -> f64 {
    let whole: f64 = overlays.iter().map(OverlayPlan::whole_area).sum();
    let pieces: f64 = pool.iter().map(Piece::area).sum();
    if total_panels == 0 {
        return 0.0;
    }
    100.0 * (whole + pieces) / (total_panels as f64 * panel.dims.area())
}

pub fn run_pipeline(s: &Scenario) -> Result<RunReport> {
    let start = Instant::now();
    let regions: Vec<_> = s.regions.iter().map(|r| r.region.clone()).collect();
    let choice = rank_stock_panels(&regions, &s.candidate_panels, s.origin, s.allow_panel_rotation)?
        .into_iter()
        .next()
        .expect("ranking covers at least one candidate");
    let panel = choice.panel().clone();
    let cell = panel.oriented(choice.orientation);

    let mut pool = Vec::new();
    let mut pool_sections = Vec::new();
    for (si, plan) in choice.plans.iter().enumerate() {
        for piece in &plan.pieces {
            pool.push(piece.clone().with_id(pool.len()));
            pool_sections.push(si);
        }
    }
    let sections: Vec<SectionSummary> = s
        .regions
        .iter()
        .zip(&choice.plans)
        .map(|(r, p)| SectionSummary {
            name: r.name.clone(),
            whole_panels: p.whole.len(),
            pieces: p.pieces.len(),
        })
        .collect();

    let result = match &s.algorithm {
        AlgorithmConfig::Greedy => solve_greedy(&pool, cell, s.policy, s.strategy)?,
        AlgorithmConfig::Mc(cfg) => solve_mc(&pool, cell, s.policy, s.strategy, cfg)?,
        AlgorithmConfig::Ga(cfg) => solve_ga(&pool, cell, s.policy, s.strategy, cfg)?,
    };

    let whole_panels: usize = choice.plans.iter().map(|p| p.whole.len()).sum();
    let nesting_panels = result.best_plan.panel_count();
    let total_panels = whole_panels + nesting_panels;
    let metrics = RunMetrics {
        total_panels,
        whole_panels,
        nesting_panels,
        material_usage_pct: material_usage(&choice.plans, &pool, total_panels, &panel),
        shared_edge_length: result.best_plan.metrics.shared_edge_total,
        irregular_pieces: pool.len(),
    };
    Ok(RunReport {
        scenario: s.name.clone(),
        panel,
        orientation: choice.orientation,
        sections,
        overlays: choice.plans,
        pool,
        pool_sections,
        algorithm: s.algorithm,
        result,
        metrics,
        duration_ms: start.elapsed().as_millis() as u64,
    })
}
