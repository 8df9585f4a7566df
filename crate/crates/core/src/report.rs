//! Machine-readable analysis reports.

use crate::abstraction::{CutRound, RunResult};
use crate::analysis::{AnalysisConfig, OutputBound};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub program: String,
    pub config: ConfigEcho,
    pub outputs: Vec<OutputReport>,
    pub abstraction_rounds: Vec<CutRound>,
    pub fallback_direct: bool,
    pub total_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub abstraction_enabled: bool,
    pub min_depth: u32,
    pub max_depth: u32,
    pub force_depth: Option<u32>,
    pub max_opcount: u64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_boxes: u64,
    pub input_rounding: bool,
    pub transcendental_factor: f64,
    pub rng_seed: u64,
    pub deterministic: bool,
}

#[derive(Debug, Serialize)]
pub struct OutputReport {
    pub name: String,
    pub abs_error_bound: f64,
    pub converged: bool,
    pub function_range: [f64; 2],
    pub op_count: usize,
    pub analysis_seconds: f64,
    pub optimizer_stats: crate::analysis::OptStats,
}

impl Report {
    /// `deterministic` zeroes wall-clock fields so reports are
    /// byte-comparable across runs.
    pub fn new(
        program: &str,
        cfg: &AnalysisConfig,
        run: RunResult,
        seconds: f64,
        deterministic: bool,
    ) -> Report {
        let t = if deterministic { 0.0 } else { seconds };
        Report {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            program: program.to_string(),
            config: ConfigEcho {
                abstraction_enabled: cfg.abstraction_enabled,
                min_depth: cfg.min_depth,
                max_depth: cfg.max_depth,
                force_depth: cfg.force_depth,
                max_opcount: cfg.max_opcount,
                abs_tol: cfg.opt.abs_tol,
                rel_tol: cfg.opt.rel_tol,
                max_boxes: cfg.opt.max_boxes,
                input_rounding: cfg.input_rounding,
                transcendental_factor: cfg.rounding.transcendental_factor,
                rng_seed: cfg.rng_seed,
                deterministic,
            },
            outputs: run
                .bounds
                .into_iter()
                .map(|b: OutputBound| OutputReport {
                    name: b.name,
                    abs_error_bound: b.abs_error_bound,
                    converged: b.converged,
                    function_range: [b.range_lo, b.range_hi],
                    op_count: b.op_count,
                    analysis_seconds: t,
                    optimizer_stats: b.stats,
                })
                .collect(),
            abstraction_rounds: run.rounds,
            fallback_direct: run.fallback_direct,
            total_seconds: t,
        }
    }
}
