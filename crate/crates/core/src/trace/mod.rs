//! Per-cycle timing records and their summaries, exports and renderings.
//!
//! Every cycle carries two clocks per phase: wall-clock nanoseconds measured
//! on the host, and simulated milliseconds charged by the environment. Only
//! actions consume simulated time, so only the intention-execution phase
//! ever has a nonzero simulated duration.

mod export;
mod render;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asl::Opcode;

pub use export::{export, parse_csv, parse_jsonl, ExportFormat, TraceParseError};
pub use render::{render_timeline, TimelineStyle, TRACK_LABELS};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub wall_clock_ns: u64,
    pub simulated_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutedFormula {
    pub opcode: Opcode,
    pub atom: String,
    /// Plan whose body the formula belongs to.
    pub plan: usize,
    /// Creation ordinal of the intention that ran it.
    pub intention: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CycleTrace {
    pub cycle: u64,
    pub belief_update: PhaseTiming,
    pub plan_selection: PhaseTiming,
    pub intention_execution: PhaseTiming,
    /// Events enqueued by the belief update phase.
    pub belief_events: u32,
    /// Events enqueued during this cycle (belief update plus execution).
    pub events_posted: u32,
    pub events_drained: u32,
    /// Drained events that found no applicable plan.
    pub events_dropped: u32,
    /// Last plan selected during the plan-selection phase.
    pub selected_plan: Option<usize>,
    pub executed_formula: Option<ExecutedFormula>,
    pub warnings: Vec<String>,
}

impl CycleTrace {
    pub fn simulated_ms(&self) -> f64 {
        self.belief_update.simulated_ms
            + self.plan_selection.simulated_ms
            + self.intention_execution.simulated_ms
    }
}

/// Zeroes the wall-clock fields so traces can be compared byte for byte.
pub fn zero_wallclock(traces: &mut [CycleTrace]) {
    for t in traces {
        t.belief_update.wall_clock_ns = 0;
        t.plan_selection.wall_clock_ns = 0;
        t.intention_execution.wall_clock_ns = 0;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PhaseStats {
    pub avg_wall_ns: f64,
    pub max_wall_ns: u64,
    pub avg_sim_ms: f64,
    pub max_sim_ms: f64,
}

impl PhaseStats {
    fn of(phases: impl Iterator<Item = PhaseTiming>) -> PhaseStats {
        let mut stats = PhaseStats::default();
        let (mut n, mut wall_sum, mut sim_sum) = (0u64, 0u128, 0.0f64);
        for p in phases {
            n += 1;
            wall_sum += p.wall_clock_ns as u128;
            sim_sum += p.simulated_ms;
            stats.max_wall_ns = stats.max_wall_ns.max(p.wall_clock_ns);
            stats.max_sim_ms = stats.max_sim_ms.max(p.simulated_ms);
        }
        if n > 0 {
            stats.avg_wall_ns = wall_sum as f64 / n as f64;
            stats.avg_sim_ms = sim_sum / n as f64;
        }
        stats
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub total_cycles: u64,
    pub belief_update: PhaseStats,
    pub plan_selection: PhaseStats,
    pub intention_execution: PhaseStats,
    pub total_simulated_ms: f64,
    /// Intention-execution share of simulated time; absent when no
    /// simulated time elapsed.
    pub intention_share: Option<f64>,
    /// Filled in by the caller that knows how the run ended.
    pub outcome: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace is empty")]
pub struct EmptyTrace;

pub fn summarize(traces: &[CycleTrace]) -> Result<RunSummary, EmptyTrace> {
    if traces.is_empty() {
        return Err(EmptyTrace);
    }
    let total_simulated_ms: f64 = traces.iter().map(CycleTrace::simulated_ms).sum();
    let ie_ms: f64 = traces
        .iter()
        .map(|t| t.intention_execution.simulated_ms)
        .sum();
    Ok(RunSummary {
        total_cycles: traces.len() as u64,
        belief_update: PhaseStats::of(traces.iter().map(|t| t.belief_update)),
        plan_selection: PhaseStats::of(traces.iter().map(|t| t.plan_selection)),
        intention_execution: PhaseStats::of(traces.iter().map(|t| t.intention_execution)),
        total_simulated_ms,
        intention_share: (total_simulated_ms > 0.0).then(|| ie_ms / total_simulated_ms),
        outcome: None,
    })
}

impl std::fmt::Display for RunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "cycles:            {}", self.total_cycles)?;
        if let Some(outcome) = &self.outcome {
            writeln!(f, "outcome:           {outcome}")?;
        }
        writeln!(f, "simulated time:    {:.3} ms", self.total_simulated_ms)?;
        for (name, s) in [
            ("belief update", &self.belief_update),
            ("plan selection", &self.plan_selection),
            ("intention exec", &self.intention_execution),
        ] {
            writeln!(
                f,
                "{name:<18} avg {:.6} ms  max {:.6} ms wall | avg {:.3} ms  max {:.3} ms sim",
                s.avg_wall_ns / 1e6,
                s.max_wall_ns as f64 / 1e6,
                s.avg_sim_ms,
                s.max_sim_ms
            )?;
        }
        match self.intention_share {
            Some(share) => writeln!(f, "intention share:   {:.4}", share),
            None => writeln!(f, "intention share:   n/a"),
        }
    }
}
