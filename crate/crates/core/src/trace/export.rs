use thiserror::Error;

use super::{CycleTrace, ExecutedFormula, PhaseTiming};
use crate::asl::Opcode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Jsonl,
    Csv,
}

const CSV_HEADER: [&str; 17] = [
    "cycle",
    "belief_update_wall_clock_ns",
    "belief_update_simulated_ms",
    "plan_selection_wall_clock_ns",
    "plan_selection_simulated_ms",
    "intention_execution_wall_clock_ns",
    "intention_execution_simulated_ms",
    "belief_events",
    "events_posted",
    "events_drained",
    "events_dropped",
    "selected_plan",
    "executed_opcode",
    "executed_atom",
    "executed_plan",
    "executed_intention",
    "warnings",
];

const WARNING_SEPARATOR: &str = " | ";

pub fn export(traces: &[CycleTrace], format: ExportFormat) -> String {
    match format {
        ExportFormat::Jsonl => {
            let mut out = String::new();
            for t in traces {
                out.push_str(&serde_json::to_string(t).expect("traces always serialize"));
                out.push('\n');
            }
            out
        }
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("in-memory write");
            for t in traces {
                let opt = |v: Option<String>| v.unwrap_or_default();
                let f = t.executed_formula.as_ref();
                let record = [
                    t.cycle.to_string(),
                    t.belief_update.wall_clock_ns.to_string(),
                    t.belief_update.simulated_ms.to_string(),
                    t.plan_selection.wall_clock_ns.to_string(),
                    t.plan_selection.simulated_ms.to_string(),
                    t.intention_execution.wall_clock_ns.to_string(),
                    t.intention_execution.simulated_ms.to_string(),
                    t.belief_events.to_string(),
                    t.events_posted.to_string(),
                    t.events_drained.to_string(),
                    t.events_dropped.to_string(),
                    opt(t.selected_plan.map(|p| p.to_string())),
                    opt(f.map(|f| f.opcode.name().to_owned())),
                    opt(f.map(|f| f.atom.clone())),
                    opt(f.map(|f| f.plan.to_string())),
                    opt(f.map(|f| f.intention.to_string())),
                    t.warnings.join(WARNING_SEPARATOR),
                ];
                w.write_record(&record).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush"))
                .expect("csv output is utf-8")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

/// Reads a JSONL trace. Blank lines are skipped.
pub fn parse_jsonl(text: &str) -> Result<Vec<CycleTrace>, TraceParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| TraceParseError {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Reads a CSV trace written by [`export`].
pub fn parse_csv(text: &str) -> Result<Vec<CycleTrace>, TraceParseError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let fail = |message: String| TraceParseError { line, message };
        let record = record.map_err(|e| fail(e.to_string()))?;
        if record.len() != CSV_HEADER.len() {
            return Err(fail(format!(
                "expected {} fields, found {}",
                CSV_HEADER.len(),
                record.len()
            )));
        }
        fn num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, TraceParseError> {
            s.parse().map_err(|_| TraceParseError {
                line,
                message: format!("bad number {s:?}"),
            })
        }
        fn opt<T: std::str::FromStr>(s: &str, line: usize) -> Result<Option<T>, TraceParseError> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s, line).map(Some)
            }
        }
        let phase = |w: usize| -> Result<PhaseTiming, TraceParseError> {
            Ok(PhaseTiming {
                wall_clock_ns: num(&record[w], line)?,
                simulated_ms: num(&record[w + 1], line)?,
            })
        };
        let executed_formula = if record[12].is_empty() {
            None
        } else {
            Some(ExecutedFormula {
                opcode: Opcode::from_name(&record[12])
                    .ok_or_else(|| fail(format!("unknown opcode {:?}", &record[12])))?,
                atom: record[13].to_owned(),
                plan: num(&record[14], line)?,
                intention: num(&record[15], line)?,
            })
        };
        out.push(CycleTrace {
            cycle: num(&record[0], line)?,
            belief_update: phase(1)?,
            plan_selection: phase(3)?,
            intention_execution: phase(5)?,
            belief_events: num(&record[7], line)?,
            events_posted: num(&record[8], line)?,
            events_drained: num(&record[9], line)?,
            events_dropped: num(&record[10], line)?,
            selected_plan: opt(&record[11], line)?,
            executed_formula,
            warnings: if record[16].is_empty() {
                Vec::new()
            } else {
                record[16]
                    .split(WARNING_SEPARATOR)
                    .map(str::to_owned)
                    .collect()
            },
        });
    }
    Ok(out)
}
