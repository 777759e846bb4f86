//! Logic-analyzer style timeline: one track per phase, high while the phase
//! is doing work, low otherwise.
//!
//! The x axis is simulated time. Belief update and plan selection consume no
//! simulated time, so their pulses are drawn at a fixed minimum width at the
//! start of their cycle. A phase that ran but found nothing to do (no belief
//! changes, no events to drain, no ready intention) is drawn low.

use std::fmt::Write as _;

use super::{CycleTrace, EmptyTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimelineStyle {
    Svg,
    Ascii,
}

pub const TRACK_LABELS: [&str; 3] = ["belief update", "plan selection", "intention execution"];
const TRACK_CLASSES: [&str; 3] = ["belief_update", "plan_selection", "intention_execution"];

const ASCII_COLUMNS: usize = 100;

const SVG_WIDTH: f64 = 1200.0;
const LABEL_WIDTH: f64 = 170.0;
const RIGHT_PAD: f64 = 20.0;
const TRACK_HEIGHT: f64 = 40.0;
const TRACK_GAP: f64 = 20.0;
const TOP: f64 = 30.0;
const MIN_PULSE_PX: f64 = 2.0;

/// Per-cycle (start ms, [active; 3], intention-execution ms).
fn layout(traces: &[CycleTrace]) -> (Vec<(f64, [bool; 3], f64)>, f64) {
    let mut t = 0.0;
    let mut rows = Vec::with_capacity(traces.len());
    for tr in traces {
        let active = [
            tr.belief_events > 0,
            tr.events_drained > 0,
            tr.executed_formula.is_some() || tr.intention_execution.simulated_ms > 0.0,
        ];
        rows.push((t, active, tr.intention_execution.simulated_ms));
        t += tr.simulated_ms();
    }
    (rows, t)
}

pub fn render_timeline(traces: &[CycleTrace], style: TimelineStyle) -> Result<String, EmptyTrace> {
    if traces.is_empty() {
        return Err(EmptyTrace);
    }
    Ok(match style {
        TimelineStyle::Svg => svg(traces),
        TimelineStyle::Ascii => ascii(traces),
    })
}

fn svg(traces: &[CycleTrace]) -> String {
    let (rows, total) = layout(traces);
    let plot_w = SVG_WIDTH - LABEL_WIDTH - RIGHT_PAD;
    let scale = if total > 0.0 { plot_w / total } else { 0.0 };
    let x = |ms: f64| LABEL_WIDTH + ms * scale;
    let track_top = |i: usize| TOP + i as f64 * (TRACK_HEIGHT + TRACK_GAP);
    let height = track_top(3) + 30.0;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{height}" viewBox="0 0 {SVG_WIDTH} {height}">"#
    );
    let _ = writeln!(
        out,
        "<style>.label{{font:13px monospace}}.axis{{font:11px monospace;fill:#555}}.tick{{stroke:#ccc;stroke-width:0.5}}.base{{stroke:#333;stroke-width:1}}.pulse{{fill:#1f77b4}}</style>"
    );

    for (i, label) in TRACK_LABELS.iter().enumerate() {
        let top = track_top(i);
        let _ = writeln!(
            out,
            r#"<text class="label" x="8" y="{:.3}">{label}</text>"#,
            top + TRACK_HEIGHT * 0.6
        );
        let _ = writeln!(
            out,
            r#"<line class="base" x1="{LABEL_WIDTH}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            top + TRACK_HEIGHT,
            SVG_WIDTH - RIGHT_PAD,
            top + TRACK_HEIGHT
        );
    }

    let (tick_top, tick_bottom) = (track_top(0) - 8.0, track_top(2) + TRACK_HEIGHT);
    for (cycle, &(start, active, ie_ms)) in rows.iter().enumerate() {
        let x0 = x(start);
        let _ = writeln!(
            out,
            r#"<line class="tick" data-cycle="{cycle}" x1="{x0:.3}" y1="{tick_top:.3}" x2="{x0:.3}" y2="{tick_bottom:.3}"/>"#
        );
        for (track, on) in active.iter().enumerate() {
            if !on {
                continue;
            }
            let (px, width) = match track {
                0 => (x0, MIN_PULSE_PX),
                1 => (x0 + MIN_PULSE_PX, MIN_PULSE_PX),
                _ => (x0 + 2.0 * MIN_PULSE_PX, (ie_ms * scale).max(MIN_PULSE_PX)),
            };
            let _ = writeln!(
                out,
                r#"<rect class="pulse {}" data-cycle="{cycle}" x="{px:.3}" y="{:.3}" width="{width:.3}" height="{TRACK_HEIGHT:.3}"/>"#,
                TRACK_CLASSES[track],
                track_top(track)
            );
        }
    }

    let _ = writeln!(
        out,
        r#"<text class="axis" x="{LABEL_WIDTH}" y="{:.3}">0 ms</text>"#,
        height - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text class="axis" x="{:.3}" y="{:.3}" text-anchor="end">{total:.3} ms simulated, {} cycles</text>"#,
        SVG_WIDTH - RIGHT_PAD,
        height - 10.0,
        traces.len()
    );
    out.push_str("</svg>\n");
    out
}

fn ascii(traces: &[CycleTrace]) -> String {
    let (rows, total) = layout(traces);
    let col = |ms: f64| -> usize {
        if total > 0.0 {
            ((ms / total * ASCII_COLUMNS as f64) as usize).min(ASCII_COLUMNS - 1)
        } else {
            0
        }
    };

    let mut tracks = [[b'0'; ASCII_COLUMNS]; 3];
    let mut ticks = [b' '; ASCII_COLUMNS];
    for &(start, active, ie_ms) in &rows {
        let c = col(start);
        ticks[c] = b'^';
        for (track, on) in active.iter().enumerate() {
            if !on {
                continue;
            }
            let end = if track == 2 && ie_ms > 0.0 {
                // last bucket that overlaps [start, start + ie_ms)
                let edge = (start + ie_ms) / total * ASCII_COLUMNS as f64;
                (edge.ceil() as usize)
                    .saturating_sub(1)
                    .clamp(c, ASCII_COLUMNS - 1)
            } else {
                c
            };
            for cell in &mut tracks[track][c..=end] {
                *cell = b'1';
            }
        }
    }

    let width = TRACK_LABELS.iter().map(|l| l.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (label, track) in TRACK_LABELS.iter().zip(&tracks) {
        let _ = writeln!(out, "{label:<width$} |{}|", String::from_utf8_lossy(track));
    }
    let _ = writeln!(out, "{:<width$} |{}|", "", String::from_utf8_lossy(&ticks));
    let _ = writeln!(
        out,
        "{:<width$}  0 .. {total:.3} ms simulated, {} cycles, {} columns",
        "",
        traces.len(),
        ASCII_COLUMNS
    );
    out
}
