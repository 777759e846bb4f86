//! Maze text format.
//!
//! ```text
//! # comment
//! unit_mm 50
//! heading E
//! map
//! S--+
//!    |
//!    E
//! ```
//!
//! Header keys: `unit_mm` (default 50), `heading` (required), and optional
//! `speed_mm_s`, `turn_ms`, `probe_ms`, `nudge_mm` overrides. Grid
//! characters: `+` node, `S` start, `E` goal, `-` and `|` segment cells,
//! space or `.` empty.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{EnvConfig, Heading, MazeGraph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        column,
        message: message.into(),
    }
}

const DEFAULT_UNIT_MM: u32 = 50;

pub fn load_maze(text: &str) -> Result<MazeGraph, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let mut unit_mm = DEFAULT_UNIT_MM;
    let mut heading = None;
    let mut env = EnvConfig::default();
    let mut nudge_line = None;
    let map_line = loop {
        let Some((no, line)) = lines.next() else {
            return Err(err(text.lines().count().max(1), 1, "missing `map` line"));
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed == "map" {
            break no;
        }
        let mut parts = trimmed.split_whitespace();
        let key = parts.next().unwrap_or_default();
        let (Some(value), None) = (parts.next(), parts.next()) else {
            return Err(err(
                no,
                1,
                format!("expected `key value`, found {trimmed:?}"),
            ));
        };
        let value_col = line.find(value).map_or(1, |i| i + 1);
        let positive = |v: &str| -> Result<f64, FormatError> {
            match v.parse::<f64>() {
                Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
                _ => Err(err(
                    no,
                    value_col,
                    format!("`{key}` must be a positive number"),
                )),
            }
        };
        match key {
            "unit_mm" => {
                unit_mm = match value.parse::<u32>() {
                    Ok(u) if u > 0 => u,
                    _ => return Err(err(no, value_col, "`unit_mm` must be a positive integer")),
                }
            }
            "heading" => {
                heading = Some(
                    Heading::parse(value)
                        .ok_or_else(|| err(no, value_col, "`heading` must be one of N, E, S, W"))?,
                )
            }
            "speed_mm_s" => env.speed_mm_s = positive(value)?,
            "turn_ms" => env.turn_ms = positive(value)?,
            "probe_ms" => env.probe_ms = positive(value)?,
            "nudge_mm" => {
                env.nudge_mm = positive(value)?;
                nudge_line = Some(no);
            }
            other => return Err(err(no, 1, format!("unknown header key `{other}`"))),
        }
    };
    let heading = heading.ok_or_else(|| err(map_line, 1, "missing `heading` header"))?;

    // Grid, addressed as (row, col) with row 0 on the line after `map`.
    let grid: Vec<Vec<char>> = lines.map(|(_, l)| l.chars().collect()).collect();
    let at = |row: usize, col: usize| -> char {
        grid.get(row)
            .and_then(|r| r.get(col))
            .copied()
            .unwrap_or(' ')
    };
    let line_of = |row: usize| map_line + 1 + row;
    let is_node = |c: char| matches!(c, '+' | 'S' | 'E');

    let mut positions = Vec::new();
    let mut ids = HashMap::new();
    let mut start = None;
    let mut goal = None;
    for (row, chars) in grid.iter().enumerate() {
        for (col, &c) in chars.iter().enumerate() {
            match c {
                '+' | 'S' | 'E' => {
                    let id = NodeId(positions.len());
                    positions.push((row, col));
                    ids.insert((row, col), id);
                    let slot = if c == 'S' {
                        Some((&mut start, "S"))
                    } else if c == 'E' {
                        Some((&mut goal, "E"))
                    } else {
                        None
                    };
                    if let Some((slot, name)) = slot {
                        if slot.is_some() {
                            return Err(err(line_of(row), col + 1, format!("multiple `{name}`")));
                        }
                        *slot = Some(id);
                    }
                }
                '-' | '|' | ' ' | '.' => {}
                other => {
                    return Err(err(
                        line_of(row),
                        col + 1,
                        format!("unexpected map character {other:?}"),
                    ))
                }
            }
        }
    }
    let start = start.ok_or_else(|| err(map_line, 1, "map has no `S`"))?;
    let goal = goal.ok_or_else(|| err(map_line, 1, "map has no `E`"))?;

    let mut edges = Vec::new();
    for (row, chars) in grid.iter().enumerate() {
        let mut col = 0;
        while col < chars.len() {
            if chars[col] != '-' || (col > 0 && chars[col - 1] == '-') {
                col += 1;
                continue;
            }
            let mut end = col;
            while at(row, end) == '-' {
                end += 1;
            }
            if col == 0 || !is_node(at(row, col - 1)) || !is_node(at(row, end)) {
                return Err(err(
                    line_of(row),
                    col + 1,
                    "`-` run not terminated by nodes on both ends",
                ));
            }
            edges.push((ids[&(row, col - 1)], ids[&(row, end)], end - col));
            col = end;
        }
    }
    let width = grid.iter().map(Vec::len).max().unwrap_or(0);
    for col in 0..width {
        let mut row = 0;
        while row < grid.len() {
            if at(row, col) != '|' || (row > 0 && at(row - 1, col) == '|') {
                row += 1;
                continue;
            }
            let mut end = row;
            while at(end, col) == '|' {
                end += 1;
            }
            if row == 0 || !is_node(at(row - 1, col)) || !is_node(at(end, col)) {
                return Err(err(
                    line_of(row),
                    col + 1,
                    "`|` run not terminated by nodes on both ends",
                ));
            }
            edges.push((ids[&(row - 1, col)], ids[&(end, col)], end - row));
            row = end;
        }
    }

    let maze = MazeGraph::build(&positions, &edges, start, goal, heading, unit_mm, env)
        .map_err(|e| err(map_line, 1, e.to_string()))?;

    let node_err = |id: NodeId, message: &str| {
        let (row, col) = positions[id.0];
        err(line_of(row), col + 1, message)
    };
    if maze.node(start).exit(heading).is_none() {
        return Err(node_err(start, "`S` has no exit in the declared heading"));
    }
    let mut reached = vec![false; positions.len()];
    for n in maze.reachable_from(start) {
        reached[n.0] = true;
    }
    if !reached[goal.0] {
        return Err(node_err(goal, "`E` is unreachable from `S`"));
    }
    if let Some(i) = reached.iter().position(|r| !r) {
        return Err(node_err(NodeId(i), "node is unreachable from `S`"));
    }
    if let Some(shortest) = maze.shortest_segment_mm() {
        if env.nudge_mm >= shortest {
            return Err(err(
                nudge_line.unwrap_or(map_line),
                1,
                format!(
                    "nudge_mm {} must be shorter than the shortest segment ({shortest} mm)",
                    env.nudge_mm
                ),
            ));
        }
    }
    Ok(maze)
}

pub(super) fn to_text(maze: &MazeGraph) -> String {
    let defaults = EnvConfig::default();
    let mut out = format!("unit_mm {}\n", maze.unit_mm);
    for (key, value, default) in [
        ("speed_mm_s", maze.env.speed_mm_s, defaults.speed_mm_s),
        ("turn_ms", maze.env.turn_ms, defaults.turn_ms),
        ("probe_ms", maze.env.probe_ms, defaults.probe_ms),
        ("nudge_mm", maze.env.nudge_mm, defaults.nudge_mm),
    ] {
        if value != default {
            let _ = writeln!(out, "{key} {value}");
        }
    }
    let _ = writeln!(out, "heading {}", maze.start_heading);
    out.push_str("map\n");

    let rows = maze.nodes.iter().map(|n| n.row + 1).max().unwrap_or(0);
    let cols = maze.nodes.iter().map(|n| n.col + 1).max().unwrap_or(0);
    let mut canvas = vec![vec![' '; cols]; rows];
    for seg in &maze.segments {
        let (a, b) = (maze.node(seg.a), maze.node(seg.b));
        if a.row == b.row {
            for c in &mut canvas[a.row][a.col + 1..b.col] {
                *c = '-';
            }
        } else {
            for row in &mut canvas[a.row + 1..b.row] {
                row[a.col] = '|';
            }
        }
    }
    for (i, n) in maze.nodes.iter().enumerate() {
        canvas[n.row][n.col] = match NodeId(i) {
            id if id == maze.start => 'S',
            id if id == maze.goal => 'E',
            _ => '+',
        };
    }
    for row in canvas {
        let line: String = row.into_iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
