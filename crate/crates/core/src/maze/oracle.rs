//! Left-hand-rule walker that works directly on the graph, without the agent
//! runtime. Used as the reference the agent's behaviour is checked against.

use std::fmt;

use thiserror::Error;

use super::{Heading, MazeGraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Stop,
    TurnLeft,
    Forward,
    TurnRight,
    Rotate180,
}

impl Decision {
    /// The robot action carrying out this decision.
    pub fn action(self) -> &'static str {
        match self {
            Decision::Stop => "stop",
            Decision::TurnLeft => "turn_left",
            Decision::Forward => "forward",
            Decision::TurnRight => "turn_right",
            Decision::Rotate180 => "rotate_180",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.action())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    /// One entry per node arrival: where the decision was taken and what it was.
    pub decisions: Vec<(NodeId, Decision)>,
    /// Nodes in arrival order.
    pub visits: Vec<NodeId>,
    pub traversals: usize,
    pub total_ms: f64,
}

impl OracleReport {
    pub fn decision_actions(&self) -> Vec<&'static str> {
        self.decisions.iter().map(|(_, d)| d.action()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("wall follower did not reach the goal within {limit} segment traversals")]
pub struct OracleError {
    pub limit: usize,
    pub partial: OracleReport,
}

/// Walks the maze by strict priority left > straight > right > turn around,
/// charging the same durations the robot simulation does.
pub fn wall_follow_oracle(maze: &MazeGraph) -> Result<OracleReport, OracleError> {
    let env = &maze.env;
    let limit = 4 * maze.segments.len();
    let mut report = OracleReport {
        decisions: Vec::new(),
        visits: Vec::new(),
        traversals: 0,
        total_ms: 0.0,
    };

    let mut from = maze.start;
    let mut heading = maze.start_heading;
    let mut offset = env.nudge_mm;
    loop {
        let seg = maze.segment(
            maze.node(from)
                .exit(heading)
                .expect("walker only leaves by existing exits"),
        );
        report.total_ms += env.travel_ms(seg.length_mm - offset);
        report.traversals += 1;
        let node = seg.other(from);
        report.visits.push(node);
        report.total_ms += env.probe_ms;

        if node == maze.goal {
            report.decisions.push((node, Decision::Stop));
            return Ok(report);
        }
        if report.traversals >= limit {
            return Err(OracleError {
                limit,
                partial: report,
            });
        }

        let exits = &maze.node(node).exits;
        let open = |h: Heading| exits[h.index()].is_some();
        let (decision, cost) = if open(heading.left()) {
            heading = heading.left();
            (Decision::TurnLeft, env.turn_ms)
        } else if open(heading) {
            (Decision::Forward, env.travel_ms(env.nudge_mm))
        } else if open(heading.right()) {
            heading = heading.right();
            (Decision::TurnRight, env.turn_ms)
        } else {
            heading = heading.reverse();
            (Decision::Rotate180, 2.0 * env.turn_ms)
        };
        report.decisions.push((node, decision));
        report.total_ms += cost;
        from = node;
        offset = env.nudge_mm;
    }
}
