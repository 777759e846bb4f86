//! Simulated line maze and two-wheeled robot.
//!
//! The maze is a graph of nodes (intersections, corners, dead ends) joined by
//! straight segments. The robot only ever makes decisions at nodes, so the
//! simulation advances segment by segment instead of integrating wheel
//! kinematics.

mod agent;
mod format;
mod generate;
mod oracle;
mod robot;

use std::fmt;

use thiserror::Error;

pub use crate::runtime::EnvFault;
pub use agent::{actions_for_goal, run_agent, AgentRun, DECISION_GOAL};
pub use format::{load_maze, FormatError};
pub use generate::generate_maze;
pub use oracle::{wall_follow_oracle, Decision, OracleError, OracleReport};
pub use robot::{
    percepts, perform, MazeWorld, Position, RobotState, ACTIONS, AT_INTERSECTION, GOAL_FOUND,
    PATH_LEFT, PATH_RIGHT, PATH_STRAIGHT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heading {
    N,
    E,
    S,
    W,
}

impl Heading {
    pub const ALL: [Heading; 4] = [Heading::N, Heading::E, Heading::S, Heading::W];

    pub fn index(self) -> usize {
        self as usize
    }

    /// 90° counter-clockwise.
    pub fn left(self) -> Heading {
        Heading::ALL[(self.index() + 3) % 4]
    }

    /// 90° clockwise.
    pub fn right(self) -> Heading {
        Heading::ALL[(self.index() + 1) % 4]
    }

    pub fn reverse(self) -> Heading {
        Heading::ALL[(self.index() + 2) % 4]
    }

    /// Grid step as (row, col); north is up.
    pub fn delta(self) -> (isize, isize) {
        match self {
            Heading::N => (-1, 0),
            Heading::E => (0, 1),
            Heading::S => (1, 0),
            Heading::W => (0, -1),
        }
    }

    pub fn parse(s: &str) -> Option<Heading> {
        match s {
            "N" => Some(Heading::N),
            "E" => Some(Heading::E),
            "S" => Some(Heading::S),
            "W" => Some(Heading::W),
            _ => None,
        }
    }
}

impl fmt::Display for Heading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Heading::N => "N",
            Heading::E => "E",
            Heading::S => "S",
            Heading::W => "W",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    /// Grid position in map characters.
    pub row: usize,
    pub col: usize,
    /// Outgoing segment per heading, indexed by [`Heading::index`].
    pub exits: [Option<SegmentId>; 4],
}

impl Node {
    pub fn exit(&self, heading: Heading) -> Option<SegmentId> {
        self.exits[heading.index()]
    }

    pub fn exit_headings(&self) -> impl Iterator<Item = Heading> + '_ {
        Heading::ALL.into_iter().filter(|h| self.exit(*h).is_some())
    }
}

/// A straight segment. `a` is the north/west end, `b` the south/east end.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub a: NodeId,
    pub b: NodeId,
    pub cells: usize,
    pub length_mm: f64,
}

impl Segment {
    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Robot timing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvConfig {
    pub speed_mm_s: f64,
    pub turn_ms: f64,
    pub probe_ms: f64,
    /// Distance a turn or `forward` moves the robot off the node.
    pub nudge_mm: f64,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            speed_mm_s: 100.0,
            turn_ms: 500.0,
            probe_ms: 50.0,
            nudge_mm: 10.0,
        }
    }
}

impl EnvConfig {
    /// Simulated milliseconds to drive `mm` millimetres.
    pub fn travel_ms(&self, mm: f64) -> f64 {
        mm / self.speed_mm_s * 1000.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MazeGraph {
    pub nodes: Vec<Node>,
    pub segments: Vec<Segment>,
    pub start: NodeId,
    pub goal: NodeId,
    pub start_heading: Heading,
    pub unit_mm: u32,
    pub env: EnvConfig,
}

impl MazeGraph {
    /// Builds a graph from node grid positions (row-major order) and edges
    /// given as `(a, b, cells)`. Segments are stored sorted by endpoints.
    pub(crate) fn build(
        positions: &[(usize, usize)],
        edges: &[(NodeId, NodeId, usize)],
        start: NodeId,
        goal: NodeId,
        start_heading: Heading,
        unit_mm: u32,
        env: EnvConfig,
    ) -> Result<MazeGraph, GraphError> {
        let mut nodes: Vec<Node> = positions
            .iter()
            .map(|&(row, col)| Node {
                row,
                col,
                exits: [None; 4],
            })
            .collect();

        let mut edges: Vec<_> = edges
            .iter()
            .map(|&(x, y, cells)| if x < y { (x, y, cells) } else { (y, x, cells) })
            .collect();
        edges.sort_unstable_by_key(|e| (e.0, e.1));

        let mut segments = Vec::with_capacity(edges.len());
        for (i, &(a, b, cells)) in edges.iter().enumerate() {
            let (pa, pb) = (&nodes[a.0], &nodes[b.0]);
            let heading = if pa.row == pb.row && pa.col < pb.col {
                Heading::E
            } else if pa.col == pb.col && pa.row < pb.row {
                Heading::S
            } else {
                return Err(GraphError::Invalid(format!(
                    "segment {a}-{b} is not a straight east/south run"
                )));
            };
            for (n, h) in [(a, heading), (b, heading.reverse())] {
                if nodes[n.0].exits[h.index()].replace(SegmentId(i)).is_some() {
                    return Err(GraphError::Invalid(format!("node {n} has two exits {h}")));
                }
            }
            segments.push(Segment {
                a,
                b,
                cells,
                length_mm: cells as f64 * unit_mm as f64,
            });
        }

        Ok(MazeGraph {
            nodes,
            segments,
            start,
            goal,
            start_heading,
            unit_mm,
            env,
        })
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn segment(&self, id: SegmentId) -> &Segment {
        &self.segments[id.0]
    }

    /// Node at the far end of `node`'s exit toward `heading`.
    pub fn neighbor(&self, node: NodeId, heading: Heading) -> Option<NodeId> {
        self.node(node)
            .exit(heading)
            .map(|s| self.segment(s).other(node))
    }

    pub fn shortest_segment_mm(&self) -> Option<f64> {
        self.segments
            .iter()
            .map(|s| s.length_mm)
            .min_by(|a, b| a.total_cmp(b))
    }

    /// True if the graph has no cycles, i.e. |segments| = |nodes| - 1 and
    /// every node is reachable.
    pub fn is_tree(&self) -> bool {
        self.segments.len() + 1 == self.nodes.len()
            && self.reachable_from(self.start).len() == self.nodes.len()
    }

    pub(crate) fn reachable_from(&self, from: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![from];
        let mut order = Vec::new();
        seen[from.0] = true;
        while let Some(n) = stack.pop() {
            order.push(n);
            for h in Heading::ALL {
                if let Some(m) = self.neighbor(n, h) {
                    if !seen[m.0] {
                        seen[m.0] = true;
                        stack.push(m);
                    }
                }
            }
        }
        order
    }

    /// Serializes in the maze text format.
    pub fn to_text(&self) -> String {
        format::to_text(self)
    }
}
