use super::{Heading, MazeGraph, NodeId, SegmentId};
use crate::runtime::{EnvFault, Environment};

/// The robot's action vocabulary.
pub const ACTIONS: [&str; 7] = [
    "follow_segment",
    "check_situation",
    "stop",
    "turn_left",
    "forward",
    "turn_right",
    "rotate_180",
];

pub const AT_INTERSECTION: &str = "at_intersection";
pub const GOAL_FOUND: &str = "goal_found";
pub const PATH_LEFT: &str = "path_left";
pub const PATH_STRAIGHT: &str = "path_straight";
pub const PATH_RIGHT: &str = "path_right";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Position {
    AtNode(NodeId),
    /// Travelling away from `from`; `offset_mm` lies strictly inside the segment.
    OnSegment {
        segment: SegmentId,
        from: NodeId,
        offset_mm: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    pub position: Position,
    pub heading: Heading,
    /// `check_situation` has run during the current node visit.
    pub probed: bool,
    pub sim_clock_ms: f64,
    pub stopped: bool,
}

impl RobotState {
    /// The robot begins just past `S`, already on its outgoing segment.
    pub fn start(maze: &MazeGraph) -> RobotState {
        let segment = maze
            .node(maze.start)
            .exit(maze.start_heading)
            .expect("start has an exit in its heading");
        RobotState {
            position: Position::OnSegment {
                segment,
                from: maze.start,
                offset_mm: maze.env.nudge_mm,
            },
            heading: maze.start_heading,
            probed: false,
            sim_clock_ms: 0.0,
            stopped: false,
        }
    }

    pub fn node(&self) -> Option<NodeId> {
        match self.position {
            Position::AtNode(n) => Some(n),
            Position::OnSegment { .. } => None,
        }
    }
}

fn fault(action: &str, reason: impl Into<String>) -> EnvFault {
    EnvFault {
        action: action.to_owned(),
        reason: reason.into(),
    }
}

/// What the line sensors report in the robot's current state.
pub fn percepts(maze: &MazeGraph, robot: &RobotState) -> Vec<&'static str> {
    let Position::AtNode(node) = robot.position else {
        return Vec::new();
    };
    let mut out = vec![AT_INTERSECTION];
    if robot.probed {
        if node == maze.goal {
            out.push(GOAL_FOUND);
        }
        let n = maze.node(node);
        let h = robot.heading;
        for (dir, name) in [
            (h.left(), PATH_LEFT),
            (h, PATH_STRAIGHT),
            (h.right(), PATH_RIGHT),
        ] {
            if n.exit(dir).is_some() {
                out.push(name);
            }
        }
    }
    out
}

/// Applies one action, returning its simulated duration and the new state.
pub fn perform(
    action: &str,
    maze: &MazeGraph,
    robot: &RobotState,
) -> Result<(f64, RobotState), EnvFault> {
    let env = &maze.env;
    let mut next = robot.clone();

    // Leave the current node toward `heading`, stopping `nudge_mm` along.
    let nudge_out = |next: &mut RobotState, heading: Heading| -> Result<(), EnvFault> {
        let Position::AtNode(node) = next.position else {
            return Err(fault(action, "robot is not at a node"));
        };
        let segment = maze
            .node(node)
            .exit(heading)
            .ok_or_else(|| fault(action, format!("node {node} has no exit {heading}")))?;
        next.heading = heading;
        next.position = Position::OnSegment {
            segment,
            from: node,
            offset_mm: env.nudge_mm,
        };
        next.probed = false;
        Ok(())
    };

    let duration = match action {
        "follow_segment" => {
            let mut duration = 0.0;
            if matches!(next.position, Position::AtNode(_)) {
                let heading = next.heading;
                nudge_out(&mut next, heading)?;
                duration += env.travel_ms(env.nudge_mm);
            }
            let Position::OnSegment {
                segment,
                from,
                offset_mm,
            } = next.position
            else {
                unreachable!("nudged onto a segment above");
            };
            let seg = maze.segment(segment);
            duration += env.travel_ms(seg.length_mm - offset_mm);
            next.position = Position::AtNode(seg.other(from));
            next.probed = false;
            duration
        }
        "check_situation" => {
            if next.node().is_none() {
                return Err(fault(action, "robot is mid-segment"));
            }
            next.probed = true;
            env.probe_ms
        }
        "turn_left" => {
            nudge_out(&mut next, robot.heading.left())?;
            env.turn_ms
        }
        "turn_right" => {
            nudge_out(&mut next, robot.heading.right())?;
            env.turn_ms
        }
        "rotate_180" => {
            nudge_out(&mut next, robot.heading.reverse())?;
            2.0 * env.turn_ms
        }
        "forward" => {
            nudge_out(&mut next, robot.heading)?;
            env.travel_ms(env.nudge_mm)
        }
        "stop" => {
            next.stopped = true;
            0.0
        }
        other => return Err(fault(other, "unknown action")),
    };
    next.sim_clock_ms += duration;
    Ok((duration, next))
}

/// A maze plus a robot, driven by the BDI runtime.
#[derive(Debug, Clone)]
pub struct MazeWorld<'a> {
    pub maze: &'a MazeGraph,
    pub robot: RobotState,
    /// Node arrivals in order; one per segment traversal.
    pub arrivals: Vec<NodeId>,
}

impl<'a> MazeWorld<'a> {
    pub fn new(maze: &'a MazeGraph) -> Self {
        MazeWorld {
            maze,
            robot: RobotState::start(maze),
            arrivals: Vec::new(),
        }
    }

    /// Stopped on the goal node.
    pub fn goal_reached(&self) -> bool {
        self.robot.stopped && self.robot.node() == Some(self.maze.goal)
    }
}

impl Environment for MazeWorld<'_> {
    fn percepts(&self) -> Vec<&str> {
        percepts(self.maze, &self.robot)
    }

    fn perform(&mut self, action: &str) -> Result<f64, EnvFault> {
        let (duration, next) = perform(action, self.maze, &self.robot)?;
        if action == "follow_segment" {
            if let Some(n) = next.node() {
                self.arrivals.push(n);
            }
        }
        self.robot = next;
        Ok(duration)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maze::load_maze;

    fn t_maze() -> MazeGraph {
        // junction at n1 with exits W, E, S
        load_maze("heading N\nmap\nE-+-+\n  |\n  S\n").unwrap()
    }

    fn at(node: usize, heading: Heading, probed: bool) -> RobotState {
        RobotState {
            position: Position::AtNode(NodeId(node)),
            heading,
            probed,
            sim_clock_ms: 0.0,
            stopped: false,
        }
    }

    #[test]
    fn mid_segment_sees_nothing() {
        let m = t_maze();
        assert!(percepts(&m, &RobotState::start(&m)).is_empty());
    }

    #[test]
    fn junction_percepts_exclude_reverse() {
        let m = t_maze();
        let r = at(1, Heading::N, true);
        assert_eq!(
            percepts(&m, &r),
            vec![AT_INTERSECTION, PATH_LEFT, PATH_RIGHT]
        );
        let unprobed = at(1, Heading::N, false);
        assert_eq!(percepts(&m, &unprobed), vec![AT_INTERSECTION]);
    }

    /// Independent relative-direction table, checked over all headings.
    #[test]
    fn relative_exits_by_brute_force_rotation() {
        let m = t_maze();
        let exits = [Heading::W, Heading::E, Heading::S];
        for heading in Heading::ALL {
            let r = at(1, heading, true);
            let got = percepts(&m, &r);
            // quarter turns counter-clockwise from heading: 1 = left, 0 = straight, 3 = right
            let mut expected = vec![AT_INTERSECTION];
            for (quarters, name) in [(1, PATH_LEFT), (0, PATH_STRAIGHT), (3, PATH_RIGHT)] {
                let dir = Heading::ALL[(heading.index() + 4 - quarters) % 4];
                if exits.contains(&dir) {
                    expected.push(name);
                }
            }
            assert_eq!(got, expected, "heading {heading}");
        }
    }

    #[test]
    fn goal_percepts() {
        let m = t_maze();
        let r = at(m.goal.0, Heading::W, true);
        let p = percepts(&m, &r);
        assert!(p.contains(&GOAL_FOUND) && p.contains(&AT_INTERSECTION));
    }

    #[test]
    fn follow_segment_arithmetic() {
        let m = load_maze("heading E\nmap\nS----E\n").unwrap();
        let mut r = RobotState::start(&m);
        r.position = Position::OnSegment {
            segment: SegmentId(0),
            from: m.start,
            offset_mm: 50.0,
        };
        let (d, next) = perform("follow_segment", &m, &r).unwrap();
        assert_eq!(d, 1500.0);
        assert_eq!(next.position, Position::AtNode(m.goal));
        assert!(!next.probed);
        assert_eq!(next.sim_clock_ms, 1500.0);
    }

    #[test]
    fn follow_segment_from_node_is_forward_then_follow() {
        let m = load_maze("heading E\nmap\nS--+--E\n").unwrap();
        let r = at(1, Heading::E, false);
        let (d, next) = perform("follow_segment", &m, &r).unwrap();
        assert_eq!(d, 100.0 + 900.0);
        assert_eq!(next.position, Position::AtNode(m.goal));
    }

    #[test]
    fn turn_left_nudges_onto_segment() {
        let m = t_maze();
        let r = at(1, Heading::N, true);
        let (d, next) = perform("turn_left", &m, &r).unwrap();
        assert_eq!(d, 500.0);
        assert_eq!(next.heading, Heading::W);
        assert!(
            matches!(next.position, Position::OnSegment { offset_mm, .. } if offset_mm == 10.0)
        );
        assert!(!next.probed);
    }

    #[test]
    fn rotate_and_forward_durations() {
        let m = t_maze();
        let r = at(1, Heading::N, true);
        assert_eq!(perform("rotate_180", &m, &r).unwrap().0, 1000.0);
        let r = at(1, Heading::E, true);
        assert_eq!(perform("forward", &m, &r).unwrap().0, 100.0);
        let (d, next) = perform("stop", &m, &r).unwrap();
        assert_eq!(d, 0.0);
        assert!(next.stopped);
    }

    #[test]
    fn faults() {
        let m = load_maze("heading E\nmap\nS--+--E\n").unwrap();
        let r = at(1, Heading::E, true);
        assert!(perform("turn_left", &m, &r).is_err());
        assert!(perform("turn_right", &m, &r).is_err());
        assert!(perform("fly", &m, &r).is_err());
        assert!(perform("check_situation", &m, &RobotState::start(&m)).is_err());
        assert!(perform("forward", &m, &RobotState::start(&m)).is_err());
    }

    #[test]
    fn four_left_turns_restore_heading() {
        // plus-shaped junction: every turn has an exit
        let m = load_maze("heading S\nmap\n  S\n  |\nE-+-+\n  |\n  +\n").unwrap();
        let centre = m
            .nodes
            .iter()
            .position(|n| n.row == 2 && n.col == 2)
            .unwrap();
        let mut r = at(centre, Heading::N, false);
        for _ in 0..4 {
            r = perform("turn_left", &m, &r).unwrap().1;
            r.position = Position::AtNode(NodeId(centre));
        }
        assert_eq!(r.heading, Heading::N);
        for _ in 0..2 {
            r = perform("rotate_180", &m, &r).unwrap().1;
            r.position = Position::AtNode(NodeId(centre));
        }
        assert_eq!(r.heading, Heading::N);
    }
}
