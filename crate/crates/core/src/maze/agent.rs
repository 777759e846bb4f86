//! Drives a compiled agent through a maze until it stops on the goal.

use super::{MazeGraph, MazeWorld, NodeId, RobotState};
use crate::asl::{Opcode, TriggerKind};
use crate::plan_table::PlanTable;
use crate::runtime::{run, PoolUsage, RunResult, RuntimeConfig, RuntimeError, RuntimeState};
use crate::trace::CycleTrace;

/// Goal whose plans carry the navigation decisions.
pub const DECISION_GOAL: &str = "make_decision";

#[derive(Debug, Clone)]
pub struct AgentRun {
    pub result: RunResult,
    pub robot: RobotState,
    /// Node arrivals in order.
    pub arrivals: Vec<NodeId>,
    /// Actions executed by `+!make_decision` plans, in order.
    pub decisions: Vec<String>,
    pub usage: PoolUsage,
}

/// Actions executed from the bodies of plans triggered by `+!goal`.
pub fn actions_for_goal(traces: &[CycleTrace], table: &PlanTable, goal: &str) -> Vec<String> {
    traces
        .iter()
        .filter_map(|t| t.executed_formula.as_ref())
        .filter(|f| f.opcode == Opcode::Action)
        .filter(|f| {
            table.plans.get(f.plan).is_some_and(|p| {
                p.trigger_kind == TriggerKind::AchieveAdd && table.atom_name(p.trigger_atom) == goal
            })
        })
        .map(|f| f.atom.clone())
        .collect()
}

pub fn run_agent(
    table: &PlanTable,
    config: RuntimeConfig,
    maze: &MazeGraph,
) -> Result<AgentRun, RuntimeError> {
    let mut state = RuntimeState::init(table.clone(), config)?;
    let mut world = MazeWorld::new(maze);
    let result = run(&mut state, &mut world, MazeWorld::goal_reached)?;
    Ok(AgentRun {
        decisions: actions_for_goal(&result.traces, table, DECISION_GOAL),
        robot: world.robot,
        arrivals: world.arrivals,
        usage: state.usage(),
        result,
    })
}
