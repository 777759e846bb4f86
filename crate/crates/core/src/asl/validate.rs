use std::collections::BTreeSet;
use std::fmt;

use super::{AgentProgram, Atom, Opcode, TriggerKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    /// An action formula names an atom the environment does not provide.
    UnknownAction { plan: usize, action: Atom },
    /// An earlier plan with the same trigger and a context that is a subset
    /// of this plan's context always wins selection.
    UnreachablePlan { plan: usize, shadowed_by: usize },
    /// A goal is posted but no plan handles it.
    GoalWithoutPlan { plan: Option<usize>, goal: Atom },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::UnknownAction { plan, action } => {
                write!(f, "plan {plan}: unknown action `{action}`")
            }
            Finding::UnreachablePlan { plan, shadowed_by } => {
                write!(
                    f,
                    "plan {plan}: unreachable, shadowed by plan {shadowed_by}"
                )
            }
            Finding::GoalWithoutPlan {
                plan: Some(plan),
                goal,
            } => write!(f, "plan {plan}: no plan handles goal `{goal}`"),
            Finding::GoalWithoutPlan { plan: None, goal } => {
                write!(f, "initial goal: no plan handles goal `{goal}`")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Static checks of a parsed program against the environment's action set.
pub fn validate(program: &AgentProgram, known_actions: &BTreeSet<Atom>) -> ValidationReport {
    let mut report = ValidationReport::default();

    let handled: BTreeSet<&Atom> = program
        .plans
        .iter()
        .filter(|p| p.trigger.kind == TriggerKind::AchieveAdd)
        .map(|p| &p.trigger.atom)
        .collect();

    for goal in &program.initial_goals {
        if !handled.contains(goal) {
            report.warnings.push(Finding::GoalWithoutPlan {
                plan: None,
                goal: goal.clone(),
            });
        }
    }

    for (i, plan) in program.plans.iter().enumerate() {
        for formula in &plan.body {
            match formula.opcode {
                Opcode::Action if !known_actions.contains(&formula.atom) => {
                    report.errors.push(Finding::UnknownAction {
                        plan: i,
                        action: formula.atom.clone(),
                    });
                }
                Opcode::Achieve | Opcode::AchieveNew if !handled.contains(&formula.atom) => {
                    report.warnings.push(Finding::GoalWithoutPlan {
                        plan: Some(i),
                        goal: formula.atom.clone(),
                    });
                }
                _ => {}
            }
        }

        let context: BTreeSet<_> = plan.context.iter().collect();
        let shadow = program.plans[..i].iter().position(|earlier| {
            earlier.trigger == plan.trigger && earlier.context.iter().all(|l| context.contains(l))
        });
        if let Some(shadowed_by) = shadow {
            report.warnings.push(Finding::UnreachablePlan {
                plan: i,
                shadowed_by,
            });
        }
    }

    report
}
