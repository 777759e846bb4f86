//! Deterministic BDI reasoning cycle over a [`PlanTable`].
//!
//! Each cycle runs three separately timed phases:
//!
//! 1. **Belief update**: the belief base is replaced by the current
//!    percepts; every change is queued as a `+b` / `-b` event.
//! 2. **Plan selection**: the whole event queue is drained in FIFO order.
//!    Each event adopts the first applicable relevant plan in source order,
//!    either as a new intention or, for a `!g` subgoal, as a new frame on
//!    the intention that posted it.
//! 3. **Intention execution**: the newest ready intention executes exactly
//!    one body formula.
//!
//! All pools (beliefs, events, intentions, frames per intention) have fixed
//! capacities; exceeding one aborts the run with a [`RuntimeError::Capacity`].

mod sweep;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::time::Instant;

use thiserror::Error;

use crate::asl::{Opcode, TriggerKind};
use crate::plan_table::{AtomId, CompiledPlan, PlanTable};
use crate::trace::{CycleTrace, ExecutedFormula, PhaseTiming};

pub use sweep::{minimal_config, SweepError, SweepReport};

/// The agent's window on the world.
pub trait Environment {
    /// Atom names currently perceived. Names unknown to the plan table are ignored.
    fn percepts(&self) -> Vec<&str>;

    /// Runs an action to completion and returns its simulated duration in ms.
    fn perform(&mut self, action: &str) -> Result<f64, EnvFault>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("environment fault in `{action}`: {reason}")]
pub struct EnvFault {
    pub action: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuntimeConfig {
    pub belief_capacity: usize,
    pub event_capacity: usize,
    pub intention_capacity: usize,
    /// Maximum frames on one intention's stack.
    pub frame_depth: usize,
    pub max_cycles: u64,
}

impl Default for RuntimeConfig {
    fn default() -> Self {
        RuntimeConfig {
            belief_capacity: 16,
            event_capacity: 16,
            intention_capacity: 8,
            frame_depth: 8,
            max_cycles: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pool {
    Beliefs,
    Events,
    Intentions,
    Frames,
}

impl fmt::Display for Pool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pool::Beliefs => "belief pool",
            Pool::Events => "event queue",
            Pool::Intentions => "intention pool",
            Pool::Frames => "intention frame stack",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("invalid runtime config: {0} must be at least 1")]
    Config(&'static str),
    #[error("{pool} overflow (capacity {capacity}) {}", at_cycle(*.cycle))]
    Capacity {
        pool: Pool,
        capacity: usize,
        /// `None` during initialization.
        cycle: Option<u64>,
    },
    #[error("{fault} at cycle {cycle}")]
    Environment { fault: EnvFault, cycle: u64 },
}

fn at_cycle(cycle: Option<u64>) -> String {
    match cycle {
        Some(c) => format!("at cycle {c}"),
        None => "during initialization".to_owned(),
    }
}

impl RuntimeError {
    pub fn cycle(&self) -> Option<u64> {
        match self {
            RuntimeError::Config(_) => None,
            RuntimeError::Capacity { cycle, .. } => *cycle,
            RuntimeError::Environment { cycle, .. } => Some(*cycle),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    pub kind: TriggerKind,
    pub atom: AtomId,
    /// Intention suspended on this event (`!g` subgoals only).
    pub parent: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("belief base is full")]
pub struct BeliefBaseFull;

/// Set of believed atoms, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefBase {
    beliefs: Vec<AtomId>,
    capacity: usize,
}

impl BeliefBase {
    pub fn new(capacity: usize) -> Self {
        BeliefBase {
            beliefs: Vec::with_capacity(capacity),
            capacity,
        }
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        self.beliefs.binary_search(&atom).is_ok()
    }

    pub fn len(&self) -> usize {
        self.beliefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beliefs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.beliefs.iter().copied()
    }

    /// Returns false if the atom was already believed.
    pub fn insert(&mut self, atom: AtomId) -> Result<bool, BeliefBaseFull> {
        match self.beliefs.binary_search(&atom) {
            Ok(_) => Ok(false),
            Err(_) if self.beliefs.len() >= self.capacity => Err(BeliefBaseFull),
            Err(i) => {
                self.beliefs.insert(i, atom);
                Ok(true)
            }
        }
    }

    /// Returns false if the atom was not believed.
    pub fn remove(&mut self, atom: AtomId) -> bool {
        match self.beliefs.binary_search(&atom) {
            Ok(i) => {
                self.beliefs.remove(i);
                true
            }
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub plan: usize,
    /// Index of the next body formula.
    pub pc: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntentionState {
    Ready,
    /// Waiting for a `!g` subgoal to be adopted.
    Suspended,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intention {
    pub id: u32,
    pub frames: Vec<Frame>,
    pub state: IntentionState,
}

/// Peak occupancy of each pool over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PoolUsage {
    pub beliefs: usize,
    pub events: usize,
    pub intentions: usize,
    pub frames: usize,
}

/// True iff every positive literal holds and every negated one does not.
pub fn applicable(plan: &CompiledPlan, beliefs: &BeliefBase) -> bool {
    plan.context
        .iter()
        .all(|lit| beliefs.contains(lit.atom) != lit.negated)
}

/// Lowest-index plan whose trigger matches `event` and whose context holds.
pub fn select_plan(event: &Event, table: &PlanTable, beliefs: &BeliefBase) -> Option<usize> {
    table.plans.iter().position(|p| {
        p.trigger_kind == event.kind && p.trigger_atom == event.atom && applicable(p, beliefs)
    })
}

#[derive(Debug, Clone)]
pub struct RuntimeState {
    table: PlanTable,
    config: RuntimeConfig,
    atom_ids: HashMap<String, AtomId>,
    beliefs: BeliefBase,
    events: VecDeque<Event>,
    intentions: Vec<Intention>,
    cycle: u64,
    next_intention: u32,
    usage: PoolUsage,
}

impl RuntimeState {
    pub fn init(table: PlanTable, config: RuntimeConfig) -> Result<RuntimeState, RuntimeError> {
        for (name, value) in [
            ("belief_capacity", config.belief_capacity),
            ("event_capacity", config.event_capacity),
            ("intention_capacity", config.intention_capacity),
            ("frame_depth", config.frame_depth),
            ("max_cycles", config.max_cycles as usize),
        ] {
            if value == 0 {
                return Err(RuntimeError::Config(name));
            }
        }

        let atom_ids = table
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), AtomId(i as u16)))
            .collect();
        let mut state = RuntimeState {
            beliefs: BeliefBase::new(config.belief_capacity),
            events: VecDeque::with_capacity(config.event_capacity),
            intentions: Vec::with_capacity(config.intention_capacity),
            atom_ids,
            config,
            cycle: 0,
            next_intention: 0,
            usage: PoolUsage::default(),
            table,
        };

        let overflow = |pool, capacity| RuntimeError::Capacity {
            pool,
            capacity,
            cycle: None,
        };
        for i in 0..state.table.initial_beliefs.len() {
            let atom = state.table.initial_beliefs[i];
            state
                .beliefs
                .insert(atom)
                .map_err(|_| overflow(Pool::Beliefs, config.belief_capacity))?;
        }
        for i in 0..state.table.initial_goals.len() {
            let atom = state.table.initial_goals[i];
            if state.events.len() >= config.event_capacity {
                return Err(overflow(Pool::Events, config.event_capacity));
            }
            state.events.push_back(Event {
                kind: TriggerKind::AchieveAdd,
                atom,
                parent: None,
            });
        }
        state.note_usage();
        Ok(state)
    }

    pub fn table(&self) -> &PlanTable {
        &self.table
    }

    pub fn config(&self) -> &RuntimeConfig {
        &self.config
    }

    pub fn beliefs(&self) -> &BeliefBase {
        &self.beliefs
    }

    pub fn events(&self) -> impl ExactSizeIterator<Item = &Event> {
        self.events.iter()
    }

    pub fn intentions(&self) -> &[Intention] {
        &self.intentions
    }

    /// Number of completed cycles.
    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn usage(&self) -> PoolUsage {
        self.usage
    }

    pub fn is_quiescent(&self) -> bool {
        self.events.is_empty() && self.intentions.is_empty()
    }

    fn note_usage(&mut self) {
        let u = &mut self.usage;
        u.beliefs = u.beliefs.max(self.beliefs.len());
        u.events = u.events.max(self.events.len());
        u.intentions = u.intentions.max(self.intentions.len());
        let deepest = self
            .intentions
            .iter()
            .map(|i| i.frames.len())
            .max()
            .unwrap_or(0);
        u.frames = u.frames.max(deepest);
    }

    fn overflow(&self, pool: Pool) -> RuntimeError {
        let capacity = match pool {
            Pool::Beliefs => self.config.belief_capacity,
            Pool::Events => self.config.event_capacity,
            Pool::Intentions => self.config.intention_capacity,
            Pool::Frames => self.config.frame_depth,
        };
        RuntimeError::Capacity {
            pool,
            capacity,
            cycle: Some(self.cycle),
        }
    }

    fn enqueue(&mut self, event: Event) -> Result<(), RuntimeError> {
        if self.events.len() >= self.config.event_capacity {
            return Err(self.overflow(Pool::Events));
        }
        self.events.push_back(event);
        self.usage.events = self.usage.events.max(self.events.len());
        Ok(())
    }

    /// Replaces the belief base with `percepts` and queues one event per
    /// change: deletions first, then additions, each in ascending atom order.
    pub fn belief_update(&mut self, percepts: &[AtomId]) -> Result<Vec<Event>, RuntimeError> {
        let mut next: Vec<AtomId> = percepts.to_vec();
        next.sort_unstable();
        next.dedup();
        if next.len() > self.config.belief_capacity {
            return Err(self.overflow(Pool::Beliefs));
        }

        let mut changes = Vec::new();
        for atom in self.beliefs.iter() {
            if next.binary_search(&atom).is_err() {
                changes.push(Event {
                    kind: TriggerKind::BeliefDel,
                    atom,
                    parent: None,
                });
            }
        }
        for &atom in &next {
            if !self.beliefs.contains(atom) {
                changes.push(Event {
                    kind: TriggerKind::BeliefAdd,
                    atom,
                    parent: None,
                });
            }
        }
        if self.events.len() + changes.len() > self.config.event_capacity {
            return Err(self.overflow(Pool::Events));
        }

        self.beliefs.beliefs = next;
        for &e in &changes {
            self.enqueue(e)?;
        }
        self.usage.beliefs = self.usage.beliefs.max(self.beliefs.len());
        Ok(changes)
    }

    fn intention_index(&self, id: u32) -> Option<usize> {
        self.intentions.iter().position(|i| i.id == id)
    }

    /// Phase 2: drains the event queue, recording counts in `trace`.
    fn select_phase(&mut self, trace: &mut CycleTrace) -> Result<(), RuntimeError> {
        while let Some(event) = self.events.pop_front() {
            trace.events_drained += 1;
            let choice = select_plan(&event, &self.table, &self.beliefs);
            let Some(plan) = choice else {
                trace.events_dropped += 1;
                if event.kind == TriggerKind::AchieveAdd {
                    let goal = self.table.atom_name(event.atom);
                    trace
                        .warnings
                        .push(format!("dropped event +!{goal}: no applicable plan"));
                    if let Some(parent) = event.parent {
                        if let Some(i) = self.intention_index(parent) {
                            self.intentions.remove(i);
                            trace.warnings.push(format!(
                                "dropped intention {parent}: subgoal +!{goal} failed"
                            ));
                        }
                    }
                }
                continue;
            };
            trace.selected_plan = Some(plan);
            let frame = Frame { plan, pc: 0 };

            match event.parent.and_then(|p| self.intention_index(p)) {
                Some(i) => {
                    if self.intentions[i].frames.len() >= self.config.frame_depth {
                        return Err(self.overflow(Pool::Frames));
                    }
                    let intention = &mut self.intentions[i];
                    intention.frames.push(frame);
                    intention.state = IntentionState::Ready;
                    self.usage.frames = self.usage.frames.max(intention.frames.len());
                }
                None => {
                    if self.intentions.len() >= self.config.intention_capacity {
                        return Err(self.overflow(Pool::Intentions));
                    }
                    let id = self.next_intention;
                    self.next_intention += 1;
                    self.intentions.push(Intention {
                        id,
                        frames: vec![frame],
                        state: IntentionState::Ready,
                    });
                    self.usage.intentions = self.usage.intentions.max(self.intentions.len());
                    self.usage.frames = self.usage.frames.max(1);
                }
            }
        }
        Ok(())
    }

    /// Pops finished frames of intention `i`; removes it when its stack empties.
    /// Returns false if the intention was removed.
    fn unwind(&mut self, i: usize) -> bool {
        let intention = &mut self.intentions[i];
        while let Some(top) = intention.frames.last() {
            if top.pc < self.table.plans[top.plan].body.len() {
                return true;
            }
            intention.frames.pop();
        }
        self.intentions.remove(i);
        false
    }

    /// Phase 3. Returns the simulated duration charged.
    fn execute_phase<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        trace: &mut CycleTrace,
    ) -> Result<f64, RuntimeError> {
        // Intentions are stored in creation order, so the newest ready one is last.
        let Some(i) = self
            .intentions
            .iter()
            .rposition(|it| it.state == IntentionState::Ready)
        else {
            return Ok(0.0);
        };
        if !self.unwind(i) {
            return Ok(0.0);
        }

        let intention = &mut self.intentions[i];
        let id = intention.id;
        let frame = intention.frames.last_mut().expect("unwind leaves a frame");
        let formula = self.table.plans[frame.plan].body[frame.pc];
        let plan = frame.plan;
        frame.pc += 1;

        trace.executed_formula = Some(ExecutedFormula {
            opcode: formula.opcode,
            atom: self.table.atom_name(formula.atom).to_owned(),
            plan,
            intention: id,
        });

        let mut sim_ms = 0.0;
        match formula.opcode {
            Opcode::Action => {
                let name = self.table.atom_name(formula.atom);
                sim_ms = env
                    .perform(name)
                    .map_err(|fault| RuntimeError::Environment {
                        fault,
                        cycle: self.cycle,
                    })?;
            }
            Opcode::Achieve => {
                self.intentions[i].state = IntentionState::Suspended;
                self.post(formula.atom, TriggerKind::AchieveAdd, Some(id), trace)?;
            }
            Opcode::AchieveNew => {
                self.post(formula.atom, TriggerKind::AchieveAdd, None, trace)?;
            }
            Opcode::AddBelief => {
                let added = self
                    .beliefs
                    .insert(formula.atom)
                    .map_err(|_| self.overflow(Pool::Beliefs))?;
                self.usage.beliefs = self.usage.beliefs.max(self.beliefs.len());
                if added {
                    self.post(formula.atom, TriggerKind::BeliefAdd, None, trace)?;
                }
            }
            Opcode::DelBelief => {
                if self.beliefs.remove(formula.atom) {
                    self.post(formula.atom, TriggerKind::BeliefDel, None, trace)?;
                }
            }
        }

        if self.intentions[i].state == IntentionState::Ready {
            self.unwind(i);
        }
        Ok(sim_ms)
    }

    fn post(
        &mut self,
        atom: AtomId,
        kind: TriggerKind,
        parent: Option<u32>,
        trace: &mut CycleTrace,
    ) -> Result<(), RuntimeError> {
        self.enqueue(Event { kind, atom, parent })?;
        trace.events_posted += 1;
        Ok(())
    }

    /// Runs one belief-update / plan-selection / intention-execution cycle.
    pub fn reasoning_cycle<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
    ) -> Result<CycleTrace, RuntimeError> {
        let mut trace = CycleTrace {
            cycle: self.cycle,
            ..Default::default()
        };

        let t0 = Instant::now();
        let percepts: Vec<AtomId> = env
            .percepts()
            .into_iter()
            .filter_map(|name| self.atom_ids.get(name).copied())
            .collect();
        let changes = self.belief_update(&percepts)?.len() as u32;
        trace.belief_events = changes;
        trace.events_posted = changes;
        trace.belief_update = PhaseTiming {
            wall_clock_ns: t0.elapsed().as_nanos() as u64,
            simulated_ms: 0.0,
        };

        let t1 = Instant::now();
        self.select_phase(&mut trace)?;
        trace.plan_selection = PhaseTiming {
            wall_clock_ns: t1.elapsed().as_nanos() as u64,
            simulated_ms: 0.0,
        };

        let t2 = Instant::now();
        let sim_ms = self.execute_phase(env, &mut trace)?;
        trace.intention_execution = PhaseTiming {
            wall_clock_ns: t2.elapsed().as_nanos() as u64,
            simulated_ms: sim_ms,
        };

        self.cycle += 1;
        Ok(trace)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    /// The stop predicate held.
    Success,
    /// No events and no intentions remain.
    Deadlock,
    /// `max_cycles` reached.
    Limit,
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunOutcome::Success => "goal_reached",
            RunOutcome::Deadlock => "deadlock",
            RunOutcome::Limit => "limit",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub outcome: RunOutcome,
    pub cycles: u64,
    pub traces: Vec<CycleTrace>,
}

/// Cycles until `stop(env)` holds, the agent quiesces, or `max_cycles` is hit.
pub fn run<E, F>(state: &mut RuntimeState, env: &mut E, stop: F) -> Result<RunResult, RuntimeError>
where
    E: Environment + ?Sized,
    F: Fn(&E) -> bool,
{
    let mut traces = Vec::new();
    let outcome = loop {
        if state.cycle >= state.config.max_cycles {
            break RunOutcome::Limit;
        }
        traces.push(state.reasoning_cycle(env)?);
        if stop(env) {
            break RunOutcome::Success;
        }
        if state.is_quiescent() {
            break RunOutcome::Deadlock;
        }
    };
    Ok(RunResult {
        outcome,
        cycles: state.cycle,
        traces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asl::parse_program;
    use crate::plan_table::compile;

    fn table(src: &str) -> PlanTable {
        compile(&parse_program(src).unwrap()).unwrap()
    }

    /// Scripted environment: fixed percepts, records actions.
    #[derive(Default)]
    struct Script {
        percepts: Vec<&'static str>,
        actions: Vec<String>,
        cost: f64,
    }

    impl Environment for Script {
        fn percepts(&self) -> Vec<&str> {
            self.percepts.clone()
        }
        fn perform(&mut self, action: &str) -> Result<f64, EnvFault> {
            if action == "explode" {
                return Err(EnvFault {
                    action: action.into(),
                    reason: "boom".into(),
                });
            }
            self.actions.push(action.to_owned());
            Ok(self.cost)
        }
    }

    fn beliefs(t: &PlanTable, names: &[&str]) -> BeliefBase {
        let mut b = BeliefBase::new(16);
        for n in names {
            b.insert(t.lookup(n).unwrap()).unwrap();
        }
        b
    }

    #[test]
    fn init_seeds_goals_and_beliefs() {
        let t = table("a. b. a. !g. !g. +!g <- x.");
        let s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        assert_eq!(s.beliefs().len(), 2);
        assert_eq!(s.events().len(), 2);
        assert!(s.intentions().is_empty());
        assert_eq!(s.cycle(), 0);
    }

    #[test]
    fn init_capacity_errors() {
        let cfg = RuntimeConfig {
            belief_capacity: 1,
            ..Default::default()
        };
        let err = RuntimeState::init(table("a. b."), cfg).unwrap_err();
        assert!(matches!(
            err,
            RuntimeError::Capacity {
                pool: Pool::Beliefs,
                cycle: None,
                ..
            }
        ));
        assert!(err.to_string().contains("belief pool"));
        let zero = RuntimeConfig {
            frame_depth: 0,
            ..Default::default()
        };
        assert_eq!(
            RuntimeState::init(PlanTable::default(), zero).unwrap_err(),
            RuntimeError::Config("frame_depth")
        );
    }

    #[test]
    fn belief_update_diffs() {
        let t = table("+!g : at_intersection & path_left <- x.");
        let at = t.lookup("at_intersection").unwrap();
        let left = t.lookup("path_left").unwrap();
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();

        let ev = s.belief_update(&[at]).unwrap();
        assert_eq!(
            ev,
            vec![Event {
                kind: TriggerKind::BeliefAdd,
                atom: at,
                parent: None
            }]
        );
        assert!(s.belief_update(&[at]).unwrap().is_empty());

        s.belief_update(&[left, at]).unwrap();
        let ev = s.belief_update(&[]).unwrap();
        let kinds: Vec<_> = ev.iter().map(|e| (e.kind, e.atom)).collect();
        assert_eq!(
            kinds,
            vec![(TriggerKind::BeliefDel, at), (TriggerKind::BeliefDel, left)]
        );
    }

    #[test]
    fn belief_update_orders_deletions_first() {
        let t = table("+!g : a & b & c <- x.");
        let [a, b, c] = ["a", "b", "c"].map(|n| t.lookup(n).unwrap());
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        s.belief_update(&[c, b]).unwrap();
        let ev = s.belief_update(&[a, b]).unwrap();
        let kinds: Vec<_> = ev.iter().map(|e| (e.kind, e.atom)).collect();
        assert_eq!(
            kinds,
            vec![(TriggerKind::BeliefDel, c), (TriggerKind::BeliefAdd, a)]
        );
    }

    #[test]
    fn belief_update_capacity() {
        let t = table("+!g : a & b <- x.");
        let ids: Vec<_> = ["a", "b"].iter().map(|n| t.lookup(n).unwrap()).collect();
        let cfg = RuntimeConfig {
            belief_capacity: 1,
            ..Default::default()
        };
        let mut s = RuntimeState::init(t, cfg).unwrap();
        let err = s.belief_update(&ids).unwrap_err();
        assert!(matches!(
            err,
            RuntimeError::Capacity {
                pool: Pool::Beliefs,
                cycle: Some(0),
                ..
            }
        ));
    }

    #[test]
    fn applicability() {
        let t = table("+!g : at_intersection <- a. +!g <- b. +!g : not goal_found <- c.");
        assert!(applicable(&t.plans[0], &beliefs(&t, &["at_intersection"])));
        assert!(!applicable(&t.plans[0], &beliefs(&t, &[])));
        assert!(applicable(&t.plans[1], &beliefs(&t, &[])));
        assert!(!applicable(&t.plans[2], &beliefs(&t, &["goal_found"])));
        assert!(applicable(&t.plans[2], &beliefs(&t, &[])));
    }

    #[test]
    fn selection_respects_source_order() {
        let t = table("+!g : at_intersection <- a. +!g <- b.");
        let ev = Event {
            kind: TriggerKind::AchieveAdd,
            atom: t.lookup("g").unwrap(),
            parent: None,
        };
        assert_eq!(
            select_plan(&ev, &t, &beliefs(&t, &["at_intersection"])),
            Some(0)
        );
        assert_eq!(select_plan(&ev, &t, &beliefs(&t, &[])), Some(1));
        let other = Event {
            atom: t.lookup("a").unwrap(),
            ..ev
        };
        assert_eq!(select_plan(&other, &t, &beliefs(&t, &[])), None);
    }

    #[test]
    fn quiescent_cycle_still_counts() {
        let mut s = RuntimeState::init(PlanTable::default(), RuntimeConfig::default()).unwrap();
        let mut env = Script::default();
        let tr = s.reasoning_cycle(&mut env).unwrap();
        assert_eq!(tr.cycle, 0);
        assert_eq!(s.cycle(), 1);
        assert!(tr.executed_formula.is_none());
        assert_eq!(tr.events_drained, 0);
    }

    #[test]
    fn empty_table_deadlocks_after_one_cycle() {
        let mut s = RuntimeState::init(PlanTable::default(), RuntimeConfig::default()).unwrap();
        let r = run(&mut s, &mut Script::default(), |_| false).unwrap();
        assert_eq!(r.outcome, RunOutcome::Deadlock);
        assert_eq!(r.cycles, 1);
    }

    #[test]
    fn subgoal_suspends_parent_until_done() {
        // parent: a; !sub; c      sub: b
        let t = table("!main. +!main <- a; !sub; c. +!sub <- b.");
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        let mut env = Script::default();
        let r = run(&mut s, &mut env, |_| false).unwrap();
        assert_eq!(env.actions, vec!["a", "b", "c"]);
        assert_eq!(r.outcome, RunOutcome::Deadlock);
        // one intention throughout; sub ran as a second frame
        assert!(r
            .traces
            .iter()
            .filter_map(|t| t.executed_formula.as_ref())
            .all(|f| f.intention == 0));
        assert_eq!(s.usage().frames, 2);
        assert_eq!(s.usage().intentions, 1);
    }

    #[test]
    fn subgoal_as_last_formula_keeps_parent_until_child_finishes() {
        let t = table("!main. +!main <- !sub. +!sub <- b; b.");
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        let mut env = Script::default();
        run(&mut s, &mut env, |_| false).unwrap();
        assert_eq!(env.actions, vec!["b", "b"]);
    }

    #[test]
    fn failed_subgoal_drops_parent() {
        let t = table("!main. +!main <- !sub; c. +!sub : never <- b.");
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        let mut env = Script::default();
        let r = run(&mut s, &mut env, |_| false).unwrap();
        assert!(env.actions.is_empty());
        let warnings: Vec<_> = r.traces.iter().flat_map(|t| t.warnings.clone()).collect();
        assert_eq!(warnings.len(), 2);
        assert!(warnings[1].contains("dropped intention 0"));
        assert_eq!(r.outcome, RunOutcome::Deadlock);
    }

    #[test]
    fn lifo_selection() {
        // Two independent intentions; the newer one runs first.
        let t = table("!a. !b. +!a <- x; x. +!b <- y; y.");
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        let mut env = Script::default();
        run(&mut s, &mut env, |_| false).unwrap();
        assert_eq!(env.actions, vec!["y", "y", "x", "x"]);
    }

    #[test]
    fn belief_body_formulas_post_events() {
        let t = table("!g. +!g <- +seen; -seen; -seen. +seen <- hello.");
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        let mut env = Script::default();
        let r = run(&mut s, &mut env, |_| false).unwrap();
        // +seen posted once, -seen once (second delete is a no-op)
        let posted: u32 = r.traces.iter().map(|t| t.events_posted).sum();
        assert!(env.actions.contains(&"hello".to_owned()));
        // the +seen event fires before the next percept refresh wipes the belief
        assert!(posted >= 2);
    }

    #[test]
    fn frame_depth_overflow() {
        let t = table("!g. +!g <- !g.");
        let cfg = RuntimeConfig {
            frame_depth: 3,
            ..Default::default()
        };
        let mut s = RuntimeState::init(t, cfg).unwrap();
        let err = run(&mut s, &mut Script::default(), |_| false).unwrap_err();
        assert!(matches!(
            err,
            RuntimeError::Capacity {
                pool: Pool::Frames,
                capacity: 3,
                ..
            }
        ));
    }

    #[test]
    fn intention_overflow() {
        let t = table("!g. +!g <- !!g; x.");
        let cfg = RuntimeConfig {
            intention_capacity: 2,
            ..Default::default()
        };
        let mut s = RuntimeState::init(t, cfg).unwrap();
        let err = run(&mut s, &mut Script::default(), |_| false).unwrap_err();
        assert!(matches!(
            err,
            RuntimeError::Capacity {
                pool: Pool::Intentions,
                ..
            }
        ));
        assert!(err.cycle().is_some());
    }

    #[test]
    fn environment_fault_aborts() {
        let t = table("!g. +!g <- explode.");
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        let err = run(&mut s, &mut Script::default(), |_| false).unwrap_err();
        assert_eq!(err.cycle(), Some(0));
        assert!(err.to_string().contains("boom"));
    }

    #[test]
    fn limit_outcome() {
        let t = table("!g. +!g <- x; !!g.");
        let cfg = RuntimeConfig {
            max_cycles: 5,
            ..Default::default()
        };
        let mut s = RuntimeState::init(t, cfg).unwrap();
        let r = run(&mut s, &mut Script::default(), |_| false).unwrap();
        assert_eq!(r.outcome, RunOutcome::Limit);
        assert_eq!(r.cycles, 5);
        assert_eq!(r.traces.len(), 5);
    }

    #[test]
    fn empty_body_from_decoded_table_is_harmless() {
        let mut t = table("!g. +!g <- x.");
        t.plans[0].body.clear();
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        let r = run(&mut s, &mut Script::default(), |_| false).unwrap();
        assert_eq!(r.outcome, RunOutcome::Deadlock);
        assert!(r.traces.iter().all(|t| t.executed_formula.is_none()));
    }

    #[test]
    fn percepts_unknown_to_table_are_ignored() {
        let t = table("!g. +!g : seen <- x. +!g <- y.");
        let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
        let mut env = Script {
            percepts: vec!["seen", "weather_is_nice"],
            ..Default::default()
        };
        run(&mut s, &mut env, |_| false).unwrap();
        assert_eq!(env.actions, vec!["x"]);
        assert_eq!(s.beliefs().len(), 1);
    }
}
