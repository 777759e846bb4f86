use bdi_maze::asl::{parse_program, Opcode, TriggerKind};
use bdi_maze::maze::{
    generate_maze, load_maze, perform, run_agent, wall_follow_oracle, MazeGraph, MazeWorld,
    RobotState, GOAL_FOUND, PATH_LEFT, PATH_RIGHT, PATH_STRAIGHT,
};
use bdi_maze::plan_table::{compile, decode, encode, PlanTable};
use bdi_maze::runtime::{
    run, select_plan, BeliefBase, Event, Pool, RunOutcome, RuntimeConfig, RuntimeError,
    RuntimeState,
};
use bdi_maze::trace::{zero_wallclock, CycleTrace};
use proptest::prelude::*;

const LISTING: &str = include_str!("../examples/listing1.asl");

fn listing() -> PlanTable {
    compile(&parse_program(LISTING).unwrap()).unwrap()
}

fn single_segment() -> MazeGraph {
    load_maze("heading E\nmap\nS--E\n").unwrap()
}

fn executed(traces: &[CycleTrace]) -> Vec<(Opcode, String, usize)> {
    traces
        .iter()
        .map(|t| {
            let f = t
                .executed_formula
                .as_ref()
                .expect("a formula runs every cycle here");
            (f.opcode, f.atom.clone(), f.plan)
        })
        .collect()
}

#[test]
fn init_from_listing() {
    let s = RuntimeState::init(listing(), RuntimeConfig::default()).unwrap();
    assert!(s.beliefs().is_empty());
    let events: Vec<_> = s.events().copied().collect();
    assert_eq!(events.len(), 1);
    assert_eq!(events[0].kind, TriggerKind::AchieveAdd);
    assert_eq!(s.table().atom_name(events[0].atom), "solve_maze");
    assert!(s.intentions().is_empty());
}

#[test]
fn single_segment_hand_trace() {
    let table = listing();
    let maze = single_segment();
    let run = run_agent(&table, RuntimeConfig::default(), &maze).unwrap();
    assert_eq!(run.result.outcome, RunOutcome::Success);
    assert_eq!(run.result.cycles, 6);
    use Opcode::*;
    let expected = vec![
        (Action, "follow_segment".to_owned(), 1),
        (AchieveNew, "solve_maze".to_owned(), 1),
        (AchieveNew, "handle_intersection".to_owned(), 0),
        (Action, "check_situation".to_owned(), 2),
        (AchieveNew, "make_decision".to_owned(), 2),
        (Action, "stop".to_owned(), 3),
    ];
    assert_eq!(executed(&run.result.traces), expected);
    assert_eq!(run.decisions, ["stop"]);

    let t = &run.result.traces;
    // the first cycle adopts the unguarded plan as intention 0
    assert_eq!(t[0].selected_plan, Some(1));
    assert_eq!(t[0].executed_formula.as_ref().unwrap().intention, 0);
    // arrival at the node is perceived in the following belief update
    assert_eq!(t[1].belief_events, 1);
    // probing reveals the goal in the cycle after check_situation
    assert_eq!(t[4].belief_events, 1);
    // the newest intention runs first: make_decision (3) preempts the
    // handle_intersection intention (2) that still has !!solve_maze queued
    assert_eq!(t[5].executed_formula.as_ref().unwrap().intention, 3);
    let sim: Vec<f64> = t
        .iter()
        .map(|c| c.intention_execution.simulated_ms)
        .collect();
    assert_eq!(sim, [900.0, 0.0, 0.0, 50.0, 0.0, 0.0]);
}

#[test]
fn achieve_new_is_adopted_next_cycle_and_runs_first() {
    let table = listing();
    let maze = single_segment();
    let run = run_agent(&table, RuntimeConfig::default(), &maze).unwrap();
    let t = &run.result.traces;
    // !!make_decision posted in cycle 4, selected and started in cycle 5
    assert_eq!(t[4].events_posted, 2);
    assert_eq!(t[5].events_drained, 1);
    assert_eq!(t[5].selected_plan, Some(3));
}

#[test]
fn limit_and_deadlock_outcomes() {
    let maze = single_segment();
    let cfg = RuntimeConfig {
        max_cycles: 3,
        ..Default::default()
    };
    let r = run_agent(&listing(), cfg, &maze).unwrap();
    assert_eq!(r.result.outcome, RunOutcome::Limit);
    assert_eq!(r.result.cycles, 3);

    let r = run_agent(&PlanTable::default(), RuntimeConfig::default(), &maze).unwrap();
    assert_eq!(r.result.outcome, RunOutcome::Deadlock);
    assert_eq!(r.result.cycles, 1);
}

/// The left-hand rule written directly, independent of the plan table.
fn expected_decision(beliefs: &[&str]) -> &'static str {
    let has = |b| beliefs.contains(&b);
    if has(GOAL_FOUND) {
        "stop"
    } else if has(PATH_LEFT) {
        "turn_left"
    } else if has(PATH_STRAIGHT) {
        "forward"
    } else if has(PATH_RIGHT) {
        "turn_right"
    } else {
        "rotate_180"
    }
}

#[test]
fn decision_table_over_all_belief_combinations() {
    let table = listing();
    let goal = table.lookup("make_decision").unwrap();
    let event = Event {
        kind: TriggerKind::AchieveAdd,
        atom: goal,
        parent: None,
    };
    let names = [
        GOAL_FOUND,
        PATH_LEFT,
        PATH_STRAIGHT,
        PATH_RIGHT,
        "at_intersection",
    ];
    for mask in 0u32..(1 << names.len()) {
        let set: Vec<&str> = (0..names.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| names[i])
            .collect();
        let mut beliefs = BeliefBase::new(8);
        for n in &set {
            beliefs.insert(table.lookup(n).unwrap()).unwrap();
        }
        let plan =
            select_plan(&event, &table, &beliefs).expect("the unguarded plan always applies");
        let body = &table.plans[plan].body;
        assert_eq!(body.len(), 1);
        assert_eq!(
            table.atom_name(body[0].atom),
            expected_decision(&set),
            "beliefs {set:?}"
        );
    }
}

#[test]
fn solve_maze_guard_precedes_unguarded_plan() {
    let table = listing();
    let event = Event {
        kind: TriggerKind::AchieveAdd,
        atom: table.lookup("solve_maze").unwrap(),
        parent: None,
    };
    let mut b = BeliefBase::new(4);
    b.insert(table.lookup("at_intersection").unwrap()).unwrap();
    assert_eq!(select_plan(&event, &table, &b), Some(0));
    assert_eq!(select_plan(&event, &table, &BeliefBase::new(4)), Some(1));
}

#[test]
fn junction_decisions_follow_left_hand_priority_in_the_world() {
    // robot enters the junction heading E; exits are chosen per fixture
    let cases = [
        ("heading E\nmap\n  E\n  |\nS-+-+\n  |\n  +\n", "turn_left"),
        ("heading E\nmap\n  +\n  |\nS-+-E\n  |\n  +\n", "turn_left"),
        ("heading E\nmap\nS-+-E\n  |\n  +\n", "forward"),
        ("heading E\nmap\nS-+\n  |\n  E\n", "turn_right"),
    ];
    for (text, first) in cases {
        let maze = load_maze(text).unwrap();
        let run = run_agent(&listing(), RuntimeConfig::default(), &maze).unwrap();
        assert_eq!(run.decisions[0], first, "{text}");
        assert_eq!(
            run.decisions,
            wall_follow_oracle(&maze).unwrap().decision_actions()
        );
    }
}

#[test]
fn lifo_between_ready_intentions() {
    // intention 0 runs x twice, intention 1 runs y twice; 1 is newer
    let t = compile(&parse_program("!a. !b. +!a <- x; x. +!b <- y; y.").unwrap()).unwrap();
    let maze = single_segment();
    let mut world = MazeWorld::new(&maze);
    let mut s = RuntimeState::init(t, RuntimeConfig::default()).unwrap();
    let tr = s.reasoning_cycle(&mut NoopEnv(&mut world)).unwrap();
    assert_eq!(tr.executed_formula.unwrap().intention, 1);
}

/// Wraps a world but accepts any action at no cost.
struct NoopEnv<'a, 'm>(&'a mut MazeWorld<'m>);

impl bdi_maze::runtime::Environment for NoopEnv<'_, '_> {
    fn percepts(&self) -> Vec<&str> {
        self.0.percepts()
    }
    fn perform(&mut self, _action: &str) -> Result<f64, bdi_maze::runtime::EnvFault> {
        Ok(0.0)
    }
}

#[test]
fn undersized_event_queue_names_pool_and_cycle() {
    let maze = load_maze(include_str!("../examples/paper_maze.maze")).unwrap();
    let cfg = RuntimeConfig {
        event_capacity: 1,
        ..Default::default()
    };
    let err = run_agent(&listing(), cfg, &maze).unwrap_err();
    match &err {
        RuntimeError::Capacity {
            pool,
            capacity,
            cycle,
        } => {
            assert_eq!(*pool, Pool::Events);
            assert_eq!(*capacity, 1);
            assert!(cycle.is_some());
        }
        other => panic!("unexpected {other}"),
    }
    let msg = err.to_string();
    assert!(
        msg.contains("event queue") && msg.contains("at cycle"),
        "{msg}"
    );
}

/// Replays the executed actions directly against the robot model and
/// checks the run's arrivals and clock.
fn replay(maze: &MazeGraph, traces: &[CycleTrace]) -> (RobotState, f64) {
    let mut robot = RobotState::start(maze);
    let mut total = 0.0;
    for t in traces {
        if let Some(f) = &t.executed_formula {
            if f.opcode == Opcode::Action {
                let (ms, next) = perform(&f.atom, maze, &robot).unwrap();
                assert_eq!(ms, t.intention_execution.simulated_ms);
                robot = next;
            }
        }
        total += t.simulated_ms();
    }
    (robot, total)
}

fn sized_maze() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..7, 2usize..7, 0u64..1000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn agent_matches_oracle_and_replay((w, h, seed) in sized_maze()) {
        let maze = generate_maze(w, h, seed).unwrap();
        let oracle = wall_follow_oracle(&maze).unwrap();
        let run = run_agent(&listing(), RuntimeConfig::default(), &maze).unwrap();
        prop_assert_eq!(run.result.outcome, RunOutcome::Success);
        prop_assert_eq!(&run.decisions, &oracle.decision_actions());
        prop_assert_eq!(&run.arrivals, &oracle.visits);
        prop_assert!(oracle.traversals <= 2 * maze.segments.len());

        let (robot, total) = replay(&maze, &run.result.traces);
        prop_assert_eq!(&robot, &run.robot);
        prop_assert_eq!(total, run.robot.sim_clock_ms);
        prop_assert_eq!(total, oracle.total_ms);
    }

    #[test]
    fn events_are_conserved((w, h, seed) in sized_maze()) {
        let maze = generate_maze(w, h, seed).unwrap();
        let table = listing();
        let initial = table.initial_goals.len() as u64;
        let mut state = RuntimeState::init(table, RuntimeConfig::default()).unwrap();
        let mut world = MazeWorld::new(&maze);
        let r = run(&mut state, &mut world, MazeWorld::goal_reached).unwrap();
        let posted: u64 = r.traces.iter().map(|t| t.events_posted as u64).sum();
        let drained: u64 = r.traces.iter().map(|t| t.events_drained as u64).sum();
        let dropped: u64 = r.traces.iter().map(|t| t.events_dropped as u64).sum();
        prop_assert_eq!(initial + posted, drained + state.events().len() as u64);
        // belief events have no plans in the listing; every one is dropped silently
        let belief_events: u64 = r.traces.iter().map(|t| t.belief_events as u64).sum();
        prop_assert_eq!(dropped, belief_events);
        prop_assert!(r.traces.iter().all(|t| t.warnings.is_empty()));
    }

    #[test]
    fn capacities_bound_usage_and_never_change_behaviour(
        (w, h, seed) in sized_maze(),
        caps in (1usize..5, 1usize..5, 1usize..4, 1usize..3),
    ) {
        let maze = generate_maze(w, h, seed).unwrap();
        let table = listing();
        let reference = run_agent(&table, RuntimeConfig::default(), &maze).unwrap();
        let cfg = RuntimeConfig {
            belief_capacity: caps.0,
            event_capacity: caps.1,
            intention_capacity: caps.2,
            frame_depth: caps.3,
            ..Default::default()
        };
        match run_agent(&table, cfg, &maze) {
            Ok(small) => {
                let u = small.usage;
                prop_assert!(u.beliefs <= cfg.belief_capacity && u.events <= cfg.event_capacity);
                prop_assert!(u.intentions <= cfg.intention_capacity && u.frames <= cfg.frame_depth);
                let (mut a, mut b) = (small.result.traces, reference.result.traces.clone());
                zero_wallclock(&mut a);
                zero_wallclock(&mut b);
                prop_assert_eq!(a, b);
            }
            Err(RuntimeError::Capacity { .. }) => {
                let u = reference.usage;
                prop_assert!(
                    u.beliefs > cfg.belief_capacity
                        || u.events > cfg.event_capacity
                        || u.intentions > cfg.intention_capacity
                        || u.frames > cfg.frame_depth
                );
            }
            Err(other) => prop_assert!(false, "unexpected error {}", other),
        }
    }

    #[test]
    fn runs_are_deterministic_and_representation_independent((w, h, seed) in sized_maze()) {
        let maze = generate_maze(w, h, seed).unwrap();
        let direct = listing();
        let via_bytes = decode(&encode(&direct)).unwrap();
        let runs = [&direct, &direct, &via_bytes].map(|t| {
            let mut traces = run_agent(t, RuntimeConfig::default(), &maze).unwrap().result.traces;
            zero_wallclock(&mut traces);
            traces
        });
        prop_assert_eq!(&runs[0], &runs[1]);
        prop_assert_eq!(&runs[0], &runs[2]);
    }
}
