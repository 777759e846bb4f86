//! Compare the agent against the graph-level wall follower on a range of
//! generated mazes.

use bdi_maze::asl::parse_program;
use bdi_maze::maze::{generate_maze, run_agent, wall_follow_oracle};
use bdi_maze::plan_table::compile;
use bdi_maze::runtime::{RunOutcome, RuntimeConfig};

fn main() {
    let table = compile(&parse_program(include_str!("listing1.asl")).unwrap()).unwrap();
    println!(
        "{:>5} {:>4} {:>7} {:>11} {:>6}  match",
        "size", "seed", "cycles", "traversals", "bound"
    );
    for size in [3, 5, 8] {
        for seed in 1..=4 {
            let maze = generate_maze(size, size, seed).unwrap();
            let oracle = wall_follow_oracle(&maze).expect("tree mazes are solvable");
            let run = run_agent(&table, RuntimeConfig::default(), &maze).unwrap();
            let same = run.result.outcome == RunOutcome::Success
                && run.decisions == oracle.decision_actions()
                && run.arrivals == oracle.visits
                && run.robot.sim_clock_ms == oracle.total_ms;
            println!(
                "{:>5} {:>4} {:>7} {:>11} {:>6}  {}",
                format!("{size}x{size}"),
                seed,
                run.result.cycles,
                oracle.traversals,
                2 * maze.segments.len(),
                if same { "yes" } else { "NO" }
            );
        }
    }
}
