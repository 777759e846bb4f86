//! Run the bundled agent through the bundled maze and print the phase summary.

use bdi_maze::asl::parse_program;
use bdi_maze::maze::{load_maze, run_agent};
use bdi_maze::plan_table::compile;
use bdi_maze::runtime::RuntimeConfig;
use bdi_maze::trace::summarize;

fn main() {
    let table = compile(&parse_program(include_str!("listing1.asl")).unwrap()).unwrap();
    let maze = load_maze(include_str!("paper_maze.maze")).unwrap();

    let run = run_agent(&table, RuntimeConfig::default(), &maze).expect("default pools suffice");
    let mut summary = summarize(&run.result.traces).unwrap();
    summary.outcome = Some(run.result.outcome.to_string());
    print!("{summary}");
    println!("robot clock:       {:.3} ms", run.robot.sim_clock_ms);
    println!("decisions:         {}", run.decisions.join(" "));
}
