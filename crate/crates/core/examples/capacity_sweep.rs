//! Find the smallest pool sizes that run the bundled agent through the
//! bundled maze and a set of generated mazes, then show what happens one
//! size below.

use bdi_maze::asl::parse_program;
use bdi_maze::maze::{generate_maze, load_maze, run_agent, MazeGraph};
use bdi_maze::plan_table::compile;
use bdi_maze::runtime::{minimal_config, PoolUsage, RuntimeConfig, RuntimeError};

fn main() {
    let table = compile(&parse_program(include_str!("listing1.asl")).unwrap()).unwrap();
    let mut mazes: Vec<MazeGraph> = vec![load_maze(include_str!("paper_maze.maze")).unwrap()];
    mazes.extend((1..=10).map(|seed| generate_maze(6, 6, seed).unwrap()));

    let workload = |config: &RuntimeConfig| -> Result<PoolUsage, RuntimeError> {
        let mut peak = PoolUsage::default();
        for maze in &mazes {
            let u = run_agent(&table, *config, maze)?.usage;
            peak.beliefs = peak.beliefs.max(u.beliefs);
            peak.events = peak.events.max(u.events);
            peak.intentions = peak.intentions.max(u.intentions);
            peak.frames = peak.frames.max(u.frames);
        }
        Ok(peak)
    };

    let report = minimal_config(RuntimeConfig::default(), workload).expect("default pools suffice");
    let c = report.config;
    println!("peak usage:      {:?}", report.high_water);
    println!(
        "minimal config:  beliefs {}, events {}, intentions {}, frames {} ({} trials)",
        c.belief_capacity, c.event_capacity, c.intention_capacity, c.frame_depth, report.trials
    );

    let undersized = RuntimeConfig {
        event_capacity: c.event_capacity - 1,
        ..c
    };
    match run_agent(&table, undersized, &mazes[0]) {
        Err(e) => println!("events - 1:      {e}"),
        Ok(_) => println!("events - 1:      unexpectedly succeeded"),
    }
}
