//! Record a run, export the trace, and draw the phase timeline.
//!
//! Prints the ASCII timeline and writes `timeline.svg` and `trace.csv`
//! into the system temp directory.

use bdi_maze::asl::parse_program;
use bdi_maze::maze::{load_maze, run_agent};
use bdi_maze::plan_table::compile;
use bdi_maze::runtime::RuntimeConfig;
use bdi_maze::trace::{
    export, parse_csv, render_timeline, zero_wallclock, ExportFormat, TimelineStyle,
};

fn main() -> std::io::Result<()> {
    let table = compile(&parse_program(include_str!("listing1.asl")).unwrap()).unwrap();
    let maze = load_maze(include_str!("paper_maze.maze")).unwrap();
    let mut traces = run_agent(&table, RuntimeConfig::default(), &maze)
        .unwrap()
        .result
        .traces;
    zero_wallclock(&mut traces);

    let csv = export(&traces, ExportFormat::Csv);
    assert_eq!(parse_csv(&csv).unwrap(), traces);

    print!(
        "{}",
        render_timeline(&traces, TimelineStyle::Ascii).unwrap()
    );
    let dir = std::env::temp_dir();
    std::fs::write(dir.join("trace.csv"), csv)?;
    std::fs::write(
        dir.join("timeline.svg"),
        render_timeline(&traces, TimelineStyle::Svg).unwrap(),
    )?;
    println!("wrote {}", dir.join("timeline.svg").display());
    Ok(())
}
