//! The `bdi-maze` command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 parse, validation or
//! format error, 3 runtime failure (capacity overflow, cycle limit,
//! environment fault, deadlock).

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::asl::{parse_program, validate, Atom};
use crate::maze::{generate_maze, load_maze, run_agent, wall_follow_oracle, MazeGraph, ACTIONS};
use crate::plan_table::{self, compile, PlanTable};
use crate::runtime::{RunOutcome, RuntimeConfig};
use crate::trace::{
    export, parse_csv, parse_jsonl, render_timeline, summarize, zero_wallclock, ExportFormat,
    TimelineStyle,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bdi-maze",
    version,
    about = "AgentSpeak plan-table compiler and maze-robot BDI runtime"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile an .asl program into a .bdip plan table.
    Compile {
        input: PathBuf,
        /// Output path; defaults to the input with a .bdip extension.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the disassembled plan table.
        #[arg(long)]
        dump: bool,
    },
    /// Run a program (.asl or .bdip) in a maze.
    Run {
        program: PathBuf,
        #[arg(long)]
        maze: PathBuf,
        #[arg(long, default_value_t = RuntimeConfig::default().max_cycles)]
        max_cycles: u64,
        /// Write the per-cycle trace; `.csv` selects CSV, anything else JSONL.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Print a run summary.
        #[arg(long)]
        summary: bool,
        /// Zero wall-clock fields in the written trace.
        #[arg(long)]
        no_wallclock: bool,
    },
    /// Generate a random tree maze.
    Gen {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        seed: u64,
        /// Output path; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Walk a maze with the reference left-hand-rule walker.
    Oracle {
        #[arg(long)]
        maze: PathBuf,
    },
    /// Render a trace as a phase timeline.
    Plot {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_enum, default_value_t = Style::Svg)]
        style: Style,
        /// Output path; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Style {
    Svg,
    Ascii,
}

/// A failed command: exit code plus diagnostic.
struct Failure(i32, String);

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn input(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

fn runtime(msg: impl Into<String>) -> Failure {
    Failure(EXIT_RUNTIME, msg.into())
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compile { input, out, dump } => cmd_compile(&input, out, dump, stdout, stderr),
        Command::Run {
            program,
            maze,
            max_cycles,
            trace,
            summary,
            no_wallclock,
        } => cmd_run(
            &program,
            &maze,
            max_cycles,
            trace.as_deref(),
            summary,
            no_wallclock,
            stdout,
            stderr,
        ),
        Command::Gen {
            width,
            height,
            seed,
            out,
        } => cmd_gen(width, height, seed, out.as_deref(), stdout),
        Command::Oracle { maze } => cmd_oracle(&maze, stdout),
        Command::Plot { trace, style, out } => cmd_plot(&trace, style, out.as_deref(), stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let bytes = read(path)?;
    String::from_utf8(bytes).map_err(|_| input(format!("{}: not valid UTF-8", path.display())))
}

fn write_out(path: Option<&Path>, data: &[u8], stdout: &mut dyn Write) -> CmdResult {
    match path {
        Some(p) => {
            fs::write(p, data).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))
        }
        None => stdout
            .write_all(data)
            .map_err(|e| usage(format!("cannot write output: {e}"))),
    }
}

fn known_actions() -> BTreeSet<Atom> {
    ACTIONS.iter().filter_map(|a| Atom::new(*a)).collect()
}

/// Parses, validates and compiles `.asl` source, or decodes a `.bdip` table
/// (recognized by its magic bytes). Warnings go to `stderr`.
fn load_program(path: &Path, stderr: &mut dyn Write) -> Result<PlanTable, Failure> {
    let bytes = read(path)?;
    let name = path.display();
    let (program, table) = if bytes.starts_with(plan_table::MAGIC) {
        let table = plan_table::decode(&bytes).map_err(|e| input(format!("{name}: {e}")))?;
        (table.to_program(), Some(table))
    } else {
        let text =
            String::from_utf8(bytes).map_err(|_| input(format!("{name}: not valid UTF-8")))?;
        let program = parse_program(&text).map_err(|e| input(format!("{name}:{e}")))?;
        (program, None)
    };

    let report = validate(&program, &known_actions());
    for w in &report.warnings {
        let _ = writeln!(stderr, "warning: {name}: {w}");
    }
    if !report.is_ok() {
        let all: Vec<String> = report
            .errors
            .iter()
            .map(|e| format!("{name}: {e}"))
            .collect();
        return Err(input(all.join("\n")));
    }
    match table {
        Some(t) => Ok(t),
        None => compile(&program).map_err(|e| input(format!("{name}: {e}"))),
    }
}

fn load_maze_file(path: &Path) -> Result<MazeGraph, Failure> {
    let text = read_text(path)?;
    load_maze(&text).map_err(|e| input(format!("{}:{e}", path.display())))
}

fn cmd_compile(
    path: &Path,
    out: Option<PathBuf>,
    dump: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CmdResult {
    let table = load_program(path, stderr)?;
    let out = out.unwrap_or_else(|| path.with_extension("bdip"));
    fs::write(&out, plan_table::encode(&table))
        .map_err(|e| usage(format!("cannot write {}: {e}", out.display())))?;
    if dump {
        write_out(None, table.dump().as_bytes(), stdout)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    program: &Path,
    maze_path: &Path,
    max_cycles: u64,
    trace_path: Option<&Path>,
    summary: bool,
    no_wallclock: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CmdResult {
    if max_cycles == 0 {
        return Err(usage("--max-cycles must be at least 1"));
    }
    let table = load_program(program, stderr)?;
    let maze = load_maze_file(maze_path)?;
    let config = RuntimeConfig {
        max_cycles,
        ..RuntimeConfig::default()
    };
    let mut run = run_agent(&table, config, &maze).map_err(|e| runtime(e.to_string()))?;
    let outcome = run.result.outcome;

    if no_wallclock {
        zero_wallclock(&mut run.result.traces);
    }
    if let Some(path) = trace_path {
        let format = match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => ExportFormat::Csv,
            _ => ExportFormat::Jsonl,
        };
        write_out(
            Some(path),
            export(&run.result.traces, format).as_bytes(),
            stdout,
        )?;
    }
    if summary {
        if let Ok(mut s) = summarize(&run.result.traces) {
            s.outcome = Some(outcome.to_string());
            write_out(None, s.to_string().as_bytes(), stdout)?;
        }
    }
    match outcome {
        RunOutcome::Success => Ok(()),
        RunOutcome::Limit => Err(runtime(format!(
            "cycle limit of {} reached at cycle {}",
            max_cycles, run.result.cycles
        ))),
        RunOutcome::Deadlock => Err(runtime(format!(
            "deadlock at cycle {}: no events and no intentions left",
            run.result.cycles
        ))),
    }
}

fn cmd_gen(
    width: usize,
    height: usize,
    seed: u64,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> CmdResult {
    let maze = generate_maze(width, height, seed).ok_or_else(|| {
        usage(format!(
            "maze dimensions must be at least 2x2, got {width}x{height}"
        ))
    })?;
    write_out(out, maze.to_text().as_bytes(), stdout)
}

fn cmd_oracle(path: &Path, stdout: &mut dyn Write) -> CmdResult {
    let maze = load_maze_file(path)?;
    let (report, failure) = match wall_follow_oracle(&maze) {
        Ok(r) => (r, None),
        Err(e) => (e.partial.clone(), Some(e.to_string())),
    };
    let list = |items: Vec<String>| format!("[{}]", items.join(", "));
    let text = format!(
        "decisions: {}\nvisits: {}\ntraversals: {}\nsimulated_ms: {:.3}\n",
        list(
            report
                .decisions
                .iter()
                .map(|(_, d)| d.to_string())
                .collect()
        ),
        list(report.visits.iter().map(|n| n.to_string()).collect()),
        report.traversals,
        report.total_ms
    );
    write_out(None, text.as_bytes(), stdout)?;
    match failure {
        Some(msg) => Err(runtime(msg)),
        None => Ok(()),
    }
}

fn cmd_plot(path: &Path, style: Style, out: Option<&Path>, stdout: &mut dyn Write) -> CmdResult {
    let text = read_text(path)?;
    let name = path.display();
    let is_csv = path.extension().is_some_and(|e| e == "csv") || text.starts_with("cycle,");
    let traces = if is_csv {
        parse_csv(&text)
    } else {
        parse_jsonl(&text)
    }
    .map_err(|e| input(format!("{name}: {e}")))?;
    let style = match style {
        Style::Svg => TimelineStyle::Svg,
        Style::Ascii => TimelineStyle::Ascii,
    };
    let rendered = render_timeline(&traces, style).map_err(|e| input(format!("{name}: {e}")))?;
    write_out(out, rendered.as_bytes(), stdout)
}
