//! Embedded-style BDI agent pipeline for a line-following maze robot.
//!
//! * [`asl`] parses and validates propositional AgentSpeak programs.
//! * [`plan_table`] compiles them into a compact binary plan table.
//! * [`runtime`] executes a plan table with a fixed-capacity, three-phase
//!   reasoning cycle and records per-phase timings.
//! * [`maze`] simulates the maze and robot, and provides a left-hand-rule
//!   reference walker.
//! * [`trace`] summarizes, exports and plots the recorded timings.
//! * [`cli`] ties the pieces together behind the `bdi-maze` binary.
//!
//! ```
//! use bdi_maze::{asl, maze, plan_table, runtime::RuntimeConfig};
//!
//! let src = "!go. +!go <- follow_segment; stop.";
//! let table = plan_table::compile(&asl::parse_program(src).unwrap()).unwrap();
//! let m = maze::load_maze("heading E\nmap\nS--E\n").unwrap();
//! let run = maze::run_agent(&table, RuntimeConfig::default(), &m).unwrap();
//! assert!(run.robot.stopped);
//! ```

pub mod asl;
pub mod cli;
pub mod maze;
pub mod plan_table;
pub mod runtime;
pub mod trace;
