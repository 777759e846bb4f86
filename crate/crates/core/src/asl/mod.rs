//! Propositional AgentSpeak frontend.
//!
//! The accepted language is the atom-only fragment of AgentSpeak:
//!
//! ```text
//! program := (belief "." | "!" atom "." | plan)*
//! plan    := trigger (":" context)? "<-" body "."
//! trigger := ("+!" | "+" | "-") atom
//! context := literal ("&" literal)*
//! literal := ("not")? atom
//! body    := formula (";" formula)*
//! formula := atom | "!" atom | "!!" atom | "+" atom | "-" atom
//! ```
//!
//! `%` starts a comment that runs to the end of the line.

mod lexer;
mod parser;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use parser::{parse_program, ParseError};
pub use validate::{validate, Finding, ValidationReport};

/// A propositional identifier: a lowercase letter followed by letters,
/// digits or underscores.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Option<Atom> {
        let name = name.into();
        if is_identifier(&name) {
            Some(Atom(name))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Returns true if `s` is a valid atom name. `not` is reserved.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && s != "not"
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    /// Negation as failure: holds iff the atom is absent.
    pub negated: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "not {}", self.atom)
        } else {
            write!(f, "{}", self.atom)
        }
    }
}

/// Triggering event kinds. The discriminants are the plan-table wire codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum TriggerKind {
    /// `+!g`
    AchieveAdd = 0,
    /// `+b`
    BeliefAdd = 1,
    /// `-b`
    BeliefDel = 2,
}

impl TriggerKind {
    pub fn from_code(code: u8) -> Option<TriggerKind> {
        match code {
            0 => Some(TriggerKind::AchieveAdd),
            1 => Some(TriggerKind::BeliefAdd),
            2 => Some(TriggerKind::BeliefDel),
            _ => None,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self {
            TriggerKind::AchieveAdd => "+!",
            TriggerKind::BeliefAdd => "+",
            TriggerKind::BeliefDel => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriggerEvent {
    pub kind: TriggerKind,
    pub atom: Atom,
}

impl fmt::Display for TriggerEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.atom)
    }
}

/// Body formula opcodes. The discriminants are the plan-table wire codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[repr(u8)]
pub enum Opcode {
    Action = 0,
    /// `!g`: post a subgoal and suspend until it completes.
    Achieve = 1,
    /// `!!g`: post a goal as a fresh intention.
    AchieveNew = 2,
    AddBelief = 3,
    DelBelief = 4,
}

impl Opcode {
    pub fn from_code(code: u8) -> Option<Opcode> {
        match code {
            0 => Some(Opcode::Action),
            1 => Some(Opcode::Achieve),
            2 => Some(Opcode::AchieveNew),
            3 => Some(Opcode::AddBelief),
            4 => Some(Opcode::DelBelief),
            _ => None,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self {
            Opcode::Action => "",
            Opcode::Achieve => "!",
            Opcode::AchieveNew => "!!",
            Opcode::AddBelief => "+",
            Opcode::DelBelief => "-",
        }
    }

    /// Stable snake_case name used in traces.
    pub fn name(self) -> &'static str {
        match self {
            Opcode::Action => "action",
            Opcode::Achieve => "achieve",
            Opcode::AchieveNew => "achieve_new",
            Opcode::AddBelief => "add_belief",
            Opcode::DelBelief => "del_belief",
        }
    }

    pub fn from_name(name: &str) -> Option<Opcode> {
        [
            Opcode::Action,
            Opcode::Achieve,
            Opcode::AchieveNew,
            Opcode::AddBelief,
            Opcode::DelBelief,
        ]
        .into_iter()
        .find(|op| op.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BodyFormula {
    pub opcode: Opcode,
    pub atom: Atom,
}

impl fmt::Display for BodyFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.opcode.prefix(), self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plan {
    pub trigger: TriggerEvent,
    /// Conjunction; empty means always applicable.
    pub context: Vec<Literal>,
    pub body: Vec<BodyFormula>,
    /// Ordinal position among the plans of the source file.
    pub source_index: usize,
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.trigger)?;
        if !self.context.is_empty() {
            f.write_str(" : ")?;
            for (i, lit) in self.context.iter().enumerate() {
                if i > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{lit}")?;
            }
        }
        f.write_str(" <- ")?;
        for (i, formula) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{formula}")?;
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgentProgram {
    pub initial_beliefs: Vec<Atom>,
    pub initial_goals: Vec<Atom>,
    pub plans: Vec<Plan>,
}

/// Pretty-prints in source syntax; the output re-parses to an identical program.
impl fmt::Display for AgentProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.initial_beliefs {
            writeln!(f, "{b}.")?;
        }
        for g in &self.initial_goals {
            writeln!(f, "!{g}.")?;
        }
        for plan in &self.plans {
            writeln!(f, "{plan}")?;
        }
        Ok(())
    }
}
