//! Atom-interned static plan table: the only program representation the
//! runtime executes.

mod codec;

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::asl::{
    AgentProgram, Atom, BodyFormula, Literal, Opcode, Plan, TriggerEvent, TriggerKind,
};

pub use codec::{decode, encode, DecodeError, DecodeErrorKind, MAGIC, VERSION};

/// Index into [`PlanTable::atoms`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u16);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompiledLiteral {
    pub negated: bool,
    pub atom: AtomId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompiledFormula {
    pub opcode: Opcode,
    pub atom: AtomId,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompiledPlan {
    pub trigger_kind: TriggerKind,
    pub trigger_atom: AtomId,
    pub context: Vec<CompiledLiteral>,
    pub body: Vec<CompiledFormula>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PlanTable {
    pub atoms: Vec<String>,
    pub plans: Vec<CompiledPlan>,
    pub initial_beliefs: Vec<AtomId>,
    pub initial_goals: Vec<AtomId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CapacityError {
    #[error("too many atoms: {0} (limit 65535)")]
    Atoms(usize),
    #[error("atom `{0}` is longer than 255 bytes")]
    AtomLength(String),
    #[error("too many {what}: {count} (limit 65535)")]
    Count { what: &'static str, count: usize },
    #[error("plan {plan}: {what} has {len} entries (limit 255)")]
    PlanSequence {
        plan: usize,
        what: &'static str,
        len: usize,
    },
}

const MAX_ATOMS: usize = u16::MAX as usize;
const MAX_SEQ: usize = u8::MAX as usize;

#[derive(Default)]
struct Interner {
    atoms: Vec<String>,
    ids: HashMap<String, AtomId>,
}

impl Interner {
    fn intern(&mut self, atom: &Atom) -> Result<AtomId, CapacityError> {
        if let Some(&id) = self.ids.get(atom.as_str()) {
            return Ok(id);
        }
        if atom.as_str().len() > u8::MAX as usize {
            return Err(CapacityError::AtomLength(atom.to_string()));
        }
        if self.atoms.len() >= MAX_ATOMS {
            return Err(CapacityError::Atoms(self.atoms.len() + 1));
        }
        let id = AtomId(self.atoms.len() as u16);
        self.atoms.push(atom.to_string());
        self.ids.insert(atom.to_string(), id);
        Ok(id)
    }
}

/// Lowers a program into a plan table.
///
/// Atoms are numbered by first occurrence, visiting initial beliefs, then
/// initial goals, then each plan's trigger, context and body in order.
pub fn compile(program: &AgentProgram) -> Result<PlanTable, CapacityError> {
    for (what, count) in [
        ("plans", program.plans.len()),
        ("initial beliefs", program.initial_beliefs.len()),
        ("initial goals", program.initial_goals.len()),
    ] {
        if count > u16::MAX as usize {
            return Err(CapacityError::Count { what, count });
        }
    }

    let mut interner = Interner::default();
    let initial_beliefs = program
        .initial_beliefs
        .iter()
        .map(|a| interner.intern(a))
        .collect::<Result<Vec<_>, _>>()?;
    let initial_goals = program
        .initial_goals
        .iter()
        .map(|a| interner.intern(a))
        .collect::<Result<Vec<_>, _>>()?;

    let mut plans = Vec::with_capacity(program.plans.len());
    for (i, plan) in program.plans.iter().enumerate() {
        for (what, len) in [("context", plan.context.len()), ("body", plan.body.len())] {
            if len > MAX_SEQ {
                return Err(CapacityError::PlanSequence { plan: i, what, len });
            }
        }
        let trigger_atom = interner.intern(&plan.trigger.atom)?;
        let context = plan
            .context
            .iter()
            .map(|l| {
                Ok(CompiledLiteral {
                    negated: l.negated,
                    atom: interner.intern(&l.atom)?,
                })
            })
            .collect::<Result<Vec<_>, CapacityError>>()?;
        let body = plan
            .body
            .iter()
            .map(|f| {
                Ok(CompiledFormula {
                    opcode: f.opcode,
                    atom: interner.intern(&f.atom)?,
                })
            })
            .collect::<Result<Vec<_>, CapacityError>>()?;
        plans.push(CompiledPlan {
            trigger_kind: plan.trigger.kind,
            trigger_atom,
            context,
            body,
        });
    }

    Ok(PlanTable {
        atoms: interner.atoms,
        plans,
        initial_beliefs,
        initial_goals,
    })
}

impl PlanTable {
    pub fn atom_name(&self, id: AtomId) -> &str {
        &self.atoms[id.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<AtomId> {
        self.atoms
            .iter()
            .position(|a| a == name)
            .map(|i| AtomId(i as u16))
    }

    fn atom(&self, id: AtomId) -> Atom {
        Atom::new(self.atom_name(id)).expect("plan table atoms are valid identifiers")
    }

    /// Rebuilds the source-level program. Inverse of [`compile`].
    pub fn to_program(&self) -> AgentProgram {
        AgentProgram {
            initial_beliefs: self.initial_beliefs.iter().map(|&a| self.atom(a)).collect(),
            initial_goals: self.initial_goals.iter().map(|&a| self.atom(a)).collect(),
            plans: self
                .plans
                .iter()
                .enumerate()
                .map(|(source_index, p)| Plan {
                    trigger: TriggerEvent {
                        kind: p.trigger_kind,
                        atom: self.atom(p.trigger_atom),
                    },
                    context: p
                        .context
                        .iter()
                        .map(|l| Literal {
                            atom: self.atom(l.atom),
                            negated: l.negated,
                        })
                        .collect(),
                    body: p
                        .body
                        .iter()
                        .map(|f| BodyFormula {
                            opcode: f.opcode,
                            atom: self.atom(f.atom),
                        })
                        .collect(),
                    source_index,
                })
                .collect(),
        }
    }

    /// Human-readable disassembly. The output is valid agent source.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "% plan table v{VERSION}: {} atoms, {} plans, {} initial beliefs, {} initial goals\n",
            self.atoms.len(),
            self.plans.len(),
            self.initial_beliefs.len(),
            self.initial_goals.len()
        );
        let program = self.to_program();
        for b in &program.initial_beliefs {
            let _ = writeln!(out, "{b}.");
        }
        for g in &program.initial_goals {
            let _ = writeln!(out, "!{g}.");
        }
        for (i, plan) in program.plans.iter().enumerate() {
            let _ = writeln!(out, "{plan} % #{i}");
        }
        out
    }
}
