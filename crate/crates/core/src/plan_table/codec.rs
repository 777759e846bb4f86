//! `.bdip` binary format. All integers little-endian.
//!
//! ```text
//! magic "BDIP" | version u8 = 1
//! atom_count u16 | plan_count u16 | initial_belief_count u16 | initial_goal_count u16
//! atoms:  (len u8, utf-8 bytes)*
//! plans:  (trigger_kind u8, trigger_atom u16,
//!          ctx_count u8, (negated u8, atom u16)*,
//!          body_count u8, (opcode u8, atom u16)*)*
//! initial beliefs: u16*
//! initial goals:   u16*
//! ```

use std::collections::HashSet;

use thiserror::Error;

use super::{AtomId, CompiledFormula, CompiledLiteral, CompiledPlan, PlanTable};
use crate::asl::{is_identifier, Opcode, TriggerKind};

pub const MAGIC: &[u8; 4] = b"BDIP";
pub const VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct DecodeError {
    pub offset: usize,
    pub kind: DecodeErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeErrorKind {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated input")]
    Truncated,
    #[error("atom id {id} out of bounds (table has {count} atoms)")]
    AtomOutOfBounds { id: u16, count: u16 },
    #[error("invalid trigger kind {0}")]
    InvalidTriggerKind(u8),
    #[error("invalid opcode {0}")]
    InvalidOpcode(u8),
    #[error("invalid negation flag {0}")]
    InvalidFlag(u8),
    #[error("atom is not valid UTF-8")]
    InvalidUtf8,
    #[error("invalid atom name {0:?}")]
    InvalidAtom(String),
    #[error("duplicate atom {0:?}")]
    DuplicateAtom(String),
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
}

/// Serializes a table. Panics if the table violates its capacity limits,
/// which [`super::compile`] and [`decode`] never produce.
pub fn encode(table: &PlanTable) -> Vec<u8> {
    let mut out = Vec::with_capacity(64);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    for count in [
        table.atoms.len(),
        table.plans.len(),
        table.initial_beliefs.len(),
        table.initial_goals.len(),
    ] {
        put_u16(&mut out, u16::try_from(count).expect("count exceeds u16"));
    }
    for atom in &table.atoms {
        out.push(u8::try_from(atom.len()).expect("atom longer than 255 bytes"));
        out.extend_from_slice(atom.as_bytes());
    }
    for plan in &table.plans {
        out.push(plan.trigger_kind as u8);
        put_u16(&mut out, plan.trigger_atom.0);
        out.push(u8::try_from(plan.context.len()).expect("context longer than 255"));
        for lit in &plan.context {
            out.push(lit.negated as u8);
            put_u16(&mut out, lit.atom.0);
        }
        out.push(u8::try_from(plan.body.len()).expect("body longer than 255"));
        for f in &plan.body {
            out.push(f.opcode as u8);
            put_u16(&mut out, f.atom.0);
        }
    }
    for id in table.initial_beliefs.iter().chain(&table.initial_goals) {
        put_u16(&mut out, id.0);
    }
    out
}

fn put_u16(out: &mut Vec<u8>, v: u16) {
    out.extend_from_slice(&v.to_le_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    atom_count: u16,
}

impl<'a> Reader<'a> {
    fn fail(&self, offset: usize, kind: DecodeErrorKind) -> DecodeError {
        DecodeError { offset, kind }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&end| end <= self.bytes.len())
            .ok_or(DecodeError {
                offset: self.pos,
                kind: DecodeErrorKind::Truncated,
            })?;
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn atom_id(&mut self) -> Result<AtomId, DecodeError> {
        let at = self.pos;
        let id = self.u16()?;
        if id >= self.atom_count {
            return Err(self.fail(
                at,
                DecodeErrorKind::AtomOutOfBounds {
                    id,
                    count: self.atom_count,
                },
            ));
        }
        Ok(AtomId(id))
    }
}

/// Parses a `.bdip` image. Never panics; every failure carries the byte
/// offset where decoding stopped.
pub fn decode(bytes: &[u8]) -> Result<PlanTable, DecodeError> {
    let mut r = Reader {
        bytes,
        pos: 0,
        atom_count: 0,
    };

    let head = &bytes[..bytes.len().min(MAGIC.len())];
    if !MAGIC.starts_with(head) {
        return Err(r.fail(0, DecodeErrorKind::BadMagic));
    }
    r.take(MAGIC.len())?;
    let at = r.pos;
    let version = r.u8()?;
    if version != VERSION {
        return Err(r.fail(at, DecodeErrorKind::UnsupportedVersion(version)));
    }

    let atom_count = r.u16()?;
    let plan_count = r.u16()?;
    let belief_count = r.u16()?;
    let goal_count = r.u16()?;

    let mut atoms = Vec::with_capacity(atom_count.min(1024) as usize);
    let mut seen = HashSet::new();
    for _ in 0..atom_count {
        let at = r.pos;
        let len = r.u8()? as usize;
        let raw = r.take(len)?;
        let name = std::str::from_utf8(raw)
            .map_err(|_| r.fail(at, DecodeErrorKind::InvalidUtf8))?
            .to_owned();
        if !is_identifier(&name) {
            return Err(r.fail(at, DecodeErrorKind::InvalidAtom(name)));
        }
        if !seen.insert(name.clone()) {
            return Err(r.fail(at, DecodeErrorKind::DuplicateAtom(name)));
        }
        atoms.push(name);
    }
    r.atom_count = atom_count;

    let mut plans = Vec::with_capacity(plan_count.min(1024) as usize);
    for _ in 0..plan_count {
        let at = r.pos;
        let code = r.u8()?;
        let trigger_kind = TriggerKind::from_code(code)
            .ok_or_else(|| r.fail(at, DecodeErrorKind::InvalidTriggerKind(code)))?;
        let trigger_atom = r.atom_id()?;

        let ctx_count = r.u8()?;
        let mut context = Vec::with_capacity(ctx_count as usize);
        for _ in 0..ctx_count {
            let at = r.pos;
            let negated = match r.u8()? {
                0 => false,
                1 => true,
                other => return Err(r.fail(at, DecodeErrorKind::InvalidFlag(other))),
            };
            context.push(CompiledLiteral {
                negated,
                atom: r.atom_id()?,
            });
        }

        let body_count = r.u8()?;
        let mut body = Vec::with_capacity(body_count as usize);
        for _ in 0..body_count {
            let at = r.pos;
            let code = r.u8()?;
            let opcode = Opcode::from_code(code)
                .ok_or_else(|| r.fail(at, DecodeErrorKind::InvalidOpcode(code)))?;
            body.push(CompiledFormula {
                opcode,
                atom: r.atom_id()?,
            });
        }

        plans.push(CompiledPlan {
            trigger_kind,
            trigger_atom,
            context,
            body,
        });
    }

    let initial_beliefs = (0..belief_count)
        .map(|_| r.atom_id())
        .collect::<Result<Vec<_>, _>>()?;
    let initial_goals = (0..goal_count)
        .map(|_| r.atom_id())
        .collect::<Result<Vec<_>, _>>()?;

    if r.pos != bytes.len() {
        return Err(r.fail(r.pos, DecodeErrorKind::TrailingBytes(bytes.len() - r.pos)));
    }

    Ok(PlanTable {
        atoms,
        plans,
        initial_beliefs,
        initial_goals,
    })
}
