use thiserror::Error;

use super::lexer::{tokenize, Token, TokenKind};
use super::{AgentProgram, Atom, BodyFormula, Literal, Opcode, Plan, TriggerEvent, TriggerKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {expected}, found {found}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub(crate) fn new(
        line: usize,
        column: usize,
        expected: impl Into<String>,
        found: impl Into<String>,
    ) -> Self {
        ParseError {
            line,
            column,
            expected: expected.into(),
            found: found.into(),
        }
    }
}

/// Parses agent source text into an [`AgentProgram`], keeping textual order.
pub fn parse_program(source: &str) -> Result<AgentProgram, ParseError> {
    let tokens = tokenize(source)?;
    Parser { tokens, pos: 0 }.program()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &str) -> ParseError {
        let tok = self.peek();
        ParseError::new(tok.line, tok.column, expected, tok.kind.to_string())
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), ParseError> {
        if self.peek().kind == kind {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&kind.to_string()))
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match &self.peek().kind {
            TokenKind::Ident(name) => {
                let atom = Atom(name.clone());
                self.advance();
                Ok(atom)
            }
            _ => Err(self.error("an atom")),
        }
    }

    fn program(mut self) -> Result<AgentProgram, ParseError> {
        let mut program = AgentProgram::default();
        loop {
            match self.peek().kind {
                TokenKind::Eof => return Ok(program),
                TokenKind::Ident(_) => {
                    let atom = self.atom()?;
                    self.expect(TokenKind::Dot)?;
                    program.initial_beliefs.push(atom);
                }
                TokenKind::Bang => {
                    self.advance();
                    let atom = self.atom()?;
                    self.expect(TokenKind::Dot)?;
                    program.initial_goals.push(atom);
                }
                TokenKind::Plus | TokenKind::Minus => {
                    let source_index = program.plans.len();
                    program.plans.push(self.plan(source_index)?);
                }
                _ => return Err(self.error("a belief, an initial goal or a plan")),
            }
        }
    }

    fn plan(&mut self, source_index: usize) -> Result<Plan, ParseError> {
        let kind = match self.advance().kind {
            TokenKind::Plus if self.peek().kind == TokenKind::Bang => {
                self.advance();
                TriggerKind::AchieveAdd
            }
            TokenKind::Plus => TriggerKind::BeliefAdd,
            TokenKind::Minus => TriggerKind::BeliefDel,
            _ => unreachable!("plan() is only entered on `+` or `-`"),
        };
        let trigger = TriggerEvent {
            kind,
            atom: self.atom()?,
        };

        let mut context = Vec::new();
        if self.peek().kind == TokenKind::Colon {
            self.advance();
            context.push(self.literal()?);
            while self.peek().kind == TokenKind::Amp {
                self.advance();
                context.push(self.literal()?);
            }
        }

        self.expect(TokenKind::Arrow)?;
        let mut body = vec![self.formula()?];
        while self.peek().kind == TokenKind::Semi {
            self.advance();
            body.push(self.formula()?);
        }
        self.expect(TokenKind::Dot)?;

        Ok(Plan {
            trigger,
            context,
            body,
            source_index,
        })
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let negated = if self.peek().kind == TokenKind::Not {
            self.advance();
            true
        } else {
            false
        };
        match self.peek().kind {
            TokenKind::Ident(_) => Ok(Literal {
                atom: self.atom()?,
                negated,
            }),
            _ if negated => Err(self.error("an atom")),
            _ => Err(self.error("a context literal")),
        }
    }

    fn formula(&mut self) -> Result<BodyFormula, ParseError> {
        let opcode = match self.peek().kind {
            TokenKind::Ident(_) => Opcode::Action,
            TokenKind::Bang => Opcode::Achieve,
            TokenKind::BangBang => Opcode::AchieveNew,
            TokenKind::Plus => Opcode::AddBelief,
            TokenKind::Minus => Opcode::DelBelief,
            _ => return Err(self.error("a body formula")),
        };
        if opcode != Opcode::Action {
            self.advance();
        }
        Ok(BodyFormula {
            opcode,
            atom: self.atom()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Atom {
        Atom::new(s).unwrap()
    }

    #[test]
    fn empty_input() {
        assert_eq!(parse_program("").unwrap(), AgentProgram::default());
        assert_eq!(
            parse_program("  % only a comment\n").unwrap(),
            AgentProgram::default()
        );
    }

    #[test]
    fn minimal_plan() {
        let p = parse_program("+!g : not b <- a; !!g.").unwrap();
        assert_eq!(p.plans.len(), 1);
        let plan = &p.plans[0];
        assert_eq!(plan.trigger.kind, TriggerKind::AchieveAdd);
        assert_eq!(plan.trigger.atom, atom("g"));
        assert_eq!(
            plan.context,
            vec![Literal {
                atom: atom("b"),
                negated: true
            }]
        );
        assert_eq!(
            plan.body,
            vec![
                BodyFormula {
                    opcode: Opcode::Action,
                    atom: atom("a")
                },
                BodyFormula {
                    opcode: Opcode::AchieveNew,
                    atom: atom("g")
                },
            ]
        );
    }

    #[test]
    fn all_trigger_and_body_forms() {
        let p = parse_program("b0. !g0.\n+b <- +c; -d; !e.\n-b : x & not y <- act.").unwrap();
        assert_eq!(p.initial_beliefs, vec![atom("b0")]);
        assert_eq!(p.initial_goals, vec![atom("g0")]);
        assert_eq!(p.plans[0].trigger.kind, TriggerKind::BeliefAdd);
        assert_eq!(p.plans[1].trigger.kind, TriggerKind::BeliefDel);
        let ops: Vec<_> = p.plans[0].body.iter().map(|f| f.opcode).collect();
        assert_eq!(
            ops,
            vec![Opcode::AddBelief, Opcode::DelBelief, Opcode::Achieve]
        );
        assert_eq!(p.plans[1].context.len(), 2);
        assert_eq!(p.plans[1].source_index, 1);
    }

    #[test]
    fn malformed_context_points_at_arrow() {
        let err = parse_program("+!g : <- a.").unwrap_err();
        assert_eq!((err.line, err.column), (1, 7));
        assert_eq!(err.found, "`<-`");
    }

    #[test]
    fn empty_body_is_an_error() {
        let err = parse_program("+!g <- .").unwrap_err();
        assert_eq!((err.line, err.column), (1, 8));
        assert!(err.expected.contains("body formula"));
    }

    #[test]
    fn missing_terminator_reports_eof_position() {
        let err = parse_program("+!g <- a\n").unwrap_err();
        assert_eq!(err.found, "end of input");
        assert_eq!((err.line, err.column), (2, 1));
    }

    #[test]
    fn not_cannot_name_an_atom() {
        assert!(parse_program("not.").is_err());
        assert!(parse_program("+!g <- not.").is_err());
    }

    #[test]
    fn error_message_carries_location() {
        let err = parse_program("!g.\n+!g <- a b.").unwrap_err();
        assert_eq!(err.to_string(), "2:10: expected `.`, found identifier `b`");
    }
}
