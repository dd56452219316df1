//! Pratt parser. Binding powers, loosest first:
//!
//! | operator | left | right |
//! |----------|------|-------|
//! | `+ -`    | 1    | 2     |
//! | `* /`    | 3    | 4     |
//! | unary `-`| n/a  | 5     |
//! | `^`      | 7    | 6     |
//!
//! so `-x^2` is `-(x^2)` and `2^3^2` is `2^(3^2)`.

use alloc::boxed::Box;
use alloc::string::String;

use super::lexer::{Token, TokenKind};
use super::{BinOp, ExprError, Func, Node, VarTable};

const MAX_DEPTH: usize = 200;

const OPERAND: &[&str] = &["number", "variable", "function call", "'('", "'-'"];
const AFTER_OPERAND: &[&str] = &["operator", "')'", "end of input"];
const AFTER_OPERAND_TOP: &[&str] = &["operator", "end of input"];

pub(super) struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    depth: usize,
    vars: &'a VarTable,
    end_column: usize,
}

impl<'a> Parser<'a> {
    pub(super) fn new(tokens: &'a [Token], vars: &'a VarTable, end_column: usize) -> Self {
        Parser { tokens, pos: 0, depth: 0, vars, end_column }
    }

    pub(super) fn parse_all(mut self) -> Result<Node, ExprError> {
        let node = self.expr(0)?;
        match self.peek() {
            None => Ok(node),
            Some(t) => Err(self.unexpected(t, AFTER_OPERAND_TOP)),
        }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn unexpected(&self, t: &Token, expected: &[&'static str]) -> ExprError {
        ExprError::Syntax { column: t.column, found: t.kind.describe(), expected: expected.to_vec() }
    }

    fn end_of_input(&self, expected: &[&'static str]) -> ExprError {
        ExprError::Syntax { column: self.end_column, found: String::from("end of input"), expected: expected.to_vec() }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Node, ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let column = self.peek().map_or(self.end_column, |t| t.column);
            return Err(ExprError::TooDeep { column });
        }
        let mut lhs = self.prefix()?;
        while let Some(tok) = self.peek() {
            let (op, l_bp, r_bp) = match tok.kind {
                TokenKind::Plus => (BinOp::Add, 1, 2),
                TokenKind::Minus => (BinOp::Sub, 1, 2),
                TokenKind::Star => (BinOp::Mul, 3, 4),
                TokenKind::Slash => (BinOp::Div, 3, 4),
                TokenKind::Caret => (BinOp::Pow, 7, 6),
                TokenKind::RParen => break,
                _ => return Err(self.unexpected(tok, AFTER_OPERAND)),
            };
            if l_bp < min_bp {
                break;
            }
            self.pos += 1;
            let rhs = self.expr(r_bp)?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Node, ExprError> {
        let tok = match self.peek() {
            Some(t) => t,
            None => return Err(self.end_of_input(OPERAND)),
        };
        self.pos += 1;
        match &tok.kind {
            TokenKind::Num(v) => Ok(Node::Num(*v)),
            TokenKind::Minus => Ok(Node::Neg(Box::new(self.expr(5)?))),
            TokenKind::LParen => {
                let inner = self.expr(0)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Ident(name) => {
                if let Some(func) = Func::from_name(name) {
                    match self.peek() {
                        Some(Token { kind: TokenKind::LParen, .. }) => self.pos += 1,
                        Some(t) => return Err(self.unexpected(t, &["'('"])),
                        None => return Err(self.end_of_input(&["'('"])),
                    }
                    let arg = self.expr(0)?;
                    self.expect_rparen()?;
                    Ok(Node::Call(func, Box::new(arg)))
                } else if let Some(idx) = self.vars.index_of(name) {
                    Ok(Node::Var(idx))
                } else {
                    Err(ExprError::UnknownIdentifier { column: tok.column, name: name.clone() })
                }
            }
            _ => Err(self.unexpected(tok, OPERAND)),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            Some(Token { kind: TokenKind::RParen, .. }) => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.unexpected(t, &["operator", "')'"])),
            None => Err(self.end_of_input(&["')'"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{tokenize, Expr};
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn table() -> VarTable {
        VarTable::darboux(2)
    }

    fn eval_at(src: &str, x: &[f64]) -> f64 {
        Expr::parse(src, &table()).unwrap().evaluate(x).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        let zero = [0.0; 5];
        assert_eq!(eval_at("1+2*3", &zero), 7.0);
        assert_eq!(eval_at("2^3^2", &zero), 512.0);
        assert_eq!(eval_at("8/4/2", &zero), 1.0);
        assert_eq!(eval_at("1-2-3", &zero), -4.0);
        assert_eq!(eval_at("2^-1", &zero), 0.5);
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        // q1 is slot 3 for n = 2
        assert_eq!(eval_at("-q1^2", &[0.0, 0.0, 0.0, 2.0, 0.0]), -4.0);
        assert_eq!(eval_at("(-q1)^2", &[0.0, 0.0, 0.0, 2.0, 0.0]), 4.0);
    }

    #[test]
    fn double_caret_fails_at_second_caret() {
        let err = Expr::parse("2^^3", &table()).unwrap_err();
        assert_eq!(err.column(), 2);
        assert!(matches!(err, ExprError::Syntax { .. }));
    }

    #[test]
    fn syntax_errors_carry_expectations() {
        match Expr::parse("(p1 + 1", &table()).unwrap_err() {
            ExprError::Syntax { column, found, expected } => {
                assert_eq!(column, 7);
                assert_eq!(found, "end of input");
                assert_eq!(expected, vec!["')'"]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(Expr::parse("p1 q1", &table()).unwrap_err().column(), 3);
        assert_eq!(Expr::parse("exp q1", &table()).unwrap_err().column(), 4);
        assert_eq!(Expr::parse("", &table()).unwrap_err().column(), 0);
        assert_eq!(Expr::parse("1 + )", &table()).unwrap_err().column(), 4);
    }

    #[test]
    fn unknown_variables_are_rejected() {
        let err = Expr::parse("p1 + p3", &table()).unwrap_err();
        assert_eq!(err, ExprError::UnknownIdentifier { column: 5, name: "p3".into() });
    }

    #[test]
    fn deep_nesting_is_a_positioned_error() {
        let src = "(".repeat(300) + "1" + &")".repeat(300);
        let err = Expr::parse(&src, &table()).unwrap_err();
        assert!(matches!(err, ExprError::TooDeep { .. }));
        let toks = tokenize(&src).unwrap();
        assert!(err.column() < toks.len());
        assert!(!err.to_string().is_empty());
    }
}
