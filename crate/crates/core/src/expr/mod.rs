//! A small expression language for scalar fields.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! expr    := expr ('+' | '-') expr | expr ('*' | '/') expr
//!          | '-' expr | expr '^' expr | atom
//! atom    := number | variable | func '(' expr ')' | '(' expr ')'
//! func    := exp | ln | sqrt
//! ```
//!
//! `+ - * /` are left-associative, `^` is right-associative, and unary minus
//! binds looser than `^`, so `-x^2` means `-(x^2)`. There is no implicit
//! multiplication. Variables must belong to the declared [`VarTable`]; for
//! the phase space these are `w, p1..pn, q1..qn`.
//!
//! Expressions evaluate over any [`Real`] scalar, so gradients and higher
//! derivatives come from dual numbers rather than differencing.

mod lexer;
mod parser;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::chart::coordinate_names;
use crate::field::{EvalError, Field};
use crate::real::Real;

pub use lexer::{tokenize, Token, TokenKind};

/// Lexical or syntactic failure, always tied to a 0-based character column.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("column {column}: unexpected character '{found}'")]
    Lex { column: usize, found: char },
    #[error("column {column}: malformed number `{text}`")]
    BadLiteral { column: usize, text: String },
    #[error("column {column}: found {found}, expected one of {expected:?}")]
    Syntax { column: usize, found: String, expected: Vec<&'static str> },
    #[error("column {column}: unknown identifier `{name}`")]
    UnknownIdentifier { column: usize, name: String },
    #[error("column {column}: expression nested too deeply")]
    TooDeep { column: usize },
}

impl ExprError {
    pub fn column(&self) -> usize {
        match self {
            ExprError::Lex { column, .. }
            | ExprError::BadLiteral { column, .. }
            | ExprError::Syntax { column, .. }
            | ExprError::UnknownIdentifier { column, .. }
            | ExprError::TooDeep { column } => *column,
        }
    }
}

/// Ordered variable names; a variable's position is its coordinate slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    /// Fails on duplicates, reserved function names, or malformed names.
    pub fn new<I, S>(names: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            let mut chars = name.chars();
            let valid_start = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
            if !valid_start || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(format!("invalid variable name `{name}`"));
            }
            if Func::from_name(name).is_some() {
                return Err(format!("`{name}` is a reserved function name"));
            }
            if names[..i].contains(name) {
                return Err(format!("duplicate variable `{name}`"));
            }
        }
        Ok(VarTable { names })
    }

    /// `w, p1..pn, q1..qn`.
    pub fn darboux(n: usize) -> Self {
        VarTable { names: coordinate_names(n) }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Syntax tree. Literals produced by the parser are never negative; a
/// leading minus is a [`Node::Neg`].
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

const NEG_PRECEDENCE: u8 = 3;
const ATOM_PRECEDENCE: u8 = 5;

impl Node {
    fn precedence(&self) -> u8 {
        match self {
            Node::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => NEG_PRECEDENCE,
            Node::Num(_) | Node::Var(_) | Node::Call(..) => ATOM_PRECEDENCE,
            Node::Neg(_) => NEG_PRECEDENCE,
            Node::Binary(op, ..) => op.precedence(),
        }
    }

    /// Value of a variable-free subtree.
    fn constant_value(&self) -> Option<f64> {
        match self {
            Node::Num(v) => Some(*v),
            Node::Var(_) => None,
            Node::Neg(a) => a.constant_value().map(|v| -v),
            Node::Binary(..) | Node::Call(..) => self.eval::<f64>(&[], &[]).ok(),
        }
    }

    /// Integer value of a variable-free exponent (`3`, `-2`, `3^2`).
    fn integer_exponent(&self) -> Option<i32> {
        let v = self.constant_value()?;
        if libm::trunc(v) == v && v.abs() <= 1024.0 {
            Some(v as i32)
        } else {
            None
        }
    }

    fn write(&self, names: &[String], min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        let wrap = prec < min_prec;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Node::Num(v) => {
                if *v < 0.0 || v.is_sign_negative() {
                    write!(f, "-{}", -v)?;
                } else {
                    write!(f, "{v}")?;
                }
            }
            Node::Var(i) => f.write_str(&names[*i])?,
            Node::Neg(inner) => {
                f.write_str("-")?;
                inner.write(names, NEG_PRECEDENCE, f)?;
            }
            Node::Binary(BinOp::Pow, l, r) => {
                l.write(names, ATOM_PRECEDENCE, f)?;
                f.write_str("^")?;
                r.write(names, NEG_PRECEDENCE, f)?;
            }
            Node::Binary(op, l, r) => {
                let p = op.precedence();
                l.write(names, p, f)?;
                write!(f, " {} ", op.symbol())?;
                r.write(names, p + 1, f)?;
            }
            Node::Call(func, arg) => {
                write!(f, "{}(", func.name())?;
                arg.write(names, 0, f)?;
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }

    fn eval<T: Real>(&self, x: &[T], names: &[String]) -> Result<T, EvalError> {
        let domain =
            |node: &Node, reason: &'static str| EvalError::Domain { expr: Printed { node, names }.to_string(), reason };
        Ok(match self {
            Node::Num(v) => T::constant(*v),
            Node::Var(i) => x[*i],
            Node::Neg(inner) => -inner.eval(x, names)?,
            Node::Binary(op, l, r) => {
                let a = l.eval(x, names)?;
                match op {
                    BinOp::Add => a + r.eval(x, names)?,
                    BinOp::Sub => a - r.eval(x, names)?,
                    BinOp::Mul => a * r.eval(x, names)?,
                    BinOp::Div => {
                        let b = r.eval(x, names)?;
                        if b.value() == 0.0 {
                            return Err(domain(self, "division by zero"));
                        }
                        a / b
                    }
                    BinOp::Pow => match r.integer_exponent() {
                        Some(k) => {
                            if k < 0 && a.value() == 0.0 {
                                return Err(domain(self, "negative power of zero"));
                            }
                            a.powi(k)
                        }
                        None => {
                            if a.value() <= 0.0 {
                                return Err(domain(self, "non-integer power of a non-positive base"));
                            }
                            (r.eval(x, names)? * a.ln()).exp()
                        }
                    },
                }
            }
            Node::Call(func, arg) => {
                let a = arg.eval(x, names)?;
                match func {
                    Func::Exp => a.exp(),
                    Func::Ln => {
                        if a.value() <= 0.0 {
                            return Err(domain(self, "logarithm of a non-positive value"));
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a.value() < 0.0 {
                            return Err(domain(self, "square root of a negative value"));
                        }
                        a.sqrt()
                    }
                }
            }
        })
    }
}

struct Printed<'a> {
    node: &'a Node,
    names: &'a [String],
}

impl fmt::Display for Printed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node.write(self.names, 0, f)
    }
}

/// A parsed expression bound to its variable table.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    node: Node,
    vars: VarTable,
}

impl Expr {
    pub fn parse(src: &str, vars: &VarTable) -> Result<Expr, ExprError> {
        let tokens = tokenize(src)?;
        let end = src.chars().count();
        let node = parser::Parser::new(&tokens, vars, end).parse_all()?;
        Ok(Expr { node, vars: vars.clone() })
    }

    /// Wraps a hand-built tree. Panics if a variable index is out of range.
    pub fn from_node(node: Node, vars: &VarTable) -> Expr {
        fn check(node: &Node, len: usize) {
            match node {
                Node::Var(i) => assert!(*i < len, "variable index {i} out of range"),
                Node::Neg(a) | Node::Call(_, a) => check(a, len),
                Node::Binary(_, a, b) => {
                    check(a, len);
                    check(b, len);
                }
                Node::Num(_) => {}
            }
        }
        check(&node, vars.len());
        Expr { node, vars: vars.clone() }
    }

    pub fn constant(v: f64, vars: &VarTable) -> Expr {
        Expr::from_node(Node::Num(v), vars)
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    /// Plain `f64` evaluation.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64, EvalError> {
        self.eval(x)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node.write(self.vars.names(), 0, f)
    }
}

impl Field for Expr {
    fn eval<T: Real>(&self, x: &[T]) -> Result<T, EvalError> {
        if x.len() != self.vars.len() {
            return Err(EvalError::Arity { expected: self.vars.len(), got: x.len() });
        }
        self.node.eval(x, self.vars.names())
    }
}
