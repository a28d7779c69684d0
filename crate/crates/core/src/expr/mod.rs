//! Scalar-field expressions over `t, x1..x4, p1..p4`.
//!
//! Grammar (`^` is right-associative; a leading minus negates the whole
//! product that follows it, so `-2*x` is `-(2*x)` and `-x^2` is `-(x^2)`):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := '-' term | product
//! product  := factor (('*' | '/') operand)*
//! operand  := '-' operand | factor
//! factor   := primary ('^' exponent)?
//! exponent := '-' exponent | factor
//! primary  := NUMBER | VAR | FUNC '(' expr ')' | '(' expr ')'
//! ```
//!
//! `VAR` is one of `t x1 x2 x3 x4 p1 p2 p3 p4`, `FUNC` one of
//! `exp log sqrt sin cos`, and `NUMBER` a decimal with optional exponent.

mod diff;
mod eval;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::point::Var;

pub use eval::Binding;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Exp, Func::Log, Func::Sqrt, Func::Sin, Func::Cos];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(f64),
    Var(Var),
    Neg(Expression),
    Func(Func, Expression),
    Binary(BinOp, Expression, Expression),
}

/// An immutable expression tree. Subtrees are shared, so cloning is cheap.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression(Arc<Node>);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: expected {}", expected.join(" or "))]
    Syntax { offset: usize, expected: Vec<String> },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("variable {0} is not bound")]
    Unbound(Var),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
}

impl Expression {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn parse(text: &str) -> Result<Expression, ExprError> {
        parse::parse(text)
    }

    pub fn num(v: f64) -> Expression {
        Expression(Arc::new(Node::Num(v)))
    }

    pub fn var(v: Var) -> Expression {
        Expression(Arc::new(Node::Var(v)))
    }

    pub fn neg(e: Expression) -> Expression {
        Expression(Arc::new(Node::Neg(e)))
    }

    pub fn func(f: Func, e: Expression) -> Expression {
        Expression(Arc::new(Node::Func(f, e)))
    }

    pub fn binary(op: BinOp, a: Expression, b: Expression) -> Expression {
        Expression(Arc::new(Node::Binary(op, a, b)))
    }

    pub fn add(a: Expression, b: Expression) -> Expression {
        Self::binary(BinOp::Add, a, b)
    }

    pub fn sub(a: Expression, b: Expression) -> Expression {
        Self::binary(BinOp::Sub, a, b)
    }

    pub fn mul(a: Expression, b: Expression) -> Expression {
        Self::binary(BinOp::Mul, a, b)
    }

    pub fn div(a: Expression, b: Expression) -> Expression {
        Self::binary(BinOp::Div, a, b)
    }

    pub fn pow(a: Expression, b: Expression) -> Expression {
        Self::binary(BinOp::Pow, a, b)
    }

    /// Variables referenced anywhere in the tree, in canonical order.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self.node() {
            Node::Num(_) => {}
            Node::Var(v) => {
                out.insert(*v);
            }
            Node::Neg(a) | Node::Func(_, a) => a.collect_vars(out),
            Node::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match self.node() {
            Node::Num(_) => true,
            Node::Var(_) => false,
            Node::Neg(a) | Node::Func(_, a) => a.is_constant(),
            Node::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn as_num(&self) -> Option<f64> {
        match self.node() {
            Node::Num(v) => Some(*v),
            _ => None,
        }
    }

    /// Number of nodes, counting shared subtrees once per reference.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Num(_) | Node::Var(_) => 1,
            Node::Neg(a) | Node::Func(_, a) => 1 + a.size(),
            Node::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl FromStr for Expression {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expression::parse(s)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, self)
    }
}
