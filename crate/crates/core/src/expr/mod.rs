//! Statement language: AST, parser, renderer and auxiliary inlining.
//!
//! A statement is two expressions joined by a single `=`. Expressions use
//! `+ - * / ^`, unary minus, parentheses, decimal literals and identifiers;
//! an identifier followed by `(` is a function application. Literal values
//! are kept as exact rationals.

mod aux;
mod lexer;
mod parser;
mod render;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;

pub use aux::{find_cycle, inline_auxiliaries, AuxError, Auxiliaries};
pub use lexer::is_identifier;
pub use parser::{parse_expression, parse_statement, ParseError};

/// Binary operators of the statement language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expression {
    Number(BigRational),
    Symbol(String),
    Negate(Box<Expression>),
    Binary {
        op: BinaryOp,
        left: Box<Expression>,
        right: Box<Expression>,
    },
    Apply {
        function: String,
        args: Vec<Expression>,
    },
}

impl Expression {
    pub fn symbol(name: impl Into<String>) -> Self {
        Expression::Symbol(name.into())
    }

    pub fn integer(value: i64) -> Self {
        Expression::Number(BigRational::from_integer(value.into()))
    }

    pub fn negate(child: Expression) -> Self {
        Expression::Negate(Box::new(child))
    }

    pub fn binary(op: BinaryOp, left: Expression, right: Expression) -> Self {
        Expression::Binary {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn apply(function: impl Into<String>, args: Vec<Expression>) -> Self {
        Expression::Apply {
            function: function.into(),
            args,
        }
    }

    /// Number of AST nodes.
    pub fn node_count(&self) -> usize {
        match self {
            Expression::Number(_) | Expression::Symbol(_) => 1,
            Expression::Negate(child) => 1 + child.node_count(),
            Expression::Binary { left, right, .. } => 1 + left.node_count() + right.node_count(),
            Expression::Apply { args, .. } => {
                1 + args.iter().map(Expression::node_count).sum::<usize>()
            }
        }
    }

    /// Calls `f` on every node in pre-order.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expression)) {
        f(self);
        match self {
            Expression::Number(_) | Expression::Symbol(_) => {}
            Expression::Negate(child) => child.visit(f),
            Expression::Binary { left, right, .. } => {
                left.visit(f);
                right.visit(f);
            }
            Expression::Apply { args, .. } => args.iter().for_each(|a| a.visit(f)),
        }
    }

    /// Rebuilds the tree bottom-up, replacing symbol leaves through `f`.
    pub fn map_symbols(&self, f: &mut impl FnMut(&str) -> Expression) -> Expression {
        match self {
            Expression::Number(_) => self.clone(),
            Expression::Symbol(name) => f(name),
            Expression::Negate(child) => Expression::negate(child.map_symbols(f)),
            Expression::Binary { op, left, right } => {
                Expression::binary(*op, left.map_symbols(f), right.map_symbols(f))
            }
            Expression::Apply { function, args } => Expression::Apply {
                function: function.clone(),
                args: args.iter().map(|a| a.map_symbols(f)).collect(),
            },
        }
    }

    pub fn free_symbols(&self) -> SymbolSets {
        let mut sets = SymbolSets::default();
        sets.collect(self);
        sets
    }
}

/// Symbol names and applied-function names occurring in an expression.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolSets {
    pub symbols: BTreeSet<String>,
    pub functions: BTreeSet<String>,
}

impl SymbolSets {
    fn collect(&mut self, expr: &Expression) {
        expr.visit(&mut |node| match node {
            Expression::Symbol(name) => {
                self.symbols.insert(name.clone());
            }
            Expression::Apply { function, .. } => {
                self.functions.insert(function.clone());
            }
            _ => {}
        });
    }
}

/// Relation at the root of a statement. Only equality is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equals,
}

/// `left = right`, plus the text it was parsed from.
///
/// Equality is structural: the source text does not participate.
#[derive(Debug, Clone)]
pub struct Statement {
    pub left: Expression,
    pub relation: Relation,
    pub right: Expression,
    pub source: String,
}

impl Statement {
    pub fn new(left: Expression, right: Expression) -> Self {
        let mut stmt = Statement {
            left,
            relation: Relation::Equals,
            right,
            source: String::new(),
        };
        stmt.source = stmt.to_string();
        stmt
    }

    pub fn sides(&self) -> [&Expression; 2] {
        [&self.left, &self.right]
    }

    pub fn map_symbols(&self, f: &mut impl FnMut(&str) -> Expression) -> Statement {
        Statement::new(self.left.map_symbols(f), self.right.map_symbols(f))
    }
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.left == other.left && self.relation == other.relation && self.right == other.right
    }
}

impl Eq for Statement {}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left, self.right)
    }
}

/// Distinct symbol names in `stmt`, with applied-function names kept apart.
pub fn free_symbols(stmt: &Statement) -> SymbolSets {
    let mut sets = SymbolSets::default();
    sets.collect(&stmt.left);
    sets.collect(&stmt.right);
    sets
}
