//! Flattened associative-commutative form of a bound statement.
//!
//! Nested `+`/`-` chains become one n-ary [`Canonical::Sum`], nested `*`/`/`
//! chains one n-ary [`Canonical::Product`]. Unary minus is absorbed as a term
//! sign inside sums and as a `-1` factor elsewhere. Products are never
//! distributed over sums.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::expr::{BinaryOp, Expression};
use crate::ontology::{BoundStatement, ConceptKind, FunctionBinding};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Literal(BigRational),
    Variable {
        symbol: String,
        concept: String,
    },
    Empirical {
        symbol: String,
        concept: String,
    },
    Mathematical {
        symbol: String,
        concept: String,
    },
    /// Placeholder for an already fused constant cluster.
    Fused(BTreeSet<String>),
}

/// Head of a function application.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Head {
    Neutral(String),
    Concept(Atom),
}

impl Head {
    fn name(&self) -> String {
        match self {
            Head::Neutral(name) => name.clone(),
            Head::Concept(atom) => atom.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub negative: bool,
    pub node: Canonical,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub reciprocal: bool,
    pub node: Canonical,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Canonical {
    Leaf(Atom),
    Sum(Vec<Term>),
    Product(Vec<Factor>),
    Power(Box<Canonical>, Box<Canonical>),
    Apply { head: Head, args: Vec<Canonical> },
}

impl Atom {
    pub fn is_constant(&self) -> bool {
        !matches!(self, Atom::Variable { .. })
    }

    fn add_members(&self, out: &mut BTreeSet<String>) {
        match self {
            Atom::Empirical { concept, .. } => {
                out.insert(concept.clone());
            }
            Atom::Fused(members) => out.extend(members.iter().cloned()),
            _ => {}
        }
    }
}

impl Canonical {
    /// True when every leaf (and function head) is a literal, a
    /// mathematical constant or an empirical constant.
    pub fn is_constant(&self) -> bool {
        match self {
            Canonical::Leaf(atom) => atom.is_constant(),
            Canonical::Sum(terms) => terms.iter().all(|t| t.node.is_constant()),
            Canonical::Product(factors) => factors.iter().all(|f| f.node.is_constant()),
            Canonical::Power(base, exp) => base.is_constant() && exp.is_constant(),
            Canonical::Apply { head, args } => {
                let head_const = match head {
                    Head::Neutral(_) => true,
                    Head::Concept(atom) => atom.is_constant(),
                };
                head_const && args.iter().all(Canonical::is_constant)
            }
        }
    }

    /// Empirical-constant concept ids appearing anywhere below this node.
    pub fn members(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_members(&mut out);
        out
    }

    fn collect_members(&self, out: &mut BTreeSet<String>) {
        match self {
            Canonical::Leaf(atom) => atom.add_members(out),
            Canonical::Sum(terms) => terms.iter().for_each(|t| t.node.collect_members(out)),
            Canonical::Product(factors) => factors.iter().for_each(|f| f.node.collect_members(out)),
            Canonical::Power(base, exp) => {
                base.collect_members(out);
                exp.collect_members(out);
            }
            Canonical::Apply { head, args } => {
                if let Head::Concept(atom) = head {
                    atom.add_members(out);
                }
                args.iter().for_each(|a| a.collect_members(out));
            }
        }
    }

    pub(crate) fn from_terms(mut terms: Vec<Term>) -> Canonical {
        if terms.len() == 1 && !terms[0].negative {
            terms.pop().unwrap().node
        } else {
            Canonical::Sum(terms)
        }
    }

    pub(crate) fn from_factors(mut factors: Vec<Factor>) -> Canonical {
        if factors.len() == 1 && !factors[0].reciprocal {
            factors.pop().unwrap().node
        } else {
            Canonical::Product(factors)
        }
    }
}

/// Both sides of a statement in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalStatement {
    pub left: Canonical,
    pub right: Canonical,
}

impl CanonicalStatement {
    pub fn sides(&self) -> [&Canonical; 2] {
        [&self.left, &self.right]
    }
}

impl fmt::Display for CanonicalStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left, self.right)
    }
}

pub fn canonicalize(bound: &BoundStatement) -> CanonicalStatement {
    let builder = Builder { bound };
    CanonicalStatement {
        left: builder.node(&bound.statement.left),
        right: builder.node(&bound.statement.right),
    }
}

struct Builder<'a> {
    bound: &'a BoundStatement,
}

fn minus_one() -> Canonical {
    Canonical::Leaf(Atom::Literal(-BigRational::one()))
}

impl Builder<'_> {
    fn atom(&self, symbol: &str) -> Atom {
        let concept = self
            .bound
            .symbol_concept(symbol)
            .expect("bound statement resolves every symbol");
        let (symbol, id) = (symbol.to_string(), concept.id.clone());
        match concept.kind {
            ConceptKind::Variable => Atom::Variable {
                symbol,
                concept: id,
            },
            ConceptKind::EmpiricalConstant => Atom::Empirical {
                symbol,
                concept: id,
            },
            ConceptKind::MathematicalConstant => Atom::Mathematical {
                symbol,
                concept: id,
            },
        }
    }

    fn head(&self, function: &str) -> Head {
        match self.bound.function_binding(function) {
            Some(FunctionBinding::Concept(concept)) => {
                let (symbol, id) = (function.to_string(), concept.id.clone());
                Head::Concept(match concept.kind {
                    ConceptKind::Variable => Atom::Variable {
                        symbol,
                        concept: id,
                    },
                    ConceptKind::EmpiricalConstant => Atom::Empirical {
                        symbol,
                        concept: id,
                    },
                    ConceptKind::MathematicalConstant => Atom::Mathematical {
                        symbol,
                        concept: id,
                    },
                })
            }
            _ => Head::Neutral(function.to_string()),
        }
    }

    fn node(&self, expr: &Expression) -> Canonical {
        match expr {
            Expression::Number(value) => Canonical::Leaf(Atom::Literal(value.clone())),
            Expression::Symbol(name) => Canonical::Leaf(self.atom(name)),
            Expression::Binary {
                op: BinaryOp::Add | BinaryOp::Sub,
                ..
            } => {
                let mut terms = Vec::new();
                self.terms(expr, false, &mut terms);
                Canonical::from_terms(terms)
            }
            Expression::Binary {
                op: BinaryOp::Mul | BinaryOp::Div,
                ..
            } => {
                let mut factors = Vec::new();
                self.factors(expr, false, &mut factors);
                Canonical::from_factors(factors)
            }
            Expression::Negate(child) => match child.as_ref() {
                Expression::Binary {
                    op: BinaryOp::Add | BinaryOp::Sub,
                    ..
                }
                | Expression::Negate(_) => {
                    let mut terms = Vec::new();
                    self.terms(expr, false, &mut terms);
                    Canonical::from_terms(terms)
                }
                _ => {
                    let mut factors = Vec::new();
                    self.factors(expr, false, &mut factors);
                    Canonical::from_factors(factors)
                }
            },
            Expression::Binary {
                op: BinaryOp::Pow,
                left,
                right,
            } => Canonical::Power(Box::new(self.node(left)), Box::new(self.node(right))),
            Expression::Apply { function, args } => Canonical::Apply {
                head: self.head(function),
                args: args.iter().map(|a| self.node(a)).collect(),
            },
        }
    }

    fn terms(&self, expr: &Expression, negative: bool, out: &mut Vec<Term>) {
        match expr {
            Expression::Binary { op, left, right }
                if matches!(op, BinaryOp::Add | BinaryOp::Sub) =>
            {
                self.terms(left, negative, out);
                self.terms(right, negative ^ (*op == BinaryOp::Sub), out);
            }
            Expression::Negate(child) => self.terms(child, !negative, out),
            _ => out.push(Term {
                negative,
                node: self.node(expr),
            }),
        }
    }

    fn factors(&self, expr: &Expression, reciprocal: bool, out: &mut Vec<Factor>) {
        match expr {
            Expression::Binary { op, left, right }
                if matches!(op, BinaryOp::Mul | BinaryOp::Div) =>
            {
                self.factors(left, reciprocal, out);
                self.factors(right, reciprocal ^ (*op == BinaryOp::Div), out);
            }
            Expression::Negate(child) => {
                out.push(Factor {
                    reciprocal: false,
                    node: minus_one(),
                });
                self.factors(child, reciprocal, out);
            }
            _ => out.push(Factor {
                reciprocal,
                node: self.node(expr),
            }),
        }
    }
}

fn write_members(f: &mut fmt::Formatter<'_>, members: &BTreeSet<String>) -> fmt::Result {
    f.write_str("{")?;
    for (i, m) in members.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(m)?;
    }
    f.write_str("}")
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Literal(v) => write!(f, "{}", crate::expr::Expression::Number(v.clone())),
            Atom::Variable { symbol, .. }
            | Atom::Empirical { symbol, .. }
            | Atom::Mathematical { symbol, .. } => f.write_str(symbol),
            Atom::Fused(members) => {
                f.write_str("const")?;
                write_members(f, members)
            }
        }
    }
}

impl Canonical {
    fn is_compound(&self) -> bool {
        matches!(
            self,
            Canonical::Sum(_) | Canonical::Product(_) | Canonical::Power(..)
        )
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, node: &Canonical) -> fmt::Result {
    if node.is_compound() {
        write!(f, "({node})")
    } else {
        write!(f, "{node}")
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Canonical::Leaf(atom) => write!(f, "{atom}"),
            Canonical::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    match (i, t.negative) {
                        (0, false) => {}
                        (0, true) => f.write_str("-")?,
                        (_, false) => f.write_str(" + ")?,
                        (_, true) => f.write_str(" - ")?,
                    }
                    if matches!(t.node, Canonical::Sum(_)) {
                        write!(f, "({})", t.node)?;
                    } else {
                        write!(f, "{}", t.node)?;
                    }
                }
                Ok(())
            }
            Canonical::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    match (i, factor.reciprocal) {
                        (0, false) => {}
                        (0, true) => f.write_str("1/")?,
                        (_, false) => f.write_str("*")?,
                        (_, true) => f.write_str("/")?,
                    }
                    write_operand(f, &factor.node)?;
                }
                Ok(())
            }
            Canonical::Power(base, exp) => {
                write_operand(f, base)?;
                f.write_str("^")?;
                write_operand(f, exp)
            }
            Canonical::Apply { head, args } => {
                write!(f, "{}(", head.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
