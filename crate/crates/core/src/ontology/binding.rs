use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AnnotationSet, Concept, ConceptKind};
use crate::expr::{Expression, Statement};

/// Tag carried by every leaf of a bound statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeafRole {
    Variable,
    EmpiricalConstant,
    MathematicalConstant,
    Literal,
    NeutralOperator,
}

impl From<ConceptKind> for LeafRole {
    fn from(kind: ConceptKind) -> Self {
        match kind {
            ConceptKind::Variable => LeafRole::Variable,
            ConceptKind::EmpiricalConstant => LeafRole::EmpiricalConstant,
            ConceptKind::MathematicalConstant => LeafRole::MathematicalConstant,
        }
    }
}

/// How an applied function name resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionBinding {
    Neutral,
    Concept(Concept),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unbound symbol{}: {}", if .0.len() == 1 { "" } else { "s" }, .0.join(", "))]
pub struct UnboundSymbol(pub Vec<String>);

/// A statement whose symbols and function names all resolve against an
/// annotation set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundStatement {
    pub statement: Statement,
    symbols: BTreeMap<String, Concept>,
    functions: BTreeMap<String, FunctionBinding>,
}

impl BoundStatement {
    pub fn symbol_concept(&self, name: &str) -> Option<&Concept> {
        self.symbols.get(name)
    }

    pub fn function_binding(&self, name: &str) -> Option<&FunctionBinding> {
        self.functions.get(name)
    }

    pub fn symbol_role(&self, name: &str) -> Option<LeafRole> {
        self.symbols.get(name).map(|c| c.kind.into())
    }

    /// Roles of every leaf occurrence (and function head) in pre-order,
    /// left side first.
    pub fn leaf_roles(&self) -> Vec<(String, LeafRole)> {
        let mut out = Vec::new();
        for side in self.statement.sides() {
            side.visit(&mut |node| match node {
                Expression::Number(n) => out.push((n.to_string(), LeafRole::Literal)),
                Expression::Symbol(name) => {
                    out.push((name.clone(), self.symbols[name].kind.into()))
                }
                Expression::Apply { function, .. } => {
                    let role = match &self.functions[function] {
                        FunctionBinding::Neutral => LeafRole::NeutralOperator,
                        FunctionBinding::Concept(c) => c.kind.into(),
                    };
                    out.push((function.clone(), role));
                }
                _ => {}
            });
        }
        out
    }

    /// Concepts of every symbol and concept-bound function head.
    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.symbols
            .values()
            .chain(self.functions.values().filter_map(|f| match f {
                FunctionBinding::Concept(c) => Some(c),
                FunctionBinding::Neutral => None,
            }))
    }

    pub fn grounded_concepts(&self) -> BTreeSet<&str> {
        self.concepts()
            .filter(|c| c.is_grounded())
            .map(|c| c.id.as_str())
            .collect()
    }

    pub fn measurable_concepts(&self) -> BTreeSet<&str> {
        self.concepts()
            .filter(|c| c.is_grounded() && c.measurable)
            .map(|c| c.id.as_str())
            .collect()
    }

    fn side_is_numeric(&self, side: &Expression) -> bool {
        let mut numeric = true;
        side.visit(&mut |node| match node {
            Expression::Symbol(name) => {
                if self.symbols[name].kind != ConceptKind::MathematicalConstant {
                    numeric = false;
                }
            }
            Expression::Apply { function, .. } => {
                if let FunctionBinding::Concept(c) = &self.functions[function] {
                    if c.kind != ConceptKind::MathematicalConstant {
                        numeric = false;
                    }
                }
            }
            _ => {}
        });
        numeric
    }

    fn single_measurable_symbol(&self, side: &Expression) -> bool {
        match side {
            Expression::Symbol(name) => {
                let c = &self.symbols[name];
                c.is_grounded() && c.measurable
            }
            _ => false,
        }
    }
}

/// Resolves every symbol and function name of an auxiliary-free statement.
pub fn bind_symbols(
    stmt: &Statement,
    annotations: &AnnotationSet,
) -> Result<BoundStatement, UnboundSymbol> {
    let mut symbols = BTreeMap::new();
    let mut functions = BTreeMap::new();
    let mut unbound = BTreeSet::new();
    for side in stmt.sides() {
        side.visit(&mut |node| match node {
            Expression::Symbol(name) => match annotations.concept_for(name) {
                Some(c) => {
                    symbols.insert(name.clone(), c.clone());
                }
                None => {
                    unbound.insert(name.clone());
                }
            },
            Expression::Apply { function, .. } => {
                if annotations.is_operator(function) {
                    functions.insert(function.clone(), FunctionBinding::Neutral);
                } else if let Some(c) = annotations.concept_for(function) {
                    functions.insert(function.clone(), FunctionBinding::Concept(c.clone()));
                } else {
                    unbound.insert(function.clone());
                }
            }
            _ => {}
        });
    }
    if !unbound.is_empty() {
        return Err(UnboundSymbol(unbound.into_iter().collect()));
    }
    Ok(BoundStatement {
        statement: stmt.clone(),
        symbols,
        functions,
    })
}

/// Regions of the statement taxonomy that a mathematical statement can
/// fall into. Non-mathematical prose has no representation here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatementRegion {
    /// A single measured quantity equated to a number.
    QuantitativeFact,
    /// No grounded symbol at all.
    PureMathematical,
    /// Grounded, but relating fewer than two measurable concepts.
    OntologicalNonEmpirical,
    /// Relates two or more measurable grounded concepts.
    EmpiricalMathematical,
}

impl StatementRegion {
    pub fn name(self) -> &'static str {
        match self {
            StatementRegion::QuantitativeFact => "QuantitativeFact",
            StatementRegion::PureMathematical => "PureMathematical",
            StatementRegion::OntologicalNonEmpirical => "OntologicalNonEmpirical",
            StatementRegion::EmpiricalMathematical => "EmpiricalMathematical",
        }
    }

    /// Region number in the five-region taxonomy.
    pub fn number(self) -> u8 {
        match self {
            StatementRegion::QuantitativeFact => 2,
            StatementRegion::PureMathematical => 3,
            StatementRegion::OntologicalNonEmpirical => 4,
            StatementRegion::EmpiricalMathematical => 5,
        }
    }
}

impl fmt::Display for StatementRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_statement(bound: &BoundStatement) -> StatementRegion {
    if bound.grounded_concepts().is_empty() {
        return StatementRegion::PureMathematical;
    }
    let [left, right] = bound.statement.sides();
    let fact = (bound.single_measurable_symbol(left) && bound.side_is_numeric(right))
        || (bound.single_measurable_symbol(right) && bound.side_is_numeric(left));
    if fact {
        return StatementRegion::QuantitativeFact;
    }
    if bound.measurable_concepts().len() < 2 {
        StatementRegion::OntologicalNonEmpirical
    } else {
        StatementRegion::EmpiricalMathematical
    }
}
