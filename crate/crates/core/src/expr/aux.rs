//! Auxiliary definitions: derived symbols expanded before counting.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{parse_expression, Expression, ParseError, Statement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuxError {
    #[error("auxiliary `{symbol}` does not parse: {error}")]
    Parse { symbol: String, error: ParseError },
    #[error("auxiliary cycle {}", .0.join("→"))]
    Cycle(Vec<String>),
}

/// Parsed, acyclic auxiliary definitions keyed by symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Auxiliaries {
    defs: BTreeMap<String, Expression>,
}

impl Auxiliaries {
    pub fn new(defs: BTreeMap<String, Expression>) -> Result<Self, AuxError> {
        if let Some(cycle) = find_cycle(&defs) {
            return Err(AuxError::Cycle(cycle));
        }
        Ok(Auxiliaries { defs })
    }

    /// Parses `(symbol, definition text)` pairs.
    pub fn parse<'a, I>(defs: I) -> Result<Self, AuxError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut parsed = BTreeMap::new();
        for (symbol, text) in defs {
            let expr = parse_expression(text).map_err(|error| AuxError::Parse {
                symbol: symbol.to_string(),
                error,
            })?;
            parsed.insert(symbol.to_string(), expr);
        }
        Auxiliaries::new(parsed)
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.defs.contains_key(symbol)
    }

    pub fn definition(&self, symbol: &str) -> Option<&Expression> {
        self.defs.get(symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    pub fn inline_expression(&self, expr: &Expression) -> Expression {
        expr.map_symbols(&mut |name| match self.defs.get(name) {
            // acyclic, so recursion terminates
            Some(def) => self.inline_expression(def),
            None => Expression::Symbol(name.to_string()),
        })
    }

    pub fn inline(&self, stmt: &Statement) -> Statement {
        if self.defs.is_empty() {
            return stmt.clone();
        }
        Statement::new(
            self.inline_expression(&stmt.left),
            self.inline_expression(&stmt.right),
        )
    }
}

/// Expands every auxiliary symbol in `stmt`, given definitions as source text.
pub fn inline_auxiliaries(
    stmt: &Statement,
    defs: &BTreeMap<String, String>,
) -> Result<Statement, AuxError> {
    let aux = Auxiliaries::parse(defs.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
    Ok(aux.inline(stmt))
}

/// First cycle among the definitions, as a closed path `a, b, ..., a`.
pub fn find_cycle(defs: &BTreeMap<String, Expression>) -> Option<Vec<String>> {
    let edges: BTreeMap<&str, Vec<String>> = defs
        .iter()
        .map(|(name, def)| {
            let deps: BTreeSet<String> = def.free_symbols().symbols;
            let deps = deps.into_iter().filter(|d| defs.contains_key(d)).collect();
            (name.as_str(), deps)
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        OnStack,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = edges.keys().map(|k| (*k, Mark::Fresh)).collect();

    fn dfs<'a>(
        node: &'a str,
        edges: &'a BTreeMap<&'a str, Vec<String>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        stack: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        marks.insert(node, Mark::OnStack);
        stack.push(node);
        for next in &edges[node] {
            let next = next.as_str();
            match marks[next] {
                Mark::OnStack => {
                    let start = stack.iter().position(|n| *n == next).unwrap();
                    let mut cycle: Vec<String> =
                        stack[start..].iter().map(|s| s.to_string()).collect();
                    cycle.push(next.to_string());
                    return Some(cycle);
                }
                Mark::Fresh => {
                    if let Some(cycle) = dfs(next, edges, marks, stack) {
                        return Some(cycle);
                    }
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        marks.insert(node, Mark::Done);
        None
    }

    let roots: Vec<&str> = edges.keys().copied().collect();
    for root in roots {
        if marks[root] == Mark::Fresh {
            let mut stack = Vec::new();
            if let Some(cycle) = dfs(root, &edges, &mut marks, &mut stack) {
                return Some(cycle);
            }
        }
    }
    None
}
