use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::expr::{find_cycle, is_identifier, parse_expression, AuxError, Auxiliaries, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConceptKind {
    Variable,
    EmpiricalConstant,
    MathematicalConstant,
}

/// A named entry of the external ontology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub id: String,
    pub kind: ConceptKind,
    pub measurable: bool,
    /// Free text tying the concept to the world. Empty means ungrounded.
    pub grounding: String,
}

impl Concept {
    /// Variables and empirical constants with a non-empty grounding are
    /// grounded. Mathematical constants never are.
    pub fn is_grounded(&self) -> bool {
        self.kind != ConceptKind::MathematicalConstant && !self.grounding.trim().is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolBinding {
    pub symbol: String,
    pub concept: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxiliaryDefinition {
    pub symbol: String,
    pub definition: String,
}

/// Concepts, symbol bindings, auxiliary definitions and neutral operators
/// for one statement (or a family of statements sharing an ontology).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationSet {
    #[serde(default)]
    pub concepts: Vec<Concept>,
    #[serde(default)]
    pub bindings: Vec<SymbolBinding>,
    #[serde(default)]
    pub auxiliaries: Vec<AuxiliaryDefinition>,
    #[serde(default)]
    pub operators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownKey { path: String },
    DanglingConcept { symbol: String, concept: String },
    DuplicateConcept { id: String },
    DuplicateSymbol { symbol: String },
    InvalidIdentifier { symbol: String },
    MeasurableMathematicalConstant { id: String },
    AuxiliaryParse { symbol: String, error: ParseError },
    AuxiliaryCycle(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownKey { path } => write!(f, "unknown key `{path}`"),
            Violation::DanglingConcept { symbol, concept } => {
                write!(f, "dangling concept id `{concept}` (bound from `{symbol}`)")
            }
            Violation::DuplicateConcept { id } => write!(f, "duplicate concept id `{id}`"),
            Violation::DuplicateSymbol { symbol } => {
                write!(f, "duplicate symbol declaration `{symbol}`")
            }
            Violation::InvalidIdentifier { symbol } => write!(f, "invalid identifier `{symbol}`"),
            Violation::MeasurableMathematicalConstant { id } => {
                write!(f, "mathematical constant `{id}` is marked measurable")
            }
            Violation::AuxiliaryParse { symbol, error } => {
                write!(f, "auxiliary `{symbol}` does not parse: {error}")
            }
            Violation::AuxiliaryCycle(path) => write!(f, "auxiliary cycle {}", path.join("→")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotationError {
    #[error("annotation file is not valid: {0}")]
    Malformed(String),
    #[error("annotation file is not valid:\n{0}")]
    Invalid(ValidationReport),
}

impl AnnotationError {
    pub fn violations(&self) -> Vec<String> {
        match self {
            AnnotationError::Malformed(msg) => vec![msg.clone()],
            AnnotationError::Invalid(report) => {
                report.violations.iter().map(ToString::to_string).collect()
            }
        }
    }
}

const TOP_KEYS: &[&str] = &["concepts", "bindings", "auxiliaries", "operators"];
const CONCEPT_KEYS: &[&str] = &["id", "kind", "measurable", "grounding"];
const BINDING_KEYS: &[&str] = &["symbol", "concept"];
const AUX_KEYS: &[&str] = &["symbol", "definition"];

fn unknown_keys(doc: &Value) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut check = |value: &Value, allowed: &[&str], prefix: &str| {
        if let Value::Object(map) = value {
            for key in map.keys() {
                if !allowed.contains(&key.as_str()) {
                    out.push(Violation::UnknownKey {
                        path: format!("{prefix}{key}"),
                    });
                }
            }
        }
    };
    check(doc, TOP_KEYS, "");
    for (field, allowed) in [
        ("concepts", CONCEPT_KEYS),
        ("bindings", BINDING_KEYS),
        ("auxiliaries", AUX_KEYS),
    ] {
        if let Some(Value::Array(items)) = doc.get(field) {
            for (i, item) in items.iter().enumerate() {
                check(item, allowed, &format!("{field}[{i}]."));
            }
        }
    }
    out
}

impl AnnotationSet {
    /// Reads the annotation file format. Unknown keys are reported as
    /// violations; the remaining checks are left to [`validate`].
    pub fn from_json(text: &str) -> Result<Self, AnnotationError> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| AnnotationError::Malformed(e.to_string()))?;
        let unknown = unknown_keys(&doc);
        if !unknown.is_empty() {
            return Err(AnnotationError::Invalid(ValidationReport {
                violations: unknown,
            }));
        }
        serde_json::from_value(doc).map_err(|e| AnnotationError::Malformed(e.to_string()))
    }

    /// Parses and validates in one step.
    pub fn load(text: &str) -> Result<Self, AnnotationError> {
        let set = Self::from_json(text)?;
        let report = validate(&set);
        if report.is_ok() {
            Ok(set)
        } else {
            Err(AnnotationError::Invalid(report))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("annotation set serializes")
    }

    pub fn concept(&self, id: &str) -> Option<&Concept> {
        self.concepts.iter().find(|c| c.id == id)
    }

    /// Concept bound to a surface symbol.
    pub fn concept_for(&self, symbol: &str) -> Option<&Concept> {
        self.bindings
            .iter()
            .find(|b| b.symbol == symbol)
            .and_then(|b| self.concept(&b.concept))
    }

    pub fn is_operator(&self, name: &str) -> bool {
        self.operators.iter().any(|o| o == name)
    }

    pub fn auxiliaries(&self) -> Result<Auxiliaries, AuxError> {
        Auxiliaries::parse(
            self.auxiliaries
                .iter()
                .map(|a| (a.symbol.as_str(), a.definition.as_str())),
        )
    }
}

/// Collects every structural problem of an annotation set.
pub fn validate(set: &AnnotationSet) -> ValidationReport {
    let mut violations = Vec::new();

    let mut ids = BTreeSet::new();
    for concept in &set.concepts {
        if !ids.insert(concept.id.as_str()) {
            violations.push(Violation::DuplicateConcept {
                id: concept.id.clone(),
            });
        }
        if concept.kind == ConceptKind::MathematicalConstant && concept.measurable {
            violations.push(Violation::MeasurableMathematicalConstant {
                id: concept.id.clone(),
            });
        }
    }

    let declared = set
        .bindings
        .iter()
        .map(|b| &b.symbol)
        .chain(set.auxiliaries.iter().map(|a| &a.symbol))
        .chain(set.operators.iter());
    let mut seen = BTreeSet::new();
    let mut reported = BTreeSet::new();
    for symbol in declared {
        if !is_identifier(symbol) {
            violations.push(Violation::InvalidIdentifier {
                symbol: symbol.clone(),
            });
        }
        if !seen.insert(symbol.as_str()) && reported.insert(symbol.as_str()) {
            violations.push(Violation::DuplicateSymbol {
                symbol: symbol.clone(),
            });
        }
    }

    for binding in &set.bindings {
        if !ids.contains(binding.concept.as_str()) {
            violations.push(Violation::DanglingConcept {
                symbol: binding.symbol.clone(),
                concept: binding.concept.clone(),
            });
        }
    }

    let mut defs = BTreeMap::new();
    for aux in &set.auxiliaries {
        match parse_expression(&aux.definition) {
            Ok(expr) => {
                defs.insert(aux.symbol.clone(), expr);
            }
            Err(error) => violations.push(Violation::AuxiliaryParse {
                symbol: aux.symbol.clone(),
                error,
            }),
        }
    }
    if let Some(cycle) = find_cycle(&defs) {
        violations.push(Violation::AuxiliaryCycle(cycle));
    }

    ValidationReport { violations }
}
