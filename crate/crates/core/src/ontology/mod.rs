//! The externally declared ontology: concepts, symbol bindings,
//! measurability and auxiliary definitions, plus the statement taxonomy
//! that depends on them.

mod annotations;
mod binding;

pub use annotations::{
    validate, AnnotationError, AnnotationSet, AuxiliaryDefinition, Concept, ConceptKind,
    SymbolBinding, ValidationReport, Violation,
};
pub use binding::{
    bind_symbols, classify_statement, BoundStatement, FunctionBinding, LeafRole, StatementRegion,
    UnboundSymbol,
};
