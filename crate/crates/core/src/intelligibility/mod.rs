//! Constant fusion, counting and the intelligibility score.

mod canonical;
mod compare;
mod fusion;
mod score;

pub use canonical::{canonicalize, Atom, Canonical, CanonicalStatement, Factor, Head, Term};
pub use compare::{significantly_different, ComparisonVerdict};
pub use fusion::{
    fold_constants, fold_statement, fuse_constants, groups_of, independent_groups,
    FusedConstantGroup, GroupBasis,
};
pub use score::{
    decimal_string, galilean_intelligibility, score, AnalysisRecord, AnalysisResult, Counts,
    Intelligibility, RationalRecord, ScoreError, FLOOR_WARNING,
};
