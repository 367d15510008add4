use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::canonical::{canonicalize, CanonicalStatement};
use super::fusion::{groups_of, independent_groups, FusedConstantGroup};
use crate::expr::Statement;
use crate::ontology::{
    bind_symbols, classify_statement, validate, AnnotationError, AnnotationSet, ConceptKind,
    StatementRegion, UnboundSymbol,
};

pub const FLOOR_WARNING: &str = "below the N_O ≥ 2 floor for empirical statements";

/// `1 - N_E / N_O`, or negative infinity when there are no variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Intelligibility {
    Finite(Ratio<i64>),
    NegativeInfinity,
}

impl Intelligibility {
    pub fn finite(self) -> Option<Ratio<i64>> {
        match self {
            Intelligibility::Finite(r) => Some(r),
            Intelligibility::NegativeInfinity => None,
        }
    }
}

impl PartialOrd for Intelligibility {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Intelligibility {
    fn cmp(&self, other: &Self) -> Ordering {
        use Intelligibility::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (NegativeInfinity, NegativeInfinity) => Ordering::Equal,
            (NegativeInfinity, _) => Ordering::Less,
            (_, NegativeInfinity) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Intelligibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Intelligibility::Finite(r) => write!(f, "{r}"),
            Intelligibility::NegativeInfinity => f.write_str("-inf"),
        }
    }
}

fn as_i64(count: u64) -> i64 {
    i64::try_from(count).expect("count exceeds i64 range")
}

/// Galilean intelligibility from the two counts.
pub fn galilean_intelligibility(n_e: u64, n_o: u64) -> Intelligibility {
    if n_o == 0 {
        return Intelligibility::NegativeInfinity;
    }
    Intelligibility::Finite(Ratio::one() - Ratio::new(as_i64(n_e), as_i64(n_o)))
}

/// Fixed six-place decimal rendering of an exact rational, rounded half
/// away from zero.
pub fn decimal_string(value: Ratio<i64>) -> String {
    const PLACES: u32 = 6;
    let scale = 10i128.pow(PLACES);
    let num = *value.numer() as i128;
    let den = *value.denom() as i128;
    let scaled = (num.abs() * scale * 2 + den) / (den * 2);
    let sign = if value.is_negative() && scaled != 0 {
        "-"
    } else {
        ""
    };
    format!(
        "{sign}{}.{:0width$}",
        scaled / scale,
        scaled % scale,
        width = PLACES as usize
    )
}

/// The pair of counts a transparency comparison works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Counts {
    pub n_e: u64,
    pub n_o: u64,
}

impl Counts {
    pub fn new(n_e: u64, n_o: u64) -> Self {
        Counts { n_e, n_o }
    }

    pub fn intelligibility(self) -> Intelligibility {
        galilean_intelligibility(self.n_e, self.n_o)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error(transparent)]
    Annotation(#[from] AnnotationError),
    #[error(transparent)]
    Unbound(#[from] UnboundSymbol),
    #[error("statement has no grounded variables; intelligibility is undefined")]
    ZeroVariables,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisResult {
    pub name: String,
    pub n_o: u64,
    pub n_e: u64,
    pub intelligibility: Ratio<i64>,
    pub variables: BTreeSet<String>,
    /// Groups counted toward `N_E`.
    pub groups: Vec<FusedConstantGroup>,
    /// Groups fixed by the counted ones.
    pub dependent_groups: Vec<FusedConstantGroup>,
    pub region: StatementRegion,
    pub canonical: CanonicalStatement,
    pub warnings: Vec<String>,
}

impl AnalysisResult {
    pub fn counts(&self) -> Counts {
        Counts::new(self.n_e, self.n_o)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn record(&self) -> AnalysisRecord {
        AnalysisRecord {
            name: self.name.clone(),
            n_o: self.n_o,
            n_e: self.n_e,
            intelligibility: RationalRecord::from(self.intelligibility),
            decimal: decimal_string(self.intelligibility),
            region: self.region,
            groups: self
                .groups
                .iter()
                .map(|g| g.members.iter().cloned().collect())
                .collect(),
            warnings: self.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRecord {
    pub num: i64,
    pub den: i64,
}

impl From<Ratio<i64>> for RationalRecord {
    fn from(r: Ratio<i64>) -> Self {
        RationalRecord {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl From<RationalRecord> for Ratio<i64> {
    fn from(r: RationalRecord) -> Self {
        Ratio::new(r.num, r.den)
    }
}

/// Serialized form of an [`AnalysisResult`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub name: String,
    #[serde(rename = "N_O")]
    pub n_o: u64,
    #[serde(rename = "N_E")]
    pub n_e: u64,
    #[serde(rename = "I")]
    pub intelligibility: RationalRecord,
    #[serde(rename = "I_decimal")]
    pub decimal: String,
    pub region: StatementRegion,
    pub groups: Vec<Vec<String>>,
    pub warnings: Vec<String>,
}

/// Scores one statement against its annotations: inlines auxiliaries, binds
/// symbols, fuses constants and applies `I = 1 - N_E / N_O`.
pub fn score(stmt: &Statement, annotations: &AnnotationSet) -> Result<AnalysisResult, ScoreError> {
    let report = validate(annotations);
    if !report.is_ok() {
        return Err(AnnotationError::Invalid(report).into());
    }
    let aux = annotations
        .auxiliaries()
        .expect("validated auxiliaries parse and are acyclic");
    let inlined = aux.inline(stmt);
    let bound = bind_symbols(&inlined, annotations)?;
    let region = classify_statement(&bound);

    let variables: BTreeSet<String> = bound
        .concepts()
        .filter(|c| c.kind == ConceptKind::Variable && c.is_grounded())
        .map(|c| c.id.clone())
        .collect();
    if variables.is_empty() {
        return Err(ScoreError::ZeroVariables);
    }

    let canonical = canonicalize(&bound);
    let basis = independent_groups(groups_of(&canonical));

    let n_o = variables.len() as u64;
    let n_e = basis.independent.len() as u64;
    let mut warnings = Vec::new();
    if n_o < 2 {
        warnings.push(FLOOR_WARNING.to_string());
    }
    for group in &basis.dependent {
        warnings.push(format!(
            "constant group {group} is fixed by the counted groups and adds no parameter"
        ));
    }
    let intelligibility = galilean_intelligibility(n_e, n_o)
        .finite()
        .expect("n_o is at least one");

    Ok(AnalysisResult {
        name: String::new(),
        n_o,
        n_e,
        intelligibility,
        variables,
        groups: basis.independent,
        dependent_groups: basis.dependent,
        region,
        canonical,
        warnings,
    })
}
