//! Reference corpus of annotated statements and network specs, with the
//! expected counts for each entry.
//!
//! Layout: one directory per entry, holding `expected.json` and either
//! `statement.gal` + `annotations.json` or `network.json`.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_statement, ParseError, Statement};
use crate::intelligibility::{decimal_string, galilean_intelligibility, score, RationalRecord};
use crate::netintel::{nn_score, NetError, NetworkSpec};
use crate::ontology::{AnnotationError, AnnotationSet, StatementRegion};

pub const STATEMENT_FILE: &str = "statement.gal";
pub const ANNOTATIONS_FILE: &str = "annotations.json";
pub const NETWORK_FILE: &str = "network.json";
pub const EXPECTED_FILE: &str = "expected.json";

pub const REPORT_HEADER: [&str; 10] = [
    "name",
    "N_O",
    "N_E",
    "I_num",
    "I_den",
    "I_decimal",
    "expected_I_num",
    "expected_I_den",
    "match",
    "warnings",
];
pub const FIGURE_HEADER: [&str; 5] = ["series", "N_O", "N_h", "I_decimal", "label"];

/// Name of the network entry highlighted in the figure data.
pub const STAR_NETWORK: &str = "AlphaFold 2";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(rename = "N_O")]
    pub n_o: u64,
    #[serde(rename = "N_E")]
    pub n_e: u64,
    #[serde(rename = "I")]
    pub intelligibility: RationalRecord,
    pub paper_row: String,
    /// Set when the published figure for this row disagrees with its own
    /// counts; the expected values here are the recomputed ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
}

impl Expected {
    pub fn intelligibility(&self) -> Ratio<i64> {
        self.intelligibility.into()
    }
}

#[derive(Debug, Clone)]
pub enum EntryKind {
    Statement {
        statement: Statement,
        annotations: AnnotationSet,
    },
    Network(NetworkSpec),
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub dir: PathBuf,
    pub kind: EntryKind,
    pub expected: Expected,
}

#[derive(Debug, Error)]
pub enum EntryError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Annotation {
        path: PathBuf,
        source: AnnotationError,
    },
    #[error("{path}: {source}")]
    Network { path: PathBuf, source: NetError },
    #[error("{path}: {message}")]
    Expected { path: PathBuf, message: String },
    #[error("{0}: expected either {STATEMENT_FILE} + {ANNOTATIONS_FILE} or {NETWORK_FILE}")]
    Layout(PathBuf),
}

#[derive(Debug)]
pub struct EntryFailure {
    pub name: String,
    pub error: EntryError,
}

#[derive(Debug, Default)]
pub struct CorpusLoad {
    /// Sorted by name.
    pub entries: Vec<CorpusEntry>,
    pub failures: Vec<EntryFailure>,
}

fn read(path: &Path) -> Result<String, EntryError> {
    fs::read_to_string(path).map_err(|source| EntryError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_expected(path: &Path) -> Result<Expected, EntryError> {
    let bad = |message: String| EntryError::Expected {
        path: path.to_path_buf(),
        message,
    };
    let expected: Expected = serde_json::from_str(&read(path)?).map_err(|e| bad(e.to_string()))?;
    if expected.intelligibility.den == 0 {
        return Err(bad("zero denominator".into()));
    }
    let consistent = galilean_intelligibility(expected.n_e, expected.n_o).finite()
        == Some(expected.intelligibility());
    if !consistent && expected.discrepancy.is_none() {
        return Err(bad(format!(
            "I = {} does not equal 1 - {}/{} and no discrepancy is noted",
            expected.intelligibility(),
            expected.n_e,
            expected.n_o
        )));
    }
    Ok(expected)
}

/// Loads one entry directory.
pub fn load_entry(dir: &Path) -> Result<CorpusEntry, EntryError> {
    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let expected = load_expected(&dir.join(EXPECTED_FILE))?;
    let network_path = dir.join(NETWORK_FILE);
    let statement_path = dir.join(STATEMENT_FILE);
    let annotations_path = dir.join(ANNOTATIONS_FILE);

    let kind = if network_path.is_file() {
        let spec = NetworkSpec::from_json(&read(&network_path)?).map_err(|source| {
            EntryError::Network {
                path: network_path.clone(),
                source,
            }
        })?;
        EntryKind::Network(spec)
    } else if statement_path.is_file() && annotations_path.is_file() {
        let (statement, annotations) = load_statement_pair(&statement_path, &annotations_path)?;
        EntryKind::Statement {
            statement,
            annotations,
        }
    } else {
        return Err(EntryError::Layout(dir.to_path_buf()));
    };
    Ok(CorpusEntry {
        name,
        dir: dir.to_path_buf(),
        kind,
        expected,
    })
}

/// Reads and parses a statement file and validates its annotation file.
pub fn load_statement_pair(
    statement_path: &Path,
    annotations_path: &Path,
) -> Result<(Statement, AnnotationSet), EntryError> {
    let statement =
        parse_statement(&read(statement_path)?).map_err(|source| EntryError::Parse {
            path: statement_path.to_path_buf(),
            source,
        })?;
    let annotations =
        AnnotationSet::load(&read(annotations_path)?).map_err(|source| EntryError::Annotation {
            path: annotations_path.to_path_buf(),
            source,
        })?;
    Ok((statement, annotations))
}

/// Loads every subdirectory of `dir`. Entries that fail are collected in
/// [`CorpusLoad::failures`] rather than aborting the load.
pub fn load_corpus(dir: &Path) -> io::Result<CorpusLoad> {
    let mut dirs = Vec::new();
    for item in fs::read_dir(dir)? {
        let item = item?;
        if item.file_type()?.is_dir() {
            dirs.push(item.path());
        }
    }
    dirs.sort();

    let mut load = CorpusLoad::default();
    for path in dirs {
        match load_entry(&path) {
            Ok(entry) => load.entries.push(entry),
            Err(error) => load.failures.push(EntryFailure {
                name: path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                error,
            }),
        }
    }
    Ok(load)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchStatus {
    Match,
    Mismatch,
    /// Computed values agree with the recomputed expectation, which differs
    /// from the printed one.
    PaperDiscrepancy,
}

impl fmt::Display for MatchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchStatus::Match => "true",
            MatchStatus::Mismatch => "false",
            MatchStatus::PaperDiscrepancy => "paper-discrepancy",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Computed {
    pub n_o: u64,
    pub n_e: u64,
    pub intelligibility: Ratio<i64>,
    /// `None` for network entries.
    pub region: Option<StatementRegion>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub name: String,
    /// `Err` holds the failure message.
    pub computed: Result<Computed, String>,
    pub expected: Option<Expected>,
    pub status: MatchStatus,
    pub warnings: Vec<String>,
}

impl ReportRow {
    pub fn is_ok(&self) -> bool {
        self.status != MatchStatus::Mismatch
    }

    fn failure(name: &str, message: String, expected: Option<Expected>) -> Self {
        ReportRow {
            name: name.to_string(),
            computed: Err(message.clone()),
            expected,
            status: MatchStatus::Mismatch,
            warnings: vec![message],
        }
    }
}

pub fn compute_entry(entry: &CorpusEntry) -> Result<(Computed, Vec<String>), String> {
    match &entry.kind {
        EntryKind::Statement {
            statement,
            annotations,
        } => {
            let result = score(statement, annotations).map_err(|e| e.to_string())?;
            Ok((
                Computed {
                    n_o: result.n_o,
                    n_e: result.n_e,
                    intelligibility: result.intelligibility,
                    region: Some(result.region),
                },
                result.warnings,
            ))
        }
        EntryKind::Network(spec) => {
            let counts = spec.counts().map_err(|e| e.to_string())?;
            let intelligibility = nn_score(spec).map_err(|e| e.to_string())?;
            Ok((
                Computed {
                    n_o: counts.n_o,
                    n_e: counts.n_e,
                    intelligibility,
                    region: None,
                },
                Vec::new(),
            ))
        }
    }
}

pub fn score_entry(entry: &CorpusEntry) -> ReportRow {
    let expected = &entry.expected;
    match compute_entry(entry) {
        Err(message) => ReportRow::failure(&entry.name, message, Some(expected.clone())),
        Ok((computed, mut warnings)) => {
            let agrees = computed.n_o == expected.n_o
                && computed.n_e == expected.n_e
                && computed.intelligibility == expected.intelligibility();
            let status = match (agrees, &expected.discrepancy) {
                (false, _) => MatchStatus::Mismatch,
                (true, None) => MatchStatus::Match,
                (true, Some(note)) => {
                    warnings.push(format!("printed value differs: {note}"));
                    MatchStatus::PaperDiscrepancy
                }
            };
            ReportRow {
                name: entry.name.clone(),
                computed: Ok(computed),
                expected: Some(expected.clone()),
                status,
                warnings,
            }
        }
    }
}

/// Scores entries in parallel; rows come back in entry order.
pub fn score_corpus(entries: &[CorpusEntry]) -> Vec<ReportRow> {
    entries.par_iter().map(score_entry).collect()
}

/// Scored rows for a whole load, with load failures merged in by name.
pub fn report_rows(load: &CorpusLoad) -> Vec<ReportRow> {
    let mut rows = score_corpus(&load.entries);
    rows.extend(
        load.failures
            .iter()
            .map(|f| ReportRow::failure(&f.name, f.error.to_string(), None)),
    );
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    rows
}

pub fn write_report<W: io::Write>(rows: &[ReportRow], out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(REPORT_HEADER)?;
    for row in rows {
        let (n_o, n_e, num, den, dec) = match &row.computed {
            Ok(c) => (
                c.n_o.to_string(),
                c.n_e.to_string(),
                c.intelligibility.numer().to_string(),
                c.intelligibility.denom().to_string(),
                decimal_string(c.intelligibility),
            ),
            Err(_) => Default::default(),
        };
        let (exp_num, exp_den) = match &row.expected {
            Some(e) => (
                e.intelligibility().numer().to_string(),
                e.intelligibility().denom().to_string(),
            ),
            None => Default::default(),
        };
        writer.write_record([
            row.name.as_str(),
            &n_o,
            &n_e,
            &num,
            &den,
            &dec,
            &exp_num,
            &exp_den,
            &row.status.to_string(),
            &row.warnings.join("; "),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut buf = Vec::new();
    write_report(rows, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurvePoint {
    pub n_o: u64,
    pub n_h: u64,
    pub intelligibility: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatementPoint {
    pub name: String,
    pub n_o: u64,
    pub intelligibility: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkPoint {
    pub name: String,
    pub n_o: u64,
    pub n_h: u64,
    pub intelligibility: Ratio<i64>,
}

/// Data behind the intelligibility-versus-depth plot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureData {
    pub curves: Vec<CurvePoint>,
    pub statements: Vec<StatementPoint>,
    pub networks: Vec<NetworkPoint>,
    pub star: NetworkPoint,
}

fn network_point(spec: &NetworkSpec) -> Option<NetworkPoint> {
    Some(NetworkPoint {
        name: spec.name.clone(),
        n_o: spec.io_variable_count,
        n_h: spec.hidden_layers,
        intelligibility: nn_score(spec).ok()?,
    })
}

/// Network curves `I(N_h)` for `N_h` in `1..=n_h_max` at each `N_O`, plus a
/// scatter of the corpus statements and networks. Non-positive `N_O` values
/// are skipped.
pub fn figure4_data(n_o_values: &[u64], n_h_max: u64, entries: &[CorpusEntry]) -> FigureData {
    let curves = n_o_values
        .iter()
        .filter(|&&n_o| n_o > 0)
        .flat_map(|&n_o| {
            (1..=n_h_max).filter_map(move |n_h| {
                let spec = NetworkSpec::new("curve", n_h, n_o);
                Some(CurvePoint {
                    n_o,
                    n_h,
                    intelligibility: nn_score(&spec).ok()?,
                })
            })
        })
        .collect();

    let mut statements = Vec::new();
    let mut networks = Vec::new();
    let mut star = None;
    for entry in entries {
        match &entry.kind {
            EntryKind::Statement { .. } => {
                if let Ok((c, _)) = compute_entry(entry) {
                    statements.push(StatementPoint {
                        name: entry.name.clone(),
                        n_o: c.n_o,
                        intelligibility: c.intelligibility,
                    });
                }
            }
            EntryKind::Network(spec) => {
                let Some(point) = network_point(spec) else {
                    continue;
                };
                if spec.name == STAR_NETWORK {
                    star = Some(point.clone());
                }
                networks.push(point);
            }
        }
    }
    let star = star.unwrap_or_else(|| {
        network_point(&NetworkSpec::new(STAR_NETWORK, 2000, 2)).expect("built-in spec is valid")
    });
    FigureData {
        curves,
        statements,
        networks,
        star,
    }
}

pub fn write_figure<W: io::Write>(data: &FigureData, out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(FIGURE_HEADER)?;
    for p in &data.curves {
        writer.write_record([
            "curve".to_string(),
            p.n_o.to_string(),
            p.n_h.to_string(),
            decimal_string(p.intelligibility),
            format!("N_O={}", p.n_o),
        ])?;
    }
    for p in &data.statements {
        writer.write_record([
            "statement".to_string(),
            p.n_o.to_string(),
            String::new(),
            decimal_string(p.intelligibility),
            p.name.clone(),
        ])?;
    }
    let networks = data.networks.iter().map(|p| ("network", p));
    for (series, p) in networks.chain(std::iter::once(("star", &data.star))) {
        writer.write_record([
            series.to_string(),
            p.n_o.to_string(),
            p.n_h.to_string(),
            decimal_string(p.intelligibility),
            p.name.clone(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn figure_csv(data: &FigureData) -> String {
    let mut buf = Vec::new();
    write_figure(data, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}
