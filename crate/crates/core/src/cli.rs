//! Command-line front end. [`run`] does all the work and returns the exit
//! code and both output streams, so the binary stays a thin wrapper.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::corpus::{
    self, figure4_data, load_corpus, load_statement_pair, report_rows, EntryError,
    ANNOTATIONS_FILE, NETWORK_FILE, STATEMENT_FILE,
};
use crate::expr::ParseError;
use crate::intelligibility::{
    decimal_string, score, significantly_different, AnalysisResult, Counts, ScoreError,
};
use crate::netintel::{nn_asymptotic_score, NetError, NetworkSpec, DEFAULT_ASYMPTOTIC_RATIO};
use crate::ontology::{
    bind_symbols, classify_statement, validate, AnnotationError, AnnotationSet, StatementRegion,
    UnboundSymbol,
};

pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const ANNOTATION: i32 = 2;
    pub const UNBOUND: i32 = 3;
    pub const IO: i32 = 4;
    pub const USAGE: i32 = 5;
    pub const ZERO_VARIABLES: i32 = 6;
    pub const CORPUS_MISMATCH: i32 = 7;
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Annotation(String),
    #[error("{0}")]
    Unbound(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    ZeroVariables(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Annotation(_) => exit::ANNOTATION,
            CliError::Unbound(_) => exit::UNBOUND,
            CliError::Io { .. } => exit::IO,
            CliError::Usage(_) => exit::USAGE,
            CliError::ZeroVariables(_) => exit::ZERO_VARIABLES,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<EntryError> for CliError {
    fn from(e: EntryError) -> Self {
        match e {
            EntryError::Io { path, source } => CliError::Io { path, source },
            EntryError::Parse { .. } => CliError::Parse(e.to_string()),
            EntryError::Annotation { .. }
            | EntryError::Network { .. }
            | EntryError::Expected { .. } => CliError::Annotation(e.to_string()),
            EntryError::Layout(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ScoreError> for CliError {
    fn from(e: ScoreError) -> Self {
        match e {
            ScoreError::Annotation(_) => CliError::Annotation(e.to_string()),
            ScoreError::Unbound(_) => CliError::Unbound(e.to_string()),
            ScoreError::ZeroVariables => CliError::ZeroVariables(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<AnnotationError> for CliError {
    fn from(e: AnnotationError) -> Self {
        CliError::Annotation(e.to_string())
    }
}

impl From<UnboundSymbol> for CliError {
    fn from(e: UnboundSymbol) -> Self {
        CliError::Unbound(e.to_string())
    }
}

impl From<NetError> for CliError {
    fn from(e: NetError) -> Self {
        CliError::Annotation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "galilean",
    version,
    about = "Galilean intelligibility of empirical statements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a statement file against its annotations.
    Score {
        file: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Place a statement in the statement taxonomy.
    Classify {
        file: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
    },
    /// Network estimates.
    Nn {
        #[command(subcommand)]
        command: NnCommand,
    },
    /// Decide whether two statements differ significantly in transparency.
    ///
    /// Each argument is a corpus entry directory or `statement,annotations`.
    Compare { first: String, second: String },
    /// Reference corpus tools.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Check an annotation file.
    Validate {
        #[arg(long)]
        annotations: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum NnCommand {
    /// Score a network spec file.
    Score {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ASYMPTOTIC_RATIO)]
        asymptotic_ratio: u64,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusCommand {
    /// Score every entry and compare with the expected values.
    Report {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the intelligibility-versus-depth data set.
    Figure4 {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 10, 100])]
        n_o: Vec<u64>,
        #[arg(long, default_value_t = 2500)]
        n_h_max: u64,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandResult {
                    code: exit::USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                CommandResult {
                    code: exit::OK,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut result = CommandResult::default();
    if let Err(e) = execute(cli.command, &mut result) {
        result.code = e.code();
        let _ = writeln!(result.stderr, "error: {e}");
    }
    result
}

fn execute(command: Command, out: &mut CommandResult) -> Result<(), CliError> {
    match command {
        Command::Score {
            file,
            annotations,
            format,
        } => {
            let (statement, set) = load_statement_pair(&file, &annotations)?;
            let result = score(&statement, &set)?.with_name(entry_name(&file));
            out.stdout = render_score(&result, format);
            Ok(())
        }
        Command::Classify { file, annotations } => {
            let (statement, set) = load_statement_pair(&file, &annotations)?;
            let region = classify(&statement, &set)?;
            let _ = writeln!(out.stdout, "{} (region {})", region.name(), region.number());
            Ok(())
        }
        Command::Nn {
            command:
                NnCommand::Score {
                    spec,
                    asymptotic_ratio,
                },
        } => {
            let text = fs::read_to_string(&spec).map_err(|e| CliError::io(&spec, e))?;
            let spec = NetworkSpec::from_json(&text)?;
            out.stdout = render_network(&spec, asymptotic_ratio)?;
            Ok(())
        }
        Command::Compare { first, second } => {
            let a = counts_for(&first)?;
            let b = counts_for(&second)?;
            let verdict = significantly_different(a, b);
            let s = &mut out.stdout;
            for (label, c) in [(&first, a), (&second, b)] {
                let _ = writeln!(
                    s,
                    "{label}: N_O={} N_E={} I={}",
                    c.n_o,
                    c.n_e,
                    c.intelligibility()
                );
            }
            let _ = writeln!(s, "verdict: {verdict}");
            Ok(())
        }
        Command::Corpus {
            command: CorpusCommand::Report { dir, out: path },
        } => {
            let load = load_corpus(&dir).map_err(|e| CliError::io(&dir, e))?;
            let rows = report_rows(&load);
            let csv = corpus::report_csv(&rows);
            match path {
                Some(path) => fs::write(&path, &csv).map_err(|e| CliError::io(&path, e))?,
                None => out.stdout = csv,
            }
            let failed: Vec<&str> = rows
                .iter()
                .filter(|r| !r.is_ok())
                .map(|r| r.name.as_str())
                .collect();
            if !failed.is_empty() {
                out.code = exit::CORPUS_MISMATCH;
                let _ = writeln!(out.stderr, "corpus mismatch: {}", failed.join(", "));
            }
            Ok(())
        }
        Command::Corpus {
            command:
                CorpusCommand::Figure4 {
                    dir,
                    out: path,
                    n_o,
                    n_h_max,
                },
        } => {
            if n_h_max < 1 {
                return Err(CliError::Usage("--n-h-max must be at least 1".into()));
            }
            if n_o.is_empty() || n_o.contains(&0) {
                return Err(CliError::Usage("--n-o values must be at least 1".into()));
            }
            let load = load_corpus(&dir).map_err(|e| CliError::io(&dir, e))?;
            for failure in &load.failures {
                let _ = writeln!(out.stderr, "skipped {}: {}", failure.name, failure.error);
            }
            let data = figure4_data(&n_o, n_h_max, &load.entries);
            fs::write(&path, corpus::figure_csv(&data)).map_err(|e| CliError::io(&path, e))?;
            let _ = writeln!(
                out.stdout,
                "wrote {} curve, {} statement and {} network points to {}",
                data.curves.len(),
                data.statements.len(),
                data.networks.len(),
                path.display()
            );
            Ok(())
        }
        Command::Validate { annotations } => {
            let text =
                fs::read_to_string(&annotations).map_err(|e| CliError::io(&annotations, e))?;
            let set = AnnotationSet::from_json(&text)?;
            let report = validate(&set);
            let _ = writeln!(out.stdout, "{report}");
            if !report.is_ok() {
                out.code = exit::ANNOTATION;
            }
            Ok(())
        }
    }
}

/// Inlines auxiliaries, binds and classifies.
pub fn classify(
    statement: &crate::expr::Statement,
    annotations: &AnnotationSet,
) -> Result<StatementRegion, CliError> {
    let aux = annotations
        .auxiliaries()
        .map_err(|e| CliError::Annotation(e.to_string()))?;
    let bound = bind_symbols(&aux.inline(statement), annotations)?;
    Ok(classify_statement(&bound))
}

fn entry_name(file: &Path) -> String {
    let is_entry_file = file.file_name().is_some_and(|n| n == STATEMENT_FILE);
    let parent = file.parent().and_then(|p| p.file_name());
    match (is_entry_file, parent) {
        (true, Some(dir)) => dir.to_string_lossy().into_owned(),
        _ => file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    }
}

fn counts_for(arg: &str) -> Result<Counts, CliError> {
    if let Some((statement, annotations)) = arg.split_once(',') {
        let (statement, set) = load_statement_pair(Path::new(statement), Path::new(annotations))?;
        return Ok(score(&statement, &set)?.counts());
    }
    let dir = Path::new(arg);
    let network = dir.join(NETWORK_FILE);
    if network.is_file() {
        let text = fs::read_to_string(&network).map_err(|e| CliError::io(&network, e))?;
        return Ok(NetworkSpec::from_json(&text)?.counts()?);
    }
    if dir.is_dir() {
        let (statement, set) =
            load_statement_pair(&dir.join(STATEMENT_FILE), &dir.join(ANNOTATIONS_FILE))?;
        return Ok(score(&statement, &set)?.counts());
    }
    Err(CliError::Usage(format!(
        "`{arg}` is neither an entry directory nor `statement,annotations`"
    )))
}

fn render_score(result: &AnalysisResult, format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Json => {
            s = serde_json::to_string_pretty(&result.record()).expect("record serializes");
            s.push('\n');
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            let record = result.record();
            let groups: Vec<String> = result.groups.iter().map(|g| g.to_string()).collect();
            writer
                .write_record([
                    "name",
                    "N_O",
                    "N_E",
                    "I_num",
                    "I_den",
                    "I_decimal",
                    "region",
                    "groups",
                    "warnings",
                ])
                .and_then(|_| {
                    writer.write_record([
                        record.name,
                        record.n_o.to_string(),
                        record.n_e.to_string(),
                        record.intelligibility.num.to_string(),
                        record.intelligibility.den.to_string(),
                        record.decimal,
                        record.region.name().to_string(),
                        groups.join(" "),
                        record.warnings.join("; "),
                    ])
                })
                .expect("writing to memory cannot fail");
            s = String::from_utf8(writer.into_inner().expect("flush to memory")).expect("utf-8");
        }
        Format::Human => {
            let vars: Vec<&str> = result.variables.iter().map(String::as_str).collect();
            let groups: Vec<String> = result.groups.iter().map(|g| g.to_string()).collect();
            let _ = writeln!(s, "name:      {}", result.name);
            let _ = writeln!(s, "canonical: {}", result.canonical);
            let _ = writeln!(
                s,
                "region:    {} (region {})",
                result.region,
                result.region.number()
            );
            let _ = writeln!(s, "N_O = {}  [{}]", result.n_o, vars.join(", "));
            let _ = writeln!(s, "N_E = {}  [{}]", result.n_e, groups.join(" "));
            let _ = writeln!(
                s,
                "I   = {}  ({})",
                result.intelligibility,
                decimal_string(result.intelligibility)
            );
            for w in &result.warnings {
                let _ = writeln!(s, "warning: {w}");
            }
        }
    }
    s
}

fn render_network(spec: &NetworkSpec, ratio: u64) -> Result<String, CliError> {
    let counts = spec.counts()?;
    let asym = nn_asymptotic_score(spec, ratio)?;
    let mut s = String::new();
    let _ = writeln!(s, "name: {}", spec.name);
    let _ = writeln!(s, "N_h = {}", spec.hidden_layers);
    let _ = writeln!(s, "N_O = {}", counts.n_o);
    let _ = writeln!(s, "N_E = {}", counts.n_e);
    let _ = writeln!(s, "I   = {}  ({})", asym.exact, decimal_string(asym.exact));
    let regime = if asym.applicable {
        "applies"
    } else {
        "does not apply"
    };
    let _ = writeln!(
        s,
        "asymptotic I ≈ {} ({regime} at N_h >= {ratio} N_O)",
        asym.value
    );
    Ok(s)
}
