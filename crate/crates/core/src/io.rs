//! Session, project and comparison-matrix files; report emission.
//!
//! Sessions and projects are JSON. Comparison matrices are headerless square
//! CSV blocks where entries may be written as fractions (`1/3`). Reports come
//! out as JSON, sectioned CSV or Markdown, with reals rounded to 6
//! significant digits. All emitters are deterministic.

use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::homogeneity::{self, HomogeneityError};
use crate::model::{
    Alternative, ComparisonMatrix, DecisionSession, HomogeneityReport, LikertScale, ModelError,
    NormalizationMode, Participant, PipelineConfig, ProjectRecord, RankVector, WeightScheme,
};
use crate::ranking::{self, DEFAULT_TIE_TOLERANCE};

pub const SCHEMA_VERSION: u32 = 1;

/// The five-alternative, three-learner worked example shipped with the crate.
pub const WORKED_EXAMPLE_SESSION: &str = include_str!("../examples/paper_4_2.json");

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at `{path}`: {reason}")]
    SchemaViolation { path: String, reason: String },
    #[error("invalid value at `{path}`: {reason}")]
    InvariantViolation { path: String, reason: String },
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NonSquare {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot parse `{text}` at row {row}, column {col} as a number")]
    NumberParse { row: usize, col: usize, text: String },
    #[error("invalid comparison matrix: {0}")]
    Matrix(#[source] ModelError),
    #[error("malformed CSV: {0}")]
    Csv(String),
}

impl IoError {
    fn schema(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::SchemaViolation {
            path: path.into(),
            reason: reason.into(),
        }
    }

    fn invariant(path: impl Into<String>, reason: impl ToString) -> Self {
        Self::InvariantViolation {
            path: path.into(),
            reason: reason.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Escapes a key for use inside a JSON pointer.
fn pointer_token(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn deserialize<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        use serde_path_to_error::Segment;
        let mut pointer: String = err
            .path()
            .iter()
            .filter_map(|seg| match seg {
                Segment::Seq { index } => Some(format!("/{index}")),
                Segment::Map { key } => Some(format!("/{}", pointer_token(key))),
                Segment::Enum { variant } => Some(format!("/{}", pointer_token(variant))),
                Segment::Unknown => None,
            })
            .collect();
        let inner = err.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            return IoError::Syntax {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            };
        }
        let message = inner.to_string();
        if let Some(field) = message
            .strip_prefix("missing field `")
            .and_then(|rest| rest.split('`').next())
        {
            pointer.push('/');
            pointer.push_str(&pointer_token(field));
        }
        IoError::schema(pointer, message)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlternativeEntry {
    id: String,
    #[serde(default)]
    label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParticipantEntry {
    id: String,
    #[serde(default)]
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normalization_mode: Option<NormalizationMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    participant_weights: Option<WeightScheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    likert_categories: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    consensus_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionFile {
    schema_version: u32,
    session_id: String,
    #[serde(default)]
    stage: String,
    alternatives: Vec<AlternativeEntry>,
    participants: Vec<ParticipantEntry>,
    individual_ranks: IndexMap<String, Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group_ranks: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group_scores: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<ConfigOverrides>,
}

fn resolve_config(overrides: Option<ConfigOverrides>) -> Result<PipelineConfig, IoError> {
    let mut cfg = PipelineConfig::default();
    let Some(o) = overrides else {
        return Ok(cfg);
    };
    if let Some(mode) = o.normalization_mode {
        cfg.normalization_mode = mode;
    }
    if let Some(w) = o.participant_weights {
        cfg.participant_weights = w;
    }
    if let Some(c) = o.likert_categories {
        cfg.likert =
            LikertScale::new(c).map_err(|e| IoError::invariant("/config/likert_categories", e))?;
    }
    if let Some(t) = o.consensus_threshold {
        cfg.consensus_threshold = t;
        cfg.validate()
            .map_err(|e| IoError::invariant("/config/consensus_threshold", e))?;
    }
    Ok(cfg)
}

fn rank_vector(path: &str, ranks: &[i64], n: usize, scale: LikertScale) -> Result<RankVector, IoError> {
    if ranks.len() != n {
        return Err(IoError::schema(
            path,
            format!("expected {n} ranks (one per alternative), found {}", ranks.len()),
        ));
    }
    let rv = RankVector::new(ranks.to_vec()).map_err(|e| IoError::invariant(path, e))?;
    ranking::validate_likert(&rv, scale).map_err(|e| IoError::invariant(path, e))?;
    Ok(rv)
}

/// Parses and validates a session document.
pub fn parse_session(text: &str) -> Result<DecisionSession, IoError> {
    let file: SessionFile = deserialize(text)?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(IoError::schema(
            "/schema_version",
            format!("unsupported schema version {}, expected {SCHEMA_VERSION}", file.schema_version),
        ));
    }
    let config = resolve_config(file.config)?;
    let n = file.alternatives.len();

    let alternatives = file
        .alternatives
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            Alternative::new(a.id, a.label).map_err(|e| IoError::invariant(format!("/alternatives/{i}/id"), e))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let explicit = config.participant_weights == WeightScheme::Explicit;
    let participants = file
        .participants
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let weight = match (p.weight, explicit) {
                (Some(w), _) => w,
                (None, false) => 1.0,
                (None, true) => {
                    return Err(IoError::schema(
                        format!("/participants/{i}/weight"),
                        "explicit participant weights require a weight for every participant",
                    ))
                }
            };
            Participant::new(p.id, p.label, weight)
                .map_err(|e| IoError::invariant(format!("/participants/{i}"), e))
        })
        .collect::<Result<Vec<_>, _>>()?;

    if let Some(key) = file
        .individual_ranks
        .keys()
        .find(|key| !participants.iter().any(|p| &p.id == *key))
    {
        return Err(IoError::schema(
            format!("/individual_ranks/{}", pointer_token(key)),
            "ranks given for an unknown participant",
        ));
    }
    let individual_ranks = participants
        .iter()
        .map(|p| {
            let path = format!("/individual_ranks/{}", pointer_token(&p.id));
            let ranks = file
                .individual_ranks
                .get(&p.id)
                .ok_or_else(|| IoError::schema(&path, "missing ranks for participant"))?;
            rank_vector(&path, ranks, n, config.likert)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let group_ranks = match (file.group_ranks, file.group_scores) {
        (Some(ranks), None) => rank_vector("/group_ranks", &ranks, n, config.likert)?,
        (None, Some(scores)) => {
            if scores.len() != n {
                return Err(IoError::schema(
                    "/group_scores",
                    format!("expected {n} scores, found {}", scores.len()),
                ));
            }
            let rv = ranking::scores_to_ranks(&scores, DEFAULT_TIE_TOLERANCE)
                .map_err(|e| IoError::invariant("/group_scores", e))?;
            ranking::validate_likert(&rv, config.likert)
                .map_err(|e| IoError::invariant("/group_scores", e))?;
            rv
        }
        _ => {
            return Err(IoError::schema(
                "/group_ranks",
                "exactly one of `group_ranks` or `group_scores` is required",
            ))
        }
    };

    DecisionSession::new(
        file.session_id,
        file.stage,
        alternatives,
        participants,
        individual_ranks,
        group_ranks,
        config,
    )
    .map_err(|e| {
        let path = match &e {
            ModelError::TooFewAlternatives(_) => "/alternatives",
            ModelError::DuplicateId { kind: "alternative", .. } => "/alternatives",
            ModelError::NoParticipants | ModelError::DuplicateId { .. } => "/participants",
            ModelError::ZeroWeightSum => "/participants",
            _ => "",
        };
        IoError::invariant(path, e)
    })
}

pub fn load_session(path: &Path) -> Result<DecisionSession, IoError> {
    parse_session(&read(path)?)
}

/// Serializes a session so that [`parse_session`] returns an equal value.
pub fn serialize_session(session: &DecisionSession) -> String {
    let cfg = session.config();
    let file = SessionFile {
        schema_version: SCHEMA_VERSION,
        session_id: session.session_id().to_string(),
        stage: session.stage().to_string(),
        alternatives: session
            .alternatives()
            .iter()
            .map(|a| AlternativeEntry {
                id: a.id.clone(),
                label: a.label.clone(),
            })
            .collect(),
        participants: session
            .participants()
            .iter()
            .map(|p| ParticipantEntry {
                id: p.id.clone(),
                label: p.label.clone(),
                weight: Some(p.weight),
            })
            .collect(),
        individual_ranks: session
            .participants()
            .iter()
            .zip(session.individual_ranks())
            .map(|(p, r)| (p.id.clone(), r.ranks().iter().map(|&x| i64::from(x)).collect()))
            .collect(),
        group_ranks: Some(session.group_ranks().ranks().iter().map(|&x| i64::from(x)).collect()),
        group_scores: None,
        config: Some(ConfigOverrides {
            normalization_mode: Some(cfg.normalization_mode),
            participant_weights: Some(cfg.participant_weights),
            likert_categories: Some(cfg.likert.categories()),
            consensus_threshold: Some(cfg.consensus_threshold),
        }),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("session serializes");
    out.push('\n');
    out
}

fn parse_number(text: &str) -> Option<f64> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().ok()?;
            let den: f64 = den.trim().parse().ok()?;
            (den != 0.0).then(|| num / den)
        }
        None => text.parse().ok(),
    }
}

/// Parses a headerless square CSV block of judgments.
pub fn parse_comparison_matrix(text: &str) -> Result<ComparisonMatrix, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| IoError::Csv(e.to_string()))?;
        let values = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                parse_number(field).ok_or_else(|| IoError::NumberParse {
                    row,
                    col,
                    text: field.to_string(),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(values);
    }
    let size = rows.len();
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != size) {
        return Err(IoError::NonSquare {
            row,
            expected: size,
            found: r.len(),
        });
    }
    ComparisonMatrix::new(rows).map_err(IoError::Matrix)
}

pub fn load_comparison_matrix(path: &Path) -> Result<ComparisonMatrix, IoError> {
    parse_comparison_matrix(&read(path)?)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct StageEntry {
    stage: String,
    #[serde(default)]
    session_path: Option<PathBuf>,
    #[serde(default)]
    homogeneity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectFile {
    project_id: String,
    threshold: f64,
    stages: Vec<StageEntry>,
}

/// Where a stage's homogeneity value comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum StageSource {
    Value(f64),
    /// Relative paths are resolved against the project file's directory.
    Session(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectSpec {
    pub project_id: String,
    pub threshold: f64,
    pub stages: Vec<(String, StageSource)>,
}

pub fn parse_project(text: &str) -> Result<ProjectSpec, IoError> {
    let file: ProjectFile = deserialize(text)?;
    if !(0.0..=1.0).contains(&file.threshold) {
        return Err(IoError::invariant(
            "/threshold",
            ModelError::ThresholdOutOfRange(file.threshold),
        ));
    }
    if file.stages.is_empty() {
        return Err(IoError::schema("/stages", "at least one stage is required"));
    }
    let stages = file
        .stages
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let source = match (s.session_path, s.homogeneity) {
                (Some(path), None) => StageSource::Session(path),
                (None, Some(m)) if (0.0..=1.0).contains(&m) => StageSource::Value(m),
                (None, Some(m)) => {
                    return Err(IoError::invariant(
                        format!("/stages/{i}/homogeneity"),
                        format!("homogeneity must lie in [0, 1], got {m}"),
                    ))
                }
                _ => {
                    return Err(IoError::schema(
                        format!("/stages/{i}"),
                        "exactly one of `session_path` or `homogeneity` is required",
                    ))
                }
            };
            Ok((s.stage, source))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProjectSpec {
        project_id: file.project_id,
        threshold: file.threshold,
        stages,
    })
}

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error("stage `{stage}`: {source}")]
    Input {
        stage: String,
        #[source]
        source: IoError,
    },
    #[error("stage `{stage}`: {source}")]
    Analysis {
        stage: String,
        #[source]
        source: HomogeneityError,
    },
}

/// Loads every stage session and analyzes them, merging in stage order.
pub fn resolve_project(
    spec: &ProjectSpec,
    base_dir: &Path,
    exec: Execution,
) -> Result<ProjectRecord, ProjectError> {
    enum Pending {
        Value(f64),
        Session(Box<DecisionSession>),
    }
    let mut pending = Vec::with_capacity(spec.stages.len());
    for (stage, source) in &spec.stages {
        pending.push(match source {
            StageSource::Value(m) => Pending::Value(*m),
            StageSource::Session(path) => {
                let session = load_session(&base_dir.join(path)).map_err(|source| ProjectError::Input {
                    stage: stage.clone(),
                    source,
                })?;
                Pending::Session(Box::new(session))
            }
        });
    }
    let values = exec.map(&pending, |p| match p {
        Pending::Value(m) => Ok(*m),
        Pending::Session(s) => homogeneity::analyze_session(s).map(|r| r.homogeneity),
    });
    let stages = spec
        .stages
        .iter()
        .zip(values)
        .map(|((stage, _), value)| {
            value
                .map(|m| (stage.clone(), m))
                .map_err(|source| ProjectError::Analysis {
                    stage: stage.clone(),
                    source,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    ProjectRecord::new(spec.project_id.clone(), stages, spec.threshold).map_err(|e| ProjectError::Input {
        stage: String::new(),
        source: IoError::invariant("/stages", e),
    })
}

pub fn load_project(path: &Path, exec: Execution) -> Result<ProjectRecord, ProjectError> {
    let wrap = |source| ProjectError::Input {
        stage: String::new(),
        source,
    };
    let spec = parse_project(&read(path).map_err(wrap)?).map_err(wrap)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    resolve_project(&spec, base, exec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    CsvTables,
    Markdown,
}

/// Rounds to 6 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

fn round_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().copied().map(round_sig).collect()
}

fn num(x: f64) -> String {
    round_sig(x).to_string()
}

#[derive(Serialize)]
struct ParticipantJson<'a> {
    participant: &'a str,
    weight: f64,
    entropy: f64,
    first_order_diversity: f64,
    uniformity: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    schema_version: u32,
    session_id: &'a str,
    stage: &'a str,
    normalization_mode: &'static str,
    alternatives: &'a [String],
    participants: &'a [String],
    distances: &'a [Vec<u32>],
    column_totals: &'a [u32],
    probabilities: Vec<Vec<f64>>,
    zero_columns: Vec<&'a str>,
    per_participant: Vec<ParticipantJson<'a>>,
    alpha_entropy: f64,
    gamma_entropy: f64,
    beta_entropy: f64,
    beta_diversity: f64,
    homogeneity: f64,
    perfect_consensus: bool,
    pairwise: Option<Vec<Vec<f64>>>,
    diagnostics: &'a [String],
}

fn report_json(r: &HomogeneityReport) -> String {
    let doc = ReportJson {
        schema_version: SCHEMA_VERSION,
        session_id: &r.session_id,
        stage: &r.stage,
        normalization_mode: r.mode.as_str(),
        alternatives: &r.alternative_ids,
        participants: &r.participant_ids,
        distances: r.distances.rows(),
        column_totals: r.distances.column_totals(),
        probabilities: r.probabilities.rows().iter().map(|row| round_all(row)).collect(),
        zero_columns: r
            .probabilities
            .zero_columns()
            .iter()
            .map(|&i| r.alternative_ids[i].as_str())
            .collect(),
        per_participant: r
            .participant_ids
            .iter()
            .zip(&r.per_participant)
            .zip(&r.weights)
            .map(|((id, idx), &w)| ParticipantJson {
                participant: id,
                weight: round_sig(w),
                entropy: round_sig(idx.entropy),
                first_order_diversity: round_sig(idx.first_order_diversity),
                uniformity: round_sig(idx.uniformity),
            })
            .collect(),
        alpha_entropy: round_sig(r.alpha_entropy),
        gamma_entropy: round_sig(r.gamma_entropy),
        beta_entropy: round_sig(r.beta_entropy),
        beta_diversity: round_sig(r.beta_diversity),
        homogeneity: round_sig(r.homogeneity),
        perfect_consensus: r.perfect_consensus,
        pairwise: r
            .pairwise
            .as_ref()
            .map(|m| m.iter().map(|row| round_all(row)).collect()),
        diagnostics: &r.diagnostics,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}

fn csv_section(out: &mut Vec<u8>, name: &str, rows: Vec<Vec<String>>) {
    out.extend_from_slice(format!("# {name}\n").as_bytes());
    {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(&mut *out);
        for row in rows {
            w.write_record(&row).expect("writing to memory");
        }
        w.flush().expect("writing to memory");
    }
    out.push(b'\n');
}

fn header(first: &str, ids: &[String]) -> Vec<String> {
    std::iter::once(first.to_string()).chain(ids.iter().cloned()).collect()
}

fn labelled_rows<T: Copy>(ids: &[String], rows: &[Vec<T>], fmt: impl Fn(T) -> String) -> Vec<Vec<String>> {
    ids.iter()
        .zip(rows)
        .map(|(id, row)| std::iter::once(id.clone()).chain(row.iter().map(|&v| fmt(v))).collect())
        .collect()
}

fn group_rows(r: &HomogeneityReport) -> Vec<(&'static str, String)> {
    vec![
        ("alpha_entropy", num(r.alpha_entropy)),
        ("gamma_entropy", num(r.gamma_entropy)),
        ("beta_entropy", num(r.beta_entropy)),
        ("beta_diversity", num(r.beta_diversity)),
        ("homogeneity", num(r.homogeneity)),
        ("perfect_consensus", r.perfect_consensus.to_string()),
    ]
}

fn pairwise_csv(out: &mut Vec<u8>, ids: &[String], matrix: Option<&Vec<Vec<f64>>>) {
    let mut rows = vec![header("participant", ids)];
    if let Some(m) = matrix {
        rows.extend(labelled_rows(ids, m, num));
    }
    csv_section(out, "pairwise", rows);
}

fn report_csv(r: &HomogeneityReport) -> String {
    let mut out = Vec::new();
    let mut distances = vec![header("participant", &r.alternative_ids)];
    distances.extend(labelled_rows(&r.participant_ids, r.distances.rows(), |d: u32| d.to_string()));
    distances.push(
        std::iter::once("column_total".to_string())
            .chain(r.distances.column_totals().iter().map(u32::to_string))
            .collect(),
    );
    csv_section(&mut out, "distances", distances);

    let mut probabilities = vec![header("participant", &r.alternative_ids)];
    probabilities.extend(labelled_rows(&r.participant_ids, r.probabilities.rows(), num));
    csv_section(&mut out, "probabilities", probabilities);

    let mut indices = vec![vec![
        "participant".to_string(),
        "entropy".to_string(),
        "first_order_diversity".to_string(),
        "uniformity".to_string(),
    ]];
    indices.extend(r.participant_ids.iter().zip(&r.per_participant).map(|(id, idx)| {
        vec![
            id.clone(),
            num(idx.entropy),
            num(idx.first_order_diversity),
            num(idx.uniformity),
        ]
    }));
    csv_section(&mut out, "participant_indices", indices);

    let mut group = vec![vec!["index".to_string(), "value".to_string()]];
    group.extend(group_rows(r).into_iter().map(|(k, v)| vec![k.to_string(), v]));
    csv_section(&mut out, "group_indices", group);

    pairwise_csv(&mut out, &r.participant_ids, r.pairwise.as_ref());
    String::from_utf8(out).expect("csv output is utf-8")
}

fn md_table(out: &mut String, head: &[String], rows: &[Vec<String>]) {
    out.push_str(&format!("| {} |\n", head.join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(head.len())));
    for row in rows {
        out.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    out.push('\n');
}

fn pairwise_md(out: &mut String, ids: &[String], m: &[Vec<f64>]) {
    md_table(out, &header("", ids), &labelled_rows(ids, m, num));
}

fn report_md(r: &HomogeneityReport) -> String {
    let mut out = format!(
        "# Homogeneity report: {}\n\nStage: {}  \nNormalization: {}  \nHomogeneity M = **{}**{}\n\n",
        r.session_id,
        r.stage,
        r.mode.as_str(),
        num(r.homogeneity),
        if r.perfect_consensus { " (perfect consensus)" } else { "" },
    );
    out.push_str("## Rank distances\n\n");
    let mut rows = labelled_rows(&r.participant_ids, r.distances.rows(), |d: u32| d.to_string());
    rows.push(
        std::iter::once("total".to_string())
            .chain(r.distances.column_totals().iter().map(u32::to_string))
            .collect(),
    );
    md_table(&mut out, &header("participant", &r.alternative_ids), &rows);

    out.push_str("## Probabilities\n\n");
    md_table(
        &mut out,
        &header("participant", &r.alternative_ids),
        &labelled_rows(&r.participant_ids, r.probabilities.rows(), num),
    );

    out.push_str("## Participant indices\n\n");
    let head: Vec<String> = ["participant", "entropy", "diversity", "uniformity"]
        .map(String::from)
        .to_vec();
    let rows: Vec<Vec<String>> = r
        .participant_ids
        .iter()
        .zip(&r.per_participant)
        .map(|(id, i)| vec![id.clone(), num(i.entropy), num(i.first_order_diversity), num(i.uniformity)])
        .collect();
    md_table(&mut out, &head, &rows);

    out.push_str("## Group indices\n\n");
    let rows: Vec<Vec<String>> = group_rows(r)
        .into_iter()
        .map(|(k, v)| vec![k.to_string(), v])
        .collect();
    md_table(&mut out, &["index".to_string(), "value".to_string()], &rows);

    if let Some(m) = &r.pairwise {
        out.push_str("## Pairwise homogeneity\n\n");
        pairwise_md(&mut out, &r.participant_ids, m);
    }
    if !r.diagnostics.is_empty() {
        out.push_str("## Diagnostics\n\n");
        for d in &r.diagnostics {
            out.push_str(&format!("- {d}\n"));
        }
        out.push('\n');
    }
    out
}

pub fn emit_report(report: &HomogeneityReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report_json(report),
        ReportFormat::CsvTables => report_csv(report),
        ReportFormat::Markdown => report_md(report),
    }
}

#[derive(Serialize)]
struct PairwiseJson<'a> {
    participants: &'a [String],
    pairwise: Vec<Vec<f64>>,
}

/// Emits just a pairwise matrix, rows and columns labelled by `ids`.
pub fn emit_pairwise(ids: &[String], matrix: &[Vec<f64>], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let doc = PairwiseJson {
                participants: ids,
                pairwise: matrix.iter().map(|row| round_all(row)).collect(),
            };
            let mut out = serde_json::to_string_pretty(&doc).expect("matrix serializes");
            out.push('\n');
            out
        }
        ReportFormat::CsvTables => {
            let mut out = Vec::new();
            pairwise_csv(&mut out, ids, Some(&matrix.to_vec()));
            String::from_utf8(out).expect("csv output is utf-8")
        }
        ReportFormat::Markdown => {
            let mut out = String::from("# Pairwise homogeneity\n\n");
            pairwise_md(&mut out, ids, matrix);
            out
        }
    }
}
