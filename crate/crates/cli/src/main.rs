//! `consensus` command-line front end.
//!
//! Exit codes: 0 success, 2 input error (unreadable or invalid files,
//! bad flags), 3 domain error (e.g. a session with a single participant).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use consensus_core::ahp::{self, AhpConfig, Derivation};
use consensus_core::diversity;
use consensus_core::homogeneity::{self, HomogeneityError};
use consensus_core::io::{self, IoError, ProjectError, ReportFormat};
use consensus_core::{DecisionSession, Execution, HomogeneityReport, NormalizationMode};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "consensus", version, about = "Group homogeneity and AHP analytics for collaborative decisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze one decision session and report its homogeneity indicator.
    Analyze {
        #[arg(long, required_unless_present = "reproduce_paper")]
        session: Option<PathBuf>,
        /// Overrides the session file's normalization mode.
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare the bundled worked example against its published tables.
        #[arg(long, conflicts_with = "session")]
        reproduce_paper: bool,
    },
    /// Derive AHP priorities and consistency from a comparison-matrix CSV.
    Ahp {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Eig)]
        method: Method,
    },
    /// Pairwise homogeneity matrix between the participants of a session.
    Pairwise {
        #[arg(long)]
        session: PathBuf,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate per-stage homogeneity over a project and compare to its threshold.
    Summative {
        #[arg(long)]
        project: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    PerAlternative,
    PerLearner,
}

impl From<Mode> for NormalizationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::PerAlternative => NormalizationMode::PerAlternative,
            Mode::PerLearner => NormalizationMode::PerLearner,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::CsvTables,
            Format::Md => ReportFormat::Markdown,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Eig,
    Gmean,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Domain(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<HomogeneityError> for Failure {
    fn from(e: HomogeneityError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<ProjectError> for Failure {
    fn from(e: ProjectError) -> Self {
        match e {
            ProjectError::Input { .. } => Failure::Input(e.to_string()),
            ProjectError::Analysis { .. } => Failure::Domain(e.to_string()),
        }
    }
}

fn load(path: &Path, mode: Option<Mode>) -> Result<DecisionSession, Failure> {
    let session = io::load_session(path)?;
    apply_mode(session, mode)
}

fn apply_mode(session: DecisionSession, mode: Option<Mode>) -> Result<DecisionSession, Failure> {
    match mode {
        None => Ok(session),
        Some(m) => {
            let mut cfg = *session.config();
            cfg.normalization_mode = m.into();
            session
                .with_config(cfg)
                .map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn analyze(
    session: Option<&Path>,
    mode: Option<Mode>,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let session = load(session.expect("clap enforces --session"), mode)?;
    let report = homogeneity::full_report(&session, Execution::default())?;
    write_output(out, &io::emit_report(&report, format.into()))?;
    println!("{}", io::round_sig(report.homogeneity));
    Ok(())
}

/// Values printed in the published tables for the bundled example.
const PUBLISHED_ENTROPY: [f64; 3] = [1.732, 0.668, 0.633];
const PUBLISHED_DIVERSITY: [f64; 3] = [5.652, 1.951, 1.883];
const PUBLISHED_UNIFORMITY: [f64; 3] = [1.076, 0.415, 0.393];
const PUBLISHED_GROUP: [(&str, f64); 5] = [
    ("alpha_entropy", 0.927),
    ("gamma_entropy", 1.508),
    ("beta_entropy", 0.581),
    ("beta_diversity", 1.787),
    ("homogeneity", 0.560),
];
const PUBLISHED_COLUMN_TOTALS: [u32; 5] = [2, 4, 6, 9, 5];
const PUBLISHED_PROBABILITIES: [[f64; 5]; 3] = [
    [0.500, 0.250, 0.333, 0.333, 0.600],
    [0.500, 0.000, 0.000, 0.000, 0.200],
    [0.000, 0.000, 0.167, 0.222, 0.000],
];

fn side_by_side(line: &mut String, name: &str, computed: f64, published: f64) {
    let flag = if (computed - published).abs() <= 1e-3 {
        "match"
    } else {
        "DIFFERS"
    };
    line.push_str(&format!(
        "{name:<28} {:>10.4} {published:>10.3}  {flag}\n",
        computed
    ));
}

fn reproduce(mode: Option<Mode>, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let session = apply_mode(io::parse_session(io::WORKED_EXAMPLE_SESSION)?, mode)?;
    let report: HomogeneityReport = homogeneity::full_report(&session, Execution::default())?;
    let mut text = format!(
        "worked example, normalization {}\n\n{:<28} {:>10} {:>10}\n",
        report.mode.as_str(),
        "quantity",
        "computed",
        "published"
    );
    text.push_str(&format!(
        "column totals                {:?} vs published {:?}  DIFFERS (published totals do not match the distance rows)\n\n",
        report.distances.column_totals(),
        PUBLISHED_COLUMN_TOTALS
    ));
    for (k, id) in report.participant_ids.iter().enumerate() {
        let idx = &report.per_participant[k];
        side_by_side(&mut text, &format!("{id} entropy"), idx.entropy, PUBLISHED_ENTROPY[k]);
        side_by_side(&mut text, &format!("{id} diversity"), idx.first_order_diversity, PUBLISHED_DIVERSITY[k]);
        side_by_side(&mut text, &format!("{id} uniformity"), idx.uniformity, PUBLISHED_UNIFORMITY[k]);
    }
    text.push('\n');
    let computed = [
        report.alpha_entropy,
        report.gamma_entropy,
        report.beta_entropy,
        report.beta_diversity,
        report.homogeneity,
    ];
    for ((name, published), value) in PUBLISHED_GROUP.iter().zip(computed) {
        side_by_side(&mut text, name, value, *published);
    }
    text.push_str("\nchains fed with published intermediate values\n");
    for (k, id) in report.participant_ids.iter().enumerate() {
        let idx = diversity::indices(&PUBLISHED_PROBABILITIES[k], PUBLISHED_PROBABILITIES[k].len())
            .map_err(|e| Failure::Domain(e.to_string()))?;
        side_by_side(&mut text, &format!("{id} entropy (pub. p)"), idx.entropy, PUBLISHED_ENTROPY[k]);
        side_by_side(&mut text, &format!("{id} diversity (pub. p)"), idx.first_order_diversity, PUBLISHED_DIVERSITY[k]);
        side_by_side(&mut text, &format!("{id} uniformity (pub. p)"), idx.uniformity, PUBLISHED_UNIFORMITY[k]);
    }
    let beta = diversity::beta_partition(PUBLISHED_GROUP[0].1, PUBLISHED_GROUP[1].1)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    side_by_side(&mut text, "beta_entropy (pub. a/g)", beta.entropy, PUBLISHED_GROUP[2].1);
    side_by_side(&mut text, "beta_diversity (pub. a/g)", beta.diversity, PUBLISHED_GROUP[3].1);
    side_by_side(&mut text, "homogeneity (pub. a/g)", 1.0 / beta.diversity, PUBLISHED_GROUP[4].1);
    text.push_str(
        "\nThe published per-learner indices follow from probabilities built on the published\n\
         column totals; recomputing the totals from the distance rows changes every downstream value.\n\
         The published group alpha/gamma values are not reachable from the published tables.\n\n",
    );
    text.push_str(&io::emit_report(&report, format.into()));
    write_output(out, &text)?;
    println!("{}", io::round_sig(report.homogeneity));
    Ok(())
}

#[derive(Serialize)]
struct AhpOutput {
    method: &'static str,
    priorities: Vec<f64>,
    lambda_max: Option<f64>,
    consistency_index: Option<f64>,
    consistency_ratio: Option<f64>,
    consistent: Option<bool>,
}

fn run_ahp(path: &Path, method: Method) -> Result<(), Failure> {
    let matrix = io::load_comparison_matrix(path)?;
    let cfg = AhpConfig {
        derivation: match method {
            Method::Eig => Derivation::PrincipalEigenvector,
            Method::Gmean => Derivation::GeometricMean,
        },
        ..AhpConfig::default()
    };
    let pv = ahp::derive_priorities(&matrix, &cfg).map_err(|e| Failure::Domain(e.to_string()))?;
    let c = pv.consistency();
    if ahp::exceeds_cr_limit(&pv, &cfg) {
        eprintln!(
            "warning: consistency ratio {:.4} exceeds {:.2}; judgments are inconsistent",
            c.map_or(f64::NAN, |c| c.consistency_ratio),
            cfg.cr_limit
        );
    }
    if c.is_none() {
        eprintln!("warning: no random index for a {0}x{0} matrix; consistency not computed", matrix.size());
    }
    let output = AhpOutput {
        method: match method {
            Method::Eig => "principal_eigenvector",
            Method::Gmean => "geometric_mean",
        },
        priorities: pv.priorities().iter().copied().map(io::round_sig).collect(),
        lambda_max: c.map(|c| io::round_sig(c.lambda_max)),
        consistency_index: c.map(|c| io::round_sig(c.consistency_index)),
        consistency_ratio: c.map(|c| io::round_sig(c.consistency_ratio)),
        consistent: c.map(|c| c.consistency_ratio <= cfg.cr_limit),
    };
    println!("{}", serde_json::to_string_pretty(&output).expect("serializes"));
    Ok(())
}

fn pairwise(path: &Path, mode: Option<Mode>, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let session = load(path, mode)?;
    let matrix = homogeneity::pairwise_homogeneity_with(&session, Execution::default())?;
    let ids: Vec<String> = session.participants().iter().map(|p| p.id.clone()).collect();
    write_output(out, &io::emit_pairwise(&ids, &matrix, format.into()))
}

#[derive(Serialize)]
struct StageOutput<'a> {
    stage: &'a str,
    homogeneity: f64,
}

#[derive(Serialize)]
struct SummativeOutput<'a> {
    project_id: &'a str,
    stages: Vec<StageOutput<'a>>,
    threshold: f64,
    h_tot: f64,
    verdict: &'static str,
}

fn summative(path: &Path) -> Result<(), Failure> {
    let record = io::load_project(path, Execution::default())?;
    let result = homogeneity::summative_homogeneity(&record).map_err(|e| match e {
        HomogeneityError::EmptyProject => Failure::Input(e.to_string()),
        other => Failure::Domain(other.to_string()),
    })?;
    let output = SummativeOutput {
        project_id: record.project_id(),
        stages: record
            .stages()
            .iter()
            .map(|(stage, m)| StageOutput {
                stage,
                homogeneity: io::round_sig(*m),
            })
            .collect(),
        threshold: record.threshold(),
        h_tot: io::round_sig(result.h_tot),
        verdict: result.verdict.as_str(),
    };
    println!("{}", serde_json::to_string_pretty(&output).expect("serializes"));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            session,
            mode,
            format,
            out,
            reproduce_paper,
        } => {
            if reproduce_paper {
                reproduce(mode, format, out.as_deref())
            } else {
                analyze(session.as_deref(), mode, format, out.as_deref())
            }
        }
        Command::Ahp { matrix, method } => run_ahp(&matrix, method),
        Command::Pairwise {
            session,
            mode,
            format,
            out,
        } => pairwise(&session, mode, format, out.as_deref()),
        Command::Summative { project } => summative(&project),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
