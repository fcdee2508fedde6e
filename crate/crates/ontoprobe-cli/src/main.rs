//! Command-line entry point wiring the pipeline:
//! translate -> generate -> evaluate -> analyze -> report.
//!
//! Exit codes: 0 success, 1 input validation failure, 2 runtime failure.
//! Diagnostics go to stderr, data goes to the declared output paths. The
//! `ONTOPROBE_WORKDIR` environment variable overrides the directory that
//! default output paths land in.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use ontoprobe::analytics::{self, AnalyticsError};
use ontoprobe::bridge::ProverConfig;
use ontoprobe::campaign::{self, CampaignConfig, CampaignMeta, Outcome, ProverChoice};
use ontoprobe::cq;
use ontoprobe::fol::{self, AxiomMeta, LayerTag, TranslationOptions};
use ontoprobe::kif::{parse_suo_kif, Formula};
use ontoprobe::mini_prover::SaturationBudget;
use ontoprobe::tptp;

#[derive(Parser)]
#[command(
    name = "ontoprobe",
    version,
    about = "Ontology competency evaluation toolkit",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile SUO-KIF files into a TPTP FOF axiom set.
    Translate(TranslateArgs),
    /// Generate a truth/falsity test suite from lexical mapping files.
    Generate(GenerateArgs),
    /// Run a prover over a suite at one or more time limits.
    Evaluate(EvaluateArgs),
    /// Aggregate run records into an evaluation report.
    Analyze(AnalyzeArgs),
    /// Emit figure CSVs and plot data from a report.
    Report(ReportArgs),
}

#[derive(Args)]
struct TranslateArgs {
    /// Restrict translation to these files (must appear in the layer map).
    files: Vec<PathBuf>,
    /// JSON manifest assigning .kif files to ontology layers.
    #[arg(long = "layer-map", value_name = "JSON")]
    layer_map: PathBuf,
    /// Output TPTP file.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Upper bound for row-variable expansion.
    #[arg(long, default_value_t = 7)]
    max_row_arity: usize,
    /// Translation report path (default: <output>.report.json).
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Axiom metadata path (default: <output>.meta.json).
    #[arg(long, value_name = "FILE")]
    meta: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Synset-to-concept mapping TSV.
    #[arg(long, value_name = "TSV")]
    mapping: PathBuf,
    /// Antonym synset pairs TSV.
    #[arg(long, value_name = "TSV")]
    antonyms: PathBuf,
    /// Morphosemantic links CSV.
    #[arg(long, value_name = "CSV")]
    morpholinks: Option<PathBuf>,
    /// Pattern templates JSON (default: the two built-in patterns).
    #[arg(long, value_name = "JSON")]
    templates: Option<PathBuf>,
    /// Output suite JSONL.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Test suite JSONL.
    #[arg(long, value_name = "JSONL")]
    suite: PathBuf,
    /// TPTP axiom file.
    #[arg(long, value_name = "FILE")]
    axioms: PathBuf,
    /// `builtin` or `exec:<path-to-prover>`.
    #[arg(long, default_value = "builtin")]
    prover: String,
    /// Argument template for an external prover; must contain {problem}
    /// and {limit_s}.
    #[arg(long, value_name = "TEMPLATE", allow_hyphen_values = true)]
    prover_args: Option<String>,
    /// Comma-separated execution-time limits in seconds.
    #[arg(long, value_name = "SECONDS", default_value = "60,120,300,600")]
    limits: String,
    /// Worker count (default: logical cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Propagate proofs found at smaller limits to larger ones.
    #[arg(long)]
    reuse: bool,
    /// Builtin prover: given-clause step budget per run.
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
    /// Builtin prover: clause budget per run.
    #[arg(long, default_value_t = 100_000)]
    max_clauses: usize,
    /// Output run-record JSONL.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Campaign metadata path (default: <output>.meta.json).
    #[arg(long, value_name = "FILE")]
    meta: Option<PathBuf>,
    /// Directory for raw prover outputs (default: <output>.raw).
    #[arg(long, value_name = "DIR")]
    raw_dir: Option<PathBuf>,
    /// Do not persist raw prover outputs.
    #[arg(long, conflicts_with = "raw_dir")]
    no_raw: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Run-record JSONL produced by `evaluate`.
    #[arg(long, value_name = "JSONL")]
    records: PathBuf,
    /// Axiom metadata JSON produced by `translate`.
    #[arg(long = "axiom-meta", value_name = "JSON")]
    axiom_meta: PathBuf,
    /// Comma-separated limits (default: the distinct limits in the records).
    #[arg(long, value_name = "SECONDS")]
    limits: Option<String>,
    /// Output report JSON.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Report JSON produced by `analyze`.
    #[arg(long, value_name = "JSON")]
    report: PathBuf,
    /// Output directory for figure CSVs and plot data.
    #[arg(short, long, value_name = "DIR")]
    output: Option<PathBuf>,
}

enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Runtime(m) => m,
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

fn validation(message: impl Into<String>) -> CliError {
    CliError::Validation(message.into())
}

fn runtime(message: impl Into<String>) -> CliError {
    CliError::Runtime(message.into())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = dispatch(cli.command) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Translate(args) => translate(args),
        Command::Generate(args) => generate(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Analyze(args) => analyze(args),
        Command::Report(args) => report(args),
    }
}

fn workdir() -> PathBuf {
    std::env::var_os("ONTOPROBE_WORKDIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn default_output(name: &str, explicit: Option<PathBuf>) -> PathBuf {
    explicit.unwrap_or_else(|| workdir().join(name))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    path.with_file_name(name)
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| validation(format!("cannot read `{}`: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| runtime(format!("cannot create `{}`: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| runtime(format!("cannot write `{}`: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut json = serde_json::to_string_pretty(value)
        .map_err(|e| runtime(format!("cannot serialize `{}`: {e}", path.display())))?;
    json.push('\n');
    write_output(path, &json)
}

// ---------------------------------------------------------------------------
// translate
// ---------------------------------------------------------------------------

#[derive(serde::Deserialize)]
struct LayerManifest {
    layers: BTreeMap<String, Vec<PathBuf>>,
}

fn manifest_files(args: &TranslateArgs) -> Result<Vec<(PathBuf, LayerTag)>, CliError> {
    let text = read_input(&args.layer_map)?;
    let manifest: LayerManifest = serde_json::from_str(&text)
        .map_err(|e| validation(format!("bad layer map `{}`: {e}", args.layer_map.display())))?;
    let base = args.layer_map.parent().unwrap_or(Path::new("."));
    let mut files = Vec::new();
    for (layer_name, layer) in [("top", LayerTag::TopLevel), ("mid", LayerTag::MidLevel)] {
        for file in manifest.layers.get(layer_name).into_iter().flatten() {
            let resolved = if file.is_absolute() {
                file.clone()
            } else {
                base.join(file)
            };
            files.push((resolved, layer));
        }
    }
    for key in manifest.layers.keys() {
        if key != "top" && key != "mid" {
            return Err(validation(format!(
                "layer map assigns files to unknown layer `{key}` (expected `top` or `mid`)"
            )));
        }
    }
    if files.is_empty() {
        return Err(validation("layer map lists no files".to_string()));
    }

    if args.files.is_empty() {
        return Ok(files);
    }
    let mut selected = Vec::new();
    for wanted in &args.files {
        let matches: Vec<&(PathBuf, LayerTag)> = files
            .iter()
            .filter(|(path, _)| {
                path == wanted
                    || path.file_name() == wanted.file_name()
                        && wanted.parent().is_none_or(|p| p.as_os_str().is_empty())
                    || std::fs::canonicalize(path).ok()
                        == std::fs::canonicalize(wanted).ok().filter(|_| wanted.exists())
            })
            .collect();
        match matches.first() {
            Some((path, layer)) => selected.push((path.clone(), *layer)),
            None => {
                return Err(validation(format!(
                    "`{}` is not assigned to a layer in `{}`",
                    wanted.display(),
                    args.layer_map.display()
                )))
            }
        }
    }
    Ok(selected)
}

fn translate(args: TranslateArgs) -> Result<(), CliError> {
    let output = default_output("axioms.p", args.output.clone());
    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| sibling(&output, ".report.json"));
    let meta_path = args
        .meta
        .clone()
        .unwrap_or_else(|| sibling(&output, ".meta.json"));
    if args.max_row_arity == 0 {
        return Err(validation("--max-row-arity must be at least 1"));
    }

    let mut statements: Vec<(Formula, LayerTag)> = Vec::new();
    for (path, layer) in manifest_files(&args)? {
        let text = read_input(&path)?;
        let parsed = parse_suo_kif(&text)
            .map_err(|e| validation(format!("{}: {e}", path.display())))?;
        statements.extend(parsed.into_iter().map(|(f, _)| (f, layer)));
    }

    let options = TranslationOptions {
        max_row_arity: args.max_row_arity,
    };
    let (set, report) = fol::translate_ontology(&statements, &options);
    let problem = tptp::emit_problem(&set, None)
        .map_err(|e| runtime(format!("cannot emit TPTP: {e}")))?;
    write_output(&output, &problem)?;
    write_json(&meta_path, &set.metadata())?;
    write_json(&report_path, &report)?;

    let (unit, general) = set.totals();
    eprintln!(
        "translated {} statements into {} axioms ({unit} unit, {general} general); \
         {} non-logical, {} dropped",
        report.statements_in,
        set.axioms.len(),
        report.non_logical,
        report.dropped.len()
    );
    eprintln!("wrote {}, {}, {}", output.display(), meta_path.display(), report_path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let output = default_output("suite.jsonl", args.output.clone());
    let mapping = cq::load_mapping(&args.mapping).map_err(|e| validation(e.to_string()))?;
    let antonyms = cq::load_antonyms(&args.antonyms).map_err(|e| validation(e.to_string()))?;
    let morpholinks = match &args.morpholinks {
        Some(path) => cq::load_morpholinks(path).map_err(|e| validation(e.to_string()))?,
        None => Default::default(),
    };
    let templates = match &args.templates {
        Some(path) => cq::load_templates(path).map_err(|e| validation(e.to_string()))?,
        None => cq::default_templates(),
    };

    let generated = cq::generate_truth_tests(
        &mapping.entries,
        &antonyms.pairs,
        &morpholinks.links,
        &templates,
    )
    .map_err(|e| validation(e.to_string()))?;
    let falsity = cq::derive_falsity_tests(&generated.tests);
    let mut tests = generated.tests;
    let truth_count = tests.len();
    tests.extend(falsity);

    let mut buffer = Vec::new();
    cq::write_suite(&mut buffer, &tests).map_err(|e| runtime(e.to_string()))?;
    write_output(&output, &String::from_utf8(buffer).expect("suite is utf-8"))?;

    eprintln!(
        "generated {truth_count} truth-tests and {} falsity-tests ({} skipped mapping lines, \
         {} unresolved links)",
        tests.len() - truth_count,
        mapping.skipped_lines.len(),
        generated.unresolved_links
    );
    eprintln!("wrote {}", output.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

fn parse_limits(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| validation(format!("bad time limit `{part}`")))
        })
        .collect()
}

fn parse_prover(args: &EvaluateArgs) -> Result<ProverChoice, CliError> {
    if args.prover == "builtin" {
        if args.prover_args.is_some() {
            return Err(validation("--prover-args only applies to external provers"));
        }
        return Ok(ProverChoice::BuiltIn(SaturationBudget {
            max_steps: args.max_steps,
            max_clauses: args.max_clauses,
            ..Default::default()
        }));
    }
    if let Some(path) = args.prover.strip_prefix("exec:") {
        let prover_args = match &args.prover_args {
            Some(template) => template.split_whitespace().map(str::to_string).collect(),
            None => ProverConfig::default_args(),
        };
        let config = ProverConfig::new(path, prover_args);
        config.validate().map_err(validation)?;
        return Ok(ProverChoice::External(config));
    }
    Err(validation(format!(
        "unknown prover `{}` (expected `builtin` or `exec:<path>`)",
        args.prover
    )))
}

fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let output = default_output("records.jsonl", args.output.clone());
    let meta_path = args
        .meta
        .clone()
        .unwrap_or_else(|| sibling(&output, ".meta.json"));

    let tests = cq::load_suite(&args.suite).map_err(|e| validation(e.to_string()))?;
    let problem_text = read_input(&args.axioms)?;
    let problem = tptp::parse_problem(&problem_text)
        .map_err(|e| validation(format!("{}: {e}", args.axioms.display())))?;
    if problem.conjecture.is_some() {
        return Err(validation(format!(
            "`{}` already contains a conjecture; pass a plain axiom file",
            args.axioms.display()
        )));
    }

    let raw_dir = if args.no_raw {
        None
    } else {
        Some(
            args.raw_dir
                .clone()
                .unwrap_or_else(|| sibling(&output, ".raw")),
        )
    };
    let config = CampaignConfig {
        limits_s: parse_limits(&args.limits)?,
        prover: parse_prover(&args)?,
        workers: args.workers.unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }),
        reuse: args.reuse,
        raw_dir,
    };
    config
        .validate()
        .map_err(|e| validation(e.to_string()))?;

    if let Some(parent) = output.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| runtime(format!("cannot create `{}`: {e}", parent.display())))?;
        }
    }
    let records = campaign::run_campaign(&problem.axioms, &tests, &config, &output)
        .map_err(|e| runtime(e.to_string()))?;
    write_json(&meta_path, &CampaignMeta::new(&config, tests.len()))?;

    let count = |outcome: Outcome| records.iter().filter(|r| r.outcome == outcome).count();
    eprintln!(
        "{} records: {} passing, {} non-passing, {} unknown",
        records.len(),
        count(Outcome::Passing),
        count(Outcome::NonPassing),
        count(Outcome::Unknown)
    );
    eprintln!("wrote {}, {}", output.display(), meta_path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// analyze / report
// ---------------------------------------------------------------------------

fn analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let output = default_output("report.json", args.output.clone());
    let records = campaign::read_records(&args.records).map_err(|e| validation(e.to_string()))?;
    let meta_text = read_input(&args.axiom_meta)?;
    let metadata: Vec<AxiomMeta> = serde_json::from_str(&meta_text)
        .map_err(|e| validation(format!("bad axiom metadata: {e}")))?;
    let limits = match &args.limits {
        Some(text) => parse_limits(text)?,
        None => {
            let mut limits: Vec<u64> = records.iter().map(|r| r.limit_s).collect();
            limits.sort_unstable();
            limits.dedup();
            limits
        }
    };
    let report = analytics::aggregate_report(&records, &metadata, &limits).map_err(|e| match e {
        AnalyticsError::WriteFailed { .. } => runtime(e.to_string()),
        other => validation(other.to_string()),
    })?;
    write_json(&output, &report)?;
    eprintln!(
        "aggregated {} records over limits {:?}; solved at {}s: {} ({}%)",
        records.len(),
        report.limits_s,
        report.summary.max_limit_s,
        report.summary.solved_at_max,
        report.summary.solved_at_max_pct
    );
    eprintln!("wrote {}", output.display());
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), CliError> {
    let dir = default_output("report", args.output.clone());
    let text = read_input(&args.report)?;
    let report: analytics::EvaluationReport = serde_json::from_str(&text)
        .map_err(|e| validation(format!("bad report `{}`: {e}", args.report.display())))?;
    std::fs::create_dir_all(&dir)
        .map_err(|e| runtime(format!("cannot create `{}`: {e}", dir.display())))?;
    let written = analytics::emit_outputs(&report, &dir).map_err(|e| runtime(e.to_string()))?;
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    let summary = &report.summary;
    eprintln!(
        "solved {}/{} tests at {}s ({}%); {}/{} axioms used ({}%), {} unused ({}%)",
        summary.solved_at_max,
        summary.tests_total,
        summary.max_limit_s,
        summary.solved_at_max_pct,
        summary.axioms_used_at_max,
        summary.axioms_total,
        summary.axioms_used_pct,
        summary.axioms_unused,
        summary.axioms_unused_pct
    );
    Ok(())
}
