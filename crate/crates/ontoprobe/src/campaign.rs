//! Outcome classification and campaign orchestration across test suites
//! and time limits.
//!
//! A campaign runs every (test, limit) pair. By default each pair is run
//! independently, matching per-limit reporting; `reuse` mode propagates a
//! proof found at a smaller limit to the larger ones without re-proving.
//! Records are appended to a JSON Lines file one complete line at a time,
//! so an interrupted campaign resumes by skipping the pairs already on
//! disk.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Mutex;
use std::time::Duration;

use crate::bridge::{self, ProverConfig};
use crate::cq::{TestCase, TestKind};
use crate::kif::Formula;
use crate::mini_prover::{PreparedProblem, SaturationBudget};
use crate::tptp;
use crate::verdict::Verdict;

/// The paper-style trichotomy over prover results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Passing,
    NonPassing,
    Unknown,
}

/// A truth-test passes when a proof is found; a falsity-test is
/// non-passing when a proof is found; without a proof within the limit
/// the outcome is unknown either way. Prover errors stay unknown and are
/// flagged on the record.
pub fn classify_outcome(kind: TestKind, verdict: &Verdict) -> Outcome {
    match (kind, verdict) {
        (TestKind::Truth, Verdict::ProofFound(_)) => Outcome::Passing,
        (TestKind::Falsity, Verdict::ProofFound(_)) => Outcome::NonPassing,
        (_, Verdict::NoProofWithinLimit { .. }) => Outcome::Unknown,
        (_, Verdict::ProverError(_)) => Outcome::Unknown,
    }
}

#[derive(Debug, Clone)]
pub enum ProverChoice {
    BuiltIn(SaturationBudget),
    External(ProverConfig),
}

impl ProverChoice {
    pub fn describe(&self) -> String {
        match self {
            ProverChoice::BuiltIn(budget) => format!(
                "builtin (max_clauses={}, max_steps={})",
                budget.max_clauses, budget.max_steps
            ),
            ProverChoice::External(config) => format!(
                "{} {}",
                config.executable.display(),
                config.args.join(" ")
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    /// Strictly increasing execution-time limits in seconds.
    pub limits_s: Vec<u64>,
    pub prover: ProverChoice,
    pub workers: usize,
    /// Propagate a proof found at limit L to every larger limit without
    /// re-running.
    pub reuse: bool,
    /// Persist each run's raw prover output under this directory, one
    /// file per (test, limit), so traces can be replayed offline.
    pub raw_dir: Option<std::path::PathBuf>,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), CampaignError> {
        if self.limits_s.is_empty() {
            return Err(CampaignError::BadConfig("no time limits given".into()));
        }
        if !self.limits_s.windows(2).all(|w| w[0] < w[1]) {
            return Err(CampaignError::BadConfig(
                "time limits must be strictly increasing".into(),
            ));
        }
        if self.limits_s.contains(&0) {
            return Err(CampaignError::BadConfig("time limits must be positive".into()));
        }
        if self.workers == 0 {
            return Err(CampaignError::BadConfig("worker count must be positive".into()));
        }
        if let ProverChoice::External(config) = &self.prover {
            config.validate().map_err(CampaignError::BadConfig)?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CampaignError {
    #[error("invalid campaign configuration: {0}")]
    BadConfig(String),
    #[error("the test suite is empty")]
    EmptySuite,
    #[error("cannot prepare the axiom set: {0}")]
    BadAxioms(String),
    #[error("cannot write records to `{path}`: {message}")]
    RecordSink { path: String, message: String },
    #[error("cannot read records from `{path}`: {message}")]
    RecordSource { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictClass {
    ProofFound,
    NoProof,
    ProverError,
}

/// One prover invocation's persisted result.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunRecord {
    pub test_id: String,
    pub kind: TestKind,
    pub limit_s: u64,
    pub verdict: VerdictClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reused: bool,
    pub outcome: Outcome,
    pub used_axioms: Vec<String>,
    pub cpu_ms: u64,
}

impl RunRecord {
    pub fn from_verdict(test: &TestCase, limit_s: u64, verdict: &Verdict, reused: bool) -> Self {
        let (class, used, error) = match verdict {
            Verdict::ProofFound(trace) => (
                VerdictClass::ProofFound,
                trace.used_axioms.iter().cloned().collect::<Vec<_>>(),
                None,
            ),
            Verdict::NoProofWithinLimit { .. } => (VerdictClass::NoProof, Vec::new(), None),
            Verdict::ProverError(message) => {
                (VerdictClass::ProverError, Vec::new(), Some(message.clone()))
            }
        };
        RunRecord {
            test_id: test.id.clone(),
            kind: test.kind,
            limit_s,
            verdict: class,
            flag: verdict.flag().map(str::to_string),
            error,
            reused,
            outcome: classify_outcome(test.kind, verdict),
            used_axioms: used,
            cpu_ms: verdict.cpu_ms(),
        }
    }
}

/// Campaign metadata persisted next to the records.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct CampaignMeta {
    pub tool_version: String,
    pub prover: String,
    pub host: String,
    pub limits_s: Vec<u64>,
    pub workers: usize,
    pub reuse: bool,
    pub tests: usize,
}

impl CampaignMeta {
    pub fn new(config: &CampaignConfig, tests: usize) -> Self {
        let host = std::env::var("HOSTNAME").unwrap_or_else(|_| "unknown-host".to_string());
        CampaignMeta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            prover: config.prover.describe(),
            host: format!("{host} ({} {})", std::env::consts::OS, std::env::consts::ARCH),
            limits_s: config.limits_s.clone(),
            workers: config.workers,
            reuse: config.reuse,
            tests,
        }
    }
}

pub fn read_records(path: &Path) -> Result<Vec<RunRecord>, CampaignError> {
    let source_err = |message: String| CampaignError::RecordSource {
        path: path.display().to_string(),
        message,
    };
    let file = std::fs::File::open(path).map_err(|e| source_err(e.to_string()))?;
    let mut records = Vec::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| source_err(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RunRecord = serde_json::from_str(&line)
            .map_err(|e| source_err(format!("line {}: {e}", i + 1)))?;
        records.push(record);
    }
    Ok(records)
}

struct RecordSink {
    writer: Mutex<std::io::BufWriter<std::fs::File>>,
}

impl RecordSink {
    fn open(path: &Path) -> Result<RecordSink, CampaignError> {
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| CampaignError::RecordSink {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        Ok(RecordSink {
            writer: Mutex::new(std::io::BufWriter::new(file)),
        })
    }

    /// One full line per record, flushed immediately, so a crash never
    /// leaves a torn record.
    fn append(&self, record: &RunRecord) -> Result<(), CampaignError> {
        let json = serde_json::to_string(record).expect("record serializes");
        let mut writer = self.writer.lock().unwrap();
        writeln!(writer, "{json}")
            .and_then(|_| writer.flush())
            .map_err(|e| CampaignError::RecordSink {
                path: "records".to_string(),
                message: e.to_string(),
            })
    }
}

enum ProverBackend {
    BuiltIn {
        prepared: PreparedProblem,
        budget: SaturationBudget,
    },
    External {
        config: ProverConfig,
        axioms: Vec<(String, Formula)>,
        axiom_names: BTreeSet<String>,
    },
}

impl ProverBackend {
    fn run(&self, test: &TestCase, limit_s: u64) -> Verdict {
        match self {
            ProverBackend::BuiltIn { prepared, budget } => {
                let budget = budget
                    .clone()
                    .with_wall_limit(Duration::from_secs(limit_s));
                match prepared.prove(&test.conjecture, &budget) {
                    Ok(verdict) => verdict,
                    Err(e) => Verdict::ProverError(e.to_string()),
                }
            }
            ProverBackend::External {
                config,
                axioms,
                axiom_names,
            } => {
                let problem = match tptp::emit_problem_units(
                    axioms,
                    Some(("goal", &test.conjecture)),
                ) {
                    Ok(problem) => problem,
                    Err(e) => return Verdict::ProverError(e.to_string()),
                };
                bridge::run_external_with_names(&problem, config, limit_s, axiom_names)
            }
        }
    }
}

/// Run every (test, limit) pair, appending records to `records_path` and
/// returning the complete record set sorted by (test id, limit).
///
/// Pairs already present in the records file are skipped, which makes an
/// interrupted campaign resumable and a completed one idempotent.
pub fn run_campaign(
    axioms: &[(String, Formula)],
    tests: &[TestCase],
    config: &CampaignConfig,
    records_path: &Path,
) -> Result<Vec<RunRecord>, CampaignError> {
    config.validate()?;
    if tests.is_empty() {
        return Err(CampaignError::EmptySuite);
    }

    let mut existing: BTreeMap<(String, u64), RunRecord> = BTreeMap::new();
    if records_path.exists() {
        for record in read_records(records_path)? {
            existing.insert((record.test_id.clone(), record.limit_s), record);
        }
    }
    if let Some(raw_dir) = &config.raw_dir {
        std::fs::create_dir_all(raw_dir).map_err(|e| CampaignError::RecordSink {
            path: raw_dir.display().to_string(),
            message: e.to_string(),
        })?;
    }

    let backend = match &config.prover {
        ProverChoice::BuiltIn(budget) => ProverBackend::BuiltIn {
            prepared: PreparedProblem::new(axioms.to_vec())
                .map_err(|e| CampaignError::BadAxioms(e.to_string()))?,
            budget: budget.clone(),
        },
        ProverChoice::External(prover_config) => ProverBackend::External {
            config: prover_config.clone(),
            axioms: axioms.to_vec(),
            axiom_names: axioms.iter().map(|(n, _)| n.clone()).collect(),
        },
    };

    let sink = RecordSink::open(records_path)?;
    let queue: Mutex<VecDeque<usize>> = Mutex::new((0..tests.len()).collect());
    let results: Mutex<Vec<RunRecord>> = Mutex::new(Vec::with_capacity(tests.len() * config.limits_s.len()));
    let failure: Mutex<Option<CampaignError>> = Mutex::new(None);

    let workers = config.workers.min(tests.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = match queue.lock().unwrap().pop_front() {
                    Some(index) => index,
                    None => return,
                };
                let test = &tests[index];
                let mut proof_to_reuse: Option<RunRecord> = None;
                for &limit in &config.limits_s {
                    let key = (test.id.clone(), limit);
                    let record = if let Some(done) = existing.get(&key) {
                        done.clone()
                    } else if let (true, Some(previous)) = (config.reuse, &proof_to_reuse) {
                        let mut reused = previous.clone();
                        reused.limit_s = limit;
                        reused.reused = true;
                        if let Err(e) = sink.append(&reused) {
                            *failure.lock().unwrap() = Some(e);
                            return;
                        }
                        reused
                    } else {
                        let verdict = backend.run(test, limit);
                        if let Some(raw_dir) = &config.raw_dir {
                            let raw = match &verdict {
                                Verdict::ProofFound(trace) => trace.raw_output.as_str(),
                                Verdict::NoProofWithinLimit { raw_output, .. } => raw_output,
                                Verdict::ProverError(message) => message,
                            };
                            let path = raw_dir.join(format!("{}_{limit}s.txt", test.id));
                            let _ = std::fs::write(path, raw);
                        }
                        let record = RunRecord::from_verdict(test, limit, &verdict, false);
                        if let Err(e) = sink.append(&record) {
                            *failure.lock().unwrap() = Some(e);
                            return;
                        }
                        record
                    };
                    if record.verdict == VerdictClass::ProofFound {
                        proof_to_reuse.get_or_insert_with(|| record.clone());
                    }
                    results.lock().unwrap().push(record);
                }
            });
        }
    });

    if let Some(error) = failure.into_inner().unwrap() {
        return Err(error);
    }
    let mut records = results.into_inner().unwrap();
    records.sort_by(|a, b| (&a.test_id, a.limit_s).cmp(&(&b.test_id, b.limit_s)));
    Ok(records)
}
