//! External refutation prover bridge: problem files in, SZS verdicts and
//! used-axiom sets out.
//!
//! The SZS status line is the single source of truth for verdicts; exit
//! codes are advisory because provers disagree about them. Raw output is
//! returned with every verdict so analytics can be replayed from stored
//! runs.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use regex::Regex;

use crate::cq::TestCase;
use crate::fol::AxiomSet;
use crate::tptp::{self, TptpError};
use crate::verdict::{NoProofFlag, ProofTrace, Verdict};

/// Extra wall-clock time a prover gets past its soft limit before the
/// process is killed.
const GRACE: Duration = Duration::from_secs(5);

pub const PROBLEM_PLACEHOLDER: &str = "{problem}";
pub const LIMIT_PLACEHOLDER: &str = "{limit_s}";

/// How to invoke an external prover. The argument template must mention
/// both `{problem}` and `{limit_s}`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ProverConfig {
    pub executable: PathBuf,
    pub args: Vec<String>,
}

impl ProverConfig {
    pub fn new(executable: impl Into<PathBuf>, args: Vec<String>) -> Self {
        ProverConfig {
            executable: executable.into(),
            args,
        }
    }

    /// Vampire-style default arguments.
    pub fn default_args() -> Vec<String> {
        vec![
            "--proof".into(),
            "tptp".into(),
            "--output_axiom_names".into(),
            "on".into(),
            "--time_limit".into(),
            LIMIT_PLACEHOLDER.into(),
            PROBLEM_PLACEHOLDER.into(),
        ]
    }

    pub fn validate(&self) -> Result<(), String> {
        for placeholder in [PROBLEM_PLACEHOLDER, LIMIT_PLACEHOLDER] {
            if !self.args.iter().any(|a| a.contains(placeholder)) {
                return Err(format!("argument template is missing `{placeholder}`"));
            }
        }
        Ok(())
    }

    fn substituted(&self, problem_path: &str, limit_s: u64) -> Vec<String> {
        self.args
            .iter()
            .map(|a| {
                a.replace(PROBLEM_PLACEHOLDER, problem_path)
                    .replace(LIMIT_PLACEHOLDER, &limit_s.to_string())
            })
            .collect()
    }
}

/// Build a self-contained problem: every axiom plus exactly one conjecture
/// line. Byte-identical for identical inputs.
pub fn build_problem(axioms: &AxiomSet, test: &TestCase) -> Result<String, TptpError> {
    tptp::emit_problem(axioms, Some(&test.conjecture))
}

fn szs_status(raw: &str) -> Option<&str> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"SZS\s+status[:\s]+([A-Za-z]+)").unwrap());
    re.captures(raw).map(|c| c.get(1).unwrap().as_str())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("prover claimed a proof but printed no parseable derivation")]
pub struct NoDerivationFound;

fn unquote(token: &str) -> String {
    if token.len() >= 2 && token.starts_with('\'') && token.ends_with('\'') {
        let inner = &token[1..token.len() - 1];
        let mut out = String::with_capacity(inner.len());
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                if let Some(escaped) = chars.next() {
                    out.push(escaped);
                }
            } else {
                out.push(c);
            }
        }
        out
    } else {
        token.to_string()
    }
}

/// Extract every submitted axiom name referenced in a derivation.
///
/// Both Vampire-style and E-style annotations are covered: `file(<path>,
/// <name>)` source annotations and `fof`/`cnf` unit names. The conjecture
/// never appears because its name is not in `axiom_names`.
pub fn extract_used_axioms(
    raw: &str,
    axiom_names: &BTreeSet<String>,
) -> Result<BTreeSet<String>, NoDerivationFound> {
    static UNIT_RE: OnceLock<Regex> = OnceLock::new();
    static FILE_RE: OnceLock<Regex> = OnceLock::new();
    let unit_re = UNIT_RE.get_or_init(|| {
        Regex::new(r"\b(?:fof|cnf|tff)\s*\(\s*('(?:[^'\\]|\\.)*'|[A-Za-z0-9_$]+)\s*,").unwrap()
    });
    let file_re = FILE_RE.get_or_init(|| {
        Regex::new(r"\bfile\s*\(\s*[^,()]*,\s*('(?:[^'\\]|\\.)*'|[A-Za-z0-9_$]+)\s*\)").unwrap()
    });

    if !unit_re.is_match(raw) {
        return Err(NoDerivationFound);
    }
    let mut used = BTreeSet::new();
    for re in [unit_re, file_re] {
        for captures in re.captures_iter(raw) {
            let name = unquote(captures.get(1).unwrap().as_str());
            if axiom_names.contains(&name) {
                used.insert(name);
            }
        }
    }
    Ok(used)
}

fn capture_stream(stream: Option<impl Read + Send + 'static>) -> std::thread::JoinHandle<String> {
    std::thread::spawn(move || {
        let mut buffer = String::new();
        if let Some(mut stream) = stream {
            let _ = stream.read_to_string(&mut buffer);
        }
        buffer
    })
}

/// Invoke the external prover on problem text under a soft time limit.
///
/// SZS Theorem/Unsatisfiable map to `ProofFound`; Timeout, GaveUp and
/// ResourceOut map to `NoProofWithinLimit`; CounterSatisfiable maps to
/// `NoProofWithinLimit` flagged `countermodel`. Output without an SZS line
/// is a `ProverError`, except when this harness killed the process at
/// `limit_s` + grace, which is reported as running out of time.
pub fn run_external(problem: &str, config: &ProverConfig, limit_s: u64) -> Verdict {
    if let Err(message) = config.validate() {
        return Verdict::ProverError(message);
    }
    if limit_s == 0 {
        return Verdict::ProverError("time limit must be positive".to_string());
    }

    let mut file = match tempfile::Builder::new()
        .prefix("ontoprobe_")
        .suffix(".p")
        .tempfile()
    {
        Ok(file) => file,
        Err(e) => return Verdict::ProverError(format!("cannot create problem file: {e}")),
    };
    if let Err(e) = file.write_all(problem.as_bytes()).and_then(|_| file.flush()) {
        return Verdict::ProverError(format!("cannot write problem file: {e}"));
    }
    let problem_path = file.path().to_string_lossy().into_owned();

    let start = Instant::now();
    let mut command = Command::new(&config.executable);
    command
        .args(config.substituted(&problem_path, limit_s))
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    // Put the prover in its own process group so that killing it on
    // timeout also reaps any helpers it spawned; otherwise an orphan
    // holding the pipe would block output collection.
    #[cfg(unix)]
    {
        use std::os::unix::process::CommandExt;
        command.process_group(0);
    }
    let mut child = match command.spawn() {
        Ok(child) => child,
        Err(e) => {
            return Verdict::ProverError(format!(
                "cannot spawn `{}`: {e}",
                config.executable.display()
            ))
        }
    };

    let stdout = capture_stream(child.stdout.take());
    let stderr = capture_stream(child.stderr.take());
    let deadline = Duration::from_secs(limit_s) + GRACE;
    let mut killed = false;
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Ok(status),
            Ok(None) => {
                if start.elapsed() >= deadline {
                    killed = true;
                    #[cfg(unix)]
                    unsafe {
                        libc::killpg(child.id() as i32, libc::SIGKILL);
                    }
                    let _ = child.kill();
                    break child.wait();
                }
                std::thread::sleep(Duration::from_millis(20));
            }
            Err(e) => break Err(e),
        }
    };
    let cpu_ms = start.elapsed().as_millis() as u64;
    let mut raw = stdout.join().unwrap_or_default();
    raw.push_str(&stderr.join().unwrap_or_default());

    let status = match status {
        Ok(status) => status,
        Err(e) => return Verdict::ProverError(format!("wait failed: {e}")),
    };

    match szs_status(&raw) {
        Some("Theorem") | Some("Unsatisfiable") | Some("ContradictoryAxioms") => {
            // Name attribution happens in `run_external_with_names`; here
            // we only record whether a derivation is present at all.
            let incomplete = extract_used_axioms(&raw, &BTreeSet::new()).is_err();
            Verdict::ProofFound(ProofTrace {
                used_axioms: BTreeSet::new(),
                raw_output: raw,
                cpu_ms,
                incomplete,
            })
        }
        Some("Timeout") | Some("TimeOut") | Some("ResourceOut") | Some("MemoryOut")
        | Some("GaveUp") | Some("Unknown") | Some("Incomplete") => Verdict::NoProofWithinLimit {
            flag: None,
            raw_output: raw,
            cpu_ms,
        },
        Some("CounterSatisfiable") | Some("Satisfiable") => Verdict::NoProofWithinLimit {
            flag: Some(NoProofFlag::Countermodel),
            raw_output: raw,
            cpu_ms,
        },
        Some(other) => Verdict::ProverError(format!("unexpected SZS status `{other}`")),
        None if killed => Verdict::NoProofWithinLimit {
            flag: None,
            raw_output: raw,
            cpu_ms,
        },
        None => Verdict::ProverError(format!(
            "no SZS status line (exit {})",
            status
                .code()
                .map(|c| c.to_string())
                .unwrap_or_else(|| "signal".to_string())
        )),
    }
}

/// Run the prover and attribute the proof to the submitted axiom names.
pub fn run_external_with_names(
    problem: &str,
    config: &ProverConfig,
    limit_s: u64,
    axiom_names: &BTreeSet<String>,
) -> Verdict {
    match run_external(problem, config, limit_s) {
        Verdict::ProofFound(mut trace) => {
            match extract_used_axioms(&trace.raw_output, axiom_names) {
                Ok(used) => {
                    trace.used_axioms = used;
                    trace.incomplete = false;
                }
                Err(NoDerivationFound) => {
                    trace.used_axioms = BTreeSet::new();
                    trace.incomplete = true;
                }
            }
            Verdict::ProofFound(trace)
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kif::Term;

    const VAMPIRE_FIXTURE: &str = include_str!("../tests/fixtures/vampire_proof.txt");

    fn names(list: &[&str]) -> BTreeSet<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn szs_status_mapping_examples() {
        assert_eq!(szs_status("% SZS status Theorem for x"), Some("Theorem"));
        assert_eq!(szs_status("% SZS status Timeout for x"), Some("Timeout"));
        assert_eq!(szs_status("nothing here"), None);
    }

    #[test]
    fn extracts_axioms_from_vampire_fixture() {
        // Hand audit of tests/fixtures/vampire_proof.txt: the derivation
        // cites exactly these five submitted axioms plus the conjecture.
        let submitted = names(&[
            "meta_instance_subclass",
            "meta_disjoint_instances",
            "top_0003",
            "top_0009",
            "mid_0007",
            "mid_0012",
            "fo_bridge_part_2",
        ]);
        let used = extract_used_axioms(VAMPIRE_FIXTURE, &submitted).unwrap();
        assert_eq!(
            used,
            names(&[
                "meta_instance_subclass",
                "meta_disjoint_instances",
                "top_0003",
                "top_0009",
                "mid_0012",
            ])
        );
    }

    #[test]
    fn conjecture_only_derivation_yields_empty_set() {
        let raw = "% SZS status Theorem\nfof(f1, conjecture, p, file('problem.p', goal)).\n";
        let used = extract_used_axioms(raw, &names(&["a1", "a2"])).unwrap();
        assert!(used.is_empty());
    }

    #[test]
    fn no_derivation_is_distinguished() {
        let raw = "% SZS status Theorem\n";
        assert_eq!(
            extract_used_axioms(raw, &names(&["a1"])),
            Err(NoDerivationFound)
        );
    }

    #[test]
    fn e_style_unit_names_are_recognized() {
        let raw = "\
# SZS status Theorem
fof(rule, axiom, ![X]:(p(X)=>q(X)), file('problem.p', rule)).
fof(fact, axiom, p(a), file('problem.p', fact)).
cnf(c_0_3, plain, (q(a)), inference(spm,[status(thm)],[rule,fact])).
";
        let used = extract_used_axioms(raw, &names(&["rule", "fact", "unused"])).unwrap();
        assert_eq!(used, names(&["rule", "fact"]));
    }

    #[test]
    fn quoted_axiom_names_are_unquoted() {
        let raw = "% SZS status Theorem\nfof(f1, axiom, p, file('problem.p', 'fo_bridge_Part_2')).\n";
        let used = extract_used_axioms(raw, &names(&["fo_bridge_Part_2"])).unwrap();
        assert_eq!(used, names(&["fo_bridge_Part_2"]));
    }

    #[test]
    fn replay_from_stored_output_is_deterministic() {
        let submitted = names(&["meta_instance_subclass", "top_0003", "mid_0012"]);
        let a = extract_used_axioms(VAMPIRE_FIXTURE, &submitted).unwrap();
        let b = extract_used_axioms(VAMPIRE_FIXTURE, &submitted).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_template_must_contain_both_placeholders() {
        let config = ProverConfig::new("/bin/true", vec!["{problem}".into()]);
        assert!(config.validate().is_err());
        let config = ProverConfig::new("/bin/true", ProverConfig::default_args());
        assert!(config.validate().is_ok());
    }

    #[test]
    fn spawn_failure_is_a_prover_error() {
        let config = ProverConfig::new(
            "/nonexistent/prover-binary",
            vec!["{problem}".into(), "{limit_s}".into()],
        );
        match run_external("fof(a, axiom, p).\n", &config, 1) {
            Verdict::ProverError(message) => assert!(message.contains("spawn"), "{message}"),
            other => panic!("expected ProverError, got {other:?}"),
        }
    }

    #[test]
    fn missing_szs_line_is_a_prover_error() {
        // `true` exits 0 without printing anything SZS-like.
        let config = ProverConfig::new(
            "true",
            vec!["{problem}".into(), "{limit_s}".into()],
        );
        match run_external("fof(a, axiom, p).\n", &config, 1) {
            Verdict::ProverError(message) => assert!(message.contains("SZS"), "{message}"),
            other => panic!("expected ProverError, got {other:?}"),
        }
    }

    #[test]
    fn scripted_prover_statuses_map_to_verdicts() {
        let fake = |status: &str| {
            ProverConfig::new(
                "sh",
                vec![
                    "-c".into(),
                    format!("echo '% SZS status {status} for {{limit_s}}' # {{problem}}"),
                ],
            )
        };
        let problem = "fof(a, axiom, p).\n";
        assert!(matches!(
            run_external(problem, &fake("Timeout"), 1),
            Verdict::NoProofWithinLimit { flag: None, .. }
        ));
        assert!(matches!(
            run_external(problem, &fake("CounterSatisfiable"), 1),
            Verdict::NoProofWithinLimit {
                flag: Some(NoProofFlag::Countermodel),
                ..
            }
        ));
        match run_external(problem, &fake("Theorem"), 1) {
            Verdict::ProofFound(trace) => assert!(trace.incomplete),
            other => panic!("expected proof, got {other:?}"),
        }
    }

    #[test]
    fn deadline_kill_is_recorded_as_running_out_of_time() {
        // The fake prover outlives the limit and even leaves a child
        // holding the pipe; the harness must kill the whole group at
        // limit + grace and report a timeout, not hang or error.
        let config = ProverConfig::new(
            "sh",
            vec![
                "-c".into(),
                "sleep 60 # {problem} {limit_s}".into(),
            ],
        );
        let start = std::time::Instant::now();
        let verdict = run_external("fof(a, axiom, p).\n", &config, 1);
        assert!(
            start.elapsed() < Duration::from_secs(30),
            "kill did not take effect"
        );
        assert!(
            matches!(verdict, Verdict::NoProofWithinLimit { flag: None, .. }),
            "expected a timeout verdict, got {verdict:?}"
        );
    }

    #[test]
    fn build_problem_has_one_conjecture_line() {
        use crate::cq::{TestCase, TestKind};
        use crate::fol::{translate_ontology, TranslationOptions};
        use crate::kif::{parse_suo_kif, Formula};

        let statements: Vec<(Formula, crate::fol::LayerTag)> =
            parse_suo_kif("(instance a A) (subclass A B)")
                .unwrap()
                .into_iter()
                .map(|(f, _)| (f, crate::fol::LayerTag::TopLevel))
                .collect();
        let (set, _) = translate_ontology(&statements, &TranslationOptions::default());
        let test = TestCase {
            id: "t-x-0001".into(),
            kind: TestKind::Truth,
            conjecture: Formula::atom("instance", vec![Term::constant("a"), Term::constant("B")]),
            pattern: "x".into(),
            source: "fixture".into(),
        };
        let problem = build_problem(&set, &test).unwrap();
        let axiom_lines = problem.lines().filter(|l| l.contains(", axiom,")).count();
        let conjecture_lines = problem.lines().filter(|l| l.contains(", conjecture,")).count();
        assert_eq!(axiom_lines, set.axioms.len());
        assert_eq!(conjecture_lines, 1);
        // Determinism.
        assert_eq!(problem, build_problem(&set, &test).unwrap());
    }
}
