//! End-to-end checks of the compiled binary over the shipped data files.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ontoprobe"))
}

fn data(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(path)
}

fn run_ok(command: &mut Command) -> String {
    let output = command.output().expect("binary runs");
    assert!(
        output.status.success(),
        "command failed: {}\n{}",
        output.status,
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn full_pipeline_through_the_binary() {
    let inputs_before: Vec<Vec<u8>> = ["toy/top.kif", "toy/mid.kif", "cq/mapping.tsv"]
        .iter()
        .map(|p| std::fs::read(data(p)).unwrap())
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let axioms = dir.path().join("axioms.p");
    let suite = dir.path().join("suite.jsonl");
    let records = dir.path().join("records.jsonl");
    let report = dir.path().join("report.json");
    let outdir = dir.path().join("figures");

    let stderr = run_ok(bin()
        .arg("translate")
        .arg("--layer-map")
        .arg(data("toy/manifest.json"))
        .arg("-o")
        .arg(&axioms));
    assert!(stderr.contains("translated 50 statements"), "{stderr}");
    assert!(axioms.exists());
    assert!(dir.path().join("axioms.p.meta.json").exists());
    assert!(dir.path().join("axioms.p.report.json").exists());

    let stderr = run_ok(bin()
        .arg("generate")
        .arg("--mapping")
        .arg(data("cq/mapping.tsv"))
        .arg("--antonyms")
        .arg(data("cq/antonyms.tsv"))
        .arg("--morpholinks")
        .arg(data("cq/morpholinks.csv"))
        .arg("--templates")
        .arg(data("templates/default.json"))
        .arg("-o")
        .arg(&suite));
    assert!(stderr.contains("8 truth-tests and 8 falsity-tests"), "{stderr}");

    let stderr = run_ok(bin()
        .arg("evaluate")
        .arg("--suite")
        .arg(&suite)
        .arg("--axioms")
        .arg(&axioms)
        .arg("--prover")
        .arg("builtin")
        .arg("--limits")
        .arg("1,2")
        .arg("--workers")
        .arg("2")
        .arg("-o")
        .arg(&records));
    assert!(stderr.contains("32 records"), "{stderr}");

    run_ok(bin()
        .arg("analyze")
        .arg("--records")
        .arg(&records)
        .arg("--axiom-meta")
        .arg(dir.path().join("axioms.p.meta.json"))
        .arg("-o")
        .arg(&report));

    run_ok(bin()
        .arg("report")
        .arg("--report")
        .arg(&report)
        .arg("-o")
        .arg(&outdir));
    for file in ["report.json", "fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv", "usage.csv", "plot.json"] {
        assert!(outdir.join(file).exists(), "missing {file}");
    }

    // Commands are idempotent on identical inputs: re-running evaluate
    // skips completed pairs and the records file does not grow.
    let before = std::fs::read_to_string(&records).unwrap();
    run_ok(bin()
        .arg("evaluate")
        .arg("--suite")
        .arg(&suite)
        .arg("--axioms")
        .arg(&axioms)
        .arg("--prover")
        .arg("builtin")
        .arg("--limits")
        .arg("1,2")
        .arg("-o")
        .arg(&records));
    let after = std::fs::read_to_string(&records).unwrap();
    assert_eq!(before, after);

    // Inputs are never mutated.
    let inputs_after: Vec<Vec<u8>> = ["toy/top.kif", "toy/mid.kif", "cq/mapping.tsv"]
        .iter()
        .map(|p| std::fs::read(data(p)).unwrap())
        .collect();
    assert_eq!(inputs_before, inputs_after);
}

#[test]
fn unknown_subcommand_exits_one_with_usage() {
    let output = bin().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("Usage"), "{stderr}");
}

#[test]
fn missing_input_is_a_validation_failure() {
    let output = bin()
        .arg("translate")
        .arg("--layer-map")
        .arg("/nonexistent/manifest.json")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn bad_limits_are_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.jsonl");
    let axioms = dir.path().join("axioms.p");
    std::fs::write(
        &suite,
        "{\"id\":\"t-1\",\"kind\":\"truth\",\"conjecture\":\"p(a)\",\"pattern\":\"x\",\"source\":\"\"}\n",
    )
    .unwrap();
    std::fs::write(&axioms, "fof(a1, axiom, p(a)).\n").unwrap();
    let output = bin()
        .arg("evaluate")
        .arg("--suite")
        .arg(&suite)
        .arg("--axioms")
        .arg(&axioms)
        .arg("--limits")
        .arg("5,1")
        .arg("-o")
        .arg(dir.path().join("records.jsonl"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unwritable_output_is_a_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "not a directory").unwrap();
    let output = bin()
        .arg("translate")
        .arg("--layer-map")
        .arg(data("toy/manifest.json"))
        .arg("-o")
        .arg(blocker.join("axioms.p"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn workdir_env_var_sets_default_outputs() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(bin()
        .env("ONTOPROBE_WORKDIR", dir.path())
        .arg("translate")
        .arg("--layer-map")
        .arg(data("toy/manifest.json")));
    assert!(dir.path().join("axioms.p").exists());
}

#[test]
fn translate_accepts_positional_file_selection() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("top_only.p");
    run_ok(bin()
        .arg("translate")
        .arg("top.kif")
        .arg("--layer-map")
        .arg(data("toy/manifest.json"))
        .arg("-o")
        .arg(&out));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("top_0001"));
    assert!(!text.contains("mid_0001"));

    let output = bin()
        .arg("translate")
        .arg("elsewhere.kif")
        .arg("--layer-map")
        .arg(data("toy/manifest.json"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn evaluate_rejects_axiom_files_with_conjectures(){
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.jsonl");
    let axioms = dir.path().join("axioms.p");
    std::fs::write(
        &suite,
        "{\"id\":\"t-1\",\"kind\":\"truth\",\"conjecture\":\"p(a)\",\"pattern\":\"x\",\"source\":\"\"}\n",
    )
    .unwrap();
    std::fs::write(&axioms, "fof(a1, axiom, p(a)).\nfof(goal, conjecture, p(a)).\n").unwrap();
    let output = bin()
        .arg("evaluate")
        .arg("--suite")
        .arg(&suite)
        .arg("--axioms")
        .arg(&axioms)
        .arg("--limits")
        .arg("1")
        .arg("-o")
        .arg(dir.path().join("records.jsonl"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
#[allow(clippy::suspicious_command_arg_space)] // the template is one CLI value by design
fn external_prover_path_produces_error_records_not_crashes() {
    // A fake prover that always reports CounterSatisfiable exercises the
    // external bridge wiring without a real ATP installed.
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.jsonl");
    let axioms = dir.path().join("axioms.p");
    std::fs::write(
        &suite,
        "{\"id\":\"t-1\",\"kind\":\"truth\",\"conjecture\":\"q(a)\",\"pattern\":\"x\",\"source\":\"\"}\n",
    )
    .unwrap();
    std::fs::write(&axioms, "fof(a1, axiom, p(a)).\n").unwrap();
    let records = dir.path().join("records.jsonl");
    run_ok(bin()
        .arg("evaluate")
        .arg("--suite")
        .arg(&suite)
        .arg("--axioms")
        .arg(&axioms)
        .arg("--prover")
        .arg("exec:sh")
        .arg("--prover-args")
        .arg("-c echo_{limit_s}_{problem}")
        .arg("--limits")
        .arg("1")
        .arg("-o")
        .arg(&records));
    let text = std::fs::read_to_string(&records).unwrap();
    assert!(text.contains("\"verdict\":\"prover_error\""), "{text}");
    assert!(text.contains("\"outcome\":\"unknown\""), "{text}");
}
