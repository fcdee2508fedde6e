//! Prover verdicts shared by the external bridge and the built-in prover.

use std::collections::BTreeSet;

/// Why a prover stopped without a proof, when it could tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoProofFlag {
    /// The prover reported a countermodel (SZS CounterSatisfiable).
    Countermodel,
    /// The clause set was saturated without deriving the empty clause.
    /// For equality-free inputs this certifies non-entailment.
    Saturated,
}

/// Evidence extracted from a successful refutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    /// Names of submitted axioms referenced by the derivation, conjecture
    /// excluded.
    pub used_axioms: BTreeSet<String>,
    /// Verbatim prover output, persisted for replayable analytics.
    pub raw_output: String,
    pub cpu_ms: u64,
    /// Set when the prover claimed a proof but printed no parseable
    /// derivation; `used_axioms` is empty in that case.
    pub incomplete: bool,
}

/// Result of one prover invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    ProofFound(ProofTrace),
    NoProofWithinLimit {
        flag: Option<NoProofFlag>,
        raw_output: String,
        cpu_ms: u64,
    },
    ProverError(String),
}

impl Verdict {
    pub fn is_proof(&self) -> bool {
        matches!(self, Verdict::ProofFound(_))
    }

    pub fn cpu_ms(&self) -> u64 {
        match self {
            Verdict::ProofFound(trace) => trace.cpu_ms,
            Verdict::NoProofWithinLimit { cpu_ms, .. } => *cpu_ms,
            Verdict::ProverError(_) => 0,
        }
    }

    /// Flag string persisted in run records, if any.
    pub fn flag(&self) -> Option<&'static str> {
        match self {
            Verdict::ProofFound(_) => None,
            Verdict::NoProofWithinLimit { flag, .. } => match flag {
                Some(NoProofFlag::Countermodel) => Some("countermodel"),
                Some(NoProofFlag::Saturated) => Some("saturated"),
                None => None,
            },
            Verdict::ProverError(_) => Some("error"),
        }
    }
}
