//! Toolkit for evaluating the competency of a first-order ontology.
//!
//! The pipeline has five stages, each usable on its own:
//!
//! 1. [`kif`] parses SUO-KIF text into a formula AST.
//! 2. [`fol`] compiles parsed statements into a stratified first-order
//!    axiom set and [`tptp`] renders it as TPTP FOF problems.
//! 3. [`cq`] generates truth/falsity competency-question suites from
//!    lexical mapping resources.
//! 4. [`bridge`] drives an external refutation prover under a time limit,
//!    while [`mini_prover`] is a built-in resolution prover good enough
//!    for desk-scale problems; [`campaign`] runs either across a suite.
//! 5. [`analytics`] aggregates run records into report series and
//!    axiom-usage statistics.

pub mod analytics;
pub mod bridge;
pub mod campaign;
pub mod cq;
pub mod fol;
pub mod kif;
pub mod mini_prover;
pub mod tptp;
pub mod verdict;
