//! Shared test support: a brute-force Herbrand-model enumeration oracle
//! for entailment over the function-free universal fragment.
#![allow(dead_code)] // each test binary uses its own slice of this module
//!
//! The oracle evaluates the original formulas semantically over every
//! interpretation of the ground atoms built from the problem's constants.
//! It shares no code with the clausifier or the saturation loop, so it is
//! an independent check on the prover's decisions.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use ontoprobe::kif::{Formula, Term};

/// Repository data directory, resolved relative to the crate.
pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn collect_signature(
    f: &Formula,
    predicates: &mut BTreeSet<(String, usize)>,
    constants: &mut BTreeSet<String>,
) -> bool {
    fn term_ok(term: &Term, constants: &mut BTreeSet<String>) -> bool {
        match term {
            Term::Constant(name) => {
                constants.insert(name.clone());
                true
            }
            Term::Variable(_) => true,
            // Functions would need an infinite Herbrand universe.
            Term::RowVariable(_) | Term::Compound(..) => false,
        }
    }
    match f {
        Formula::Atom { predicate, args } => {
            let name = match predicate {
                Term::Constant(name) => name.clone(),
                _ => return false,
            };
            predicates.insert((name, args.len()));
            args.iter().all(|a| term_ok(a, constants))
        }
        Formula::Equal(..) => false,
        Formula::Not(inner) => collect_signature(inner, predicates, constants),
        Formula::And(parts) | Formula::Or(parts) => parts
            .iter()
            .all(|p| collect_signature(p, predicates, constants)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_signature(a, predicates, constants)
                && collect_signature(b, predicates, constants)
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => {
            collect_signature(body, predicates, constants)
        }
    }
}

/// Finite-model reasoning over the problem constants is only sound when
/// no strength-existential quantifier can demand a fresh individual:
/// axioms must be universal, the conjecture (which ends up negated) must
/// not be universal in strength.
fn quantifiers_universal(f: &Formula, positive: bool) -> bool {
    match f {
        Formula::Atom { .. } | Formula::Equal(..) => true,
        Formula::Not(inner) => quantifiers_universal(inner, !positive),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().all(|p| quantifiers_universal(p, positive))
        }
        Formula::Implies(a, b) => {
            quantifiers_universal(a, !positive) && quantifiers_universal(b, positive)
        }
        Formula::Iff(a, b) => [a, b].iter().all(|side| {
            quantifiers_universal(side, positive) && quantifiers_universal(side, !positive)
        }),
        Formula::Forall(_, body) => positive && quantifiers_universal(body, positive),
        Formula::Exists(_, body) => !positive && quantifiers_universal(body, positive),
    }
}

struct World<'a> {
    atom_bits: &'a BTreeMap<(&'a str, Vec<usize>), usize>,
    mask: u64,
    constants: &'a BTreeMap<&'a str, usize>,
    domain: usize,
}

impl<'a> World<'a> {
    fn holds(&self, pred: &str, elems: Vec<usize>) -> bool {
        match self.atom_bits.get(&(pred, elems)) {
            Some(&bit) => self.mask & (1 << bit) != 0,
            None => false,
        }
    }
}

fn eval(f: &Formula, env: &mut Vec<(String, usize)>, world: &World<'_>) -> bool {
    match f {
        Formula::Atom { predicate, args } => {
            let pred = predicate.constant_name().expect("checked");
            let elems = args
                .iter()
                .map(|a| match a {
                    Term::Constant(name) => world.constants[name.as_str()],
                    Term::Variable(name) => {
                        env.iter()
                            .rev()
                            .find(|(n, _)| n == name)
                            .expect("closed formula")
                            .1
                    }
                    _ => unreachable!("checked"),
                })
                .collect();
            world.holds(pred, elems)
        }
        Formula::Equal(..) => unreachable!("checked"),
        Formula::Not(inner) => !eval(inner, env, world),
        Formula::And(parts) => parts.iter().all(|p| eval(p, env, world)),
        Formula::Or(parts) => parts.iter().any(|p| eval(p, env, world)),
        Formula::Implies(a, b) => !eval(a, env, world) || eval(b, env, world),
        Formula::Iff(a, b) => eval(a, env, world) == eval(b, env, world),
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut assign = vec![0usize; vars.len()];
            loop {
                let depth = env.len();
                for (var, &elem) in vars.iter().zip(&assign) {
                    env.push((var.clone(), elem));
                }
                let verdict = eval(body, env, world);
                env.truncate(depth);
                if universal && !verdict {
                    return false;
                }
                if !universal && verdict {
                    return true;
                }
                // Next assignment in base-|domain| counting.
                let mut i = 0;
                loop {
                    if i == assign.len() {
                        return universal;
                    }
                    assign[i] += 1;
                    if assign[i] < world.domain {
                        break;
                    }
                    assign[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

/// Decide entailment by enumerating every interpretation of the ground
/// atoms over the problem's constants. `None` when the problem is outside
/// the supported fragment or too large to enumerate.
pub fn herbrand_entails(axioms: &[Formula], conjecture: &Formula) -> Option<bool> {
    let mut predicates = BTreeSet::new();
    let mut constants = BTreeSet::new();
    for axiom in axioms {
        if !collect_signature(axiom, &mut predicates, &mut constants) {
            return None;
        }
        if !quantifiers_universal(axiom, true) {
            return None;
        }
    }
    if !collect_signature(conjecture, &mut predicates, &mut constants) {
        return None;
    }
    if !quantifiers_universal(conjecture, false) {
        return None;
    }
    if constants.is_empty() {
        constants.insert("c0".to_string());
    }

    let constant_index: BTreeMap<&str, usize> = constants
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), i))
        .collect();
    let domain = constant_index.len();

    let mut atom_bits = BTreeMap::new();
    for (pred, arity) in &predicates {
        let mut tuple = vec![0usize; *arity];
        loop {
            let bit = atom_bits.len();
            atom_bits.insert((pred.as_str(), tuple.clone()), bit);
            let mut i = 0;
            loop {
                if i == tuple.len() {
                    break;
                }
                tuple[i] += 1;
                if tuple[i] < domain {
                    break;
                }
                tuple[i] = 0;
                i += 1;
            }
            if tuple.iter().all(|&t| t == 0) {
                break;
            }
        }
    }
    let bits = atom_bits.len();
    if bits > 22 {
        return None;
    }

    for mask in 0u64..(1u64 << bits) {
        let world = World {
            atom_bits: &atom_bits,
            mask,
            constants: &constant_index,
            domain,
        };
        let axioms_hold = axioms.iter().all(|a| eval(a, &mut Vec::new(), &world));
        if axioms_hold && !eval(conjecture, &mut Vec::new(), &world) {
            return Some(false);
        }
    }
    Some(true)
}
