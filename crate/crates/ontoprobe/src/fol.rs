//! Compilation of parsed SUO-KIF statements into a stratified first-order
//! axiom set.
//!
//! The pipeline is: signature extraction -> non-logical filtering -> row
//! variable expansion -> variable-predicate reification -> type guarding ->
//! naming. The output additionally carries the fixed meta-predicate
//! axiomatization, per-arity partition schemas and `holds_k` bridging
//! axioms. Statements that stay untranslatable are dropped and reported
//! with a reason instead of failing the run.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::kif::{
    classify_formula, collect_variables, parse_suo_kif, render_formula, Formula, FormulaKind, Term,
};

/// Ontology stratum an axiom belongs to.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub enum LayerTag {
    #[serde(rename = "meta")]
    MetaKnowledge,
    #[serde(rename = "top")]
    TopLevel,
    #[serde(rename = "mid")]
    MidLevel,
    #[serde(rename = "fo")]
    FoTransformation,
}

impl LayerTag {
    pub fn all() -> [LayerTag; 4] {
        [
            LayerTag::MetaKnowledge,
            LayerTag::TopLevel,
            LayerTag::MidLevel,
            LayerTag::FoTransformation,
        ]
    }

    fn prefix(self) -> &'static str {
        match self {
            LayerTag::MetaKnowledge => "meta",
            LayerTag::TopLevel => "top",
            LayerTag::MidLevel => "mid",
            LayerTag::FoTransformation => "fo",
        }
    }
}

impl fmt::Display for LayerTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefix())
    }
}

/// A named first-order axiom: closed, row-free, constant-predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub formula: Formula,
    pub layer: LayerTag,
    pub kind: FormulaKind,
}

impl Axiom {
    fn new(name: impl Into<String>, formula: Formula, layer: LayerTag) -> Self {
        let kind = classify_formula(&formula);
        Axiom {
            name: name.into(),
            formula,
            layer,
            kind,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainMode {
    Instance,
    Subclass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSlot {
    /// 1-based argument position.
    pub position: usize,
    pub concept: String,
    pub mode: DomainMode,
}

/// Argument typing of one relation, assembled from `domain`,
/// `domainSubclass` and `VariableArityRelation` declarations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationSignature {
    pub relation: String,
    pub slots: Vec<DomainSlot>,
    pub variable_arity: bool,
    /// Highest declared argument position; the minimum arity for
    /// variable-arity relations.
    pub min_arity: usize,
}

impl RelationSignature {
    fn slot(&self, position: usize) -> Option<&DomainSlot> {
        self.slots.iter().find(|s| s.position == position)
    }
}

pub type SignatureMap = BTreeMap<String, RelationSignature>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FolError {
    #[error("conflicting domain declarations for `{relation}` at position {position}")]
    ConflictingDomain { relation: String, position: usize },
    #[error("row variable `@{name}` not in trailing argument position")]
    RowVariableNotTrailing { name: String },
}

/// The assembled first-order ontology.
#[derive(Debug, Clone, Default)]
pub struct AxiomSet {
    pub axioms: Vec<Axiom>,
    pub signatures: SignatureMap,
}

/// Per-axiom metadata consumed by the analytics stage.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AxiomMeta {
    pub name: String,
    pub layer: LayerTag,
    pub kind: FormulaKind,
}

impl AxiomSet {
    pub fn lookup(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    /// (unit, general) clause counts per layer.
    pub fn layer_counts(&self) -> BTreeMap<LayerTag, (usize, usize)> {
        let mut counts: BTreeMap<LayerTag, (usize, usize)> =
            LayerTag::all().into_iter().map(|l| (l, (0, 0))).collect();
        for axiom in &self.axioms {
            let entry = counts.entry(axiom.layer).or_default();
            match axiom.kind {
                FormulaKind::UnitClause => entry.0 += 1,
                FormulaKind::GeneralClause => entry.1 += 1,
            }
        }
        counts
    }

    /// (unit, general) totals over all layers.
    pub fn totals(&self) -> (usize, usize) {
        self.layer_counts()
            .values()
            .fold((0, 0), |(u, g), (lu, lg)| (u + lu, g + lg))
    }

    pub fn metadata(&self) -> Vec<AxiomMeta> {
        self.axioms
            .iter()
            .map(|a| AxiomMeta {
                name: a.name.clone(),
                layer: a.layer,
                kind: a.kind,
            })
            .collect()
    }

    /// Check the axiom-set invariants: unique names, closed row-free
    /// formulas, constant predicates everywhere.
    pub fn validate(&self) -> Result<(), String> {
        let mut names = BTreeSet::new();
        for axiom in &self.axioms {
            if !names.insert(axiom.name.as_str()) {
                return Err(format!("duplicate axiom name `{}`", axiom.name));
            }
            let vars = collect_variables(&axiom.formula);
            if !vars.free.is_empty() {
                return Err(format!("axiom `{}` has free variables {:?}", axiom.name, vars.free));
            }
            if !vars.row.is_empty() {
                return Err(format!("axiom `{}` has row variables", axiom.name));
            }
            if has_variable_predicate(&axiom.formula) {
                return Err(format!("axiom `{}` has a variable predicate", axiom.name));
            }
            if axiom.kind != classify_formula(&axiom.formula) {
                return Err(format!("axiom `{}` kind tag is stale", axiom.name));
            }
        }
        Ok(())
    }
}

fn has_variable_predicate(f: &Formula) -> bool {
    match f {
        Formula::Atom { predicate, .. } => !matches!(predicate, Term::Constant(_)),
        Formula::Equal(..) => false,
        Formula::Not(inner) => has_variable_predicate(inner),
        Formula::And(parts) | Formula::Or(parts) => parts.iter().any(has_variable_predicate),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            has_variable_predicate(a) || has_variable_predicate(b)
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => has_variable_predicate(body),
    }
}

// ---------------------------------------------------------------------------
// Meta-knowledge
// ---------------------------------------------------------------------------

const META_AXIOM_SOURCES: &[(&str, &str)] = &[
    (
        "meta_subclass_transitive",
        "(forall (?C ?D ?E) (=> (and (subclass ?C ?D) (subclass ?D ?E)) (subclass ?C ?E)))",
    ),
    (
        "meta_subclass_reflexive",
        "(forall (?C) (=> (instance ?C Class) (subclass ?C ?C)))",
    ),
    (
        "meta_instance_subclass",
        "(forall (?X ?C ?D) (=> (and (instance ?X ?C) (subclass ?C ?D)) (instance ?X ?D)))",
    ),
    (
        "meta_disjoint_instances",
        "(forall (?C ?D) (=> (disjoint ?C ?D) (not (exists (?X) (and (instance ?X ?C) (instance ?X ?D))))))",
    ),
    (
        "meta_disjoint_symmetric",
        "(forall (?C ?D) (=> (disjoint ?C ?D) (disjoint ?D ?C)))",
    ),
];

/// The fixed axiomatization of the structural meta-predicates `instance`,
/// `subclass` and `disjoint`. Partition schemas are arity-dependent and
/// generated per ontology by [`translate_ontology`]. All meta axioms are
/// general clauses.
pub fn meta_axioms() -> Vec<Axiom> {
    META_AXIOM_SOURCES
        .iter()
        .map(|(name, text)| {
            let parsed = parse_suo_kif(text).expect("builtin meta axiom must parse");
            Axiom::new(*name, parsed.into_iter().next().unwrap().0, LayerTag::MetaKnowledge)
        })
        .collect()
}

fn instance_atom(x: &str, class: Term) -> Formula {
    Formula::atom("instance", vec![Term::variable(x), class])
}

/// Schema instances axiomatizing `partition` for a fixed number of parts:
/// parts are subclasses of the whole, pairwise disjoint, and jointly
/// exhaustive.
pub fn partition_axioms(parts: usize) -> Vec<Axiom> {
    assert!(parts >= 1, "partition needs at least one part");
    let whole = "C".to_string();
    let part_vars: Vec<String> = (1..=parts).map(|i| format!("P{i}")).collect();
    let mut quantified = vec![whole.clone()];
    quantified.extend(part_vars.iter().cloned());

    let partition_atom = Formula::atom(
        "partition",
        std::iter::once(Term::variable(&whole))
            .chain(part_vars.iter().map(Term::variable))
            .collect(),
    );

    let conj = |mut parts: Vec<Formula>| {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        }
    };
    let disj = |mut parts: Vec<Formula>| {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        }
    };

    let mut axioms = Vec::new();

    let covers = part_vars
        .iter()
        .map(|p| Formula::atom("subclass", vec![Term::variable(p), Term::variable(&whole)]))
        .collect::<Vec<_>>();
    axioms.push(Axiom::new(
        format!("meta_partition_{parts}_cover"),
        Formula::Forall(
            quantified.clone(),
            Box::new(Formula::Implies(
                Box::new(partition_atom.clone()),
                Box::new(conj(covers)),
            )),
        ),
        LayerTag::MetaKnowledge,
    ));

    if parts >= 2 {
        let mut pairs = Vec::new();
        for i in 0..parts {
            for j in (i + 1)..parts {
                pairs.push(Formula::atom(
                    "disjoint",
                    vec![Term::variable(&part_vars[i]), Term::variable(&part_vars[j])],
                ));
            }
        }
        axioms.push(Axiom::new(
            format!("meta_partition_{parts}_disjoint"),
            Formula::Forall(
                quantified.clone(),
                Box::new(Formula::Implies(
                    Box::new(partition_atom.clone()),
                    Box::new(conj(pairs)),
                )),
            ),
            LayerTag::MetaKnowledge,
        ));
    }

    let mut exhaustive_vars = quantified.clone();
    exhaustive_vars.push("X".to_string());
    let member_cases = part_vars
        .iter()
        .map(|p| instance_atom("X", Term::variable(p)))
        .collect::<Vec<_>>();
    axioms.push(Axiom::new(
        format!("meta_partition_{parts}_exhaustive"),
        Formula::Forall(
            exhaustive_vars,
            Box::new(Formula::Implies(
                Box::new(Formula::And(vec![
                    partition_atom,
                    instance_atom("X", Term::variable(&whole)),
                ])),
                Box::new(disj(member_cases)),
            )),
        ),
        LayerTag::MetaKnowledge,
    ));

    axioms
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

fn domain_declaration(f: &Formula) -> Option<(&str, usize, &str, DomainMode)> {
    let (head, args) = match f {
        Formula::Atom { predicate, args } => (predicate.constant_name()?, args),
        _ => return None,
    };
    let mode = match head {
        "domain" => DomainMode::Instance,
        "domainSubclass" => DomainMode::Subclass,
        _ => return None,
    };
    if args.len() != 3 {
        return None;
    }
    let relation = args[0].constant_name()?;
    let position: usize = args[1].constant_name()?.parse().ok()?;
    let concept = args[2].constant_name()?;
    if position == 0 {
        return None;
    }
    Some((relation, position, concept, mode))
}

fn variable_arity_declaration(f: &Formula) -> Option<&str> {
    match f {
        Formula::Atom { predicate, args }
            if predicate.constant_name() == Some("instance") && args.len() == 2 =>
        {
            if args[1].constant_name() == Some("VariableArityRelation") {
                args[0].constant_name()
            } else {
                None
            }
        }
        _ => None,
    }
}

fn build_signatures_lenient(statements: &[Formula]) -> (SignatureMap, Vec<FolError>) {
    let mut map = SignatureMap::new();
    let mut conflicts = Vec::new();
    for stmt in statements {
        if let Some((relation, position, concept, mode)) = domain_declaration(stmt) {
            let entry = map.entry(relation.to_string()).or_insert_with(|| RelationSignature {
                relation: relation.to_string(),
                ..Default::default()
            });
            match entry.slot(position) {
                Some(existing) if existing.concept == concept && existing.mode == mode => {}
                Some(_) => conflicts.push(FolError::ConflictingDomain {
                    relation: relation.to_string(),
                    position,
                }),
                None => {
                    entry.slots.push(DomainSlot {
                        position,
                        concept: concept.to_string(),
                        mode,
                    });
                    entry.slots.sort_by_key(|s| s.position);
                    entry.min_arity = entry.min_arity.max(position);
                }
            }
        }
        if let Some(relation) = variable_arity_declaration(stmt) {
            let entry = map.entry(relation.to_string()).or_insert_with(|| RelationSignature {
                relation: relation.to_string(),
                ..Default::default()
            });
            entry.variable_arity = true;
        }
    }
    (map, conflicts)
}

/// Extract relation signatures from `domain`/`domainSubclass`/
/// `VariableArityRelation` declarations. The first conflicting declaration
/// for a slot is an error.
pub fn build_signatures(statements: &[Formula]) -> Result<SignatureMap, FolError> {
    let (map, conflicts) = build_signatures_lenient(statements);
    match conflicts.into_iter().next() {
        Some(err) => Err(err),
        None => Ok(map),
    }
}

// ---------------------------------------------------------------------------
// Row variable expansion
// ---------------------------------------------------------------------------

fn term_has_row(term: &Term) -> Option<&str> {
    match term {
        Term::RowVariable(name) => Some(name),
        Term::Compound(head, args) => {
            term_has_row(head).or_else(|| args.iter().find_map(term_has_row))
        }
        _ => None,
    }
}

/// Collect row variable names in first-occurrence order, rejecting any
/// occurrence outside the trailing argument slot of an atom.
fn check_rows(f: &Formula, rows: &mut Vec<String>) -> Result<(), FolError> {
    let bad = |name: &str| FolError::RowVariableNotTrailing {
        name: name.to_string(),
    };
    match f {
        Formula::Atom { predicate, args } => {
            if let Some(name) = term_has_row(predicate) {
                return Err(bad(name));
            }
            for (i, arg) in args.iter().enumerate() {
                match arg {
                    Term::RowVariable(name) => {
                        if i + 1 != args.len() {
                            return Err(bad(name));
                        }
                        if !rows.contains(name) {
                            rows.push(name.clone());
                        }
                    }
                    other => {
                        if let Some(name) = term_has_row(other) {
                            return Err(bad(name));
                        }
                    }
                }
            }
            Ok(())
        }
        Formula::Equal(lhs, rhs) => {
            for term in [lhs, rhs] {
                if let Some(name) = term_has_row(term) {
                    return Err(bad(name));
                }
            }
            Ok(())
        }
        Formula::Not(inner) => check_rows(inner, rows),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().try_for_each(|p| check_rows(p, rows))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            check_rows(a, rows)?;
            check_rows(b, rows)
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => check_rows(body, rows),
    }
}

fn all_variable_names(f: &Formula, names: &mut BTreeSet<String>) {
    fn term_vars(term: &Term, names: &mut BTreeSet<String>) {
        match term {
            Term::Variable(name) => {
                names.insert(name.clone());
            }
            Term::Compound(head, args) => {
                term_vars(head, names);
                for arg in args {
                    term_vars(arg, names);
                }
            }
            _ => {}
        }
    }
    match f {
        Formula::Atom { predicate, args } => {
            term_vars(predicate, names);
            for arg in args {
                term_vars(arg, names);
            }
        }
        Formula::Equal(lhs, rhs) => {
            term_vars(lhs, names);
            term_vars(rhs, names);
        }
        Formula::Not(inner) => all_variable_names(inner, names),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().for_each(|p| all_variable_names(p, names))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            all_variable_names(a, names);
            all_variable_names(b, names);
        }
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            names.extend(vars.iter().cloned());
            all_variable_names(body, names);
        }
    }
}

fn substitute_rows(f: &Formula, expansion: &BTreeMap<String, Vec<String>>) -> Formula {
    match f {
        Formula::Atom { predicate, args } => {
            let mut new_args = Vec::with_capacity(args.len());
            for arg in args {
                match arg {
                    Term::RowVariable(name) => {
                        let fresh = &expansion[name];
                        new_args.extend(fresh.iter().map(Term::variable));
                    }
                    other => new_args.push(other.clone()),
                }
            }
            Formula::Atom {
                predicate: predicate.clone(),
                args: new_args,
            }
        }
        Formula::Equal(..) => f.clone(),
        Formula::Not(inner) => Formula::Not(Box::new(substitute_rows(inner, expansion))),
        Formula::And(parts) => {
            Formula::And(parts.iter().map(|p| substitute_rows(p, expansion)).collect())
        }
        Formula::Or(parts) => {
            Formula::Or(parts.iter().map(|p| substitute_rows(p, expansion)).collect())
        }
        Formula::Implies(a, b) => Formula::Implies(
            Box::new(substitute_rows(a, expansion)),
            Box::new(substitute_rows(b, expansion)),
        ),
        Formula::Iff(a, b) => Formula::Iff(
            Box::new(substitute_rows(a, expansion)),
            Box::new(substitute_rows(b, expansion)),
        ),
        Formula::Forall(vars, body) => {
            Formula::Forall(vars.clone(), Box::new(substitute_rows(body, expansion)))
        }
        Formula::Exists(vars, body) => {
            Formula::Exists(vars.clone(), Box::new(substitute_rows(body, expansion)))
        }
    }
}

/// Expand row variables into one formula per arity `1..=max_row_arity`,
/// replacing each row variable by that many fresh ordinary variables
/// (consistently within one output formula). Formulas without row
/// variables come back as a singleton.
pub fn expand_rows(f: &Formula, max_row_arity: usize) -> Result<Vec<Formula>, FolError> {
    assert!(max_row_arity >= 1, "max_row_arity must be positive");
    let mut rows = Vec::new();
    check_rows(f, &mut rows)?;
    if rows.is_empty() {
        return Ok(vec![f.clone()]);
    }
    let mut taken = BTreeSet::new();
    all_variable_names(f, &mut taken);

    let mut out = Vec::with_capacity(max_row_arity);
    for arity in 1..=max_row_arity {
        let mut expansion = BTreeMap::new();
        let mut taken = taken.clone();
        for row in &rows {
            let mut fresh = Vec::with_capacity(arity);
            for i in 1..=arity {
                let mut candidate = format!("{row}{i}");
                while taken.contains(&candidate) {
                    candidate.push('_');
                }
                taken.insert(candidate.clone());
                fresh.push(candidate);
            }
            expansion.insert(row.clone(), fresh);
        }
        out.push(substitute_rows(f, &expansion));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Variable-predicate reification
// ---------------------------------------------------------------------------

/// Rewrite every atom whose predicate position holds a variable,
/// `(?R t1 .. tk)`, into the fixed-predicate atom `holds_{k+1}(?R, t1..tk)`.
/// Run after [`expand_rows`]; the input must be row-free.
pub fn reify_variable_predicates(f: &Formula) -> Formula {
    match f {
        Formula::Atom { predicate, args } => match predicate {
            Term::Variable(name) => {
                let mut new_args = Vec::with_capacity(args.len() + 1);
                new_args.push(Term::variable(name));
                new_args.extend(args.iter().cloned());
                Formula::Atom {
                    predicate: Term::constant(format!("holds_{}", args.len() + 1)),
                    args: new_args,
                }
            }
            _ => f.clone(),
        },
        Formula::Equal(..) => f.clone(),
        Formula::Not(inner) => Formula::Not(Box::new(reify_variable_predicates(inner))),
        Formula::And(parts) => {
            Formula::And(parts.iter().map(reify_variable_predicates).collect())
        }
        Formula::Or(parts) => Formula::Or(parts.iter().map(reify_variable_predicates).collect()),
        Formula::Implies(a, b) => Formula::Implies(
            Box::new(reify_variable_predicates(a)),
            Box::new(reify_variable_predicates(b)),
        ),
        Formula::Iff(a, b) => Formula::Iff(
            Box::new(reify_variable_predicates(a)),
            Box::new(reify_variable_predicates(b)),
        ),
        Formula::Forall(vars, body) => {
            Formula::Forall(vars.clone(), Box::new(reify_variable_predicates(body)))
        }
        Formula::Exists(vars, body) => {
            Formula::Exists(vars.clone(), Box::new(reify_variable_predicates(body)))
        }
    }
}

// ---------------------------------------------------------------------------
// Type guarding
// ---------------------------------------------------------------------------

/// Predicates whose argument positions never produce type guards. Keeping
/// guard atoms themselves out of guard collection makes guarding
/// idempotent.
fn is_guard_exempt(predicate: &str) -> bool {
    matches!(
        predicate,
        "instance" | "subclass" | "disjoint" | "partition" | "domain" | "domainSubclass"
    ) || (predicate.starts_with("holds_")
        && predicate["holds_".len()..].chars().all(|c| c.is_ascii_digit()))
}

fn guard_atom(var: &str, slot: &DomainSlot) -> Formula {
    let predicate = match slot.mode {
        DomainMode::Instance => "instance",
        DomainMode::Subclass => "subclass",
    };
    Formula::atom(
        predicate,
        vec![Term::variable(var), Term::constant(&slot.concept)],
    )
}

fn collect_term_guards(
    term: &Term,
    vars: &[String],
    shadowed: &[String],
    signatures: &SignatureMap,
    guards: &mut Vec<Formula>,
) {
    if let Term::Compound(head, args) = term {
        if let Term::Constant(relation) = &**head {
            if !is_guard_exempt(relation) {
                if let Some(signature) = signatures.get(relation) {
                    for (i, arg) in args.iter().enumerate() {
                        if let Term::Variable(name) = arg {
                            if vars.contains(name) && !shadowed.contains(name) {
                                if let Some(slot) = signature.slot(i + 1) {
                                    let guard = guard_atom(name, slot);
                                    if !guards.contains(&guard) {
                                        guards.push(guard);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for arg in args {
            collect_term_guards(arg, vars, shadowed, signatures, guards);
        }
    }
}

fn collect_guards(
    f: &Formula,
    vars: &[String],
    shadowed: &mut Vec<String>,
    signatures: &SignatureMap,
    guards: &mut Vec<Formula>,
) {
    match f {
        Formula::Atom { predicate, args } => {
            if let Some(relation) = predicate.constant_name() {
                if !is_guard_exempt(relation) {
                    if let Some(signature) = signatures.get(relation) {
                        for (i, arg) in args.iter().enumerate() {
                            if let Term::Variable(name) = arg {
                                if vars.contains(name) && !shadowed.contains(name) {
                                    if let Some(slot) = signature.slot(i + 1) {
                                        let guard = guard_atom(name, slot);
                                        if !guards.contains(&guard) {
                                            guards.push(guard);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            for arg in args {
                collect_term_guards(arg, vars, shadowed, signatures, guards);
            }
        }
        Formula::Equal(lhs, rhs) => {
            collect_term_guards(lhs, vars, shadowed, signatures, guards);
            collect_term_guards(rhs, vars, shadowed, signatures, guards);
        }
        Formula::Not(inner) => collect_guards(inner, vars, shadowed, signatures, guards),
        Formula::And(parts) | Formula::Or(parts) => {
            for part in parts {
                collect_guards(part, vars, shadowed, signatures, guards);
            }
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_guards(a, vars, shadowed, signatures, guards);
            collect_guards(b, vars, shadowed, signatures, guards);
        }
        Formula::Forall(inner_vars, body) | Formula::Exists(inner_vars, body) => {
            let depth = shadowed.len();
            shadowed.extend(inner_vars.iter().filter(|v| vars.contains(v)).cloned());
            collect_guards(body, vars, shadowed, signatures, guards);
            shadowed.truncate(depth);
        }
    }
}

fn guards_for(f: &Formula, vars: &[String], signatures: &SignatureMap) -> Vec<Formula> {
    let mut guards = Vec::new();
    // Occurrence order follows var-list order so output is deterministic.
    for var in vars {
        let single = [var.clone()];
        collect_guards(f, &single, &mut Vec::new(), signatures, &mut guards);
    }
    guards
}

fn is_guard_shaped(f: &Formula, vars: &[String]) -> bool {
    match f {
        Formula::Atom { predicate, args } => {
            matches!(predicate.constant_name(), Some("instance") | Some("subclass"))
                && args.len() == 2
                && matches!(&args[0], Term::Variable(v) if vars.contains(v))
                && matches!(args[1], Term::Constant(_))
        }
        _ => false,
    }
}

fn conjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(parts) => parts.iter().collect(),
        other => vec![other],
    }
}

fn conjoin(mut parts: Vec<Formula>) -> Formula {
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Formula::And(parts)
    }
}

fn guard_binder(f: &Formula, signatures: &SignatureMap) -> Formula {
    match f {
        Formula::Forall(vars, body) => {
            let body = guard_binder(body, signatures);
            // Recognize an existing guard antecedent so re-guarding is a
            // no-op instead of a second wrapper.
            let (existing, core): (Vec<Formula>, Formula) = match &body {
                Formula::Implies(antecedent, consequent)
                    if conjuncts(antecedent).iter().all(|c| is_guard_shaped(c, vars)) =>
                {
                    (
                        conjuncts(antecedent).into_iter().cloned().collect(),
                        (**consequent).clone(),
                    )
                }
                _ => (Vec::new(), body.clone()),
            };
            let needed = guards_for(&core, vars, signatures);
            let mut combined = existing.clone();
            for guard in needed {
                if !combined.contains(&guard) {
                    combined.push(guard);
                }
            }
            // Covers the no-guard case too: combined is empty only when
            // existing was.
            if combined == existing {
                Formula::Forall(vars.clone(), Box::new(body))
            } else {
                Formula::Forall(
                    vars.clone(),
                    Box::new(Formula::Implies(Box::new(conjoin(combined)), Box::new(core))),
                )
            }
        }
        Formula::Exists(vars, body) => {
            let body = guard_binder(body, signatures);
            let (existing, core_parts): (Vec<Formula>, Vec<Formula>) = match &body {
                Formula::And(parts) => {
                    let split = parts
                        .iter()
                        .take_while(|p| is_guard_shaped(p, vars))
                        .count();
                    (parts[..split].to_vec(), parts[split..].to_vec())
                }
                other => (Vec::new(), vec![other.clone()]),
            };
            let needed = guards_for(&conjoin(core_parts.clone()), vars, signatures);
            let mut combined = existing.clone();
            for guard in needed {
                if !combined.contains(&guard) {
                    combined.push(guard);
                }
            }
            if combined == existing {
                Formula::Exists(vars.clone(), Box::new(body))
            } else {
                let mut parts = combined;
                parts.extend(core_parts);
                Formula::Exists(vars.clone(), Box::new(conjoin(parts)))
            }
        }
        Formula::Not(inner) => Formula::Not(Box::new(guard_binder(inner, signatures))),
        Formula::And(parts) => {
            Formula::And(parts.iter().map(|p| guard_binder(p, signatures)).collect())
        }
        Formula::Or(parts) => {
            Formula::Or(parts.iter().map(|p| guard_binder(p, signatures)).collect())
        }
        Formula::Implies(a, b) => Formula::Implies(
            Box::new(guard_binder(a, signatures)),
            Box::new(guard_binder(b, signatures)),
        ),
        Formula::Iff(a, b) => Formula::Iff(
            Box::new(guard_binder(a, signatures)),
            Box::new(guard_binder(b, signatures)),
        ),
        Formula::Atom { .. } | Formula::Equal(..) => f.clone(),
    }
}

/// Build the universal closure of `f` and add type guards derived from the
/// relation signatures: universally quantified variables get their guards
/// as an antecedent of the binder body, existential variables get them as
/// conjuncts inside their scope. Idempotent.
pub fn guard_types(f: &Formula, signatures: &SignatureMap) -> Formula {
    let free = collect_variables(f).free;
    let closed = if free.is_empty() {
        f.clone()
    } else {
        Formula::Forall(free.into_iter().collect(), Box::new(f.clone()))
    };
    guard_binder(&closed, signatures)
}

// ---------------------------------------------------------------------------
// Whole-ontology translation
// ---------------------------------------------------------------------------

/// Statement heads that carry lexical or presentational content rather
/// than clauses.
const NON_LOGICAL_HEADS: &[&str] = &[
    "documentation",
    "format",
    "termFormat",
    "externalImage",
    "abbreviation",
    "synonymousExternalConcept",
];

/// Statement heads embedding formulas in opaque (modal or higher-order)
/// contexts that have no faithful first-order rendering here.
const OPAQUE_HEADS: &[&str] = &[
    "holdsDuring",
    "believes",
    "knows",
    "desires",
    "hasPurpose",
    "modalAttribute",
    "confersNorm",
    "KappaFn",
    "ProbabilityFn",
];

fn term_contains_string(term: &Term) -> bool {
    match term {
        Term::Constant(name) => name.starts_with('"'),
        Term::Compound(head, args) => {
            term_contains_string(head) || args.iter().any(term_contains_string)
        }
        _ => false,
    }
}

fn formula_contains_string(f: &Formula) -> bool {
    match f {
        Formula::Atom { predicate, args } => {
            term_contains_string(predicate) || args.iter().any(term_contains_string)
        }
        Formula::Equal(lhs, rhs) => term_contains_string(lhs) || term_contains_string(rhs),
        Formula::Not(inner) => formula_contains_string(inner),
        Formula::And(parts) | Formula::Or(parts) => parts.iter().any(formula_contains_string),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            formula_contains_string(a) || formula_contains_string(b)
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => formula_contains_string(body),
    }
}

/// Lexical/presentational statements are parsed but excluded from the
/// axiom set and its clause counts.
pub fn is_non_logical(f: &Formula) -> bool {
    matches!(f.head(), Some(head) if NON_LOGICAL_HEADS.contains(&head))
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DroppedStatement {
    /// Index into the input statement list.
    pub index: usize,
    pub layer: LayerTag,
    pub head: Option<String>,
    pub reason: String,
    pub text: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LayerCount {
    pub layer: LayerTag,
    pub unit_clauses: usize,
    pub general_clauses: usize,
}

/// What `translate_ontology` kept, dropped and produced.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TranslationReport {
    pub statements_in: usize,
    pub non_logical: usize,
    pub dropped: Vec<DroppedStatement>,
    pub layer_counts: Vec<LayerCount>,
    pub total_unit_clauses: usize,
    pub total_general_clauses: usize,
}

#[derive(Debug, Clone)]
pub struct TranslationOptions {
    /// Upper bound for row-variable expansion; bounds the `holds_k`
    /// family. SUMO's conventional maximum relation arity is 7.
    pub max_row_arity: usize,
}

impl Default for TranslationOptions {
    fn default() -> Self {
        TranslationOptions { max_row_arity: 7 }
    }
}

fn atom_arities(f: &Formula, census: &mut BTreeMap<String, BTreeSet<usize>>) {
    match f {
        Formula::Atom { predicate, args } => {
            if let Some(name) = predicate.constant_name() {
                census.entry(name.to_string()).or_default().insert(args.len());
            }
        }
        Formula::Equal(..) => {}
        Formula::Not(inner) => atom_arities(inner, census),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().for_each(|p| atom_arities(p, census))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            atom_arities(a, census);
            atom_arities(b, census);
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => atom_arities(body, census),
    }
}

fn argument_constants(f: &Formula, out: &mut BTreeSet<String>) {
    fn term_constants(term: &Term, out: &mut BTreeSet<String>) {
        match term {
            Term::Constant(name) => {
                out.insert(name.clone());
            }
            Term::Compound(head, args) => {
                term_constants(head, out);
                args.iter().for_each(|a| term_constants(a, out));
            }
            _ => {}
        }
    }
    match f {
        Formula::Atom { args, .. } => args.iter().for_each(|a| term_constants(a, out)),
        Formula::Equal(lhs, rhs) => {
            term_constants(lhs, out);
            term_constants(rhs, out);
        }
        Formula::Not(inner) => argument_constants(inner, out),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().for_each(|p| argument_constants(p, out))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            argument_constants(a, out);
            argument_constants(b, out);
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => argument_constants(body, out),
    }
}

fn bridge_axiom(relation: &str, arity: usize) -> Axiom {
    let vars: Vec<String> = (1..=arity).map(|i| format!("X{i}")).collect();
    let mut holds_args = Vec::with_capacity(arity + 1);
    holds_args.push(Term::constant(relation));
    holds_args.extend(vars.iter().map(Term::variable));
    let holds = Formula::atom(format!("holds_{}", arity + 1), holds_args);
    let direct = Formula::atom(relation, vars.iter().map(Term::variable).collect());
    Axiom::new(
        format!("fo_bridge_{relation}_{arity}"),
        Formula::Forall(vars, Box::new(Formula::Iff(Box::new(holds), Box::new(direct)))),
        LayerTag::FoTransformation,
    )
}

/// Run the full translation pipeline over layer-assigned statements.
///
/// Untranslatable statements are dropped and reported, never fatal. The
/// output always includes [`meta_axioms`], partition schemas for every
/// partition arity that occurs, and `holds_k` bridging axioms for every
/// relation that occurs in argument position.
pub fn translate_ontology(
    statements: &[(Formula, LayerTag)],
    options: &TranslationOptions,
) -> (AxiomSet, TranslationReport) {
    let logical: Vec<&Formula> = statements
        .iter()
        .filter(|(f, _)| !is_non_logical(f))
        .map(|(f, _)| f)
        .collect();
    let (signatures, conflicts) =
        build_signatures_lenient(&logical.iter().map(|f| (*f).clone()).collect::<Vec<_>>());

    let mut dropped = Vec::new();
    let mut non_logical = 0usize;
    let mut translated: Vec<Axiom> = Vec::new();
    let mut per_layer_seq: BTreeMap<LayerTag, usize> = BTreeMap::new();

    let conflicting: BTreeSet<(String, usize)> = conflicts
        .iter()
        .filter_map(|c| match c {
            FolError::ConflictingDomain { relation, position } => {
                Some((relation.clone(), *position))
            }
            _ => None,
        })
        .collect();

    for (index, (stmt, layer)) in statements.iter().enumerate() {
        let drop = |reason: &str| DroppedStatement {
            index,
            layer: *layer,
            head: stmt.head().map(str::to_string),
            reason: reason.to_string(),
            text: render_formula(stmt),
        };

        if is_non_logical(stmt) {
            non_logical += 1;
            continue;
        }
        if formula_contains_string(stmt) {
            dropped.push(drop("quoted string in logical statement"));
            continue;
        }
        if let Some(head) = stmt.head() {
            if OPAQUE_HEADS.contains(&head) {
                dropped.push(drop("modal or higher-order context"));
                continue;
            }
        }
        if let Some((relation, position, _, _)) = domain_declaration(stmt) {
            if conflicting.contains(&(relation.to_string(), position)) {
                dropped.push(drop("conflicting domain declaration"));
                continue;
            }
        }

        let expanded = match expand_rows(stmt, options.max_row_arity) {
            Ok(expanded) => expanded,
            Err(FolError::RowVariableNotTrailing { .. }) => {
                dropped.push(drop("row variable not in trailing position"));
                continue;
            }
            Err(_) => unreachable!("expand_rows only reports row placement"),
        };

        let seq = per_layer_seq.entry(*layer).or_insert(0);
        *seq += 1;
        let base_name = format!("{}_{:04}", layer.prefix(), *seq);
        let multi = expanded.len() > 1;
        for (i, formula) in expanded.into_iter().enumerate() {
            let reified = reify_variable_predicates(&formula);
            let guarded = guard_types(&reified, &signatures);
            let vars = collect_variables(&guarded);
            if !vars.free.is_empty() || !vars.row.is_empty() || has_variable_predicate(&guarded) {
                dropped.push(drop("not first-order after transformation"));
                continue;
            }
            let name = if multi {
                format!("{base_name}_a{}", i + 1)
            } else {
                base_name.clone()
            };
            translated.push(Axiom::new(name, guarded, *layer));
        }
    }

    let mut axioms = meta_axioms();

    // Partition schemas for every partition arity occurring in the output.
    let mut census = BTreeMap::new();
    for axiom in &translated {
        atom_arities(&axiom.formula, &mut census);
    }
    if let Some(arities) = census.get("partition") {
        let parts: BTreeSet<usize> =
            arities.iter().filter(|&&a| a >= 2).map(|&a| a - 1).collect();
        for n in parts {
            axioms.extend(partition_axioms(n));
        }
    }

    axioms.extend(translated);

    // Bridging axioms for relations mentioned in argument position.
    let mut census = BTreeMap::new();
    let mut arg_constants = BTreeSet::new();
    for axiom in &axioms {
        atom_arities(&axiom.formula, &mut census);
        argument_constants(&axiom.formula, &mut arg_constants);
    }
    let mut bridges = Vec::new();
    for (relation, arities) in &census {
        if relation.starts_with("holds_") || !arg_constants.contains(relation) {
            continue;
        }
        for &arity in arities {
            if arity >= 1 {
                bridges.push(bridge_axiom(relation, arity));
            }
        }
    }
    axioms.extend(bridges);

    let set = AxiomSet { axioms, signatures };
    debug_assert_eq!(set.validate(), Ok(()));

    let layer_counts = set
        .layer_counts()
        .into_iter()
        .map(|(layer, (unit, general))| LayerCount {
            layer,
            unit_clauses: unit,
            general_clauses: general,
        })
        .collect();
    let (total_unit, total_general) = set.totals();
    let report = TranslationReport {
        statements_in: statements.len(),
        non_logical,
        dropped,
        layer_counts,
        total_unit_clauses: total_unit,
        total_general_clauses: total_general,
    };
    (set, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kif::parse_suo_kif;

    fn parse_one(text: &str) -> Formula {
        parse_suo_kif(text).unwrap().into_iter().next().unwrap().0
    }

    fn parse_all(text: &str) -> Vec<Formula> {
        parse_suo_kif(text).unwrap().into_iter().map(|(f, _)| f).collect()
    }

    #[test]
    fn meta_axioms_are_all_general_clauses() {
        let axioms = meta_axioms();
        assert!(!axioms.is_empty());
        assert!(axioms.iter().all(|a| a.kind == FormulaKind::GeneralClause));
        assert!(axioms.iter().all(|a| a.layer == LayerTag::MetaKnowledge));
        // The four structural meta-predicate families are covered: the
        // fixed set handles instance/subclass/disjoint, partition schemas
        // are generated per arity.
        for family in ["subclass", "instance", "disjoint"] {
            assert!(
                axioms.iter().any(|a| a.name.contains(family)),
                "missing {family} axiom"
            );
        }
        assert!(!partition_axioms(2).is_empty());
    }

    #[test]
    fn partition_schema_shapes() {
        let two = partition_axioms(2);
        assert_eq!(two.len(), 3);
        assert!(two.iter().all(|a| a.kind == FormulaKind::GeneralClause));
        let one = partition_axioms(1);
        assert_eq!(one.len(), 2); // no pairwise disjointness for one part
    }

    #[test]
    fn build_signatures_examples() {
        let sigs = build_signatures(&parse_all("(domain instance 2 Class)")).unwrap();
        let sig = &sigs["instance"];
        assert_eq!(sig.slots.len(), 1);
        assert_eq!(sig.slots[0].position, 2);
        assert_eq!(sig.slots[0].concept, "Class");
        assert_eq!(sig.slots[0].mode, DomainMode::Instance);

        assert!(build_signatures(&[]).unwrap().is_empty());

        let sigs =
            build_signatures(&parse_all("(domain part 1 Object) (domain part 2 Object)")).unwrap();
        assert_eq!(sigs["part"].slots.len(), 2);
        assert_eq!(sigs["part"].min_arity, 2);
    }

    #[test]
    fn build_signatures_conflict() {
        let err = build_signatures(&parse_all("(domain part 1 Object) (domain part 1 Process)"))
            .unwrap_err();
        assert_eq!(
            err,
            FolError::ConflictingDomain {
                relation: "part".into(),
                position: 1
            }
        );
        // Repeating the same declaration is not a conflict.
        assert!(build_signatures(&parse_all("(domain part 1 Object) (domain part 1 Object)")).is_ok());
    }

    #[test]
    fn variable_arity_declaration_is_recorded() {
        let sigs =
            build_signatures(&parse_all("(instance partition VariableArityRelation)")).unwrap();
        assert!(sigs["partition"].variable_arity);
    }

    #[test]
    fn expand_rows_identity_without_rows() {
        let f = parse_one("(=> (p ?X) (q ?X))");
        assert_eq!(expand_rows(&f, 7).unwrap(), vec![f.clone()]);
    }

    #[test]
    fn expand_rows_produces_one_formula_per_arity() {
        let f = parse_one("(partition ?C @ROW)");
        let expanded = expand_rows(&f, 3).unwrap();
        assert_eq!(expanded.len(), 3);
        for (i, formula) in expanded.iter().enumerate() {
            match formula {
                Formula::Atom { args, .. } => assert_eq!(args.len(), i + 2),
                other => panic!("expected atom, got {other:?}"),
            }
        }
        assert_eq!(expand_rows(&f, 1).unwrap().len(), 1);
    }

    #[test]
    fn expand_rows_is_consistent_across_occurrences() {
        let f = parse_one("(=> (partition ?C @ROW) (exhaustiveDecomposition ?C @ROW))");
        let expanded = expand_rows(&f, 2).unwrap();
        assert_eq!(expanded.len(), 2);
        // Both atoms must see the same fresh variables.
        let rendered = render_formula(&expanded[1]);
        assert_eq!(
            rendered,
            "(=> (partition ?C ?ROW1 ?ROW2) (exhaustiveDecomposition ?C ?ROW1 ?ROW2))"
        );
    }

    #[test]
    fn expand_rows_rejects_non_trailing_rows() {
        let f = parse_one("(related @ROW ?C)");
        assert!(matches!(
            expand_rows(&f, 3),
            Err(FolError::RowVariableNotTrailing { .. })
        ));
    }

    #[test]
    fn reify_rewrites_variable_predicates() {
        let f = parse_one("(?REL a b)");
        let reified = reify_variable_predicates(&f);
        assert_eq!(render_formula(&reified), "(holds_3 ?REL a b)");

        let unchanged = parse_one("(=> (p ?X) (q ?X))");
        assert_eq!(reify_variable_predicates(&unchanged), unchanged);
    }

    #[test]
    fn guard_types_ground_formula_unchanged() {
        let sigs = build_signatures(&parse_all("(domain p 1 A)")).unwrap();
        let f = parse_one("(p a)");
        assert_eq!(guard_types(&f, &sigs), f);
    }

    #[test]
    fn guard_types_matches_hand_built_ast() {
        let sigs = build_signatures(&parse_all("(domain p 1 A) (domain q 1 A)")).unwrap();
        let f = parse_one("(=> (p ?X) (q ?X))");
        let guarded = guard_types(&f, &sigs);
        let expected = parse_one("(forall (?X) (=> (instance ?X A) (=> (p ?X) (q ?X))))");
        assert_eq!(guarded, expected);
    }

    #[test]
    fn guard_types_without_signature_adds_nothing() {
        let sigs = SignatureMap::new();
        let f = parse_one("(=> (p ?X) (q ?X))");
        let guarded = guard_types(&f, &sigs);
        assert_eq!(guarded, parse_one("(forall (?X) (=> (p ?X) (q ?X)))"));
    }

    #[test]
    fn guard_types_handles_existentials_and_subclass_mode() {
        let sigs = build_signatures(&parse_all(
            "(domain p 1 A) (domainSubclass q 1 B)",
        ))
        .unwrap();
        let f = parse_one("(exists (?Y) (q ?Y))");
        let guarded = guard_types(&f, &sigs);
        assert_eq!(
            guarded,
            parse_one("(exists (?Y) (and (subclass ?Y B) (q ?Y)))")
        );
    }

    #[test]
    fn guard_types_is_idempotent() {
        let sigs = build_signatures(&parse_all(
            "(domain p 1 A) (domain p 2 B) (domain q 1 A) (domainSubclass r 1 C)",
        ))
        .unwrap();
        let formulas = [
            "(=> (p ?X ?Y) (q ?X))",
            "(exists (?Y) (p ?Y ?Y))",
            "(forall (?X) (=> (r ?X) (exists (?Y) (p ?X ?Y))))",
            "(p a b)",
            "(=> (instance ?X A) (q ?X))",
        ];
        for text in formulas {
            let f = parse_one(text);
            let once = guard_types(&f, &sigs);
            let twice = guard_types(&once, &sigs);
            assert_eq!(once, twice, "guarding not idempotent for {text}");
        }
    }

    #[test]
    fn guard_types_deduplicates_guards() {
        let sigs = build_signatures(&parse_all("(domain p 1 A) (domain q 1 A)")).unwrap();
        let f = parse_one("(=> (and (p ?X) (p ?X)) (q ?X))");
        let guarded = guard_types(&f, &sigs);
        match &guarded {
            Formula::Forall(_, body) => match &**body {
                Formula::Implies(antecedent, _) => {
                    assert!(is_guard_shaped(antecedent, &["X".to_string()]));
                }
                other => panic!("expected implication, got {other:?}"),
            },
            other => panic!("expected closure, got {other:?}"),
        }
    }

    #[test]
    fn translate_empty_input_yields_exactly_meta_axioms() {
        let (set, report) = translate_ontology(&[], &TranslationOptions::default());
        assert_eq!(set.axioms.len(), meta_axioms().len());
        assert!(report.dropped.is_empty());
        let counts = set.layer_counts();
        assert_eq!(counts[&LayerTag::MetaKnowledge].0, 0);
        assert_eq!(counts[&LayerTag::MetaKnowledge].1, meta_axioms().len());
    }

    #[test]
    fn translate_small_ontology_invariants() {
        let text = r#"
            (instance part TransitiveRelation)
            (domain part 1 Object)
            (domain part 2 Object)
            (subclass Device Object)
            (instance bolt1 Device)
            (part bolt1 case1)
            (documentation part "whole-part relation")
            (=> (instance ?REL TransitiveRelation)
                (=> (and (?REL ?X ?Y) (?REL ?Y ?Z)) (?REL ?X ?Z)))
        "#;
        let statements: Vec<(Formula, LayerTag)> = parse_all(text)
            .into_iter()
            .map(|f| (f, LayerTag::TopLevel))
            .collect();
        let (set, report) = translate_ontology(&statements, &TranslationOptions::default());
        set.validate().unwrap();
        assert_eq!(report.non_logical, 1);
        assert!(report.dropped.is_empty());
        // `part` occurs as an argument, so it gets a bridging axiom.
        assert!(set.axioms.iter().any(|a| a.name == "fo_bridge_part_2"));
        // Documentation is excluded from counts; the 7 logical statements
        // all land in the top layer.
        let translated: Vec<_> = set
            .axioms
            .iter()
            .filter(|a| a.layer == LayerTag::TopLevel)
            .collect();
        assert_eq!(translated.len(), 7);
    }

    #[test]
    fn translate_reports_untranslatable_statements() {
        let text = r#"
            (holdsDuring (YearFn 1990) (enemies a b))
            (related @ROW ?C)
            (instance a B)
        "#;
        let statements: Vec<(Formula, LayerTag)> = parse_all(text)
            .into_iter()
            .map(|f| (f, LayerTag::MidLevel))
            .collect();
        let (set, report) = translate_ontology(&statements, &TranslationOptions::default());
        assert_eq!(report.dropped.len(), 2);
        assert!(report.dropped[0].reason.contains("modal"));
        assert!(report.dropped[1].reason.contains("row variable"));
        assert_eq!(
            set.axioms.iter().filter(|a| a.layer == LayerTag::MidLevel).count(),
            1
        );
    }

    #[test]
    fn translate_generates_partition_schemas_for_occurring_arities() {
        let statements = vec![(parse_one("(partition Entity Physical Abstract)"), LayerTag::TopLevel)];
        let (set, _) = translate_ontology(&statements, &TranslationOptions::default());
        assert!(set.lookup("meta_partition_2_cover").is_some());
        assert!(set.lookup("meta_partition_2_disjoint").is_some());
        assert!(set.lookup("meta_partition_2_exhaustive").is_some());
        assert!(set.lookup("meta_partition_3_cover").is_none());
    }
}
