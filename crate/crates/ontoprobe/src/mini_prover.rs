//! Built-in refutation prover: clausification plus given-clause resolution.
//!
//! The calculus is binary resolution with negative-literal selection,
//! positive factoring and forward subsumption. Selection keeps the search
//! finite on the guarded, function-free problems this prover is meant
//! for, so saturation without an empty clause is reachable and certifies
//! non-entailment (for equality-free inputs). Clause selection is
//! smallest-clause-first with FIFO tie-breaking, which makes traces
//! reproducible.
//!
//! Equality is handled by generated congruence axioms rather than
//! paramodulation; they are adequate at desk scale and never show up in
//! `used_axioms`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use crate::kif::{Formula, Term};
use crate::tptp::{self, TptpProblem};
use crate::verdict::{NoProofFlag, ProofTrace, Verdict};

#[derive(Debug, Clone)]
pub struct SaturationBudget {
    pub max_clauses: usize,
    pub max_steps: usize,
    pub wall_limit: Duration,
}

impl Default for SaturationBudget {
    fn default() -> Self {
        SaturationBudget {
            max_clauses: 100_000,
            max_steps: 10_000,
            wall_limit: Duration::from_secs(60),
        }
    }
}

impl SaturationBudget {
    pub fn with_wall_limit(mut self, limit: Duration) -> Self {
        self.wall_limit = limit;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClausifyError {
    #[error("formula has a variable predicate; reify before proving")]
    VariablePredicate,
    #[error("formula has free variable `{0}`; close it first")]
    OpenFormula(String),
    #[error("row variables are not first-order; expand before proving")]
    RowVariable,
    #[error("problem has no conjecture")]
    MissingConjecture,
}

// ---------------------------------------------------------------------------
// Clause representation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum FoTerm {
    Var(usize),
    App(String, Vec<FoTerm>),
}

impl FoTerm {
    fn size(&self) -> usize {
        match self {
            FoTerm::Var(_) => 1,
            FoTerm::App(_, args) => 1 + args.iter().map(FoTerm::size).sum::<usize>(),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            FoTerm::Var(v) => Some(*v),
            FoTerm::App(_, args) => args.iter().filter_map(FoTerm::max_var).max(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct FoAtom {
    pred: String,
    args: Vec<FoTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Lit {
    positive: bool,
    atom: FoAtom,
}

impl Lit {
    fn size(&self) -> usize {
        1 + self.atom.args.iter().map(FoTerm::size).sum::<usize>()
    }
}

/// Where a clause came from, for proof attribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseSource {
    Axiom(String),
    Conjecture,
    /// Generated support clauses (equality congruence); never reported in
    /// `used_axioms`.
    Builtin,
}

#[derive(Debug, Clone)]
pub struct Clause {
    lits: Vec<Lit>,
    pub id: usize,
    pub parents: Vec<usize>,
    pub source: ClauseSource,
    /// Index of the selected negative literal, if the clause has one.
    selected: Option<usize>,
    weight: usize,
    /// Feature bloom over (sign, predicate) pairs for subsumption
    /// prefiltering.
    mask: u64,
}

impl Clause {
    fn new(mut lits: Vec<Lit>, source: ClauseSource, parents: Vec<usize>) -> Clause {
        lits.sort();
        lits.dedup();
        renumber_vars(&mut lits);
        let selected = lits.iter().position(|l| !l.positive);
        let weight = lits.iter().map(Lit::size).sum();
        let mut mask = 0u64;
        for lit in &lits {
            mask |= 1u64 << (feature_bit(lit) % 64);
        }
        Clause {
            lits,
            id: 0,
            parents,
            source,
            selected,
            weight,
            mask,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    fn is_tautology(&self) -> bool {
        self.lits.iter().any(|l| {
            !l.positive
                && self
                    .lits
                    .iter()
                    .any(|m| m.positive && m.atom == l.atom)
        })
    }

    fn max_var(&self) -> Option<usize> {
        self.lits
            .iter()
            .flat_map(|l| l.atom.args.iter().filter_map(FoTerm::max_var))
            .max()
    }
}

fn feature_bit(lit: &Lit) -> u64 {
    let mut hash: u64 = if lit.positive { 0x9e37 } else { 0x79b9 };
    for b in lit.atom.pred.bytes() {
        hash = hash.wrapping_mul(31).wrapping_add(b as u64);
    }
    hash.wrapping_add(lit.atom.args.len() as u64)
}

fn renumber_term(term: &mut FoTerm, map: &mut BTreeMap<usize, usize>) {
    match term {
        FoTerm::Var(v) => {
            let next = map.len();
            let entry = map.entry(*v).or_insert(next);
            *term = FoTerm::Var(*entry);
        }
        FoTerm::App(_, args) => args.iter_mut().for_each(|a| renumber_term(a, map)),
    }
}

fn renumber_vars(lits: &mut [Lit]) {
    let mut map = BTreeMap::new();
    for lit in lits {
        for arg in &mut lit.atom.args {
            renumber_term(arg, &mut map);
        }
    }
}

// ---------------------------------------------------------------------------
// Clausification
// ---------------------------------------------------------------------------

const EQ: &str = "=";

enum Nnf {
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Forall(usize, Box<Nnf>),
    Exists(usize, Box<Nnf>),
}

struct Clausifier {
    next_var: usize,
    next_skolem: usize,
    skolem_prefix: String,
    taken: BTreeSet<String>,
    skolems_used: BTreeSet<String>,
}

impl Clausifier {
    fn new(taken: BTreeSet<String>) -> Self {
        Clausifier {
            next_var: 0,
            next_skolem: 0,
            skolem_prefix: "sk__".to_string(),
            taken,
            skolems_used: BTreeSet::new(),
        }
    }

    fn fresh_var(&mut self) -> usize {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    fn fresh_skolem(&mut self) -> String {
        loop {
            let name = format!("{}{}", self.skolem_prefix, self.next_skolem);
            self.next_skolem += 1;
            if !self.taken.contains(&name) {
                self.skolems_used.insert(name.clone());
                return name;
            }
        }
    }

    fn term(&mut self, term: &Term, scope: &[(String, usize)]) -> Result<FoTerm, ClausifyError> {
        match term {
            Term::Constant(name) => Ok(FoTerm::App(name.clone(), Vec::new())),
            Term::Variable(name) => scope
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, v)| FoTerm::Var(*v))
                .ok_or_else(|| ClausifyError::OpenFormula(name.clone())),
            Term::RowVariable(_) => Err(ClausifyError::RowVariable),
            Term::Compound(head, args) => {
                let name = match &**head {
                    Term::Constant(name) => name.clone(),
                    _ => return Err(ClausifyError::VariablePredicate),
                };
                let args = args
                    .iter()
                    .map(|a| self.term(a, scope))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(FoTerm::App(name, args))
            }
        }
    }

    fn nnf(
        &mut self,
        f: &Formula,
        positive: bool,
        scope: &mut Vec<(String, usize)>,
    ) -> Result<Nnf, ClausifyError> {
        match f {
            Formula::Atom { predicate, args } => {
                let pred = match predicate {
                    Term::Constant(name) => name.clone(),
                    _ => return Err(ClausifyError::VariablePredicate),
                };
                let args = args
                    .iter()
                    .map(|a| self.term(a, scope))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Nnf::Lit(Lit {
                    positive,
                    atom: FoAtom { pred, args },
                }))
            }
            Formula::Equal(lhs, rhs) => {
                let args = vec![self.term(lhs, scope)?, self.term(rhs, scope)?];
                Ok(Nnf::Lit(Lit {
                    positive,
                    atom: FoAtom {
                        pred: EQ.to_string(),
                        args,
                    },
                }))
            }
            Formula::Not(inner) => self.nnf(inner, !positive, scope),
            Formula::And(parts) => {
                let converted = parts
                    .iter()
                    .map(|p| self.nnf(p, positive, scope))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(if positive {
                    Nnf::And(converted)
                } else {
                    Nnf::Or(converted)
                })
            }
            Formula::Or(parts) => {
                let converted = parts
                    .iter()
                    .map(|p| self.nnf(p, positive, scope))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(if positive {
                    Nnf::Or(converted)
                } else {
                    Nnf::And(converted)
                })
            }
            Formula::Implies(a, b) => {
                let left = self.nnf(a, !positive, scope)?;
                let right = self.nnf(b, positive, scope)?;
                Ok(if positive {
                    Nnf::Or(vec![left, right])
                } else {
                    // ~(a => b) == a & ~b; `left` already carries the flip.
                    Nnf::And(vec![left, right])
                })
            }
            Formula::Iff(a, b) => {
                let expanded = Formula::And(vec![
                    Formula::Implies(a.clone(), b.clone()),
                    Formula::Implies(b.clone(), a.clone()),
                ]);
                self.nnf(&expanded, positive, scope)
            }
            Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
                let universal =
                    matches!(f, Formula::Forall(..)) == positive;
                let depth = scope.len();
                let mut indices = Vec::with_capacity(vars.len());
                for var in vars {
                    let idx = self.fresh_var();
                    scope.push((var.clone(), idx));
                    indices.push(idx);
                }
                let mut inner = self.nnf(body, positive, scope)?;
                scope.truncate(depth);
                for idx in indices.into_iter().rev() {
                    inner = if universal {
                        Nnf::Forall(idx, Box::new(inner))
                    } else {
                        Nnf::Exists(idx, Box::new(inner))
                    };
                }
                Ok(inner)
            }
        }
    }

    fn skolemize(
        &mut self,
        nnf: Nnf,
        universals: &mut Vec<usize>,
        subst: &mut HashMap<usize, FoTerm>,
    ) -> Nnf {
        match nnf {
            Nnf::Lit(mut lit) => {
                for arg in &mut lit.atom.args {
                    apply_in_place(arg, subst);
                }
                Nnf::Lit(lit)
            }
            Nnf::And(parts) => Nnf::And(
                parts
                    .into_iter()
                    .map(|p| self.skolemize(p, universals, subst))
                    .collect(),
            ),
            Nnf::Or(parts) => Nnf::Or(
                parts
                    .into_iter()
                    .map(|p| self.skolemize(p, universals, subst))
                    .collect(),
            ),
            Nnf::Forall(v, body) => {
                universals.push(v);
                let inner = self.skolemize(*body, universals, subst);
                universals.pop();
                inner
            }
            Nnf::Exists(v, body) => {
                let name = self.fresh_skolem();
                let args = universals.iter().map(|&u| FoTerm::Var(u)).collect();
                subst.insert(v, FoTerm::App(name, args));
                let inner = self.skolemize(*body, universals, subst);
                subst.remove(&v);
                inner
            }
        }
    }

    fn cnf(nnf: Nnf) -> Vec<Vec<Lit>> {
        match nnf {
            Nnf::Lit(lit) => vec![vec![lit]],
            Nnf::And(parts) => parts.into_iter().flat_map(Self::cnf).collect(),
            Nnf::Or(parts) => {
                let mut acc: Vec<Vec<Lit>> = vec![Vec::new()];
                for part in parts {
                    let clauses = Self::cnf(part);
                    let mut next = Vec::with_capacity(acc.len() * clauses.len());
                    for base in &acc {
                        for clause in &clauses {
                            let mut merged = base.clone();
                            merged.extend(clause.iter().cloned());
                            next.push(merged);
                        }
                    }
                    acc = next;
                }
                acc
            }
            Nnf::Forall(_, body) | Nnf::Exists(_, body) => Self::cnf(*body),
        }
    }

    fn clausify(&mut self, source: ClauseSource, f: &Formula) -> Result<Vec<Clause>, ClausifyError> {
        let nnf = self.nnf(f, true, &mut Vec::new())?;
        let skolemized = self.skolemize(nnf, &mut Vec::new(), &mut HashMap::new());
        Ok(Self::cnf(skolemized)
            .into_iter()
            .map(|lits| Clause::new(lits, source.clone(), Vec::new()))
            .filter(|c| !c.is_tautology())
            .collect())
    }
}

fn formula_symbols(f: &Formula, out: &mut BTreeSet<String>) {
    fn term_symbols(term: &Term, out: &mut BTreeSet<String>) {
        match term {
            Term::Constant(name) => {
                out.insert(name.clone());
            }
            Term::Compound(head, args) => {
                term_symbols(head, out);
                args.iter().for_each(|a| term_symbols(a, out));
            }
            _ => {}
        }
    }
    match f {
        Formula::Atom { predicate, args } => {
            term_symbols(predicate, out);
            args.iter().for_each(|a| term_symbols(a, out));
        }
        Formula::Equal(lhs, rhs) => {
            term_symbols(lhs, out);
            term_symbols(rhs, out);
        }
        Formula::Not(inner) => formula_symbols(inner, out),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().for_each(|p| formula_symbols(p, out))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            formula_symbols(a, out);
            formula_symbols(b, out);
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => formula_symbols(body, out),
    }
}

/// Clausify one closed formula. Exposed for tests and callers that manage
/// their own clause sets; `PreparedProblem` is the usual entry point.
pub fn clausify(source: ClauseSource, f: &Formula) -> Result<Vec<Clause>, ClausifyError> {
    let mut taken = BTreeSet::new();
    formula_symbols(f, &mut taken);
    Clausifier::new(taken).clausify(source, f)
}

// ---------------------------------------------------------------------------
// Unification, matching, subsumption
// ---------------------------------------------------------------------------

fn walk<'a>(mut term: &'a FoTerm, subst: &'a HashMap<usize, FoTerm>) -> &'a FoTerm {
    while let FoTerm::Var(v) = term {
        match subst.get(v) {
            Some(next) => term = next,
            None => break,
        }
    }
    term
}

fn occurs(v: usize, term: &FoTerm, subst: &HashMap<usize, FoTerm>) -> bool {
    match walk(term, subst) {
        FoTerm::Var(u) => *u == v,
        FoTerm::App(_, args) => args.iter().any(|a| occurs(v, a, subst)),
    }
}

fn unify(a: &FoTerm, b: &FoTerm, subst: &mut HashMap<usize, FoTerm>) -> bool {
    let a = walk(a, subst).clone();
    let b = walk(b, subst).clone();
    match (a, b) {
        (FoTerm::Var(u), FoTerm::Var(v)) if u == v => true,
        (FoTerm::Var(u), other) | (other, FoTerm::Var(u)) => {
            if occurs(u, &other, subst) {
                false
            } else {
                subst.insert(u, other);
                true
            }
        }
        (FoTerm::App(f, fargs), FoTerm::App(g, gargs)) => {
            f == g
                && fargs.len() == gargs.len()
                && fargs.iter().zip(&gargs).all(|(x, y)| unify(x, y, subst))
        }
    }
}

fn unify_atoms(a: &FoAtom, b: &FoAtom, subst: &mut HashMap<usize, FoTerm>) -> bool {
    a.pred == b.pred
        && a.args.len() == b.args.len()
        && a.args.iter().zip(&b.args).all(|(x, y)| unify(x, y, subst))
}

fn apply(term: &FoTerm, subst: &HashMap<usize, FoTerm>) -> FoTerm {
    match walk(term, subst) {
        FoTerm::Var(v) => FoTerm::Var(*v),
        FoTerm::App(name, args) => FoTerm::App(
            name.clone(),
            args.iter().map(|a| apply(a, subst)).collect(),
        ),
    }
}

fn apply_in_place(term: &mut FoTerm, subst: &HashMap<usize, FoTerm>) {
    *term = apply(term, subst);
}

fn apply_lit(lit: &Lit, subst: &HashMap<usize, FoTerm>) -> Lit {
    Lit {
        positive: lit.positive,
        atom: FoAtom {
            pred: lit.atom.pred.clone(),
            args: lit.atom.args.iter().map(|a| apply(a, subst)).collect(),
        },
    }
}

/// One-way matching: bind pattern variables so the pattern becomes the
/// target. Target variables are left alone.
fn match_term(pattern: &FoTerm, target: &FoTerm, bind: &mut HashMap<usize, FoTerm>) -> bool {
    match pattern {
        FoTerm::Var(v) => match bind.get(v) {
            Some(bound) => bound == target,
            None => {
                bind.insert(*v, target.clone());
                true
            }
        },
        FoTerm::App(f, fargs) => match target {
            FoTerm::App(g, gargs) => {
                f == g
                    && fargs.len() == gargs.len()
                    && fargs.iter().zip(gargs).all(|(p, t)| match_term(p, t, bind))
            }
            FoTerm::Var(_) => false,
        },
    }
}

fn subsumes_from(
    c: &Clause,
    d: &Clause,
    index: usize,
    bind: &mut HashMap<usize, FoTerm>,
) -> bool {
    if index == c.lits.len() {
        return true;
    }
    let pattern = &c.lits[index];
    for candidate in &d.lits {
        if candidate.positive != pattern.positive
            || candidate.atom.pred != pattern.atom.pred
            || candidate.atom.args.len() != pattern.atom.args.len()
        {
            continue;
        }
        let mut trial = bind.clone();
        let ok = pattern
            .atom
            .args
            .iter()
            .zip(&candidate.atom.args)
            .all(|(p, t)| match_term(p, t, &mut trial));
        if ok && subsumes_from(c, d, index + 1, &mut trial) {
            *bind = trial;
            return true;
        }
    }
    false
}

/// Does `c` subsume `d` (some instance of `c` is a sub-clause of `d`)?
fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.lits.len() > d.lits.len() || c.weight > d.weight || (c.mask & !d.mask) != 0 {
        return false;
    }
    subsumes_from(c, d, 0, &mut HashMap::new())
}

fn offset_term(term: &FoTerm, offset: usize) -> FoTerm {
    match term {
        FoTerm::Var(v) => FoTerm::Var(v + offset),
        FoTerm::App(name, args) => FoTerm::App(
            name.clone(),
            args.iter().map(|a| offset_term(a, offset)).collect(),
        ),
    }
}

fn rename_apart(clause: &Clause, offset: usize) -> Vec<Lit> {
    clause
        .lits
        .iter()
        .map(|l| Lit {
            positive: l.positive,
            atom: FoAtom {
                pred: l.atom.pred.clone(),
                args: l.atom.args.iter().map(|a| offset_term(a, offset)).collect(),
            },
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Equality support
// ---------------------------------------------------------------------------

fn congruence_clauses(clauses: &[Clause]) -> Vec<Clause> {
    let mut has_eq = false;
    let mut functions: BTreeSet<(String, usize)> = BTreeSet::new();
    let mut predicates: BTreeSet<(String, usize)> = BTreeSet::new();

    fn visit_term(term: &FoTerm, functions: &mut BTreeSet<(String, usize)>) {
        if let FoTerm::App(name, args) = term {
            functions.insert((name.clone(), args.len()));
            args.iter().for_each(|a| visit_term(a, functions));
        }
    }

    for clause in clauses {
        for lit in &clause.lits {
            if lit.atom.pred == EQ {
                has_eq = true;
            } else {
                predicates.insert((lit.atom.pred.clone(), lit.atom.args.len()));
            }
            for arg in &lit.atom.args {
                visit_term(arg, &mut functions);
            }
        }
    }
    if !has_eq {
        return Vec::new();
    }

    let eq = |a: FoTerm, b: FoTerm, positive: bool| Lit {
        positive,
        atom: FoAtom {
            pred: EQ.to_string(),
            args: vec![a, b],
        },
    };
    let v = FoTerm::Var;
    let mut out = Vec::new();
    out.push(Clause::new(
        vec![eq(v(0), v(0), true)],
        ClauseSource::Builtin,
        Vec::new(),
    ));
    out.push(Clause::new(
        vec![eq(v(0), v(1), false), eq(v(1), v(0), true)],
        ClauseSource::Builtin,
        Vec::new(),
    ));
    out.push(Clause::new(
        vec![
            eq(v(0), v(1), false),
            eq(v(1), v(2), false),
            eq(v(0), v(2), true),
        ],
        ClauseSource::Builtin,
        Vec::new(),
    ));
    for (name, arity) in functions {
        if arity == 0 {
            continue;
        }
        let xs: Vec<FoTerm> = (0..arity).map(v).collect();
        let ys: Vec<FoTerm> = (arity..2 * arity).map(v).collect();
        let mut lits: Vec<Lit> = (0..arity)
            .map(|i| eq(xs[i].clone(), ys[i].clone(), false))
            .collect();
        lits.push(eq(
            FoTerm::App(name.clone(), xs),
            FoTerm::App(name, ys),
            true,
        ));
        out.push(Clause::new(lits, ClauseSource::Builtin, Vec::new()));
    }
    for (name, arity) in predicates {
        if arity == 0 {
            continue;
        }
        let xs: Vec<FoTerm> = (0..arity).map(v).collect();
        let ys: Vec<FoTerm> = (arity..2 * arity).map(v).collect();
        let mut lits: Vec<Lit> = (0..arity)
            .map(|i| eq(xs[i].clone(), ys[i].clone(), false))
            .collect();
        lits.push(Lit {
            positive: false,
            atom: FoAtom {
                pred: name.clone(),
                args: xs,
            },
        });
        lits.push(Lit {
            positive: true,
            atom: FoAtom {
                pred: name,
                args: ys,
            },
        });
        out.push(Clause::new(lits, ClauseSource::Builtin, Vec::new()));
    }
    out
}

// ---------------------------------------------------------------------------
// Saturation
// ---------------------------------------------------------------------------

struct Saturation {
    arena: Vec<Clause>,
    /// (weight, id) ordered queue; ids are insertion-ordered so ties are
    /// FIFO.
    passive: BTreeSet<(usize, usize)>,
    active: Vec<usize>,
    live: Vec<usize>,
}

enum Step {
    Empty(usize),
    Continue,
    ClauseLimit,
}

impl Saturation {
    fn new() -> Self {
        Saturation {
            arena: Vec::new(),
            passive: BTreeSet::new(),
            active: Vec::new(),
            live: Vec::new(),
        }
    }

    fn insert(&mut self, mut clause: Clause, max_clauses: usize) -> Step {
        if clause.is_tautology() {
            return Step::Continue;
        }
        if self.arena.len() >= max_clauses {
            return Step::ClauseLimit;
        }
        clause.id = self.arena.len();
        if clause.is_empty() {
            let id = clause.id;
            self.arena.push(clause);
            return Step::Empty(id);
        }
        // Forward subsumption against everything still live.
        for &other in &self.live {
            if subsumes(&self.arena[other], &clause) {
                return Step::Continue;
            }
        }
        self.passive.insert((clause.weight, clause.id));
        self.live.push(clause.id);
        self.arena.push(clause);
        Step::Continue
    }

    fn resolvents(&self, given: usize, partner: usize) -> Vec<Clause> {
        let g = &self.arena[given];
        let p = &self.arena[partner];
        // Inferences pair a clause's selected negative literal with the
        // literals of a positive clause.
        let (neg, pos) = match (g.selected, p.selected) {
            (Some(_), None) => (g, p),
            (None, Some(_)) => (p, g),
            _ => return Vec::new(),
        };
        let offset = neg.max_var().map_or(0, |v| v + 1);
        let pos_lits = rename_apart(pos, offset);
        let neg_selected = &neg.lits[neg.selected.unwrap()];

        let mut out = Vec::new();
        for (i, pos_lit) in pos_lits.iter().enumerate() {
            let mut subst = HashMap::new();
            if !unify_atoms(&neg_selected.atom, &pos_lit.atom, &mut subst) {
                continue;
            }
            let mut lits = Vec::with_capacity(neg.lits.len() + pos_lits.len() - 2);
            for (j, lit) in neg.lits.iter().enumerate() {
                if j != neg.selected.unwrap() {
                    lits.push(apply_lit(lit, &subst));
                }
            }
            for (j, lit) in pos_lits.iter().enumerate() {
                if j != i {
                    lits.push(apply_lit(lit, &subst));
                }
            }
            out.push(Clause::new(
                lits,
                ClauseSource::Builtin,
                vec![neg.id, pos.id],
            ));
        }
        out
    }

    fn factors(&self, given: usize) -> Vec<Clause> {
        let clause = &self.arena[given];
        if clause.selected.is_some() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for i in 0..clause.lits.len() {
            for j in (i + 1)..clause.lits.len() {
                let mut subst = HashMap::new();
                if unify_atoms(&clause.lits[i].atom, &clause.lits[j].atom, &mut subst) {
                    let lits = clause
                        .lits
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, l)| apply_lit(l, &subst))
                        .collect();
                    out.push(Clause::new(lits, ClauseSource::Builtin, vec![clause.id]));
                }
            }
        }
        out
    }

    fn trace_sources(&self, empty_id: usize) -> BTreeSet<String> {
        let mut used = BTreeSet::new();
        let mut queue = vec![empty_id];
        let mut seen = BTreeSet::new();
        while let Some(id) = queue.pop() {
            if !seen.insert(id) {
                continue;
            }
            let clause = &self.arena[id];
            if let ClauseSource::Axiom(name) = &clause.source {
                used.insert(name.clone());
            }
            queue.extend(clause.parents.iter().copied());
        }
        used
    }

    fn proof_listing(&self, empty_id: usize) -> String {
        let mut ids: Vec<usize> = Vec::new();
        let mut queue = vec![empty_id];
        let mut seen = BTreeSet::new();
        while let Some(id) = queue.pop() {
            if !seen.insert(id) {
                continue;
            }
            ids.push(id);
            queue.extend(self.arena[id].parents.iter().copied());
        }
        ids.sort_unstable();
        let mut out = String::new();
        out.push_str("% SZS status Theorem\n% SZS output start Proof\n");
        for id in ids {
            let clause = &self.arena[id];
            let body = render_clause(clause);
            match &clause.source {
                ClauseSource::Axiom(name) => {
                    out.push_str(&format!(
                        "cnf(c{id}, axiom, ({body}), file('problem.p', {name})).\n"
                    ));
                }
                ClauseSource::Conjecture => {
                    out.push_str(&format!("cnf(c{id}, negated_conjecture, ({body})).\n"));
                }
                ClauseSource::Builtin => {
                    if clause.parents.is_empty() {
                        out.push_str(&format!("cnf(c{id}, plain, ({body})).\n"));
                    } else {
                        let parents: Vec<String> =
                            clause.parents.iter().map(|p| format!("c{p}")).collect();
                        out.push_str(&format!(
                            "cnf(c{id}, plain, ({body}), inference(resolution, [], [{}])).\n",
                            parents.join(", ")
                        ));
                    }
                }
            }
        }
        out.push_str("% SZS output end Proof\n");
        out
    }
}

fn render_term_display(term: &FoTerm, out: &mut String) {
    match term {
        FoTerm::Var(v) => out.push_str(&format!("X{v}")),
        FoTerm::App(name, args) => {
            out.push_str(name);
            if !args.is_empty() {
                out.push('(');
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    render_term_display(arg, out);
                }
                out.push(')');
            }
        }
    }
}

fn render_clause(clause: &Clause) -> String {
    if clause.lits.is_empty() {
        return "$false".to_string();
    }
    let mut out = String::new();
    for (i, lit) in clause.lits.iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        if !lit.positive {
            out.push('~');
        }
        out.push_str(&lit.atom.pred);
        if !lit.atom.args.is_empty() {
            out.push('(');
            for (j, arg) in lit.atom.args.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                render_term_display(arg, &mut out);
            }
            out.push(')');
        }
    }
    out
}

/// Run the given-clause loop over axiom clauses plus negated-conjecture
/// clauses.
pub fn saturate(clauses: Vec<Clause>, budget: &SaturationBudget) -> Verdict {
    let start = Instant::now();
    let mut sat = Saturation::new();
    let elapsed_ms = |start: Instant| start.elapsed().as_millis() as u64;

    for clause in clauses {
        match sat.insert(clause, budget.max_clauses) {
            Step::Empty(id) => {
                return Verdict::ProofFound(ProofTrace {
                    used_axioms: sat.trace_sources(id),
                    raw_output: sat.proof_listing(id),
                    cpu_ms: elapsed_ms(start),
                    incomplete: false,
                });
            }
            Step::ClauseLimit => {
                return Verdict::NoProofWithinLimit {
                    flag: None,
                    raw_output: "% SZS status ResourceOut\n".to_string(),
                    cpu_ms: elapsed_ms(start),
                }
            }
            Step::Continue => {}
        }
    }

    let mut steps = 0usize;
    loop {
        if start.elapsed() > budget.wall_limit || steps >= budget.max_steps {
            return Verdict::NoProofWithinLimit {
                flag: None,
                raw_output: "% SZS status ResourceOut\n".to_string(),
                cpu_ms: elapsed_ms(start),
            };
        }
        let Some(&(weight, given)) = sat.passive.iter().next() else {
            // Saturation without an empty clause certifies non-entailment
            // for equality-free inputs.
            return Verdict::NoProofWithinLimit {
                flag: Some(NoProofFlag::Saturated),
                raw_output: "% SZS status CounterSatisfiable\n".to_string(),
                cpu_ms: elapsed_ms(start),
            };
        };
        sat.passive.remove(&(weight, given));
        steps += 1;

        sat.active.push(given);

        let mut inferred = sat.factors(given);
        for i in 0..sat.active.len() {
            let partner = sat.active[i];
            if partner == given {
                continue;
            }
            inferred.extend(sat.resolvents(given, partner));
        }
        for clause in inferred {
            match sat.insert(clause, budget.max_clauses) {
                Step::Empty(id) => {
                    return Verdict::ProofFound(ProofTrace {
                        used_axioms: sat.trace_sources(id),
                        raw_output: sat.proof_listing(id),
                        cpu_ms: elapsed_ms(start),
                        incomplete: false,
                    });
                }
                Step::ClauseLimit => {
                    return Verdict::NoProofWithinLimit {
                        flag: None,
                        raw_output: "% SZS status ResourceOut\n".to_string(),
                        cpu_ms: elapsed_ms(start),
                    }
                }
                Step::Continue => {}
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Problem-level API
// ---------------------------------------------------------------------------

/// Axioms clausified once, reusable across many conjectures.
pub struct PreparedProblem {
    axioms: Vec<(String, Formula)>,
    axiom_clauses: Vec<Clause>,
    axiom_symbols: BTreeSet<String>,
    skolems_used: BTreeSet<String>,
    next_skolem: usize,
}

impl PreparedProblem {
    pub fn new(axioms: Vec<(String, Formula)>) -> Result<Self, ClausifyError> {
        let mut symbols = BTreeSet::new();
        for (_, f) in &axioms {
            formula_symbols(f, &mut symbols);
        }
        let mut clausifier = Clausifier::new(symbols.clone());
        let mut clauses = Vec::new();
        for (name, formula) in &axioms {
            clauses.extend(clausifier.clausify(ClauseSource::Axiom(name.clone()), formula)?);
        }
        Ok(PreparedProblem {
            axioms,
            axiom_clauses: clauses,
            axiom_symbols: symbols,
            skolems_used: clausifier.skolems_used,
            next_skolem: clausifier.next_skolem,
        })
    }

    pub fn axiom_names(&self) -> BTreeSet<String> {
        self.axioms.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Refute the negation of `conjecture` against the prepared axioms.
    pub fn prove(&self, conjecture: &Formula, budget: &SaturationBudget) -> Result<Verdict, ClausifyError> {
        let mut conjecture_symbols = BTreeSet::new();
        formula_symbols(conjecture, &mut conjecture_symbols);

        // A conjecture constant colliding with an axiom skolem would
        // conflate distinct individuals; rebuild with the union in view.
        if conjecture_symbols.intersection(&self.skolems_used).next().is_some() {
            let mut taken = self.axiom_symbols.clone();
            taken.extend(conjecture_symbols.iter().cloned());
            let mut clausifier = Clausifier::new(taken);
            let mut clauses = Vec::new();
            for (name, formula) in &self.axioms {
                clauses.extend(clausifier.clausify(ClauseSource::Axiom(name.clone()), formula)?);
            }
            return finish_prove(clauses, clausifier, conjecture, budget);
        }

        let mut taken = self.axiom_symbols.clone();
        taken.extend(conjecture_symbols);
        let mut clausifier = Clausifier::new(taken);
        clausifier.next_skolem = self.next_skolem;
        finish_prove(self.axiom_clauses.clone(), clausifier, conjecture, budget)
    }
}

fn finish_prove(
    mut clauses: Vec<Clause>,
    mut clausifier: Clausifier,
    conjecture: &Formula,
    budget: &SaturationBudget,
) -> Result<Verdict, ClausifyError> {
    let negated = conjecture.negated();
    clauses.extend(clausifier.clausify(ClauseSource::Conjecture, &negated)?);
    let congruence = congruence_clauses(&clauses);
    clauses.extend(congruence);
    Ok(saturate(clauses, budget))
}

/// Prove a parsed TPTP problem; the same files the external bridge
/// consumes.
pub fn prove_problem(problem: &TptpProblem, budget: &SaturationBudget) -> Result<Verdict, ClausifyError> {
    let conjecture = match &problem.conjecture {
        Some((_, f)) => f,
        None => return Err(ClausifyError::MissingConjecture),
    };
    let prepared = PreparedProblem::new(problem.axioms.clone())?;
    prepared.prove(conjecture, budget)
}

/// Parse and prove TPTP problem text.
pub fn prove_problem_text(text: &str, budget: &SaturationBudget) -> Result<Verdict, String> {
    let problem = tptp::parse_problem(text).map_err(|e| e.to_string())?;
    prove_problem(&problem, budget).map_err(|e| e.to_string())
}
