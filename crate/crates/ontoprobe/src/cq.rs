//! Competency-question generation from lexical mapping resources.
//!
//! Truth-tests are instantiated from declarative pattern templates over
//! synset-to-concept mapping entries, antonym pairs and morphosemantic
//! links; falsity-tests are their negations. Generation is deterministic:
//! stable ordering, stable ids, duplicates removed up to variable
//! renaming.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::kif::{alpha_normalize, collect_variables, parse_suo_kif, Formula, Term};
use crate::tptp;

#[derive(Debug, thiserror::Error)]
pub enum CqError {
    #[error("cannot read `{path}`: {message}")]
    UnreadableFile { path: String, message: String },
    #[error("template `{template}` cannot be filled: placeholder ${placeholder} exceeds the tuple")]
    TemplateArityMismatch { template: String, placeholder: usize },
    #[error("template `{template}` schema does not parse: {message}")]
    TemplateSchema { template: String, message: String },
    #[error("template `{template}` produced a non-closed conjecture")]
    TemplateNotClosed { template: String },
    #[error("bad template file: {0}")]
    TemplateFile(String),
    #[error("bad suite line {line}: {message}")]
    SuiteLine { line: usize, message: String },
    #[error("cannot write suite: {0}")]
    WriteFailed(String),
}

fn read_file(path: &Path) -> Result<String, CqError> {
    std::fs::read_to_string(path).map_err(|e| CqError::UnreadableFile {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

// ---------------------------------------------------------------------------
// Input resources
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Pos {
    fn from_tag(tag: &str) -> Option<Pos> {
        match tag {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" => Some(Pos::Adjective),
            "r" => Some(Pos::Adverb),
            _ => None,
        }
    }
}

/// WordNet-to-ontology mapping strength, parsed from the trailing marker
/// of a `&%Concept<marker>` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MappingRelation {
    /// `=`
    Equivalent,
    /// `+`
    Subsuming,
    /// `@`
    Instance,
}

impl MappingRelation {
    fn from_marker(marker: char) -> Option<MappingRelation> {
        match marker {
            '=' => Some(MappingRelation::Equivalent),
            '+' => Some(MappingRelation::Subsuming),
            '@' => Some(MappingRelation::Instance),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingEntry {
    pub synset: String,
    pub pos: Pos,
    pub words: Vec<String>,
    pub concept: String,
    pub relation: MappingRelation,
}

/// Parsed mapping file plus the 1-based numbers of skipped lines.
#[derive(Debug, Clone, Default)]
pub struct MappingLoad {
    pub entries: Vec<MappingEntry>,
    pub skipped_lines: Vec<usize>,
}

fn parse_mapping_line(line: &str) -> Option<MappingEntry> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 4 {
        return None;
    }
    let synset = fields[0].trim();
    let pos = Pos::from_tag(fields[1].trim())?;
    let words: Vec<String> = fields[2]
        .split(',')
        .map(|w| w.trim().to_string())
        .filter(|w| !w.is_empty())
        .collect();
    let concept_field = fields[3].trim().strip_prefix("&%")?;
    let marker = concept_field.chars().last()?;
    let relation = MappingRelation::from_marker(marker)?;
    let concept = &concept_field[..concept_field.len() - marker.len_utf8()];
    if synset.is_empty() || concept.is_empty() || words.is_empty() {
        return None;
    }
    Some(MappingEntry {
        synset: synset.to_string(),
        pos,
        words,
        concept: concept.to_string(),
        relation,
    })
}

/// Parse tab-separated mapping lines: synset, pos tag, comma-separated
/// lemmas, `&%Concept<marker>`. Invalid lines are skipped and reported.
pub fn parse_mapping(text: &str) -> MappingLoad {
    let mut load = MappingLoad::default();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(';') || trimmed.starts_with('#') {
            continue;
        }
        match parse_mapping_line(line) {
            Some(entry) => load.entries.push(entry),
            None => load.skipped_lines.push(i + 1),
        }
    }
    load
}

pub fn load_mapping(path: &Path) -> Result<MappingLoad, CqError> {
    Ok(parse_mapping(&read_file(path)?))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MorphoLink {
    pub verb_synset: String,
    pub noun_synset: String,
    /// Kept verbatim; templates select by name, unknown relations are
    /// simply never selected.
    pub relation: String,
}

#[derive(Debug, Clone, Default)]
pub struct MorphoLoad {
    pub links: Vec<MorphoLink>,
    pub skipped_lines: Vec<usize>,
}

/// Parse `verb_synset,relation,noun_synset` CSV rows, deduplicated.
pub fn parse_morpholinks(text: &str) -> MorphoLoad {
    let mut load = MorphoLoad::default();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with(';') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
            load.skipped_lines.push(i + 1);
            continue;
        }
        let link = MorphoLink {
            verb_synset: fields[0].to_string(),
            relation: fields[1].to_string(),
            noun_synset: fields[2].to_string(),
        };
        if seen.insert(link.clone()) {
            load.links.push(link);
        }
    }
    load
}

pub fn load_morpholinks(path: &Path) -> Result<MorphoLoad, CqError> {
    Ok(parse_morpholinks(&read_file(path)?))
}

#[derive(Debug, Clone, Default)]
pub struct AntonymLoad {
    /// Canonicalized (lexicographically ordered) synset pairs, first
    /// occurrence order, mirrored duplicates removed.
    pub pairs: Vec<(String, String)>,
    pub skipped_lines: Vec<usize>,
}

/// Parse tab-separated antonym synset pairs.
pub fn parse_antonyms(text: &str) -> AntonymLoad {
    let mut load = AntonymLoad::default();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with(';') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            load.skipped_lines.push(i + 1);
            continue;
        }
        let (a, b) = if fields[0] <= fields[1] {
            (fields[0].to_string(), fields[1].to_string())
        } else {
            (fields[1].to_string(), fields[0].to_string())
        };
        if seen.insert((a.clone(), b.clone())) {
            load.pairs.push((a, b));
        }
    }
    load
}

pub fn load_antonyms(path: &Path) -> Result<AntonymLoad, CqError> {
    Ok(parse_antonyms(&read_file(path)?))
}

// ---------------------------------------------------------------------------
// Templates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TupleSource {
    Antonym,
    Morpholink,
}

fn default_mapping_relations() -> Vec<MappingRelation> {
    vec![MappingRelation::Equivalent]
}

fn default_distinct() -> bool {
    true
}

/// A declarative competency-question pattern: a selector over input
/// tuples and a conjecture schema with `$1`/`$2` placeholders.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PatternTemplate {
    pub id: String,
    pub source: TupleSource,
    /// For `morpholink` templates: which link relation to select.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_relation: Option<String>,
    /// For `antonym` templates: required part of speech of both synsets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<Pos>,
    /// Which mapping markers may fill the tuple.
    #[serde(default = "default_mapping_relations")]
    pub mapping_relations: Vec<MappingRelation>,
    /// Skip tuples whose two concepts coincide.
    #[serde(default = "default_distinct")]
    pub distinct_concepts: bool,
    /// SUO-KIF conjecture schema; `$1` and `$2` stand for the tuple
    /// concepts.
    pub conjecture: String,
}

/// The two shipped default patterns: antonymous processes are expected to
/// be disjoint, and an `event` morpholink from a verb concept to a noun
/// concept is expected to be realizable.
pub fn default_templates() -> Vec<PatternTemplate> {
    vec![
        PatternTemplate {
            id: "antonym_process_disjoint".to_string(),
            source: TupleSource::Antonym,
            link_relation: None,
            pos: Some(Pos::Verb),
            mapping_relations: vec![MappingRelation::Equivalent],
            distinct_concepts: true,
            conjecture: "(not (exists (?X) (and (instance ?X $1) (instance ?X $2))))".to_string(),
        },
        PatternTemplate {
            id: "event_noun_realization".to_string(),
            source: TupleSource::Morpholink,
            link_relation: Some("event".to_string()),
            pos: None,
            mapping_relations: vec![MappingRelation::Equivalent],
            distinct_concepts: false,
            conjecture: "(=> (exists (?X) (instance ?X $1)) (exists (?Y) (instance ?Y $2)))"
                .to_string(),
        },
    ]
}

pub fn load_templates(path: &Path) -> Result<Vec<PatternTemplate>, CqError> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| CqError::TemplateFile(e.to_string()))
}

// ---------------------------------------------------------------------------
// Test cases
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Truth,
    Falsity,
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestKind::Truth => write!(f, "truth"),
            TestKind::Falsity => write!(f, "falsity"),
        }
    }
}

/// One competency question: a closed conjecture plus provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub id: String,
    pub kind: TestKind,
    pub conjecture: Formula,
    pub pattern: String,
    pub source: String,
}

struct ParsedTemplate<'a> {
    template: &'a PatternTemplate,
    schema: Formula,
    placeholders: Vec<usize>,
}

fn placeholder_index(term: &Term) -> Option<usize> {
    match term {
        Term::Constant(name) => name.strip_prefix('$').and_then(|n| n.parse().ok()),
        _ => None,
    }
}

fn collect_placeholders(f: &Formula, out: &mut BTreeSet<usize>) {
    fn term_placeholders(term: &Term, out: &mut BTreeSet<usize>) {
        match term {
            Term::Compound(head, args) => {
                term_placeholders(head, out);
                args.iter().for_each(|a| term_placeholders(a, out));
            }
            other => {
                if let Some(i) = placeholder_index(other) {
                    out.insert(i);
                }
            }
        }
    }
    match f {
        Formula::Atom { predicate, args } => {
            term_placeholders(predicate, out);
            args.iter().for_each(|a| term_placeholders(a, out));
        }
        Formula::Equal(lhs, rhs) => {
            term_placeholders(lhs, out);
            term_placeholders(rhs, out);
        }
        Formula::Not(inner) => collect_placeholders(inner, out),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().for_each(|p| collect_placeholders(p, out))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_placeholders(a, out);
            collect_placeholders(b, out);
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => collect_placeholders(body, out),
    }
}

fn substitute_placeholders(f: &Formula, values: &[&str]) -> Formula {
    fn subst_term(term: &Term, values: &[&str]) -> Term {
        match term {
            Term::Compound(head, args) => Term::Compound(
                Box::new(subst_term(head, values)),
                args.iter().map(|a| subst_term(a, values)).collect(),
            ),
            other => match placeholder_index(other) {
                Some(i) if i >= 1 && i <= values.len() => Term::constant(values[i - 1]),
                _ => other.clone(),
            },
        }
    }
    match f {
        Formula::Atom { predicate, args } => Formula::Atom {
            predicate: subst_term(predicate, values),
            args: args.iter().map(|a| subst_term(a, values)).collect(),
        },
        Formula::Equal(lhs, rhs) => {
            Formula::Equal(subst_term(lhs, values), subst_term(rhs, values))
        }
        Formula::Not(inner) => Formula::Not(Box::new(substitute_placeholders(inner, values))),
        Formula::And(parts) => Formula::And(
            parts.iter().map(|p| substitute_placeholders(p, values)).collect(),
        ),
        Formula::Or(parts) => Formula::Or(
            parts.iter().map(|p| substitute_placeholders(p, values)).collect(),
        ),
        Formula::Implies(a, b) => Formula::Implies(
            Box::new(substitute_placeholders(a, values)),
            Box::new(substitute_placeholders(b, values)),
        ),
        Formula::Iff(a, b) => Formula::Iff(
            Box::new(substitute_placeholders(a, values)),
            Box::new(substitute_placeholders(b, values)),
        ),
        Formula::Forall(vars, body) => Formula::Forall(
            vars.clone(),
            Box::new(substitute_placeholders(body, values)),
        ),
        Formula::Exists(vars, body) => Formula::Exists(
            vars.clone(),
            Box::new(substitute_placeholders(body, values)),
        ),
    }
}

fn parse_template(template: &PatternTemplate) -> Result<ParsedTemplate<'_>, CqError> {
    let parsed = parse_suo_kif(&template.conjecture).map_err(|e| CqError::TemplateSchema {
        template: template.id.clone(),
        message: e.to_string(),
    })?;
    if parsed.len() != 1 {
        return Err(CqError::TemplateSchema {
            template: template.id.clone(),
            message: "schema must be a single formula".to_string(),
        });
    }
    let schema = parsed.into_iter().next().unwrap().0;
    let mut placeholders = BTreeSet::new();
    collect_placeholders(&schema, &mut placeholders);
    for &i in &placeholders {
        if i == 0 || i > 2 {
            return Err(CqError::TemplateArityMismatch {
                template: template.id.clone(),
                placeholder: i,
            });
        }
    }
    Ok(ParsedTemplate {
        template,
        schema,
        placeholders: placeholders.into_iter().collect(),
    })
}

fn instantiate(
    parsed: &ParsedTemplate<'_>,
    concepts: (&str, &str),
) -> Result<Formula, CqError> {
    let conjecture = substitute_placeholders(&parsed.schema, &[concepts.0, concepts.1]);
    let mut leftovers = BTreeSet::new();
    collect_placeholders(&conjecture, &mut leftovers);
    if let Some(&i) = leftovers.iter().next() {
        return Err(CqError::TemplateArityMismatch {
            template: parsed.template.id.clone(),
            placeholder: i,
        });
    }
    let vars = collect_variables(&conjecture);
    if !vars.free.is_empty() || !vars.row.is_empty() {
        return Err(CqError::TemplateNotClosed {
            template: parsed.template.id.clone(),
        });
    }
    Ok(conjecture)
}

/// Generation output: the truth-test suite plus bookkeeping about skipped
/// inputs.
#[derive(Debug, Clone, Default)]
pub struct GeneratedSuite {
    pub tests: Vec<TestCase>,
    /// Morpholinks whose synsets did not resolve against the mapping.
    pub unresolved_links: usize,
}

/// Instantiate every template over every tuple its selector accepts.
/// Deterministic: templates in order, tuples in input order, duplicate
/// conjectures (up to renaming) removed, ids stable.
pub fn generate_truth_tests(
    mapping: &[MappingEntry],
    antonym_pairs: &[(String, String)],
    morpholinks: &[MorphoLink],
    templates: &[PatternTemplate],
) -> Result<GeneratedSuite, CqError> {
    let mut by_synset: BTreeMap<&str, Vec<&MappingEntry>> = BTreeMap::new();
    for entry in mapping {
        by_synset.entry(entry.synset.as_str()).or_default().push(entry);
    }
    let lookup = |synset: &str, pos: Option<Pos>, relations: &[MappingRelation]| {
        by_synset
            .get(synset)
            .map(|entries| {
                entries
                    .iter()
                    .filter(|e| pos.is_none_or(|p| e.pos == p))
                    .filter(|e| relations.contains(&e.relation))
                    .copied()
                    .collect::<Vec<_>>()
            })
            .unwrap_or_default()
    };

    let mut suite = GeneratedSuite::default();
    let mut seen = BTreeSet::new();
    for template in templates {
        let parsed = parse_template(template)?;
        let _ = &parsed.placeholders;
        let mut pattern_seq = 0usize;
        let mut push = |suite: &mut GeneratedSuite,
                        seen: &mut BTreeSet<String>,
                        conjecture: Formula,
                        source: String| {
            let key = crate::kif::render_formula(&alpha_normalize(&conjecture));
            if seen.insert(key) {
                pattern_seq += 1;
                suite.tests.push(TestCase {
                    id: format!("t-{}-{:04}", template.id, pattern_seq),
                    kind: TestKind::Truth,
                    conjecture,
                    pattern: template.id.clone(),
                    source,
                });
            }
        };

        match template.source {
            TupleSource::Antonym => {
                for (a, b) in antonym_pairs {
                    let left = lookup(a, template.pos, &template.mapping_relations);
                    let right = lookup(b, template.pos, &template.mapping_relations);
                    for ea in &left {
                        for eb in &right {
                            if template.distinct_concepts && ea.concept == eb.concept {
                                continue;
                            }
                            let conjecture =
                                instantiate(&parsed, (&ea.concept, &eb.concept))?;
                            push(&mut suite, &mut seen, conjecture, format!("{a}|{b}"));
                        }
                    }
                }
            }
            TupleSource::Morpholink => {
                for link in morpholinks {
                    if template
                        .link_relation
                        .as_ref()
                        .is_some_and(|r| *r != link.relation)
                    {
                        continue;
                    }
                    let verbs = lookup(
                        &link.verb_synset,
                        Some(Pos::Verb),
                        &template.mapping_relations,
                    );
                    let nouns = lookup(
                        &link.noun_synset,
                        Some(Pos::Noun),
                        &template.mapping_relations,
                    );
                    if verbs.is_empty() || nouns.is_empty() {
                        suite.unresolved_links += 1;
                        continue;
                    }
                    for ev in &verbs {
                        for en in &nouns {
                            if template.distinct_concepts && ev.concept == en.concept {
                                continue;
                            }
                            let conjecture =
                                instantiate(&parsed, (&ev.concept, &en.concept))?;
                            push(
                                &mut suite,
                                &mut seen,
                                conjecture,
                                format!("{}-{}->{}", link.verb_synset, link.relation, link.noun_synset),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(suite)
}

/// One falsity-test per truth-test: the negated conjecture (double
/// negation simplified), same provenance.
pub fn derive_falsity_tests(truth_tests: &[TestCase]) -> Vec<TestCase> {
    truth_tests
        .iter()
        .map(|t| {
            debug_assert_eq!(t.kind, TestKind::Truth);
            let id = match t.id.strip_prefix("t-") {
                Some(rest) => format!("f-{rest}"),
                None => format!("f-{}", t.id),
            };
            TestCase {
                id,
                kind: TestKind::Falsity,
                conjecture: t.conjecture.negated(),
                pattern: t.pattern.clone(),
                source: t.source.clone(),
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Suite files
// ---------------------------------------------------------------------------

#[derive(serde::Serialize, serde::Deserialize)]
struct SuiteLine {
    id: String,
    kind: TestKind,
    /// Conjecture in TPTP FOF syntax.
    conjecture: String,
    pattern: String,
    source: String,
}

/// Write a suite as JSON Lines, one object per test.
pub fn write_suite(mut out: impl Write, tests: &[TestCase]) -> Result<(), CqError> {
    for test in tests {
        let line = SuiteLine {
            id: test.id.clone(),
            kind: test.kind,
            conjecture: tptp::render_fof_formula(&test.conjecture)
                .map_err(|e| CqError::WriteFailed(e.to_string()))?,
            pattern: test.pattern.clone(),
            source: test.source.clone(),
        };
        let json = serde_json::to_string(&line).map_err(|e| CqError::WriteFailed(e.to_string()))?;
        writeln!(out, "{json}").map_err(|e| CqError::WriteFailed(e.to_string()))?;
    }
    Ok(())
}

/// Read a JSON Lines suite back, parsing the TPTP conjectures.
pub fn read_suite(input: impl BufRead) -> Result<Vec<TestCase>, CqError> {
    let mut tests = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| CqError::SuiteLine {
            line: i + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: SuiteLine = serde_json::from_str(&line).map_err(|e| CqError::SuiteLine {
            line: i + 1,
            message: e.to_string(),
        })?;
        let conjecture =
            tptp::parse_fof_formula(&parsed.conjecture).map_err(|e| CqError::SuiteLine {
                line: i + 1,
                message: e.to_string(),
            })?;
        tests.push(TestCase {
            id: parsed.id,
            kind: parsed.kind,
            conjecture,
            pattern: parsed.pattern,
            source: parsed.source,
        });
    }
    Ok(tests)
}

pub fn load_suite(path: &Path) -> Result<Vec<TestCase>, CqError> {
    let file = std::fs::File::open(path).map_err(|e| CqError::UnreadableFile {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    read_suite(std::io::BufReader::new(file))
}
