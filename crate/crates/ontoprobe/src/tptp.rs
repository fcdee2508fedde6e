//! TPTP FOF emission and a matching subset parser.
//!
//! Emission is deterministic: axioms in input order, one
//! `fof(<name>, axiom, ...)` line each, then at most one conjecture line.
//! Axiom names survive the round trip so proof traces can be attributed.
//!
//! Identifiers that are not TPTP lower words are emitted single-quoted,
//! which keeps the symbol mapping injective. A symbol used at several
//! arities in the same role (predicate or function) within one problem is
//! emitted with an arity suffix (`partition__3`), since TPTP symbols have
//! a fixed arity per role.
//!
//! The parser accepts exactly this dialect (plus hand-written problems in
//! it): `fof` units, the connectives `~ & | => <=>`, `!`/`?` quantifiers,
//! `=`/`!=`, quoted atoms and numerals. It is the self-reparse path of the
//! built-in prover and the syntax oracle for emission.

use std::collections::{BTreeMap, BTreeSet};

use crate::fol::AxiomSet;
use crate::kif::{collect_variables, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TptpError {
    #[error("identifier `{0}` cannot be encoded as a TPTP symbol")]
    UnencodableSymbol(String),
    #[error("atom with a variable predicate cannot be emitted; reify first")]
    VariablePredicate,
    #[error("formula has free variable `{0}`; TPTP units must be closed")]
    OpenFormula(String),
    #[error("row variables cannot be emitted; expand first")]
    RowVariable,
    #[error("TPTP syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Role {
    Predicate,
    Function,
}

type Census = BTreeMap<(Role, String), BTreeSet<usize>>;

fn census_term(term: &Term, role: Role, census: &mut Census) -> Result<(), TptpError> {
    match term {
        Term::Constant(name) => {
            census
                .entry((role, name.clone()))
                .or_default()
                .insert(0);
            Ok(())
        }
        Term::Variable(_) => Ok(()),
        Term::RowVariable(_) => Err(TptpError::RowVariable),
        Term::Compound(head, args) => {
            let name = match &**head {
                Term::Constant(name) => name.clone(),
                _ => return Err(TptpError::VariablePredicate),
            };
            census
                .entry((Role::Function, name))
                .or_default()
                .insert(args.len());
            for arg in args {
                census_term(arg, Role::Function, census)?;
            }
            Ok(())
        }
    }
}

fn census_formula(f: &Formula, census: &mut Census) -> Result<(), TptpError> {
    match f {
        Formula::Atom { predicate, args } => {
            let name = match predicate {
                Term::Constant(name) => name.clone(),
                _ => return Err(TptpError::VariablePredicate),
            };
            census
                .entry((Role::Predicate, name))
                .or_default()
                .insert(args.len());
            for arg in args {
                census_term(arg, Role::Function, census)?;
            }
            Ok(())
        }
        Formula::Equal(lhs, rhs) => {
            census_term(lhs, Role::Function, census)?;
            census_term(rhs, Role::Function, census)
        }
        Formula::Not(inner) => census_formula(inner, census),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().try_for_each(|p| census_formula(p, census))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            census_formula(a, census)?;
            census_formula(b, census)
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => census_formula(body, census),
    }
}

fn is_lower_word(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Quote-or-pass encoding of one identifier. Injective: quoting is applied
/// exactly to the names that are not plain lower words.
fn sanitize_symbol(name: &str) -> Result<String, TptpError> {
    if name.is_empty() {
        return Err(TptpError::UnencodableSymbol(name.to_string()));
    }
    if name.chars().any(|c| !(' '..='~').contains(&c)) {
        return Err(TptpError::UnencodableSymbol(name.to_string()));
    }
    if is_lower_word(name) {
        return Ok(name.to_string());
    }
    let mut quoted = String::with_capacity(name.len() + 2);
    quoted.push('\'');
    for c in name.chars() {
        if c == '\'' || c == '\\' {
            quoted.push('\\');
        }
        quoted.push(c);
    }
    quoted.push('\'');
    Ok(quoted)
}

/// Per-problem symbol table resolving arity suffixes.
struct SymbolTable {
    /// (role, name, arity) -> emitted source name (before quoting).
    resolved: BTreeMap<(Role, String, usize), String>,
}

impl SymbolTable {
    fn build(census: &Census) -> SymbolTable {
        let all_names: BTreeSet<&String> = census.keys().map(|(_, name)| name).collect();
        let mut resolved = BTreeMap::new();
        for ((role, name), arities) in census {
            if arities.len() == 1 {
                let arity = *arities.iter().next().unwrap();
                resolved.insert((*role, name.clone(), arity), name.clone());
            } else {
                for &arity in arities {
                    let mut candidate = format!("{name}__{arity}");
                    while all_names.contains(&candidate) {
                        candidate.push('_');
                    }
                    resolved.insert((*role, name.clone(), arity), candidate);
                }
            }
        }
        SymbolTable { resolved }
    }

    fn emit(&self, role: Role, name: &str, arity: usize) -> Result<String, TptpError> {
        let source = self
            .resolved
            .get(&(role, name.to_string(), arity))
            .cloned()
            .unwrap_or_else(|| name.to_string());
        sanitize_symbol(&source)
    }
}

struct VarScope {
    /// Stack of (source name, emitted name).
    stack: Vec<(String, String)>,
    used: BTreeSet<String>,
}

impl VarScope {
    fn new() -> Self {
        VarScope {
            stack: Vec::new(),
            used: BTreeSet::new(),
        }
    }

    fn bind(&mut self, name: &str) -> String {
        let mut candidate: String = {
            let mut chars = name.chars();
            match chars.next() {
                Some(c) if c.is_ascii_alphabetic() => {
                    let mut s = c.to_ascii_uppercase().to_string();
                    s.extend(chars.filter(|c| c.is_ascii_alphanumeric() || *c == '_'));
                    s
                }
                _ => format!("V{name}"),
            }
        };
        if candidate.is_empty() || !candidate.chars().next().unwrap().is_ascii_uppercase() {
            candidate = format!("V{candidate}");
        }
        let mut emitted = candidate.clone();
        let mut counter = 0;
        while self.used.contains(&emitted) {
            counter += 1;
            emitted = format!("{candidate}{counter}");
        }
        self.used.insert(emitted.clone());
        self.stack.push((name.to_string(), emitted.clone()));
        emitted
    }

    fn resolve(&self, name: &str) -> Option<&str> {
        self.stack
            .iter()
            .rev()
            .find(|(from, _)| from == name)
            .map(|(_, to)| to.as_str())
    }
}

fn render_term(
    term: &Term,
    table: &SymbolTable,
    scope: &VarScope,
    out: &mut String,
) -> Result<(), TptpError> {
    match term {
        Term::Constant(name) => {
            out.push_str(&table.emit(Role::Function, name, 0)?);
            Ok(())
        }
        Term::Variable(name) => match scope.resolve(name) {
            Some(emitted) => {
                out.push_str(emitted);
                Ok(())
            }
            None => Err(TptpError::OpenFormula(name.clone())),
        },
        Term::RowVariable(_) => Err(TptpError::RowVariable),
        Term::Compound(head, args) => {
            let name = match &**head {
                Term::Constant(name) => name,
                _ => return Err(TptpError::VariablePredicate),
            };
            out.push_str(&table.emit(Role::Function, name, args.len())?);
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render_term(arg, table, scope, out)?;
            }
            out.push(')');
            Ok(())
        }
    }
}

fn render_fof(
    f: &Formula,
    table: &SymbolTable,
    scope: &mut VarScope,
    out: &mut String,
) -> Result<(), TptpError> {
    match f {
        Formula::Atom { predicate, args } => {
            let name = match predicate {
                Term::Constant(name) => name,
                _ => return Err(TptpError::VariablePredicate),
            };
            out.push_str(&table.emit(Role::Predicate, name, args.len())?);
            if !args.is_empty() {
                out.push('(');
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    render_term(arg, table, scope, out)?;
                }
                out.push(')');
            }
            Ok(())
        }
        Formula::Equal(lhs, rhs) => {
            out.push('(');
            render_term(lhs, table, scope, out)?;
            out.push_str(" = ");
            render_term(rhs, table, scope, out)?;
            out.push(')');
            Ok(())
        }
        Formula::Not(inner) => {
            if let Formula::Equal(lhs, rhs) = &**inner {
                out.push('(');
                render_term(lhs, table, scope, out)?;
                out.push_str(" != ");
                render_term(rhs, table, scope, out)?;
                out.push(')');
                return Ok(());
            }
            out.push_str("~ ");
            render_fof(inner, table, scope, out)
        }
        Formula::And(parts) | Formula::Or(parts) => {
            let sep = if matches!(f, Formula::And(_)) { " & " } else { " | " };
            out.push('(');
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                render_fof(part, table, scope, out)?;
            }
            out.push(')');
            Ok(())
        }
        Formula::Implies(a, b) => {
            out.push('(');
            render_fof(a, table, scope, out)?;
            out.push_str(" => ");
            render_fof(b, table, scope, out)?;
            out.push(')');
            Ok(())
        }
        Formula::Iff(a, b) => {
            out.push('(');
            render_fof(a, table, scope, out)?;
            out.push_str(" <=> ");
            render_fof(b, table, scope, out)?;
            out.push(')');
            Ok(())
        }
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            out.push_str(if matches!(f, Formula::Forall(..)) { "! [" } else { "? [" });
            let depth = scope.stack.len();
            for (i, var) in vars.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let emitted = scope.bind(var);
                out.push_str(&emitted);
            }
            out.push_str("] : ");
            let needs_parens = !matches!(
                &**body,
                Formula::Atom { .. } | Formula::Equal(..) | Formula::Forall(..) | Formula::Exists(..)
            );
            if needs_parens && !rendered_self_parenthesizes(body) {
                out.push('(');
                render_fof(body, table, scope, out)?;
                out.push(')');
            } else {
                render_fof(body, table, scope, out)?;
            }
            scope.stack.truncate(depth);
            Ok(())
        }
    }
}

fn rendered_self_parenthesizes(f: &Formula) -> bool {
    matches!(
        f,
        Formula::And(_) | Formula::Or(_) | Formula::Implies(..) | Formula::Iff(..) | Formula::Equal(..)
    ) || matches!(f, Formula::Not(inner) if matches!(&**inner, Formula::Equal(..)))
}

fn check_closed(f: &Formula) -> Result<(), TptpError> {
    let vars = collect_variables(f);
    if let Some(free) = vars.free.iter().next() {
        return Err(TptpError::OpenFormula(free.clone()));
    }
    if !vars.row.is_empty() {
        return Err(TptpError::RowVariable);
    }
    Ok(())
}

/// Emit a problem from named axiom formulas plus an optional conjecture.
pub fn emit_problem_units(
    axioms: &[(String, Formula)],
    conjecture: Option<(&str, &Formula)>,
) -> Result<String, TptpError> {
    let mut census = Census::new();
    for (_, formula) in axioms {
        check_closed(formula)?;
        census_formula(formula, &mut census)?;
    }
    if let Some((_, conj)) = conjecture {
        check_closed(conj)?;
        census_formula(conj, &mut census)?;
    }
    let table = SymbolTable::build(&census);

    let mut names = BTreeSet::new();
    let mut out = String::new();
    for (name, formula) in axioms {
        if !names.insert(name.clone()) {
            return Err(TptpError::UnencodableSymbol(format!("duplicate axiom name {name}")));
        }
        out.push_str("fof(");
        out.push_str(&sanitize_symbol(name)?);
        out.push_str(", axiom, ");
        render_fof(formula, &table, &mut VarScope::new(), &mut out)?;
        out.push_str(").\n");
    }
    if let Some((name, conj)) = conjecture {
        out.push_str("fof(");
        out.push_str(&sanitize_symbol(name)?);
        out.push_str(", conjecture, ");
        render_fof(conj, &table, &mut VarScope::new(), &mut out)?;
        out.push_str(").\n");
    }
    Ok(out)
}

/// Emit an [`AxiomSet`] as `fof(name, axiom, ...)` lines in set order plus
/// one `fof(goal, conjecture, ...)` line when a conjecture is given.
pub fn emit_problem(set: &AxiomSet, conjecture: Option<&Formula>) -> Result<String, TptpError> {
    let units: Vec<(String, Formula)> = set
        .axioms
        .iter()
        .map(|a| (a.name.clone(), a.formula.clone()))
        .collect();
    emit_problem_units(&units, conjecture.map(|c| ("goal", c)))
}

/// Render one closed formula in FOF syntax (used for suite files).
pub fn render_fof_formula(f: &Formula) -> Result<String, TptpError> {
    check_closed(f)?;
    let mut census = Census::new();
    census_formula(f, &mut census)?;
    let table = SymbolTable::build(&census);
    let mut out = String::new();
    render_fof(f, &table, &mut VarScope::new(), &mut out)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// A parsed TPTP problem: named axioms in file order and at most one
/// conjecture.
#[derive(Debug, Clone, Default)]
pub struct TptpProblem {
    pub axioms: Vec<(String, Formula)>,
    pub conjecture: Option<(String, Formula)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Period,
    Colon,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Neq,
    Bang,
    Question,
    Lower(String),
    Upper(String),
    Quoted(String),
    Numeral(String),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text, pos: 0, line: 1 }
    }

    fn error(&self, message: impl Into<String>) -> TptpError {
        TptpError::Syntax {
            line: self.line,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn advance(&mut self, n: usize) {
        let skipped = &self.text[self.pos..self.pos + n];
        self.line += skipped.matches('\n').count();
        self.pos += n;
    }

    fn next_tok(&mut self) -> Result<Option<(Tok, usize)>, TptpError> {
        loop {
            let rest = self.rest();
            if rest.is_empty() {
                return Ok(None);
            }
            let c = rest.chars().next().unwrap();
            if c.is_whitespace() {
                self.advance(c.len_utf8());
                continue;
            }
            if c == '%' {
                let n = rest.find('\n').map(|i| i + 1).unwrap_or(rest.len());
                self.advance(n);
                continue;
            }
            let line = self.line;
            let tok = match c {
                '(' => {
                    self.advance(1);
                    Tok::LParen
                }
                ')' => {
                    self.advance(1);
                    Tok::RParen
                }
                '[' => {
                    self.advance(1);
                    Tok::LBracket
                }
                ']' => {
                    self.advance(1);
                    Tok::RBracket
                }
                ',' => {
                    self.advance(1);
                    Tok::Comma
                }
                '.' => {
                    self.advance(1);
                    Tok::Period
                }
                ':' => {
                    self.advance(1);
                    Tok::Colon
                }
                '~' => {
                    self.advance(1);
                    Tok::Not
                }
                '&' => {
                    self.advance(1);
                    Tok::And
                }
                '|' => {
                    self.advance(1);
                    Tok::Or
                }
                '=' => {
                    if rest.starts_with("=>") {
                        self.advance(2);
                        Tok::Implies
                    } else {
                        self.advance(1);
                        Tok::Eq
                    }
                }
                '<' => {
                    if rest.starts_with("<=>") {
                        self.advance(3);
                        Tok::Iff
                    } else {
                        return Err(self.error("unexpected `<`"));
                    }
                }
                '!' => {
                    if rest.starts_with("!=") {
                        self.advance(2);
                        Tok::Neq
                    } else {
                        self.advance(1);
                        Tok::Bang
                    }
                }
                '?' => {
                    self.advance(1);
                    Tok::Question
                }
                '\'' => {
                    let mut value = String::new();
                    let mut chars = rest.char_indices().skip(1);
                    let mut end = None;
                    while let Some((i, c)) = chars.next() {
                        match c {
                            '\\' => match chars.next() {
                                Some((_, escaped)) => value.push(escaped),
                                None => return Err(self.error("unterminated quoted atom")),
                            },
                            '\'' => {
                                end = Some(i + 1);
                                break;
                            }
                            other => value.push(other),
                        }
                    }
                    match end {
                        Some(end) => {
                            self.advance(end);
                            Tok::Quoted(value)
                        }
                        None => return Err(self.error("unterminated quoted atom")),
                    }
                }
                c if c.is_ascii_digit() => {
                    let n = rest
                        .find(|c: char| !c.is_ascii_digit())
                        .unwrap_or(rest.len());
                    let word = &rest[..n];
                    self.advance(n);
                    Tok::Numeral(word.to_string())
                }
                c if c.is_ascii_alphabetic() || c == '_' || c == '$' => {
                    let n = rest
                        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '$'))
                        .unwrap_or(rest.len());
                    let word = &rest[..n];
                    self.advance(n);
                    if c.is_ascii_uppercase() {
                        Tok::Upper(word.to_string())
                    } else {
                        Tok::Lower(word.to_string())
                    }
                }
                other => return Err(self.error(format!("unexpected character `{other}`"))),
            };
            return Ok(Some((tok, line)));
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    index: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, TptpError> {
        let mut lexer = Lexer::new(text);
        let mut tokens = Vec::new();
        while let Some(tok) = lexer.next_tok()? {
            tokens.push(tok);
        }
        Ok(Parser { tokens, index: 0 })
    }

    fn line(&self) -> usize {
        self.tokens
            .get(self.index.min(self.tokens.len().saturating_sub(1)))
            .map(|(_, line)| *line)
            .unwrap_or(0)
    }

    fn error(&self, message: impl Into<String>) -> TptpError {
        TptpError::Syntax {
            line: self.line(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.index).map(|(t, _)| t)
    }

    fn next(&mut self) -> Result<Tok, TptpError> {
        let tok = self
            .tokens
            .get(self.index)
            .map(|(t, _)| t.clone())
            .ok_or_else(|| self.error("unexpected end of input"))?;
        self.index += 1;
        Ok(tok)
    }

    fn expect(&mut self, expected: Tok) -> Result<(), TptpError> {
        let tok = self.next()?;
        if tok == expected {
            Ok(())
        } else {
            Err(self.error(format!("expected {expected:?}, found {tok:?}")))
        }
    }

    fn parse_name(&mut self) -> Result<String, TptpError> {
        match self.next()? {
            Tok::Lower(name) | Tok::Quoted(name) | Tok::Numeral(name) => Ok(name),
            other => Err(self.error(format!("expected a name, found {other:?}"))),
        }
    }

    fn parse_term(&mut self) -> Result<Term, TptpError> {
        match self.next()? {
            Tok::Upper(name) => Ok(Term::Variable(name)),
            Tok::Lower(name) | Tok::Quoted(name) | Tok::Numeral(name) => {
                if self.peek() == Some(&Tok::LParen) {
                    self.next()?;
                    let mut args = vec![self.parse_term()?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.next()?;
                        args.push(self.parse_term()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Term::Compound(Box::new(Term::Constant(name)), args))
                } else {
                    Ok(Term::Constant(name))
                }
            }
            other => Err(self.error(format!("expected a term, found {other:?}"))),
        }
    }

    fn parse_unitary(&mut self) -> Result<Formula, TptpError> {
        match self.peek().cloned() {
            Some(Tok::Bang) | Some(Tok::Question) => {
                let quant = self.next()?;
                self.expect(Tok::LBracket)?;
                let mut vars = Vec::new();
                loop {
                    match self.next()? {
                        Tok::Upper(name) => {
                            if !vars.contains(&name) {
                                vars.push(name);
                            }
                        }
                        other => {
                            return Err(self.error(format!("expected a variable, found {other:?}")))
                        }
                    }
                    match self.next()? {
                        Tok::Comma => continue,
                        Tok::RBracket => break,
                        other => {
                            return Err(self.error(format!("expected `,` or `]`, found {other:?}")))
                        }
                    }
                }
                self.expect(Tok::Colon)?;
                let body = Box::new(self.parse_unitary()?);
                Ok(match quant {
                    Tok::Bang => Formula::Forall(vars, body),
                    _ => Formula::Exists(vars, body),
                })
            }
            Some(Tok::Not) => {
                self.next()?;
                Ok(Formula::Not(Box::new(self.parse_unitary()?)))
            }
            Some(Tok::LParen) => {
                self.next()?;
                let inner = self.parse_formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => {
                let term = self.parse_term()?;
                match self.peek() {
                    Some(Tok::Eq) => {
                        self.next()?;
                        let rhs = self.parse_term()?;
                        Ok(Formula::Equal(term, rhs))
                    }
                    Some(Tok::Neq) => {
                        self.next()?;
                        let rhs = self.parse_term()?;
                        Ok(Formula::Not(Box::new(Formula::Equal(term, rhs))))
                    }
                    _ => match term {
                        Term::Constant(name) => Ok(Formula::Atom {
                            predicate: Term::Constant(name),
                            args: Vec::new(),
                        }),
                        Term::Compound(head, args) => Ok(Formula::Atom {
                            predicate: *head,
                            args,
                        }),
                        Term::Variable(name) => {
                            Err(self.error(format!("variable `{name}` used as a formula")))
                        }
                        Term::RowVariable(_) => unreachable!("lexer produces no row variables"),
                    },
                }
            }
        }
    }

    fn parse_formula(&mut self) -> Result<Formula, TptpError> {
        let first = self.parse_unitary()?;
        match self.peek().cloned() {
            Some(Tok::And) | Some(Tok::Or) => {
                let connective = self.next()?;
                let mut parts = vec![first, self.parse_unitary()?];
                while self.peek() == Some(&connective) {
                    self.next()?;
                    parts.push(self.parse_unitary()?);
                }
                if matches!(self.peek(), Some(Tok::And) | Some(Tok::Or) | Some(Tok::Implies) | Some(Tok::Iff)) {
                    return Err(self.error("mixed binary connectives need parentheses"));
                }
                Ok(match connective {
                    Tok::And => Formula::And(parts),
                    _ => Formula::Or(parts),
                })
            }
            Some(Tok::Implies) => {
                self.next()?;
                let rhs = self.parse_unitary()?;
                Ok(Formula::Implies(Box::new(first), Box::new(rhs)))
            }
            Some(Tok::Iff) => {
                self.next()?;
                let rhs = self.parse_unitary()?;
                Ok(Formula::Iff(Box::new(first), Box::new(rhs)))
            }
            _ => Ok(first),
        }
    }

    fn parse_unit(&mut self) -> Result<Option<(String, String, Formula)>, TptpError> {
        if self.peek().is_none() {
            return Ok(None);
        }
        match self.next()? {
            Tok::Lower(word) if word == "fof" => {}
            other => return Err(self.error(format!("expected `fof`, found {other:?}"))),
        }
        self.expect(Tok::LParen)?;
        let name = self.parse_name()?;
        self.expect(Tok::Comma)?;
        let role = match self.next()? {
            Tok::Lower(role) => role,
            other => return Err(self.error(format!("expected a role, found {other:?}"))),
        };
        self.expect(Tok::Comma)?;
        let formula = self.parse_formula()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Period)?;
        Ok(Some((name, role, formula)))
    }
}

/// Parse a TPTP FOF formula on its own.
pub fn parse_fof_formula(text: &str) -> Result<Formula, TptpError> {
    let mut parser = Parser::new(text)?;
    let formula = parser.parse_formula()?;
    if parser.peek().is_some() {
        return Err(parser.error("trailing input after formula"));
    }
    Ok(formula)
}

/// Parse a problem file in the emitted dialect.
pub fn parse_problem(text: &str) -> Result<TptpProblem, TptpError> {
    let mut parser = Parser::new(text)?;
    let mut problem = TptpProblem::default();
    while let Some((name, role, formula)) = parser.parse_unit()? {
        match role.as_str() {
            "conjecture" => {
                if problem.conjecture.is_some() {
                    return Err(TptpError::Syntax {
                        line: 0,
                        message: "more than one conjecture".into(),
                    });
                }
                problem.conjecture = Some((name, formula));
            }
            "axiom" | "hypothesis" | "definition" | "lemma" => {
                problem.axioms.push((name, formula));
            }
            other => {
                return Err(TptpError::Syntax {
                    line: 0,
                    message: format!("unsupported role `{other}`"),
                })
            }
        }
    }
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kif::{alpha_normalize, parse_suo_kif};

    fn kif(text: &str) -> Formula {
        parse_suo_kif(text).unwrap().into_iter().next().unwrap().0
    }

    #[test]
    fn emits_single_ground_atom() {
        let units = vec![("a1".to_string(), kif("(instance Foo Bar)"))];
        let out = emit_problem_units(&units, None).unwrap();
        assert_eq!(out, "fof(a1, axiom, instance('Foo', 'Bar')).\n");
    }

    #[test]
    fn emits_conjecture_line_last() {
        let units = vec![("a1".to_string(), kif("(p a)"))];
        let conj = kif("(exists (?X) (p ?X))");
        let out = emit_problem_units(&units, Some(("goal", &conj))).unwrap();
        assert_eq!(out, "fof(a1, axiom, p(a)).\nfof(goal, conjecture, ? [X] : p(X)).\n");
    }

    #[test]
    fn emission_is_deterministic() {
        let units = vec![
            ("a1".to_string(), kif("(forall (?X) (=> (p ?X) (q ?X)))")),
            ("a2".to_string(), kif("(p a)")),
        ];
        let one = emit_problem_units(&units, None).unwrap();
        let two = emit_problem_units(&units, None).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn axiom_names_round_trip() {
        let units = vec![
            ("meta_subclass_transitive".to_string(), kif("(p a)")),
            ("top_0001".to_string(), kif("(q b)")),
            ("fo_bridge_part_2".to_string(), kif("(r c)")),
        ];
        let out = emit_problem_units(&units, None).unwrap();
        let parsed = parse_problem(&out).unwrap();
        let names: Vec<&str> = parsed.axioms.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["meta_subclass_transitive", "top_0001", "fo_bridge_part_2"]);
    }

    #[test]
    fn formulas_survive_reparse_up_to_renaming() {
        let formulas = [
            "(instance Foo Bar)",
            "(forall (?X ?Y) (=> (and (p ?X) (q ?Y)) (or (r ?X ?Y) (equal ?X ?Y))))",
            "(not (exists (?Z) (and (instance ?Z Increasing) (instance ?Z Decreasing))))",
            "(forall (?X) (<=> (holds_3 part ?X ?X) (part ?X ?X)))",
        ];
        for text in formulas {
            let f = kif(text);
            let units = vec![("a1".to_string(), f.clone())];
            let emitted = emit_problem_units(&units, None).unwrap();
            let parsed = parse_problem(&emitted).unwrap();
            assert_eq!(
                alpha_normalize(&parsed.axioms[0].1),
                alpha_normalize(&f),
                "diverged for {text}: {emitted}"
            );
        }
    }

    #[test]
    fn multi_arity_symbols_get_suffixes() {
        let units = vec![
            ("a1".to_string(), kif("(partition Entity Physical Abstract)")),
            ("a2".to_string(), kif("(partition Number Real)")),
        ];
        let out = emit_problem_units(&units, None).unwrap();
        assert!(out.contains("partition__3("), "{out}");
        assert!(out.contains("partition__2("), "{out}");
        let parsed = parse_problem(&out).unwrap();
        assert_eq!(parsed.axioms.len(), 2);
    }

    #[test]
    fn dual_role_symbols_pass_through() {
        // `part` as a constant argument and as a binary predicate is
        // legitimate TPTP; roles are disambiguated by position.
        let units = vec![
            ("a1".to_string(), kif("(instance part TransitiveRelation)")),
            ("a2".to_string(), kif("(part bolt1 case1)")),
        ];
        let out = emit_problem_units(&units, None).unwrap();
        let parsed = parse_problem(&out).unwrap();
        assert_eq!(parsed.axioms[0].1, kif("(instance part TransitiveRelation)"));
        assert_eq!(parsed.axioms[1].1, kif("(part bolt1 case1)"));
    }

    #[test]
    fn open_formulas_are_rejected() {
        let units = vec![("a1".to_string(), kif("(p ?X)"))];
        assert!(matches!(
            emit_problem_units(&units, None),
            Err(TptpError::OpenFormula(_))
        ));
    }

    #[test]
    fn unencodable_symbols_are_rejected() {
        let units = vec![(
            "a1".to_string(),
            Formula::atom("p", vec![Term::constant("bad\u{7}name")]),
        )];
        assert!(matches!(
            emit_problem_units(&units, None),
            Err(TptpError::UnencodableSymbol(_))
        ));
    }

    #[test]
    fn parses_hand_written_problem() {
        let text = r#"
            % a tiny problem
            fof(ax1, axiom, p(a)).
            fof(ax2, axiom, ! [X] : (p(X) => q(X))).
            fof(goal, conjecture, q(a)).
        "#;
        let problem = parse_problem(text).unwrap();
        assert_eq!(problem.axioms.len(), 2);
        let (name, conj) = problem.conjecture.unwrap();
        assert_eq!(name, "goal");
        assert_eq!(conj, Formula::atom("q", vec![Term::constant("a")]));
    }

    #[test]
    fn parses_equality_and_inequality() {
        let f = parse_fof_formula("! [X] : (f(X) = a & X != b)").unwrap();
        match f {
            Formula::Forall(_, body) => match *body {
                Formula::And(parts) => {
                    assert!(matches!(parts[0], Formula::Equal(..)));
                    assert!(matches!(&parts[1], Formula::Not(inner) if matches!(**inner, Formula::Equal(..))));
                }
                other => panic!("expected conjunction, got {other:?}"),
            },
            other => panic!("expected quantifier, got {other:?}"),
        }
    }

    #[test]
    fn rejects_mixed_connectives_without_parens() {
        assert!(parse_fof_formula("p & q | r").is_err());
        assert!(parse_fof_formula("(p & q) | r").is_ok());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_problem("fof(a, axiom, p(a))").is_err()); // missing period
        assert!(parse_problem("cnf(a, axiom, p).").is_err());
        assert!(parse_fof_formula("p(").is_err());
    }

    mod roundtrip {
        use super::*;
        use proptest::prelude::*;

        // Fixed arities per symbol, so no suffixing kicks in and the
        // round trip is exact up to bound-variable renaming.
        fn term(vars: &'static [&'static str]) -> BoxedStrategy<Term> {
            let ground = prop_oneof![
                prop::sample::select(vec!["alpha", "Beta", "c1"]).prop_map(Term::constant),
                prop::sample::select(vec!["alpha", "Beta"]).prop_map(|c| Term::Compound(
                    Box::new(Term::constant("f")),
                    vec![Term::constant(c)]
                )),
            ];
            if vars.is_empty() {
                ground.boxed()
            } else {
                prop_oneof![
                    2 => prop::sample::select(vars.to_vec()).prop_map(Term::variable),
                    1 => ground,
                ]
                .boxed()
            }
        }

        fn atom(vars: &'static [&'static str]) -> BoxedStrategy<Formula> {
            prop_oneof![
                term(vars).prop_map(|t| Formula::atom("p", vec![t])),
                (term(vars), term(vars)).prop_map(|(a, b)| Formula::atom("Query", vec![a, b])),
                (term(vars), term(vars)).prop_map(|(a, b)| Formula::Equal(a, b)),
            ]
            .boxed()
        }

        fn closed_formula() -> impl Strategy<Value = Formula> {
            const VARS: &[&str] = &["U", "V"];
            let inner = atom(VARS);
            let leaf = prop_oneof![
                inner.clone().prop_map(|f| Formula::Forall(
                    vec!["U".into(), "V".into()],
                    Box::new(f)
                )),
                inner.prop_map(|f| Formula::Exists(vec!["U".into(), "V".into()], Box::new(f))),
                atom(&[]),
            ];
            leaf.prop_recursive(3, 24, 3, |inner| {
                prop_oneof![
                    inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
                    prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
                    prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
                    (inner.clone(), inner)
                        .prop_map(|(a, b)| Formula::Iff(Box::new(a), Box::new(b))),
                ]
            })
        }

        proptest! {
            #[test]
            fn emit_parse_roundtrip(f in closed_formula()) {
                let units = vec![("unit".to_string(), f.clone())];
                let emitted = emit_problem_units(&units, None).unwrap();
                let parsed = parse_problem(&emitted).unwrap();
                prop_assert_eq!(
                    alpha_normalize(&parsed.axioms[0].1),
                    alpha_normalize(&f),
                    "emitted: {}",
                    emitted
                );
            }
        }
    }
}
