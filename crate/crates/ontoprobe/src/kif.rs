//! SUO-KIF parsing, rendering and classification.
//!
//! SUO-KIF statements are parenthesized S-expressions; `;` starts a line
//! comment. Logical operator heads (`=>`, `<=>`, `and`, `or`, `not`,
//! `forall`, `exists`, `equal`) map to dedicated [`Formula`] constructors,
//! every other head yields an [`Formula::Atom`]. Identifiers are
//! case-sensitive. Numeric tokens and double-quoted strings parse as
//! constants with no further interpretation.

use std::collections::BTreeSet;
use std::fmt;

/// Position inside the parsed input, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceLocation {
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unbalanced parentheses at {0}")]
    UnbalancedParens(SourceLocation),
    #[error("empty expression at {0}")]
    EmptyExpression(SourceLocation),
    #[error("malformed quantifier at {0}")]
    MalformedQuantifier(SourceLocation),
    #[error("`{head}` used with wrong arity at {location}")]
    MalformedConnective { head: String, location: SourceLocation },
    #[error("invalid token `{token}` at {location}")]
    InvalidToken { token: String, location: SourceLocation },
    #[error("expected a parenthesized statement at {0}")]
    ExpectedList(SourceLocation),
    #[error("invalid predicate position at {0}")]
    InvalidPredicate(SourceLocation),
}

/// A first-order term.
///
/// `Variable` and `RowVariable` store the bare name; the `?`/`@` sigils
/// belong to the surface syntax only.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Constant(String),
    Variable(String),
    RowVariable(String),
    Compound(Box<Term>, Vec<Term>),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::Constant(name.into())
    }

    pub fn variable(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    /// Name of a constant term, if it is one.
    pub fn constant_name(&self) -> Option<&str> {
        match self {
            Term::Constant(name) => Some(name),
            _ => None,
        }
    }
}

/// A SUO-KIF / first-order formula.
///
/// `And`/`Or` keep their n-ary shape rather than being binarized so that
/// clause-level statistics stay faithful to the source text. Quantifier
/// variable lists hold bare variable names, are non-empty and
/// duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { predicate: Term, args: Vec<Term> },
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom {
            predicate: Term::Constant(predicate.into()),
            args,
        }
    }

    /// Head constant of an atom, e.g. `instance` for `(instance Foo Bar)`.
    pub fn head(&self) -> Option<&str> {
        match self {
            Formula::Atom { predicate, .. } => predicate.constant_name(),
            _ => None,
        }
    }

    /// Negate, simplifying double negation away.
    pub fn negated(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::Not(Box::new(other.clone())),
        }
    }
}

/// Unit clauses are ground atomic statements, everything else is general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaKind {
    UnitClause,
    GeneralClause,
}

impl fmt::Display for FormulaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaKind::UnitClause => write!(f, "unit"),
            FormulaKind::GeneralClause => write!(f, "general"),
        }
    }
}

/// Free ordinary variables and row variables of a formula.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VariableSets {
    pub free: BTreeSet<String>,
    pub row: BTreeSet<String>,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, SourceLocation),
    List(Vec<Sexp>, SourceLocation),
}

impl Sexp {
    fn location(&self) -> SourceLocation {
        match self {
            Sexp::Atom(_, loc) | Sexp::List(_, loc) => *loc,
        }
    }
}

struct Tokenizer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

#[derive(Debug, Clone)]
enum Token {
    LParen(SourceLocation),
    RParen(SourceLocation),
    Atom(String, SourceLocation),
}

impl<'a> Tokenizer<'a> {
    fn new(text: &'a str) -> Self {
        Tokenizer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn location(&self) -> SourceLocation {
        SourceLocation {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn next_token(&mut self) -> Result<Option<Token>, ParseError> {
        loop {
            let loc = self.location();
            let c = match self.chars.peek() {
                Some(c) => *c,
                None => return Ok(None),
            };
            match c {
                ';' => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                c if c.is_whitespace() => {
                    self.bump();
                }
                '(' => {
                    self.bump();
                    return Ok(Some(Token::LParen(loc)));
                }
                ')' => {
                    self.bump();
                    return Ok(Some(Token::RParen(loc)));
                }
                '"' => {
                    // Quoted string, kept verbatim (quotes included) as one token.
                    let mut text = String::new();
                    text.push(self.bump().unwrap());
                    let mut closed = false;
                    let mut escaped = false;
                    while let Some(c) = self.bump() {
                        text.push(c);
                        if escaped {
                            escaped = false;
                        } else if c == '\\' {
                            escaped = true;
                        } else if c == '"' {
                            closed = true;
                            break;
                        }
                    }
                    if !closed {
                        return Err(ParseError::UnbalancedParens(loc));
                    }
                    return Ok(Some(Token::Atom(text, loc)));
                }
                _ => {
                    let mut text = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_whitespace() || c == '(' || c == ')' || c == ';' || c == '"' {
                            break;
                        }
                        text.push(c);
                        self.bump();
                    }
                    return Ok(Some(Token::Atom(text, loc)));
                }
            }
        }
    }
}

fn parse_sexps(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut tokenizer = Tokenizer::new(text);
    let mut stack: Vec<(Vec<Sexp>, SourceLocation)> = Vec::new();
    let mut top_level = Vec::new();
    while let Some(token) = tokenizer.next_token()? {
        match token {
            Token::LParen(loc) => stack.push((Vec::new(), loc)),
            Token::RParen(loc) => {
                let (items, open_loc) = stack.pop().ok_or(ParseError::UnbalancedParens(loc))?;
                let list = Sexp::List(items, open_loc);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => top_level.push(list),
                }
            }
            Token::Atom(text, loc) => {
                let atom = Sexp::Atom(text, loc);
                match stack.last_mut() {
                    Some((items, _)) => items.push(atom),
                    None => top_level.push(atom),
                }
            }
        }
    }
    if let Some((_, open_loc)) = stack.last() {
        return Err(ParseError::UnbalancedParens(*open_loc));
    }
    Ok(top_level)
}

fn sexp_to_term(sexp: &Sexp) -> Result<Term, ParseError> {
    match sexp {
        Sexp::Atom(text, loc) => atom_to_term(text, *loc),
        Sexp::List(items, loc) => {
            if items.is_empty() {
                return Err(ParseError::EmptyExpression(*loc));
            }
            let head = sexp_to_term(&items[0])?;
            let args = items[1..]
                .iter()
                .map(sexp_to_term)
                .collect::<Result<Vec<_>, _>>()?;
            if args.is_empty() {
                return Err(ParseError::EmptyExpression(*loc));
            }
            Ok(Term::Compound(Box::new(head), args))
        }
    }
}

fn atom_to_term(text: &str, loc: SourceLocation) -> Result<Term, ParseError> {
    let invalid = |token: &str| ParseError::InvalidToken {
        token: token.to_string(),
        location: loc,
    };
    if let Some(name) = text.strip_prefix('?') {
        if name.is_empty() {
            return Err(invalid(text));
        }
        Ok(Term::Variable(name.to_string()))
    } else if let Some(name) = text.strip_prefix('@') {
        if name.is_empty() {
            return Err(invalid(text));
        }
        Ok(Term::RowVariable(name.to_string()))
    } else if text.is_empty() {
        Err(invalid(text))
    } else {
        Ok(Term::Constant(text.to_string()))
    }
}

fn parse_quantifier_vars(sexp: &Sexp, loc: SourceLocation) -> Result<Vec<String>, ParseError> {
    let items = match sexp {
        Sexp::List(items, _) => items,
        Sexp::Atom(..) => return Err(ParseError::MalformedQuantifier(loc)),
    };
    if items.is_empty() {
        return Err(ParseError::MalformedQuantifier(loc));
    }
    let mut vars = Vec::new();
    for item in items {
        match item {
            Sexp::Atom(text, _) if text.starts_with('?') && text.len() > 1 => {
                let name = text[1..].to_string();
                if !vars.contains(&name) {
                    vars.push(name);
                }
            }
            _ => return Err(ParseError::MalformedQuantifier(loc)),
        }
    }
    Ok(vars)
}

fn sexp_to_formula(sexp: &Sexp) -> Result<Formula, ParseError> {
    let (items, loc) = match sexp {
        Sexp::List(items, loc) => (items, *loc),
        Sexp::Atom(_, loc) => return Err(ParseError::ExpectedList(*loc)),
    };
    if items.is_empty() {
        return Err(ParseError::EmptyExpression(loc));
    }
    let head_text = match &items[0] {
        Sexp::Atom(text, _) => text.as_str(),
        Sexp::List(_, head_loc) => return Err(ParseError::InvalidPredicate(*head_loc)),
    };
    let args = &items[1..];
    let wrong_arity = || ParseError::MalformedConnective {
        head: head_text.to_string(),
        location: loc,
    };
    match head_text {
        "=>" => {
            if args.len() != 2 {
                return Err(wrong_arity());
            }
            Ok(Formula::Implies(
                Box::new(sexp_to_formula(&args[0])?),
                Box::new(sexp_to_formula(&args[1])?),
            ))
        }
        "<=>" => {
            if args.len() != 2 {
                return Err(wrong_arity());
            }
            Ok(Formula::Iff(
                Box::new(sexp_to_formula(&args[0])?),
                Box::new(sexp_to_formula(&args[1])?),
            ))
        }
        "not" => {
            if args.len() != 1 {
                return Err(wrong_arity());
            }
            Ok(Formula::Not(Box::new(sexp_to_formula(&args[0])?)))
        }
        "and" | "or" => {
            if args.is_empty() {
                return Err(wrong_arity());
            }
            let parts = args
                .iter()
                .map(sexp_to_formula)
                .collect::<Result<Vec<_>, _>>()?;
            if parts.len() == 1 {
                return Ok(parts.into_iter().next().unwrap());
            }
            if head_text == "and" {
                Ok(Formula::And(parts))
            } else {
                Ok(Formula::Or(parts))
            }
        }
        "forall" | "exists" => {
            if args.len() != 2 {
                return Err(ParseError::MalformedQuantifier(loc));
            }
            let vars = parse_quantifier_vars(&args[0], loc)?;
            let body = Box::new(sexp_to_formula(&args[1])?);
            if head_text == "forall" {
                Ok(Formula::Forall(vars, body))
            } else {
                Ok(Formula::Exists(vars, body))
            }
        }
        "equal" => {
            if args.len() != 2 {
                return Err(wrong_arity());
            }
            Ok(Formula::Equal(sexp_to_term(&args[0])?, sexp_to_term(&args[1])?))
        }
        _ => {
            let predicate = atom_to_term(head_text, items[0].location())?;
            if matches!(predicate, Term::RowVariable(_)) {
                return Err(ParseError::InvalidPredicate(items[0].location()));
            }
            let atom_args = args
                .iter()
                .map(sexp_to_term)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Formula::Atom {
                predicate,
                args: atom_args,
            })
        }
    }
}

/// Parse SUO-KIF text into one formula per top-level S-expression, in order.
pub fn parse_suo_kif(text: &str) -> Result<Vec<(Formula, SourceLocation)>, ParseError> {
    let sexps = parse_sexps(text)?;
    let mut formulas = Vec::with_capacity(sexps.len());
    for sexp in &sexps {
        let loc = sexp.location();
        formulas.push((sexp_to_formula(sexp)?, loc));
    }
    Ok(formulas)
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn render_term(term: &Term, out: &mut String) {
    match term {
        Term::Constant(name) => out.push_str(name),
        Term::Variable(name) => {
            out.push('?');
            out.push_str(name);
        }
        Term::RowVariable(name) => {
            out.push('@');
            out.push_str(name);
        }
        Term::Compound(head, args) => {
            out.push('(');
            render_term(head, out);
            for arg in args {
                out.push(' ');
                render_term(arg, out);
            }
            out.push(')');
        }
    }
}

fn render_into(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom { predicate, args } => {
            out.push('(');
            render_term(predicate, out);
            for arg in args {
                out.push(' ');
                render_term(arg, out);
            }
            out.push(')');
        }
        Formula::Equal(lhs, rhs) => {
            out.push_str("(equal ");
            render_term(lhs, out);
            out.push(' ');
            render_term(rhs, out);
            out.push(')');
        }
        Formula::Not(inner) => {
            out.push_str("(not ");
            render_into(inner, out);
            out.push(')');
        }
        Formula::And(parts) | Formula::Or(parts) => {
            out.push('(');
            out.push_str(if matches!(f, Formula::And(_)) { "and" } else { "or" });
            for part in parts {
                out.push(' ');
                render_into(part, out);
            }
            out.push(')');
        }
        Formula::Implies(lhs, rhs) => {
            out.push_str("(=> ");
            render_into(lhs, out);
            out.push(' ');
            render_into(rhs, out);
            out.push(')');
        }
        Formula::Iff(lhs, rhs) => {
            out.push_str("(<=> ");
            render_into(lhs, out);
            out.push(' ');
            render_into(rhs, out);
            out.push(')');
        }
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            out.push('(');
            out.push_str(if matches!(f, Formula::Forall(..)) { "forall" } else { "exists" });
            out.push_str(" (");
            for (i, var) in vars.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push('?');
                out.push_str(var);
            }
            out.push_str(") ");
            render_into(body, out);
            out.push(')');
        }
    }
}

/// Render a formula back to canonical SUO-KIF text.
///
/// `parse_suo_kif(render_formula(f))` yields a formula structurally equal
/// to `f`.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    render_into(f, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Variable collection and classification
// ---------------------------------------------------------------------------

fn collect_term_variables(term: &Term, bound: &[String], sets: &mut VariableSets) {
    match term {
        Term::Constant(_) => {}
        Term::Variable(name) => {
            if !bound.iter().any(|b| b == name) {
                sets.free.insert(name.clone());
            }
        }
        Term::RowVariable(name) => {
            sets.row.insert(name.clone());
        }
        Term::Compound(head, args) => {
            collect_term_variables(head, bound, sets);
            for arg in args {
                collect_term_variables(arg, bound, sets);
            }
        }
    }
}

fn collect_into(f: &Formula, bound: &mut Vec<String>, sets: &mut VariableSets) {
    match f {
        Formula::Atom { predicate, args } => {
            collect_term_variables(predicate, bound, sets);
            for arg in args {
                collect_term_variables(arg, bound, sets);
            }
        }
        Formula::Equal(lhs, rhs) => {
            collect_term_variables(lhs, bound, sets);
            collect_term_variables(rhs, bound, sets);
        }
        Formula::Not(inner) => collect_into(inner, bound, sets),
        Formula::And(parts) | Formula::Or(parts) => {
            for part in parts {
                collect_into(part, bound, sets);
            }
        }
        Formula::Implies(lhs, rhs) | Formula::Iff(lhs, rhs) => {
            collect_into(lhs, bound, sets);
            collect_into(rhs, bound, sets);
        }
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            let depth = bound.len();
            bound.extend(vars.iter().cloned());
            collect_into(body, bound, sets);
            bound.truncate(depth);
        }
    }
}

/// Free ordinary variables (quantifier-bound occurrences excluded) and all
/// row variables of a formula. Row variables are never quantifier-bound in
/// SUO-KIF.
pub fn collect_variables(f: &Formula) -> VariableSets {
    let mut sets = VariableSets::default();
    collect_into(f, &mut Vec::new(), &mut sets);
    sets
}

fn term_is_ground(term: &Term) -> bool {
    match term {
        Term::Constant(_) => true,
        Term::Variable(_) | Term::RowVariable(_) => false,
        Term::Compound(head, args) => term_is_ground(head) && args.iter().all(term_is_ground),
    }
}

/// `UnitClause` iff the formula is a ground atom or ground equality; every
/// formula with connectives, quantifiers or variables is a `GeneralClause`.
pub fn classify_formula(f: &Formula) -> FormulaKind {
    match f {
        Formula::Atom { predicate, args } => {
            if term_is_ground(predicate) && args.iter().all(term_is_ground) {
                FormulaKind::UnitClause
            } else {
                FormulaKind::GeneralClause
            }
        }
        Formula::Equal(lhs, rhs) => {
            if term_is_ground(lhs) && term_is_ground(rhs) {
                FormulaKind::UnitClause
            } else {
                FormulaKind::GeneralClause
            }
        }
        _ => FormulaKind::GeneralClause,
    }
}

// ---------------------------------------------------------------------------
// Alpha-normalization
// ---------------------------------------------------------------------------

fn rename_term(term: &Term, map: &[(String, String)]) -> Term {
    match term {
        Term::Constant(_) => term.clone(),
        Term::Variable(name) => match map.iter().rev().find(|(from, _)| from == name) {
            Some((_, to)) => Term::Variable(to.clone()),
            None => term.clone(),
        },
        Term::RowVariable(_) => term.clone(),
        Term::Compound(head, args) => Term::Compound(
            Box::new(rename_term(head, map)),
            args.iter().map(|a| rename_term(a, map)).collect(),
        ),
    }
}

fn alpha_into(f: &Formula, map: &mut Vec<(String, String)>, counter: &mut usize) -> Formula {
    match f {
        Formula::Atom { predicate, args } => Formula::Atom {
            predicate: rename_term(predicate, map),
            args: args.iter().map(|a| rename_term(a, map)).collect(),
        },
        Formula::Equal(lhs, rhs) => Formula::Equal(rename_term(lhs, map), rename_term(rhs, map)),
        Formula::Not(inner) => Formula::Not(Box::new(alpha_into(inner, map, counter))),
        Formula::And(parts) => {
            Formula::And(parts.iter().map(|p| alpha_into(p, map, counter)).collect())
        }
        Formula::Or(parts) => {
            Formula::Or(parts.iter().map(|p| alpha_into(p, map, counter)).collect())
        }
        Formula::Implies(lhs, rhs) => Formula::Implies(
            Box::new(alpha_into(lhs, map, counter)),
            Box::new(alpha_into(rhs, map, counter)),
        ),
        Formula::Iff(lhs, rhs) => Formula::Iff(
            Box::new(alpha_into(lhs, map, counter)),
            Box::new(alpha_into(rhs, map, counter)),
        ),
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            let depth = map.len();
            let mut fresh = Vec::with_capacity(vars.len());
            for var in vars {
                *counter += 1;
                let name = format!("V{counter}");
                map.push((var.clone(), name.clone()));
                fresh.push(name);
            }
            let new_body = Box::new(alpha_into(body, map, counter));
            map.truncate(depth);
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(fresh, new_body)
            } else {
                Formula::Exists(fresh, new_body)
            }
        }
    }
}

/// Rename bound variables to a canonical `V1, V2, ...` scheme in binder
/// order. Two formulas are alpha-equivalent iff their normalizations are
/// structurally equal.
pub fn alpha_normalize(f: &Formula) -> Formula {
    alpha_into(f, &mut Vec::new(), &mut 0)
}
