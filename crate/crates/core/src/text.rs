//! Surface syntax: class expressions (Manchester-style keywords), the
//! line-oriented `.dlkb` knowledge-base format and `+`/`-` problem files.
//!
//! Expression grammar, loosest binding first:
//!
//! ```text
//! expr  := and {"or" and}
//! and   := unary {"and" unary}
//! unary := "not" unary | "Thing" | "Nothing" | Name
//!        | Name "some" unary | Name "only" unary | "(" expr ")"
//! ```
//!
//! Chains parse right-leaning, which is also the shape of canonical chains,
//! so `parse(render(e))` gives back `canonicalize(e)`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::learner::LearningProblem;
use crate::model::{is_identifier, Assertion, Axiom, ClassExpression, KnowledgeBase, NameKind, Signature};

/// 1-based line and column (columns count characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize) -> Self {
        SourceSpan { line: line.max(1), column: column.max(1) }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError { span, message: message.into(), expected: Vec::new() }
    }

    fn expected(span: SourceSpan, message: impl Into<String>, expected: &[&str]) -> Self {
        ParseError { span, message: message.into(), expected: expected.iter().map(|s| s.to_string()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    LParen,
    RParen,
    Arrow,
    Plus,
    Minus,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("\"(\""),
            Tok::RParen => f.write_str("\")\""),
            Tok::Arrow => f.write_str("\"=>\""),
            Tok::Plus => f.write_str("\"+\""),
            Tok::Minus => f.write_str("\"-\""),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

impl Token {
    fn keyword(&self) -> Option<&str> {
        match &self.tok {
            Tok::Name(n) if crate::model::KEYWORDS.contains(&n.as_str()) => Some(n),
            _ => None,
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        self.keyword() == Some(kw)
    }
}

fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let span = SourceSpan::new(line_no, i + 1);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '=' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Name(chars[start..=i].iter().collect())
            }
            other => return Err(ParseError::new(span, format!("unexpected character {other:?}"))),
        };
        tokens.push(Token { tok, span });
        i += 1;
    }
    Ok(tokens)
}

fn lex_text(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        tokens.extend(lex_line(line, idx + 1)?);
    }
    Ok(tokens)
}

/// How names in an expression are checked.
#[derive(Clone, Copy, Debug)]
enum Names<'a> {
    Strict(&'a Signature),
    Open,
}

const UNARY_START: &[&str] = &["class name", "role name", "\"not\"", "\"Thing\"", "\"Nothing\"", "\"(\""];

struct ExprParser<'t, 'a> {
    tokens: &'t [Token],
    pos: usize,
    names: Names<'a>,
}

impl<'t, 'a> ExprParser<'t, 'a> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn end_span(&self) -> SourceSpan {
        self.tokens.last().map(|t| t.span).unwrap_or(SourceSpan::new(1, 1))
    }

    fn parse_or(&mut self) -> Result<ClassExpression, ParseError> {
        let first = self.parse_and()?;
        if self.peek().is_some_and(|t| t.is_keyword("or")) {
            self.pos += 1;
            let rest = self.parse_or()?;
            return Ok(ClassExpression::or(first, rest));
        }
        Ok(first)
    }

    fn parse_and(&mut self) -> Result<ClassExpression, ParseError> {
        let first = self.parse_unary()?;
        if self.peek().is_some_and(|t| t.is_keyword("and")) {
            self.pos += 1;
            let rest = self.parse_and()?;
            return Ok(ClassExpression::and(first, rest));
        }
        Ok(first)
    }

    fn parse_unary(&mut self) -> Result<ClassExpression, ParseError> {
        let Some(token) = self.peek() else {
            return Err(ParseError::expected(self.end_span(), "unexpected end of expression", UNARY_START));
        };
        self.pos += 1;
        match (&token.tok, token.keyword()) {
            (_, Some("not")) => Ok(ClassExpression::not(self.parse_unary()?)),
            (_, Some("Thing")) => Ok(ClassExpression::Top),
            (_, Some("Nothing")) => Ok(ClassExpression::Bottom),
            (_, Some(kw)) => Err(ParseError::expected(token.span, format!("unexpected keyword \"{kw}\""), UNARY_START)),
            (Tok::LParen, _) => {
                let inner = self.parse_or()?;
                match self.peek() {
                    Some(Token { tok: Tok::RParen, .. }) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some(t) => Err(ParseError::expected(
                        t.span,
                        format!("unexpected {}", t.tok),
                        &["\"and\"", "\"or\"", "\")\""],
                    )),
                    None => Err(ParseError::expected(self.end_span(), "unclosed parenthesis", &["\")\""])),
                }
            }
            (Tok::Name(name), None) => {
                if !is_identifier(name) {
                    return Err(ParseError::new(token.span, format!("invalid identifier `{name}`")));
                }
                let quantifier = self.peek().and_then(|t| match t.keyword() {
                    Some("some") => Some(true),
                    Some("only") => Some(false),
                    _ => None,
                });
                match quantifier {
                    Some(existential) => {
                        self.pos += 1;
                        self.check_name(name, NameKind::Role, token.span)?;
                        let filler = self.parse_unary()?;
                        Ok(if existential {
                            ClassExpression::exists(name.clone(), filler)
                        } else {
                            ClassExpression::forall(name.clone(), filler)
                        })
                    }
                    None => {
                        self.check_name(name, NameKind::Class, token.span)?;
                        Ok(ClassExpression::atomic(name.clone()))
                    }
                }
            }
            (other, None) => Err(ParseError::expected(token.span, format!("unexpected {other}"), UNARY_START)),
        }
    }

    fn check_name(&self, name: &str, kind: NameKind, span: SourceSpan) -> Result<(), ParseError> {
        let Names::Strict(sig) = self.names else { return Ok(()) };
        let ok = match kind {
            NameKind::Class => sig.is_class(name),
            NameKind::Role => sig.is_role(name),
            NameKind::Individual => sig.is_individual(name),
        };
        if ok {
            return Ok(());
        }
        let message = match sig.kinds_of(name).first() {
            Some(actual) => format!("`{name}` is declared as a {actual}, expected a {kind}"),
            None => format!("unknown {kind} `{name}`"),
        };
        Err(ParseError::new(span, message))
    }
}

fn parse_tokens(tokens: &[Token], names: Names<'_>) -> Result<ClassExpression, ParseError> {
    let mut parser = ExprParser { tokens, pos: 0, names };
    let expr = parser.parse_or()?;
    if let Some(t) = parser.peek() {
        return Err(ParseError::expected(
            t.span,
            format!("unexpected {} after complete expression", t.tok),
            &["\"and\"", "\"or\"", "end of input"],
        ));
    }
    Ok(expr)
}

/// Parse an expression, checking every class and role name against `sig`.
pub fn parse_expression(text: &str, sig: &Signature) -> Result<ClassExpression, ParseError> {
    parse_tokens(&lex_text(text)?, Names::Strict(sig))
}

/// Parse without a signature: names before `some`/`only` are roles, all others classes.
pub fn parse_expression_open(text: &str) -> Result<ClassExpression, ParseError> {
    parse_tokens(&lex_text(text)?, Names::Open)
}

fn split_axiom_tokens(tokens: &[Token], line_span: SourceSpan) -> Result<(&[Token], &[Token]), ParseError> {
    let arrows: Vec<usize> = tokens.iter().enumerate().filter(|(_, t)| t.tok == Tok::Arrow).map(|(i, _)| i).collect();
    match arrows.as_slice() {
        [i] => Ok((&tokens[..*i], &tokens[*i + 1..])),
        [] => Err(ParseError::expected(line_span, "axiom needs `<expr> => <expr>`", &["\"=>\""])),
        [_, second, ..] => Err(ParseError::new(tokens[*second].span, "more than one \"=>\" in axiom")),
    }
}

fn parse_axiom_tokens(tokens: &[Token], names: Names<'_>, line_span: SourceSpan) -> Result<Axiom, ParseError> {
    let (lhs, rhs) = split_axiom_tokens(tokens, line_span)?;
    if lhs.is_empty() {
        return Err(ParseError::expected(line_span, "missing left-hand side", UNARY_START));
    }
    if rhs.is_empty() {
        return Err(ParseError::expected(tokens[tokens.len() - 1].span, "missing right-hand side", UNARY_START));
    }
    Ok(Axiom::new(parse_tokens(lhs, names)?, parse_tokens(rhs, names)?))
}

/// Parse `<expr> => <expr>` (optionally prefixed by `gci`) against a signature.
pub fn parse_axiom(text: &str, sig: &Signature) -> Result<Axiom, ParseError> {
    parse_axiom_with(text, Names::Strict(sig))
}

/// Parse `<expr> => <expr>` (optionally prefixed by `gci`) without a signature.
pub fn parse_axiom_open(text: &str) -> Result<Axiom, ParseError> {
    parse_axiom_with(text, Names::Open)
}

fn parse_axiom_with(text: &str, names: Names<'_>) -> Result<Axiom, ParseError> {
    let text = strip_comment_lines(text);
    let mut tokens = lex_text(&text)?;
    if tokens.first().is_some_and(|t| t.tok == Tok::Name("gci".into())) {
        tokens.remove(0);
    }
    parse_axiom_tokens(&tokens, names, SourceSpan::new(1, 1))
}

fn strip_comment_lines(text: &str) -> String {
    text.lines().map(strip_comment).collect::<Vec<_>>().join("\n")
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

// Binding strength of a node: or < and < everything else.
fn precedence(expr: &ClassExpression) -> u8 {
    match expr {
        ClassExpression::Or(..) => 1,
        ClassExpression::And(..) => 2,
        _ => 3,
    }
}

struct Symbols {
    top: &'static str,
    bottom: &'static str,
    not: &'static str,
    and: &'static str,
    or: &'static str,
}

const ASCII: Symbols = Symbols { top: "Thing", bottom: "Nothing", not: "not ", and: " and ", or: " or " };
const UNICODE: Symbols = Symbols { top: "⊤", bottom: "⊥", not: "¬", and: " ⊓ ", or: " ⊔ " };

fn write_expr(out: &mut String, expr: &ClassExpression, min_prec: u8, unicode: bool) {
    let sym = if unicode { &UNICODE } else { &ASCII };
    let parens = precedence(expr) < min_prec;
    if parens {
        out.push('(');
    }
    match expr {
        ClassExpression::Top => out.push_str(sym.top),
        ClassExpression::Bottom => out.push_str(sym.bottom),
        ClassExpression::Atomic(a) => out.push_str(a),
        ClassExpression::Not(c) => {
            out.push_str(sym.not);
            write_expr(out, c, 3, unicode);
        }
        ClassExpression::And(l, r) => {
            write_expr(out, l, 3, unicode);
            out.push_str(sym.and);
            write_expr(out, r, 2, unicode);
        }
        ClassExpression::Or(l, r) => {
            write_expr(out, l, 2, unicode);
            out.push_str(sym.or);
            write_expr(out, r, 1, unicode);
        }
        ClassExpression::Exists(role, c) | ClassExpression::Forall(role, c) => {
            let existential = matches!(expr, ClassExpression::Exists(..));
            if unicode {
                out.push(if existential { '∃' } else { '∀' });
                out.push_str(role);
                out.push('.');
            } else {
                out.push_str(role);
                out.push_str(if existential { " some " } else { " only " });
            }
            write_expr(out, c, 3, unicode);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Structure-preserving rendering with minimal parentheses; no reordering.
pub fn render_raw(expr: &ClassExpression) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr, 1, false);
    out
}

/// Canonical ASCII rendering.
pub fn render_expression(expr: &ClassExpression) -> String {
    render_raw(&expr.canonicalize())
}

/// Display-only rendering in DL notation (∃, ∀, ⊓, ⊔, ¬). Not parseable.
pub fn render_unicode(expr: &ClassExpression) -> String {
    let mut out = String::new();
    write_expr(&mut out, &expr.canonicalize(), 1, true);
    out
}

const DIRECTIVES: &[&str] = &["class", "role", "ind", "sub", "gci", "type", "rel"];

fn directive_kind(directive: &str) -> Option<NameKind> {
    match directive {
        "class" => Some(NameKind::Class),
        "role" => Some(NameKind::Role),
        "ind" => Some(NameKind::Individual),
        _ => None,
    }
}

fn expect_names<'t>(tokens: &'t [Token], count: usize, usage: &str) -> Result<Vec<(&'t str, SourceSpan)>, ParseError> {
    let args = &tokens[1..];
    if args.len() != count {
        let span = args.get(count).map(|t| t.span).unwrap_or(tokens[tokens.len() - 1].span);
        return Err(ParseError::new(span, format!("expected `{usage}`")));
    }
    args.iter()
        .map(|t| match &t.tok {
            Tok::Name(n) if is_identifier(n) => Ok((n.as_str(), t.span)),
            Tok::Name(n) => Err(ParseError::new(t.span, format!("invalid identifier `{n}`"))),
            other => Err(ParseError::expected(t.span, format!("unexpected {other}"), &["name"])),
        })
        .collect()
}

fn require(sig: &Signature, name: &str, kind: NameKind, span: SourceSpan) -> Result<(), ParseError> {
    let ok = match kind {
        NameKind::Class => sig.is_class(name),
        NameKind::Role => sig.is_role(name),
        NameKind::Individual => sig.is_individual(name),
    };
    if ok {
        Ok(())
    } else {
        Err(ParseError::new(span, format!("undeclared {kind} `{name}`")))
    }
}

/// Parse a `.dlkb` file. Declarations are collected first, so they may
/// appear anywhere; every other use of a name must match a declaration.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let tokens = lex_line(strip_comment(raw), idx + 1)?;
        if !tokens.is_empty() {
            lines.push(tokens);
        }
    }

    let mut sig = Signature::new();
    for tokens in &lines {
        let Tok::Name(directive) = &tokens[0].tok else { continue };
        let Some(kind) = directive_kind(directive) else { continue };
        let [(name, span)] = expect_names(tokens, 1, &format!("{directive} <Name>"))?[..] else { unreachable!() };
        if let Some(existing) = sig.kinds_of(name).into_iter().find(|k| *k != kind) {
            return Err(ParseError::new(span, format!("`{name}` already declared as a {existing}")));
        }
        match kind {
            NameKind::Class => sig.atomic_classes.insert(name.to_string()),
            NameKind::Role => sig.roles.insert(name.to_string()),
            NameKind::Individual => sig.individuals.insert(name.to_string()),
        };
    }

    let mut kb = KnowledgeBase::new(sig);
    for tokens in &lines {
        let head = &tokens[0];
        let directive = match &head.tok {
            Tok::Name(d) if DIRECTIVES.contains(&d.as_str()) => d.as_str(),
            other => {
                return Err(ParseError::expected(head.span, format!("unknown directive {other}"), DIRECTIVES));
            }
        };
        match directive {
            "sub" => {
                let names = expect_names(tokens, 2, "sub <ClassName> <ClassName>")?;
                for (name, span) in &names {
                    require(&kb.signature, name, NameKind::Class, *span)?;
                }
                kb.tbox.insert(Axiom::atomic(names[0].0, names[1].0));
            }
            "gci" => {
                let axiom = parse_axiom_tokens(&tokens[1..], Names::Strict(&kb.signature), head.span)?;
                kb.tbox.insert(axiom);
            }
            "type" => {
                let names = expect_names(tokens, 2, "type <Individual> <ClassName>")?;
                require(&kb.signature, names[0].0, NameKind::Individual, names[0].1)?;
                require(&kb.signature, names[1].0, NameKind::Class, names[1].1)?;
                kb.abox.insert(Assertion::class(names[1].0, names[0].0));
            }
            "rel" => {
                let names = expect_names(tokens, 3, "rel <Role> <Individual> <Individual>")?;
                require(&kb.signature, names[0].0, NameKind::Role, names[0].1)?;
                require(&kb.signature, names[1].0, NameKind::Individual, names[1].1)?;
                require(&kb.signature, names[2].0, NameKind::Individual, names[2].1)?;
                kb.abox.insert(Assertion::role(names[0].0, names[1].0, names[2].0));
            }
            _ => {} // declarations, handled above
        }
    }
    Ok(kb)
}

/// Deterministic `.dlkb` text: declarations, then axioms, then assertions,
/// each block sorted. An empty knowledge base serializes to "".
pub fn serialize_kb(kb: &KnowledgeBase) -> String {
    let sig = &kb.signature;
    let mut declarations: Vec<String> = sig
        .atomic_classes
        .iter()
        .map(|n| format!("class {n}"))
        .chain(sig.roles.iter().map(|n| format!("role {n}")))
        .chain(sig.individuals.iter().map(|n| format!("ind {n}")))
        .collect();
    let mut axioms: Vec<String> = kb
        .tbox
        .iter()
        .map(|ax| match ax.as_atomic() {
            Some((sub, sup)) => format!("sub {sub} {sup}"),
            None => format!("gci {} => {}", render_raw(&ax.sub), render_raw(&ax.sup)),
        })
        .collect();
    let mut assertions: Vec<String> = kb
        .abox
        .iter()
        .map(|a| match a {
            Assertion::Class { class, individual } => format!("type {individual} {class}"),
            Assertion::Role { role, subject, object } => format!("rel {role} {subject} {object}"),
        })
        .collect();

    let mut out = String::new();
    for block in [&mut declarations, &mut axioms, &mut assertions] {
        block.sort();
        for line in block.iter() {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

/// Parse a problem file of `+ <individual>` / `- <individual>` lines.
pub fn parse_problem(text: &str, sig: &Signature) -> Result<LearningProblem, ParseError> {
    let mut positives = BTreeSet::new();
    let mut negatives = BTreeSet::new();
    let mut last_span = SourceSpan::new(1, 1);
    for (idx, raw) in text.lines().enumerate() {
        let tokens = lex_line(strip_comment(raw), idx + 1)?;
        let Some(first) = tokens.first() else { continue };
        last_span = first.span;
        let positive = match first.tok {
            Tok::Plus => true,
            Tok::Minus => false,
            _ => {
                return Err(ParseError::expected(first.span, format!("unexpected {}", first.tok), &["\"+\"", "\"-\""]))
            }
        };
        let (name, span) = match &tokens[1..] {
            [Token { tok: Tok::Name(n), span }] => (n.as_str(), *span),
            [] => return Err(ParseError::expected(first.span, "missing individual name", &["individual name"])),
            [t] => return Err(ParseError::expected(t.span, format!("unexpected {}", t.tok), &["individual name"])),
            [_, extra, ..] => {
                return Err(ParseError::expected(extra.span, "one individual per line", &["end of line"]))
            }
        };
        if !sig.is_individual(name) {
            return Err(ParseError::new(span, format!("unknown individual `{name}`")));
        }
        let (mine, other) = if positive { (&mut positives, &negatives) } else { (&mut negatives, &positives) };
        if other.contains(name) {
            return Err(ParseError::new(span, format!("`{name}` is both a positive and a negative example")));
        }
        mine.insert(name.to_string());
    }
    if positives.is_empty() {
        return Err(ParseError::new(last_span, "problem has no positive examples"));
    }
    if negatives.is_empty() {
        return Err(ParseError::new(last_span, "problem has no negative examples"));
    }
    Ok(LearningProblem::new(positives, negatives).expect("sides checked non-empty and disjoint"))
}

/// Positives first, then negatives, each sorted.
pub fn serialize_problem(problem: &LearningProblem) -> String {
    let mut out = String::new();
    for p in &problem.positives {
        out.push_str(&format!("+ {p}\n"));
    }
    for n in &problem.negatives {
        out.push_str(&format!("- {n}\n"));
    }
    out
}
