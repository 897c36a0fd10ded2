use std::fmt;

use thiserror::Error;

use crate::atoms::AtomSet;
use crate::program::{Program, ProgramBuilder, Rule};

/// 1-based line and column plus the 0-based byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("rule {0} has an empty head")]
    EmptyHead(usize),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn syntax(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            span,
            kind: ParseErrorKind::Syntax(message.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    Bar,
    If,
    Comma,
    Dot,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(name) => write!(f, "`{name}`"),
            Token::Not => f.write_str("`not`"),
            Token::Bar => f.write_str("`|`"),
            Token::If => f.write_str("`:-`"),
            Token::Comma => f.write_str("`,`"),
            Token::Dot => f.write_str("`.`"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn span(&self) -> SourceSpan {
        SourceSpan {
            line: self.line,
            column: self.column,
            offset: self.pos,
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek_char() {
            if c == '%' {
                while let Some(c) = self.peek_char() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<(Token, SourceSpan), ParseError> {
        self.skip_trivia();
        let span = self.span();
        let Some(c) = self.peek_char() else {
            return Ok((Token::Eof, span));
        };
        let token = match c {
            '|' | ';' => {
                self.bump();
                Token::Bar
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            '.' => {
                self.bump();
                Token::Dot
            }
            ':' => {
                self.bump();
                if self.peek_char() == Some('-') {
                    self.bump();
                    Token::If
                } else {
                    return Err(ParseError::syntax(span, "expected `:-`"));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = self.pos;
                while self
                    .peek_char()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.bump();
                }
                let word = &self.src[start..self.pos];
                if word == "not" {
                    Token::Not
                } else if word.starts_with(|c: char| c.is_ascii_lowercase()) {
                    Token::Ident(word.to_string())
                } else {
                    return Err(ParseError::syntax(
                        span,
                        format!("invalid atom name `{word}`"),
                    ));
                }
            }
            other => {
                return Err(ParseError::syntax(
                    span,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        Ok((token, span))
    }
}

#[derive(Debug)]
struct Name {
    text: String,
    span: SourceSpan,
}

#[derive(Debug, Default)]
struct ParsedRule {
    head: Vec<Name>,
    pos: Vec<Name>,
    neg: Vec<Name>,
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    token: Token,
    span: SourceSpan,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let (token, span) = lexer.next_token()?;
        Ok(Parser { lexer, token, span })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let (token, span) = self.lexer.next_token()?;
        self.token = token;
        self.span = span;
        Ok(())
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::syntax(
            self.span,
            format!("expected {expected}, found {}", self.token),
        )
    }

    fn atom(&mut self) -> Result<Name, ParseError> {
        match &self.token {
            Token::Ident(text) => {
                let name = Name {
                    text: text.clone(),
                    span: self.span,
                };
                self.advance()?;
                Ok(name)
            }
            _ => Err(self.unexpected("an atom")),
        }
    }

    fn rules(mut self) -> Result<Vec<ParsedRule>, ParseError> {
        let mut rules = Vec::new();
        while self.token != Token::Eof {
            if self.token == Token::If {
                return Err(ParseError {
                    span: self.span,
                    kind: ParseErrorKind::EmptyHead(rules.len()),
                });
            }
            let mut rule = ParsedRule::default();
            rule.head.push(self.atom()?);
            while self.token == Token::Bar {
                self.advance()?;
                rule.head.push(self.atom()?);
            }
            if self.token == Token::If {
                self.advance()?;
                loop {
                    if self.token == Token::Not {
                        self.advance()?;
                        rule.neg.push(self.atom()?);
                    } else {
                        rule.pos.push(self.atom()?);
                    }
                    if self.token != Token::Comma {
                        break;
                    }
                    self.advance()?;
                }
            }
            if self.token != Token::Dot {
                return Err(self.unexpected("`.`"));
            }
            self.advance()?;
            rules.push(rule);
        }
        Ok(rules)
    }
}

/// Parses the `.lp` surface syntax:
///
/// ```text
/// rule := head (":-" body)? "."
/// head := atom ("|" atom)*        % ";" is accepted for "|"
/// body := lit ("," lit)*
/// lit  := atom | "not" atom
/// ```
///
/// Atom ids are assigned per rule in head, positive body, negative body
/// order, which makes `parse(render(p))` reproduce `p` id for id.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let parsed = Parser::new(text)?.rules()?;
    let mut builder = ProgramBuilder::new();
    fn names(v: &[Name]) -> Vec<&str> {
        v.iter().map(|n| n.text.as_str()).collect()
    }
    for rule in &parsed {
        builder
            .rule(&names(&rule.head), &names(&rule.pos), &names(&rule.neg))
            .expect("lexer only yields valid atom names");
    }
    Ok(builder.build())
}

/// Parses rules whose atoms must already exist in `base`; the result shares
/// `base`'s atom table.
pub fn parse_rules_in(text: &str, base: &Program) -> Result<Program, ParseError> {
    let parsed = Parser::new(text)?.rules()?;
    let resolve = |names: &[Name]| -> Result<AtomSet, ParseError> {
        names
            .iter()
            .map(|n| {
                base.atom(&n.text).ok_or_else(|| ParseError {
                    span: n.span,
                    kind: ParseErrorKind::UnknownAtom(n.text.clone()),
                })
            })
            .collect()
    };
    let rules = parsed
        .iter()
        .map(|r| {
            Ok(Rule::new(
                resolve(&r.head)?,
                resolve(&r.pos)?,
                resolve(&r.neg)?,
            ))
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    Ok(base.with_rules(rules))
}

/// One rule in canonical form, without a trailing newline.
pub fn render_rule(program: &Program, rule: &Rule) -> String {
    let mut out = String::new();
    for (i, atom) in rule.head.iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        out.push_str(program.name(atom));
    }
    let body: Vec<String> = rule
        .pos_body
        .iter()
        .map(|a| program.name(a).to_string())
        .chain(
            rule.neg_body
                .iter()
                .map(|a| format!("not {}", program.name(a))),
        )
        .collect();
    if !body.is_empty() {
        out.push_str(" :- ");
        out.push_str(&body.join(", "));
    }
    out.push('.');
    out
}

/// Canonical rendering: one rule per line, atoms in ascending id order,
/// positive body literals before negated ones.
pub fn render_program(program: &Program) -> String {
    program
        .rules()
        .iter()
        .map(|r| render_rule(program, r) + "\n")
        .collect()
}
