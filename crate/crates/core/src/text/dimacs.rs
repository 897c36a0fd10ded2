use thiserror::Error;

use super::program::SourceSpan;

/// A 3-CNF formula: every clause has exactly three distinct literals over
/// variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf3 {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("a formula needs at least one variable")]
    NoVariables,
    #[error("a formula needs at least one clause")]
    NoClauses,
    #[error("clause {clause}: literal {literal} is out of range")]
    BadLiteral { clause: usize, literal: i32 },
    #[error("clause {0} repeats a literal")]
    DuplicateLiteral(usize),
}

impl Cnf3 {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self, CnfError> {
        if num_vars == 0 {
            return Err(CnfError::NoVariables);
        }
        if clauses.is_empty() {
            return Err(CnfError::NoClauses);
        }
        for (i, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(CnfError::BadLiteral {
                        clause: i,
                        literal: lit,
                    });
                }
            }
            if clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2] {
                return Err(CnfError::DuplicateLiteral(i));
            }
        }
        Ok(Cnf3 { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// Indices of clauses containing both `x` and `-x` for some variable.
    pub fn tautological_clauses(&self) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().any(|&l| c.contains(&-l)))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("{span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: clause {clause} does not have exactly three distinct literals")]
    NotThreeCnf { clause: usize, span: SourceSpan },
}

fn syntax(span: SourceSpan, message: impl Into<String>) -> DimacsError {
    DimacsError::Syntax {
        span,
        message: message.into(),
    }
}

/// Whitespace-separated words of one line with their positions.
fn line_words(line: &str, line_no: usize, base: usize) -> Vec<(&str, SourceSpan)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((
                    &line[s..i],
                    SourceSpan {
                        line: line_no,
                        column: line[..s].chars().count() + 1,
                        offset: base + s,
                    },
                ));
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Parses a DIMACS CNF file whose clauses all have exactly three distinct
/// literals. Lines starting with `c` are comments; a line starting with `%`
/// ends the clause section.
pub fn parse_dimacs(text: &str) -> Result<Cnf3, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<[i32; 3]> = Vec::new();
    let mut current: Vec<(i32, SourceSpan)> = Vec::new();
    let mut end = SourceSpan {
        line: 1,
        column: 1,
        offset: 0,
    };
    let mut offset = 0;

    for (i, line) in text.split_inclusive('\n').enumerate() {
        let base = offset;
        offset += line.len();
        let words = line_words(line, i + 1, base);
        end = SourceSpan {
            line: i + 1,
            column: line.trim_end_matches('\n').chars().count() + 1,
            offset,
        };
        let Some(&(first, first_span)) = words.first() else {
            continue;
        };
        if first.starts_with('c') {
            continue;
        }
        if first.starts_with('%') {
            break;
        }
        if first == "p" {
            if header.is_some() {
                return Err(syntax(first_span, "duplicate `p` header"));
            }
            if words.len() != 4 || words[1].0 != "cnf" {
                return Err(syntax(
                    first_span,
                    "expected `p cnf <vars> <clauses>` header",
                ));
            }
            let count = |(w, s): (&str, SourceSpan)| match w.parse::<usize>() {
                Ok(0) => Err(syntax(s, "count must be positive")),
                Ok(n) => Ok(n),
                Err(_) => Err(syntax(s, format!("expected a count, found `{w}`"))),
            };
            header = Some((count(words[2])?, count(words[3])?));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(syntax(
                first_span,
                "expected `p cnf <vars> <clauses>` header",
            ));
        };
        for (word, span) in words {
            let lit: i32 = word
                .parse()
                .map_err(|_| syntax(span, format!("expected a literal, found `{word}`")))?;
            if lit == 0 {
                let index = clauses.len();
                let lits: Vec<i32> = current.iter().map(|(l, _)| *l).collect();
                let distinct = lits.len() == 3
                    && lits[0] != lits[1]
                    && lits[0] != lits[2]
                    && lits[1] != lits[2];
                if !distinct {
                    return Err(DimacsError::NotThreeCnf {
                        clause: index,
                        span: current.first().map_or(span, |(_, s)| *s),
                    });
                }
                clauses.push([lits[0], lits[1], lits[2]]);
                current.clear();
            } else if lit.unsigned_abs() as usize > vars {
                return Err(syntax(
                    span,
                    format!("literal {lit} exceeds variable count {vars}"),
                ));
            } else {
                current.push((lit, span));
            }
        }
    }

    let Some((vars, count)) = header else {
        return Err(syntax(end, "missing `p cnf` header"));
    };
    if let Some((_, span)) = current.first() {
        return Err(syntax(*span, "clause is not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(syntax(
            end,
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok(Cnf3::new(vars, clauses).expect("validated while parsing"))
}
