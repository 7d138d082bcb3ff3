//! The line-oriented text format for graphs of groups.
//!
//! ```text
//! # comment
//! vertex v free 2
//! vertex d dihedral
//! edge e from=v to=v img_from="v.2 v.1^2 v.2^-1" img_to="v.1^3"
//! ```
//!
//! Letters are `<vertex>.<index>` (free, 1-based), `<vertex>.r` and
//! `<vertex>.s` (dihedral) and `<edge>.t` (stable letter), each with an
//! optional `^<signed integer>`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::model::{element_from_letters, GraphBuilder, GraphOfGroups, ValidationError, VertexKind, VertexSymbol};
use crate::word::RawLetter;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("{error}")]
    Invalid {
        error: ValidationError,
        /// `(line, column)` of the offending declaration, when there is one.
        position: Option<(usize, usize)>,
    },
}

impl TextError {
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            Self::Syntax { line, column, .. } => Some((*line, *column)),
            Self::Invalid { position, .. } => *position,
        }
    }

    fn syntax(message: impl Into<String>, line: usize, column: usize) -> Self {
        Self::Syntax {
            message: message.into(),
            line,
            column,
        }
    }
}

#[derive(Clone, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

// splits on whitespace outside double quotes; strips `#` comments
fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token<'_>>, TextError> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        if c == '"' {
            quoted = !quoted;
            if start.is_none() {
                start = Some(i);
            }
            continue;
        }
        if quoted {
            continue;
        }
        if c == '#' {
            if let Some(s) = start.take() {
                tokens.push((s, i));
            }
            break;
        }
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if quoted {
        return Err(TextError::syntax("unterminated quoted word", lineno, line.len() + 1));
    }
    if let Some(s) = start {
        tokens.push((s, line.len()));
    }
    Ok(tokens
        .into_iter()
        .map(|(s, e)| Token {
            text: &line[s..e],
            column: line[..s].chars().count() + 1,
        })
        .collect())
}

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '\'')
}

/// One letter of a word with the column it started at.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Letter {
    raw: RawLetter,
    column: usize,
}

fn parse_letters(text: &str, lineno: usize, column: usize) -> Result<Vec<Letter>, TextError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(' ') {
        let col = column + text[..offset].chars().count();
        offset += piece.len() + 1;
        if piece.trim().is_empty() {
            continue;
        }
        let piece = piece.trim();
        let (body, exp) = match piece.split_once('^') {
            Some((b, e)) => {
                let exp: BigInt = e
                    .parse()
                    .map_err(|_| TextError::syntax(format!("bad exponent in {piece:?}"), lineno, col))?;
                (b, exp)
            }
            None => (piece, BigInt::from(1)),
        };
        let (owner, sym) = body
            .rsplit_once('.')
            .ok_or_else(|| TextError::syntax(format!("letter {piece:?} lacks a '.'"), lineno, col))?;
        if !is_name(owner) {
            return Err(TextError::syntax(format!("bad name in letter {piece:?}"), lineno, col));
        }
        let raw = match sym {
            "t" => RawLetter::Stable {
                edge: owner.to_string(),
                exp,
            },
            "r" | "s" => RawLetter::Vertex {
                vertex: owner.to_string(),
                symbol: if sym == "r" { VertexSymbol::R } else { VertexSymbol::S },
                exp,
            },
            _ => {
                let i: u32 = sym
                    .parse()
                    .map_err(|_| TextError::syntax(format!("unknown letter {piece:?}"), lineno, col))?;
                RawLetter::Vertex {
                    vertex: owner.to_string(),
                    symbol: VertexSymbol::Gen(i),
                    exp,
                }
            }
        };
        out.push(Letter { raw, column: col });
    }
    Ok(out)
}

/// Parses a free-standing word such as `e.t v.1^2 e.t^-1`.
pub fn parse_word(text: &str) -> Result<Vec<RawLetter>, TextError> {
    let normalized: String = text.chars().map(|c| if c.is_whitespace() { ' ' } else { c }).collect();
    Ok(parse_letters(&normalized, 1, 1)?
        .into_iter()
        .map(|l| l.raw)
        .collect())
}

struct EdgeDecl {
    name: String,
    from: String,
    to: String,
    img_from: (Vec<Letter>, usize),
    img_to: (Vec<Letter>, usize),
    line: usize,
}

pub fn parse(text: &str) -> Result<GraphOfGroups, TextError> {
    let mut vertices: Vec<(String, VertexKind, usize)> = Vec::new();
    let mut edges: Vec<EdgeDecl> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let tokens = tokenize(line, lineno)?;
        let Some(first) = tokens.first() else {
            continue;
        };
        let need_name = |t: Option<&Token>, what: &str| -> Result<String, TextError> {
            match t {
                Some(t) if is_name(t.text) => Ok(t.text.to_string()),
                Some(t) => Err(TextError::syntax(format!("bad {what} {:?}", t.text), lineno, t.column)),
                None => Err(TextError::syntax(format!("missing {what}"), lineno, line.len() + 1)),
            }
        };
        match first.text {
            "vertex" => {
                let name = need_name(tokens.get(1), "vertex name")?;
                let kind = match tokens.get(2).map(|t| t.text) {
                    Some("dihedral") if tokens.len() == 3 => VertexKind::Dihedral,
                    Some("free") if tokens.len() == 4 => {
                        let t = &tokens[3];
                        let rank: u32 = t
                            .text
                            .parse()
                            .map_err(|_| TextError::syntax(format!("bad rank {:?}", t.text), lineno, t.column))?;
                        VertexKind::Free(rank)
                    }
                    _ => {
                        let col = tokens.get(2).map_or(line.len() + 1, |t| t.column);
                        return Err(TextError::syntax(
                            "expected `free <rank>` or `dihedral`",
                            lineno,
                            col,
                        ));
                    }
                };
                vertices.push((name, kind, lineno));
            }
            "edge" => {
                let name = need_name(tokens.get(1), "edge name")?;
                let mut fields: BTreeMap<&str, &Token> = BTreeMap::new();
                for t in &tokens[2..] {
                    let Some((key, _)) = t.text.split_once('=') else {
                        return Err(TextError::syntax(format!("expected key=value, found {:?}", t.text), lineno, t.column));
                    };
                    if !["from", "to", "img_from", "img_to"].contains(&key) {
                        return Err(TextError::syntax(format!("unknown field {key:?}"), lineno, t.column));
                    }
                    if fields.insert(key, t).is_some() {
                        return Err(TextError::syntax(format!("repeated field {key:?}"), lineno, t.column));
                    }
                }
                let value = |key: &str| -> Result<(&str, usize), TextError> {
                    let t = fields.get(key).ok_or_else(|| {
                        TextError::syntax(format!("missing field {key}="), lineno, line.len() + 1)
                    })?;
                    let v = &t.text[key.len() + 1..];
                    Ok((v, t.column + key.len() + 1))
                };
                let endpoint = |key: &str| -> Result<String, TextError> {
                    let (v, col) = value(key)?;
                    if is_name(v) {
                        Ok(v.to_string())
                    } else {
                        Err(TextError::syntax(format!("bad vertex name {v:?}"), lineno, col))
                    }
                };
                let word = |key: &str| -> Result<(Vec<Letter>, usize), TextError> {
                    let (v, col) = value(key)?;
                    let inner = v
                        .strip_prefix('"')
                        .and_then(|v| v.strip_suffix('"'))
                        .ok_or_else(|| TextError::syntax(format!("{key} must be a quoted word"), lineno, col))?;
                    Ok((parse_letters(inner, lineno, col + 1)?, col))
                };
                edges.push(EdgeDecl {
                    name,
                    from: endpoint("from")?,
                    to: endpoint("to")?,
                    img_from: word("img_from")?,
                    img_to: word("img_to")?,
                    line: lineno,
                });
            }
            other => {
                return Err(TextError::syntax(
                    format!("expected `vertex` or `edge`, found {other:?}"),
                    lineno,
                    first.column,
                ))
            }
        }
    }

    let invalid = |error: ValidationError, line: usize, column: usize| TextError::Invalid {
        error,
        position: Some((line, column)),
    };
    let mut kinds: BTreeMap<&str, VertexKind> = BTreeMap::new();
    let mut b = GraphBuilder::new();
    for (name, kind, line) in &vertices {
        if *kind == VertexKind::Free(0) {
            return Err(invalid(ValidationError::RankZero { vertex: name.clone() }, *line, 1));
        }
        if kinds.insert(name, *kind).is_some() {
            return Err(invalid(ValidationError::DuplicateName { name: name.clone() }, *line, 1));
        }
        b.vertex(name, *kind);
    }
    let mut seen_edges = BTreeMap::new();
    for e in &edges {
        if seen_edges.insert(e.name.as_str(), ()).is_some() {
            return Err(invalid(ValidationError::DuplicateName { name: e.name.clone() }, e.line, 1));
        }
        let resolve = |vertex: &str, (letters, col): &(Vec<Letter>, usize)| {
            let kind = *kinds
                .get(vertex)
                .ok_or_else(|| invalid(ValidationError::UnknownVertex { vertex: vertex.to_string() }, e.line, 1))?;
            let mut syms = Vec::with_capacity(letters.len());
            for l in letters {
                let bad = || {
                    invalid(
                        ValidationError::UnknownGenerator {
                            vertex: vertex.to_string(),
                            letter: match &l.raw {
                                RawLetter::Vertex { vertex, symbol, .. } => format!("{vertex}.{symbol}"),
                                RawLetter::Stable { edge, .. } => format!("{edge}.t"),
                            },
                        },
                        e.line,
                        l.column,
                    )
                };
                match &l.raw {
                    RawLetter::Vertex {
                        vertex: owner,
                        symbol,
                        exp,
                    } if owner == vertex => {
                        element_from_letters(vertex, kind, &[(*symbol, exp.clone())])
                            .map_err(|err| invalid(err, e.line, l.column))?;
                        syms.push((*symbol, exp.clone()));
                    }
                    _ => return Err(bad()),
                }
            }
            element_from_letters(vertex, kind, &syms).map_err(|err| invalid(err, e.line, *col))
        };
        let f = resolve(&e.from, &e.img_from)?;
        let t = resolve(&e.to, &e.img_to)?;
        b.edge(&e.name, &e.from, &e.to, f, t);
    }
    b.build().map_err(|error| {
        let position = match &error {
            ValidationError::FiniteOrderAttachment { edge, .. } => edges
                .iter()
                .find(|d| &d.name == edge)
                .map(|d| (d.line, 1)),
            _ => None,
        };
        TextError::Invalid { error, position }
    })
}

pub fn serialize(graph: &GraphOfGroups) -> String {
    let mut out = String::new();
    for v in graph.vertices() {
        match v.kind {
            VertexKind::Free(r) => writeln!(out, "vertex {} free {r}", v.name),
            VertexKind::Dihedral => writeln!(out, "vertex {} dihedral", v.name),
        }
        .expect("writing to a string");
    }
    for e in graph.edges() {
        let (from, to) = (&graph.vertex(e.from).name, &graph.vertex(e.to).name);
        writeln!(
            out,
            "edge {} from={from} to={to} img_from=\"{}\" img_to=\"{}\"",
            e.name,
            e.img_from.element.render(from),
            e.img_to.element.render(to)
        )
        .expect("writing to a string");
    }
    out
}
