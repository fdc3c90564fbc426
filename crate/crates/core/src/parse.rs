//! Text formats for commutation graphs.
//!
//! Edge-list format, one directive per line:
//!
//! ```text
//! # comment
//! vertices: x1 x2 x3 x4
//! edge x1 x3
//! x1 x4
//! ```
//!
//! The `vertices:` header is optional. With it, the declared order is the
//! vertex order and edges may only mention declared vertices; without it,
//! vertices are created in order of first appearance.
//!
//! DOT input accepts the undirected subset: `[strict] graph [id] { ... }`
//! with node statements, `u -- v -- w` edge chains, and attribute lists
//! (ignored).

use std::collections::HashMap;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{validate_name, CommutationGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Edges,
    Dot,
}

impl FromStr for GraphFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(GraphFormat::Edges),
            "dot" => Ok(GraphFormat::Dot),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<CommutationGraph> {
    match format {
        GraphFormat::Edges => parse_edges(text),
        GraphFormat::Dot => parse_dot(text),
    }
}

/// Collects vertices in first-appearance order.
#[derive(Default)]
struct Builder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn declare(&mut self, name: &str) -> Result<usize> {
        validate_name(name)?;
        if self.index.contains_key(name) {
            return Err(Error::DuplicateVertex(name.to_string()));
        }
        Ok(self.intern(name))
    }

    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    fn edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(self.names[u].clone()));
        }
        self.edges.push((u, v));
        Ok(())
    }

    fn finish(self) -> Result<CommutationGraph> {
        if self.names.is_empty() {
            return Err(Error::EmptyGraph);
        }
        CommutationGraph::new(self.names, &self.edges)
    }
}

fn parse_edges(text: &str) -> Result<CommutationGraph> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    let mut b = Builder::default();
    let mut declared = false;
    for &(_, line) in &lines {
        if let Some(rest) = line.strip_prefix("vertices:") {
            declared = true;
            for name in rest.split_whitespace() {
                b.declare(name)?;
            }
        }
    }

    for &(lineno, line) in &lines {
        if line.starts_with("vertices:") {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (u, v) = match tokens.as_slice() {
            ["edge", u, v] => (*u, *v),
            [u, v] if *u != "edge" => (*u, *v),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected `edge u v` or `u v`, got `{line}`"),
                })
            }
        };
        let mut endpoint = |name: &str| -> Result<usize> {
            if declared {
                b.index
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::Parse { line: lineno, message: format!("vertex `{name}` is not declared") })
            } else {
                validate_name(name)?;
                Ok(b.intern(name))
            }
        };
        let (iu, iv) = (endpoint(u)?, endpoint(v)?);
        b.edge(iu, iv)?;
    }
    b.finish()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Eq,
    EdgeOp,
    DirectedEdgeOp,
}

fn dot_tokens(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                    if chars[i] == '\n' {
                        line += 1;
                    }
                    i += 1;
                }
                i += 2;
            }
            '{' => {
                out.push((line, Tok::LBrace));
                i += 1;
            }
            '}' => {
                out.push((line, Tok::RBrace));
                i += 1;
            }
            '[' => {
                out.push((line, Tok::LBracket));
                i += 1;
            }
            ']' => {
                out.push((line, Tok::RBracket));
                i += 1;
            }
            ';' => {
                out.push((line, Tok::Semi));
                i += 1;
            }
            ',' => {
                out.push((line, Tok::Comma));
                i += 1;
            }
            '=' => {
                out.push((line, Tok::Eq));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                out.push((line, Tok::EdgeOp));
                i += 2;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((line, Tok::DirectedEdgeOp));
                i += 2;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    if chars[i] == '\\' && i + 1 < chars.len() {
                        i += 1;
                    }
                    s.push(chars[i]);
                    i += 1;
                }
                if i >= chars.len() {
                    return Err(Error::Parse { line, message: "unterminated string".into() });
                }
                i += 1;
                out.push((line, Tok::Id(s)));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                out.push((line, Tok::Id(chars[start..i].iter().collect())));
            }
            other => {
                return Err(Error::Parse { line, message: format!("unexpected character `{other}`") });
            }
        }
    }
    Ok(out)
}

fn parse_dot(text: &str) -> Result<CommutationGraph> {
    let toks = dot_tokens(text)?;
    let mut pos = 0;
    let err = |line: usize, message: &str| Error::Parse { line, message: message.to_string() };
    let line_at = |pos: usize| toks.get(pos).map(|t| t.0).unwrap_or_else(|| toks.last().map(|t| t.0).unwrap_or(1));

    if let Some((_, Tok::Id(kw))) = toks.get(pos) {
        if kw.eq_ignore_ascii_case("strict") {
            pos += 1;
        }
    }
    match toks.get(pos) {
        Some((_, Tok::Id(kw))) if kw.eq_ignore_ascii_case("graph") => pos += 1,
        Some((l, Tok::Id(kw))) if kw.eq_ignore_ascii_case("digraph") => {
            return Err(err(*l, "directed graphs are not supported"))
        }
        _ => return Err(err(line_at(pos), "expected `graph`")),
    }
    if let Some((_, Tok::Id(_))) = toks.get(pos) {
        pos += 1;
    }
    match toks.get(pos) {
        Some((_, Tok::LBrace)) => pos += 1,
        _ => return Err(err(line_at(pos), "expected `{`")),
    }

    let mut b = Builder::default();
    loop {
        match toks.get(pos) {
            None => return Err(err(line_at(pos), "missing `}`")),
            Some((_, Tok::RBrace)) => {
                pos += 1;
                break;
            }
            Some((_, Tok::Semi)) => pos += 1,
            Some((l, Tok::LBracket)) => return Err(err(*l, "unexpected attribute list")),
            Some((l, Tok::Id(first))) => {
                let line = *l;
                pos += 1;
                // graph/node/edge default attribute statements
                if matches!(first.as_str(), "graph" | "node" | "edge")
                    && matches!(toks.get(pos), Some((_, Tok::LBracket)))
                {
                    pos = skip_attributes(&toks, pos)?;
                    continue;
                }
                // `id = id` graph attribute
                if matches!(toks.get(pos), Some((_, Tok::Eq))) {
                    pos += 2;
                    continue;
                }
                let mut chain = vec![b.intern_checked(first)?];
                loop {
                    match toks.get(pos) {
                        Some((_, Tok::EdgeOp)) => {
                            pos += 1;
                            match toks.get(pos) {
                                Some((_, Tok::Id(next))) => {
                                    chain.push(b.intern_checked(next)?);
                                    pos += 1;
                                }
                                _ => return Err(err(line_at(pos), "expected vertex after `--`")),
                            }
                        }
                        Some((l, Tok::DirectedEdgeOp)) => return Err(err(*l, "directed edges are not supported")),
                        _ => break,
                    }
                }
                if matches!(toks.get(pos), Some((_, Tok::LBracket))) {
                    pos = skip_attributes(&toks, pos)?;
                }
                for pair in chain.windows(2) {
                    b.edge(pair[0], pair[1]).map_err(|e| match e {
                        Error::SelfLoop(_) => e,
                        other => Error::Parse { line, message: other.to_string() },
                    })?;
                }
            }
            Some((l, t)) => return Err(err(*l, &format!("unexpected token {t:?}"))),
        }
    }
    if pos != toks.len() {
        return Err(err(line_at(pos), "trailing input after `}`"));
    }
    b.finish()
}

impl Builder {
    fn intern_checked(&mut self, name: &str) -> Result<usize> {
        validate_name(name)?;
        Ok(self.intern(name))
    }
}

fn skip_attributes(toks: &[(usize, Tok)], mut pos: usize) -> Result<usize> {
    debug_assert!(matches!(toks.get(pos), Some((_, Tok::LBracket))));
    while pos < toks.len() {
        if toks[pos].1 == Tok::RBracket {
            return Ok(pos + 1);
        }
        pos += 1;
    }
    Err(Error::Parse { line: toks.last().map(|t| t.0).unwrap_or(1), message: "unterminated `[`".into() })
}
