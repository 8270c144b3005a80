//! Text format for shift presentations.
//!
//! ```text
//! # golden mean
//! kind sft
//! alphabet 0 1
//! length 2
//! forbidden 11
//! ```
//!
//! Other kinds use `row` lines (`markov`), `vertices` and `edge src dst label`
//! lines (`labeled_graph`), or `profile log3` / `profile table v0 v1 .. slope s`
//! (`bounded_density`). Blank lines and `#` comments are ignored.

use std::fmt;
use std::str::FromStr;

use super::{AdjacencyMatrix, Alphabet, BdProfile, Edge, LabeledGraph, ShiftSpec, WordSftSpec};
use crate::error::{Error, Result};

/// A whitespace token with its 1-based position.
#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    pub fn number<T: FromStr>(&self) -> Result<T> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected a number, found {:?}", self.text)))
    }
}

/// Splits text into non-empty lines of tokens, dropping comments.
pub(crate) fn tokenize(text: &str) -> Vec<Vec<Token>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (j, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    toks.push(Token {
                        text: line[s..j].to_string(),
                        line: i + 1,
                        column: line[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

pub(crate) fn end_error(text: &str, message: &str) -> Error {
    Error::Parse {
        line: text.lines().count().max(1),
        column: 1,
        message: message.to_string(),
    }
}

fn parse_alphabet(toks: &[Token]) -> Result<Alphabet> {
    if toks.len() < 2 {
        return Err(toks[0].error("alphabet needs at least one symbol"));
    }
    Alphabet::new(toks[1..].iter().map(|t| t.text.clone())).map_err(|e| toks[1].error(e.to_string()))
}

/// Parses the body of a shift spec from already tokenized lines.
pub(crate) fn parse_lines(lines: &[Vec<Token>], text: &str) -> Result<ShiftSpec> {
    let Some(first) = lines.first() else {
        return Err(end_error(text, "empty shift spec"));
    };
    if first[0].text != "kind" || first.len() != 2 {
        return Err(first[0].error("expected `kind <sft|markov|labeled_graph|bounded_density>`"));
    }
    let kind = &first[1];
    let mut alphabet: Option<Alphabet> = None;
    let mut forbidden: Vec<&Token> = Vec::new();
    let mut length: Option<usize> = None;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut vertices: Option<Vec<String>> = None;
    let mut edges: Vec<&[Token]> = Vec::new();
    let mut profile: Option<&[Token]> = None;
    for l in &lines[1..] {
        let head = &l[0];
        match head.text.as_str() {
            "alphabet" if alphabet.is_none() => alphabet = Some(parse_alphabet(l)?),
            "forbidden" => forbidden.extend(&l[1..]),
            "length" if l.len() == 2 => length = Some(l[1].number()?),
            "row" => {
                let mut r = Vec::new();
                for t in &l[1..] {
                    match t.text.as_str() {
                        "0" => r.push(0),
                        "1" => r.push(1),
                        _ => return Err(t.error("matrix entries must be 0 or 1")),
                    }
                }
                rows.push(r);
            }
            "vertices" if vertices.is_none() => {
                vertices = Some(l[1..].iter().map(|t| t.text.clone()).collect())
            }
            "edge" if l.len() == 4 => edges.push(l),
            "profile" if profile.is_none() => profile = Some(l),
            _ => return Err(head.error(format!("unexpected directive {:?}", head.text))),
        }
    }
    let need_alphabet = |alphabet: Option<Alphabet>| {
        alphabet.ok_or_else(|| first[0].error("missing `alphabet` line"))
    };
    match kind.text.as_str() {
        "sft" => {
            let alphabet = need_alphabet(alphabet)?;
            let mut words = Vec::new();
            for t in &forbidden {
                words.push(alphabet.parse_word(&t.text).map_err(|e| t.error(e.to_string()))?);
            }
            let spec = match length {
                Some(m) => WordSftSpec::with_length(alphabet, words, m),
                None => WordSftSpec::new(alphabet, words),
            }
            .map_err(|e| kind.error(e.to_string()))?;
            Ok(ShiftSpec::Sft(spec))
        }
        "markov" => {
            let alphabet = need_alphabet(alphabet)?;
            let matrix = AdjacencyMatrix::new(rows).map_err(|e| kind.error(e.to_string()))?;
            ShiftSpec::markov(alphabet, matrix).map_err(|e| kind.error(e.to_string()))
        }
        "labeled_graph" => {
            let alphabet = need_alphabet(alphabet)?;
            let vertices = vertices.ok_or_else(|| first[0].error("missing `vertices` line"))?;
            let mut es = Vec::new();
            for l in edges {
                let find = |t: &Token| {
                    vertices
                        .iter()
                        .position(|v| *v == t.text)
                        .ok_or_else(|| t.error(format!("unknown vertex {:?}", t.text)))
                };
                let label = alphabet
                    .index(&l[3].text)
                    .ok_or_else(|| l[3].error(format!("unknown symbol {:?}", l[3].text)))?;
                es.push(Edge {
                    src: find(&l[1])?,
                    dst: find(&l[2])?,
                    label,
                });
            }
            LabeledGraph::new(alphabet, vertices, es)
                .map(ShiftSpec::Graph)
                .map_err(|e| kind.error(e.to_string()))
        }
        "bounded_density" => {
            if let Some(a) = alphabet {
                if a != Alphabet::binary() {
                    return Err(first[0].error("bounded density shifts use the alphabet 0 1"));
                }
            }
            let p = profile.ok_or_else(|| first[0].error("missing `profile` line"))?;
            match p.get(1).map(|t| t.text.as_str()) {
                Some("log3") if p.len() == 2 => Ok(ShiftSpec::BoundedDensity(BdProfile::Log3)),
                Some("table") => {
                    let n = p.len();
                    if n < 5 || p[n - 2].text != "slope" {
                        return Err(p[0].error("expected `profile table v0 .. vn slope s`"));
                    }
                    let values = p[2..n - 2].iter().map(Token::number).collect::<Result<Vec<u64>>>()?;
                    let slope = p[n - 1].number()?;
                    BdProfile::table(values, slope)
                        .map(ShiftSpec::BoundedDensity)
                        .map_err(|e| p[2].error(e.to_string()))
                }
                _ => Err(p[0].error("expected `profile log3` or `profile table ...`")),
            }
        }
        other => Err(kind.error(format!("unknown kind {other:?}"))),
    }
}

impl ShiftSpec {
    pub fn parse(text: &str) -> Result<Self> {
        parse_lines(&tokenize(text), text)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl FromStr for ShiftSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ShiftSpec::parse(s)
    }
}

impl fmt::Display for ShiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind {}", self.kind())?;
        writeln!(f, "alphabet {}", self.alphabet().names().join(" "))?;
        match self {
            ShiftSpec::Sft(s) => {
                writeln!(f, "length {}", s.m)?;
                let words: Vec<String> = s.forbidden.iter().map(|w| s.alphabet.format_word(w)).collect();
                if words.is_empty() {
                    writeln!(f, "forbidden")?;
                } else {
                    writeln!(f, "forbidden {}", words.join(" "))?;
                }
            }
            ShiftSpec::Markov { matrix, .. } => {
                for r in matrix.rows() {
                    let cells: Vec<String> = r.iter().map(u8::to_string).collect();
                    writeln!(f, "row {}", cells.join(" "))?;
                }
            }
            ShiftSpec::Graph(g) => {
                writeln!(f, "vertices {}", g.vertices.join(" "))?;
                for e in &g.edges {
                    writeln!(
                        f,
                        "edge {} {} {}",
                        g.vertices[e.src],
                        g.vertices[e.dst],
                        g.alphabet.name(e.label)
                    )?;
                }
            }
            ShiftSpec::BoundedDensity(p) => match p {
                BdProfile::Log3 => writeln!(f, "profile log3")?,
                BdProfile::Table { values, slope } => {
                    let vs: Vec<String> = values.iter().map(u64::to_string).collect();
                    writeln!(f, "profile table {} slope {}", vs.join(" "), slope)?;
                }
            },
        }
        Ok(())
    }
}
