//! Plain-text and JSON formats.
//!
//! ```text
//! ecg <n>            dg <n>         pdm <k>              cert <n>
//! e <u> <v> <c>      a <u> <v>      d <i> <j> <p/q>      w <v> <p/q>
//!                                   dpm <i> <j> <p/q>
//! ```
//!
//! Blank lines and `#` comments are ignored. The graph JSON mirrors are
//! `{"n": .., "edges": [[u, v, c], ..]}` and `{"n": .., "arcs": [[u, v], ..]}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::convert::PairDensityMatrix;
use crate::error::{Error, Result};
use crate::graph::{Colour, Digraph, EdgeColouredGraph};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Coloured(EdgeColouredGraph),
    Digraph(Digraph),
    Densities(PairDensityMatrix),
    /// A vertex weighting such as a dual certificate.
    Weights(Vec<Rational>),
}

impl Document {
    pub fn to_text(&self) -> String {
        match self {
            Document::Coloured(g) => write_coloured(g),
            Document::Digraph(d) => write_digraph(d),
            Document::Densities(m) => write_densities(m),
            Document::Weights(w) => write_weights(w),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ColouredJson {
    n: usize,
    edges: Vec<(usize, usize, Colour)>,
}

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

/// Significant lines with their 1-based numbers, comments stripped.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} {token:?}")))
}

fn fraction(line: usize, token: &str) -> Result<Rational> {
    rational::parse(token).ok_or_else(|| Error::parse(line, format!("invalid rational {token:?}")))
}

fn expect_arity(line: usize, tokens: &[&str], arity: usize) -> Result<()> {
    if tokens.len() != arity {
        return Err(Error::parse(
            line,
            format!("{:?} expects {} fields, got {}", tokens[0], arity - 1, tokens.len() - 1),
        ));
    }
    Ok(())
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| Error::parse(line, e.to_string())
}

fn header<'a>(
    text: &'a str,
    keyword: &str,
) -> Result<(usize, impl Iterator<Item = (usize, Vec<&'a str>)>)> {
    let mut it = lines(text);
    let (line, tokens) = it
        .next()
        .ok_or_else(|| Error::parse(1, format!("empty input, expected `{keyword} <n>` header")))?;
    if tokens[0] != keyword {
        return Err(Error::parse(line, format!("expected `{keyword} <n>` header, found {:?}", tokens[0])));
    }
    expect_arity(line, &tokens, 2)?;
    let n = number(line, tokens[1], "size")?;
    Ok((n, it))
}

fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

pub fn parse_coloured(text: &str) -> Result<EdgeColouredGraph> {
    if looks_like_json(text) {
        let j: ColouredJson = serde_json::from_str(text)?;
        return EdgeColouredGraph::from_edges(j.n, j.edges);
    }
    let (n, body) = header(text, "ecg")?;
    let mut g = EdgeColouredGraph::new(n);
    for (line, t) in body {
        if t[0] != "e" {
            return Err(Error::parse(line, format!("unknown record {:?}", t[0])));
        }
        expect_arity(line, &t, 4)?;
        let u = number(line, t[1], "vertex")?;
        let v = number(line, t[2], "vertex")?;
        let c = number(line, t[3], "colour")?;
        g.add_edge(u, v, c).map_err(at_line(line))?;
    }
    Ok(g)
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    if looks_like_json(text) {
        let j: DigraphJson = serde_json::from_str(text)?;
        return Digraph::from_arcs(j.n, j.arcs);
    }
    let (n, body) = header(text, "dg")?;
    let mut d = Digraph::new(n);
    for (line, t) in body {
        if t[0] != "a" {
            return Err(Error::parse(line, format!("unknown record {:?}", t[0])));
        }
        expect_arity(line, &t, 3)?;
        let u = number(line, t[1], "vertex")?;
        let v = number(line, t[2], "vertex")?;
        d.add_arc(u, v).map_err(at_line(line))?;
    }
    Ok(d)
}

pub fn parse_densities(text: &str) -> Result<PairDensityMatrix> {
    let (k, body) = header(text, "pdm")?;
    let mut m = PairDensityMatrix::new(k);
    let mut seen = std::collections::HashSet::new();
    let mut last_line = 1;
    for (line, t) in body {
        last_line = line;
        expect_arity(line, &t, 4)?;
        let i: usize = number(line, t[1], "index")?;
        let j: usize = number(line, t[2], "index")?;
        let value = fraction(line, t[3])?;
        let key = match t[0] {
            "d" => (0, i, j),
            "dpm" => (1, i.min(j), i.max(j)),
            other => return Err(Error::parse(line, format!("unknown record {other:?}"))),
        };
        if !seen.insert(key) {
            return Err(Error::parse(line, format!("pair ({i},{j}) given twice")));
        }
        match key.0 {
            0 => m.set_density(i, j, value),
            _ => m.set_double_density(i, j, value),
        }
        .map_err(at_line(line))?;
    }
    m.validate().map_err(at_line(last_line))?;
    Ok(m)
}

pub fn parse_weights(text: &str) -> Result<Vec<Rational>> {
    let (n, body) = header(text, "cert")?;
    let mut w: Vec<Option<Rational>> = vec![None; n];
    for (line, t) in body {
        if t[0] != "w" {
            return Err(Error::parse(line, format!("unknown record {:?}", t[0])));
        }
        expect_arity(line, &t, 3)?;
        let v: usize = number(line, t[1], "vertex")?;
        if v >= n {
            return Err(Error::parse(line, Error::VertexOutOfRange { vertex: v, n }.to_string()));
        }
        if w[v].is_some() {
            return Err(Error::parse(line, format!("vertex {v} weighted twice")));
        }
        w[v] = Some(fraction(line, t[2])?);
    }
    // a missing vertex is only noticed at the end of the input
    let end = text.lines().count().max(1);
    w.into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| Error::parse(end, format!("no weight for vertex {v}"))))
        .collect()
}

/// Detects the format from the header (or JSON shape) and parses.
pub fn parse_document(text: &str) -> Result<Document> {
    if looks_like_json(text) {
        let value: serde_json::Value = serde_json::from_str(text)?;
        return if value.get("edges").is_some() {
            parse_coloured(text).map(Document::Coloured)
        } else if value.get("arcs").is_some() {
            parse_digraph(text).map(Document::Digraph)
        } else {
            Err(Error::parse(1, "JSON object has neither \"edges\" nor \"arcs\""))
        };
    }
    let (line, tokens) = lines(text)
        .next()
        .ok_or_else(|| Error::parse(1, "empty input"))?;
    match tokens[0] {
        "ecg" => parse_coloured(text).map(Document::Coloured),
        "dg" => parse_digraph(text).map(Document::Digraph),
        "pdm" => parse_densities(text).map(Document::Densities),
        "cert" => parse_weights(text).map(Document::Weights),
        other => Err(Error::parse(line, format!("unknown header {other:?}"))),
    }
}

pub fn read_document(path: impl AsRef<Path>) -> Result<Document> {
    parse_document(&std::fs::read_to_string(path)?)
}

pub fn read_coloured(path: impl AsRef<Path>) -> Result<EdgeColouredGraph> {
    parse_coloured(&std::fs::read_to_string(path)?)
}

pub fn read_digraph(path: impl AsRef<Path>) -> Result<Digraph> {
    parse_digraph(&std::fs::read_to_string(path)?)
}

pub fn write_coloured(g: &EdgeColouredGraph) -> String {
    let mut out = format!("ecg {}\n", g.n());
    for (u, v, c) in g.edges() {
        let _ = writeln!(out, "e {u} {v} {c}");
    }
    out
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut out = format!("dg {}\n", d.n());
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "a {u} {v}");
    }
    out
}

pub fn write_densities(m: &PairDensityMatrix) -> String {
    use num_traits::Zero;
    let mut out = format!("pdm {}\n", m.k());
    for i in 0..m.k() {
        for j in 0..m.k() {
            if i != j && !m.density(i, j).is_zero() {
                let _ = writeln!(out, "d {i} {j} {}", rational::format(m.density(i, j)));
            }
        }
    }
    for i in 0..m.k() {
        for j in i + 1..m.k() {
            if !m.double_density(i, j).is_zero() {
                let _ = writeln!(out, "dpm {i} {j} {}", rational::format(m.double_density(i, j)));
            }
        }
    }
    out
}

pub fn write_weights(w: &[Rational]) -> String {
    let mut out = format!("cert {}\n", w.len());
    for (v, x) in w.iter().enumerate() {
        let _ = writeln!(out, "w {v} {}", rational::format(x));
    }
    out
}

pub fn coloured_to_json(g: &EdgeColouredGraph) -> serde_json::Value {
    serde_json::to_value(ColouredJson {
        n: g.n(),
        edges: g.edges().collect(),
    })
    .expect("plain data")
}

pub fn digraph_to_json(d: &Digraph) -> serde_json::Value {
    serde_json::to_value(DigraphJson {
        n: d.n(),
        arcs: d.arcs().collect(),
    })
    .expect("plain data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_rainbow_complete;
    use crate::rational::ratio;

    #[test]
    fn coloured_text_round_trip() {
        let g = build_rainbow_complete(4);
        let text = write_coloured(&g);
        assert!(text.starts_with("ecg 4\ne 0 1 0\n"));
        assert_eq!(parse_coloured(&text).unwrap(), g);
        let json = coloured_to_json(&g).to_string();
        assert_eq!(parse_coloured(&json).unwrap(), g);
    }

    #[test]
    fn digraph_text_round_trip() {
        let d = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        let text = write_digraph(&d);
        assert_eq!(parse_document(&text).unwrap(), Document::Digraph(d.clone()));
        let json = digraph_to_json(&d).to_string();
        assert_eq!(parse_document(&json).unwrap(), Document::Digraph(d));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a path\n\necg 3 # header\ne 0 1 5\n\ne 1 2 7 # tail\n";
        let g = parse_coloured(text).unwrap();
        assert_eq!(g.colour(1, 2), Some(7));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_coloured("ecg 3\ne 0 1 1\ne 1 0 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_coloured("ecg 3\ne 0 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_digraph("dg 3\n\na 0 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_digraph("dg 3\na 0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_document("xyz 3\n").is_err());
        assert!(parse_document("").is_err());
        assert!(parse_coloured(r#"{"n":2,"edges":[[0,0,1]]}"#).is_err());
    }

    #[test]
    fn densities_round_trip() {
        let text = "pdm 3\nd 0 1 1/2\nd 1 0 3/4\ndpm 0 1 1/4\nd 2 1 1\n";
        let m = parse_densities(text).unwrap();
        assert_eq!(m.density(0, 1), &ratio(1, 2));
        assert_eq!(m.double_density(1, 0), &ratio(1, 4));
        assert_eq!(parse_densities(&write_densities(&m)).unwrap(), m);
        assert!(parse_densities("pdm 2\nd 0 1 1/2\nd 0 1 1/3\n").is_err());
        assert!(parse_densities("pdm 2\nd 0 1 1/2\ndpm 0 1 1/2\n").is_err());
    }

    #[test]
    fn weights_round_trip() {
        let w = vec![ratio(1, 1), ratio(0, 1), ratio(2, 3)];
        let text = write_weights(&w);
        assert_eq!(text, "cert 3\nw 0 1/1\nw 1 0/1\nw 2 2/3\n");
        assert_eq!(parse_document(&text).unwrap(), Document::Weights(w));
        assert!(parse_weights("cert 2\nw 0 1\n").is_err());
    }
}
