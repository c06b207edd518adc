//! Text definitions of monoids, M-sets and schemes.
//!
//! ```text
//! monoid E 3 0
//! # element-names 1 e 0
//! 0 1 2
//! 1 1 2
//! 2 2 2
//!
//! mset R over E 3
//! 0 1 2
//! ...
//!
//! scheme X2
//! chart 0 E
//! chart 1 E
//! glue 0 1 e e
//! 0 1
//! ```
//!
//! Syntax errors carry a 1-based line and column. Semantic problems (a
//! table that is not associative, a gluing that is not an isomorphism) are
//! reported separately so the caller can treat them as failed checks.

use std::fmt::Write as _;

use thiserror::Error;

use crate::monoid::FiniteCommMonoid;
use crate::mset::MSet;
use crate::scheme::GluingData;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: expected {expected}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Token<'a> {
    col: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, c)) in line.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((scol, sbyte)) = start.take() {
                out.push(Token { col: scol + 1, text: &line[sbyte..byte] });
            }
        } else if start.is_none() {
            start = Some((col, byte));
        }
    }
    if let Some((scol, sbyte)) = start {
        out.push(Token { col: scol + 1, text: &line[sbyte..] });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMonoid {
    pub line: usize,
    pub name: String,
    pub identity: usize,
    pub rows: Vec<Vec<usize>>,
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMSet {
    pub line: usize,
    pub name: String,
    pub over: String,
    pub rows: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGlue {
    pub line: usize,
    pub i: usize,
    pub j: usize,
    pub f_i: String,
    pub f_j: String,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawScheme {
    pub line: usize,
    pub name: String,
    pub charts: Vec<String>,
    pub glues: Vec<RawGlue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawDefinition {
    Monoid(RawMonoid),
    MSet(RawMSet),
    Scheme(RawScheme),
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<Token<'a>>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, Vec<Token<'a>>)> =
            text.lines().enumerate().map(|(i, l)| (i + 1, tokenize(l))).filter(|(_, toks)| !toks.is_empty()).collect();
        let last_line = text.lines().count().max(1);
        Lines { lines, pos: 0, last_line }
    }

    fn peek(&self) -> Option<&(usize, Vec<Token<'a>>)> {
        self.lines.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Vec<Token<'a>>)> {
        let l = self.lines.get(self.pos).cloned();
        self.pos += 1;
        l
    }

    fn eof(&self, expected: &str) -> ParseError {
        ParseError { line: self.last_line + 1, col: 1, expected: expected.to_string() }
    }
}

fn is_comment(toks: &[Token<'_>]) -> bool {
    toks[0].text.starts_with('#')
}

fn element_names(toks: &[Token<'_>]) -> Option<Vec<String>> {
    let head = toks[0].text;
    let rest: Vec<&str> = toks[1..].iter().map(|t| t.text).collect();
    let (first, rest) = if head == "#" { (*rest.first()?, &rest[1..]) } else { (head.strip_prefix('#')?, &rest[..]) };
    let first = first.trim_end_matches(':');
    (first == "element-names").then(|| rest.iter().map(|s| s.to_string()).collect())
}

fn err(line: usize, col: usize, expected: impl Into<String>) -> ParseError {
    ParseError { line, col, expected: expected.into() }
}

fn number(line: usize, tok: &Token<'_>, what: &str) -> Result<usize, ParseError> {
    if tok.text.bytes().all(|b| b.is_ascii_digit()) {
        tok.text.parse().map_err(|_| err(line, tok.col, what))
    } else {
        Err(err(line, tok.col, what))
    }
}

/// The column just past the last token.
fn after(toks: &[Token<'_>]) -> usize {
    toks.last().map_or(1, |t| t.col + t.text.chars().count())
}

fn take<'t, 'a>(line: usize, toks: &'t [Token<'a>], i: usize, what: &str) -> Result<&'t Token<'a>, ParseError> {
    toks.get(i).ok_or_else(|| err(line, after(toks), what))
}

fn no_more(line: usize, toks: &[Token<'_>], n: usize) -> Result<(), ParseError> {
    match toks.get(n) {
        Some(t) => Err(err(line, t.col, "end of line")),
        None => Ok(()),
    }
}

/// Rows of indices; `width` fixes the row length when known.
fn rows(lines: &mut Lines<'_>, count: usize, width: Option<usize>, names: &mut Option<Vec<String>>) -> Result<Vec<Vec<usize>>, ParseError> {
    let mut out: Vec<Vec<usize>> = Vec::with_capacity(count);
    while out.len() < count {
        let what = match width.or_else(|| out.first().map(Vec::len)) {
            Some(w) => format!("row of {w} indices"),
            None => "row of indices".to_string(),
        };
        let (line, toks) = lines.next().ok_or_else(|| lines.eof(&what))?;
        if is_comment(&toks) {
            if let Some(n) = element_names(&toks) {
                *names = Some(n);
            }
            continue;
        }
        let row = toks.iter().map(|t| number(line, t, "decimal index")).collect::<Result<Vec<_>, _>>()?;
        if let Some(w) = width.or_else(|| out.first().map(Vec::len)) {
            if row.len() != w {
                let col = toks.get(w).map_or_else(|| after(&toks), |t| t.col);
                return Err(err(line, col, what));
            }
        }
        out.push(row);
    }
    Ok(out)
}

const HEADER: &str = "`monoid`, `mset` or `scheme`";

/// Splits `text` into definitions without validating them.
pub fn parse_raw(text: &str) -> Result<Vec<RawDefinition>, ParseError> {
    let mut lines = Lines::new(text);
    let mut out: Vec<RawDefinition> = Vec::new();
    while let Some((line, toks)) = lines.next() {
        if is_comment(&toks) {
            if let Some(names) = element_names(&toks) {
                match out.last_mut() {
                    Some(RawDefinition::Monoid(m)) if m.names.is_none() => m.names = Some(names),
                    _ => return Err(err(line, toks[0].col, HEADER)),
                }
            }
            continue;
        }
        match toks[0].text {
            "monoid" => {
                let name = take(line, &toks, 1, "monoid name")?.text.to_string();
                let n = number(line, take(line, &toks, 2, "element count")?, "element count")?;
                let identity = number(line, take(line, &toks, 3, "identity index")?, "identity index")?;
                no_more(line, &toks, 4)?;
                let mut names = None;
                let rows = rows(&mut lines, n, Some(n), &mut names)?;
                out.push(RawDefinition::Monoid(RawMonoid { line, name, identity, rows, names }));
            }
            "mset" => {
                let name = take(line, &toks, 1, "M-set name")?.text.to_string();
                let kw = take(line, &toks, 2, "`over`")?;
                if kw.text != "over" {
                    return Err(err(line, kw.col, "`over`"));
                }
                let over = take(line, &toks, 3, "monoid name")?.text.to_string();
                let k = number(line, take(line, &toks, 4, "carrier size")?, "carrier size")?;
                no_more(line, &toks, 5)?;
                let rows = rows(&mut lines, k, None, &mut None)?;
                out.push(RawDefinition::MSet(RawMSet { line, name, over, rows }));
            }
            "scheme" => {
                let name = take(line, &toks, 1, "scheme name")?.text.to_string();
                no_more(line, &toks, 2)?;
                let mut scheme = RawScheme { line, name, charts: Vec::new(), glues: Vec::new() };
                while let Some((l, t)) = lines.peek().cloned() {
                    if is_comment(&t) {
                        lines.next();
                        continue;
                    }
                    match t[0].text {
                        "chart" => {
                            lines.next();
                            let i = number(l, take(l, &t, 1, "chart index")?, "chart index")?;
                            if i != scheme.charts.len() {
                                return Err(err(l, t[1].col, format!("chart index {}", scheme.charts.len())));
                            }
                            scheme.charts.push(take(l, &t, 2, "monoid name")?.text.to_string());
                            no_more(l, &t, 3)?;
                        }
                        "glue" => {
                            lines.next();
                            let i = number(l, take(l, &t, 1, "chart index")?, "chart index")?;
                            let j = number(l, take(l, &t, 2, "chart index")?, "chart index")?;
                            let f_i = take(l, &t, 3, "overlap element")?.text.to_string();
                            let f_j = take(l, &t, 4, "overlap element")?.text.to_string();
                            no_more(l, &t, 5)?;
                            let map = rows(&mut lines, 1, None, &mut None)?.remove(0);
                            scheme.glues.push(RawGlue { line: l, i, j, f_i, f_j, map });
                        }
                        _ => break,
                    }
                }
                if scheme.charts.is_empty() {
                    let (l, t) = lines.peek().map_or((lines.last_line + 1, 1), |(l, t)| (*l, t[0].col));
                    return Err(err(l, t, "`chart`"));
                }
                out.push(RawDefinition::Scheme(scheme));
            }
            _ => return Err(err(line, toks[0].col, HEADER)),
        }
    }
    Ok(out)
}

/// Validated definitions plus the ones that failed validation.
#[derive(Debug, Clone, Default)]
pub struct Inputs {
    pub monoids: Vec<FiniteCommMonoid>,
    pub msets: Vec<MSet>,
    pub schemes: Vec<GluingData>,
    /// `(kind/name, problem)`.
    pub invalid: Vec<(String, String)>,
}

/// Element names take precedence over indices.
fn element_token(m: &FiniteCommMonoid, tok: &str) -> Option<usize> {
    m.element_names().iter().position(|n| n == tok).or_else(|| tok.parse().ok().filter(|&i| i < m.size()))
}

/// Parses and validates `text`. Names resolve against monoids defined
/// earlier in the text first, then against `known`.
pub fn load(text: &str, known: &[FiniteCommMonoid]) -> Result<Inputs, ParseError> {
    let mut inputs = Inputs::default();
    for def in parse_raw(text)? {
        match def {
            RawDefinition::Monoid(r) => {
                let built = FiniteCommMonoid::new(r.name.clone(), &r.rows, r.identity).and_then(|m| match r.names {
                    Some(names) => m.with_names(names),
                    None => Ok(m),
                });
                match built {
                    Ok(m) => inputs.monoids.push(m),
                    Err(e) => inputs.invalid.push((format!("monoid/{}", r.name), e.to_string())),
                }
            }
            RawDefinition::MSet(r) => {
                let m = find_monoid(&inputs.monoids, known, &r.over);
                match m {
                    None => inputs.invalid.push((format!("mset/{}", r.name), format!("unknown monoid {}", r.over))),
                    Some(m) => match MSet::new(r.name.clone(), &m, &r.rows) {
                        Ok(a) => inputs.msets.push(a),
                        Err(e) => inputs.invalid.push((format!("mset/{}", r.name), e.to_string())),
                    },
                }
            }
            RawDefinition::Scheme(r) => match resolve_scheme(&r, &inputs.monoids, known) {
                Ok(g) => inputs.schemes.push(g),
                Err(e) => inputs.invalid.push((format!("scheme/{}", r.name), e)),
            },
        }
    }
    Ok(inputs)
}

fn find_monoid(local: &[FiniteCommMonoid], known: &[FiniteCommMonoid], name: &str) -> Option<FiniteCommMonoid> {
    local.iter().rev().chain(known).find(|m| m.name() == name).cloned()
}

fn resolve_scheme(r: &RawScheme, local: &[FiniteCommMonoid], known: &[FiniteCommMonoid]) -> Result<GluingData, String> {
    let charts = r
        .charts
        .iter()
        .map(|n| find_monoid(local, known, n).ok_or_else(|| format!("unknown monoid {n}")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut g = GluingData::new(r.name.clone(), charts);
    for glue in &r.glues {
        let chart = |i: usize| g.charts.get(i).ok_or_else(|| format!("line {}: no chart {i}", glue.line));
        let f_i = element_token(chart(glue.i)?, &glue.f_i)
            .ok_or_else(|| format!("line {}: {} is not an element of chart {}", glue.line, glue.f_i, glue.i))?;
        let f_j = element_token(chart(glue.j)?, &glue.f_j)
            .ok_or_else(|| format!("line {}: {} is not an element of chart {}", glue.line, glue.f_j, glue.j))?;
        g = g.glue(glue.i, glue.j, f_i, f_j, glue.map.clone());
    }
    Ok(g)
}

pub fn write_monoid(m: &FiniteCommMonoid) -> String {
    let mut out = format!("monoid {} {} {}\n# element-names {}\n", m.name(), m.size(), m.identity(), m.element_names().join(" "));
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

pub fn write_mset(a: &MSet) -> String {
    let mut out = format!("mset {} over {} {}\n", a.name(), a.monoid().name(), a.size());
    for row in a.rows() {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

pub fn write_scheme(g: &GluingData) -> String {
    let mut out = format!("scheme {}\n", g.name);
    for (i, m) in g.charts.iter().enumerate() {
        let _ = writeln!(out, "chart {i} {}", m.name());
    }
    for glue in &g.glues {
        let cells: Vec<String> = glue.phi.iter().map(usize::to_string).collect();
        let (fi, fj) = (g.charts[glue.i].element_name(glue.f_i), g.charts[glue.j].element_name(glue.f_j));
        let _ = writeln!(out, "glue {} {} {fi} {fj}\n{}", glue.i, glue.j, cells.join(" "));
    }
    out
}
