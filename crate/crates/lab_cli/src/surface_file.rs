//! JSON surface files: polygons with rational vertex strings, gluings as
//! `[[poly, edge], [poly, edge], sign]`, and optional markings.
//!
//! Errors carry the line of the offending element in the source text.

use flat_kernel::rational::{format_q, parse_q};
use flat_kernel::{Corner, EdgeRef, FlatSurface, Gluing, Marking, Polygon, Sign, SurfaceError, Vec2};
use serde::Deserialize;
use serde_json::value::RawValue;
use std::fmt::Write;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FileError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("line {line}: {source}")]
    Validation {
        line: usize,
        #[source]
        source: SurfaceError,
    },
}

impl FileError {
    pub fn line(&self) -> usize {
        match self {
            FileError::Parse { line, .. } | FileError::Validation { line, .. } => *line,
        }
    }
}

/// Contents of a surface file, before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurfaceFile {
    pub polygons: Vec<Polygon>,
    pub gluings: Vec<Gluing>,
    pub marking: Marking,
}

/// Line of each element in the text a file was parsed from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct LineMap {
    polygons: Vec<usize>,
    gluings: Vec<usize>,
    markings: usize,
}

/// A parsed file together with where its elements came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedFile {
    pub file: SurfaceFile,
    lines: LineMap,
}

#[derive(Deserialize)]
struct RawFile<'a> {
    schema: &'a RawValue,
    #[serde(borrow)]
    polygons: Vec<&'a RawValue>,
    #[serde(borrow)]
    gluings: Vec<&'a RawValue>,
    #[serde(borrow, default)]
    markings: Option<&'a RawValue>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMarkings {
    #[serde(default)]
    edges: Vec<([usize; 2], String)>,
    #[serde(default)]
    vertices: Vec<([usize; 2], String)>,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

fn offset_in(text: &str, part: &str) -> usize {
    part.as_ptr() as usize - text.as_ptr() as usize
}

/// Parses `part`, a slice of `text`, and reports errors at their place in `text`.
fn parse_part<'a, T: Deserialize<'a>>(text: &str, part: &'a str) -> Result<T, FileError> {
    serde_json::from_str(part).map_err(|e| {
        let (l0, c0) = position(text, offset_in(text, part));
        let column = if e.line() <= 1 { c0 + e.column().saturating_sub(1) } else { e.column() };
        FileError::Parse { line: l0 + e.line().saturating_sub(1), column, message: strip_position(&e) }
    })
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(p) => s[..p].to_string(),
        None => s,
    }
}

fn error_at(text: &str, part: &str, message: impl Into<String>) -> FileError {
    let (line, column) = position(text, offset_in(text, part));
    FileError::Parse { line, column, message: message.into() }
}

pub fn parse_surface_file(text: &str) -> Result<ParsedFile, FileError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| FileError::Parse {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e),
    })?;
    let schema: u32 = parse_part(text, raw.schema.get())?;
    if schema != SCHEMA_VERSION {
        return Err(error_at(text, raw.schema.get(), format!("unsupported schema version {schema}, expected {SCHEMA_VERSION}")));
    }
    let line_of = |r: &RawValue| position(text, offset_in(text, r.get())).0;
    let mut file = SurfaceFile::default();
    let mut lines = LineMap::default();
    for p in &raw.polygons {
        let vertices: Vec<&RawValue> = parse_part(text, p.get())?;
        let mut vs = Vec::with_capacity(vertices.len());
        for v in vertices {
            let [x, y]: [String; 2] = parse_part(text, v.get())?;
            let coord = |s: &str| parse_q(s).map_err(|e| error_at(text, v.get(), e.to_string()));
            vs.push(Vec2::new(coord(&x)?, coord(&y)?));
        }
        file.polygons.push(Polygon::new(vs));
        lines.polygons.push(line_of(p));
    }
    for g in &raw.gluings {
        let (a, b, sign): ([usize; 2], [usize; 2], i64) = parse_part(text, g.get())?;
        let sign = Sign::from_i64(sign).ok_or_else(|| error_at(text, g.get(), format!("sign must be 1 or -1, got {sign}")))?;
        file.gluings.push(Gluing::new(EdgeRef::new(a[0], a[1]), EdgeRef::new(b[0], b[1]), sign));
        lines.gluings.push(line_of(g));
    }
    if let Some(m) = raw.markings {
        let m: RawMarkings = parse_part(text, m.get())?;
        file.marking = Marking {
            edges: m.edges.into_iter().map(|(e, l)| (EdgeRef::new(e[0], e[1]), l)).collect(),
            vertices: m.vertices.into_iter().map(|(c, l)| (Corner::new(c[0], c[1]), l)).collect(),
        };
        lines.markings = line_of(raw.markings.expect("present"));
    }
    Ok(ParsedFile { file, lines })
}

impl ParsedFile {
    /// Builds the surface; validation errors point at the polygon or gluing responsible.
    pub fn validate(&self) -> Result<FlatSurface, FileError> {
        let f = &self.file;
        FlatSurface::new(f.polygons.clone(), f.gluings.clone(), f.marking.clone())
            .map_err(|source| FileError::Validation { line: self.line_of(&source), source })
    }

    fn gluing_line(&self, pred: impl Fn(&Gluing) -> bool, last: bool) -> Option<usize> {
        let mut hits = self.file.gluings.iter().zip(&self.lines.gluings).filter(|(g, _)| pred(g));
        let hit = if last { hits.last() } else { hits.next() };
        hit.map(|(_, &l)| l)
    }

    fn line_of(&self, e: &SurfaceError) -> usize {
        let poly = |i: usize| self.lines.polygons.get(i).copied();
        let touches = |e: EdgeRef| move |g: &Gluing| g.a == e || g.b == e;
        let found = match e {
            SurfaceError::DegeneratePolygon(i) | SurfaceError::NonSimplePolygon(i) | SurfaceError::NegativeOrientation(i) => {
                poly(*i)
            }
            SurfaceError::UnmatchedEdge(e) => self.gluing_line(touches(*e), false).or_else(|| poly(e.poly)),
            SurfaceError::EdgeGluedTwice(e) => self.gluing_line(touches(*e), true),
            SurfaceError::SelfGluedEdge(e) => self.gluing_line(|g| g.a == *e && g.b == *e, false),
            SurfaceError::VectorMismatch { a, b, .. } => self.gluing_line(|g| g.a == *a && g.b == *b, false),
            SurfaceError::SimplePole(c) => poly(c.poly),
            SurfaceError::BadMarking(_) => Some(self.lines.markings),
            SurfaceError::Disconnected => None,
        };
        found.unwrap_or(1)
    }
}

/// Parses and validates in one step.
pub fn load_surface(text: &str) -> Result<FlatSurface, FileError> {
    parse_surface_file(text)?.validate()
}

impl SurfaceFile {
    pub fn of_surface(s: &FlatSurface) -> Self {
        SurfaceFile { polygons: s.polygons().to_vec(), gluings: s.gluings().to_vec(), marking: s.marking().clone() }
    }

    /// Canonical text: one polygon or gluing per line.
    pub fn to_json(&self) -> String {
        let quote = |s: &str| serde_json::to_string(s).expect("string");
        let mut out = String::new();
        writeln!(out, "{{\n  \"schema\": {SCHEMA_VERSION},\n  \"polygons\": [").unwrap();
        for (k, p) in self.polygons.iter().enumerate() {
            let vs: Vec<String> = p
                .vertices
                .iter()
                .map(|v| format!("[{}, {}]", quote(&format_q(&v.x)), quote(&format_q(&v.y))))
                .collect();
            let comma = if k + 1 < self.polygons.len() { "," } else { "" };
            writeln!(out, "    [{}]{comma}", vs.join(", ")).unwrap();
        }
        writeln!(out, "  ],\n  \"gluings\": [").unwrap();
        for (k, g) in self.gluings.iter().enumerate() {
            let comma = if k + 1 < self.gluings.len() { "," } else { "" };
            writeln!(out, "    [[{}, {}], [{}, {}], {}]{comma}", g.a.poly, g.a.edge, g.b.poly, g.b.edge, g.sign.as_i64()).unwrap();
        }
        if self.marking.is_empty() {
            out.push_str("  ]\n}\n");
            return out;
        }
        out.push_str("  ],\n  \"markings\": {\n");
        let entries = |items: Vec<(usize, usize, &String)>| {
            items.iter().map(|(a, b, l)| format!("[[{a}, {b}], {}]", quote(l))).collect::<Vec<_>>().join(", ")
        };
        let edges = entries(self.marking.edges.iter().map(|(e, l)| (e.poly, e.edge, l)).collect());
        let vertices = entries(self.marking.vertices.iter().map(|(c, l)| (c.poly, c.vertex, l)).collect());
        writeln!(out, "    \"edges\": [{edges}],\n    \"vertices\": [{vertices}]\n  }}\n}}").unwrap();
        out
    }
}

pub fn write_surface(s: &FlatSurface) -> String {
    SurfaceFile::of_surface(s).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use flat_kernel::catalog::{marked_square_torus, slit_torus};

    #[test]
    fn positions_are_one_based() {
        assert_eq!(position("ab\ncd", 0), (1, 1));
        assert_eq!(position("ab\ncd", 4), (2, 2));
    }

    #[test]
    fn canonical_text_is_a_fixed_point() {
        for s in [slit_torus(), marked_square_torus()] {
            let text = write_surface(&s);
            let parsed = parse_surface_file(&text).unwrap();
            assert_eq!(parsed.file.to_json(), text);
            assert_eq!(parsed.validate().unwrap(), s);
        }
    }
}
