//! Periodic graph descriptions and their line-oriented text format.
//!
//! ```text
//! # comment
//! periodic dim=<d> cells=<k>
//! name <free text>
//! transitive
//! color <i> black|white|none
//! pos <i> <x_1,...,x_d>
//! edge <u> <v> <o_1,...,o_d> [x<mult>] [directed]
//! ```
//!
//! The header must be the first non-comment line; the other lines may appear
//! in any order and `name`, `transitive`, `color` and `pos` are optional.
//! Vectors are comma separated without spaces; a zero-length vector (dim=0)
//! is written `-`. An undirected edge `u v o` joins cell vertex `u` at
//! translate `t` to cell vertex `v` at translate `t + o` and is expanded in
//! both directions; a `directed` edge only goes from `u` to `v`. `pos` gives
//! fractional lattice coordinates of a cell vertex; they only feed the bridge
//! height function and default to zero.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
    None,
}

impl Color {
    fn as_str(self) -> &'static str {
        match self {
            Color::Black => "black",
            Color::White => "white",
            Color::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Undirected,
    Directed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellVertex {
    pub index: usize,
    pub color: Color,
    pub position: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeSpec {
    pub u: usize,
    pub v: usize,
    pub offset: Vec<i64>,
    pub multiplicity: u32,
    pub direction: Direction,
}

impl EdgeSpec {
    pub fn undirected(u: usize, v: usize, offset: &[i64]) -> Self {
        EdgeSpec {
            u,
            v,
            offset: offset.to_vec(),
            multiplicity: 1,
            direction: Direction::Undirected,
        }
    }

    pub fn directed(u: usize, v: usize, offset: &[i64], multiplicity: u32) -> Self {
        EdgeSpec {
            u,
            v,
            offset: offset.to_vec(),
            multiplicity,
            direction: Direction::Directed,
        }
    }

    pub fn with_multiplicity(mut self, m: u32) -> Self {
        self.multiplicity = m;
        self
    }

    /// Same edge described from the other endpoint.
    pub fn reversed(&self) -> EdgeSpec {
        EdgeSpec {
            u: self.v,
            v: self.u,
            offset: self.offset.iter().map(|x| -x).collect(),
            multiplicity: self.multiplicity,
            direction: self.direction,
        }
    }

    /// True when `other` describes the same undirected edge (either orientation).
    pub fn same_edge(&self, other: &EdgeSpec) -> bool {
        if self.direction != other.direction {
            return false;
        }
        let fwd = self.u == other.u && self.v == other.v && self.offset == other.offset;
        if self.direction == Direction::Directed {
            return fwd;
        }
        let rev = other.reversed();
        fwd || (self.u == rev.u && self.v == rev.v && self.offset == rev.offset)
    }
}

/// Unit cell, translation rank and offset edges of a periodic graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicGraphSpec {
    pub name: String,
    pub dim: usize,
    pub cell: Vec<CellVertex>,
    pub edges: Vec<EdgeSpec>,
    /// Asserts vertex-transitivity. Single-cell specs are always transitive.
    pub transitive: bool,
}

impl PeriodicGraphSpec {
    pub fn new(name: impl Into<String>, dim: usize, cells: usize) -> Self {
        PeriodicGraphSpec {
            name: name.into(),
            dim,
            cell: (0..cells)
                .map(|index| CellVertex {
                    index,
                    color: Color::None,
                    position: vec![0.0; dim],
                })
                .collect(),
            edges: Vec::new(),
            transitive: false,
        }
    }

    pub fn cells(&self) -> usize {
        self.cell.len()
    }

    pub fn claims_transitive(&self) -> bool {
        self.transitive || self.cell.len() == 1
    }

    pub fn add_edge(&mut self, e: EdgeSpec) -> &mut Self {
        self.edges.push(e);
        self
    }

    pub fn set_color(&mut self, i: usize, c: Color) -> &mut Self {
        self.cell[i].color = c;
        self
    }

    pub fn set_position(&mut self, i: usize, p: &[f64]) -> &mut Self {
        self.cell[i].position = p.to_vec();
        self
    }

    pub fn has_coloring(&self) -> bool {
        self.cell.iter().any(|c| c.color != Color::None)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let k = self.cell.len();
        if k == 0 {
            return Err(GraphError::InvalidSpec("empty unit cell".into()));
        }
        for (i, c) in self.cell.iter().enumerate() {
            if c.index != i {
                return Err(GraphError::InvalidSpec(format!(
                    "cell vertex {} stored at position {}",
                    c.index, i
                )));
            }
            if c.position.len() != self.dim {
                return Err(GraphError::InvalidSpec(format!(
                    "position of cell vertex {} has length {}, expected {}",
                    i,
                    c.position.len(),
                    self.dim
                )));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= k || e.v >= k {
                return Err(GraphError::InvalidSpec(format!(
                    "edge {}: endpoint out of range (cells={})",
                    i, k
                )));
            }
            if e.multiplicity == 0 {
                return Err(GraphError::InvalidSpec(format!("edge {}: multiplicity 0", i)));
            }
            if e.offset.len() != self.dim {
                return Err(GraphError::InvalidSpec(format!(
                    "edge {}: offset has length {}, expected {}",
                    i,
                    e.offset.len(),
                    self.dim
                )));
            }
            if e.direction == Direction::Undirected
                && e.u == e.v
                && e.offset.iter().all(|&x| x == 0)
            {
                return Err(GraphError::InvalidSpec(format!(
                    "edge {}: undirected self-loop (use a directed loop)",
                    i
                )));
            }
        }
        Ok(())
    }

    /// Canonical text form; `parse(to_text(s)) == s`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "periodic dim={} cells={}", self.dim, self.cell.len());
        if !self.name.is_empty() {
            let _ = writeln!(out, "name {}", self.name);
        }
        if self.transitive {
            out.push_str("transitive\n");
        }
        for c in &self.cell {
            if c.color != Color::None {
                let _ = writeln!(out, "color {} {}", c.index, c.color.as_str());
            }
        }
        for c in &self.cell {
            if c.position.iter().any(|&x| x != 0.0) {
                let p: Vec<String> = c.position.iter().map(|x| format!("{:?}", x)).collect();
                let _ = writeln!(out, "pos {} {}", c.index, p.join(","));
            }
        }
        for e in &self.edges {
            let _ = write!(out, "edge {} {} {}", e.u, e.v, fmt_offset(&e.offset));
            if e.multiplicity != 1 {
                let _ = write!(out, " x{}", e.multiplicity);
            }
            if e.direction == Direction::Directed {
                out.push_str(" directed");
            }
            out.push('\n');
        }
        out
    }

    /// Hex SHA-256 of the canonical text.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut spec: Option<PeriodicGraphSpec> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| GraphError::Parse { line: line_no, msg };
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap_or_default();
            let Some(s) = spec.as_mut() else {
                if head != "periodic" {
                    return Err(err("expected header `periodic dim=<d> cells=<k>`".into()));
                }
                let mut dim = None;
                let mut cells = None;
                for t in toks {
                    if let Some(x) = t.strip_prefix("dim=") {
                        dim = Some(x.parse::<usize>().map_err(|_| err(format!("bad dim `{}`", x)))?);
                    } else if let Some(x) = t.strip_prefix("cells=") {
                        cells =
                            Some(x.parse::<usize>().map_err(|_| err(format!("bad cells `{}`", x)))?);
                    } else {
                        return Err(err(format!("unexpected header token `{}`", t)));
                    }
                }
                let (Some(dim), Some(cells)) = (dim, cells) else {
                    return Err(err("header needs dim= and cells=".into()));
                };
                if cells == 0 {
                    return Err(err("cells must be positive".into()));
                }
                spec = Some(PeriodicGraphSpec::new("", dim, cells));
                continue;
            };
            let cell_index = |t: Option<&str>, k: usize| -> Result<usize, GraphError> {
                let t = t.ok_or_else(|| err("missing cell index".into()))?;
                let i = t.parse::<usize>().map_err(|_| err(format!("bad cell index `{}`", t)))?;
                if i >= k {
                    return Err(err(format!("cell index {} out of range (cells={})", i, k)));
                }
                Ok(i)
            };
            let k = s.cell.len();
            match head {
                "periodic" => return Err(err("duplicate header".into())),
                "name" => {
                    s.name = line["name".len()..].trim().to_string();
                }
                "transitive" => {
                    if toks.next().is_some() {
                        return Err(err("`transitive` takes no arguments".into()));
                    }
                    s.transitive = true;
                }
                "color" => {
                    let i = cell_index(toks.next(), k)?;
                    let c = match toks.next() {
                        Some("black") => Color::Black,
                        Some("white") => Color::White,
                        Some("none") => Color::None,
                        other => return Err(err(format!("bad color {:?}", other))),
                    };
                    if toks.next().is_some() {
                        return Err(err("trailing tokens after color".into()));
                    }
                    s.cell[i].color = c;
                }
                "pos" => {
                    let i = cell_index(toks.next(), k)?;
                    let t = toks.next().ok_or_else(|| err("missing position".into()))?;
                    let p = parse_vec::<f64>(t, s.dim).map_err(err)?;
                    if toks.next().is_some() {
                        return Err(err("trailing tokens after pos".into()));
                    }
                    s.cell[i].position = p;
                }
                "edge" => {
                    let e = edge_tokens(toks, k, s.dim).map_err(err)?;
                    s.edges.push(e);
                }
                other => return Err(err(format!("unknown directive `{}`", other))),
            }
        }
        let spec = spec.ok_or(GraphError::Parse {
            line: 0,
            msg: "empty spec".into(),
        })?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses `<u> <v> <offset> [x<mult>] [directed]` (an edge line without the
/// leading keyword) for a spec with `cells` cell vertices in dimension `dim`.
pub fn parse_edge(text: &str, cells: usize, dim: usize) -> Result<EdgeSpec, GraphError> {
    edge_tokens(text.split_whitespace(), cells, dim).map_err(|msg| GraphError::Parse { line: 1, msg })
}

fn edge_tokens<'a>(mut toks: impl Iterator<Item = &'a str>, k: usize, dim: usize) -> Result<EdgeSpec, String> {
    let mut index = || -> Result<usize, String> {
        let t = toks.next().ok_or("missing cell index")?;
        let i = t.parse::<usize>().map_err(|_| format!("bad cell index `{}`", t))?;
        if i >= k {
            return Err(format!("cell index {} out of range (cells={})", i, k));
        }
        Ok(i)
    };
    let u = index()?;
    let v = index()?;
    let t = toks.next().ok_or("missing offset")?;
    let offset = parse_vec::<i64>(t, dim)?;
    let mut e = EdgeSpec::undirected(u, v, &offset);
    for t in toks {
        if t == "directed" {
            e.direction = Direction::Directed;
        } else if let Some(m) = t.strip_prefix('x') {
            e.multiplicity = m
                .parse::<u32>()
                .ok()
                .filter(|&m| m > 0)
                .ok_or_else(|| format!("bad multiplicity `{}`", t))?;
        } else {
            return Err(format!("unexpected edge token `{}`", t));
        }
    }
    if e.direction == Direction::Undirected && u == v && e.offset.iter().all(|&x| x == 0) {
        return Err("undirected self-loop".into());
    }
    Ok(e)
}

fn fmt_offset(o: &[i64]) -> String {
    if o.is_empty() {
        return "-".into();
    }
    o.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_vec<T: std::str::FromStr>(t: &str, dim: usize) -> Result<Vec<T>, String> {
    if t == "-" {
        return if dim == 0 {
            Ok(Vec::new())
        } else {
            Err(format!("empty vector but dim={}", dim))
        };
    }
    let v = t
        .split(',')
        .map(|x| x.parse::<T>().map_err(|_| format!("bad number `{}`", x)))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != dim {
        return Err(format!("vector `{}` has length {}, expected {}", t, v.len(), dim));
    }
    Ok(v)
}
