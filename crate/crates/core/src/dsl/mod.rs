//! The text format for staged systems and shapes.
//!
//! ```text
//! system line10
//! temperature 1
//! glue a strength 1
//! tile ab e=b w=a
//! stage 1
//! bin x add ab,bc
//! stage 2
//! bin m from x,y
//! output m
//! ```
//!
//! One statement per line, `#` starts a comment, omitted tile sides are `null`. Bin names are
//! scoped to their stage and `from` names bins of the previous stage only.

mod parse;
pub mod render;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use crate::assembly::Pos;
use crate::staged::StagedSystem;
use crate::verify::Shape;

pub use parse::parse_system;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    Semantic,
}

/// A problem at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Semantic => "error",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.column, self.message)
    }
}

/// Every diagnostic of a failed parse, in source order.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct ParseError(pub Vec<Diagnostic>);

impl ParseError {
    pub fn is_syntax(&self) -> bool {
        self.0.iter().any(|d| d.kind == DiagnosticKind::Syntax)
    }
}

/// A bin as written: its name, the previous-stage bins feeding it and the tiles it adds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinDocument {
    pub name: String,
    pub from: BTreeSet<String>,
    pub add: BTreeSet<String>,
}

/// A staged system by names only; two systems are structurally equal when these are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDocument {
    pub name: String,
    pub temperature: u32,
    pub glues: BTreeMap<String, u32>,
    /// Glue labels in N, E, S, W order.
    pub tiles: BTreeMap<String, [String; 4]>,
    pub stages: Vec<Vec<BinDocument>>,
    pub output: BTreeSet<String>,
}

pub fn document(system: &StagedSystem) -> SystemDocument {
    let t = &system.tiles;
    let g = &system.graph;
    let stages = g
        .stages
        .iter()
        .enumerate()
        .map(|(i, stage)| {
            stage
                .iter()
                .enumerate()
                .map(|(j, node)| {
                    let here = crate::staged::BinRef { stage: i, bin: j };
                    BinDocument {
                        name: node.name.clone(),
                        from: g
                            .predecessors(here)
                            .filter_map(|r| g.node(r).map(|n| n.name.clone()))
                            .collect(),
                        add: node.additions.iter().map(|&id| t.tile(id).name.clone()).collect(),
                    }
                })
                .collect()
        })
        .collect();
    SystemDocument {
        name: system.name.clone(),
        temperature: system.temperature,
        glues: t.glues.iter().map(|(_, l, s)| (l.to_string(), s)).collect(),
        tiles: t
            .iter()
            .map(|(_, tile)| (tile.name.clone(), tile.glues.map(|g| t.glues.label(g).to_string())))
            .collect(),
        stages,
        output: g.output.iter().filter_map(|&r| g.node(r).map(|n| n.name.clone())).collect(),
    }
}

pub fn structurally_equal(a: &StagedSystem, b: &StagedSystem) -> bool {
    document(a) == document(b)
}

fn list(items: &BTreeSet<String>) -> String {
    items.iter().map(String::as_str).collect::<Vec<_>>().join(",")
}

/// Canonical text: glues and tiles sorted by name, stages and bins in order.
pub fn serialize_system(system: &StagedSystem) -> String {
    let d = document(system);
    let mut out = String::new();
    writeln!(out, "system {}", d.name).unwrap();
    writeln!(out, "temperature {}", d.temperature).unwrap();
    for (label, strength) in &d.glues {
        writeln!(out, "glue {label} strength {strength}").unwrap();
    }
    for (name, glues) in &d.tiles {
        write!(out, "tile {name}").unwrap();
        for (side, label) in ["n", "e", "s", "w"].iter().zip(glues) {
            if label != crate::assembly::NULL_LABEL {
                write!(out, " {side}={label}").unwrap();
            }
        }
        out.push('\n');
    }
    for (i, stage) in d.stages.iter().enumerate() {
        writeln!(out, "\nstage {}", i + 1).unwrap();
        for bin in stage {
            write!(out, "bin {}", bin.name).unwrap();
            if !bin.from.is_empty() {
                write!(out, " from {}", list(&bin.from)).unwrap();
            }
            if !bin.add.is_empty() {
                write!(out, " add {}", list(&bin.add)).unwrap();
            }
            out.push('\n');
        }
    }
    if !d.output.is_empty() {
        writeln!(out, "\noutput {}", list(&d.output)).unwrap();
    }
    out
}

/// Reads a grid of `#` (cell) and `.` (empty) rows, top row first.
pub fn parse_shape(text: &str) -> Result<Shape, ParseError> {
    let diag = |kind, line, column, message: String| ParseError(vec![Diagnostic { kind, line, column, message }]);
    let rows: Vec<&str> = text.lines().map(|l| l.trim_end()).collect();
    let end = rows.iter().rposition(|r| !r.is_empty()).map_or(0, |i| i + 1);
    let rows = &rows[..end];
    let width = rows.first().map_or(0, |r| r.chars().count());
    let mut cells = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row.chars().count() != width {
            return Err(diag(
                DiagnosticKind::Syntax,
                i + 1,
                1,
                format!("row has {} columns, expected {width}", row.chars().count()),
            ));
        }
        for (j, c) in row.chars().enumerate() {
            match c {
                '#' => cells.push(Pos::new(j as i32, (rows.len() - 1 - i) as i32)),
                '.' => {}
                other => {
                    return Err(diag(DiagnosticKind::Syntax, i + 1, j + 1, format!("expected `#` or `.`, found `{other}`")))
                }
            }
        }
    }
    Shape::new(cells).map_err(|e| diag(DiagnosticKind::Semantic, 1, 1, e.to_string()))
}

pub fn serialize_shape(shape: &Shape) -> String {
    render::render_shape(shape, render::Format::Ascii)
}
