//! ASCII and SVG pictures of shapes and supertiles.

use std::fmt::Write as _;

use crate::assembly::{Pos, Side, Supertile, TileSet};
use crate::verify::Shape;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

const CELL: i32 = 24;

/// One row per line, top row first; `cell` gives the character of an occupied position.
fn ascii(cells: &[Pos], cell: impl Fn(Pos) -> char) -> String {
    let (x0, x1, y0, y1) = bounds(cells);
    let mut out = String::new();
    for y in (y0..=y1).rev() {
        for x in x0..=x1 {
            let p = Pos::new(x, y);
            out.push(if cells.contains(&p) { cell(p) } else { '.' });
        }
        out.push('\n');
    }
    out
}

fn bounds(cells: &[Pos]) -> (i32, i32, i32, i32) {
    let xs = cells.iter().map(|p| p.x);
    let ys = cells.iter().map(|p| p.y);
    (
        xs.clone().min().unwrap_or(0),
        xs.max().unwrap_or(0),
        ys.clone().min().unwrap_or(0),
        ys.max().unwrap_or(0),
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Unit squares, and for each cell the labels of its non-null glues just inside each edge.
fn svg(cells: &[(Pos, Option<[String; 4]>)]) -> String {
    let positions: Vec<Pos> = cells.iter().map(|c| c.0).collect();
    let (x0, x1, y0, y1) = bounds(&positions);
    let (w, h) = ((x1 - x0 + 1) * CELL, (y1 - y0 + 1) * CELL);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    let mut sorted: Vec<&(Pos, Option<[String; 4]>)> = cells.iter().collect();
    sorted.sort_by_key(|c| (-c.0.y, c.0.x));
    for (p, glues) in sorted {
        let (left, top) = ((p.x - x0) * CELL, (y1 - p.y) * CELL);
        writeln!(
            out,
            r##"<rect x="{left}" y="{top}" width="{CELL}" height="{CELL}" fill="#dde6f0" stroke="#333" stroke-width="1"/>"##
        )
        .unwrap();
        let Some(glues) = glues else { continue };
        for side in Side::ALL {
            let label = &glues[side.index()];
            if label.is_empty() {
                continue;
            }
            let half = CELL / 2;
            let (tx, ty, anchor) = match side {
                Side::North => (left + half, top + 7, "middle"),
                Side::East => (left + CELL - 2, top + half + 3, "end"),
                Side::South => (left + half, top + CELL - 2, "middle"),
                Side::West => (left + 2, top + half + 3, "start"),
            };
            writeln!(
                out,
                r#"<text x="{tx}" y="{ty}" font-size="6" font-family="monospace" text-anchor="{anchor}">{}</text>"#,
                escape(label)
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_shape(shape: &Shape, format: Format) -> String {
    let cells: Vec<Pos> = shape.cells().iter().copied().collect();
    match format {
        Format::Ascii => ascii(&cells, |_| '#'),
        Format::Svg => svg(&cells.iter().map(|&p| (p, None)).collect::<Vec<_>>()),
    }
}

/// ASCII shows each cell as the first character of its tile's name; SVG labels glued edges.
pub fn render_supertile(s: &Supertile, tiles: &TileSet, format: Format) -> String {
    match format {
        Format::Ascii => {
            let cells: Vec<Pos> = s.positions().collect();
            ascii(&cells, |p| {
                s.get(p)
                    .and_then(|t| tiles.tile(t).name.chars().next())
                    .unwrap_or('#')
            })
        }
        Format::Svg => {
            let cells: Vec<(Pos, Option<[String; 4]>)> = s
                .cells()
                .iter()
                .map(|&(p, t)| {
                    let labels = tiles.tile(t).glues.map(|g| {
                        if g.is_null() {
                            String::new()
                        } else {
                            tiles.glues.label(g).to_string()
                        }
                    });
                    (p, Some(labels))
                })
                .collect();
            svg(&cells)
        }
    }
}
