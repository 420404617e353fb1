//! x-monotone shapes at scale 1 with nine glues and full connectivity.
//!
//! A piece wider than three columns is cut near its middle columns i, i+1, i+2:
//! - plainly between i and i+1 when they share at most three edges, else between i+1 and i+2
//!   when those share at most three;
//! - with a jigsaw tab at column i+1 when at least three of its cells touch both neighbours: the
//!   topmost and bottommost such cells (and everything beyond them) stay left, the cells between
//!   go right;
//! - otherwise with an elbow: column i+1 is split below the higher of the two contact runs, the
//!   lower side taking every cell of the column up to the top of its own run.
//!
//! Narrow pieces are cut by rows. Every cut is labelled from three glue triples and kept only if
//! the two parts assemble uniquely at temperature 1; other cuts are tried in order otherwise.

use std::collections::BTreeSet;

use crate::assembly::{Pos, Side};
use crate::staged::StagedSystem;
use crate::verify::Shape;

use super::decompose::{compile, decompose, triple_candidates, Cut, Label, Piece, Strategy};
use super::jigsaw::{horizontal_cut, vertical_cut};
use super::ConstructionError;

/// Which case of the column rule split a piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    Plain,
    Jigsaw,
    Elbow,
}

/// A column cut of the decomposition; `column` is the middle column i the rule looked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneCut {
    pub kind: CutKind,
    pub column: i32,
}

const KINDS: [CutKind; 3] = [CutKind::Plain, CutKind::Jigsaw, CutKind::Elbow];

fn tag(kind: CutKind) -> usize {
    KINDS.iter().position(|&k| k == kind).expect("known kind")
}

struct MonotoneCuts;

/// Rows y where (x, y) and (x + 1, y) are both in `region`.
fn contacts(region: &BTreeSet<Pos>, x: i32) -> BTreeSet<i32> {
    region
        .iter()
        .filter(|p| p.x == x && region.contains(&Pos::new(x + 1, p.y)))
        .map(|p| p.y)
        .collect()
}

/// Role 0 for cut edges touching the topmost cut row, 2 for the bottommost, 1 otherwise.
fn cut_with_roles(region: &BTreeSet<Pos>, first: BTreeSet<Pos>, tag: Option<(usize, i32)>) -> Option<Cut> {
    let second: BTreeSet<Pos> = region.difference(&first).copied().collect();
    let rows: Vec<i32> = first
        .iter()
        .filter(|p| Side::ALL.iter().any(|&s| second.contains(&p.step(s))))
        .map(|p| p.y)
        .collect();
    let top = rows.iter().copied().max()?;
    let bottom = rows.iter().copied().min()?;
    let mut cut = Cut::new(region, first, Side::East, |p, side| {
        let q = p.step(side);
        if p.y == top || q.y == top {
            0
        } else if p.y == bottom || q.y == bottom {
            2
        } else {
            1
        }
    })
    .ok()?;
    cut.tag = tag;
    Some(cut)
}

fn left_of(region: &BTreeSet<Pos>, x: i32) -> BTreeSet<Pos> {
    region.iter().copied().filter(|p| p.x <= x).collect()
}

/// The cut the column rule picks at middle column `i`.
fn rule_cut(region: &BTreeSet<Pos>, i: i32) -> Option<Cut> {
    let left = contacts(region, i);
    let right = contacts(region, i + 1);
    let plain = |x: i32| cut_with_roles(region, left_of(region, x), Some((tag(CutKind::Plain), i)));
    if left.len() <= 3 {
        return plain(i);
    }
    if right.len() <= 3 {
        return plain(i + 1);
    }
    let both: Vec<i32> = left.intersection(&right).copied().collect();
    let mid = i + 1;
    if both.len() >= 3 {
        let (lo, hi) = (both[0], both[both.len() - 1]);
        let mut first = left_of(region, i);
        first.extend(region.iter().copied().filter(|p| p.x == mid && (p.y >= hi || p.y <= lo)));
        return cut_with_roles(region, first, Some((tag(CutKind::Jigsaw), i)));
    }
    let (hl, hr) = (*left.last()?, *right.last()?);
    let first: BTreeSet<Pos> = if hl < hr {
        let mut f = left_of(region, i);
        f.extend(region.iter().copied().filter(|p| p.x == mid && p.y <= hl));
        f
    } else {
        region
            .iter()
            .copied()
            .filter(|p| p.x <= i || (p.x == mid && p.y > hr))
            .collect()
    };
    cut_with_roles(region, first, Some((tag(CutKind::Elbow), i)))
}

/// `lo..=hi` ordered from `start` outwards.
fn outwards(lo: i32, hi: i32, start: i32) -> Vec<i32> {
    let mut out = Vec::new();
    for d in 0..=(hi - lo) {
        for c in [start + d, start - d] {
            if c >= lo && c <= hi && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

impl Strategy for MonotoneCuts {
    fn cuts(&self, region: &BTreeSet<Pos>) -> Vec<Cut> {
        let x0 = region.iter().map(|p| p.x).min().unwrap_or(0);
        let x1 = region.iter().map(|p| p.x).max().unwrap_or(0);
        let y0 = region.iter().map(|p| p.y).min().unwrap_or(0);
        let y1 = region.iter().map(|p| p.y).max().unwrap_or(0);
        let width = x1 - x0 + 1;
        let rows = || {
            [true, false].into_iter().flat_map(move |tabs| {
                outwards(y0, y1 - 1, (y0 + y1) / 2)
                    .into_iter()
                    .filter_map(move |y| horizontal_cut(region, y, tabs).ok())
            })
        };
        let plain = || {
            outwards(x0, x1 - 1, (x0 + x1) / 2)
                .into_iter()
                .filter_map(|x| cut_with_roles(region, left_of(region, x), Some((tag(CutKind::Plain), x))))
        };
        if width > 3 {
            let rule = outwards(x0, x1 - 2, x0 + (width - 3) / 2)
                .into_iter()
                .filter_map(|i| rule_cut(region, i));
            let tabs = outwards(x0, x1, (x0 + x1) / 2)
                .into_iter()
                .filter_map(|x| vertical_cut(region, x, true).ok());
            rule.chain(plain()).chain(tabs).chain(rows()).collect()
        } else {
            rows().chain(plain()).collect()
        }
    }

    fn candidates(&self, _region: &BTreeSet<Pos>, cut: &Cut, boundary: &BTreeSet<(Label, Side)>) -> Vec<Vec<Label>> {
        let roles = cut.roles.iter().map(|r| r.1).max().unwrap_or(0) + 1;
        triple_candidates(3, roles, cut.axis, boundary)
    }
}

fn check(shape: &Shape) -> Result<(), ConstructionError> {
    if !crate::assembly::is_connected(shape.cells().iter().copied()) {
        return Err(ConstructionError::Disconnected);
    }
    if !shape.is_x_monotone() {
        return Err(ConstructionError::NotMonotone);
    }
    Ok(())
}

fn collect(piece: &Piece, out: &mut Vec<MonotoneCut>) {
    if let Some((k, column)) = piece.tag {
        out.push(MonotoneCut { kind: KINDS[k], column });
    }
    for c in &piece.children {
        collect(c, out);
    }
}

/// Column cuts of the decomposition `gen_monotone` uses, parents before children.
pub fn monotone_cuts(shape: &Shape) -> Result<Vec<MonotoneCut>, ConstructionError> {
    check(shape)?;
    let dec = decompose(shape.cells(), &MonotoneCuts)?;
    let mut out = Vec::new();
    collect(&dec.root, &mut out);
    Ok(out)
}

/// Staged system uniquely assembling `shape` at scale 1, fully connected.
pub fn gen_monotone(shape: &Shape) -> Result<StagedSystem, ConstructionError> {
    check(shape)?;
    let dec = decompose(shape.cells(), &MonotoneCuts)?;
    let (w, h) = shape.dims();
    Ok(compile(&dec, &format!("monotone_{w}x{h}_{}", shape.len()), "g"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{uniquely_assembles_shape, ClosureBudget};
    use crate::staged::{execute, metrics, validate};
    use crate::testutil::random_polyomino;
    use crate::verify::is_fully_connected;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn shape(rows: &[&str]) -> Shape {
        let h = rows.len() as i32;
        let cells = rows.iter().enumerate().flat_map(|(r, line)| {
            line.chars()
                .enumerate()
                .filter(|(_, c)| *c == '#')
                .map(move |(x, _)| Pos::new(x as i32, h - 1 - r as i32))
        });
        Shape::new(cells.collect::<Vec<_>>()).unwrap()
    }

    fn assemble(s: &Shape) -> Vec<MonotoneCut> {
        let sys = gen_monotone(s).unwrap();
        assert!(validate(&sys).is_empty(), "{:?}", validate(&sys));
        let ex = execute(&sys, ClosureBudget::for_target(s.len())).unwrap();
        assert!(uniquely_assembles_shape(&ex.output, s));
        assert!(is_fully_connected(&ex.output.terminal[0], &sys.tiles));
        assert!(metrics(&sys).glue_count <= 9);
        monotone_cuts(s).unwrap()
    }

    fn kinds(cuts: &[MonotoneCut]) -> BTreeSet<CutKind> {
        cuts.iter().map(|c| c.kind).collect()
    }

    #[test]
    fn squares() {
        for n in 1..=6 {
            assemble(&Shape::rectangle(n, n));
        }
    }

    #[test]
    fn plain_cut_on_thin_neck() {
        let s = shape(&["##..##", "######", "##..##"]);
        assert!(kinds(&assemble(&s)).contains(&CutKind::Plain));
    }

    #[test]
    fn jigsaw_on_tall_middle() {
        let s = Shape::rectangle(5, 5);
        assert_eq!(assemble(&s)[0].kind, CutKind::Jigsaw);
    }

    #[test]
    fn elbow_on_staircase() {
        // Columns 0 and 2 touch the tall column 1 on disjoint runs of four rows.
        let s = shape(&[
            ".###", ".###", ".###", ".###", ".#..", ".#..", "##..", "##..", "##..", "##..",
        ]);
        let cuts = assemble(&s);
        assert!(kinds(&cuts).contains(&CutKind::Elbow), "{cuts:?}");
    }

    #[test]
    fn random_monotone_shapes() {
        let mut rng = StdRng::seed_from_u64(3);
        let mut done = 0;
        while done < 40 {
            let n = rng.gen_range(2..=30);
            let s = random_polyomino(&mut rng, n);
            if s.is_x_monotone() {
                assemble(&s);
                done += 1;
            }
        }
    }

    #[test]
    fn rejects_non_monotone() {
        let u = shape(&["#.#", "#.#", "###"]);
        let c = shape(&["###", "#..", "###"]);
        assert!(gen_monotone(&u).is_ok());
        assert_eq!(gen_monotone(&c).unwrap_err(), ConstructionError::NotMonotone);
    }
}
