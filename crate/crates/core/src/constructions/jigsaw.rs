//! n×n squares from jigsaw-cut column units with nine glues.
//!
//! Vertical cuts follow the jigsaw rule: the top and bottom cells of the cut column stay with the
//! left piece, the rest of the column goes right. Every cut carries one of three glue classes,
//! each with a run glue for the column edges and separate glues for the bottom and top tabs
//! (their sides and floors). The square is a prefix unit, middle units of span 2 and a suffix
//! unit; each unit is a stack of rows built like a line, and the units are then doubled and
//! accumulated like a line. Every stage builds the same catalog of pieces, so the bin count
//! does not grow with n.

use std::collections::{BTreeSet, HashMap};

use crate::assembly::{GlueId, Pos, Side, TileId};
use crate::staged::StagedSystem;
use crate::verify::Shape;

use super::decompose::{compile, decompose, label_tiles, triple_candidates, Cut, Decomposition, Label, Strategy};
use super::ConstructionError;

/// Jigsaw cuts: columns are halved while a piece is wider than three, then rows.
///
/// The cut column's topmost and bottommost cells stay with the left part and the rest of the
/// column goes right, so the right part can only seat between the two tabs. Rows are cut the same
/// way with left/right swapped for bottom/top.
pub(crate) struct JigsawCuts;

pub(crate) fn column_cells(region: &BTreeSet<Pos>, x: i32) -> Vec<Pos> {
    region.iter().copied().filter(|p| p.x == x).collect()
}

pub(crate) fn row_cells(region: &BTreeSet<Pos>, y: i32) -> Vec<Pos> {
    let mut v: Vec<Pos> = region.iter().copied().filter(|p| p.y == y).collect();
    v.sort_by_key(|p| p.x);
    v
}

fn span(region: &BTreeSet<Pos>, f: impl Fn(&Pos) -> i32) -> (i32, i32) {
    let lo = region.iter().map(&f).min().unwrap_or(0);
    let hi = region.iter().map(&f).max().unwrap_or(0);
    (lo, hi)
}

/// Column the table picks for a piece `m` columns wide: the ⌊(m+1)/2⌋-th, 0-based from `x0`.
fn table_column(x0: i32, m: i32) -> i32 {
    x0 + (m + 1) / 2 - 1
}

/// Cut along column `cx`; with `tabs` the column's top and bottom cells go left and the rest
/// right, otherwise the whole column goes left.
pub(crate) fn vertical_cut(region: &BTreeSet<Pos>, cx: i32, tabs: bool) -> Result<Cut, ConstructionError> {
    let col = column_cells(region, cx);
    let top = col.iter().map(|p| p.y).max().unwrap_or(0);
    let bottom = col.iter().map(|p| p.y).min().unwrap_or(0);
    let first: BTreeSet<Pos> = region
        .iter()
        .copied()
        .filter(|p| p.x < cx || (p.x == cx && (!tabs || p.y == top || p.y == bottom)))
        .collect();
    Cut::new(region, first, Side::East, |p, side| edge_role_by_y(p, side, top, bottom))
}

/// Row counterpart of [`vertical_cut`]: the cut row's end cells stay with the bottom part.
pub(crate) fn horizontal_cut(region: &BTreeSet<Pos>, cy: i32, tabs: bool) -> Result<Cut, ConstructionError> {
    let row = row_cells(region, cy);
    let left = row.first().map(|p| p.x).unwrap_or(0);
    let right = row.last().map(|p| p.x).unwrap_or(0);
    let first: BTreeSet<Pos> = region
        .iter()
        .copied()
        .filter(|p| p.y < cy || (p.y == cy && (!tabs || p.x == left || p.x == right)))
        .collect();
    Cut::new(region, first, Side::North, |p, side| edge_role_by_x(p, side, left, right))
}

/// Lines to try, nearest the table's choice first. A piece whose first line is pocketed can
/// strand the tab cells of the table's line; the next line over keeps them attached.
fn lines_from(lo: i32, hi: i32) -> Vec<i32> {
    let start = table_column(lo, hi - lo + 1);
    let mut out = vec![start];
    for d in 1..=(hi - lo) {
        for c in [start + d, start - d] {
            if c >= lo && c <= hi {
                out.push(c);
            }
        }
    }
    out
}

/// Role 0 for edges touching the top tab row, 2 for the bottom one, 1 otherwise.
fn edge_role_by_y(p: Pos, side: Side, top: i32, bottom: i32) -> usize {
    let q = p.step(side);
    if p.y == top || q.y == top {
        0
    } else if p.y == bottom || q.y == bottom {
        2
    } else {
        1
    }
}

fn edge_role_by_x(p: Pos, side: Side, left: i32, right: i32) -> usize {
    let q = p.step(side);
    if p.x == left || q.x == left {
        0
    } else if p.x == right || q.x == right {
        2
    } else {
        1
    }
}

impl Strategy for JigsawCuts {
    fn cuts(&self, region: &BTreeSet<Pos>) -> Vec<Cut> {
        let (x0, x1) = span(region, |p| p.x);
        let (y0, y1) = span(region, |p| p.y);
        let vertical: Vec<_> = [true, false]
            .into_iter()
            .flat_map(|tabs| lines_from(x0, x1).into_iter().map(move |c| (c, tabs)))
            .filter_map(|(c, tabs)| vertical_cut(region, c, tabs).ok())
            .collect();
        let horizontal: Vec<_> = [true, false]
            .into_iter()
            .flat_map(|tabs| lines_from(y0, y1).into_iter().map(move |c| (c, tabs)))
            .filter_map(|(c, tabs)| horizontal_cut(region, c, tabs).ok())
            .collect();
        if x1 - x0 + 1 > 3 || y0 == y1 {
            vertical.into_iter().chain(horizontal).collect()
        } else {
            horizontal.into_iter().chain(vertical).collect()
        }
    }

    fn candidates(&self, _region: &BTreeSet<Pos>, cut: &Cut, boundary: &BTreeSet<(Label, Side)>) -> Vec<Vec<Label>> {
        let roles = cut.roles.iter().map(|r| r.1).max().unwrap_or(0) + 1;
        triple_candidates(3, roles, cut.axis, boundary)
    }
}

pub(crate) fn jigsaw_decomposition(n: i32) -> Result<Decomposition, ConstructionError> {
    let target: BTreeSet<Pos> = Shape::rectangle(n, n).cells().clone();
    decompose(&target, &JigsawCuts)
}

/// Run, bottom-tab and top-tab roles of a glue class.
const RUN: usize = 0;
const BOTTOM: usize = 1;
const TOP: usize = 2;

fn label(class: usize, role: usize) -> Label {
    (class * 3 + role + 1) as Label
}

fn third(a: usize, b: usize) -> usize {
    3 - a - b
}

fn next(c: usize) -> usize {
    (c + 1) % 3
}

/// Ordered pairs of distinct classes.
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

fn pair_index(a: usize, b: usize) -> usize {
    PAIRS.iter().position(|&p| p == (a, b)).expect("distinct classes")
}

/// A column unit between two cuts, drawn with its left cut at x = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    /// Columns 0..span full plus tabs in column `span`.
    Prefix { right: usize, span: i32 },
    /// Pocketed column 0, full column 1, tabs in column 2.
    Middle { left: usize, right: usize },
    /// Pocketed column 0 and a full column 1.
    Suffix { left: usize },
}

impl Unit {
    fn left(self) -> Option<usize> {
        match self {
            Unit::Prefix { .. } => None,
            Unit::Middle { left, .. } | Unit::Suffix { left } => Some(left),
        }
    }

    fn right(self) -> Option<usize> {
        match self {
            Unit::Prefix { right, .. } | Unit::Middle { right, .. } => Some(right),
            Unit::Suffix { .. } => None,
        }
    }

    /// Column of the right cut.
    fn right_cut(self) -> i32 {
        match self {
            Unit::Prefix { span, .. } => span,
            Unit::Middle { .. } => 2,
            Unit::Suffix { .. } => 2,
        }
    }

    /// Classes (x, y, z): the left and right cut classes, missing sides filled with spare classes.
    fn classes(self) -> (usize, usize, usize) {
        match (self.left(), self.right()) {
            (Some(l), Some(r)) => (l, r, third(l, r)),
            (Some(l), None) => (l, next(l), next(next(l))),
            (None, Some(r)) => (next(r), r, next(next(r))),
            (None, None) => (0, 1, 2),
        }
    }

    /// Row-joint glue of chain class `k` in column `col` (0 or 1).
    ///
    /// Chosen so no joint glue meets a tab or pocket face of the unit at an offset where the
    /// pieces would not collide.
    fn joint(self, k: usize, col: i32) -> Label {
        let (x, y, z) = self.classes();
        let table = [
            (label(x, RUN), label(y, RUN)),
            (label(z, BOTTOM), label(y, BOTTOM)),
            (label(z, TOP), label(y, TOP)),
        ];
        if col == 0 {
            table[k].0
        } else {
            table[k].1
        }
    }

    fn contains(self, n: i32, p: Pos) -> bool {
        if p.y < 0 || p.y >= n {
            return false;
        }
        let end_row = p.y == 0 || p.y == n - 1;
        match self {
            Unit::Prefix { span, .. } => (p.x >= 0 && p.x < span) || (end_row && p.x == span),
            Unit::Middle { .. } => {
                if end_row {
                    p.x == 1 || p.x == 2
                } else {
                    p.x == 0 || p.x == 1
                }
            }
            Unit::Suffix { .. } => p.x == 1 || (p.x == 0 && !end_row),
        }
    }

    fn cells(self, n: i32, rows: std::ops::RangeInclusive<i32>) -> Vec<Pos> {
        let mut out = Vec::new();
        for y in rows {
            for x in 0..=3 {
                let p = Pos::new(x, y);
                if self.contains(n, p) {
                    out.push(p);
                }
            }
        }
        out
    }

    fn name(self) -> String {
        match self {
            Unit::Prefix { right, .. } => format!("pre{right}"),
            Unit::Middle { left, right } => format!("mid{left}{right}"),
            Unit::Suffix { left } => format!("suf{left}"),
        }
    }

    /// Label of a face whose neighbour lies outside the unit: cut glues or null.
    fn cut_face(self, n: i32, p: Pos, side: Side) -> Label {
        let q = p.step(side);
        if q.y < 0 || q.y >= n {
            return 0;
        }
        if let Some(c) = self.left() {
            // Left of the cut at column 0: column -1 and the tab cells (0,0), (0,n-1).
            if q.x < 0 || (q.x == 0 && (q.y == 0 || q.y == n - 1)) {
                return match side {
                    Side::West if q.y == 0 => label(c, BOTTOM),
                    Side::West if q.y == n - 1 => label(c, TOP),
                    Side::South => label(c, BOTTOM),
                    Side::North => label(c, TOP),
                    _ => label(c, RUN),
                };
            }
        }
        if let Some(c) = self.right() {
            let k = self.right_cut();
            // Right of the cut: column k except its end cells, and everything east of it.
            if q.x > k || (q.x == k && q.y > 0 && q.y < n - 1) {
                return match side {
                    Side::East if p.y == 0 => label(c, BOTTOM),
                    Side::East if p.y == n - 1 => label(c, TOP),
                    Side::North => label(c, BOTTOM),
                    Side::South => label(c, TOP),
                    _ => label(c, RUN),
                };
            }
        }
        0
    }
}

/// Chain schedule for `m` rows: chunk (level, bottom class, top class) per set bit, lowest first.
fn chain(m: u32) -> (Vec<(u32, usize, usize)>, usize) {
    let mut steps = Vec::new();
    let mut p = 0;
    for l in 0..32 {
        if m >> l & 1 == 1 {
            steps.push((l, p, next(p)));
            p = next(p);
        }
    }
    (steps, p)
}

struct Builder {
    sys: StagedSystem,
    ids: Vec<GlueId>,
    n: i32,
}

impl Builder {
    fn ensure(&mut self, stage: usize) {
        while self.sys.graph.stages.len() <= stage {
            self.sys.add_stage();
        }
    }

    /// Tiles of a piece of unit `u`. `below`/`above` are the chain classes of the joints under
    /// its lowest and over its highest row, when those are row joints of the unit.
    fn piece(&mut self, u: Unit, cells: &[Pos], below: usize, above: usize) -> Vec<TileId> {
        let n = self.n;
        let set: BTreeSet<Pos> = cells.iter().copied().collect();
        let lo = cells.iter().map(|p| p.y).min().unwrap_or(0);
        let mut faces: HashMap<(Pos, Side), Label> = HashMap::new();
        let mut internal: Vec<(Pos, Side)> = Vec::new();
        for &p in cells {
            for side in Side::ALL {
                let q = p.step(side);
                if set.contains(&q) {
                    if matches!(side, Side::East | Side::North) {
                        internal.push((p, side));
                    }
                } else if u.contains(n, q) {
                    let class = if q.y < lo { below } else { above };
                    faces.insert((p, side), u.joint(class, p.x));
                } else {
                    faces.insert((p, side), u.cut_face(n, p, side));
                }
            }
        }
        // Internal edges take glues absent from the piece's faces on the same axis.
        let (x, y, z) = u.classes();
        let prefs = [
            label(z, RUN),
            label(z, BOTTOM),
            label(z, TOP),
            label(x, BOTTOM),
            label(x, TOP),
            label(x, RUN),
            label(y, RUN),
            label(y, BOTTOM),
            label(y, TOP),
        ];
        for axis in [Side::East, Side::North] {
            let on_axis = |s: Side| s == axis || s == axis.opposite();
            let mut used: BTreeSet<Label> =
                faces.iter().filter(|((_, s), _)| on_axis(*s)).map(|(_, &l)| l).collect();
            for &(p, side) in internal.iter().filter(|e| e.1 == axis) {
                let l = *prefs.iter().find(|l| !used.contains(l)).expect("enough spare glues");
                used.insert(l);
                faces.insert((p, side), l);
                faces.insert((p.step(side), side.opposite()), l);
            }
        }
        cells
            .iter()
            .map(|&p| {
                let quad = Side::ALL.map(|s| self.ids[faces[&(p, s)] as usize]);
                let name = format!("{}_{}", u.name(), self.sys.tiles.len());
                self.sys.tiles.intern(&name, quad)
            })
            .collect()
    }

    /// Builds `u` from stage 0; returns the stage and bin holding the finished unit.
    fn unit(&mut self, u: Unit) -> (usize, usize) {
        let n = self.n;
        let m = (n - 4) as u32;
        let (steps, top_class) = chain(m);
        self.ensure(0);
        let name = u.name();
        let bottom_cells = u.cells(n, 0..=1);
        let bottom = self.piece(u, &bottom_cells, 0, 0);
        let top_cells = u.cells(n, n - 2..=n - 1);
        let top = self.piece(u, &top_cells, top_class, top_class);
        let mut acc = self.sys.add_bin(0, &format!("{name}_bottom"), &[], &bottom);
        let mut cap = self.sys.add_bin(0, &format!("{name}_top"), &[], &top);
        let mut stage = 0;
        if m > 0 {
            let row = u.cells(n, 2..=2);
            let mut level: Vec<usize> = Vec::new();
            for &(b, t) in &PAIRS {
                let add = self.piece(u, &row, b, t);
                level.push(self.sys.add_bin(0, &format!("{name}_row{b}{t}"), &[], &add));
            }
            let h = 31 - m.leading_zeros();
            for l in 0..=h {
                stage += 1;
                self.ensure(stage);
                let mut from = vec![acc];
                if let Some(&(_, b, t)) = steps.iter().find(|s| s.0 == l) {
                    from.push(level[pair_index(b, t)]);
                }
                acc = self.sys.add_bin(stage, &format!("{name}_acc{l}"), &from, &[]);
                cap = self.sys.add_bin(stage, &format!("{name}_top{l}"), &[cap], &[]);
                if l < h {
                    level = PAIRS
                        .iter()
                        .map(|&(b, t)| {
                            let mid = third(b, t);
                            let from = [level[pair_index(b, mid)], level[pair_index(mid, t)]];
                            self.sys.add_bin(stage, &format!("{name}_rows{}_{b}{t}", 2 << l), &from, &[])
                        })
                        .collect();
                }
            }
        }
        stage += 1;
        self.ensure(stage);
        let done = self.sys.add_bin(stage, &name, &[acc, cap], &[]);
        (stage, done)
    }
}

/// Fully connected n×n square at temperature 1 with at most nine glues.
pub fn gen_square_jigsaw(n: u32) -> Result<StagedSystem, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::InvalidSize(format!("square side must be at least 2, got {n}")));
    }
    let name = format!("square_jigsaw_{n}");
    if n < 4 {
        // Too short for separate bottom and top caps; the plain decomposition is tiny here.
        let dec = jigsaw_decomposition(n as i32)?;
        return Ok(compile(&dec, &name, "j"));
    }
    let n = n as i32;
    let (tiles, ids) = label_tiles("j", 9);
    let mut b = Builder {
        sys: StagedSystem::new(&name, 1, tiles),
        ids,
        n,
    };
    // Columns: a prefix of span 1 or 2, middles of span 2 summing to 2q, a suffix of span 2.
    let q = ((n - 3) / 2) as u32;
    let prefix_span = n - 2 - 2 * q as i32;
    let (steps, last) = chain(q);
    let (mut stage, prefix) = b.unit(Unit::Prefix { right: 0, span: prefix_span });
    let mut level: Vec<usize> = PAIRS
        .iter()
        .map(|&(left, right)| b.unit(Unit::Middle { left, right }).1)
        .collect();
    let (_, mut suffix) = b.unit(Unit::Suffix { left: last });
    let mut acc = prefix;
    if q > 0 {
        let h = 31 - q.leading_zeros();
        for l in 0..=h {
            stage += 1;
            b.ensure(stage);
            let mut from = vec![acc];
            if let Some(&(_, x, y)) = steps.iter().find(|s| s.0 == l) {
                from.push(level[pair_index(x, y)]);
            }
            acc = b.sys.add_bin(stage, &format!("acc{l}"), &from, &[]);
            suffix = b.sys.add_bin(stage, &format!("suffix{l}"), &[suffix], &[]);
            if l < h {
                level = PAIRS
                    .iter()
                    .map(|&(x, z)| {
                        let y = third(x, z);
                        let from = [level[pair_index(x, y)], level[pair_index(y, z)]];
                        b.sys.add_bin(stage, &format!("span{}_{x}{z}", 4 << l), &from, &[])
                    })
                    .collect();
            }
        }
    }
    stage += 1;
    b.ensure(stage);
    let out = b.sys.add_bin(stage, "square", &[acc, suffix], &[]);
    b.sys.set_output(&[out]);
    Ok(b.sys)
}
