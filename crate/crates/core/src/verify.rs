//! Connectivity, planarity and shape checks on assembled supertiles.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::assembly::{is_connected, Placement, Pos, Side, Supertile, TileSet};
use crate::engine::BinResult;

/// A canonical set of grid cells (minimum coordinates are zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    cells: BTreeSet<Pos>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("shape has no cells")]
    Empty,
    #[error("shape is not 4-connected")]
    Disconnected,
}

impl Shape {
    pub fn new<I: IntoIterator<Item = Pos>>(cells: I) -> Result<Self, ShapeError> {
        let cells: Vec<Pos> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(ShapeError::Empty);
        }
        if !is_connected(cells.iter().copied()) {
            return Err(ShapeError::Disconnected);
        }
        Ok(Self::normalized(cells))
    }

    fn normalized(cells: Vec<Pos>) -> Self {
        let mx = cells.iter().map(|p| p.x).min().unwrap_or(0);
        let my = cells.iter().map(|p| p.y).min().unwrap_or(0);
        Shape {
            cells: cells.into_iter().map(|p| Pos::new(p.x - mx, p.y - my)).collect(),
        }
    }

    pub fn of_supertile(s: &Supertile) -> Self {
        Self::normalized(s.positions().collect())
    }

    pub fn rectangle(width: i32, height: i32) -> Self {
        let cells = (0..width).flat_map(|x| (0..height).map(move |y| Pos::new(x, y))).collect();
        Self::normalized(cells)
    }

    pub fn line(n: i32) -> Self {
        Self::rectangle(n, 1)
    }

    pub fn cells(&self) -> &BTreeSet<Pos> {
        &self.cells
    }

    pub fn contains(&self, p: Pos) -> bool {
        self.cells.contains(&p)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dims(&self) -> (i32, i32) {
        let w = self.cells.iter().map(|p| p.x).max().unwrap_or(-1) + 1;
        let h = self.cells.iter().map(|p| p.y).max().unwrap_or(-1) + 1;
        (w, h)
    }

    /// Each cell replaced by a `scale`×`scale` block.
    pub fn scaled(&self, scale: i32) -> Shape {
        let mut cells = BTreeSet::new();
        for p in &self.cells {
            for dx in 0..scale {
                for dy in 0..scale {
                    cells.insert(Pos::new(p.x * scale + dx, p.y * scale + dy));
                }
            }
        }
        Shape { cells }
    }

    /// Number of 4-adjacent cell pairs.
    pub fn adjacency_count(&self) -> usize {
        self.cells
            .iter()
            .map(|&p| [Side::East, Side::North].iter().filter(|s| self.contains(p.step(**s))).count())
            .sum()
    }

    /// Whether the 4-adjacency graph contains a cycle.
    pub fn has_cycle(&self) -> bool {
        self.adjacency_count() >= self.len()
    }

    /// Longest shortest path between cells in the adjacency graph.
    pub fn diameter(&self) -> usize {
        self.cells.iter().map(|&p| self.eccentricity(p)).max().unwrap_or(0)
    }

    fn eccentricity(&self, from: Pos) -> usize {
        let mut dist = std::collections::HashMap::from([(from, 0usize)]);
        let mut q = VecDeque::from([from]);
        let mut far = 0;
        while let Some(p) = q.pop_front() {
            let d = dist[&p];
            far = far.max(d);
            for s in Side::ALL {
                let n = p.step(s);
                if self.contains(n) && !dist.contains_key(&n) {
                    dist.insert(n, d + 1);
                    q.push_back(n);
                }
            }
        }
        far
    }

    /// Hole-free: the complement is connected to the outside.
    pub fn is_simply_connected(&self) -> bool {
        let (w, h) = self.dims();
        let mut seen = HashSet::new();
        let start = Pos::new(-1, -1);
        seen.insert(start);
        let mut q = VecDeque::from([start]);
        while let Some(p) = q.pop_front() {
            for s in Side::ALL {
                let n = p.step(s);
                if n.x < -1 || n.y < -1 || n.x > w || n.y > h || self.contains(n) || !seen.insert(n) {
                    continue;
                }
                q.push_back(n);
            }
        }
        let empties = ((w + 2) * (h + 2)) as usize - self.len();
        seen.len() == empties
    }

    /// Every column meets the shape in one contiguous run.
    pub fn is_x_monotone(&self) -> bool {
        let (w, _) = self.dims();
        (0..w).all(|x| {
            let ys: Vec<i32> = self.cells.iter().filter(|p| p.x == x).map(|p| p.y).collect();
            !ys.is_empty() && ys.windows(2).all(|p| p[1] == p[0] + 1)
        })
    }
}

/// True iff `b` is `a` scaled by `scale`, up to translation.
pub fn shape_equals(a: &Shape, b: &Shape, scale: i32) -> bool {
    scale >= 1 && a.scaled(scale) == *b
}

/// Every pair of adjacent tiles shares an equal positive-strength glue.
pub fn is_fully_connected(s: &Supertile, tiles: &TileSet) -> bool {
    s.cells().iter().all(|&(p, t)| {
        [Side::East, Side::North].into_iter().all(|side| match s.get(p.step(side)) {
            None => true,
            Some(u) => tiles.glues.bond(tiles.glue(t, side), tiles.glue(u, side.opposite())) >= 1,
        })
    })
}

/// Internal edges (between adjacent occupied cells) whose facing glues do not bond.
pub fn unbonded_edges(s: &Supertile, tiles: &TileSet) -> usize {
    s.cells()
        .iter()
        .map(|&(p, t)| {
            [Side::East, Side::North]
                .into_iter()
                .filter(|&side| match s.get(p.step(side)) {
                    None => false,
                    Some(u) => tiles.glues.bond(tiles.glue(t, side), tiles.glue(u, side.opposite())) == 0,
                })
                .count()
        })
        .sum()
}

/// One recorded combination step.
#[derive(Debug, Clone)]
pub struct AttachmentEvent {
    pub left: Supertile,
    pub right: Supertile,
    pub placement: Placement,
    pub result: Supertile,
}

/// Whether `right` can slide from its attached placement to infinity by unit axis moves without
/// ever overlapping `left`.
pub fn is_planar_attachment(e: &AttachmentEvent) -> bool {
    can_escape(
        &e.left.positions().collect::<Vec<_>>(),
        &e.right.positions().collect::<Vec<_>>(),
        e.placement.offset,
    )
}

/// BFS over offsets of `mover` relative to `fixed`.
pub fn can_escape(fixed: &[Pos], mover: &[Pos], start: Pos) -> bool {
    let occupied: HashSet<Pos> = fixed.iter().copied().collect();
    let bbox = |cells: &[Pos]| {
        let x0 = cells.iter().map(|p| p.x).min().unwrap_or(0);
        let x1 = cells.iter().map(|p| p.x).max().unwrap_or(0);
        let y0 = cells.iter().map(|p| p.y).min().unwrap_or(0);
        let y1 = cells.iter().map(|p| p.y).max().unwrap_or(0);
        (x0, x1, y0, y1)
    };
    let (fx0, fx1, fy0, fy1) = bbox(fixed);
    let (mx0, mx1, my0, my1) = bbox(mover);
    let collides = |o: Pos| mover.iter().any(|&p| occupied.contains(&(p + o)));
    if collides(start) {
        return false;
    }
    // Separated once the mover's box clears the fixed box inflated by one.
    let separated = |o: Pos| {
        mx1 + o.x < fx0 - 1 || mx0 + o.x > fx1 + 1 || my1 + o.y < fy0 - 1 || my0 + o.y > fy1 + 1
    };
    let span = ((fx1 - fx0).max(fy1 - fy0)).max((mx1 - mx0).max(my1 - my0)) + 1;
    let lo_x = fx0 - mx1 - span - 1;
    let hi_x = fx1 - mx0 + span + 1;
    let lo_y = fy0 - my1 - span - 1;
    let hi_y = fy1 - my0 + span + 1;
    let mut seen = HashSet::from([start]);
    let mut q = VecDeque::from([start]);
    while let Some(o) = q.pop_front() {
        if separated(o) {
            return true;
        }
        for s in Side::ALL {
            let n = o.step(s);
            if n.x < lo_x || n.x > hi_x || n.y < lo_y || n.y > hi_y || seen.contains(&n) {
                continue;
            }
            seen.insert(n);
            if !collides(n) {
                q.push_back(n);
            }
        }
    }
    false
}

/// Planar iff every event in the witness trace is a planar attachment.
pub fn is_planar_system(trace: &[AttachmentEvent]) -> bool {
    trace.iter().all(is_planar_attachment)
}

/// The witness derivation of `result.produced[target]` as attachment events, leaves first.
pub fn derivation_events(result: &BinResult, target: usize) -> Vec<AttachmentEvent> {
    let mut out = Vec::new();
    let mut stack = vec![(target, false)];
    let mut done = HashSet::new();
    while let Some((k, expanded)) = stack.pop() {
        let Some(d) = result.derivations[k] else { continue };
        if expanded {
            if done.insert(k) {
                out.push(AttachmentEvent {
                    left: result.produced[d.left].clone(),
                    right: result.produced[d.right].clone(),
                    placement: d.placement,
                    result: result.produced[k].clone(),
                });
            }
        } else {
            stack.push((k, true));
            stack.push((d.left, false));
            stack.push((d.right, false));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn scaling_equalities() {
        let domino = Shape::line(2);
        assert!(shape_equals(&domino, &domino, 1));
        assert!(shape_equals(&domino, &Shape::rectangle(4, 2), 2));
        let l = shape(&["#.", "##"]);
        let j = shape(&[".#", "##"]);
        let l2 = shape(&["##..", "##..", "####", "####"]);
        assert!(shape_equals(&l, &l2, 2));
        assert!(!shape_equals(&j, &l2, 2));
        assert!(shape_equals(&j, &j.scaled(2), 2));
    }

    #[test]
    fn holes_and_monotonicity() {
        let ring = shape(&["###", "#.#", "###"]);
        assert!(!ring.is_simply_connected());
        assert!(ring.has_cycle());
        let u = shape(&["#.#", "###"]);
        assert!(u.is_simply_connected());
        assert!(!u.has_cycle());
        assert!(u.is_x_monotone());
        assert!(!shape(&["##", "#.", "##"]).is_x_monotone());
        assert!(shape(&["##.", "###"]).is_x_monotone());
        assert_eq!(Shape::line(5).diameter(), 4);
    }

    #[test]
    fn sliding_lines_apart_is_planar() {
        let left: Vec<Pos> = (0..3).map(|x| Pos::new(x, 0)).collect();
        let right: Vec<Pos> = (0..2).map(|x| Pos::new(x, 0)).collect();
        assert!(can_escape(&left, &right, Pos::new(3, 0)));
        assert!(can_escape(&right, &left, Pos::new(-3, 0)));
    }

    #[test]
    fn plug_in_open_c_escapes() {
        // C opening east; a single-cell plug in the mouth slides out eastwards.
        let c: Vec<Pos> = [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (1, 2), (2, 2)]
            .iter()
            .map(|&(x, y)| Pos::new(x, y))
            .collect();
        assert!(can_escape(&c, &[Pos::new(0, 0)], Pos::new(1, 1)));
    }

    #[test]
    fn t_locked_behind_slit_is_trapped() {
        // Box with a one-cell slit at (3, 2); the T's bar is inside, its stem pokes out.
        let boxy: Vec<Pos> = [
            (0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (0, 2), (0, 3), (0, 4),
            (1, 4), (2, 4), (3, 4), (3, 1), (3, 3),
        ]
        .iter()
        .map(|&(x, y)| Pos::new(x, y))
        .collect();
        let t: Vec<Pos> = [(0, 0), (0, 1), (0, -1), (1, 0), (2, 0)].iter().map(|&(x, y)| Pos::new(x, y)).collect();
        assert!(!can_escape(&boxy, &t, Pos::new(2, 2)));
        assert!(!can_escape(&t, &boxy, Pos::new(-2, -2)));
    }
}
