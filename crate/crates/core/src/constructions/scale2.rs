//! Hole-free shapes at scale factor 2 with eight glues and full connectivity.
//!
//! The scaled shape is cut into horizontal strips (two rows each). Strips adjacent along a
//! horizontal edge form a tree; each contact becomes a jigsaw site where the upper strip's bottom
//! row grows a one-row tab into the lower strip's top row, covering every contact column but the
//! first and the last, so both pocket walls belong to the lower strip and a seated tab cannot slide.
//! A one-cell contact has no tab; its two edges carry different glues. Strips are built column by column, each column in its own bin, and a child subtree is
//! mixed in as soon as its site is complete.
//!
//! Glues, numbered 1–8, are shared between the two orientations:
//! - east–west edges inside a strip carry one of six column glues chosen by column parity and row,
//!   so a new column only fits against the current end of the strip;
//! - the two vertical edges at the ends of a tab carry glues 7 and 8, left and right swapped
//!   between a strip's top and bottom sites and between consecutive tree depths;
//! - north–south edges across a site carry one of three glues (left wall, right wall, tab floor),
//!   from one of two triples selected by the lower strip's depth parity, so a strip's top and
//!   bottom sites never share a glue;
//! - north–south edges inside a column take any two glues not already on the column's ends.
//!
//! A strip is grown rightwards up to the right flank of its parent site and leftwards from its far
//! end, then the halves are joined; a child on the parent's side therefore never sees the parent
//! site open, and a child straddling the join is mixed last.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::assembly::{GlueId, GlueTable, Pos, Side, TileId, TileSet};
use crate::staged::StagedSystem;
use crate::verify::Shape;

use super::ConstructionError;

/// A maximal horizontal run of cells `a..=b` in row `y` of the unscaled shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strip {
    pub y: i32,
    pub a: i32,
    pub b: i32,
}

/// Strips, their tree links and the contact interval of every link.
#[derive(Debug, Clone)]
pub struct StripTree {
    pub strips: Vec<Strip>,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    pub children: Vec<Vec<usize>>,
}

impl StripTree {
    /// Overlap `(l, r)` of two adjacent strips in unscaled columns.
    pub fn contact(&self, s: usize, t: usize) -> (i32, i32) {
        let (p, q) = (self.strips[s], self.strips[t]);
        (p.a.max(q.a), p.b.min(q.b))
    }
}

pub fn strip_tree(shape: &Shape) -> Result<StripTree, ConstructionError> {
    if !shape.is_simply_connected() {
        return Err(ConstructionError::NotSimplyConnected);
    }
    let mut strips = Vec::new();
    let mut cells = shape.cells().iter().copied().collect::<Vec<_>>();
    cells.sort_by_key(|p| (p.y, p.x));
    for p in cells {
        match strips.last_mut() {
            Some(Strip { y, b, .. }) if *y == p.y && *b + 1 == p.x => *b = p.x,
            _ => strips.push(Strip { y: p.y, a: p.x, b: p.x }),
        }
    }
    let n = strips.len();
    let mut adj = vec![Vec::new(); n];
    let mut links = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (s, t) = (strips[i], strips[j]);
            if (s.y - t.y).abs() == 1 && s.a.max(t.a) <= s.b.min(t.b) {
                adj[i].push(j);
                adj[j].push(i);
                links += 1;
            }
        }
    }
    if links + 1 != n {
        return Err(ConstructionError::NotSimplyConnected);
    }
    // Strips are sorted bottom-to-top, left-to-right, so index 0 is the bottommost-leftmost.
    let root = 0;
    let mut parent = vec![None; n];
    let mut depth = vec![0; n];
    let mut children = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(s) = queue.pop_front() {
        for &t in &adj[s] {
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some(s);
                depth[t] = depth[s] + 1;
                children[s].push(t);
                queue.push_back(t);
            }
        }
    }
    Ok(StripTree {
        strips,
        root,
        parent,
        depth,
        children,
    })
}

/// Glue number (1..=8) or 0 for null on every face of every scaled cell, plus cell ownership.
struct Layout {
    owner: HashMap<Pos, usize>,
    faces: HashMap<(Pos, Side), u8>,
}

fn layout(tree: &StripTree) -> Layout {
    let mut owner = HashMap::new();
    for (i, s) in tree.strips.iter().enumerate() {
        for x in 2 * s.a..=2 * s.b + 1 {
            for y in [2 * s.y, 2 * s.y + 1] {
                owner.insert(Pos::new(x, y), i);
            }
        }
    }
    // Tabs: the upper strip takes the lower strip's top-row cells right of the contact's first column.
    let mut tab = BTreeSet::new();
    let mut links: Vec<(usize, usize)> = Vec::new();
    for (c, p) in tree.parent.iter().enumerate() {
        if let Some(p) = *p {
            let (upper, lower) = if tree.strips[c].y > tree.strips[p].y { (c, p) } else { (p, c) };
            links.push((upper, lower));
        }
    }
    let mut site: HashMap<Pos, (usize, usize)> = HashMap::new();
    for &(upper, lower) in &links {
        let (l, r) = tree.contact(upper, lower);
        let row = 2 * tree.strips[upper].y - 1;
        for x in 2 * l + 1..=2 * r {
            owner.insert(Pos::new(x, row), upper);
            tab.insert(Pos::new(x, row));
        }
        for x in 2 * l..=2 * r + 1 {
            site.insert(Pos::new(x, row), (upper, lower));
        }
    }
    let mut faces = HashMap::new();
    for (&p, &o) in &owner {
        let s = tree.strips[o];
        for side in Side::ALL {
            let q = p.step(side);
            let label = match owner.get(&q) {
                None => 0,
                Some(&o2) if o2 == o => match side {
                    // Column glues; north–south edges inside a column are filled in per column.
                    Side::East | Side::West => {
                        let x = p.x.min(q.x);
                        1 + 3 * x.rem_euclid(2) as u8 + (p.y - (2 * s.y - 1)) as u8
                    }
                    Side::North | Side::South => continue,
                },
                Some(_) => match side {
                    Side::East | Side::West => {
                        let (west, east) = if side == Side::East { (p, q) } else { (q, p) };
                        let (_, lower) = site[&west];
                        debug_assert_eq!(site[&west], site[&east]);
                        // Left end when the tab cell is the eastern one.
                        let left = tab.contains(&east);
                        7 + ((tree.depth[lower] + usize::from(!left)) % 2) as u8
                    }
                    Side::North | Side::South => {
                        let (hi, lo) = if side == Side::North { (q, p) } else { (p, q) };
                        let (upper, lower) = (owner[&hi], owner[&lo]);
                        let (l, r) = tree.contact(upper, lower);
                        let base = 3 * (tree.depth[lower] % 2) as u8;
                        base + if p.x == 2 * l {
                            1
                        } else if p.x == 2 * r + 1 {
                            2
                        } else {
                            3
                        }
                    }
                },
            };
            faces.insert((p, side), label);
        }
    }
    Layout { owner, faces }
}

#[derive(Clone, Copy)]
struct Handle {
    stage: usize,
    bin: usize,
}

struct Builder {
    sys: StagedSystem,
    ids: Vec<GlueId>,
    tree: StripTree,
    layout: Layout,
}

impl Builder {
    fn ensure(&mut self, stage: usize) {
        while self.sys.graph.stages.len() <= stage {
            self.sys.add_stage();
        }
    }

    fn bin(&mut self, stage: usize, from: &[usize], add: &[TileId]) -> Handle {
        self.ensure(stage);
        let name = format!("b{}", self.sys.graph.stages[stage].len());
        let bin = self.sys.add_bin(stage, &name, from, add);
        Handle { stage, bin }
    }

    fn carry(&mut self, mut h: Handle, to: usize) -> Handle {
        while h.stage < to {
            h = self.bin(h.stage + 1, &[h.bin], &[]);
        }
        h
    }

    fn mix(&mut self, a: Handle, b: Handle) -> Handle {
        let t = a.stage.max(b.stage) + 1;
        let a = self.carry(a, t - 1);
        let b = self.carry(b, t - 1);
        self.bin(t, &[a.bin, b.bin], &[])
    }

    /// Tiles of column `x` of strip `s`, bottom to top.
    fn column(&mut self, s: usize, x: i32) -> Vec<TileId> {
        let y = self.tree.strips[s].y;
        let cells: Vec<Pos> = (2 * y - 1..=2 * y + 1)
            .map(|r| Pos::new(x, r))
            .filter(|p| self.layout.owner.get(p) == Some(&s))
            .collect();
        let bottom = self.layout.faces[&(cells[0], Side::South)];
        let top = self.layout.faces[&(cells[cells.len() - 1], Side::North)];
        let mut spare = (1..=8u8).filter(|g| *g != bottom && *g != top);
        for w in cells.windows(2) {
            let g = spare.next().expect("two spare glues");
            self.layout.faces.insert((w[0], Side::North), g);
            self.layout.faces.insert((w[1], Side::South), g);
        }
        cells
            .iter()
            .map(|&p| {
                let labels = Side::ALL.map(|side| self.layout.faces[&(p, side)]);
                let name: String = labels.iter().map(|g| char::from(b'0' + g)).collect();
                self.sys.tiles.intern(&format!("t{name}"), labels.map(|g| self.ids[g as usize]))
            })
            .collect()
    }

    fn add_column(&mut self, partial: Option<Handle>, s: usize, x: i32) -> Handle {
        let tiles = self.column(s, x);
        match partial {
            None => self.bin(0, &[], &tiles),
            Some(p) => {
                let col = self.bin(p.stage, &[], &tiles);
                self.bin(p.stage + 1, &[p.bin, col.bin], &[])
            }
        }
    }

    /// Grows columns `xs` in order, mixing in each child whose site is complete at that column.
    fn grow(&mut self, s: usize, xs: &[i32], sites: &mut Vec<(usize, i32, i32)>, ready: &HashMap<usize, Handle>, rightward: bool) -> Option<Handle> {
        let mut partial = None;
        for &x in xs {
            partial = Some(self.add_column(partial, s, x));
            let done: Vec<(usize, i32, i32)> = sites
                .iter()
                .copied()
                .filter(|&(_, lo, hi)| (if rightward { hi } else { lo }) == x && xs.contains(&lo) && xs.contains(&hi))
                .collect();
            sites.retain(|site| !done.contains(site));
            for (c, _, _) in done {
                partial = Some(self.mix(partial.unwrap(), ready[&c]));
            }
        }
        partial
    }

    fn build(&mut self, s: usize) -> Handle {
        let kids = self.tree.children[s].clone();
        let mut ready = HashMap::new();
        let mut sites = Vec::new();
        for &c in &kids {
            ready.insert(c, self.build(c));
            let (l, r) = self.tree.contact(s, c);
            sites.push((c, 2 * l, 2 * r + 1));
        }
        // Children above first when two sites end on the same column.
        sites.sort_by_key(|&(c, _, _)| std::cmp::Reverse(self.tree.strips[c].y));
        let strip = self.tree.strips[s];
        let end = 2 * strip.b + 1;
        let split = match self.tree.parent[s] {
            Some(p) => 2 * self.tree.contact(s, p).1 + 1,
            None => end,
        };
        let left: Vec<i32> = (2 * strip.a..=split).collect();
        let right: Vec<i32> = (split + 1..=end).rev().collect();
        let mut h = self.grow(s, &left, &mut sites, &ready, true).expect("non-empty strip");
        if !right.is_empty() {
            let r = self.grow(s, &right, &mut sites, &ready, false).expect("non-empty part");
            h = self.mix(h, r);
        }
        for (c, _, _) in sites {
            h = self.mix(h, ready[&c]);
        }
        h
    }
}

/// A staged system assembling `shape` scaled by two, fully connected at temperature 1.
pub fn gen_scale2(shape: &Shape) -> Result<StagedSystem, ConstructionError> {
    let tree = strip_tree(shape)?;
    let layout = layout(&tree);
    let mut glues = GlueTable::new();
    let mut ids = vec![GlueId::NULL];
    for g in 1..=8 {
        ids.push(glues.declare(&format!("g{g}"), 1).expect("fresh glue"));
    }
    let (w, h) = shape.dims();
    let mut b = Builder {
        sys: StagedSystem::new(&format!("scale2_{w}x{h}_{}", shape.len()), 1, TileSet::new(glues)),
        ids,
        tree,
        layout,
    };
    let root = b.tree.root;
    let out = b.build(root);
    b.sys.set_output(&[out.bin]);
    // The output must sit in the last stage.
    let last = b.sys.graph.stages.len() - 1;
    if out.stage < last {
        let out = b.carry(out, last);
        b.sys.set_output(&[out.bin]);
    }
    Ok(b.sys)
}
