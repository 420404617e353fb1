//! Arbitrary shapes glued along a two-colored breadth-first spanning tree.
//!
//! Tree edges carry one of two glues and all other edges are null. A subtree's only exposed glue
//! is its root's parent edge, so mixing a node's tile with its finished child subtrees assembles
//! the node's subtree uniquely, provided no tile carries the same glue on opposite sides: such a
//! tile would bond to its own copies, and two children on opposite sides could bond to each other.
//! Colouring by tree depth alone breaks this at nodes with children on opposite sides, so the two
//! glues alternate along every straight run of tree edges instead. Subtrees are built in postorder, larger children first, while finished
//! siblings are carried forward one bin each; this keeps O(log n) bins live.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::assembly::{GlueId, GlueTable, Pos, Side, TileId, TileSet};
use crate::staged::StagedSystem;
use crate::verify::Shape;

const COLORS: [&str; 2] = ["w", "b"];
const RESTARTS: usize = 16;
/// Tile count the source search aims for.
pub const MAX_TILES: usize = 16;

/// A tree edge, keyed by its lower cell and axis (East for horizontal, North for vertical).
type Edge = (Pos, Side);

type Rooted = (SpanningTree, BTreeMap<Edge, usize>);

/// (uses a single glue although it could use two, distinct tiles, tie-break).
type Score = (bool, usize, std::cmp::Reverse<usize>);

fn edge(a: Pos, b: Pos) -> Edge {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    (lo, if hi.x > lo.x { Side::East } else { Side::North })
}

/// The rooted spanning tree: parent links and children in build order.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub root: Pos,
    pub parent: BTreeMap<Pos, Pos>,
    pub children: BTreeMap<Pos, Vec<Pos>>,
    pub depth: BTreeMap<Pos, usize>,
    pub size: BTreeMap<Pos, usize>,
}

/// Neighbours one BFS level closer to the smallest cell, for every other cell.
fn bfs_parents(shape: &Shape, source: Pos) -> BTreeMap<Pos, Vec<Pos>> {
    let cells = shape.cells();
    let mut dist = BTreeMap::from([(source, 0usize)]);
    let mut queue = VecDeque::from([source]);
    while let Some(p) = queue.pop_front() {
        for side in Side::ALL {
            let q = p.step(side);
            if cells.contains(&q) && !dist.contains_key(&q) {
                dist.insert(q, dist[&p] + 1);
                queue.push_back(q);
            }
        }
    }
    cells
        .iter()
        .filter(|&&p| p != source)
        .map(|&p| {
            let ups = Side::ALL
                .into_iter()
                .map(|s| p.step(s))
                .filter(|q| dist.get(q).is_some_and(|&d| d + 1 == dist[&p]))
                .collect();
            (p, ups)
        })
        .collect()
}

/// Roots the tree with edge set `edges` at its smallest leaf.
fn rooted(shape: &Shape, edges: &BTreeSet<Edge>) -> SpanningTree {
    let cells = shape.cells();
    let mut adj: BTreeMap<Pos, Vec<Pos>> = cells.iter().map(|&p| (p, Vec::new())).collect();
    for &(p, axis) in edges {
        adj.get_mut(&p).unwrap().push(p.step(axis));
        adj.get_mut(&p.step(axis)).unwrap().push(p);
    }
    let root = adj
        .iter()
        .find(|(_, n)| n.len() <= 1)
        .map(|(&p, _)| p)
        .expect("a tree has a leaf");
    let mut parent = BTreeMap::new();
    let mut depth = BTreeMap::from([(root, 0)]);
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let p = order[i];
        i += 1;
        for &q in &adj[&p] {
            if !depth.contains_key(&q) {
                depth.insert(q, depth[&p] + 1);
                parent.insert(q, p);
                order.push(q);
            }
        }
    }
    let mut size: BTreeMap<Pos, usize> = cells.iter().map(|&p| (p, 1)).collect();
    for &p in order.iter().rev() {
        if let Some(&up) = parent.get(&p) {
            *size.get_mut(&up).unwrap() += size[&p];
        }
    }
    let mut children: BTreeMap<Pos, Vec<Pos>> = cells.iter().map(|&p| (p, Vec::new())).collect();
    for (&c, &p) in &parent {
        children.get_mut(&p).unwrap().push(c);
    }
    for kids in children.values_mut() {
        kids.sort_by(|a, b| size[b].cmp(&size[a]).then(a.cmp(b)));
    }
    SpanningTree {
        root,
        parent,
        children,
        depth,
        size,
    }
}

/// A BFS tree re-rooted at its smallest leaf, with its edge glues.
///
/// Where a cell has several neighbours one level closer to the source, the parent is chosen by
/// local search to reduce the number of distinct tiles. Sources are tried in cell order until the
/// tile count is at most [`MAX_TILES`]; otherwise the best tree found is used.
pub fn spanning_tree(shape: &Shape) -> (SpanningTree, BTreeMap<Edge, usize>) {
    let mut best: Option<(usize, Rooted)> = None;
    for &source in shape.cells() {
        let found = spanning_tree_from(shape, source);
        let tiles = tile_quads(shape, &found.1).values().collect::<BTreeSet<_>>().len();
        if tiles <= MAX_TILES {
            return found;
        }
        if best.as_ref().is_none_or(|b| tiles < b.0) {
            best = Some((tiles, found));
        }
    }
    best.expect("non-empty shape").1
}

fn spanning_tree_from(shape: &Shape, source: Pos) -> (SpanningTree, BTreeMap<Edge, usize>) {
    let ups = bfs_parents(shape, source);
    let mut choice: BTreeMap<Pos, usize> = ups.keys().map(|&p| (p, 0)).collect();
    let edges_of = |choice: &BTreeMap<Pos, usize>| -> BTreeSet<Edge> {
        choice.iter().map(|(&p, &i)| edge(p, ups[&p][i])).collect()
    };
    let mut best = edge_glues(shape, &edges_of(&choice), 4).0;
    loop {
        let mut improved = false;
        for (&p, options) in &ups {
            for i in 0..options.len() {
                let old = choice[&p];
                if i == old {
                    continue;
                }
                choice.insert(p, i);
                let c = edge_glues(shape, &edges_of(&choice), 4).0;
                if c < best {
                    best = c;
                    improved = true;
                } else {
                    choice.insert(p, old);
                }
            }
        }
        if !improved {
            break;
        }
    }
    let edges = edges_of(&choice);
    let (_, glues) = edge_glues(shape, &edges, RESTARTS);
    (rooted(shape, &edges), glues)
}

/// Maximal straight runs of tree edges.
fn runs(edges: &BTreeSet<Edge>) -> Vec<Vec<Edge>> {
    let mut out = Vec::new();
    for &(p, axis) in edges {
        if edges.contains(&(p.step(axis.opposite()), axis)) {
            continue;
        }
        let mut run = Vec::new();
        let mut q = p;
        while edges.contains(&(q, axis)) {
            run.push((q, axis));
            q = q.step(axis);
        }
        out.push(run);
    }
    out
}

/// Glue (0 or 1) of every tree edge, and the resulting number of distinct tiles.
///
/// Both glues are used whenever the tree has two edges. Glues alternate along each run, so a tile never carries one glue on opposite sides and cannot
/// bond to its own copies; the starting glue of each run is chosen by hill climbing from a few
/// deterministic starting points.
fn edge_glues(shape: &Shape, edges: &BTreeSet<Edge>, restarts: usize) -> (Score, BTreeMap<Edge, usize>) {
    let runs = runs(edges);
    let assign = |flips: &[bool]| -> BTreeMap<Edge, usize> {
        let mut g = BTreeMap::new();
        for (run, &f) in runs.iter().zip(flips) {
            for (i, &e) in run.iter().enumerate() {
                g.insert(e, (i + f as usize) % 2);
            }
        }
        g
    };
    let count = |flips: &[bool]| {
        let g = assign(flips);
        let mono = edges.len() >= 2 && g.values().all(|&c| c == g.values().next().copied().unwrap_or(0));
        let (tiles, tie) = score(&tile_quads(shape, &g));
        (mono, tiles, tie)
    };
    let mut best: Option<(Score, Vec<bool>)> = None;
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    for restart in 0..restarts {
        let mut flips: Vec<bool> = (0..runs.len())
            .map(|_| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                restart > 0 && seed & 1 == 1
            })
            .collect();
        let mut cur = count(&flips);
        loop {
            let mut improved = false;
            for i in 0..flips.len() {
                flips[i] = !flips[i];
                let c = count(&flips);
                if c < cur {
                    cur = c;
                    improved = true;
                } else {
                    flips[i] = !flips[i];
                }
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| cur < b.0) {
            best = Some((cur, flips));
        }
    }
    let (n, flips) = best.unwrap_or_default();
    (n, assign(&flips))
}

/// Distinct tiles, ties broken towards fewer cells on rare tiles (a larger sum of squared type
/// frequencies), which gives the hill climbing a gradient across plateaus.
fn score(quads: &BTreeMap<Pos, [Option<usize>; 4]>) -> (usize, std::cmp::Reverse<usize>) {
    let mut freq: BTreeMap<&[Option<usize>; 4], usize> = BTreeMap::new();
    for q in quads.values() {
        *freq.entry(q).or_default() += 1;
    }
    (freq.len(), std::cmp::Reverse(freq.values().map(|f| f * f).sum()))
}

/// Per-cell side glues: None for null, Some(0 | 1) for the two colors.
fn tile_quads(shape: &Shape, glue: &BTreeMap<Edge, usize>) -> BTreeMap<Pos, [Option<usize>; 4]> {
    shape
        .cells()
        .iter()
        .map(|&p| {
            let mut quad = [None; 4];
            for s in Side::ALL {
                let key = match s {
                    Side::East | Side::North => (p, s),
                    Side::West => (p.step(s), Side::East),
                    Side::South => (p.step(s), Side::North),
                };
                quad[s.index()] = glue.get(&key).copied();
            }
            (p, quad)
        })
        .collect()
}

struct Builder {
    sys: StagedSystem,
    tree: SpanningTree,
    tile: BTreeMap<Pos, TileId>,
}

impl Builder {
    fn ensure(&mut self, stage: usize) {
        while self.sys.graph.stages.len() <= stage {
            self.sys.add_stage();
        }
    }

    fn carry(&mut self, (mut stage, mut bin): (usize, usize), to: usize) -> (usize, usize) {
        while stage < to {
            stage += 1;
            self.ensure(stage);
            let name = format!("carry{}", self.sys.graph.stages[stage].len());
            bin = self.sys.add_bin(stage, &name, &[bin], &[]);
        }
        (stage, bin)
    }

    /// Builds the subtree of `v` starting at `start`; returns where it ends up.
    fn build(&mut self, v: Pos, start: usize) -> (usize, usize) {
        let kids = self.tree.children[&v].clone();
        let mut add = vec![self.tile[&v]];
        let mut held: Vec<(usize, usize)> = Vec::new();
        let mut cur = start;
        for c in kids {
            if self.tree.size[&c] == 1 {
                add.push(self.tile[&c]);
                continue;
            }
            let done = self.build(c, cur);
            held = held.into_iter().map(|h| self.carry(h, done.0)).collect();
            held.push(done);
            cur = done.0;
        }
        let stage = if held.is_empty() { start } else { cur + 1 };
        self.ensure(stage);
        let from: Vec<usize> = held.iter().map(|h| h.1).collect();
        let bin = self.sys.add_bin(stage, &format!("t{}_{}", v.x, v.y), &from, &add);
        (stage, bin)
    }
}

/// A staged system assembling `shape` at temperature 1 with two glues.
pub fn gen_spanning_tree(shape: &Shape) -> StagedSystem {
    let (tree, edge_glue) = spanning_tree(shape);
    let mut glues = GlueTable::new();
    let ids: Vec<GlueId> = COLORS.iter().map(|c| glues.declare(c, 1).expect("fresh glue")).collect();
    let mut tiles = TileSet::new(glues);
    let mut tile = BTreeMap::new();
    for (p, quad) in tile_quads(shape, &edge_glue) {
        let glues = quad.map(|g| g.map_or(GlueId::NULL, |g| ids[g]));
        let pattern: String = quad.iter().map(|g| g.map_or('-', |g| COLORS[g].chars().next().unwrap())).collect();
        tile.insert(p, tiles.intern(&format!("t{pattern}"), glues));
    }
    let (w, h) = shape.dims();
    let mut b = Builder {
        sys: StagedSystem::new(&format!("spanning_tree_{w}x{h}_{}", shape.len()), 1, tiles),
        tree,
        tile,
    };
    let root = b.tree.root;
    let (_, out) = b.build(root, 0);
    b.sys.set_output(&[out]);
    b.sys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{uniquely_assembles_shape, ClosureBudget};
    use crate::staged::{execute, metrics, validate};
    use crate::verify::is_fully_connected;
    use crate::testutil::random_polyomino;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn check(shape: &Shape) -> (usize, usize, usize) {
        let sys = gen_spanning_tree(shape);
        assert!(validate(&sys).is_empty(), "{:?}", validate(&sys));
        let ex = execute(&sys, ClosureBudget::for_target(shape.len())).unwrap();
        assert!(uniquely_assembles_shape(&ex.output, shape));
        assert_eq!(
            is_fully_connected(&ex.output.terminal[0], &sys.tiles),
            !shape.has_cycle()
        );
        let m = metrics(&sys);
        assert!(m.glue_count <= 2);
        (m.tile_count, m.bin_count, m.stage_count)
    }

    #[test]
    fn three_by_three() {
        let (tiles, _, _) = check(&Shape::rectangle(3, 3));
        assert!(tiles <= 16);
    }

    #[test]
    fn single_cell() {
        let sys = gen_spanning_tree(&Shape::line(1));
        assert_eq!(metrics(&sys).stage_count, 1);
        assert_eq!(metrics(&sys).glue_count, 0);
    }

    #[test]
    fn random_shapes() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..25 {
            let n = rng.gen_range(2..=40);
            let s = random_polyomino(&mut rng, n);
            let (tiles, bins, _) = check(&s);
            assert!(tiles <= MAX_TILES, "{tiles}");
            assert!(bins as f64 <= 2.0 * (s.len() as f64).log2() + 1.0, "{bins}");
        }
    }

    #[test]
    fn plus_center_has_opposite_children() {
        let plus = Shape::new([(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)].map(|(x, y)| Pos::new(x, y))).unwrap();
        let (tiles, _, _) = check(&plus);
        assert!(tiles <= 5);
    }
}
