//! Decomposition trees with per-cut glue assignment, compiled bottom-up into staged systems.
//!
//! A strategy splits a region into two parts. Every cut edge gets a role, and the labeller tries
//! candidate role→glue assignments in order, keeping the first under which the two parts (seen
//! only through their exposed glues) assemble uniquely into the parent at temperature 1.

use std::collections::{BTreeSet, HashMap};

use crate::assembly::{canonicalize, GlueId, GlueTable, Pos, Side, Supertile, TileId, TileSet};
use crate::engine::{produce_closure, Bin, ClosureBudget};
use crate::staged::StagedSystem;

use super::ConstructionError;

/// Glue label index; 0 is null.
pub(crate) type Label = u8;

/// Canonical undirected edge key: the cell on the west/south side and East/North.
pub(crate) fn edge_key(p: Pos, side: Side) -> (Pos, Side) {
    match side {
        Side::East | Side::North => (p, side),
        Side::West | Side::South => (p.step(side), side.opposite()),
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Cut {
    pub first: BTreeSet<Pos>,
    pub second: BTreeSet<Pos>,
    /// `East` for a cut running north–south, `North` for one running east–west.
    pub axis: Side,
    /// Role of each cut edge, keyed by [`edge_key`].
    pub roles: Vec<((Pos, Side), usize)>,
    /// Strategy-defined label recorded on the piece this cut splits.
    pub tag: Option<(usize, i32)>,
}

impl Cut {
    /// Splits `region` into `first` and the rest, assigning roles with `role`.
    pub fn new(
        region: &BTreeSet<Pos>,
        first: BTreeSet<Pos>,
        axis: Side,
        role: impl Fn(Pos, Side) -> usize,
    ) -> Result<Cut, ConstructionError> {
        let second: BTreeSet<Pos> = region.difference(&first).copied().collect();
        if first.is_empty() || second.is_empty() {
            return Err(ConstructionError::Decomposition("cut leaves an empty part".into()));
        }
        for part in [&first, &second] {
            if !crate::assembly::is_connected(part.iter().copied()) {
                return Err(ConstructionError::Decomposition("cut leaves a disconnected part".into()));
            }
        }
        let mut roles = Vec::new();
        for &p in &first {
            for s in Side::ALL {
                if second.contains(&p.step(s)) {
                    let (q, side) = edge_key(p, s);
                    roles.push(((q, side), role(q, side)));
                }
            }
        }
        roles.sort();
        Ok(Cut {
            first,
            second,
            axis,
            roles,
            tag: None,
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Piece {
    pub cells: BTreeSet<Pos>,
    pub children: Vec<Piece>,
    /// Tag of the cut that split this piece.
    pub tag: Option<(usize, i32)>,
}

impl Piece {
    fn internal_depth(&self) -> usize {
        if self.children.is_empty() {
            return 0;
        }
        1 + self.children.iter().map(|c| c.internal_depth()).max().unwrap_or(0)
    }
}

/// Fully labelled target with its decomposition tree.
#[derive(Debug, Clone)]
pub(crate) struct Decomposition {
    pub target: BTreeSet<Pos>,
    pub root: Piece,
    pub labels: HashMap<(Pos, Side), Label>,
}

impl Decomposition {
    pub fn label(&self, p: Pos, side: Side) -> Label {
        self.labels.get(&edge_key(p, side)).copied().unwrap_or(0)
    }

    /// Glue labels of `p` in N, E, S, W order.
    pub fn quad(&self, p: Pos) -> [Label; 4] {
        Side::ALL.map(|s| self.label(p, s))
    }
}

pub(crate) trait Strategy {
    /// Cuts to try for `region` in preference order; empty for a single cell.
    fn cuts(&self, region: &BTreeSet<Pos>) -> Vec<Cut>;
    /// Candidate role→label vectors to try for `cut` of `region`, in preference order.
    /// `boundary` holds each labelled edge leaving `region` as (label, outward side).
    fn candidates(&self, region: &BTreeSet<Pos>, cut: &Cut, boundary: &BTreeSet<(Label, Side)>) -> Vec<Vec<Label>>;
}

pub(crate) fn decompose(target: &BTreeSet<Pos>, strategy: &dyn Strategy) -> Result<Decomposition, ConstructionError> {
    let mut labels = HashMap::new();
    let root = split(target, target, strategy, &mut labels)?;
    Ok(Decomposition {
        target: target.clone(),
        root,
        labels,
    })
}

fn split(
    region: &BTreeSet<Pos>,
    target: &BTreeSet<Pos>,
    strategy: &dyn Strategy,
    labels: &mut HashMap<(Pos, Side), Label>,
) -> Result<Piece, ConstructionError> {
    if region.len() == 1 {
        return Ok(Piece {
            cells: region.clone(),
            children: Vec::new(),
            tag: None,
        });
    }
    let boundary = boundary_labels(region, labels);
    for cut in strategy.cuts(region) {
        for cand in strategy.candidates(region, &cut, &boundary) {
            let saved = labels.clone();
            for &(e, role) in &cut.roles {
                labels.insert(e, cand[role]);
            }
            if assembles_uniquely(region, &cut, target, labels) {
                // Children may still be unlabellable under this choice; back off if so.
                let children = split(&cut.first, target, strategy, labels)
                    .and_then(|a| split(&cut.second, target, strategy, labels).map(|b| vec![a, b]));
                if let Ok(children) = children {
                    return Ok(Piece {
                        cells: region.clone(),
                        children,
                        tag: cut.tag,
                    });
                }
            }
            *labels = saved;
        }
    }
    Err(ConstructionError::Decomposition(format!(
        "no cut and glue assignment assemble a {}-cell region uniquely",
        region.len()
    )))
}

fn boundary_labels(region: &BTreeSet<Pos>, labels: &HashMap<(Pos, Side), Label>) -> BTreeSet<(Label, Side)> {
    let mut out = BTreeSet::new();
    for &p in region {
        for s in Side::ALL {
            if !region.contains(&p.step(s)) {
                if let Some(&l) = labels.get(&edge_key(p, s)) {
                    if l != 0 {
                        out.insert((l, s));
                    }
                }
            }
        }
    }
    out
}

/// Tile set over labels 1..=count named `{prefix}{k}`, all strength 1.
pub(crate) fn label_tiles(prefix: &str, count: Label) -> (TileSet, Vec<GlueId>) {
    let mut glues = GlueTable::new();
    let mut ids = vec![GlueId::NULL];
    for k in 1..=count {
        ids.push(glues.declare(&format!("{prefix}{k}"), 1).expect("fresh glue"));
    }
    (TileSet::new(glues), ids)
}

/// Placeholder supertile of `part`: only edges leaving `part` carry glues.
fn placeholder(part: &BTreeSet<Pos>, labels: &HashMap<(Pos, Side), Label>, tiles: &mut TileSet) -> Supertile {
    let cells = part.iter().map(|&p| {
        let quad = Side::ALL.map(|s| {
            if part.contains(&p.step(s)) {
                GlueId::NULL
            } else {
                GlueId(labels.get(&edge_key(p, s)).copied().unwrap_or(0) as u16)
            }
        });
        let name = format!("p{}", tiles.len());
        (p, tiles.intern(&name, quad))
    });
    let cells: Vec<(Pos, TileId)> = cells.collect();
    canonicalize(cells).expect("parts are connected")
}

fn assembles_uniquely(
    region: &BTreeSet<Pos>,
    cut: &Cut,
    _target: &BTreeSet<Pos>,
    labels: &HashMap<(Pos, Side), Label>,
) -> bool {
    let max = labels.values().copied().max().unwrap_or(0).max(1);
    let (mut tiles, _) = label_tiles("g", max);
    let a = placeholder(&cut.first, labels, &mut tiles);
    let b = placeholder(&cut.second, labels, &mut tiles);
    let whole = {
        // The parent as the union of the two placeholders in place.
        let mut cells: Vec<(Pos, TileId)> = Vec::new();
        for part in [&cut.first, &cut.second] {
            let s = placeholder(part, labels, &mut tiles);
            let min_x = part.iter().map(|p| p.x).min().unwrap_or(0);
            let min_y = part.iter().map(|p| p.y).min().unwrap_or(0);
            cells.extend(s.translated(Pos::new(min_x, min_y)));
        }
        canonicalize(cells).expect("region is connected")
    };
    let budget = ClosureBudget {
        max_supertile_size: region.len(),
        max_distinct_supertiles: 64,
    };
    let r = produce_closure(&Bin::new(vec![a, b], 1), &tiles, budget);
    r.complete && r.terminal.len() == 1 && r.terminal[0] == whole
}

/// Compiles a decomposition: internal nodes at depth d run at stage D - d, leaves are tile additions.
///
/// Identical subassemblies at the same stage share a bin.
pub(crate) fn compile(dec: &Decomposition, name: &str, glue_prefix: &str) -> StagedSystem {
    let count = dec.labels.values().copied().max().unwrap_or(0);
    let (mut tiles, ids) = label_tiles(glue_prefix, count);
    let mut tile_of: HashMap<Pos, TileId> = HashMap::new();
    for &p in &dec.target {
        let quad = dec.quad(p).map(|l| ids[l as usize]);
        let tname = format!("t{}", tiles.len());
        tile_of.insert(p, tiles.intern(&tname, quad));
    }
    let mut sys = StagedSystem::new(name, 1, tiles);
    let depth = dec.root.internal_depth();
    if depth == 0 {
        let s = sys.add_stage();
        let t = tile_of[dec.root.cells.iter().next().expect("nonempty target")];
        sys.add_bin(s, "b0", &[], &[t]);
        sys.set_output(&[0]);
        return sys;
    }
    for _ in 0..depth {
        sys.add_stage();
    }
    let mut bins: Vec<HashMap<Supertile, usize>> = vec![HashMap::new(); depth];
    let root_bin = place(&dec.root, 0, depth, &tile_of, &mut sys, &mut bins);
    sys.set_output(&[root_bin]);
    sys
}

fn place(
    piece: &Piece,
    depth: usize,
    total: usize,
    tile_of: &HashMap<Pos, TileId>,
    sys: &mut StagedSystem,
    bins: &mut [HashMap<Supertile, usize>],
) -> usize {
    let stage = total - 1 - depth;
    let key = canonicalize(piece.cells.iter().map(|p| (*p, tile_of[p]))).expect("connected piece");
    if let Some(&b) = bins[stage].get(&key) {
        return b;
    }
    let mut from = Vec::new();
    let mut add = Vec::new();
    for c in &piece.children {
        if c.children.is_empty() {
            add.extend(c.cells.iter().map(|p| tile_of[p]));
        } else {
            from.push(place(c, depth + 1, total, tile_of, sys, bins));
        }
    }
    from.sort();
    from.dedup();
    let j = sys.graph.stages[stage].len();
    let b = sys.add_bin(stage, &format!("s{}b{}", stage + 1, j), &from, &add);
    bins[stage].insert(key, b);
    b
}

/// Candidates drawn from `triples` disjoint label triples, one triple per candidate.
///
/// Triples absent from the whole boundary come first, then those absent from the faces parallel
/// to the cut, then the rest; within a triple the identity permutation is tried first.
pub(crate) fn triple_candidates(
    triples: usize,
    roles: usize,
    axis: Side,
    boundary: &BTreeSet<(Label, Side)>,
) -> Vec<Vec<Label>> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
    let triple_of = |l: Label| (l as usize - 1) / 3;
    let anywhere: BTreeSet<usize> = boundary.iter().map(|&(l, _)| triple_of(l)).collect();
    let parallel: BTreeSet<usize> = boundary
        .iter()
        .filter(|&&(_, s)| s == axis || s == axis.opposite())
        .map(|&(l, _)| triple_of(l))
        .collect();
    let mut order: Vec<usize> = (0..triples).collect();
    order.sort_by_key(|t| (anywhere.contains(t), parallel.contains(t), *t));
    let mut out = Vec::new();
    for t in order {
        for perm in PERMS {
            out.push((0..roles).map(|r| (t * 3 + perm[r % 3] + 1) as Label).collect());
        }
    }
    out
}
