//! Tiles, glues, supertiles and the two-handed combination operation.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Label reserved for the glue that never bonds.
pub const NULL_LABEL: &str = "null";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssemblyError {
    #[error("no cells given")]
    EmptyInput,
    #[error("cells are not 4-connected")]
    DisconnectedCells,
    #[error("placement overlaps at ({x}, {y})")]
    OverlapError { x: i32, y: i32 },
    #[error("glue `{0}` declared twice")]
    DuplicateGlue(String),
    #[error("glue `{0}` must have positive strength")]
    ZeroStrength(String),
    #[error("unknown glue `{0}`")]
    UnknownGlue(String),
    #[error("tile `{0}` declared twice")]
    DuplicateTile(String),
    #[error("unknown tile `{0}`")]
    UnknownTile(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlueId(pub u16);

impl GlueId {
    pub const NULL: GlueId = GlueId(0);

    pub fn is_null(self) -> bool {
        self == Self::NULL
    }
}

/// The diagonal glue function: equal non-null labels bond with the label's strength.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueTable {
    labels: Vec<String>,
    strengths: Vec<u32>,
    index: HashMap<String, GlueId>,
}

impl Default for GlueTable {
    fn default() -> Self {
        Self::new()
    }
}

impl GlueTable {
    pub fn new() -> Self {
        let mut index = HashMap::new();
        index.insert(NULL_LABEL.to_string(), GlueId::NULL);
        GlueTable {
            labels: vec![NULL_LABEL.to_string()],
            strengths: vec![0],
            index,
        }
    }

    pub fn declare(&mut self, label: &str, strength: u32) -> Result<GlueId, AssemblyError> {
        if self.index.contains_key(label) {
            return Err(AssemblyError::DuplicateGlue(label.to_string()));
        }
        if strength == 0 {
            return Err(AssemblyError::ZeroStrength(label.to_string()));
        }
        let id = GlueId(self.labels.len() as u16);
        self.labels.push(label.to_string());
        self.strengths.push(strength);
        self.index.insert(label.to_string(), id);
        Ok(id)
    }

    /// Returns the id for `label`, declaring it with `strength` if absent.
    pub fn ensure(&mut self, label: &str, strength: u32) -> GlueId {
        match self.index.get(label) {
            Some(&id) => id,
            None => self.declare(label, strength).expect("fresh positive glue"),
        }
    }

    pub fn id(&self, label: &str) -> Option<GlueId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: GlueId) -> &str {
        &self.labels[id.0 as usize]
    }

    pub fn strength(&self, id: GlueId) -> u32 {
        self.strengths[id.0 as usize]
    }

    /// G(a, b).
    pub fn bond(&self, a: GlueId, b: GlueId) -> u32 {
        if a == b && !a.is_null() {
            self.strength(a)
        } else {
            0
        }
    }

    /// Number of declared labels excluding `null`.
    pub fn len(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Non-null glues in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = (GlueId, &str, u32)> + '_ {
        (1..self.labels.len()).map(move |i| (GlueId(i as u16), self.labels[i].as_str(), self.strengths[i]))
    }

    pub fn max_strength(&self) -> u32 {
        self.strengths.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    North,
    East,
    South,
    West,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::North, Side::East, Side::South, Side::West];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::North => Side::South,
            Side::East => Side::West,
            Side::South => Side::North,
            Side::West => Side::East,
        }
    }

    /// Unit step towards this side; y grows northwards.
    pub fn delta(self) -> Pos {
        match self {
            Side::North => Pos::new(0, 1),
            Side::East => Pos::new(1, 0),
            Side::South => Pos::new(0, -1),
            Side::West => Pos::new(-1, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Pos {
    pub x: i32,
    pub y: i32,
}

impl Pos {
    pub const fn new(x: i32, y: i32) -> Self {
        Pos { x, y }
    }

    pub fn step(self, side: Side) -> Pos {
        self + side.delta()
    }
}

impl std::ops::Add for Pos {
    type Output = Pos;
    fn add(self, o: Pos) -> Pos {
        Pos::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Pos {
    type Output = Pos;
    fn sub(self, o: Pos) -> Pos {
        Pos::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for Pos {
    type Output = Pos;
    fn neg(self) -> Pos {
        Pos::new(-self.x, -self.y)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TileId(pub u32);

/// An unrotatable Wang tile. Glues are indexed by [`Side::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub name: String,
    pub glues: [GlueId; 4],
}

impl Tile {
    pub fn glue(&self, side: Side) -> GlueId {
        self.glues[side.index()]
    }
}

/// Glue table plus the tile types defined over it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TileSet {
    pub glues: GlueTable,
    tiles: Vec<Tile>,
    index: HashMap<String, TileId>,
}

impl TileSet {
    pub fn new(glues: GlueTable) -> Self {
        TileSet {
            glues,
            tiles: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Adds a tile from glue labels in N, E, S, W order.
    pub fn add_tile(&mut self, name: &str, labels: [&str; 4]) -> Result<TileId, AssemblyError> {
        let mut glues = [GlueId::NULL; 4];
        for (slot, label) in glues.iter_mut().zip(labels) {
            *slot = self
                .glues
                .id(label)
                .ok_or_else(|| AssemblyError::UnknownGlue(label.to_string()))?;
        }
        self.insert(name, glues)
    }

    pub fn insert(&mut self, name: &str, glues: [GlueId; 4]) -> Result<TileId, AssemblyError> {
        if self.index.contains_key(name) {
            return Err(AssemblyError::DuplicateTile(name.to_string()));
        }
        let id = TileId(self.tiles.len() as u32);
        self.tiles.push(Tile {
            name: name.to_string(),
            glues,
        });
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Returns an existing tile with exactly these glues, or creates one named `name`.
    pub fn intern(&mut self, name: &str, glues: [GlueId; 4]) -> TileId {
        if let Some(i) = self.tiles.iter().position(|t| t.glues == glues) {
            return TileId(i as u32);
        }
        let mut candidate = name.to_string();
        let mut k = 1;
        while self.index.contains_key(&candidate) {
            candidate = format!("{name}_{k}");
            k += 1;
        }
        self.insert(&candidate, glues).expect("fresh tile name")
    }

    pub fn tile(&self, id: TileId) -> &Tile {
        &self.tiles[id.0 as usize]
    }

    pub fn id(&self, name: &str) -> Option<TileId> {
        self.index.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TileId, &Tile)> + '_ {
        self.tiles.iter().enumerate().map(|(i, t)| (TileId(i as u32), t))
    }

    pub fn glue(&self, id: TileId, side: Side) -> GlueId {
        self.tiles[id.0 as usize].glues[side.index()]
    }
}

/// A connected polyomino of placed tiles, translated so its minimum coordinates are zero.
///
/// Cells are kept sorted, so derived equality and hashing identify supertiles up to translation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Supertile {
    cells: Vec<(Pos, TileId)>,
}

impl Supertile {
    pub fn single(tile: TileId) -> Self {
        Supertile {
            cells: vec![(Pos::new(0, 0), tile)],
        }
    }

    pub fn cells(&self) -> &[(Pos, TileId)] {
        &self.cells
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        self.cells.iter().map(|c| c.0)
    }

    pub fn get(&self, p: Pos) -> Option<TileId> {
        self.cells
            .binary_search_by(|c| c.0.cmp(&p))
            .ok()
            .map(|i| self.cells[i].1)
    }

    /// (width, height) of the bounding box.
    pub fn dims(&self) -> (i32, i32) {
        let w = self.cells.iter().map(|c| c.0.x).max().unwrap_or(-1) + 1;
        let h = self.cells.iter().map(|c| c.0.y).max().unwrap_or(-1) + 1;
        (w, h)
    }

    pub fn translated(&self, by: Pos) -> Vec<(Pos, TileId)> {
        self.cells.iter().map(|&(p, t)| (p + by, t)).collect()
    }
}

pub fn is_connected<I: IntoIterator<Item = Pos>>(cells: I) -> bool {
    let set: HashSet<Pos> = cells.into_iter().collect();
    let Some(&start) = set.iter().next() else {
        return false;
    };
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(p) = stack.pop() {
        for s in Side::ALL {
            let q = p.step(s);
            if set.contains(&q) && seen.insert(q) {
                stack.push(q);
            }
        }
    }
    seen.len() == set.len()
}

/// Translates `cells` so the minimum coordinates are (0, 0).
pub fn canonicalize<I: IntoIterator<Item = (Pos, TileId)>>(cells: I) -> Result<Supertile, AssemblyError> {
    let mut cells: Vec<(Pos, TileId)> = cells.into_iter().collect();
    if cells.is_empty() {
        return Err(AssemblyError::EmptyInput);
    }
    cells.sort();
    cells.dedup_by(|a, b| a.0 == b.0);
    if !is_connected(cells.iter().map(|c| c.0)) {
        return Err(AssemblyError::DisconnectedCells);
    }
    Ok(translate_to_origin(cells))
}

fn translate_to_origin(mut cells: Vec<(Pos, TileId)>) -> Supertile {
    let min = Pos::new(
        cells.iter().map(|c| c.0.x).min().unwrap_or(0),
        cells.iter().map(|c| c.0.y).min().unwrap_or(0),
    );
    for c in &mut cells {
        c.0 = c.0 - min;
    }
    cells.sort();
    Supertile { cells }
}

/// Offset of supertile Y relative to supertile X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub offset: Pos,
}

/// Dense lookup view of a supertile with its exposed positive-glue edges.
#[derive(Debug, Clone)]
pub struct IndexedSupertile {
    pub supertile: Supertile,
    width: i32,
    height: i32,
    grid: Vec<u32>,
    /// Positive glues facing an empty neighbour: (cell, side, glue).
    exposed: Vec<(Pos, Side, GlueId)>,
    /// Exposed edges grouped by (side, glue).
    by_kind: HashMap<(Side, GlueId), Vec<Pos>>,
}

impl IndexedSupertile {
    pub fn new(supertile: Supertile, tiles: &TileSet) -> Self {
        let (width, height) = supertile.dims();
        let mut grid = vec![0u32; (width * height) as usize];
        for &(p, t) in supertile.cells() {
            grid[(p.y * width + p.x) as usize] = t.0 + 1;
        }
        let mut ix = IndexedSupertile {
            supertile,
            width,
            height,
            grid,
            exposed: Vec::new(),
            by_kind: HashMap::new(),
        };
        let mut exposed = Vec::new();
        for &(p, t) in ix.supertile.cells() {
            for s in Side::ALL {
                let g = tiles.glue(t, s);
                if tiles.glues.strength(g) > 0 && ix.at(p.step(s)).is_none() {
                    exposed.push((p, s, g));
                }
            }
        }
        for &(p, s, g) in &exposed {
            ix.by_kind.entry((s, g)).or_default().push(p);
        }
        ix.exposed = exposed;
        ix
    }

    #[inline]
    pub fn at(&self, p: Pos) -> Option<TileId> {
        if p.x < 0 || p.y < 0 || p.x >= self.width || p.y >= self.height {
            return None;
        }
        match self.grid[(p.y * self.width + p.x) as usize] {
            0 => None,
            v => Some(TileId(v - 1)),
        }
    }

    pub fn exposed(&self) -> &[(Pos, Side, GlueId)] {
        &self.exposed
    }

    pub fn size(&self) -> usize {
        self.supertile.size()
    }

    pub fn dims(&self) -> (i32, i32) {
        (self.width, self.height)
    }

    /// Whether some exposed edge of `self` could face an exposed edge of `other`.
    pub fn may_bond(&self, other: &IndexedSupertile) -> bool {
        self.by_kind
            .keys()
            .any(|&(s, g)| other.by_kind.contains_key(&(s.opposite(), g)))
    }

    fn overlaps(&self, other: &IndexedSupertile, offset: Pos) -> Option<Pos> {
        if other.size() <= self.size() {
            other.positions_iter().map(|q| q + offset).find(|&p| self.at(p).is_some())
        } else {
            self.positions_iter().find(|&p| other.at(p - offset).is_some())
        }
    }

    fn positions_iter(&self) -> impl Iterator<Item = Pos> + '_ {
        self.supertile.positions()
    }

    fn strength_unchecked(&self, other: &IndexedSupertile, offset: Pos, tiles: &TileSet) -> u32 {
        let mut total = 0;
        if other.exposed.len() <= self.exposed.len() {
            for &(q, s, g) in &other.exposed {
                if let Some(t) = self.at(q + offset + s.delta()) {
                    total += tiles.glues.bond(g, tiles.glue(t, s.opposite()));
                }
            }
        } else {
            for &(p, s, g) in &self.exposed {
                if let Some(t) = other.at(p - offset + s.delta()) {
                    total += tiles.glues.bond(g, tiles.glue(t, s.opposite()));
                }
            }
        }
        total
    }

    /// Offsets at which at least one exposed edge of `other` meets a matching edge of `self`.
    pub fn candidate_offsets(&self, other: &IndexedSupertile) -> Vec<Pos> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for &(p, s, g) in &self.exposed {
            if let Some(qs) = other.by_kind.get(&(s.opposite(), g)) {
                for &q in qs {
                    let o = p.step(s) - q;
                    if seen.insert(o) {
                        out.push(o);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Supertile formed by `self` and `other` placed at `offset`.
    pub fn union(&self, other: &IndexedSupertile, offset: Pos) -> Supertile {
        let mut cells = self.supertile.cells.clone();
        cells.extend(other.supertile.translated(offset));
        translate_to_origin(cells)
    }
}

/// Total bond strength across edges made coincident by placing `y` at `placement` relative to `x`.
pub fn attachment_strength(
    x: &Supertile,
    y: &Supertile,
    placement: Placement,
    tiles: &TileSet,
) -> Result<u32, AssemblyError> {
    let xi = IndexedSupertile::new(x.clone(), tiles);
    let yi = IndexedSupertile::new(y.clone(), tiles);
    attachment_strength_indexed(&xi, &yi, placement, tiles)
}

pub fn attachment_strength_indexed(
    x: &IndexedSupertile,
    y: &IndexedSupertile,
    placement: Placement,
    tiles: &TileSet,
) -> Result<u32, AssemblyError> {
    if let Some(p) = x.overlaps(y, placement.offset) {
        return Err(AssemblyError::OverlapError { x: p.x, y: p.y });
    }
    Ok(x.strength_unchecked(y, placement.offset, tiles))
}

/// One result of [`combine_indexed`], with the placement that produced it.
#[derive(Debug, Clone)]
pub struct Combination {
    pub placement: Placement,
    pub result: Supertile,
}

/// All supertiles (with one witnessing placement each) formed by attaching `y` to `x` at strength ≥ `temperature`.
pub fn combine_indexed(
    x: &IndexedSupertile,
    y: &IndexedSupertile,
    temperature: u32,
    tiles: &TileSet,
) -> Vec<Combination> {
    let mut out: Vec<Combination> = Vec::new();
    if !x.may_bond(y) {
        return out;
    }
    let mut seen = HashSet::new();
    for o in x.candidate_offsets(y) {
        if x.overlaps(y, o).is_some() {
            continue;
        }
        if x.strength_unchecked(y, o, tiles) >= temperature {
            let z = x.union(y, o);
            if seen.insert(z.clone()) {
                out.push(Combination {
                    placement: Placement { offset: o },
                    result: z,
                });
            }
        }
    }
    out
}

/// The combination set C^τ(X, Y), sorted.
pub fn combine(x: &Supertile, y: &Supertile, temperature: u32, tiles: &TileSet) -> Vec<Supertile> {
    let xi = IndexedSupertile::new(x.clone(), tiles);
    let yi = IndexedSupertile::new(y.clone(), tiles);
    let mut out: Vec<Supertile> = combine_indexed(&xi, &yi, temperature.max(1), tiles)
        .into_iter()
        .map(|c| c.result)
        .collect();
    out.sort();
    out
}

/// Glue labels facing each other across the edge from `p` towards `side`, if both cells are occupied.
pub fn facing_glues(s: &Supertile, p: Pos, side: Side, tiles: &TileSet) -> Option<(GlueId, GlueId)> {
    let a = s.get(p)?;
    let b = s.get(p.step(side))?;
    Some((tiles.glue(a, side), tiles.glue(b, side.opposite())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kit() -> TileSet {
        let mut g = GlueTable::new();
        g.declare("a", 1).unwrap();
        g.declare("b", 1).unwrap();
        g.declare("c", 1).unwrap();
        g.declare("w", 1).unwrap();
        let mut t = TileSet::new(g);
        t.add_tile("east_c", ["null", "c", "null", "null"]).unwrap();
        t.add_tile("west_c", ["null", "null", "null", "c"]).unwrap();
        t.add_tile("east_a", ["null", "a", "null", "null"]).unwrap();
        t.add_tile("west_b", ["null", "null", "null", "b"]).unwrap();
        t.add_tile("top_w", ["w", "null", "null", "null"]).unwrap();
        t.add_tile("bot_w", ["null", "null", "w", "null"]).unwrap();
        t
    }

    fn id(t: &TileSet, n: &str) -> TileId {
        t.id(n).unwrap()
    }

    #[test]
    fn canonicalize_translates_single_cell() {
        let s = canonicalize([(Pos::new(5, 7), TileId(0))]).unwrap();
        assert_eq!(s.cells(), &[(Pos::new(0, 0), TileId(0))]);
    }

    #[test]
    fn canonicalize_is_translation_invariant() {
        let a = canonicalize([(Pos::new(2, 2), TileId(0)), (Pos::new(3, 2), TileId(1))]).unwrap();
        let b = canonicalize([(Pos::new(9, -1), TileId(0)), (Pos::new(10, -1), TileId(1))]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn canonicalize_rejects_gaps_and_empty() {
        assert_eq!(
            canonicalize([(Pos::new(0, 0), TileId(0)), (Pos::new(2, 0), TileId(1))]),
            Err(AssemblyError::DisconnectedCells)
        );
        assert_eq!(canonicalize(Vec::new()), Err(AssemblyError::EmptyInput));
    }

    #[test]
    fn strength_of_single_matching_bond() {
        let t = kit();
        let x = Supertile::single(id(&t, "east_c"));
        let y = Supertile::single(id(&t, "west_c"));
        let p = Placement { offset: Pos::new(1, 0) };
        assert_eq!(attachment_strength(&x, &y, p, &t).unwrap(), 1);
    }

    #[test]
    fn mismatched_labels_do_not_bond() {
        let t = kit();
        let x = Supertile::single(id(&t, "east_a"));
        let y = Supertile::single(id(&t, "west_b"));
        let p = Placement { offset: Pos::new(1, 0) };
        assert_eq!(attachment_strength(&x, &y, p, &t).unwrap(), 0);
        assert!(combine(&x, &y, 1, &t).is_empty());
    }

    #[test]
    fn stacked_lines_bond_twice() {
        // Two 1x2 lines; bottom exposes `w` north on both cells, top exposes `w` south.
        let t = kit();
        let bottom = canonicalize([(Pos::new(0, 0), id(&t, "top_w")), (Pos::new(1, 0), id(&t, "top_w"))]).unwrap();
        let top = canonicalize([(Pos::new(0, 0), id(&t, "bot_w")), (Pos::new(1, 0), id(&t, "bot_w"))]).unwrap();
        let p = Placement { offset: Pos::new(0, 1) };
        assert_eq!(attachment_strength(&bottom, &top, p, &t).unwrap(), 2);
        // Shifted by one column only one pair is coincident.
        let p = Placement { offset: Pos::new(1, 1) };
        assert_eq!(attachment_strength(&bottom, &top, p, &t).unwrap(), 1);
        assert_eq!(combine(&bottom, &top, 2, &t).len(), 1);
        assert_eq!(combine(&bottom, &top, 1, &t).len(), 3);
    }

    #[test]
    fn overlap_is_an_error() {
        let t = kit();
        let x = Supertile::single(TileId(0));
        let p = Placement { offset: Pos::new(0, 0) };
        assert!(matches!(
            attachment_strength(&x, &x, p, &t),
            Err(AssemblyError::OverlapError { .. })
        ));
    }

    #[test]
    fn forced_single_attachment() {
        let t = kit();
        let x = Supertile::single(id(&t, "east_c"));
        let y = Supertile::single(id(&t, "west_c"));
        let out = combine(&x, &y, 1, &t);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].size(), 2);
        assert_eq!(out, combine(&y, &x, 1, &t));
    }

    #[test]
    fn glue_table_rules() {
        let mut g = GlueTable::new();
        assert_eq!(g.strength(GlueId::NULL), 0);
        assert!(matches!(g.declare("a", 0), Err(AssemblyError::ZeroStrength(_))));
        let a = g.declare("a", 2).unwrap();
        assert!(matches!(g.declare("a", 1), Err(AssemblyError::DuplicateGlue(_))));
        assert_eq!(g.bond(a, a), 2);
        assert_eq!(g.bond(GlueId::NULL, GlueId::NULL), 0);
        assert_eq!(g.len(), 1);
    }
}
