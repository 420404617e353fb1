//! Macro-tile simulation of a one-stage temperature-1 system with three glues and O(1) tiles.
//!
//! Every tile of the simulated system becomes an L×L block, L = 2r + 6, where r bits index the
//! simulated glue. A glued side carries a comb: the east and north sides have a boundary layer
//! with one pocket per bit, the west and south sides one tooth per bit standing outside the block.
//! Bit i occupies positions 3 + 2i and 4 + 2i along the side; the tooth or pocket sits in the
//! first cell for a one bit and in the second for a zero. Positions 2 and L − 3 carry end caps: a
//! tab outside the pocketed side that fills a notch in the toothed side's layer, so a comb cannot
//! slide along its partner. Only tooth tips and pocket floors carry a glue (`a`), hence a single
//! differing bit leaves a tooth against a layer cell and nothing bonds.
//!
//! A block is a core square with four side pieces in pinwheel order. Each side piece is a line of
//! one- to three-cell units (spine, layer, outer cell) built by recursive doubling with rotating
//! end glues. Pieces register on a single glue edge: the west piece on the core's spine, the south
//! piece under the west piece, the east piece on the core's spine and the north piece on top of the
//! east piece. Teeth and pockets of one block never meet in the same bin unless the simulated tile
//! could abut itself, which a system with finite closure excludes.

use std::collections::{BTreeSet, HashMap};

use crate::assembly::{canonicalize, GlueId, GlueTable, Pos, Side, Supertile, TileId, TileSet};
use crate::engine::BinResult;
use crate::staged::StagedSystem;
use crate::verify::{is_planar_attachment, AttachmentEvent};

use super::{ConstructionError, Face};

/// A one-stage tile system: every tile type in one bin at `temperature`.
#[derive(Debug, Clone)]
pub struct TileSystem {
    pub tiles: TileSet,
    pub temperature: u32,
}

/// Tooth layout shared by the four sides of a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacroGeometry {
    pub bits: usize,
}

impl MacroGeometry {
    /// Enough bits to index `glues` distinct glues, at least one.
    pub fn for_glue_count(glues: usize) -> Self {
        let mut bits = 1;
        while (1usize << bits) < glues {
            bits += 1;
        }
        MacroGeometry { bits }
    }

    /// Block side length.
    pub fn side(&self) -> i32 {
        2 * self.bits as i32 + 6
    }

    /// Positions of the two end caps.
    pub fn caps(&self) -> [i32; 2] {
        [2, self.side() - 3]
    }

    /// Tooth (or pocket) positions encoding `code`, bit 0 first.
    pub fn teeth(&self, code: usize) -> Vec<i32> {
        (0..self.bits)
            .map(|i| 3 + 2 * i as i32 + if code >> i & 1 == 1 { 0 } else { 1 })
            .collect()
    }

    /// Inverse of [`MacroGeometry::teeth`]; `None` unless each bit has exactly one tooth.
    pub fn decode(&self, teeth: &[i32]) -> Option<usize> {
        let set: BTreeSet<i32> = teeth.iter().copied().collect();
        if set.len() != self.bits {
            return None;
        }
        let mut code = 0;
        for i in 0..self.bits {
            let one = 3 + 2 * i as i32;
            match (set.contains(&one), set.contains(&(one + 1))) {
                (true, false) => code |= 1 << i,
                (false, true) => {}
                _ => return None,
            }
        }
        Some(code)
    }
}

/// Index into `["a", "b", "c"]`; `None` is the null glue.
pub(crate) type Lbl = Option<u8>;
const A: Lbl = Some(0);
const B: Lbl = Some(1);
const C: Lbl = Some(2);
const LABELS: [&str; 3] = ["a", "b", "c"];

/// A glue label different from both arguments.
fn third(p: Lbl, q: Lbl) -> Lbl {
    (0..3u8).map(Some).find(|&x| x != p && x != q).flatten()
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    pos: Pos,
    glues: [Lbl; 4],
}

type Unit = Vec<Cell>;

/// How one side piece sits in its block.
struct Frame {
    outward: Side,
    along: Side,
    /// Spine cell of unit 0.
    base: Pos,
    /// Block coordinate along the side of unit 0.
    t0: i32,
    /// Position and label of the single inward registration glue.
    reg: (i32, Lbl),
    /// End glues before the first and after the last unit.
    ends: (Lbl, Lbl),
    /// Label between spine and layer, and between layer and outer cell.
    r: Lbl,
    s: Lbl,
    pockets: bool,
}

fn frame(side: Side, l: i32) -> Frame {
    match side {
        Side::West => Frame {
            outward: Side::West,
            along: Side::North,
            base: Pos::new(1, 2),
            t0: 2,
            reg: (2, B),
            ends: (B, None),
            r: C,
            s: B,
            pockets: false,
        },
        Side::South => Frame {
            outward: Side::South,
            along: Side::East,
            base: Pos::new(0, 1),
            t0: 0,
            reg: (1, B),
            ends: (None, None),
            r: C,
            s: B,
            pockets: false,
        },
        Side::East => Frame {
            outward: Side::East,
            along: Side::North,
            base: Pos::new(l - 2, 0),
            t0: 0,
            reg: (2, C),
            ends: (None, C),
            r: B,
            s: A,
            pockets: true,
        },
        Side::North => Frame {
            outward: Side::North,
            along: Side::East,
            base: Pos::new(2, l - 2),
            t0: 2,
            reg: (l - 2, C),
            ends: (None, None),
            r: B,
            s: A,
            pockets: true,
        },
    }
}

fn offset(p: Pos, side: Side, k: i32) -> Pos {
    let d = side.delta();
    Pos::new(p.x + k * d.x, p.y + k * d.y)
}

fn set(glues: &mut [Lbl; 4], side: Side, l: Lbl) {
    glues[side.index()] = l;
}

/// Units of the piece on `side` for simulated glue `code` (`None`: flat side), along faces unset.
/// A flat piece shows `mark` on the outward face of its middle cell.
fn piece_units(geo: MacroGeometry, side: Side, code: Option<usize>, mark: Lbl) -> (Vec<Unit>, Side, (Lbl, Lbl)) {
    let l = geo.side();
    let f = frame(side, l);
    let teeth: Vec<i32> = code.map(|c| geo.teeth(c)).unwrap_or_default();
    let caps = if code.is_some() { geo.caps().to_vec() } else { Vec::new() };
    let (holes, outers) = if f.pockets { (&teeth, &caps) } else { (&caps, &teeth) };
    let inward = f.outward.opposite();
    let units = (0..l - 2)
        .map(|i| {
            let t = f.t0 + i;
            let spine_pos = offset(f.base, f.along, i);
            let layer = !holes.contains(&t);
            let outer = outers.contains(&t);
            let mut spine = [None; 4];
            if t == f.reg.0 {
                set(&mut spine, inward, f.reg.1);
            }
            let floor = if f.pockets { A } else { None };
            set(&mut spine, f.outward, if layer { f.r } else { floor });
            let mut unit = vec![Cell { pos: spine_pos, glues: spine }];
            if layer {
                let mut g = [None; 4];
                set(&mut g, inward, f.r);
                if outer {
                    set(&mut g, f.outward, f.s);
                } else if code.is_none() && i == (l - 2) / 2 {
                    set(&mut g, f.outward, mark);
                }
                unit.push(Cell { pos: offset(spine_pos, f.outward, 1), glues: g });
                if outer {
                    let mut g = [None; 4];
                    set(&mut g, inward, f.s);
                    if !f.pockets {
                        set(&mut g, f.outward, A);
                    }
                    unit.push(Cell { pos: offset(spine_pos, f.outward, 2), glues: g });
                }
            }
            unit
        })
        .collect();
    (units, f.along, f.ends)
}

/// The core's bottom row: west and east ends register the west and east pieces, every cell
/// carries a column glue on its north face.
fn spine_units(l: i32) -> (Vec<Unit>, Side, (Lbl, Lbl)) {
    let units = (2..=l - 3)
        .map(|x| {
            let mut g = [None; 4];
            set(&mut g, Side::North, C);
            vec![Cell { pos: Pos::new(x, 2), glues: g }]
        })
        .collect();
    (units, Side::East, (B, C))
}

/// One core column above the spine, at x = 0 in local coordinates.
fn column_units(l: i32) -> (Vec<Unit>, Side, (Lbl, Lbl)) {
    let units = (3..=l - 3).map(|y| vec![Cell { pos: Pos::new(0, y), glues: [None; 4] }]).collect();
    (units, Side::North, (C, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Handle {
    pub stage: usize,
    pub bin: usize,
}

pub(crate) struct Builder {
    pub sys: StagedSystem,
    ids: Vec<GlueId>,
    lines: HashMap<Vec<(Pos, TileId)>, Handle>,
}

/// What a block shows on each side, in N, E, S, W order, and the mark on a flat north side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct BlockSpec {
    pub sides: [Option<usize>; 4],
    pub mark: Lbl,
}

impl Builder {
    /// A builder over glues a, b, c followed by `extra`, whose labels are `Some(3)` onwards.
    pub fn new(name: &str, extra: &[&str]) -> Self {
        let mut glues = GlueTable::new();
        let ids = LABELS
            .iter()
            .chain(extra)
            .map(|g| glues.declare(g, 1).expect("fresh glue"))
            .collect();
        Builder {
            sys: StagedSystem::new(name, 1, TileSet::new(glues)),
            ids,
            lines: HashMap::new(),
        }
    }

    fn ensure(&mut self, stage: usize) {
        while self.sys.graph.stages.len() <= stage {
            self.sys.add_stage();
        }
    }

    pub fn bin(&mut self, stage: usize, from: &[usize], add: &[TileId]) -> Handle {
        self.ensure(stage);
        let name = format!("b{}", self.sys.graph.stages[stage].len());
        let bin = self.sys.add_bin(stage, &name, from, add);
        Handle { stage, bin }
    }

    pub fn carry(&mut self, mut h: Handle, to: usize) -> Handle {
        while h.stage < to {
            h = self.bin(h.stage + 1, &[h.bin], &[]);
        }
        h
    }

    pub fn mix(&mut self, parts: &[Handle]) -> Handle {
        let t = parts.iter().map(|h| h.stage).max().expect("parts") + 1;
        let from: Vec<usize> = parts.iter().map(|&h| self.carry(h, t - 1).bin).collect();
        self.bin(t, &from, &[])
    }

    fn tile(&mut self, glues: [Lbl; 4]) -> TileId {
        let name: String = glues
            .iter()
            .map(|g| g.map_or('-', |i| char::from(b'a' + i)))
            .collect();
        let ids = glues.map(|g| g.map_or(GlueId::NULL, |i| self.ids[i as usize]));
        self.sys.tiles.intern(&format!("m{name}"), ids)
    }

    /// Builds `units[lo..hi]` with end glues `ends` by splitting in half.
    fn line(&mut self, units: &[Unit], along: Side, ends: (Lbl, Lbl)) -> Handle {
        if units.len() == 1 {
            let mut cells = units[0].clone();
            set(&mut cells[0].glues, along.opposite(), ends.0);
            set(&mut cells[0].glues, along, ends.1);
            let placed: Vec<(Pos, TileId)> = cells.iter().map(|c| (c.pos, self.tile(c.glues))).collect();
            let key = normalized(&placed);
            if let Some(&h) = self.lines.get(&key) {
                return h;
            }
            let tiles: Vec<TileId> = placed.iter().map(|&(_, t)| t).collect();
            let h = self.bin(0, &[], &tiles);
            self.lines.insert(key, h);
            return h;
        }
        let key = self.line_key(units, along, ends);
        if let Some(&h) = self.lines.get(&key) {
            return h;
        }
        let m = units.len() / 2;
        let mid = third(ends.0, ends.1);
        let left = self.line(&units[..m], along, (ends.0, mid));
        let right = self.line(&units[m..], along, (mid, ends.1));
        let h = self.mix(&[left, right]);
        self.lines.insert(key, h);
        h
    }

    /// Memo key of a line: its tiles once along glues are assigned as [`Builder::line`] would.
    fn line_key(&mut self, units: &[Unit], along: Side, ends: (Lbl, Lbl)) -> Vec<(Pos, TileId)> {
        let mut placed = Vec::new();
        self.assign(units, along, ends, &mut placed);
        normalized(&placed)
    }

    fn assign(&mut self, units: &[Unit], along: Side, ends: (Lbl, Lbl), out: &mut Vec<(Pos, TileId)>) {
        if units.len() == 1 {
            let mut cells = units[0].clone();
            set(&mut cells[0].glues, along.opposite(), ends.0);
            set(&mut cells[0].glues, along, ends.1);
            out.extend(cells.iter().map(|c| (c.pos, self.tile(c.glues))));
            return;
        }
        let m = units.len() / 2;
        let mid = third(ends.0, ends.1);
        self.assign(&units[..m], along, (ends.0, mid), out);
        self.assign(&units[m..], along, (mid, ends.1), out);
    }
}

fn normalized(cells: &[(Pos, TileId)]) -> Vec<(Pos, TileId)> {
    let x0 = cells.iter().map(|c| c.0.x).min().unwrap_or(0);
    let y0 = cells.iter().map(|c| c.0.y).min().unwrap_or(0);
    let mut v: Vec<(Pos, TileId)> = cells.iter().map(|&(p, t)| (Pos::new(p.x - x0, p.y - y0), t)).collect();
    v.sort();
    v
}

/// Distinct positive glues of `t`, in glue-table order; their index is the macro glue code.
fn glue_codes(t: &TileSystem) -> Vec<GlueId> {
    let used: BTreeSet<GlueId> = t
        .tiles
        .iter()
        .flat_map(|(_, tile)| tile.glues)
        .filter(|g| !g.is_null())
        .collect();
    used.into_iter().collect()
}

/// The geometry `gen_simulation` uses for `t`.
pub fn macro_geometry(t: &TileSystem) -> MacroGeometry {
    MacroGeometry::for_glue_count(glue_codes(t).len())
}

/// Staged system whose output bin assembles T's terminal shapes scaled by the block side.
pub fn gen_simulation(t: &TileSystem) -> Result<StagedSystem, ConstructionError> {
    if t.temperature >= 2 || t.tiles.glues.max_strength() >= 2 {
        return Err(ConstructionError::UnsupportedTemperature);
    }
    let codes = glue_codes(t);
    let geo = MacroGeometry::for_glue_count(codes.len());
    let mut b = Builder::new(&format!("simulation_{}tiles_L{}", t.tiles.len(), geo.side()), &[]);
    let code_of = |g: GlueId| (!g.is_null()).then(|| codes.iter().position(|&c| c == g).expect("indexed"));
    let specs: Vec<BlockSpec> = t
        .tiles
        .iter()
        .map(|(_, tile)| BlockSpec {
            sides: Side::ALL.map(|s| code_of(tile.glues[s.index()])),
            mark: None,
        })
        .collect();
    let blocks = build_blocks(&mut b, geo, &specs);
    let from: Vec<usize> = blocks.iter().map(|h| h.bin).collect::<BTreeSet<_>>().into_iter().collect();
    let out = b.bin(blocks[0].stage + 1, &from, &[]);
    b.sys.set_output(&[out.bin]);
    Ok(b.sys)
}

/// One bin per distinct spec holding that block; the handles, all at one stage, follow `specs`.
pub(crate) fn build_blocks(b: &mut Builder, geo: MacroGeometry, specs: &[BlockSpec]) -> Vec<Handle> {
    let l = geo.side();
    let (units, along, ends) = spine_units(l);
    let spine = b.line(&units, along, ends);
    let (units, along, ends) = column_units(l);
    let column = b.line(&units, along, ends);
    let mut pieces: HashMap<(Side, Option<usize>, Lbl), Handle> = HashMap::new();
    let piece_key = |spec: &BlockSpec, s: Side| {
        let mark = if s == Side::North { spec.mark } else { None };
        (s, spec.sides[s.index()], mark)
    };
    for spec in specs {
        for s in Side::ALL {
            let key = piece_key(spec, s);
            if let std::collections::hash_map::Entry::Vacant(e) = pieces.entry(key) {
                let (units, along, ends) = piece_units(geo, s, key.1, key.2);
                e.insert(b.line(&units, along, ends));
            }
        }
    }
    let height = b.sys.graph.stages.len() - 1;
    let spine = b.carry(spine, height);
    let column = b.carry(column, height);
    let mut cores: HashMap<Option<usize>, Handle> = HashMap::new();
    let mut halves: HashMap<[Option<usize>; 3], Handle> = HashMap::new();
    let mut done: HashMap<BlockSpec, Handle> = HashMap::new();
    for spec in specs {
        if done.contains_key(spec) {
            continue;
        }
        let code = |s: Side| spec.sides[s.index()];
        let w = code(Side::West);
        let core = match cores.get(&w) {
            Some(&h) => h,
            None => {
                let piece = b.carry(pieces[&piece_key(spec, Side::West)], height);
                let h = b.mix(&[spine, column, piece]);
                cores.insert(w, h);
                h
            }
        };
        let key = [w, code(Side::South), code(Side::East)];
        let half = match halves.get(&key) {
            Some(&h) => h,
            None => {
                let south = b.carry(pieces[&piece_key(spec, Side::South)], core.stage);
                let east = b.carry(pieces[&piece_key(spec, Side::East)], core.stage);
                let h = b.mix(&[core, south, east]);
                halves.insert(key, h);
                h
            }
        };
        let north = b.carry(pieces[&piece_key(spec, Side::North)], half.stage);
        let block = b.mix(&[half, north]);
        done.insert(*spec, block);
    }
    let last = done.values().map(|h| h.stage).max().unwrap_or(0);
    let mut carried: HashMap<BlockSpec, Handle> = HashMap::new();
    specs
        .iter()
        .map(|spec| {
            if let Some(&h) = carried.get(spec) {
                return h;
            }
            let h = b.carry(done[spec], last);
            carried.insert(*spec, h);
            h
        })
        .collect()
}

/// Free-standing combs for the given bit strings (bit 0 first, all the same length): `South` is a
/// block's south piece with teeth, `North` its north piece with pockets and cap tabs.
pub fn macro_glues(combs: &[(&str, Face)]) -> Result<(TileSet, Vec<Supertile>), ConstructionError> {
    let bits = combs.first().map_or(0, |c| c.0.len());
    if bits == 0 || combs.iter().any(|c| c.0.len() != bits || c.0.chars().any(|ch| ch != '0' && ch != '1')) {
        return Err(ConstructionError::InvalidSize("macro glues need equal-length non-empty bit strings".into()));
    }
    let geo = MacroGeometry { bits };
    let mut b = Builder::new("macro_glues", &[]);
    let mut out = Vec::new();
    for &(text, face) in combs {
        let code = text.chars().enumerate().filter(|c| c.1 == '1').map(|(i, _)| 1 << i).sum();
        let side = match face {
            Face::North => Side::North,
            Face::South => Side::South,
        };
        let (units, along, ends) = piece_units(geo, side, Some(code), None);
        let mut placed = Vec::new();
        b.assign(&units, along, ends, &mut placed);
        out.push(canonicalize(placed).expect("comb is connected"));
    }
    Ok((b.sys.tiles, out))
}

/// Bits (bit 0 first) of a comb made by [`macro_glues`], read off its teeth or pocket floors.
pub fn decode_macro_glue(s: &Supertile, tiles: &TileSet, face: Face) -> Result<String, ConstructionError> {
    let bad = |why: &str| ConstructionError::NotAStringSupertile(why.to_string());
    let a = tiles.glues.id(LABELS[0]).ok_or_else(|| bad("no tooth glue"))?;
    let (side, t0) = match face {
        Face::North => (Side::North, 2),
        Face::South => (Side::South, 0),
    };
    let width = s.dims().0;
    if width < 6 || width % 2 != 0 {
        return Err(bad("comb length does not fit a macro glue"));
    }
    let geo = MacroGeometry { bits: (width as usize - 4) / 2 };
    let x0 = s.positions().map(|p| p.x).min().unwrap_or(0);
    // Pocket floors lie on the spine, the bottom row of a north comb; cap tabs also bond by `a`.
    let y0 = s.positions().map(|p| p.y).min().unwrap_or(0);
    let marks: Vec<i32> = s
        .cells()
        .iter()
        .filter(|(p, t)| tiles.glue(*t, side) == a && (face == Face::South || p.y == y0))
        .map(|(p, _)| p.x - x0 + t0)
        .collect();
    let code = geo.decode(&marks).ok_or_else(|| bad("each bit needs exactly one tooth"))?;
    Ok((0..geo.bits).map(|i| if code >> i & 1 == 1 { '1' } else { '0' }).collect())
}

/// An attachment in `result` whose right operand is a seed and which cannot be undone by sliding
/// within the plane, if any.
pub fn find_nonplanar_attachment(result: &BinResult, tiles: &TileSet, temperature: u32) -> Option<AttachmentEvent> {
    use crate::assembly::{combine_indexed, IndexedSupertile};
    let indexed: Vec<IndexedSupertile> =
        result.produced.iter().map(|s| IndexedSupertile::new(s.clone(), tiles)).collect();
    let seeds: Vec<usize> = (0..result.produced.len()).filter(|&i| result.derivations[i].is_none()).collect();
    for (i, x) in indexed.iter().enumerate() {
        for &j in &seeds {
            for c in combine_indexed(x, &indexed[j], temperature, tiles) {
                let e = AttachmentEvent {
                    left: result.produced[i].clone(),
                    right: result.produced[j].clone(),
                    placement: c.placement,
                    result: c.result,
                };
                if !is_planar_attachment(&e) {
                    return Some(e);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{produce_closure, Bin, ClosureBudget};
    use crate::staged::{execute, metrics, validate};
    use crate::testutil::random_polyomino;
    use crate::verify::Shape;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    /// One tile per cell of `shape`, one glue per adjacency.
    fn system_for(cells: &[(i32, i32)]) -> TileSystem {
        let shape = Shape::new(cells.iter().map(|&(x, y)| Pos::new(x, y)).collect::<Vec<_>>()).unwrap();
        let mut glues = GlueTable::new();
        let mut faces: HashMap<(Pos, Side), String> = HashMap::new();
        for &p in shape.cells() {
            for s in [Side::East, Side::North] {
                let q = p.step(s);
                if shape.contains(q) {
                    let g = format!("g{}", glues.len());
                    glues.declare(&g, 1).unwrap();
                    faces.insert((p, s), g.clone());
                    faces.insert((q, s.opposite()), g);
                }
            }
        }
        let mut tiles = TileSet::new(glues);
        for (i, &p) in shape.cells().iter().enumerate() {
            let labels = Side::ALL.map(|s| faces.get(&(p, s)).cloned().unwrap_or_else(|| "null".into()));
            tiles
                .add_tile(&format!("t{i}"), [&labels[0], &labels[1], &labels[2], &labels[3]].map(|s| s.as_str()))
                .unwrap();
        }
        TileSystem { tiles, temperature: 1 }
    }

    fn one_stage_terminal(t: &TileSystem) -> Vec<Supertile> {
        let seeds = t.tiles.iter().map(|(id, _)| Supertile::single(id)).collect();
        let r = produce_closure(&Bin::new(seeds, t.temperature), &t.tiles, ClosureBudget::default());
        assert!(r.complete);
        r.terminal
    }

    /// Terminal shapes scaled by `scale`, as a set.
    fn shapes(terminal: &[Supertile], scale: i32) -> BTreeSet<Vec<Pos>> {
        terminal
            .iter()
            .map(|s| Shape::of_supertile(s).scaled(scale).cells().iter().copied().collect())
            .collect()
    }

    fn check(cells: &[(i32, i32)]) -> (StagedSystem, BinResult) {
        let t = system_for(cells);
        let expected = one_stage_terminal(&t);
        let sys = gen_simulation(&t).unwrap();
        assert!(validate(&sys).is_empty(), "{:?}", validate(&sys));
        let ex = execute(&sys, ClosureBudget::default()).unwrap();
        let l = macro_geometry(&t).side();
        assert_eq!(shapes(&ex.output.terminal, 1), shapes(&expected, l), "{cells:?}");
        assert_eq!(metrics(&sys).glue_count, 3);
        let last = ex.result(sys.graph.output[0]).unwrap().clone();
        (sys, last)
    }

    #[test]
    fn geometry_round_trip() {
        for bits in 1..=4 {
            let g = MacroGeometry { bits };
            for code in 0..1 << bits {
                assert_eq!(g.decode(&g.teeth(code)), Some(code));
            }
        }
        assert_eq!(MacroGeometry::for_glue_count(0).side(), 8);
        assert_eq!(MacroGeometry::for_glue_count(5).side(), 12);
    }

    #[test]
    fn domino() {
        check(&[(0, 0), (1, 0)]);
        check(&[(0, 0), (0, 1)]);
    }

    #[test]
    fn square_attaches_nonplanarly() {
        let (sys, out) = check(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let e = find_nonplanar_attachment(&out, &sys.tiles, 1).expect("corner attachment");
        assert!(!is_planar_attachment(&e));
    }

    #[test]
    fn wider_shapes() {
        check(&[(0, 0), (1, 0), (1, 1)]);
        check(&[(0, 0), (1, 0), (2, 0), (1, 1)]);
        check(&[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]);
        check(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn random_shapes() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..12 {
            let n = rng.gen_range(2..=7);
            let shape = random_polyomino(&mut rng, n);
            let cells: Vec<(i32, i32)> = shape.cells().iter().map(|p| (p.x, p.y)).collect();
            check(&cells);
        }
    }

    #[test]
    fn several_terminals_with_shared_glues() {
        let mut glues = GlueTable::new();
        glues.declare("x", 1).unwrap();
        glues.declare("y", 1).unwrap();
        let mut tiles = TileSet::new(glues);
        tiles.add_tile("hub", ["y", "x", "null", "null"]).unwrap();
        tiles.add_tile("east", ["null", "null", "null", "x"]).unwrap();
        tiles.add_tile("east2", ["null", "null", "null", "x"]).unwrap();
        tiles.add_tile("top", ["null", "null", "y", "null"]).unwrap();
        let t = TileSystem { tiles, temperature: 1 };
        let expected = one_stage_terminal(&t);
        let sys = gen_simulation(&t).unwrap();
        let ex = execute(&sys, ClosureBudget::default()).unwrap();
        let l = macro_geometry(&t).side();
        assert_eq!(shapes(&ex.output.terminal, 1), shapes(&expected, l));
        assert_eq!(shapes(&expected, 1).len(), 1);
    }

    #[test]
    fn rejects_temperature_two() {
        let mut t = system_for(&[(0, 0), (1, 0)]);
        t.temperature = 2;
        assert_eq!(gen_simulation(&t).unwrap_err(), ConstructionError::UnsupportedTemperature);
    }
}
