//! Arbitrary bit strings from crazy mixing: the bits live in which bins feed which.
//!
//! With w = B/2 the abstract system has a white tile for each bit value at each of w positions
//! and two end tiles per block. The first stage holds one white tile type per bin; the second
//! builds up to w blocks of up to w bits, each block bin fed from the white bin of its bit at
//! every position; the third concatenates the blocks. The macro version replaces every abstract
//! tile by a block whose west and east sides carry the macro glues of its abstract glues and whose
//! north face shows the bit as glue `0`, `1` or `none`, then replays the same mixing.

use std::collections::BTreeMap;

use crate::assembly::{GlueTable, Side, Supertile, TileId, TileSet};
use crate::staged::StagedSystem;

use super::simulation::{build_blocks, BlockSpec, Builder, Lbl, MacroGeometry};
use super::ConstructionError;

const MARKS: [&str; 3] = ["0", "1", "none"];

/// An abstract tile: glue indices on its west and east faces and its north mark (0, 1 or 2).
#[derive(Debug, Clone, PartialEq, Eq)]
struct Abstract {
    name: String,
    west: Option<usize>,
    east: Option<usize>,
    mark: usize,
}

/// The abstract tiles and the mixing plan for `bits`.
struct Plan {
    w: usize,
    /// White tiles, each fed to the block bins listed with it.
    whites: Vec<(Abstract, Vec<usize>)>,
    /// Per block: its left and right end tiles.
    ends: Vec<(Abstract, Abstract)>,
    glue_count: usize,
}

fn plan(bits: &str, b: usize) -> Result<Plan, ConstructionError> {
    if b < 4 || !b.is_multiple_of(2) {
        return Err(ConstructionError::InvalidSize(format!("bin budget {b} must be even and at least 4")));
    }
    if bits.is_empty() || bits.chars().any(|c| c != '0' && c != '1') {
        return Err(ConstructionError::InvalidSize(format!("'{bits}' is not a non-empty bit string")));
    }
    let w = b / 2;
    if bits.len() > w * w {
        return Err(ConstructionError::BudgetTooSmall { needed: bits.len(), allowed: w * w });
    }
    // Glue j in 0..=w sits west of position j inside a block; glue w + m joins block m − 1 to m.
    let blocks: Vec<&[u8]> = bits.as_bytes().chunks(w).collect();
    let mut whites: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut ends = Vec::new();
    for (m, block) in blocks.iter().enumerate() {
        for (j, &c) in block.iter().enumerate() {
            whites.entry((j, (c - b'0') as usize)).or_default().push(m);
        }
        let left = Abstract {
            name: format!("left{m}"),
            west: (m > 0).then_some(w + m),
            east: Some(0),
            mark: 2,
        };
        let right = Abstract {
            name: format!("right{m}"),
            west: Some(block.len()),
            east: (m + 1 < blocks.len()).then_some(w + m + 1),
            mark: 2,
        };
        ends.push((left, right));
    }
    let whites = whites
        .into_iter()
        .map(|((j, v), users)| {
            let t = Abstract {
                name: format!("white{j}_{v}"),
                west: Some(j),
                east: Some(j + 1),
                mark: v,
            };
            (t, users)
        })
        .collect();
    Ok(Plan { w, whites, ends, glue_count: 2 * w })
}

/// The O(B)-tile system: one tile type per white bin, three stages.
pub fn gen_crazy_abstract(bits: &str, b: usize) -> Result<StagedSystem, ConstructionError> {
    let p = plan(bits, b)?;
    let mut glues = GlueTable::new();
    for g in 0..p.glue_count {
        glues.declare(&format!("g{g}"), 1).expect("fresh glue");
    }
    for m in MARKS {
        glues.declare(m, 1).expect("fresh glue");
    }
    let mut tiles = TileSet::new(glues);
    let mut add = |t: &Abstract| -> TileId {
        let face = |g: Option<usize>| g.map_or("null".to_string(), |g| format!("g{g}"));
        let (w, e) = (face(t.west), face(t.east));
        tiles.add_tile(&t.name, [MARKS[t.mark], &e, "null", &w]).expect("fresh tile")
    };
    let white_ids: Vec<TileId> = p.whites.iter().map(|(t, _)| add(t)).collect();
    let end_ids: Vec<(TileId, TileId)> = p.ends.iter().map(|(l, r)| (add(l), add(r))).collect();
    let mut sys = StagedSystem::new(&format!("crazy_abstract_{}bits_B{b}", bits.len()), 1, tiles);
    let s0 = sys.add_stage();
    let white_bins: Vec<usize> = white_ids
        .iter()
        .zip(&p.whites)
        .map(|(&id, (t, _))| sys.add_bin(s0, &t.name, &[], &[id]))
        .collect();
    let s1 = sys.add_stage();
    let block_bins: Vec<usize> = end_ids
        .iter()
        .enumerate()
        .map(|(m, &(l, r))| {
            let from: Vec<usize> = p
                .whites
                .iter()
                .zip(&white_bins)
                .filter(|((_, users), _)| users.contains(&m))
                .map(|(_, &bin)| bin)
                .collect();
            sys.add_bin(s1, &format!("block{m}"), &from, &[l, r])
        })
        .collect();
    let s2 = sys.add_stage();
    let out = sys.add_bin(s2, "string", &block_bins, &[]);
    sys.set_output(&[out]);
    debug_assert_eq!(p.w, b / 2);
    Ok(sys)
}

/// The string `bits` on the north faces of macro tiles, with a constant number of tile types.
pub fn gen_crazy_string(bits: &str, b: usize) -> Result<StagedSystem, ConstructionError> {
    let p = plan(bits, b)?;
    let geo = MacroGeometry::for_glue_count(p.glue_count);
    let mut builder = Builder::new(&format!("crazy_{}bits_B{b}_L{}", bits.len(), geo.side()), &MARKS);
    let spec = |t: &Abstract| {
        let mut sides = [None; 4];
        sides[Side::West.index()] = t.west;
        sides[Side::East.index()] = t.east;
        BlockSpec { sides, mark: Some(3 + t.mark as u8) as Lbl }
    };
    let mut specs: Vec<BlockSpec> = p.whites.iter().map(|(t, _)| spec(t)).collect();
    for (l, r) in &p.ends {
        specs.push(spec(l));
        specs.push(spec(r));
    }
    let blocks = build_blocks(&mut builder, geo, &specs);
    let stage = blocks[0].stage + 1;
    let (white_blocks, end_blocks) = blocks.split_at(p.whites.len());
    let block_bins: Vec<usize> = (0..p.ends.len())
        .map(|m| {
            let mut from: Vec<usize> = p
                .whites
                .iter()
                .zip(white_blocks)
                .filter(|((_, users), _)| users.contains(&m))
                .map(|(_, h)| h.bin)
                .collect();
            from.extend([end_blocks[2 * m].bin, end_blocks[2 * m + 1].bin]);
            builder.bin(stage, &from, &[]).bin
        })
        .collect();
    let out = builder.bin(stage + 1, &block_bins, &[]);
    builder.sys.set_output(&[out.bin]);
    Ok(builder.sys)
}

/// Bits shown by `0`/`1` north-face glues of `s`, west to east; `none` marks are skipped.
pub fn decode_marks(s: &Supertile, tiles: &TileSet) -> Result<String, ConstructionError> {
    let ids: Vec<_> = MARKS.iter().map(|m| tiles.glues.id(m)).collect();
    let mut found: Vec<(i32, i32, usize)> = Vec::new();
    for &(p, t) in s.cells() {
        let g = tiles.glue(t, Side::North);
        if let Some(k) = ids.iter().position(|&id| id == Some(g) && !g.is_null()) {
            found.push((p.x, p.y, k));
        }
    }
    if found.is_empty() {
        return Err(ConstructionError::NotAStringSupertile("no bit marks on the north face".into()));
    }
    if found.iter().any(|f| f.1 != found[0].1) {
        return Err(ConstructionError::NotAStringSupertile("bit marks are not on one row".into()));
    }
    found.sort();
    Ok(found.iter().filter(|f| f.2 < 2).map(|f| if f.2 == 1 { '1' } else { '0' }).collect())
}
