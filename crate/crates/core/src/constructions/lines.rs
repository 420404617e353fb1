//! 1×2^k and 1×n lines from three glues.

use crate::assembly::{GlueTable, TileId, TileSet};
use crate::staged::StagedSystem;

const GLUES: [&str; 3] = ["a", "b", "c"];

/// Ordered pairs (west, east) of distinct glues, indexed 0..6.
const ENDS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

fn end_index(west: usize, east: usize) -> usize {
    ENDS.iter().position(|&e| e == (west, east)).expect("distinct ends")
}

fn third(a: usize, b: usize) -> usize {
    3 - a - b
}

fn line_tiles() -> (TileSet, Vec<TileId>) {
    let mut glues = GlueTable::new();
    for g in GLUES {
        glues.declare(g, 1).expect("fresh glue");
    }
    let mut tiles = TileSet::new(glues);
    let ids = ENDS
        .iter()
        .map(|&(w, e)| {
            let name = format!("t_{}{}", GLUES[w], GLUES[e]);
            tiles
                .add_tile(&name, ["null", GLUES[e], "null", GLUES[w]])
                .expect("fresh tile")
        })
        .collect();
    (tiles, ids)
}

/// Adds stages building all six 1×2^level lines for level = 0..=k; returns the system.
///
/// Stage `l` (0-based) holds bin `j` with the 1×2^l line whose end glues are `ENDS[j]`.
fn doubling(name: &str, k: u32) -> StagedSystem {
    let (tiles, ids) = line_tiles();
    let mut sys = StagedSystem::new(name, 1, tiles);
    let s0 = sys.add_stage();
    for (j, &(w, e)) in ENDS.iter().enumerate() {
        sys.add_bin(s0, &format!("l0_{}{}", GLUES[w], GLUES[e]), &[], &[ids[j]]);
    }
    for level in 1..=k {
        let s = sys.add_stage();
        for &(w, e) in &ENDS {
            let c = third(w, e);
            let from = [end_index(w, c), end_index(c, e)];
            sys.add_bin(s, &format!("l{level}_{}{}", GLUES[w], GLUES[e]), &from, &[]);
        }
    }
    sys
}

/// A 1×2^k line with end glues a (west) and b (east).
pub fn gen_line_pow2(k: u32) -> StagedSystem {
    let mut sys = doubling(&format!("line_pow2_{k}"), k);
    sys.set_output(&[end_index(0, 1)]);
    sys
}

/// A 1×n line assembled from the powers of two in n's binary expansion.
///
/// The accumulator bin holds the partial line with west glue `p` and east glue `q`; each new
/// power attaches on the west with ends (r, p), r the third glue, so every bin keeps three
/// distinct end glues in play.
pub fn gen_line(n: u64) -> StagedSystem {
    assert!(n >= 1, "line length must be positive");
    let top = 63 - n.leading_zeros();
    if n.is_power_of_two() {
        let mut sys = gen_line_pow2(top);
        sys.name = format!("line_{n}");
        return sys;
    }
    let mut sys = doubling(&format!("line_{n}"), top);
    // Accumulator ends (west, east) and its bin index in the current stage.
    let mut acc: Option<((usize, usize), usize)> = None;
    for level in 0..=top {
        let bit = n >> level & 1 == 1;
        let last = level == top;
        if !bit && !last {
            if let Some((ends, bin)) = acc {
                // Carry the accumulator forward one stage.
                let s = level as usize + 1;
                let nb = sys.add_bin(s, &format!("acc{s}"), &[bin], &[]);
                acc = Some((ends, nb));
            }
            continue;
        }
        // Pick the level line that attaches west of the accumulator.
        let (piece, ends) = match acc {
            None => (end_index(0, 1), (0, 1)),
            Some(((p, q), _)) => {
                let r = third(p, q);
                (end_index(r, p), (r, q))
            }
        };
        if last {
            let mut out = vec![piece];
            if let Some((_, bin)) = acc {
                out.push(bin);
            }
            sys.set_output(&out);
            break;
        }
        let s = level as usize + 1;
        let mut from = vec![piece];
        if let Some((_, bin)) = acc {
            from.push(bin);
        }
        // `from` refers to stage `level`; the accumulator lives one stage later.
        let nb = sys.add_bin(s, &format!("acc{s}"), &from, &[]);
        acc = Some((ends, nb));
    }
    sys
}
