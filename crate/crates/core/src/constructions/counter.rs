//! A temperature-1 binary counter from two batches of string supertiles.
//!
//! A string supertile is a row of bit units joined by connector tiles. Each unit is two body
//! cells; the south face has one tooth under the first cell for a 1 and under the second for a 0,
//! the north face one bump over the second cell for a 1 and over the first for a 0. When a row
//! sits on another the teeth and bumps share one layer, and they collide exactly where the upper
//! row's south bit differs from the lower row's north bit. Rows bond only through their end caps,
//! whose glues are distinct for the west and east ends, so rows can only meet aligned.
//!
//! Strings of length 2i come from strings of length i: S (same value on both faces), I (north =
//! south + 1) and R (all ones below, all zeros above) are each split into a copy with connector
//! `a` on the east and one with connector `A` on the west, then S = Sa·SA, I = Sa·IA ∪ Ia·RA and
//! R = Ra·RA. The incrementing batch is I with one pair of caps, the identity batch S with the
//! caps' glues swapped, so rows alternate between batches and each row sits on the row one less.
//! R is left out of the final mix, which would otherwise close the chain into a cycle.

use std::collections::BTreeMap;

use crate::assembly::{GlueTable, Pos, Supertile, TileId, TileSet};
use crate::staged::{BinRef, StagedSystem};

use super::{ConstructionError, Face};

/// Bins holding S_i, I_i and R_i for strings of length `len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterSets {
    pub len: usize,
    pub same: BinRef,
    pub increment: BinRef,
    pub rollover: BinRef,
}

const GLUES: [&str; 12] = ["red", "green", "x", "u", "v", "w", "kl", "kr", "pl", "pr", "ql", "qr"];

struct Kit {
    tiles: TileSet,
}

impl Kit {
    fn new() -> Self {
        let mut glues = GlueTable::new();
        for g in GLUES {
            glues.declare(g, 1).expect("fresh glue");
        }
        Kit { tiles: TileSet::new(glues) }
    }

    fn tile(&mut self, name: &str, nesw: [&str; 4]) -> TileId {
        self.tiles.add_tile(name, nesw).expect("fresh tile")
    }
}

/// Tiles of the bit unit with south bit `s` and north bit `n`.
fn unit_tiles(kit: &mut Kit, s: bool, n: bool) -> Vec<TileId> {
    let (s, n) = (s as u8, n as u8);
    let left = kit.tile(
        &format!("bitL_{s}{n}"),
        [if n == 0 { "w" } else { "null" }, "u", if s == 1 { "v" } else { "null" }, "red"],
    );
    let right = kit.tile(
        &format!("bitR_{s}{n}"),
        [if n == 1 { "w" } else { "null" }, "green", if s == 0 { "v" } else { "null" }, "u"],
    );
    vec![left, right]
}

struct Build {
    sys: StagedSystem,
}

impl Build {
    fn stage(&mut self) -> usize {
        self.sys.add_stage()
    }

    fn bin(&mut self, stage: usize, name: &str, from: &[usize], add: &[TileId]) -> usize {
        self.sys.add_bin(stage, name, from, add)
    }
}

/// The counter system and the S/I/R bins of every level, shortest strings first.
pub fn gen_counter_with_sets(k: u32) -> Result<(StagedSystem, Vec<CounterSets>), ConstructionError> {
    if k > 4 {
        return Err(ConstructionError::InvalidSize(format!("counter level {k} is beyond desk scale")));
    }
    let mut kit = Kit::new();
    let tooth = kit.tile("tooth", ["v", "null", "null", "null"]);
    let bump = kit.tile("bump", ["null", "null", "w", "null"]);
    let units: Vec<Vec<TileId>> = [(false, false), (true, true), (false, true), (true, false)]
        .iter()
        .map(|&(s, n)| {
            let mut v = unit_tiles(&mut kit, s, n);
            v.extend([tooth, bump]);
            v
        })
        .collect();
    let con_a = kit.tile("a", ["null", "x", "null", "green"]);
    let con_big_a = kit.tile("A", ["null", "red", "null", "x"]);
    // Caps: (body, post) for the west and east ends of each batch.
    let mut cap = |name: &str, west: bool, south: &str, north: &str| {
        let k = if west { "kl" } else { "kr" };
        let (e, w) = if west { ("red", "null") } else { ("null", "green") };
        let body = kit.tile(&format!("cap_{name}"), [k, e, south, w]);
        let post = kit.tile(&format!("post_{name}"), [north, "null", k, "null"]);
        [body, post]
    };
    let inc_caps: Vec<TileId> = [cap("inc_w", true, "pl", "ql"), cap("inc_e", false, "pr", "qr")].concat();
    let same_caps: Vec<TileId> = [cap("same_w", true, "ql", "pl"), cap("same_e", false, "qr", "pr")].concat();

    let mut b = Build {
        sys: StagedSystem::new(&format!("counter_{k}"), 1, kit.tiles),
    };
    let s0 = b.stage();
    let unit_bins: Vec<usize> = units
        .iter()
        .enumerate()
        .map(|(j, tiles)| b.bin(s0, &format!("unit{j}"), &[], tiles))
        .collect();
    let s1 = b.stage();
    let mut sets = vec![CounterSets {
        len: 1,
        same: BinRef { stage: s1, bin: b.bin(s1, "S1", &[unit_bins[0], unit_bins[1]], &[]) },
        increment: BinRef { stage: s1, bin: b.bin(s1, "I1", &[unit_bins[2]], &[]) },
        rollover: BinRef { stage: s1, bin: b.bin(s1, "R1", &[unit_bins[3]], &[]) },
    }];
    for _ in 0..k {
        let prev = *sets.last().expect("base level");
        let len = prev.len * 2;
        let split = b.stage();
        let mut halves = BTreeMap::new();
        for (set, r) in [("S", prev.same), ("I", prev.increment), ("R", prev.rollover)] {
            halves.insert((set, 'a'), b.bin(split, &format!("{set}{}a", prev.len), &[r.bin], &[con_a]));
            halves.insert((set, 'A'), b.bin(split, &format!("{set}{}A", prev.len), &[r.bin], &[con_big_a]));
        }
        let join = b.stage();
        let same = b.bin(join, &format!("S{len}"), &[halves[&("S", 'a')], halves[&("S", 'A')]], &[]);
        let low = b.bin(join, &format!("I{len}lo"), &[halves[&("S", 'a')], halves[&("I", 'A')]], &[]);
        let high = b.bin(join, &format!("I{len}hi"), &[halves[&("I", 'a')], halves[&("R", 'A')]], &[]);
        let roll = b.bin(join, &format!("R{len}"), &[halves[&("R", 'a')], halves[&("R", 'A')]], &[]);
        let union = b.stage();
        sets.push(CounterSets {
            len,
            same: BinRef { stage: union, bin: b.bin(union, &format!("S{len}"), &[same], &[]) },
            increment: BinRef { stage: union, bin: b.bin(union, &format!("I{len}"), &[low, high], &[]) },
            rollover: BinRef { stage: union, bin: b.bin(union, &format!("R{len}"), &[roll], &[]) },
        });
    }
    let top = *sets.last().expect("levels");
    let capped = b.stage();
    let inc = b.bin(capped, "increment", &[top.increment.bin], &inc_caps);
    let same = b.bin(capped, "identity", &[top.same.bin], &same_caps);
    let last = b.stage();
    let out = b.bin(last, "counter", &[inc, same], &[]);
    b.sys.set_output(&[out]);
    Ok((b.sys, sets))
}

/// Two batches of rows whose unique terminal is the chain counting 0..2^(2^k) − 1 upwards.
pub fn gen_counter(k: u32) -> Result<StagedSystem, ConstructionError> {
    gen_counter_with_sets(k).map(|(sys, _)| sys)
}

/// Bits (west to east) of the counter row whose body lies at height `y` in `s`.
fn row_bits(s: &Supertile, tiles: &TileSet, y: i32, face: Face) -> Result<String, ConstructionError> {
    let bad = |why: &str| ConstructionError::NotAStringSupertile(why.to_string());
    let mut lefts: Vec<Pos> = s
        .cells()
        .iter()
        .filter(|(p, t)| p.y == y && tiles.tile(*t).name.starts_with("bitL_"))
        .map(|(p, _)| *p)
        .collect();
    if lefts.is_empty() {
        return Err(bad("no bit units"));
    }
    lefts.sort_by_key(|p| p.x);
    let (dy, mark) = match face {
        Face::North => (1, "bump"),
        Face::South => (-1, "tooth"),
    };
    let marked = |x: i32| s.get(Pos::new(x, y + dy)).is_some_and(|t| tiles.tile(t).name == mark);
    lefts
        .iter()
        .map(|p| {
            let (first, second) = (marked(p.x), marked(p.x + 1));
            match (face, first, second) {
                (Face::South, true, false) | (Face::North, false, true) => Ok('1'),
                (Face::South, false, true) | (Face::North, true, false) => Ok('0'),
                _ => Err(bad("a bit unit has no single mark on this face")),
            }
        })
        .collect()
}

/// Bits of a single string supertile (a counter row), most significant first.
pub fn decode_row(s: &Supertile, tiles: &TileSet, face: Face) -> Result<String, ConstructionError> {
    let ys: std::collections::BTreeSet<i32> = s
        .cells()
        .iter()
        .filter(|(_, t)| tiles.tile(*t).name.starts_with("bitL_"))
        .map(|(p, _)| p.y)
        .collect();
    match ys.len() {
        1 => row_bits(s, tiles, *ys.iter().next().expect("one row"), face),
        _ => Err(ConstructionError::NotAStringSupertile(format!("{} rows", ys.len()))),
    }
}

/// (south, north) bits of every row of a counter chain, bottom to top.
pub fn decode_chain(s: &Supertile, tiles: &TileSet) -> Result<Vec<(String, String)>, ConstructionError> {
    let ys: std::collections::BTreeSet<i32> = s
        .cells()
        .iter()
        .filter(|(_, t)| tiles.tile(*t).name.starts_with("bitL_"))
        .map(|(p, _)| p.y)
        .collect();
    ys.iter()
        .map(|&y| Ok((row_bits(s, tiles, y, Face::South)?, row_bits(s, tiles, y, Face::North)?)))
        .collect()
}

/// Distinct values read bottom to top off the rows of a counter chain.
pub fn chain_values(s: &Supertile, tiles: &TileSet) -> Result<Vec<u64>, ConstructionError> {
    let mut out: Vec<u64> = Vec::new();
    for (south, north) in decode_chain(s, tiles)? {
        for bits in [south, north] {
            let v = u64::from_str_radix(&bits, 2).expect("binary digits");
            if out.last() != Some(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ClosureBudget;
    use crate::staged::{active_bins, execute, validate};

    fn run(k: u32) -> (StagedSystem, crate::staged::Execution) {
        let sys = gen_counter(k).unwrap();
        assert!(validate(&sys).is_empty(), "{:?}", validate(&sys));
        let ex = execute(&sys, ClosureBudget::default()).unwrap();
        (sys, ex)
    }

    #[test]
    fn counts_up() {
        for k in 0..=2u32 {
            let (sys, ex) = run(k);
            assert!(ex.output.unique(), "k={k}: {} terminals", ex.output.terminal.len());
            let values = chain_values(&ex.output.terminal[0], &sys.tiles).unwrap();
            let top = (1u64 << (1u32 << k)) - 1;
            assert_eq!(values, (0..=top).collect::<Vec<_>>(), "k={k}");
            let rows = decode_chain(&ex.output.terminal[0], &sys.tiles).unwrap();
            assert_eq!(rows.len() as u64, 2 * top + 1);
        }
    }

    #[test]
    fn level_sets_have_the_right_strings() {
        let (sys, sets) = gen_counter_with_sets(2).unwrap();
        let ex = execute(&sys, ClosureBudget::default()).unwrap();
        for set in &sets {
            let len = set.len;
            let read = |r: BinRef| -> Vec<(String, String)> {
                let mut v: Vec<_> = ex
                    .result(r)
                    .unwrap()
                    .terminal
                    .iter()
                    .map(|s| (decode_row(s, &sys.tiles, Face::South).unwrap(), decode_row(s, &sys.tiles, Face::North).unwrap()))
                    .collect();
                v.sort();
                v
            };
            let bits = |v: u64| format!("{v:0len$b}");
            let all = 0..1u64 << len;
            assert_eq!(read(set.same), all.clone().map(|v| (bits(v), bits(v))).collect::<Vec<_>>());
            let top = (1u64 << len) - 1;
            assert_eq!(read(set.increment), (0..top).map(|v| (bits(v), bits(v + 1))).collect::<Vec<_>>());
            assert_eq!(read(set.rollover), vec![(bits(top), bits(0))]);
        }
    }

    #[test]
    fn six_bins_and_three_stages_per_level() {
        let (sys, sets) = gen_counter_with_sets(2).unwrap();
        for w in sets.windows(2) {
            assert_eq!(w[1].same.stage - w[0].same.stage, 3);
            for stage in w[0].same.stage + 1..=w[1].same.stage {
                assert!(active_bins(&sys, stage) <= 6);
            }
        }
    }

    #[test]
    fn rows_meet_only_on_matching_values() {
        use crate::assembly::combine;
        let (sys, _) = gen_counter_with_sets(2).unwrap();
        let ex = execute(&sys, ClosureBudget::default()).unwrap();
        let inputs = sys.graph.predecessors(sys.graph.output[0]).collect::<Vec<_>>();
        let rows = |r: BinRef| ex.result(r).unwrap().terminal.clone();
        let (inc, same) = (rows(inputs[0]), rows(inputs[1]));
        let value = |s: &Supertile, f| u64::from_str_radix(&decode_row(s, &sys.tiles, f).unwrap(), 2).unwrap();
        for x in &inc {
            for y in &same {
                let joined = combine(x, y, 1, &sys.tiles);
                let below = value(y, Face::North) == value(x, Face::South);
                let above = value(x, Face::North) == value(y, Face::South);
                assert_eq!(joined.len(), below as usize + above as usize);
            }
        }
    }

    #[test]
    fn value_six_reads_0110() {
        let (sys, sets) = gen_counter_with_sets(2).unwrap();
        let ex = execute(&sys, ClosureBudget::default()).unwrap();
        let same = ex.result(sets[2].same).unwrap();
        let six = same
            .terminal
            .iter()
            .find(|s| decode_row(s, &sys.tiles, Face::North).unwrap() == "0110")
            .expect("row for 6");
        assert_eq!(decode_row(six, &sys.tiles, Face::South).unwrap(), "0110");
    }
}
