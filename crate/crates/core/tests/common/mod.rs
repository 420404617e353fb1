//! Fixtures shared by the integration and acceptance tests: random shapes, a naive grid oracle
//! for bin closures, random systems, and the property suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{rngs::StdRng, seq::SliceRandom, Rng, SeedableRng};

use staged_core::assembly::{canonicalize, combine, GlueTable, Pos, Side, Supertile, TileId, TileSet};
use staged_core::dsl::{parse_system, serialize_system, structurally_equal};
use staged_core::engine::{produce_closure, Bin, ClosureBudget};
use staged_core::staged::StagedSystem;
use staged_core::verify::Shape;

/// A random polyomino of `n` cells grown from the origin.
pub fn random_polyomino(rng: &mut StdRng, n: usize) -> Shape {
    let mut cells = BTreeSet::from([Pos::new(0, 0)]);
    while cells.len() < n {
        let v: Vec<Pos> = cells.iter().copied().collect();
        cells.insert(v[rng.gen_range(0..v.len())].step(Side::ALL[rng.gen_range(0..4)]));
    }
    Shape::new(cells).unwrap()
}

/// Rows top first, `#` for a cell.
pub fn shape(rows: &[&str]) -> Shape {
    let h = rows.len() as i32;
    let cells = rows.iter().enumerate().flat_map(|(r, line)| {
        line.chars()
            .enumerate()
            .filter(|(_, c)| *c == '#')
            .map(move |(x, _)| Pos::new(x as i32, h - 1 - r as i32))
    });
    Shape::new(cells.collect::<Vec<_>>()).unwrap()
}

// ---------------------------------------------------------------------------------------------
// Naive oracle

/// A supertile as a set of (x, y, tile) with minimum coordinates zero.
pub type Cells = BTreeSet<(i32, i32, u32)>;

fn normalize(cells: impl IntoIterator<Item = (i32, i32, u32)>) -> Cells {
    let v: Vec<_> = cells.into_iter().collect();
    let x0 = v.iter().map(|c| c.0).min().unwrap_or(0);
    let y0 = v.iter().map(|c| c.1).min().unwrap_or(0);
    v.into_iter().map(|(x, y, t)| (x - x0, y - y0, t)).collect()
}

pub fn cells_of(s: &Supertile) -> Cells {
    normalize(s.cells().iter().map(|&(p, t)| (p.x, p.y, t.0)))
}

/// Glue label and strength on one side of a tile.
fn glue(tiles: &TileSet, t: u32, side: usize) -> (&str, u32) {
    let g = tiles.tile(TileId(t)).glues[side];
    (tiles.glues.label(g), tiles.glues.strength(g))
}

/// Every union of `x` and a translate of `y` that does not overlap and bonds with strength ≥ tau,
/// found by scanning each offset of the two bounding boxes.
fn oracle_combine(x: &Cells, y: &Cells, tau: u32, tiles: &TileSet) -> BTreeSet<Cells> {
    let grid: HashMap<(i32, i32), u32> = x.iter().map(|&(a, b, t)| ((a, b), t)).collect();
    let (wx, hx) = (x.iter().map(|c| c.0).max().unwrap() + 1, x.iter().map(|c| c.1).max().unwrap() + 1);
    let (wy, hy) = (y.iter().map(|c| c.0).max().unwrap() + 1, y.iter().map(|c| c.1).max().unwrap() + 1);
    // N, E, S, W as (dx, dy, index of the facing side).
    const DIRS: [(i32, i32, usize); 4] = [(0, 1, 2), (1, 0, 3), (0, -1, 0), (-1, 0, 1)];
    let mut out = BTreeSet::new();
    for dx in -wy..=wx {
        for dy in -hy..=hx {
            if y.iter().any(|&(a, b, _)| grid.contains_key(&(a + dx, b + dy))) {
                continue;
            }
            let mut strength = 0;
            for &(a, b, t) in y {
                for (side, &(ex, ey, facing)) in DIRS.iter().enumerate() {
                    if let Some(&u) = grid.get(&(a + dx + ex, b + dy + ey)) {
                        let (l1, s1) = glue(tiles, t, side);
                        let (l2, s2) = glue(tiles, u, facing);
                        if l1 == l2 && s1 > 0 && s1 == s2 {
                            strength += s1;
                        }
                    }
                }
            }
            if strength >= tau {
                out.insert(normalize(x.iter().copied().chain(y.iter().map(|&(a, b, t)| (a + dx, b + dy, t)))));
            }
        }
    }
    out
}

#[derive(Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub produced: BTreeSet<Cells>,
    /// Empty unless `complete`.
    pub terminal: BTreeSet<Cells>,
    pub complete: bool,
}

/// Closure of `seeds` among supertiles of at most `max_size` cells; `None` past `max_count`.
pub fn oracle_closure(seeds: &[Cells], tiles: &TileSet, tau: u32, max_size: usize, max_count: usize) -> Option<OracleResult> {
    let mut produced: Vec<Cells> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut complete = true;
    for s in seeds {
        if s.len() > max_size {
            complete = false;
        } else if seen.insert(s.clone()) {
            produced.push(s.clone());
        }
    }
    let mut growable = vec![false; produced.len()];
    let mut i = 0;
    while i < produced.len() {
        for j in 0..=i {
            for (a, b) in [(i, j), (j, i)] {
                let found = oracle_combine(&produced[a], &produced[b], tau, tiles);
                if found.is_empty() {
                    continue;
                }
                growable[a] = true;
                growable[b] = true;
                for z in found {
                    if z.len() > max_size {
                        complete = false;
                    } else if seen.insert(z.clone()) {
                        produced.push(z);
                        growable.push(false);
                        if produced.len() > max_count {
                            return None;
                        }
                    }
                }
            }
        }
        i += 1;
    }
    let terminal = if complete {
        produced.iter().zip(&growable).filter(|(_, g)| !**g).map(|(s, _)| s.clone()).collect()
    } else {
        BTreeSet::new()
    };
    Some(OracleResult { produced: produced.into_iter().collect(), terminal, complete })
}

/// A random tile set over `g` glues, strengths 1..=tau, each side null with probability 1/2.
pub fn random_tiles(rng: &mut StdRng, tau: u32) -> TileSet {
    let mut glues = GlueTable::new();
    let n = rng.gen_range(1..=3);
    for i in 0..n {
        glues.declare(&format!("g{i}"), rng.gen_range(1..=tau)).unwrap();
    }
    let mut tiles = TileSet::new(glues);
    for i in 0..rng.gen_range(2..=4) {
        let labels: Vec<String> = (0..4)
            .map(|_| if rng.gen_bool(0.5) { "null".to_string() } else { format!("g{}", rng.gen_range(0..n)) })
            .collect();
        tiles
            .add_tile(&format!("t{i}"), [&labels[0], &labels[1], &labels[2], &labels[3]].map(|s| s.as_str()))
            .unwrap();
    }
    tiles
}

/// A random connected supertile of `n` cells over `tiles`.
pub fn random_supertile(rng: &mut StdRng, tiles: &TileSet, n: usize) -> Supertile {
    let shape = random_polyomino(rng, n);
    canonicalize(shape.cells().iter().map(|&p| (p, TileId(rng.gen_range(0..tiles.len() as u32))))).unwrap()
}

pub struct RandomBin {
    pub tiles: TileSet,
    pub seeds: Vec<Supertile>,
    pub temperature: u32,
}

/// At most five seeds totalling at most twenty cells, τ ∈ {1, 2}.
pub fn random_bin(rng: &mut StdRng) -> RandomBin {
    let temperature = rng.gen_range(1..=2);
    let tiles = random_tiles(rng, temperature);
    let mut seeds = Vec::new();
    let mut cells = 0;
    for _ in 0..rng.gen_range(1..=5) {
        let n = rng.gen_range(1..=4).min(20 - cells);
        if n == 0 {
            break;
        }
        cells += n;
        seeds.push(random_supertile(rng, &tiles, n));
    }
    RandomBin { tiles, seeds, temperature }
}

/// Compares the engine to the oracle on one bin; `Ok(None)` when the oracle's count limit is hit.
pub fn check_against_oracle(bin: &RandomBin, max_size: usize) -> Result<Option<bool>, String> {
    let seeds: Vec<Cells> = bin.seeds.iter().map(cells_of).collect();
    let Some(expected) = oracle_closure(&seeds, &bin.tiles, bin.temperature, max_size, 200) else {
        return Ok(None);
    };
    let budget = ClosureBudget { max_supertile_size: max_size, max_distinct_supertiles: 1_000_000 };
    let got = produce_closure(&Bin::new(bin.seeds.clone(), bin.temperature), &bin.tiles, budget);
    let produced: BTreeSet<Cells> = got.produced.iter().map(cells_of).collect();
    let terminal: BTreeSet<Cells> = got.terminal.iter().map(cells_of).collect();
    if produced.len() != got.produced.len() {
        return Err("engine produced a supertile twice".into());
    }
    if got.complete != expected.complete {
        return Err(format!("complete: engine {} oracle {}", got.complete, expected.complete));
    }
    if produced != expected.produced {
        return Err(format!("produced: engine {} oracle {}", produced.len(), expected.produced.len()));
    }
    if terminal != expected.terminal {
        return Err(format!("terminal: engine {} oracle {}", terminal.len(), expected.terminal.len()));
    }
    Ok(Some(expected.complete))
}

/// Runs `bins` oracle comparisons from `seed`, drawing new bins when the oracle's count limit is hit.
pub fn oracle_suite(seed: u64, bins: usize) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut done, mut complete, mut redrawn) = (0, 0, 0);
    while done < bins {
        let bin = random_bin(&mut rng);
        match check_against_oracle(&bin, 10)? {
            None => redrawn += 1,
            Some(c) => {
                done += 1;
                complete += c as usize;
            }
        }
    }
    Ok(format!("{done} bins ({complete} finite, {} size-capped), {redrawn} redrawn", done - complete))
}

// ---------------------------------------------------------------------------------------------
// Random staged systems for the DSL round trip

pub fn random_system(rng: &mut StdRng) -> StagedSystem {
    let temperature = rng.gen_range(1..=3);
    let mut glues = GlueTable::new();
    let glue_names: Vec<String> = (0..rng.gen_range(0..=5)).map(|i| format!("g_{i}")).collect();
    for g in &glue_names {
        glues.declare(g, rng.gen_range(1..=3)).unwrap();
    }
    let mut tiles = TileSet::new(glues);
    for i in 0..rng.gen_range(1..=6) {
        let labels: Vec<String> = (0..4)
            .map(|_| match glue_names.choose(rng) {
                Some(g) if rng.gen_bool(0.6) => g.clone(),
                _ => "null".into(),
            })
            .collect();
        tiles
            .add_tile(&format!("t.{i}"), [&labels[0], &labels[1], &labels[2], &labels[3]].map(|s| s.as_str()))
            .unwrap();
    }
    let n_tiles = tiles.len() as u32;
    let mut sys = StagedSystem::new(&format!("sys-{}", rng.gen_range(0..100)), temperature, tiles);
    let mut prev = 0;
    for _ in 0..rng.gen_range(1..=4) {
        let stage = sys.add_stage();
        let count = rng.gen_range(1..=4);
        for b in 0..count {
            let from: Vec<usize> = (0..prev).filter(|_| rng.gen_bool(0.5)).collect();
            let add: Vec<TileId> = (0..n_tiles).filter(|_| rng.gen_bool(0.4)).map(TileId).collect();
            sys.add_bin(stage, &format!("b{b}"), &from, &add);
        }
        prev = count;
    }
    let mut out: Vec<usize> = (0..prev).filter(|_| rng.gen_bool(0.5)).collect();
    if out.is_empty() {
        out.push(0);
    }
    sys.set_output(&out);
    sys
}

// ---------------------------------------------------------------------------------------------
// Property suites

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

/// Canonical form is idempotent and forgets translation.
pub fn prop_canonicalize(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 1usize..16, -50i32..50, -50i32..50), |(seed, n, dx, dy)| {
        let mut rng = StdRng::seed_from_u64(seed);
        let tiles = random_tiles(&mut rng, 1);
        let s = random_supertile(&mut rng, &tiles, n);
        let moved = canonicalize(s.translated(Pos::new(dx, dy))).unwrap();
        prop_assert_eq!(&moved, &s);
        prop_assert_eq!(&canonicalize(moved.cells().to_vec()).unwrap(), &moved);
        prop_assert_eq!(moved.positions().map(|p| p.x).min(), Some(0));
        prop_assert_eq!(moved.positions().map(|p| p.y).min(), Some(0));
        Ok(())
    })
}

/// C(X, Y) = C(Y, X), and every result holds exactly |X| + |Y| cells.
pub fn prop_combine_commutes(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 1usize..7, 1usize..7, 1u32..=2), |(seed, a, b, tau)| {
        let mut rng = StdRng::seed_from_u64(seed);
        let tiles = random_tiles(&mut rng, tau);
        let x = random_supertile(&mut rng, &tiles, a);
        let y = random_supertile(&mut rng, &tiles, b);
        let xy = combine(&x, &y, tau, &tiles);
        prop_assert_eq!(&xy, &combine(&y, &x, tau, &tiles));
        prop_assert!(xy.iter().all(|z| z.size() == a + b));
        Ok(())
    })
}

/// Raising the temperature never adds combinations or produced supertiles.
pub fn prop_temperature_monotone(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 1usize..6, 1usize..6), |(seed, a, b)| {
        let mut rng = StdRng::seed_from_u64(seed);
        let tiles = random_tiles(&mut rng, 2);
        let x = random_supertile(&mut rng, &tiles, a);
        let y = random_supertile(&mut rng, &tiles, b);
        let hot: BTreeSet<_> = combine(&x, &y, 2, &tiles).into_iter().collect();
        let cold: BTreeSet<_> = combine(&x, &y, 1, &tiles).into_iter().collect();
        prop_assert!(hot.is_subset(&cold));
        let budget = ClosureBudget { max_supertile_size: 6, max_distinct_supertiles: 300 };
        let seeds = vec![x, y];
        let p1 = produce_closure(&Bin::new(seeds.clone(), 1), &tiles, budget);
        let p2 = produce_closure(&Bin::new(seeds, 2), &tiles, budget);
        if p1.exceeded != Some(staged_core::engine::BudgetExceeded::Count) {
            let cold: BTreeSet<_> = p1.produced.into_iter().collect();
            prop_assert!(p2.produced.iter().all(|s| cold.contains(s)));
        }
        Ok(())
    })
}

/// serialize → parse gives a structurally equal system and the same text.
pub fn prop_dsl_round_trip(cases: u32) -> Result<(), String> {
    run(cases, any::<u64>(), |seed| {
        let sys = random_system(&mut StdRng::seed_from_u64(seed));
        let text = serialize_system(&sys);
        let back = parse_system(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert!(structurally_equal(&sys, &back), "{}", text);
        prop_assert_eq!(serialize_system(&back), text);
        Ok(())
    })
}

pub type Property = fn(u32) -> Result<(), String>;

pub const PROPERTIES: [(&str, Property); 4] = [
    ("canonicalization idempotence", prop_canonicalize),
    ("combine commutativity", prop_combine_commutes),
    ("temperature monotonicity", prop_temperature_monotone),
    ("DSL round trip", prop_dsl_round_trip),
];

/// Terminal shapes as translation-free cell sets.
pub fn shape_set(terminal: &[Supertile], scale: i32) -> BTreeSet<Vec<Pos>> {
    terminal
        .iter()
        .map(|s| Shape::of_supertile(s).scaled(scale).cells().iter().copied().collect())
        .collect()
}

/// One tile per cell of `shape`, one unit glue per adjacency.
pub fn tile_system_for(shape: &Shape) -> TileSet {
    let mut glues = GlueTable::new();
    let mut faces: BTreeMap<(Pos, usize), String> = BTreeMap::new();
    for &p in shape.cells() {
        for s in [Side::East, Side::North] {
            let q = p.step(s);
            if shape.contains(q) {
                let g = format!("g{}", glues.len());
                glues.declare(&g, 1).unwrap();
                faces.insert((p, s.index()), g.clone());
                faces.insert((q, s.opposite().index()), g);
            }
        }
    }
    let mut tiles = TileSet::new(glues);
    for (i, &p) in shape.cells().iter().enumerate() {
        let labels = Side::ALL.map(|s| faces.get(&(p, s.index())).cloned().unwrap_or_else(|| "null".into()));
        tiles
            .add_tile(&format!("t{i}"), [&labels[0], &labels[1], &labels[2], &labels[3]].map(|s| s.as_str()))
            .unwrap();
    }
    tiles
}
