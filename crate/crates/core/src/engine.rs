//! Produced/terminal closure of a bin under two-handed combination.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::assembly::{combine_indexed, IndexedSupertile, Placement, Supertile, TileSet};

/// A bin: seed supertiles mixed at one temperature.
#[derive(Debug, Clone)]
pub struct Bin {
    pub seeds: Vec<Supertile>,
    pub temperature: u32,
}

impl Bin {
    pub fn new(mut seeds: Vec<Supertile>, temperature: u32) -> Self {
        seeds.sort();
        seeds.dedup();
        Bin { seeds, temperature }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureBudget {
    pub max_supertile_size: usize,
    pub max_distinct_supertiles: usize,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget {
            max_supertile_size: 10_000,
            max_distinct_supertiles: 100_000,
        }
    }
}

impl ClosureBudget {
    /// Budget sized for a known target of `cells` cells.
    pub fn for_target(cells: usize) -> Self {
        ClosureBudget {
            max_supertile_size: (4 * cells).max(1),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetExceeded {
    /// Some combination would exceed `max_supertile_size`.
    Size,
    /// More than `max_distinct_supertiles` were produced.
    Count,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetExceeded::Size => f.write_str("supertile size budget exceeded"),
            BudgetExceeded::Count => f.write_str("distinct supertile budget exceeded"),
        }
    }
}

/// How a produced supertile was first derived: `produced[left]` with `produced[right]` placed at `placement`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Derivation {
    pub left: usize,
    pub right: usize,
    pub placement: Placement,
}

#[derive(Debug, Clone)]
pub struct BinResult {
    /// P′, in discovery order; seeds come first.
    pub produced: Vec<Supertile>,
    /// P, sorted. Empty unless `complete`.
    pub terminal: Vec<Supertile>,
    pub complete: bool,
    pub exceeded: Option<BudgetExceeded>,
    /// Parallel to `produced`; `None` for seeds.
    pub derivations: Vec<Option<Derivation>>,
}

impl BinResult {
    pub fn unique(&self) -> bool {
        unique_production(self)
    }

    pub fn index_of(&self, s: &Supertile) -> Option<usize> {
        self.produced.iter().position(|p| p == s)
    }
}

/// Least fixed point of the seeds under combination, restricted to supertiles within the size budget.
///
/// The result set does not depend on processing order as long as the count budget is not hit.
pub fn produce_closure(bin: &Bin, tiles: &TileSet, budget: ClosureBudget) -> BinResult {
    let tau = bin.temperature.max(1);
    let mut items: Vec<Arc<IndexedSupertile>> = Vec::new();
    let mut index: HashMap<Supertile, usize> = HashMap::new();
    let mut derivations: Vec<Option<Derivation>> = Vec::new();
    let mut growable: Vec<bool> = Vec::new();
    let mut exceeded = None;

    for s in &bin.seeds {
        if index.contains_key(s) {
            continue;
        }
        if s.size() > budget.max_supertile_size {
            exceeded = Some(BudgetExceeded::Size);
            continue;
        }
        index.insert(s.clone(), items.len());
        items.push(Arc::new(IndexedSupertile::new(s.clone(), tiles)));
        derivations.push(None);
        growable.push(false);
    }

    let mut next = 0;
    'outer: while next < items.len() {
        let i = next;
        next += 1;
        let xi = Arc::clone(&items[i]);
        let partners: Vec<Arc<IndexedSupertile>> = items[..=i].to_vec();
        let found: Vec<(usize, Vec<crate::assembly::Combination>)> = partners
            .par_iter()
            .enumerate()
            .map(|(j, yj)| (j, combine_indexed(&xi, yj, tau, tiles)))
            .filter(|(_, c)| !c.is_empty())
            .collect();
        for (j, combos) in found {
            growable[i] = true;
            growable[j] = true;
            for c in combos {
                if c.result.size() > budget.max_supertile_size {
                    exceeded.get_or_insert(BudgetExceeded::Size);
                    continue;
                }
                if index.contains_key(&c.result) {
                    continue;
                }
                if items.len() >= budget.max_distinct_supertiles {
                    exceeded = Some(BudgetExceeded::Count);
                    break 'outer;
                }
                index.insert(c.result.clone(), items.len());
                items.push(Arc::new(IndexedSupertile::new(c.result, tiles)));
                derivations.push(Some(Derivation {
                    left: i,
                    right: j,
                    placement: c.placement,
                }));
                growable.push(false);
            }
        }
    }

    let complete = exceeded.is_none();
    let produced: Vec<Supertile> = items.iter().map(|s| s.supertile.clone()).collect();
    let mut terminal = Vec::new();
    if complete {
        terminal = produced
            .iter()
            .zip(&growable)
            .filter(|(_, g)| !**g)
            .map(|(s, _)| s.clone())
            .collect();
        terminal.sort();
    }
    BinResult {
        produced,
        terminal,
        complete,
        exceeded,
        derivations,
    }
}

/// Finite closure with at least one terminal supertile.
pub fn unique_production(result: &BinResult) -> bool {
    result.complete && !result.terminal.is_empty()
}

/// Unique production of exactly one terminal supertile whose cells equal `target` up to translation.
pub fn uniquely_assembles_shape(result: &BinResult, target: &crate::verify::Shape) -> bool {
    unique_production(result)
        && result.terminal.len() == 1
        && crate::verify::Shape::of_supertile(&result.terminal[0]) == *target
}
