//! Staged assembly systems: mix graphs, per-bin tile additions, execution and metrics.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::assembly::{Supertile, TileId, TileSet};
use crate::engine::{produce_closure, Bin, BinResult, BudgetExceeded, ClosureBudget};
use crate::verify::{derivation_events, AttachmentEvent};

/// Zero-based (stage, bin) coordinates of a mix-graph vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinRef {
    pub stage: usize,
    pub bin: usize,
}

impl fmt::Display for BinRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {} bin {}", self.stage + 1, self.bin + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinNode {
    pub name: String,
    /// T_{i,j}.
    pub additions: Vec<TileId>,
}

/// An r-stage mix graph. Edges normally run from stage i to stage i+1; outputs are last-stage bins.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MixGraph {
    pub stages: Vec<Vec<BinNode>>,
    pub edges: Vec<(BinRef, BinRef)>,
    pub output: Vec<BinRef>,
}

impl MixGraph {
    pub fn predecessors(&self, to: BinRef) -> impl Iterator<Item = BinRef> + '_ {
        self.edges.iter().filter(move |e| e.1 == to).map(|e| e.0)
    }

    pub fn node(&self, r: BinRef) -> Option<&BinNode> {
        self.stages.get(r.stage).and_then(|s| s.get(r.bin))
    }

    /// Bins from which the output node is reachable.
    pub fn feeding_output(&self) -> HashSet<BinRef> {
        let mut seen: HashSet<BinRef> = self.output.iter().copied().collect();
        let mut stack: Vec<BinRef> = self.output.clone();
        while let Some(r) = stack.pop() {
            for p in self.predecessors(r) {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    }
}

/// ⟨M, {T_ij}, τ⟩ together with the tile types and glues it uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagedSystem {
    pub name: String,
    pub temperature: u32,
    pub tiles: TileSet,
    pub graph: MixGraph,
}

impl StagedSystem {
    pub fn new(name: &str, temperature: u32, tiles: TileSet) -> Self {
        StagedSystem {
            name: name.to_string(),
            temperature,
            tiles,
            graph: MixGraph::default(),
        }
    }

    /// Appends an empty stage and returns its index.
    pub fn add_stage(&mut self) -> usize {
        self.graph.stages.push(Vec::new());
        self.graph.stages.len() - 1
    }

    /// Adds a bin to `stage` fed by bins `from` of the previous stage.
    pub fn add_bin(&mut self, stage: usize, name: &str, from: &[usize], add: &[TileId]) -> usize {
        let bin = self.graph.stages[stage].len();
        self.graph.stages[stage].push(BinNode {
            name: name.to_string(),
            additions: dedup(add),
        });
        for &f in from {
            self.graph.edges.push((BinRef { stage: stage - 1, bin: f }, BinRef { stage, bin }));
        }
        bin
    }

    /// Marks bins of the last stage as feeding the output node.
    pub fn set_output(&mut self, bins: &[usize]) {
        let last = self.graph.stages.len() - 1;
        self.graph.output = bins.iter().map(|&b| BinRef { stage: last, bin: b }).collect();
    }

    pub fn stage_count(&self) -> usize {
        self.graph.stages.len()
    }
}

fn dedup(ids: &[TileId]) -> Vec<TileId> {
    let set: BTreeSet<TileId> = ids.iter().copied().collect();
    set.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    InvalidEdge,
    UnknownGlue,
    UnknownTile,
    StrengthAboveTemperature,
    ZeroTemperature,
    EmptyOutput,
    DuplicateBin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub at: Option<BinRef>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.at {
            Some(r) => write!(f, "{r}: {:?}: {}", self.kind, self.message),
            None => write!(f, "{:?}: {}", self.kind, self.message),
        }
    }
}

/// Structural problems with a system; empty when the system can be executed.
pub fn validate(system: &StagedSystem) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let diag = |kind, at, message: String| Diagnostic { kind, at, message };
    let g = &system.graph;
    let glue_count = system.tiles.glues.len() + 1;
    if system.temperature == 0 {
        out.push(diag(DiagnosticKind::ZeroTemperature, None, "temperature must be positive".into()));
    }
    for (id, label, strength) in system.tiles.glues.iter() {
        if strength > system.temperature {
            out.push(diag(
                DiagnosticKind::StrengthAboveTemperature,
                None,
                format!("glue `{label}` (#{}) has strength {strength} > temperature {}", id.0, system.temperature),
            ));
        }
    }
    for (_, t) in system.tiles.iter() {
        for g in t.glues {
            if g.0 as usize >= glue_count {
                out.push(diag(
                    DiagnosticKind::UnknownGlue,
                    None,
                    format!("tile `{}` uses undeclared glue #{}", t.name, g.0),
                ));
            }
        }
    }
    for (i, stage) in g.stages.iter().enumerate() {
        let mut names = HashSet::new();
        for (j, node) in stage.iter().enumerate() {
            let at = Some(BinRef { stage: i, bin: j });
            if !names.insert(node.name.as_str()) {
                out.push(diag(DiagnosticKind::DuplicateBin, at, format!("bin `{}` declared twice", node.name)));
            }
            for t in &node.additions {
                if t.0 as usize >= system.tiles.len() {
                    out.push(diag(DiagnosticKind::UnknownTile, at, format!("tile #{} is not declared", t.0)));
                }
            }
        }
    }
    for &(from, to) in &g.edges {
        if g.node(from).is_none() || g.node(to).is_none() || to.stage != from.stage + 1 {
            out.push(diag(
                DiagnosticKind::InvalidEdge,
                Some(to),
                format!("edge from {from} to {to} must join consecutive stages"),
            ));
        }
    }
    if !g.stages.is_empty() {
        if g.output.is_empty() {
            out.push(diag(DiagnosticKind::EmptyOutput, None, "output node has no incoming edge".into()));
        }
        let last = g.stages.len() - 1;
        for &o in &g.output {
            if o.stage != last || g.node(o).is_none() {
                out.push(diag(
                    DiagnosticKind::InvalidEdge,
                    Some(o),
                    format!("output edge from {o} must leave the last stage"),
                ));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecuteError {
    #[error("invalid system: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("execution aborted at {at}: {reason}")]
    Aborted { at: String, reason: BudgetExceeded },
}

/// Per-bin results of running a staged system.
#[derive(Debug, Clone)]
pub struct Execution {
    /// `bins[i][j]` is `None` for bins with nothing to mix.
    pub bins: Vec<Vec<Option<BinResult>>>,
    pub output: BinResult,
}

/// Runs every stage in order; bins of one stage run in parallel.
pub fn execute(system: &StagedSystem, budget: ClosureBudget) -> Result<Execution, ExecuteError> {
    let diags = validate(system);
    if !diags.is_empty() {
        return Err(ExecuteError::Invalid(diags));
    }
    let g = &system.graph;
    let tau = system.temperature;
    let needed = g.feeding_output();
    let mut bins: Vec<Vec<Option<BinResult>>> = Vec::with_capacity(g.stages.len());
    for (i, stage) in g.stages.iter().enumerate() {
        let results: Vec<Option<BinResult>> = stage
            .par_iter()
            .enumerate()
            .map(|(j, node)| {
                let here = BinRef { stage: i, bin: j };
                let mut seeds: Vec<Supertile> = node.additions.iter().map(|&t| Supertile::single(t)).collect();
                let mut blocked = false;
                for p in g.predecessors(here) {
                    match &bins[p.stage][p.bin] {
                        Some(r) if r.complete => seeds.extend(r.terminal.iter().cloned()),
                        Some(_) => blocked = true,
                        None => {}
                    }
                }
                if blocked || seeds.is_empty() {
                    return None;
                }
                Some(produce_closure(&Bin::new(seeds, tau), &system.tiles, budget))
            })
            .collect();
        for (j, r) in results.iter().enumerate() {
            let here = BinRef { stage: i, bin: j };
            if let Some(r) = r {
                if let (false, Some(reason)) = (r.complete, r.exceeded) {
                    if needed.contains(&here) {
                        return Err(ExecuteError::Aborted {
                            at: format!("{here} (`{}`)", stage[j].name),
                            reason,
                        });
                    }
                }
            }
        }
        bins.push(results);
    }
    let mut seeds = Vec::new();
    for o in &g.output {
        if let Some(r) = &bins[o.stage][o.bin] {
            seeds.extend(r.terminal.iter().cloned());
        }
    }
    let output = produce_closure(&Bin::new(seeds, tau), &system.tiles, budget);
    if let (false, Some(reason)) = (output.complete, output.exceeded) {
        return Err(ExecuteError::Aborted {
            at: "output node".into(),
            reason,
        });
    }
    Ok(Execution { bins, output })
}

impl Execution {
    pub fn result(&self, r: BinRef) -> Option<&BinResult> {
        self.bins.get(r.stage)?.get(r.bin)?.as_ref()
    }

    /// A witness derivation (all attachment events across all stages) for each output terminal.
    pub fn witness_trace(&self, system: &StagedSystem) -> Vec<Vec<AttachmentEvent>> {
        (0..self.output.terminal.len())
            .map(|k| {
                let idx = self.output.index_of(&self.output.terminal[k]).expect("terminal is produced");
                let mut events = Vec::new();
                let preds = system.graph.output.clone();
                self.collect(system, &self.output, idx, &preds, &mut events);
                events
            })
            .collect()
    }

    fn collect(
        &self,
        system: &StagedSystem,
        result: &BinResult,
        idx: usize,
        preds: &[BinRef],
        events: &mut Vec<AttachmentEvent>,
    ) {
        let local = derivation_events(result, idx);
        // Seeds used by this derivation come from predecessor terminals.
        let mut leaves = Vec::new();
        let mut stack = vec![idx];
        while let Some(k) = stack.pop() {
            match result.derivations[k] {
                Some(d) => {
                    stack.push(d.left);
                    stack.push(d.right);
                }
                None => leaves.push(k),
            }
        }
        leaves.sort();
        leaves.dedup();
        for leaf in leaves {
            let s = &result.produced[leaf];
            if s.size() == 1 {
                continue;
            }
            for &p in preds {
                if let Some(r) = self.result(p) {
                    if r.terminal.binary_search(s).is_ok() {
                        let pidx = r.index_of(s).expect("terminal is produced");
                        let pp: Vec<BinRef> = system.graph.predecessors(p).collect();
                        self.collect(system, r, pidx, &pp, events);
                        break;
                    }
                }
            }
        }
        events.extend(local);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Metrics {
    pub glue_count: usize,
    pub tile_count: usize,
    pub bin_count: usize,
    pub stage_count: usize,
    pub temperature: u32,
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "glues={} tiles={} stages={} bins={} temperature={}",
            self.glue_count, self.tile_count, self.stage_count, self.bin_count, self.temperature
        )
    }
}

/// Bins of `stage` that receive tiles or incoming edges.
pub fn active_bins(system: &StagedSystem, stage: usize) -> usize {
    let g = &system.graph;
    g.stages[stage]
        .iter()
        .enumerate()
        .filter(|(j, node)| {
            let here = BinRef { stage, bin: *j };
            !node.additions.is_empty() || g.edges.iter().any(|e| e.1 == here)
        })
        .count()
}

pub fn metrics(system: &StagedSystem) -> Metrics {
    let g = &system.graph;
    let mut tiles = BTreeSet::new();
    for stage in &g.stages {
        for node in stage {
            tiles.extend(node.additions.iter().copied());
        }
    }
    let mut glues = BTreeSet::new();
    for &t in &tiles {
        for gl in system.tiles.tile(t).glues {
            if !gl.is_null() {
                glues.insert(gl);
            }
        }
    }
    let bin_count = (0..g.stages.len()).map(|i| active_bins(system, i)).max().unwrap_or(0);
    Metrics {
        glue_count: glues.len(),
        tile_count: tiles.len(),
        bin_count,
        stage_count: g.stages.len(),
        temperature: if g.stages.is_empty() { 0 } else { system.temperature },
    }
}
