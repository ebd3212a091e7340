//! Exhaustive search over swap protocols and their catalyst fixed points.
//!
//! Work is linear in the catalyst distribution and efficiency is
//! linear-fractional with denominator `Q_h`, so both optima over the
//! fixed-point polytope are attained at a vertex; only vertices are scored.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::protocol::{protocol_partitions, ProtocolMode, SwapProtocol, PERMUTATION_LEVEL_CAP};
use crate::state::{BlockWeights, ThermalQubit};
use crate::thermo::{evaluate_vertices_unchecked, laws_check, CycleResult, MIN_WORK};

/// Largest transposition search run without an explicit override (`d ≤ 3`).
pub const SEARCH_TRANSPOSITION_LEVEL_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Efficiency,
    Work,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTask {
    pub d: usize,
    pub mode: ProtocolMode,
    pub objective: Objective,
    pub min_work: f64,
    pub hot: ThermalQubit,
    pub cold: ThermalQubit,
    /// Keep only the best `top` engines.
    pub top: Option<usize>,
    /// Restrict to protocols with this many external swaps.
    pub external_swaps: Option<usize>,
    /// Restrict to protocols with this many internal swaps.
    pub internal_swaps: Option<usize>,
    pub allow_large: bool,
}

impl SearchTask {
    pub fn new(d: usize, mode: ProtocolMode, objective: Objective, hot: ThermalQubit, cold: ThermalQubit) -> Self {
        Self {
            d,
            mode,
            objective,
            min_work: MIN_WORK,
            hot,
            cold,
            top: None,
            external_swaps: None,
            internal_swaps: None,
            allow_large: false,
        }
    }

    fn admits(&self, proto: &SwapProtocol) -> bool {
        let ext_ok = self.external_swaps.is_none_or(|n| proto.external_count() == Some(n));
        let int_ok = self.internal_swaps.is_none_or(|n| proto.internal_count() == Some(n));
        ext_ok && int_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchEntry {
    pub protocol: SwapProtocol,
    pub result: CycleResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub entries: Vec<SearchEntry>,
    pub scanned: u64,
    pub engines: u64,
}

fn check_search_cap(d: usize, mode: ProtocolMode, allow_large: bool) -> Result<()> {
    if d == 0 {
        return Err(domain("catalyst dimension must be at least 1"));
    }
    let (cap, what) = match mode {
        ProtocolMode::Transpositions => (SEARCH_TRANSPOSITION_LEVEL_CAP, "transposition search"),
        ProtocolMode::Permutations => (PERMUTATION_LEVEL_CAP, "permutation search"),
    };
    if 4 * d > cap && !allow_large {
        return Err(Error::CapExceeded {
            what,
            levels: 4 * d,
            cap,
        });
    }
    Ok(())
}

fn objective_value(objective: Objective, r: &CycleResult) -> (f64, f64) {
    let eta = r.eta.unwrap_or(f64::NEG_INFINITY);
    match objective {
        Objective::Efficiency => (eta, r.work),
        Objective::Work => (r.work, eta),
    }
}

/// Best first: objective, then the other quantity, then canonical protocol order.
fn rank(objective: Objective, x: &SearchEntry, y: &SearchEntry) -> Ordering {
    let (xa, xb) = objective_value(objective, &x.result);
    let (ya, yb) = objective_value(objective, &y.result);
    ya.total_cmp(&xa)
        .then(yb.total_cmp(&xb))
        .then_with(|| x.protocol.cmp(&y.protocol))
}

/// Best qualifying vertex of one protocol, if any.
fn best_vertex(task: &SearchTask, results: Vec<CycleResult>) -> Option<CycleResult> {
    results
        .into_iter()
        .filter(|r| r.work > task.min_work && laws_check(r, &task.hot, &task.cold).passed())
        .filter(|r| task.objective == Objective::Work || r.eta.is_some())
        .reduce(|best, r| {
            let (ra, rb) = objective_value(task.objective, &r);
            let (ba, bb) = objective_value(task.objective, &best);
            if ra > ba || (ra == ba && rb > bb) {
                r
            } else {
                best
            }
        })
}

fn trim(objective: Objective, entries: &mut Vec<SearchEntry>, top: Option<usize>) {
    entries.sort_by(|x, y| rank(objective, x, y));
    if let Some(n) = top {
        entries.truncate(n);
    }
}

/// Scans every protocol of the task, scores each at its fixed-point vertices
/// and ranks the engines.
///
/// Runs on the current rayon pool; the output does not depend on its size.
pub fn optimize(task: &SearchTask) -> Result<SearchResult> {
    check_search_cap(task.d, task.mode, task.allow_large)?;
    let parts = protocol_partitions(task.d, task.mode, true)?;
    let weights = BlockWeights::new(&task.hot, &task.cold);
    let partials: Vec<(Vec<SearchEntry>, u64, u64)> = parts
        .par_iter()
        .map(|part| {
            let mut entries = Vec::new();
            let (mut scanned, mut engines) = (0u64, 0u64);
            for proto in part.protocols().filter(|p| task.admits(p)) {
                scanned += 1;
                let vertices = evaluate_vertices_unchecked(&proto, &task.hot, &task.cold, &weights);
                if let Some(result) = best_vertex(task, vertices) {
                    engines += 1;
                    entries.push(SearchEntry {
                        protocol: proto,
                        result,
                    });
                    if task.top.is_some_and(|n| entries.len() > 4 * n.max(64)) {
                        trim(task.objective, &mut entries, task.top);
                    }
                }
            }
            trim(task.objective, &mut entries, task.top);
            (entries, scanned, engines)
        })
        .collect();
    let mut entries = Vec::new();
    let (mut scanned, mut engines) = (0, 0);
    for (e, s, n) in partials {
        entries.extend(e);
        scanned += s;
        engines += n;
    }
    trim(task.objective, &mut entries, task.top);
    Ok(SearchResult {
        entries,
        scanned,
        engines,
    })
}

/// One row of [`external_swap_census`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub external_swaps: usize,
    /// Whether the protocols in this row also contain internal swaps.
    pub with_internal: bool,
    pub protocols: u64,
    pub engines: u64,
    /// Largest work over all protocols and fixed-point vertices.
    pub best_work: f64,
    /// Largest `|W|` over all protocols and fixed-point vertices.
    pub max_abs_work: f64,
    /// Largest efficiency among engines.
    pub best_eta: Option<f64>,
}

impl CensusRow {
    fn empty(external_swaps: usize, with_internal: bool) -> Self {
        Self {
            external_swaps,
            with_internal,
            protocols: 0,
            engines: 0,
            best_work: f64::NEG_INFINITY,
            max_abs_work: 0.0,
            best_eta: None,
        }
    }

    fn absorb(&mut self, other: &CensusRow) {
        self.protocols += other.protocols;
        self.engines += other.engines;
        self.best_work = self.best_work.max(other.best_work);
        self.max_abs_work = self.max_abs_work.max(other.max_abs_work);
        self.best_eta = match (self.best_eta, other.best_eta) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
}

/// Groups all transposition protocols by their number of external swaps
/// (and whether internal swaps are mixed in) and reports the best engine of
/// each group. Class `(0, with_internal)` holds the internal-only protocols.
pub fn external_swap_census(
    d: usize,
    hot: &ThermalQubit,
    cold: &ThermalQubit,
    min_work: f64,
    allow_large: bool,
) -> Result<Vec<CensusRow>> {
    check_search_cap(d, ProtocolMode::Transpositions, allow_large)?;
    let parts = protocol_partitions(d, ProtocolMode::Transpositions, true)?;
    let weights = BlockWeights::new(hot, cold);
    let partials: Vec<BTreeMap<(usize, bool), CensusRow>> = parts
        .par_iter()
        .map(|part| {
            let mut rows: BTreeMap<(usize, bool), CensusRow> = BTreeMap::new();
            for proto in part.protocols() {
                let ext = proto.external_count().unwrap_or(0);
                let with_internal = proto.internal_count().unwrap_or(0) > 0;
                let row = rows
                    .entry((ext, with_internal))
                    .or_insert_with(|| CensusRow::empty(ext, with_internal));
                row.protocols += 1;
                let mut engine = false;
                for r in evaluate_vertices_unchecked(&proto, hot, cold, &weights) {
                    row.best_work = row.best_work.max(r.work);
                    row.max_abs_work = row.max_abs_work.max(r.work.abs());
                    if r.work > min_work {
                        engine = true;
                        if let Some(e) = r.eta {
                            row.best_eta = Some(row.best_eta.map_or(e, |b: f64| b.max(e)));
                        }
                    }
                }
                row.engines += u64::from(engine);
            }
            rows
        })
        .collect();
    let mut merged: BTreeMap<(usize, bool), CensusRow> = BTreeMap::new();
    for rows in partials {
        for (key, row) in rows {
            merged
                .entry(key)
                .or_insert_with(|| CensusRow::empty(key.0, key.1))
                .absorb(&row);
        }
    }
    Ok(merged.into_values().collect())
}
