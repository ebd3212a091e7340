//! Heat, work and efficiency of one engine cycle, the closed-form d-Otto
//! results, and the First/Second-Law checks.
//!
//! Sign convention: `Q_k = Tr[H_k (ϱ − UϱU†)]` is the energy bath `k` must
//! resupply after the work stroke, and `W = Q_h + Q_c` is the extracted work.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::catalysis::{check_cyclicity, protocol_fixed_points, FEASIBILITY_TOL};
use crate::dd::Dd;
use crate::error::{domain, Error, Result};
use crate::protocol::{validate_protocol, SwapProtocol};
use crate::state::{level_cold_energy, level_hot_energy, BlockWeights, Catalyst, CompositeState, ThermalQubit};

/// First-Law residual tolerance.
pub const FIRST_LAW_TOL: f64 = 1e-12;
/// Clausius tolerance: `β_h Q_h + β_c Q_c ≤ CLAUSIUS_TOL`.
pub const CLAUSIUS_TOL: f64 = 1e-9;
/// Work above which a cycle counts as an engine.
pub const MIN_WORK: f64 = 1e-12;
/// Below this value of `β_h ω_h` the closed form switches to the polynomial `f_d`.
pub const SMALL_BETA_OMEGA: f64 = 1e-6;
/// Absolute tolerance for deciding that all swaps carry the same flow.
const FLOW_TOL: f64 = 1e-12;

/// `(Q_h, Q_c)` from the states before and after the work stroke.
pub fn heats(before: &CompositeState, after: &CompositeState) -> Result<(f64, f64)> {
    if before.len() != after.len() || before.dim() != after.dim() {
        return Err(Error::DimensionMismatch {
            expected: before.len(),
            got: after.len(),
        });
    }
    if before.omega_h() != after.omega_h() || before.omega_c() != after.omega_c() {
        return Err(domain("states carry different frequencies"));
    }
    let mut q_h = 0.0;
    let mut q_c = 0.0;
    for (l, (p, q)) in before.probs().iter().zip(after.probs()).enumerate() {
        let delta = p - q;
        q_h += before.hot_energy(l) * delta;
        q_c += before.cold_energy(l) * delta;
    }
    Ok((q_h, q_c))
}

/// `Q_k = Σ_i ω_i^k (p_{u_i} − p_{d_i})` for a transposition protocol.
pub fn heats_swap_sum(before: &CompositeState, proto: &SwapProtocol) -> Option<(f64, f64)> {
    let swaps = proto.swaps()?;
    let d = before.dim();
    let (mut q_h, mut q_c) = (0.0, 0.0);
    for t in swaps {
        let (u, dn) = t.orient(d, before.omega_h(), before.omega_c());
        let flow = before.probs()[u] - before.probs()[dn];
        q_h += (before.hot_energy(u) - before.hot_energy(dn)) * flow;
        q_c += (before.cold_energy(u) - before.cold_energy(dn)) * flow;
    }
    Some((q_h, q_c))
}

/// Which catalyst fixed point a cycle runs at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FixedPointChoice {
    MaxWork,
    /// Falls back to the max-work vertex when no vertex has `Q_h > 0`.
    MaxEfficiency,
    Given(Catalyst),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    pub q_h: f64,
    pub q_c: f64,
    pub work: f64,
    /// `W / Q_h`, defined only when `Q_h > 0`.
    pub eta: Option<f64>,
    pub eta_carnot: f64,
    /// Common probability flow through every swap, when there is one.
    pub delta_p: Option<f64>,
    pub catalyst: Vec<f64>,
    pub cyclicity_residual: f64,
    /// The protocol admits more than one extremal fixed point.
    pub degenerate: bool,
}

impl CycleResult {
    pub fn is_engine(&self, min_work: f64) -> bool {
        self.work > min_work
    }
}

pub fn carnot_efficiency(hot: &ThermalQubit, cold: &ThermalQubit) -> f64 {
    if cold.beta() > 0.0 {
        1.0 - hot.beta() / cold.beta()
    } else {
        0.0
    }
}

/// Common flow `p_u − p_d` if every swap carries the same magnitude; signed by
/// the first swap in canonical order.
fn common_flow(proto: &SwapProtocol, probs: &[Dd], omega_h: f64, omega_c: f64) -> Option<f64> {
    let swaps = proto.swaps()?;
    let d = proto.dim();
    let flows: Vec<f64> = swaps
        .iter()
        .map(|t| {
            let (u, dn) = t.orient(d, omega_h, omega_c);
            (probs[u] - probs[dn]).to_f64()
        })
        .collect();
    let first = *flows.first()?;
    flows
        .iter()
        .all(|f| (f.abs() - first.abs()).abs() <= FLOW_TOL)
        .then_some(first)
}

/// Evaluates one cycle with the catalyst in state `cat` (no cyclicity check).
///
/// Heats are accumulated as `Q_k = Σ_ℓ (ε^k_ℓ − ε^k_{π(ℓ)}) p_ℓ` in
/// double-double, which equals the before/after energy difference but keeps
/// full relative accuracy when the net flow is tiny.
pub(crate) fn evaluate_at(
    proto: &SwapProtocol,
    hot: &ThermalQubit,
    cold: &ThermalQubit,
    weights: &BlockWeights,
    cat: &[Dd],
    degenerate: bool,
) -> CycleResult {
    let d = proto.dim();
    let (omega_h, omega_c) = (hot.omega(), cold.omega());
    let probs: Vec<Dd> = (0..4 * d).map(|l| weights.block(l / d) * cat[l % d]).collect();
    let image = proto.image();
    let mut q_h = Dd::ZERO;
    let mut q_c = Dd::ZERO;
    let mut after = vec![Dd::ZERO; d];
    for (l, &to) in image.iter().enumerate() {
        let p = probs[l];
        let dh = level_hot_energy(l, d, omega_h) - level_hot_energy(to, d, omega_h);
        let dc = level_cold_energy(l, d, omega_c) - level_cold_energy(to, d, omega_c);
        if dh != 0.0 {
            q_h = q_h + p * dh;
        }
        if dc != 0.0 {
            q_c = q_c + p * dc;
        }
        after[to % d] = after[to % d] + p;
    }
    let work = q_h + q_c;
    let residual = after
        .iter()
        .zip(cat)
        .fold(0.0_f64, |m, (&a, &b)| m.max((a - b).to_f64().abs()));
    let q_h_f = q_h.to_f64();
    CycleResult {
        q_h: q_h_f,
        q_c: q_c.to_f64(),
        work: work.to_f64(),
        eta: (q_h_f > 0.0).then(|| (work / q_h).to_f64()),
        eta_carnot: carnot_efficiency(hot, cold),
        delta_p: common_flow(proto, &probs, omega_h, omega_c),
        catalyst: cat.iter().map(|x| x.to_f64()).collect(),
        cyclicity_residual: residual,
        degenerate,
    }
}

/// One cycle at every vertex of the protocol's fixed-point polytope.
pub fn evaluate_vertices(proto: &SwapProtocol, hot: &ThermalQubit, cold: &ThermalQubit) -> Result<Vec<CycleResult>> {
    let report = validate_protocol(proto);
    if !report.is_ok() {
        return Err(Error::InvalidProtocol(report.violations));
    }
    Ok(evaluate_vertices_unchecked(
        proto,
        hot,
        cold,
        &BlockWeights::new(hot, cold),
    ))
}

pub(crate) fn evaluate_vertices_unchecked(
    proto: &SwapProtocol,
    hot: &ThermalQubit,
    cold: &ThermalQubit,
    weights: &BlockWeights,
) -> Vec<CycleResult> {
    let vertices = protocol_fixed_points(proto, weights);
    let degenerate = vertices.len() > 1;
    vertices
        .iter()
        .map(|v| evaluate_at(proto, hot, cold, weights, v, degenerate))
        .collect()
}

pub(crate) fn pick_max_work(results: Vec<CycleResult>) -> Option<CycleResult> {
    results
        .into_iter()
        .reduce(|best, r| if r.work > best.work { r } else { best })
}

pub(crate) fn pick_max_efficiency(results: Vec<CycleResult>) -> Option<CycleResult> {
    let mut best: Option<CycleResult> = None;
    for r in results.iter().filter(|r| r.eta.is_some()) {
        let better = match &best {
            None => true,
            Some(b) => {
                let (e, be) = (r.eta.unwrap(), b.eta.unwrap());
                e > be || (e == be && r.work > b.work)
            }
        };
        if better {
            best = Some(r.clone());
        }
    }
    best.or_else(|| pick_max_work(results))
}

/// Runs one engine cycle of `proto` at the selected catalyst fixed point.
pub fn run_cycle(
    proto: &SwapProtocol,
    hot: &ThermalQubit,
    cold: &ThermalQubit,
    choice: &FixedPointChoice,
) -> Result<CycleResult> {
    match choice {
        FixedPointChoice::Given(cat) => {
            let report = check_cyclicity(proto, hot, cold, cat, FEASIBILITY_TOL)?;
            if !report.holds {
                return Err(Error::CyclicityViolated {
                    residual: report.residual,
                    tol: FEASIBILITY_TOL,
                });
            }
            let probs: Vec<Dd> = cat.probs().iter().map(|&x| Dd::from(x)).collect();
            Ok(evaluate_at(
                proto,
                hot,
                cold,
                &BlockWeights::new(hot, cold),
                &probs,
                false,
            ))
        }
        FixedPointChoice::MaxWork => {
            let all = evaluate_vertices(proto, hot, cold)?;
            Ok(pick_max_work(all).expect("a stochastic map always has a fixed point"))
        }
        FixedPointChoice::MaxEfficiency => {
            let all = evaluate_vertices(proto, hot, cold)?;
            Ok(pick_max_efficiency(all).expect("a stochastic map always has a fixed point"))
        }
    }
}

/// Analytic d-Otto quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormBreakdown {
    pub d: usize,
    pub eta_d: f64,
    pub work_d: f64,
    pub f_d: f64,
    pub delta_p: f64,
    pub in_engine_regime: bool,
}

/// `f_d` as a polynomial in `a = e^{-β_h ω_h}`:
/// `Σ_{j<d} [(j+1) + (d−1−j)·b] a^j` with `b = e^{-β_c ω_c}`.
///
/// Equal to the rational form after cancelling the double root at `a = 1`,
/// so it stays finite at `β_h ω_h = 0`.
pub fn f_d_polynomial(d: usize, a: f64, b: f64) -> f64 {
    let mut acc = 0.0;
    let mut pow = 1.0;
    for j in 0..d {
        acc += ((j + 1) as f64 + (d - 1 - j) as f64 * b) * pow;
        pow *= a;
    }
    acc
}

/// `f_d = [(e^{-dx}−1)(e^{-y}−1) + d(e^{-dx}−e^{-y})(e^{-x}−1)] / (1−e^{-x})²`
/// with `x = β_h ω_h`, `y = β_c ω_c`.
pub fn f_d_rational(d: usize, x: f64, y: f64) -> f64 {
    let df = d as f64;
    let am1 = (-x).exp_m1();
    let adm1 = (-df * x).exp_m1();
    let bm1 = (-y).exp_m1();
    let ad_minus_b = (-y).exp() * (y - df * x).exp_m1();
    (adm1 * bm1 + df * ad_minus_b * am1) / (am1 * am1)
}

/// Closed-form efficiency, work and flow of the d-Otto protocol.
pub fn closed_form(d: usize, hot: &ThermalQubit, cold: &ThermalQubit) -> Result<ClosedFormBreakdown> {
    if d == 0 {
        return Err(domain("catalyst dimension must be at least 1"));
    }
    if hot.omega() <= 0.0 {
        return Err(domain("omega_h must be positive"));
    }
    let df = d as f64;
    let x = hot.beta() * hot.omega();
    let y = cold.beta() * cold.omega();
    let f_d = if x < SMALL_BETA_OMEGA {
        f_d_polynomial(d, (-x).exp(), (-y).exp())
    } else {
        f_d_rational(d, x, y)
    };
    // e^{-dx} − e^{-y}
    let gap = (-y).exp() * (y - df * x).exp_m1();
    let delta_p = gap / (hot.partition_function() * cold.partition_function() * f_d);
    Ok(ClosedFormBreakdown {
        d,
        eta_d: 1.0 - cold.omega() / (df * hot.omega()),
        work_d: (df * hot.omega() - cold.omega()) * delta_p,
        f_d,
        delta_p,
        in_engine_regime: engine_regime(d, hot, cold),
    })
}

/// Catalyst-free Otto work `(ω_h − ω_c)(e^{-β_hω_h} − e^{-β_cω_c}) / (Z_h Z_c)`.
pub fn otto_work(hot: &ThermalQubit, cold: &ThermalQubit) -> f64 {
    (hot.omega() - cold.omega()) * (hot.boltzmann() - cold.boltzmann())
        / (hot.partition_function() * cold.partition_function())
}

/// Two-level-catalyst work with `f_2 = 1 + e^{-β_cω_c} + 2e^{-β_hω_h}`.
pub fn two_otto_work(hot: &ThermalQubit, cold: &ThermalQubit) -> f64 {
    let a = hot.boltzmann();
    let b = cold.boltzmann();
    let f2 = 1.0 + b + 2.0 * a;
    (2.0 * hot.omega() - cold.omega()) * (a * a - b) / (hot.partition_function() * cold.partition_function() * f2)
}

/// `β_h/β_c < ω_c/(d ω_h) < 1`, evaluated as `d β_h ω_h < β_c ω_c` and `ω_c < d ω_h`.
pub fn engine_regime(d: usize, hot: &ThermalQubit, cold: &ThermalQubit) -> bool {
    if d == 0 || cold.beta() <= 0.0 || hot.omega() <= 0.0 {
        return false;
    }
    let df = d as f64;
    df * (hot.beta() * hot.omega()) < cold.beta() * cold.omega() && cold.omega() < df * hot.omega()
}

/// Catalyst dimensions strictly inside `(ω_c/ω_h, β_cω_c/(β_hω_h))`.
///
/// An infinitely hot bath (`β_h = 0`) leaves the range unbounded above, which is
/// reported as `usize::MAX`.
pub fn dimension_range(hot: &ThermalQubit, cold: &ThermalQubit) -> Range<usize> {
    if hot.omega() <= 0.0 {
        return 1..1;
    }
    let lo = cold.omega() / hot.omega();
    let hi = (cold.beta() * cold.omega()) / (hot.beta() * hot.omega());
    let first = (lo.floor() + 1.0).max(1.0);
    let end = hi.ceil();
    let to_usize = |v: f64| {
        if v >= usize::MAX as f64 {
            usize::MAX
        } else {
            v as usize
        }
    };
    if hi.is_nan() || end <= first {
        return 1..1;
    }
    to_usize(first)..to_usize(end)
}

/// First Law, Clausius and Carnot diagnostics for one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LawsReport {
    pub first_law_residual: f64,
    /// `β_h Q_h + β_c Q_c`.
    pub clausius: f64,
    /// `η_C − η` when `η` is defined.
    pub carnot_margin: Option<f64>,
    pub first_law_ok: bool,
    pub clausius_ok: bool,
    pub carnot_ok: bool,
}

impl LawsReport {
    pub fn passed(&self) -> bool {
        self.first_law_ok && self.clausius_ok && self.carnot_ok
    }
}

pub fn laws_check(result: &CycleResult, hot: &ThermalQubit, cold: &ThermalQubit) -> LawsReport {
    let first_law_residual = (result.work - result.q_h - result.q_c).abs();
    let clausius = hot.beta() * result.q_h + cold.beta() * result.q_c;
    let carnot_margin = result.eta.map(|e| carnot_efficiency(hot, cold) - e);
    LawsReport {
        first_law_residual,
        clausius,
        carnot_margin,
        first_law_ok: first_law_residual <= FIRST_LAW_TOL,
        clausius_ok: clausius <= CLAUSIUS_TOL,
        // only engines are held to the Carnot bound
        carnot_ok: !result.is_engine(MIN_WORK) || carnot_margin.is_some_and(|m| m > 0.0),
    }
}
