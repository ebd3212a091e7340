//! `catotto check`: the invariant suite.

use std::fmt;

use clap::ValueEnum;
use rayon::prelude::*;

use super::{CliError, CliResult};
use crate::protocol::{d_otto_protocol, enumerate_protocols, ProtocolMode};
use crate::state::{thermal_qubit, ThermalQubit};
use crate::thermo::{
    closed_form, engine_regime, evaluate_vertices, laws_check, run_cycle, CycleResult, FixedPointChoice, CLAUSIUS_TOL,
    FIRST_LAW_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Small,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// negate Q_c (and recompute W) before the law checks
    QcSign,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value = "full")]
    pub grid: Grid,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// worst value of the family's statistic
    pub worst: f64,
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<24} cases={:<8} worst={:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst
        )
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `(β_h, β_c, ω_c)` points strictly inside the d-Otto engine regime
/// (`ω_h = 1`): `β_hω_h ∈ [0.01, 2]`, `β_c/β_h ∈ [1.5, 20]`, and `ω_c`
/// placed at fractions 0.05..0.95 of `(d β_h/β_c, d)`.
pub fn regime_grid(d: usize, n: usize) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(n * n * n);
    for bh in linspace(0.01, 2.0, n) {
        for r in linspace(1.5, 20.0, n) {
            for t in linspace(0.05, 0.95, n) {
                let lo = d as f64 / r;
                let hi = d as f64;
                out.push((bh, r * bh, lo + t * (hi - lo)));
            }
        }
    }
    out
}

/// Parameter sets `(β_h, β_c, ω_c)` for the law checks, including some
/// outside every engine regime and one at equal temperatures.
pub fn law_params(grid: Grid) -> Vec<(f64, f64, f64)> {
    let (bhs, ratios, wcs): (&[f64], &[f64], &[f64]) = match grid {
        Grid::Small => (&[0.3], &[2.0, 10.0], &[0.5, 1.5]),
        Grid::Full => (&[0.05, 0.3, 1.0, 2.5], &[1.0, 2.0, 10.0], &[0.2, 0.5, 0.9, 1.5, 2.4]),
    };
    let mut out = Vec::new();
    for &bh in bhs {
        for &r in ratios {
            for &wc in wcs {
                out.push((bh, r * bh, wc));
            }
        }
    }
    out
}

fn qubits(bh: f64, bc: f64, wc: f64) -> (ThermalQubit, ThermalQubit) {
    (
        thermal_qubit(bh, 1.0).expect("grid temperatures are valid"),
        thermal_qubit(bc, wc).expect("grid temperatures are valid"),
    )
}

fn inject(mut r: CycleResult, fault: Option<Fault>) -> CycleResult {
    if fault == Some(Fault::QcSign) {
        r.q_c = -r.q_c;
        r.work = r.q_h + r.q_c;
        r.eta = (r.q_h > 0.0).then(|| r.work / r.q_h);
    }
    r
}

/// First Law, Clausius and Carnot over all transposition protocols at
/// `d = 1, 2` and every fixed-point vertex.
pub fn law_families(grid: Grid, fault: Option<Fault>) -> [FamilyReport; 3] {
    let mut protos = Vec::new();
    for d in [1, 2] {
        protos.extend(enumerate_protocols(d, ProtocolMode::Transpositions, false).expect("within cap"));
    }
    let params = law_params(grid);
    let jobs: Vec<_> = params
        .iter()
        .flat_map(|p| protos.iter().map(move |proto| (*p, proto)))
        .collect();
    // (cases, first-law worst, clausius worst, carnot failures, carnot worst margin)
    let stats = jobs
        .par_iter()
        .map(|&((bh, bc, wc), proto)| {
            let (hot, cold) = qubits(bh, bc, wc);
            let mut acc = (0usize, 0.0f64, f64::NEG_INFINITY, 0usize, f64::INFINITY);
            for r in evaluate_vertices(proto, &hot, &cold).expect("valid protocol") {
                let r = inject(r, fault);
                let laws = laws_check(&r, &hot, &cold);
                acc.0 += 1;
                acc.1 = acc.1.max(laws.first_law_residual);
                acc.2 = acc.2.max(laws.clausius);
                if !laws.carnot_ok {
                    acc.3 += 1;
                }
                if r.is_engine(crate::thermo::MIN_WORK) {
                    acc.4 = acc.4.min(laws.carnot_margin.unwrap_or(f64::NEG_INFINITY));
                }
            }
            acc
        })
        .reduce(
            || (0, 0.0, f64::NEG_INFINITY, 0, f64::INFINITY),
            |a, b| (a.0 + b.0, a.1.max(b.1), a.2.max(b.2), a.3 + b.3, a.4.min(b.4)),
        );
    [
        FamilyReport {
            name: "first-law",
            passed: stats.1 <= FIRST_LAW_TOL,
            cases: stats.0,
            worst: stats.1,
        },
        FamilyReport {
            name: "clausius",
            passed: stats.2 <= CLAUSIUS_TOL,
            cases: stats.0,
            worst: stats.2,
        },
        FamilyReport {
            name: "carnot",
            passed: stats.3 == 0,
            cases: stats.0,
            worst: stats.4,
        },
    ]
}

/// Worst of `|η − η_d|` and `|W − W_d|/W_d` over the regime grid, d = 1..8.
pub fn formula_family(grid: Grid) -> FamilyReport {
    let n = match grid {
        Grid::Small => 3,
        Grid::Full => 8,
    };
    let jobs: Vec<(usize, (f64, f64, f64))> = (1..=8)
        .flat_map(|d| regime_grid(d, n).into_iter().map(move |p| (d, p)))
        .collect();
    let (worst, ok) = jobs
        .par_iter()
        .map(|&(d, (bh, bc, wc))| {
            let (hot, cold) = qubits(bh, bc, wc);
            let proto = d_otto_protocol(d).expect("d >= 1");
            let sim = run_cycle(&proto, &hot, &cold, &FixedPointChoice::MaxWork).expect("feasible");
            let cf = closed_form(d, &hot, &cold).expect("valid");
            let eta_err = sim.eta.map_or(f64::INFINITY, |e| (e - cf.eta_d).abs());
            let w_err = ((sim.work - cf.work_d) / cf.work_d).abs();
            (eta_err.max(w_err), eta_err <= 1e-12 && w_err <= 1e-10)
        })
        .reduce(|| (0.0, true), |a, b| (a.0.max(b.0), a.1 && b.1));
    FamilyReport {
        name: "formula-vs-simulation",
        passed: ok,
        cases: jobs.len(),
        worst,
    }
}

/// Sign of the simulated work against the regime predicate, plus zero work on
/// both regime boundaries.
pub fn regime_sign_family(grid: Grid) -> FamilyReport {
    let n = match grid {
        Grid::Small => 4,
        Grid::Full => 12,
    };
    let mut cases = 0;
    let mut ok = true;
    let mut worst_boundary: f64 = 0.0;
    for d in 1..=6 {
        let proto = d_otto_protocol(d).expect("d >= 1");
        for bh in linspace(0.05, 1.5, n) {
            for r in linspace(1.2, 12.0, n) {
                for wc in linspace(0.1, 1.4 * d as f64, n) {
                    let (hot, cold) = qubits(bh, r * bh, wc);
                    let regime = engine_regime(d, &hot, &cold);
                    // stay 1e-8 away from both boundaries
                    let near = (wc - d as f64).abs() < 1e-8 || (r * wc - d as f64).abs() < 1e-8;
                    if near {
                        continue;
                    }
                    let w = run_cycle(&proto, &hot, &cold, &FixedPointChoice::MaxWork)
                        .expect("feasible")
                        .work;
                    cases += 1;
                    ok &= (w > 0.0) == regime;
                }
                // boundaries: ω_c = d ω_h and β_c ω_c = d β_h ω_h
                for wc in [d as f64, d as f64 / r] {
                    let (hot, cold) = qubits(bh, r * bh, wc);
                    let w = run_cycle(&proto, &hot, &cold, &FixedPointChoice::MaxWork)
                        .expect("feasible")
                        .work;
                    cases += 1;
                    worst_boundary = worst_boundary.max(w.abs());
                    ok &= w.abs() <= 1e-10;
                }
            }
        }
    }
    FamilyReport {
        name: "regime-sign",
        passed: ok,
        cases,
        worst: worst_boundary,
    }
}

/// `f_d` at `d = 2` against `1 + e^{-β_cω_c} + 2e^{-β_hω_h}`.
pub fn fd2_family(grid: Grid) -> FamilyReport {
    let n = match grid {
        Grid::Small => 4,
        Grid::Full => 20,
    };
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for bh in linspace(1e-7, 3.0, n) {
        for bc in linspace(0.0, 10.0, n) {
            for wc in linspace(0.05, 3.0, n) {
                let (hot, cold) = qubits(bh, bc, wc);
                let f2 = 1.0 + cold.boltzmann() + 2.0 * hot.boltzmann();
                let got = closed_form(2, &hot, &cold).expect("valid").f_d;
                worst = worst.max(((got - f2) / f2).abs());
                cases += 1;
            }
        }
    }
    FamilyReport {
        name: "fd2-identity",
        passed: worst <= 1e-13,
        cases,
        worst,
    }
}

pub fn run_suite(grid: Grid, fault: Option<Fault>) -> Vec<FamilyReport> {
    let mut out: Vec<FamilyReport> = law_families(grid, fault).into();
    out.push(formula_family(grid));
    out.push(regime_sign_family(grid));
    out.push(fd2_family(grid));
    out
}

pub fn cmd_check(args: &CheckArgs) -> CliResult<()> {
    let reports = super::with_threads(args.threads, || run_suite(args.grid, args.inject_fault))?;
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("failed families: {}", failed.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        for r in run_suite(Grid::Small, None) {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn qc_sign_flip_breaks_clausius() {
        let [first, clausius, _] = law_families(Grid::Small, Some(Fault::QcSign));
        assert!(first.passed);
        assert!(!clausius.passed);
    }

    #[test]
    fn regime_grid_is_inside_regime() {
        for d in 1..=8 {
            for (bh, bc, wc) in regime_grid(d, 4) {
                let (h, c) = qubits(bh, bc, wc);
                assert!(engine_regime(d, &h, &c));
            }
        }
    }
}
