//! Cyclicity of the catalyst.
//!
//! One engine cycle induces a linear, column-stochastic map `M` on the catalyst
//! marginal: `p ↦ Tr_{hc}[U (τ_h ⊗ τ_c ⊗ p) U†]`. The catalyst is restored iff
//! `M p = p`, so the admissible catalyst states form the fixed-point polytope
//! of `M` intersected with the simplex.
//!
//! The vertices of that polytope are the stationary distributions of the
//! closed communicating classes of `M`. Each is computed with the
//! Grassmann–Taksar–Heyman reduction, which only touches off-diagonal
//! transition mass and so stays accurate when some transitions are tiny
//! (e.g. `e^{-β_c ω_c}` far below machine epsilon relative to 1).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::protocol::{apply_unchecked, validate_protocol, ProtocolKind, SwapProtocol};
use crate::state::{composite_from_probs, BlockWeights, Catalyst, ThermalQubit};

/// Column-sum tolerance for stochastic matrices.
pub const STOCHASTIC_TOL: f64 = 1e-12;
/// Feasibility tolerance for fixed points.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Tolerance for algebraic identities between equivalent formulas.
pub const IDENTITY_TOL: f64 = 1e-13;

/// `matrix[l][k]`: mass that catalyst level `k` sends to level `l` per unit of `p_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleMap {
    d: usize,
    matrix: Vec<Vec<f64>>,
}

impl CycleMap {
    /// Wraps an explicit square matrix after checking it is column-stochastic.
    pub fn from_matrix(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let d = matrix.len();
        if d == 0 {
            return Err(Error::NotStochastic("empty matrix".into()));
        }
        if matrix.iter().any(|row| row.len() != d) {
            return Err(Error::NotStochastic("matrix is not square".into()));
        }
        for (l, row) in matrix.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::NotStochastic(format!("entry [{l}][{k}] = {v}")));
                }
            }
        }
        for k in 0..d {
            let s: f64 = matrix.iter().map(|row| row[k]).sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic(format!("column {k} sums to {s}")));
            }
        }
        Ok(Self { d, matrix })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn entry(&self, to: usize, from: usize) -> f64 {
        self.matrix[to][from]
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(p).map(|(m, x)| m * x).sum())
            .collect()
    }

    /// `‖M p − p‖_∞`.
    pub fn residual(&self, p: &[f64]) -> f64 {
        self.apply(p)
            .iter()
            .zip(p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Linear map induced on the catalyst marginal by one cycle of `proto`.
pub fn cycle_map(proto: &SwapProtocol, hot: &ThermalQubit, cold: &ThermalQubit) -> Result<CycleMap> {
    let report = validate_protocol(proto);
    if !report.is_ok() {
        return Err(Error::InvalidProtocol(report.violations));
    }
    Ok(cycle_map_unchecked(proto, hot, cold))
}

pub(crate) fn cycle_map_unchecked(proto: &SwapProtocol, hot: &ThermalQubit, cold: &ThermalQubit) -> CycleMap {
    let d = proto.dim();
    let image = proto.image();
    let mut matrix = vec![vec![0.0; d]; d];
    for (from, &to) in image.iter().enumerate() {
        let block = from / d;
        let w = hot.population(block / 2) * cold.population(block % 2);
        matrix[to % d][from % d] += w;
    }
    CycleMap { d, matrix }
}

/// Vertices of `{p ≥ 0, Σp = 1, Mp = p}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSet {
    /// One stationary distribution per closed class, ordered by the smallest
    /// level in the class.
    pub vertices: Vec<Vec<f64>>,
    /// Dimension of the nullspace of `M − I`.
    pub nullity: usize,
    pub degenerate: bool,
}

impl FixedPointSet {
    pub fn unique(&self) -> Option<&[f64]> {
        (self.vertices.len() == 1).then(|| self.vertices[0].as_slice())
    }
}

/// Closed communicating classes of the transition graph `k → l` iff `M[l][k] > 0`.
pub fn closed_classes(map: &CycleMap) -> Vec<Vec<usize>> {
    classes_by(map.d, |l, k| map.matrix[l][k] > 0.0)
}

fn classes_by(d: usize, positive: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut reach = vec![vec![false; d]; d];
    for (k, row) in reach.iter_mut().enumerate() {
        row[k] = true;
        for (l, cell) in row.iter_mut().enumerate() {
            if positive(l, k) {
                *cell = true;
            }
        }
    }
    for m in 0..d {
        for a in 0..d {
            if reach[a][m] {
                let via = reach[m].clone();
                for (cell, v) in reach[a].iter_mut().zip(via) {
                    *cell |= v;
                }
            }
        }
    }
    let mut assigned = vec![false; d];
    let mut classes = Vec::new();
    for k in 0..d {
        if assigned[k] {
            continue;
        }
        let class: Vec<usize> = (0..d).filter(|&l| reach[k][l] && reach[l][k]).collect();
        for &l in &class {
            assigned[l] = true;
        }
        // closed: everything reachable from k is in the class
        if (0..d).all(|l| !reach[k][l] || reach[l][k]) {
            classes.push(class);
        }
    }
    classes
}

/// Stationary distribution of an irreducible class by state reduction.
/// `matrix[to][from]` as in [`CycleMap`].
fn gth_stationary(matrix: &[Vec<Dd>], class: &[usize]) -> Vec<Dd> {
    let n = class.len();
    // p[i][j]: transition probability from class member i to member j
    let mut p: Vec<Vec<Dd>> = class
        .iter()
        .map(|&from| class.iter().map(|&to| matrix[to][from]).collect())
        .collect();
    for m in (1..n).rev() {
        let s: Dd = (0..m).map(|j| p[m][j]).sum();
        let (head, tail) = p.split_at_mut(m);
        let last = &tail[0];
        for row in head {
            row[m] = row[m] / s;
            let pim = row[m];
            if pim.is_zero() {
                continue;
            }
            for (cell, &x) in row.iter_mut().zip(last).take(m) {
                *cell = *cell + pim * x;
            }
        }
    }
    let mut pi = vec![Dd::ZERO; n];
    pi[0] = Dd::ONE;
    for m in 1..n {
        pi[m] = (0..m).map(|i| pi[i] * p[i][m]).sum();
    }
    let total: Dd = pi.iter().copied().sum();
    pi.iter_mut().for_each(|x| *x = *x / total);
    pi
}

/// One stationary distribution per closed class of `matrix`.
fn stationary_vertices(matrix: &[Vec<Dd>]) -> Vec<Vec<Dd>> {
    let d = matrix.len();
    classes_by(d, |l, k| !matrix[l][k].is_zero())
        .iter()
        .map(|class| {
            let mut v = vec![Dd::ZERO; d];
            for (&l, x) in class.iter().zip(gth_stationary(matrix, class)) {
                v[l] = x;
            }
            v
        })
        .collect()
}

/// Fixed-point polytope of a column-stochastic map.
pub fn fixed_points(map: &CycleMap) -> Result<FixedPointSet> {
    // Re-check: callers may hand in a map built by hand.
    let map = CycleMap::from_matrix(map.matrix.clone())?;
    Ok(fixed_points_unchecked(&map))
}

pub(crate) fn fixed_points_unchecked(map: &CycleMap) -> FixedPointSet {
    let matrix: Vec<Vec<Dd>> = map
        .matrix
        .iter()
        .map(|row| row.iter().map(|&x| Dd::from(x)).collect())
        .collect();
    let vertices: Vec<Vec<f64>> = stationary_vertices(&matrix)
        .into_iter()
        .map(|v| v.into_iter().map(Dd::to_f64).collect())
        .collect();
    let nullity = vertices.len();
    FixedPointSet {
        vertices,
        nullity,
        degenerate: nullity > 1,
    }
}

/// Fixed-point vertices of the cycle map of `proto`, built and solved in
/// double-double from the exact thermal weights.
pub(crate) fn protocol_fixed_points(proto: &SwapProtocol, weights: &BlockWeights) -> Vec<Vec<Dd>> {
    let d = proto.dim();
    let mut matrix = vec![vec![Dd::ZERO; d]; d];
    for (from, to) in proto.image().into_iter().enumerate() {
        let cell = &mut matrix[to % d][from % d];
        *cell = *cell + weights.block(from / d);
    }
    stationary_vertices(&matrix)
}

/// Solves the bordered system `[(M − I); 1ᵀ] p = [0; 1]` by least squares.
///
/// Meaningful only when `M − I` has a one-dimensional nullspace; returns `None`
/// when the solution is not a feasible fixed point within [`FEASIBILITY_TOL`].
pub fn bordered_solve(map: &CycleMap) -> Option<Vec<f64>> {
    let d = map.d;
    let a = DMatrix::from_fn(d + 1, d, |r, c| {
        if r == d {
            1.0
        } else {
            map.matrix[r][c] - if r == c { 1.0 } else { 0.0 }
        }
    });
    let mut b = DVector::zeros(d + 1);
    b[d] = 1.0;
    let x = a.svd(true, true).solve(&b, 1e-14).ok()?;
    let p: Vec<f64> = x.iter().copied().collect();
    let feasible = p.iter().all(|v| *v >= -FEASIBILITY_TOL)
        && (p.iter().sum::<f64>() - 1.0).abs() <= FEASIBILITY_TOL
        && map.residual(&p) <= FEASIBILITY_TOL;
    feasible.then_some(p)
}

/// Outcome of [`check_cyclicity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicityReport {
    pub holds: bool,
    /// `‖Tr_{hc}[after] − p‖_∞`.
    pub residual: f64,
    /// Largest per-level flow imbalance `|Σ_i (δ_{l,u_i} − δ_{l,d_i})(p_{u_i} − p_{d_i})|`
    /// (transposition protocols only).
    pub swap_sum_residual: Option<f64>,
    /// Whether the two forms agree level by level within [`IDENTITY_TOL`].
    pub forms_agree: bool,
}

/// Checks that the catalyst marginal is restored by one cycle.
pub fn check_cyclicity(
    proto: &SwapProtocol,
    hot: &ThermalQubit,
    cold: &ThermalQubit,
    cat: &Catalyst,
    tol: f64,
) -> Result<CyclicityReport> {
    let report = validate_protocol(proto);
    if !report.is_ok() {
        return Err(Error::InvalidProtocol(report.violations));
    }
    if cat.dim() != proto.dim() {
        return Err(Error::DimensionMismatch {
            expected: proto.dim(),
            got: cat.dim(),
        });
    }
    let d = proto.dim();
    let before = composite_from_probs(hot, cold, cat.probs());
    let after = apply_unchecked(&before, proto);
    // before − after, per catalyst level
    let diff: Vec<f64> = before
        .catalyst_marginal()
        .iter()
        .zip(after.catalyst_marginal())
        .map(|(p, q)| p - q)
        .collect();
    let residual = diff.iter().fold(0.0_f64, |m, x| m.max(x.abs()));

    let (swap_sum_residual, forms_agree) = match proto.kind() {
        ProtocolKind::Transpositions(swaps) => {
            let mut per_level = vec![0.0; d];
            for t in swaps {
                let (u, dn) = t.orient(d, hot.omega(), cold.omega());
                let flow = before.probs()[u] - before.probs()[dn];
                per_level[u % d] += flow;
                per_level[dn % d] -= flow;
            }
            let agree = per_level.iter().zip(&diff).all(|(a, b)| (a - b).abs() <= IDENTITY_TOL);
            (Some(per_level.iter().fold(0.0_f64, |m, x| m.max(x.abs()))), agree)
        }
        ProtocolKind::Permutation(_) => (None, true),
    };
    Ok(CyclicityReport {
        holds: residual <= tol,
        residual,
        swap_sum_residual,
        forms_agree,
    })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop, clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::protocol::{d_otto_protocol, enumerate_protocols, ProtocolMode};
    use crate::state::{composite_initial, thermal_qubit};

    fn qubits() -> (ThermalQubit, ThermalQubit) {
        (thermal_qubit(0.3, 1.0).unwrap(), thermal_qubit(3.0, 0.5).unwrap())
    }

    /// Column-by-column simulation oracle.
    fn simulated_map(proto: &SwapProtocol, h: &ThermalQubit, c: &ThermalQubit) -> Vec<Vec<f64>> {
        let d = proto.dim();
        let mut m = vec![vec![0.0; d]; d];
        for k in 0..d {
            let s = composite_initial(h, c, &Catalyst::basis(d, k).unwrap());
            let out = crate::protocol::apply_protocol(&s, proto).unwrap();
            for (l, v) in out.catalyst_marginal().into_iter().enumerate() {
                m[l][k] = v;
            }
        }
        m
    }

    #[test]
    fn identity_and_internal_protocols_give_identity_map() {
        let (h, c) = qubits();
        let id = cycle_map(&SwapProtocol::identity(3), &h, &c).unwrap();
        for l in 0..3 {
            for k in 0..3 {
                assert_eq!(id.entry(l, k), if l == k { 1.0 } else { 0.0 });
            }
        }
        // Otto swap in column 0 and |00⟩↔|11⟩ in column 1.
        let p = SwapProtocol::from_pairs(2, &[(2, 4), (1, 7)]).unwrap();
        let m = cycle_map(&p, &h, &c).unwrap();
        assert_eq!(m.matrix(), id_matrix(2).as_slice());
    }

    fn id_matrix(d: usize) -> Vec<Vec<f64>> {
        (0..d)
            .map(|l| (0..d).map(|k| if l == k { 1.0 } else { 0.0 }).collect())
            .collect()
    }

    #[test]
    fn d_otto_map_matches_simulation() {
        let (h, c) = qubits();
        for d in 1..=5 {
            let p = d_otto_protocol(d).unwrap();
            let m = cycle_map(&p, &h, &c).unwrap();
            let sim = simulated_map(&p, &h, &c);
            for l in 0..d {
                for k in 0..d {
                    assert!((m.entry(l, k) - sim[l][k]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn every_enumerated_map_is_stochastic() {
        let (h, c) = qubits();
        for d in 1..=2 {
            for p in enumerate_protocols(d, ProtocolMode::Transpositions, false).unwrap() {
                let m = cycle_map(&p, &h, &c).unwrap();
                assert!(CycleMap::from_matrix(m.matrix().to_vec()).is_ok(), "{p}");
            }
        }
    }

    #[test]
    fn identity_fixed_points_are_the_basis() {
        let fp = fixed_points(&CycleMap::from_matrix(id_matrix(2)).unwrap()).unwrap();
        assert_eq!(fp.vertices, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(fp.degenerate);
        assert_eq!(fp.nullity, 2);
    }

    #[test]
    fn pure_exchange_has_uniform_fixed_point() {
        let m = CycleMap::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let fp = fixed_points(&m).unwrap();
        assert_eq!(fp.unique().unwrap(), &[0.5, 0.5]);
        assert!(!fp.degenerate);
        let b = bordered_solve(&m).unwrap();
        assert!((b[0] - 0.5).abs() < 1e-14 && (b[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_stochastic() {
        assert!(CycleMap::from_matrix(vec![vec![0.5, 0.5], vec![0.4, 0.5]]).is_err());
        assert!(CycleMap::from_matrix(vec![vec![1.5, 0.0], vec![-0.5, 1.0]]).is_err());
        assert!(CycleMap::from_matrix(vec![vec![1.0, 0.0]]).is_err());
        let bad = CycleMap {
            d: 1,
            matrix: vec![vec![0.9]],
        };
        assert!(fixed_points(&bad).is_err());
    }

    #[test]
    fn transient_levels_get_no_weight() {
        // 0 → 1 leaks, {1, 2} closed and cycling.
        let m = CycleMap::from_matrix(vec![vec![0.5, 0.0, 0.0], vec![0.5, 0.0, 1.0], vec![0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(closed_classes(&m), vec![vec![1, 2]]);
        let fp = fixed_points(&m).unwrap();
        assert_eq!(fp.unique().unwrap(), &[0.0, 0.5, 0.5]);
    }

    #[test]
    fn gth_agrees_with_bordered_solve_on_d_otto() {
        let (h, c) = qubits();
        for d in 1..=6 {
            let m = cycle_map(&d_otto_protocol(d).unwrap(), &h, &c).unwrap();
            let fp = fixed_points(&m).unwrap();
            let v = fp.unique().expect("unique fixed point");
            let b = bordered_solve(&m).unwrap();
            for (x, y) in v.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12, "d={d}: {x} vs {y}");
            }
            assert!(m.residual(v) < 1e-15);
        }
    }

    #[test]
    fn cyclicity_at_fixed_point_and_away_from_it() {
        let (h, c) = qubits();
        for d in 2..=5 {
            let p = d_otto_protocol(d).unwrap();
            let m = cycle_map(&p, &h, &c).unwrap();
            let v = fixed_points(&m).unwrap().vertices[0].clone();
            let cat = Catalyst::new(v).unwrap();
            let r = check_cyclicity(&p, &h, &c, &cat, 1e-10).unwrap();
            assert!(r.holds, "{r:?}");
            assert!(r.forms_agree);
            let r = check_cyclicity(&p, &h, &c, &Catalyst::basis(d, 0).unwrap(), 1e-10).unwrap();
            assert!(!r.holds);
            assert!(r.forms_agree);
        }
        let id = check_cyclicity(
            &SwapProtocol::identity(2),
            &h,
            &c,
            &Catalyst::new(vec![0.3, 0.7]).unwrap(),
            0.0,
        )
        .unwrap();
        assert!(id.holds);
        assert_eq!(id.residual, 0.0);
    }
}
