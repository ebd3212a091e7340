//! Thermal two-level systems, the diagonal catalyst and the composite
//! product state `hot ⊗ cold ⊗ catalyst`.
//!
//! Levels of the composite system are addressed by a flat index
//! `ℓ = (2i + j)·d + k` where `i` is the hot qubit, `j` the cold qubit and
//! `k ∈ [0, d)` the catalyst level. The catalyst Hamiltonian is zero, so the
//! energy of a level is `i·ω_h + j·ω_c`.

use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{domain, Error, Result};

/// Normalization tolerance for probability vectors.
pub const NORM_TOL: f64 = 1e-12;

/// A two-level system `H = ω|1⟩⟨1|` in its Gibbs state at inverse temperature `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalQubit {
    beta: f64,
    omega: f64,
    ground: f64,
    excited: f64,
}

impl ThermalQubit {
    pub fn new(beta: f64, omega: f64) -> Result<Self> {
        if !beta.is_finite() || !omega.is_finite() {
            return Err(domain(format!(
                "beta and omega must be finite (beta={beta}, omega={omega})"
            )));
        }
        if beta < 0.0 || omega < 0.0 {
            return Err(domain(format!(
                "beta and omega must be non-negative (beta={beta}, omega={omega})"
            )));
        }
        let boltzmann = (-beta * omega).exp();
        let z = 1.0 + boltzmann;
        Ok(Self {
            beta,
            omega,
            ground: 1.0 / z,
            excited: boltzmann / z,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `(p_ground, p_excited)`.
    pub fn populations(&self) -> (f64, f64) {
        (self.ground, self.excited)
    }

    pub fn population(&self, level: usize) -> f64 {
        if level == 0 {
            self.ground
        } else {
            self.excited
        }
    }

    /// Boltzmann factor `e^{-βω}`.
    pub fn boltzmann(&self) -> f64 {
        (-self.beta * self.omega).exp()
    }

    /// Partition function `1 + e^{-βω}`.
    pub fn partition_function(&self) -> f64 {
        1.0 + self.boltzmann()
    }
}

/// `(p_ground, p_excited)` in double-double, with `βω` formed exactly.
fn populations_dd(q: &ThermalQubit) -> [Dd; 2] {
    let x = Dd::from(q.beta) * q.omega;
    let boltzmann = Dd::exp(-x.to_f64()) * (Dd::ONE - (x - Dd::from(x.to_f64())));
    let z = Dd::ONE + boltzmann;
    [Dd::ONE / z, boltzmann / z]
}

/// Joint weights `τ_h(i) τ_c(j)` of the four qubit blocks, block `b = 2i + j`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BlockWeights([Dd; 4]);

impl BlockWeights {
    pub(crate) fn new(hot: &ThermalQubit, cold: &ThermalQubit) -> Self {
        let h = populations_dd(hot);
        let c = populations_dd(cold);
        Self([h[0] * c[0], h[0] * c[1], h[1] * c[0], h[1] * c[1]])
    }

    pub(crate) fn block(&self, b: usize) -> Dd {
        self.0[b]
    }
}

/// Shorthand for [`ThermalQubit::new`].
pub fn thermal_qubit(beta: f64, omega: f64) -> Result<ThermalQubit> {
    ThermalQubit::new(beta, omega)
}

/// Diagonal catalyst state `ρ_s = Σ p_k |k⟩⟨k|`. `dim == 1` means no catalyst.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalyst {
    probs: Vec<f64>,
}

impl Catalyst {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_distribution(&probs, "catalyst")?;
        Ok(Self { probs })
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(domain("catalyst dimension must be at least 1"));
        }
        Ok(Self {
            probs: vec![1.0 / dim as f64; dim],
        })
    }

    /// Deterministic catalyst sitting in level `k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(domain(format!("catalyst level {k} out of range for d={dim}")));
        }
        let mut probs = vec![0.0; dim];
        probs[k] = 1.0;
        Ok(Self { probs })
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }
}

fn check_distribution(probs: &[f64], what: &str) -> Result<()> {
    if probs.is_empty() {
        return Err(domain(format!("{what} distribution is empty")));
    }
    if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(domain(format!("{what} has an invalid entry {bad}")));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > NORM_TOL {
        return Err(domain(format!("{what} sums to {sum}, not 1")));
    }
    Ok(())
}

/// A level `|i j k⟩` of the composite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Level {
    pub hot: u8,
    pub cold: u8,
    pub cat: usize,
}

impl Level {
    pub fn new(hot: u8, cold: u8, cat: usize) -> Self {
        Self { hot, cold, cat }
    }

    pub fn flat(&self, d: usize) -> usize {
        flat_index(self.hot, self.cold, self.cat, d)
    }
}

/// `ℓ = (2i + j)·d + k`.
pub fn flat_index(hot: u8, cold: u8, cat: usize, d: usize) -> usize {
    debug_assert!(hot < 2 && cold < 2 && cat < d);
    (2 * hot as usize + cold as usize) * d + cat
}

pub fn decode_index(flat: usize, d: usize) -> Level {
    let block = flat / d;
    Level {
        hot: (block / 2) as u8,
        cold: (block % 2) as u8,
        cat: flat % d,
    }
}

/// Diagonal state of `hot ⊗ cold ⊗ catalyst` over `4d` levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeState {
    d: usize,
    probs: Vec<f64>,
    omega_h: f64,
    omega_c: f64,
}

impl CompositeState {
    /// Wraps an explicit probability vector of length `4d`.
    pub fn from_probs(d: usize, probs: Vec<f64>, omega_h: f64, omega_c: f64) -> Result<Self> {
        if d == 0 {
            return Err(domain("catalyst dimension must be at least 1"));
        }
        if probs.len() != 4 * d {
            return Err(Error::DimensionMismatch {
                expected: 4 * d,
                got: probs.len(),
            });
        }
        check_distribution(&probs, "composite state")?;
        Ok(Self {
            d,
            probs,
            omega_h,
            omega_c,
        })
    }

    /// Builds a state whose normalization is already guaranteed by construction.
    pub(crate) fn from_parts(d: usize, probs: Vec<f64>, omega_h: f64, omega_c: f64) -> Self {
        Self {
            d,
            probs,
            omega_h,
            omega_c,
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn omega_h(&self) -> f64 {
        self.omega_h
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn get(&self, hot: u8, cold: u8, cat: usize) -> f64 {
        self.probs[flat_index(hot, cold, cat, self.d)]
    }

    pub fn hot_energy(&self, flat: usize) -> f64 {
        level_hot_energy(flat, self.d, self.omega_h)
    }

    pub fn cold_energy(&self, flat: usize) -> f64 {
        level_cold_energy(flat, self.d, self.omega_c)
    }

    /// Reduced state of the catalyst.
    pub fn catalyst_marginal(&self) -> Vec<f64> {
        let d = self.d;
        (0..d)
            .map(|k| (0..4).map(|block| self.probs[block * d + k]).sum())
            .collect()
    }

    /// Shannon entropy (nats) of the full diagonal.
    pub fn entropy(&self) -> f64 {
        self.probs.iter().filter(|p| **p > 0.0).map(|p| -p * p.ln()).sum()
    }
}

pub(crate) fn level_hot_energy(flat: usize, d: usize, omega_h: f64) -> f64 {
    if flat / d >= 2 {
        omega_h
    } else {
        0.0
    }
}

pub(crate) fn level_cold_energy(flat: usize, d: usize, omega_c: f64) -> f64 {
    if (flat / d) % 2 == 1 {
        omega_c
    } else {
        0.0
    }
}

/// Product state `τ_h ⊗ τ_c ⊗ ρ_s`.
pub fn composite_initial(hot: &ThermalQubit, cold: &ThermalQubit, cat: &Catalyst) -> CompositeState {
    composite_from_probs(hot, cold, cat.probs())
}

/// Product state for a catalyst vector that is already known to be a distribution.
pub(crate) fn composite_from_probs(hot: &ThermalQubit, cold: &ThermalQubit, cat: &[f64]) -> CompositeState {
    let d = cat.len();
    let mut probs = Vec::with_capacity(4 * d);
    for i in 0..2 {
        for j in 0..2 {
            let w = hot.population(i) * cold.population(j);
            probs.extend(cat.iter().map(|p| w * p));
        }
    }
    CompositeState::from_parts(d, probs, hot.omega(), cold.omega())
}

/// Reduced state of the catalyst, `Tr_{hc}`.
pub fn catalyst_marginal(state: &CompositeState) -> Vec<f64> {
    state.catalyst_marginal()
}
