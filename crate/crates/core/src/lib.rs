//! Two-stroke quantum Otto engines assisted by a finite-dimensional catalyst.
//!
//! Two thermal qubits (hot and cold) and a diagonal `d`-level catalyst undergo
//! a permutation of their joint energy levels (the work stroke); the qubits are
//! then re-thermalized (the heat stroke). The catalyst must come back to its
//! initial state, which restricts it to fixed points of the map the stroke
//! induces on it.
//!
//! * [`state`]: thermal qubits, catalyst and the composite product state
//! * [`protocol`]: swap protocols, the d-Otto construction, enumeration
//! * [`catalysis`]: cycle map on the catalyst and its fixed points
//! * [`thermo`]: heats, work, efficiency, closed forms, laws
//! * [`search`]: exhaustive protocol optimization
//! * [`cli`]: the `catotto` experiment harness

pub mod catalysis;
pub mod cli;
mod dd;
pub mod error;
pub mod protocol;
pub mod search;
pub mod state;
pub mod thermo;

pub use catalysis::{check_cyclicity, cycle_map, fixed_points, CycleMap, FixedPointSet};
pub use error::{Error, Result};
pub use protocol::{
    apply_protocol, d_otto_protocol, enumerate_protocols, validate_protocol, ProtocolMode, SwapProtocol, Transposition,
};
pub use search::{external_swap_census, optimize, Objective, SearchResult, SearchTask};
pub use state::{catalyst_marginal, composite_initial, thermal_qubit, Catalyst, CompositeState, ThermalQubit};
pub use thermo::{
    closed_form, dimension_range, engine_regime, heats, laws_check, run_cycle, ClosedFormBreakdown, CycleResult,
    FixedPointChoice, LawsReport,
};
