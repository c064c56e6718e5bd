//! Simulation of two two-level atoms in separate optical cavities joined by a
//! fibre, and of how well their evolution emulates swap and controlled-phase
//! gates.
//!
//! Closed dynamics are solved exactly per excitation sector ([`dynamics`]);
//! losses are handled by a dense Liouvillian on the 19-state space
//! ([`open_system`]). [`gates`] scores the resulting atomic channels against
//! target unitaries, [`entanglement`] computes the entanglement of formation,
//! and [`scenario`] drives named runs and parameter sweeps with CSV output.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod gates;
pub mod hilbert;
pub mod linalg;
pub mod model;
pub mod open_system;
pub mod scenario;

pub use dynamics::{
    find_decoupling_times, kraus_set, leakage, propagator, select_gate_times, DecouplingTime,
    Evolver, KrausSet, Propagator,
};
pub use entanglement::{concurrence, entanglement_of_formation, TwoQubitState};
pub use error::{Error, Result};
pub use gates::{
    average_fidelity, average_fidelity_monte_carlo, channel_from_kraus, extract_controlled_phase,
    fidelity_local_phase_optimized, ChannelMatrix, ChannelOrigin, ControlledPhase, GateKind,
    GateTarget,
};
pub use hilbert::{enumerate_sector, full_space, BasisState, FullSpace, Mode, SectorBasis};
pub use linalg::{AtomicOp, CMatrix, Superop, C64};
pub use model::{build_hamiltonian, spectra, HamiltonianBlock, SystemParams};
pub use open_system::{
    build_liouvillian, evolve, partial_trace_field, tomography_channel, DensityMatrix,
    EvolveMethod, Liouvillian, TomographyPoint,
};
pub use scenario::{
    emit_csv, preset, run_scenario, sweep, InitialState, Observable, ResultTable, ScenarioConfig,
    TargetSpec, PRESETS,
};
