//! Numerics for a single-qubit quantum Otto heat engine.
//!
//! The working medium is a qubit with generator `X σx + Y σy + Z σz`. The two
//! unitary strokes of the cycle are driven either by the Landau–Zener
//! Hamiltonian or by a Lewis–Riesenfeld invariant used directly as the
//! generator (a shortcut to adiabaticity). Time-ordered propagators are built
//! with a midpoint product formula; fidelities of the strokes feed closed-form
//! heats, work, efficiency and the implementation cost of the drive.
//!
//! Units: ħ = k_B = 1, every energy, time and inverse temperature is
//! dimensionless.
//!
//! The crate is `no_std` and only needs `alloc` for boxed error sources.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cycle;
pub mod error;
pub mod oracle;
pub mod pauli;
pub mod propagator;
pub mod protocols;
pub mod thermo;

pub use cycle::{
    build_drive, fidelity_pair, run_cycle, CycleConfig, CycleDrive, CycleResult, DriveSpec, Strokes,
};
pub use error::{Error, Result, Stroke};
pub use oracle::evolve_oracle;
pub use pauli::{
    eigensystem, fidelity, frobenius_sq, step_unitary, ComplexScalar, EigenSystem, PauliVector,
    Spinor, UnitaryMatrix,
};
pub use propagator::{evolve, reverse, DriveProtocol, EvolutionResult, DEFAULT_STEPS};
pub use protocols::{
    invariant_boundaries, lz_endpoints, InvariantDrive, InvariantParams, LzDrive, LzParams,
    ZProfile, ZProtocolKind,
};
pub use thermo::{
    classify, clausius_ok, cost, cost_ratio, cost_ratio_quadrature, heats_as_printed,
    heats_closed_form, heats_trace, heats_trace_oracle, quasi_static, thermal_state, work_total,
    zero_work_fidelity, BathPair, DensityMatrix, HeatForm, HeatWork, Regime,
};
