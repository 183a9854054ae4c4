//! Time-ordered evolution under a time-dependent generator.
//!
//! The duration `τ` is split into `n − 1` equal intervals over the grid
//! `t_0 = 0, …, t_{n−1} = τ`. On each interval the generator is frozen at the
//! interval midpoint and exponentiated exactly, and the step is multiplied in
//! on the left so that later times act last.

use crate::error::{Error, Result};
use crate::pauli::{step_unitary, PauliVector, UnitaryMatrix};

/// Grid points used when the caller does not pick a resolution
/// (10 000 intervals).
pub const DEFAULT_STEPS: usize = 10_001;

/// A generator `F(t)` on `[0, τ]`.
pub trait DriveProtocol {
    fn duration(&self) -> f64;
    fn sample(&self, t: f64) -> PauliVector;
}

impl<D: DriveProtocol + ?Sized> DriveProtocol for &D {
    fn duration(&self) -> f64 {
        (**self).duration()
    }
    fn sample(&self, t: f64) -> PauliVector {
        (**self).sample(t)
    }
}

/// Time-independent drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantDrive {
    pub generator: PauliVector,
    pub tau: f64,
}

impl DriveProtocol for ConstantDrive {
    fn duration(&self) -> f64 {
        self.tau
    }
    fn sample(&self, _t: f64) -> PauliVector {
        self.generator
    }
}

/// Adapter turning a closure into a drive.
#[derive(Clone, Copy)]
pub struct FnDrive<F> {
    pub tau: f64,
    pub f: F,
}

impl<F: Fn(f64) -> PauliVector> DriveProtocol for FnDrive<F> {
    fn duration(&self) -> f64 {
        self.tau
    }
    fn sample(&self, t: f64) -> PauliVector {
        (self.f)(t)
    }
}

/// The drive `t ↦ d(τ − t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reversed<D>(pub D);

impl<D: DriveProtocol> DriveProtocol for Reversed<D> {
    fn duration(&self) -> f64 {
        self.0.duration()
    }
    fn sample(&self, t: f64) -> PauliVector {
        self.0.sample(self.0.duration() - t)
    }
}

pub fn reverse<D: DriveProtocol>(drive: D) -> Reversed<D> {
    Reversed(drive)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionResult {
    pub u: UnitaryMatrix,
    /// Grid points, i.e. `steps − 1` intervals.
    pub steps: usize,
    pub dt: f64,
}

/// `U(0;τ) = ∏_{i=n−2..0} exp(−i F((t_i+t_{i+1})/2) Δt)`, `Δt = τ/(n−1)`.
pub fn evolve<D: DriveProtocol + ?Sized>(drive: &D, n: usize) -> Result<EvolutionResult> {
    if n < 2 {
        return Err(Error::InvalidStepCount(n));
    }
    let tau = drive.duration();
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
        });
    }
    let intervals = n - 1;
    let dt = tau / intervals as f64;
    let mut u = UnitaryMatrix::IDENTITY;
    for i in 0..intervals {
        let t = (i as f64 + 0.5) * dt;
        let p = drive.sample(t);
        if !p.is_finite() {
            return Err(Error::NonFiniteDrive { t });
        }
        u = step_unitary(p, dt) * u;
    }
    Ok(EvolutionResult { u, steps: n, dt })
}
