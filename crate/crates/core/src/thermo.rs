//! Heats, work, efficiency and cost of the Otto cycle.
//!
//! With thermal populations `tanh(βε)` and stroke fidelities `F₁` (expansion)
//! and `F₂` (compression), the heats absorbed on the hot and cold isochores are
//!
//! ```text
//! Q₁ = −ε₁ [tanh(β₁ε₁) + tanh(β₂ε₂)(1 − 2F₁)]
//! Q₂ = −ε₂ [tanh(β₂ε₂) + tanh(β₁ε₁)(1 − 2F₂)]
//! ```
//!
//! and `W = Q₁ + Q₂`. These follow from the energy expectation differences
//! across each isochore, which [`heats_trace_oracle`] evaluates directly with
//! density matrices. The older printed pairing, with `ε₂ tanh(β₁ε₁)` in `Q₁`
//! and `ε₁ tanh(β₂ε₂)` in `Q₂`, is kept as [`HeatForm::AsPrinted`] for
//! comparison only.

use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cycle::{build_drive, CycleConfig};
use crate::error::{Error, Result};
use crate::pauli::{eigensystem, frobenius_sq, PauliVector, Spinor, UnitaryMatrix};
use crate::propagator::{evolve, reverse, DriveProtocol};
use crate::protocols::{InvariantDrive, InvariantParams};

/// `|Q₁|` below this leaves the efficiency undefined.
pub const ETA_EPS: f64 = 1e-12;
/// Work above this counts as positive output when classifying.
pub const WORK_EPS: f64 = 1e-12;
/// Slack on the Clausius inequality.
pub const CLAUSIUS_SLACK: f64 = 1e-9;

/// Inverse temperatures of the hot (`beta1`) and cold (`beta2`) baths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathPair {
    pub beta1: f64,
    pub beta2: f64,
}

impl BathPair {
    pub fn new(beta1: f64, beta2: f64) -> Result<Self> {
        if !(beta1.is_finite() && beta1 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta1",
                value: beta1,
            });
        }
        if !(beta2.is_finite() && beta2 > beta1) {
            return Err(Error::InvalidParameter {
                name: "beta2",
                value: beta2,
            });
        }
        Ok(Self { beta1, beta2 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Engine,
    Heater,
    Accelerator,
    Refrigerator,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Engine => "engine",
            Regime::Heater => "heater",
            Regime::Accelerator => "accelerator",
            Regime::Refrigerator => "refrigerator",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which closed form to use for the isochore heats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeatForm {
    /// Pairing obtained from the trace definition; the default.
    #[default]
    Derived,
    /// Second-term factors swapped; diagnostic only.
    AsPrinted,
}

impl HeatForm {
    pub fn heats(
        &self,
        eps1: f64,
        eps2: f64,
        beta1: f64,
        beta2: f64,
        f1: f64,
        f2: f64,
    ) -> (f64, f64) {
        match self {
            HeatForm::Derived => heats_closed_form(eps1, eps2, beta1, beta2, f1, f2),
            HeatForm::AsPrinted => heats_as_printed(eps1, eps2, beta1, beta2, f1, f2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatWork {
    pub q1: f64,
    pub q2: f64,
    pub w: f64,
    /// `W/Q₁`, `None` when `Q₁` vanishes.
    pub eta: Option<f64>,
}

impl HeatWork {
    pub fn new(q1: f64, q2: f64) -> Self {
        let w = q1 + q2;
        let eta = (q1.abs() > ETA_EPS).then(|| w / q1);
        Self { q1, q2, w, eta }
    }
}

/// 2×2 Hermitian, unit-trace density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub m: [[Complex64; 2]; 2],
}

impl DensityMatrix {
    fn mixture(weights: [(f64, &Spinor); 2]) -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (w, v) in weights {
            let c = [v.up, v.down];
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] += c[i] * c[j].conj() * w;
                }
            }
        }
        Self { m }
    }

    pub fn trace(&self) -> f64 {
        (self.m[0][0] + self.m[1][1]).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let half_gap = (0.5 * (a - d)).hypot(self.m[0][1].norm());
        let mid = 0.5 * (a + d);
        (mid - half_gap, mid + half_gap)
    }

    /// `trace(ρ H)` for `H = p·σ`.
    pub fn expectation(&self, p: PauliVector) -> f64 {
        let h = p.matrix();
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for k in 0..2 {
                tr += self.m[i][k] * h[k][i];
            }
        }
        tr.re
    }

    /// `U ρ U†`
    pub fn conjugate_by(&self, u: &UnitaryMatrix) -> Self {
        let rho = UnitaryMatrix { m: self.m };
        Self {
            m: (*u * rho * u.dagger()).m,
        }
    }
}

/// Canonical state `e^{−βH}/Z` of `H = p·σ`.
pub fn thermal_state(p: PauliVector, beta: f64) -> Result<DensityMatrix> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
        });
    }
    let e = eigensystem(p)?;
    // e^{±βε}/(2 cosh βε) = (1 ± tanh βε)/2
    let t = (beta * e.epsilon).tanh();
    Ok(DensityMatrix::mixture([
        (0.5 * (1.0 + t), &e.ground),
        (0.5 * (1.0 - t), &e.excited),
    ]))
}

/// Isochore heats `(Q₁, Q₂)` from stroke fidelities.
pub fn heats_closed_form(
    eps1: f64,
    eps2: f64,
    beta1: f64,
    beta2: f64,
    f1: f64,
    f2: f64,
) -> (f64, f64) {
    let t1 = (beta1 * eps1).tanh();
    let t2 = (beta2 * eps2).tanh();
    (
        -eps1 * (t1 + t2 * (1.0 - 2.0 * f1)),
        -eps2 * (t2 + t1 * (1.0 - 2.0 * f2)),
    )
}

/// Heats with the second-term energy factors swapped. Disagrees with the trace
/// definition whenever `F ≠ ½` and `ε₁ ≠ ε₂`.
pub fn heats_as_printed(
    eps1: f64,
    eps2: f64,
    beta1: f64,
    beta2: f64,
    f1: f64,
    f2: f64,
) -> (f64, f64) {
    let t1 = (beta1 * eps1).tanh();
    let t2 = (beta2 * eps2).tanh();
    (
        -eps1 * t1 - eps2 * t1 * (1.0 - 2.0 * f1),
        -eps2 * t2 - eps1 * t2 * (1.0 - 2.0 * f2),
    )
}

/// Total work for equal stroke fidelities `f`.
pub fn work_total(eps1: f64, eps2: f64, beta1: f64, beta2: f64, f: f64) -> f64 {
    let t1 = (beta1 * eps1).tanh();
    let t2 = (beta2 * eps2).tanh();
    let g = 1.0 - 2.0 * f;
    -t1 * (eps1 + eps2 * g) - t2 * (eps2 + eps1 * g)
}

/// Fidelity at which [`work_total`] vanishes.
pub fn zero_work_fidelity(eps1: f64, eps2: f64, beta1: f64, beta2: f64) -> f64 {
    let t1 = (beta1 * eps1).tanh();
    let t2 = (beta2 * eps2).tanh();
    0.5 * (1.0 + (eps1 * t1 + eps2 * t2) / (eps2 * t1 + eps1 * t2))
}

/// Quasi-static work and efficiency `(W_qs, η_qs)`.
pub fn quasi_static(eps1: f64, eps2: f64, beta1: f64, beta2: f64) -> (f64, f64) {
    let occ = |b: f64, e: f64| 1.0 / (1.0 + (2.0 * b * e).exp());
    let w = 2.0 * (eps1 - eps2) * (occ(beta1, eps1) - occ(beta2, eps2));
    (w, 1.0 - eps2 / eps1)
}

/// Operating regime from the sign pattern of the heats.
pub fn classify(q1: f64, q2: f64, w: f64) -> Result<Regime> {
    let sum = q1 + q2;
    let scale = q1.abs().max(q2.abs()).max(1.0);
    if !((w - sum).abs() <= 1e-9 * scale) {
        return Err(Error::Inconsistent { w, sum });
    }
    if q1 >= 0.0 && q2 <= 0.0 {
        Ok(if w > WORK_EPS {
            Regime::Engine
        } else {
            Regime::Accelerator
        })
    } else if q1 <= 0.0 && q2 <= 0.0 {
        Ok(Regime::Heater)
    } else if q1 <= 0.0 && q2 >= 0.0 {
        Ok(Regime::Refrigerator)
    } else {
        Err(Error::Unphysical { q1, q2 })
    }
}

/// `Q₁β₁ + Q₂β₂ ≤ 0`, up to [`CLAUSIUS_SLACK`].
pub fn clausius_ok(q1: f64, q2: f64, beta1: f64, beta2: f64) -> bool {
    q1 * beta1 + q2 * beta2 <= CLAUSIUS_SLACK
}

/// `∫₀^τ ‖H(t)‖²_F dt` by the composite midpoint rule on the propagator grid.
pub fn cost<D: DriveProtocol + ?Sized>(drive: &D, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidStepCount(n));
    }
    let intervals = n - 1;
    let dt = drive.duration() / intervals as f64;
    let mut sum = 0.0;
    for i in 0..intervals {
        let t = (i as f64 + 0.5) * dt;
        let p = drive.sample(t);
        if !p.is_finite() {
            return Err(Error::NonFiniteDrive { t });
        }
        sum += frobenius_sq(p);
    }
    Ok(sum * dt)
}

/// `C_I / C_LZ = A² / (z₁² + z₁Δz + Δz²/3 + x²)`.
pub fn cost_ratio(inv: &InvariantParams) -> Result<f64> {
    InvariantDrive::new(*inv)?;
    Ok(inv.a_const * inv.a_const / inv.base.mean_sq_energy())
}

/// [`cost_ratio`] evaluated by quadrature of both drives.
pub fn cost_ratio_quadrature(inv: &InvariantParams, n: usize) -> Result<f64> {
    let drive = InvariantDrive::new(*inv)?;
    let lz = crate::protocols::LzDrive::new(inv.base);
    Ok(cost(&drive, n)? / cost(&lz, n)?)
}

/// Heats from the trace definition: energy expectation after each
/// isochore minus the expectation before it.
pub fn heats_trace(
    h1: PauliVector,
    h2: PauliVector,
    beta1: f64,
    beta2: f64,
    u_egc: &UnitaryMatrix,
    u_ege: &UnitaryMatrix,
) -> Result<(f64, f64)> {
    let rho1 = thermal_state(h1, beta1)?;
    let rho2 = thermal_state(h2, beta2)?;
    let rho2_pre = rho1.conjugate_by(u_egc);
    let rho1_pre = rho2.conjugate_by(u_ege);
    Ok((
        rho1.expectation(h1) - rho1_pre.expectation(h1),
        rho2.expectation(h2) - rho2_pre.expectation(h2),
    ))
}

/// Runs both strokes of `cfg` and returns `(Q₁, Q₂)` from density matrices.
pub fn heats_trace_oracle(cfg: &CycleConfig) -> Result<(f64, f64)> {
    use crate::error::Stroke;
    let (base, drive) = build_drive(cfg)?;
    let u_egc = evolve(&drive, cfg.steps)
        .map_err(|e| e.in_stroke(Stroke::Compression))?
        .u;
    let u_ege = evolve(&reverse(&drive), cfg.steps)
        .map_err(|e| e.in_stroke(Stroke::Expansion))?
        .u;
    heats_trace(
        base.h1(),
        base.h2(),
        cfg.baths.beta1,
        cfg.baths.beta2,
        &u_egc,
        &u_ege,
    )
}
