//! One full Otto cycle: hot isochore, compression, cold isochore, expansion.
//!
//! Isochores are complete thermalizations at fixed Hamiltonian; only the two
//! unitary strokes are simulated. Expansion runs the compression drive backwards
//! in time over the same duration.

use crate::error::{Error, Result, Stroke};
use crate::pauli::{eigensystem, fidelity, PauliVector, UnitaryMatrix};
use crate::propagator::{evolve, reverse, DriveProtocol, DEFAULT_STEPS};
use crate::protocols::{InvariantDrive, InvariantParams, LzDrive, LzParams, ZProtocolKind};
use crate::thermo::{
    classify, clausius_ok, cost, quasi_static, BathPair, HeatForm, HeatWork, Regime,
};

pub const DEFAULT_EPS1: f64 = 4.0;
pub const DEFAULT_BETA1: f64 = 0.01 / DEFAULT_EPS1;
pub const DEFAULT_BETA2: f64 = 4.0 * DEFAULT_BETA1;
pub const DEFAULT_X: f64 = 0.1 * DEFAULT_EPS1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveSpec {
    Lz,
    Invariant { a_const: f64, kind: ZProtocolKind },
}

impl DriveSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DriveSpec::Lz => "lz",
            DriveSpec::Invariant { .. } => "inv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleConfig {
    pub baths: BathPair,
    pub eps1: f64,
    /// `ε₂/ε₁`, in `(0, 1]`.
    pub ratio: f64,
    pub x: f64,
    pub tau: f64,
    pub steps: usize,
    pub drive: DriveSpec,
    pub heat_form: HeatForm,
}

impl Default for CycleConfig {
    fn default() -> Self {
        Self {
            baths: BathPair {
                beta1: DEFAULT_BETA1,
                beta2: DEFAULT_BETA2,
            },
            eps1: DEFAULT_EPS1,
            ratio: 0.4,
            x: DEFAULT_X,
            tau: 1.0,
            steps: DEFAULT_STEPS,
            drive: DriveSpec::Lz,
            heat_form: HeatForm::Derived,
        }
    }
}

impl CycleConfig {
    /// Landau–Zener cycle with default baths and energies.
    pub fn lz(tau: f64, ratio: f64) -> Self {
        Self {
            tau,
            ratio,
            ..Self::default()
        }
    }

    /// Invariant-driven cycle with default baths and energies.
    pub fn invariant(tau: f64, ratio: f64, a_const: f64, kind: ZProtocolKind) -> Self {
        Self {
            drive: DriveSpec::Invariant { a_const, kind },
            ..Self::lz(tau, ratio)
        }
    }

    pub fn lz_params(&self) -> Result<LzParams> {
        BathPair::new(self.baths.beta1, self.baths.beta2)?;
        if self.steps < 2 {
            return Err(Error::InvalidStepCount(self.steps));
        }
        LzParams::from_ratio(self.eps1, self.ratio, self.x, self.tau)
    }
}

/// Either drive family, as used for the strokes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CycleDrive {
    Lz(LzDrive),
    Invariant(InvariantDrive),
}

impl DriveProtocol for CycleDrive {
    fn duration(&self) -> f64 {
        match self {
            CycleDrive::Lz(d) => d.duration(),
            CycleDrive::Invariant(d) => d.duration(),
        }
    }

    fn sample(&self, t: f64) -> PauliVector {
        match self {
            CycleDrive::Lz(d) => d.sample(t),
            CycleDrive::Invariant(d) => d.sample(t),
        }
    }
}

pub fn build_drive(cfg: &CycleConfig) -> Result<(LzParams, CycleDrive)> {
    let base = cfg.lz_params()?;
    let drive = match cfg.drive {
        DriveSpec::Lz => CycleDrive::Lz(LzDrive::new(base)),
        DriveSpec::Invariant { a_const, kind } => {
            CycleDrive::Invariant(InvariantDrive::new(InvariantParams {
                base,
                a_const,
                kind,
            })?)
        }
    };
    Ok((base, drive))
}

/// Compression and expansion propagators of a cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strokes {
    pub base: LzParams,
    pub drive: CycleDrive,
    pub u_egc: UnitaryMatrix,
    pub u_ege: UnitaryMatrix,
}

impl Strokes {
    pub fn run(cfg: &CycleConfig) -> Result<Self> {
        let (base, drive) = build_drive(cfg)?;
        let u_egc = evolve(&drive, cfg.steps)
            .map_err(|e| e.in_stroke(Stroke::Compression))?
            .u;
        let u_ege = evolve(&reverse(&drive), cfg.steps)
            .map_err(|e| e.in_stroke(Stroke::Expansion))?
            .u;
        Ok(Self {
            base,
            drive,
            u_egc,
            u_ege,
        })
    }

    /// `(F₁, F₂)` from the ground states (`excited = false`) or the excited
    /// states of the end Hamiltonians.
    pub fn fidelities(&self, excited: bool) -> Result<(f64, f64)> {
        let pick = |p| eigensystem(p).map(|e| if excited { e.excited } else { e.ground });
        let s1 = pick(self.base.h1())?;
        let s2 = pick(self.base.h2())?;
        let f2 = fidelity(&s2, &self.u_egc.apply(&s1))?;
        let f1 = fidelity(&s1, &self.u_ege.apply(&s2))?;
        Ok((f1, f2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleResult {
    /// Expansion-stroke fidelity.
    pub f1: f64,
    /// Compression-stroke fidelity.
    pub f2: f64,
    pub q1: f64,
    pub q2: f64,
    pub w: f64,
    pub eta: Option<f64>,
    pub w_qs: f64,
    pub eta_qs: f64,
    /// `∫‖H‖²_F dt` over one stroke.
    pub cost: f64,
    /// `C_I/C_LZ`, invariant drives only.
    pub cost_ratio: Option<f64>,
    pub regime: Regime,
    pub clausius: bool,
}

impl CycleResult {
    /// `W/W_qs`, undefined when the quasi-static work vanishes.
    pub fn work_ratio(&self) -> Option<f64> {
        (self.w_qs.abs() > 1e-15).then(|| self.w / self.w_qs)
    }
}

/// Stroke fidelities `(F₁, F₂)` for `cfg`.
pub fn fidelity_pair(cfg: &CycleConfig) -> Result<(f64, f64)> {
    Strokes::run(cfg)?.fidelities(false)
}

pub fn run_cycle(cfg: &CycleConfig) -> Result<CycleResult> {
    let strokes = Strokes::run(cfg)?;
    let (f1, f2) = strokes.fidelities(false)?;
    let base = &strokes.base;
    let (eps1, eps2) = (base.eps1(), base.eps2());
    let BathPair { beta1, beta2 } = cfg.baths;

    let (q1, q2) = cfg.heat_form.heats(eps1, eps2, beta1, beta2, f1, f2);
    let hw = HeatWork::new(q1, q2);
    let (w_qs, eta_qs) = quasi_static(eps1, eps2, beta1, beta2);
    let cost = cost(&strokes.drive, cfg.steps)?;
    if !cost.is_finite() {
        return Err(Error::NonFinite { what: "cost" });
    }
    let cost_ratio = match &strokes.drive {
        CycleDrive::Lz(_) => None,
        CycleDrive::Invariant(d) => {
            let a = d.params.a_const;
            Some(a * a / base.mean_sq_energy())
        }
    };
    Ok(CycleResult {
        f1,
        f2,
        q1,
        q2,
        w: hw.w,
        eta: hw.eta,
        w_qs,
        eta_qs,
        cost,
        cost_ratio,
        regime: classify(q1, q2, hw.w)?,
        clausius: clausius_ok(q1, q2, beta1, beta2),
    })
}
