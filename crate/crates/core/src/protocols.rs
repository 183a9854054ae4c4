//! Drive families for the unitary strokes.
//!
//! * Landau–Zener: `H(t) = x σx + Z(t) σz` with `Z` linear from `z1` to `z2`.
//! * Invariant shortcut: the Lewis–Riesenfeld invariant
//!   `I(t) = x(t) σx + y(t) σy + z(t) σz` of the Landau–Zener Hamiltonian,
//!   used directly as the generator. `z(t)` is a prescribed profile and the
//!   remaining coefficients follow from the invariance conditions
//!   `ẋ = −2yZ`, `ẏ = 2xZ − 2zX`, `ż = 2yX` with constant `X = x`:
//!
//!   ```text
//!   y = ż / (2X)
//!   x = √(A² − ż²/(4X²) − z²)
//!   Z = (z̈/(4X) + zX) / x          (companion Landau–Zener control)
//!   ```
//!
//!   so `x² + y² + z² = A²` at every instant and the invariant has eigenvalues
//!   `±A`.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::pauli::PauliVector;
use crate::propagator::DriveProtocol;

/// Points at which an invariant drive's radicand is checked on construction.
pub const VALIDATION_POINTS: usize = 2049;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

/// Endpoint controls `(z1, z2)` of a Landau–Zener sweep that takes the
/// half-gap from `eps1` to `ratio·eps1` at fixed coupling `x`.
///
/// Positive roots are used for both endpoints.
pub fn lz_endpoints(eps1: f64, ratio: f64, x: f64) -> Result<(f64, f64)> {
    positive("eps1", eps1)?;
    if !(ratio.is_finite() && ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "ratio",
            value: ratio,
        });
    }
    positive("x", x)?;
    let eps2 = ratio * eps1;
    if x > eps2 {
        return Err(Error::GapTooLarge { x, eps2 });
    }
    let z1 = ((eps1 - x) * (eps1 + x)).sqrt();
    let z2 = ((eps2 - x) * (eps2 + x)).sqrt();
    Ok((z1, z2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LzParams {
    pub z1: f64,
    pub z2: f64,
    pub x: f64,
    pub tau: f64,
}

impl LzParams {
    pub fn new(z1: f64, z2: f64, x: f64, tau: f64) -> Result<Self> {
        for (name, v) in [("z1", z1), ("z2", z2)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name, value: v });
            }
        }
        positive("x", x)?;
        positive("tau", tau)?;
        Ok(Self { z1, z2, x, tau })
    }

    pub fn from_ratio(eps1: f64, ratio: f64, x: f64, tau: f64) -> Result<Self> {
        let (z1, z2) = lz_endpoints(eps1, ratio, x)?;
        Self::new(z1, z2, x, tau)
    }

    pub fn eps1(&self) -> f64 {
        self.z1.hypot(self.x)
    }

    pub fn eps2(&self) -> f64 {
        self.z2.hypot(self.x)
    }

    pub fn dz(&self) -> f64 {
        self.z2 - self.z1
    }

    /// Hamiltonian at the start of compression.
    pub fn h1(&self) -> PauliVector {
        PauliVector::new(self.x, 0.0, self.z1)
    }

    /// Hamiltonian at the end of compression.
    pub fn h2(&self) -> PauliVector {
        PauliVector::new(self.x, 0.0, self.z2)
    }

    /// Time average of `Z² + X²` along the linear sweep,
    /// `z1² + z1Δz + Δz²/3 + x²`.
    pub fn mean_sq_energy(&self) -> f64 {
        let dz = self.dz();
        self.z1 * self.z1 + self.z1 * dz + dz * dz / 3.0 + self.x * self.x
    }
}

/// Linear Landau–Zener drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LzDrive {
    pub params: LzParams,
}

impl LzDrive {
    pub fn new(params: LzParams) -> Self {
        Self { params }
    }
}

impl DriveProtocol for LzDrive {
    fn duration(&self) -> f64 {
        self.params.tau
    }

    fn sample(&self, t: f64) -> PauliVector {
        let p = &self.params;
        PauliVector::new(p.x, 0.0, p.z1 + p.dz() * (t / p.tau))
    }
}

/// Shape of the invariant's `z(t)` between its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZProtocolKind {
    /// `10s³ − 15s⁴ + 6s⁵`
    Quintic,
    /// `sin²[(π/2) sin²(πs/2)]`
    SineSquared,
    /// `30s⁴ − 54s⁵ + 25s⁶`. Its second derivative does not vanish at `s = 1`.
    Sextic,
}

impl ZProtocolKind {
    pub const ALL: [ZProtocolKind; 3] = [Self::Quintic, Self::SineSquared, Self::Sextic];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Quintic => "quintic",
            Self::SineSquared => "sine",
            Self::Sextic => "sextic",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Normalized shape `g(s)` and its first two derivatives in `s ∈ [0, 1]`.
    fn shape(&self, s: f64) -> (f64, f64, f64) {
        match self {
            Self::Quintic => {
                let s2 = s * s;
                (
                    s2 * s * (10.0 - 15.0 * s + 6.0 * s2),
                    30.0 * s2 * (1.0 - s) * (1.0 - s),
                    60.0 * s * (1.0 - s) * (1.0 - 2.0 * s),
                )
            }
            Self::SineSquared => {
                let inner = (PI * s / 2.0).sin();
                let phase = PI / 2.0 * inner * inner;
                let d_phase = PI * PI / 4.0 * (PI * s).sin();
                let dd_phase = PI * PI * PI / 4.0 * (PI * s).cos();
                let (sin2, cos2) = (2.0 * phase).sin_cos();
                let sp = phase.sin();
                (
                    sp * sp,
                    sin2 * d_phase,
                    2.0 * cos2 * d_phase * d_phase + sin2 * dd_phase,
                )
            }
            Self::Sextic => {
                let s2 = s * s;
                let s3 = s2 * s;
                (
                    s2 * s2 * (30.0 - 54.0 * s + 25.0 * s2),
                    s3 * (120.0 - 270.0 * s + 150.0 * s2),
                    s2 * (360.0 - 1080.0 * s + 750.0 * s2),
                )
            }
        }
    }
}

/// `z(t) = z0 + (zt − z0) g(t/τ)` with analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZProfile {
    pub kind: ZProtocolKind,
    pub z0: f64,
    pub zt: f64,
    pub tau: f64,
}

impl ZProfile {
    pub fn new(kind: ZProtocolKind, z0: f64, zt: f64, tau: f64) -> Result<Self> {
        positive("tau", tau)?;
        Ok(Self { kind, z0, zt, tau })
    }

    /// `(z, ż, z̈)` at time `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let d = self.zt - self.z0;
        let (g, dg, ddg) = self.kind.shape(t / self.tau);
        (
            self.z0 + d * g,
            d * dg / self.tau,
            d * ddg / (self.tau * self.tau),
        )
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn rate(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    pub fn accel(&self, t: f64) -> f64 {
        self.eval(t).2
    }
}

/// Endpoint values `(z(0), z(τ)) = (A z1/ε1, A z2/ε2)` that make the invariant
/// commute with the stroke's end Hamiltonians.
pub fn invariant_boundaries(a_const: f64, z1: f64, z2: f64, x: f64) -> (f64, f64) {
    (a_const * z1 / z1.hypot(x), a_const * z2 / z2.hypot(x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantParams {
    pub base: LzParams,
    /// Integration constant `A`; the invariant's eigenvalues are `±A`.
    pub a_const: f64,
    pub kind: ZProtocolKind,
}

/// Invariant-based shortcut drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantDrive {
    pub params: InvariantParams,
    pub profile: ZProfile,
}

impl InvariantDrive {
    /// Builds the drive, rejecting integration constants for which
    /// `A² − ż²/(4X²) − z²` goes non-positive anywhere on a dense grid.
    pub fn new(params: InvariantParams) -> Result<Self> {
        positive("A", params.a_const)?;
        let b = &params.base;
        let (z0, zt) = invariant_boundaries(params.a_const, b.z1, b.z2, b.x);
        let profile = ZProfile::new(params.kind, z0, zt, b.tau)?;
        let drive = Self { params, profile };

        let mut worst = (0.0, f64::INFINITY);
        for i in 0..VALIDATION_POINTS {
            let t = b.tau * i as f64 / (VALIDATION_POINTS - 1) as f64;
            let r = drive.radicand(t);
            if !(r >= worst.1) {
                worst = (t, r);
            }
        }
        if !(worst.1 > 0.0) {
            return Err(Error::RadicandNegative {
                t: worst.0,
                radicand: worst.1,
            });
        }
        Ok(drive)
    }

    /// `A² − ż²/(4X²) − z²`, the square of the invariant's σx coefficient.
    pub fn radicand(&self, t: f64) -> f64 {
        let (z, zd, _) = self.profile.eval(t);
        let x = self.params.base.x;
        let a = self.params.a_const;
        a * a - zd * zd / (4.0 * x * x) - z * z
    }

    /// Companion Landau–Zener control `Z(t)` for which the drive is an exact
    /// invariant of `x σx + Z(t) σz`.
    pub fn companion_z(&self, t: f64) -> Result<f64> {
        let r = self.radicand(t);
        if !(r > 0.0) {
            return Err(Error::RadicandNegative { t, radicand: r });
        }
        let (z, _, zdd) = self.profile.eval(t);
        let x = self.params.base.x;
        Ok((zdd / (4.0 * x) + z * x) / r.sqrt())
    }

    /// Exact value of `∫₀^τ ‖I(t)‖²_F dt = 2A²τ`.
    pub fn analytic_cost(&self) -> f64 {
        let a = self.params.a_const;
        2.0 * a * a * self.params.base.tau
    }
}

impl DriveProtocol for InvariantDrive {
    fn duration(&self) -> f64 {
        self.params.base.tau
    }

    fn sample(&self, t: f64) -> PauliVector {
        let (z, zd, _) = self.profile.eval(t);
        let x = self.params.base.x;
        PauliVector::new(self.radicand(t).sqrt(), zd / (2.0 * x), z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn endpoint_examples() {
        let (z1, z2) = lz_endpoints(1.0, 1.0, 0.1).unwrap();
        assert_eq!(z1, z2);
        assert!((z1 - 0.99f64.sqrt()).abs() < 1e-15);

        let (_, z2) = lz_endpoints(1.0, 0.4, 0.4).unwrap();
        assert_eq!(z2, 0.0);

        let (z1, z2) = lz_endpoints(1.0, 0.4, 0.1).unwrap();
        assert!((z1 - 0.994_987_437_106_620).abs() < 1e-12);
        assert!((z2 - 0.387_298_334_620_742).abs() < 1e-12);
        assert!((z1.hypot(0.1) - 1.0).abs() < 1e-12);
        assert!((z2.hypot(0.1) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn endpoint_errors() {
        assert!(matches!(
            lz_endpoints(1.0, 0.4, 0.41),
            Err(Error::GapTooLarge { .. })
        ));
        assert!(matches!(
            lz_endpoints(1.0, 1.2, 0.1),
            Err(Error::InvalidParameter { name: "ratio", .. })
        ));
        assert!(matches!(
            lz_endpoints(1.0, 0.0, 0.1),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            lz_endpoints(-1.0, 0.5, 0.1),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            lz_endpoints(1.0, 0.5, 0.0),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn lz_drive_samples() {
        let p = LzParams::from_ratio(1.0, 0.4, 0.1, 2.0).unwrap();
        let d = LzDrive::new(p);
        assert_eq!(d.sample(0.0), PauliVector::new(0.1, 0.0, p.z1));
        assert!((d.sample(2.0).z - p.z2).abs() < 1e-15);
        assert!((d.sample(1.0).z - (p.z1 + p.z2) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_profile_is_constant() {
        for kind in ZProtocolKind::ALL {
            let prof = ZProfile::new(kind, 0.7, 0.7, 1.3).unwrap();
            for k in 0..=10 {
                let (z, zd, zdd) = prof.eval(1.3 * k as f64 / 10.0);
                assert_eq!((z, zd, zdd), (0.7, 0.0, 0.0));
            }
        }
    }

    #[test]
    fn quintic_midpoint() {
        let prof = ZProfile::new(ZProtocolKind::Quintic, 0.2, 1.0, 3.0).unwrap();
        assert!((prof.value(1.5) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn profile_endpoints_and_boundary_derivatives() {
        for kind in ZProtocolKind::ALL {
            let prof = ZProfile::new(kind, 0.9, -0.4, 1.7).unwrap();
            let (z0, zd0, zdd0) = prof.eval(0.0);
            let (zt, zdt, zddt) = prof.eval(1.7);
            assert!((z0 - 0.9).abs() < 1e-12, "{kind:?}");
            assert!((zt + 0.4).abs() < 1e-12, "{kind:?}");
            assert!(zd0.abs() < 1e-10 && zdt.abs() < 1e-10, "{kind:?}");
            assert!(zdd0.abs() < 1e-10, "{kind:?}");
            if kind != ZProtocolKind::Sextic {
                assert!(zddt.abs() < 1e-10, "{kind:?}");
            } else {
                // 360 − 1080 + 750 = 30 at s = 1.
                let expected = 30.0 * (-0.4 - 0.9) / (1.7 * 1.7);
                assert!((zddt - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn profile_derivatives_match_finite_differences() {
        let h = 1e-5;
        for kind in ZProtocolKind::ALL {
            let prof = ZProfile::new(kind, 0.3, 1.1, 0.8).unwrap();
            for k in 1..20 {
                let t = 0.8 * k as f64 / 20.0;
                let fd1 = (prof.value(t + h) - prof.value(t - h)) / (2.0 * h);
                let fd2 = (prof.rate(t + h) - prof.rate(t - h)) / (2.0 * h);
                assert!((fd1 - prof.rate(t)).abs() < 1e-8, "{kind:?} t={t}");
                assert!((fd2 - prof.accel(t)).abs() < 1e-6, "{kind:?} t={t}");
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let (z0, _) = invariant_boundaries(2.0, 0.5, 0.3, 1e-12);
        assert!((z0 - 2.0).abs() < 1e-12);
        let (z0, zt) = invariant_boundaries(2.0, -0.5, 0.3, 1e-12);
        assert!((z0 + 2.0).abs() < 1e-12 && (zt - 2.0).abs() < 1e-12);

        let (z1, x) = (0.8, 0.6);
        let (z0, zt) = invariant_boundaries(1.0, z1, z1, x);
        assert!((z0 - z1).abs() < 1e-15 && (zt - z1).abs() < 1e-15);

        let (z1, z2) = lz_endpoints(1.0, 0.4, 0.1).unwrap();
        let (z0, zt) = invariant_boundaries(1.0, z1, z2, 0.1);
        assert!((z0 - 0.994_987_437_106_620).abs() < 1e-12);
        assert!((zt - 0.968_245_836_551_854).abs() < 1e-12);
    }

    fn inv(eps1: f64, ratio: f64, tau: f64, a: f64, kind: ZProtocolKind) -> Result<InvariantDrive> {
        InvariantDrive::new(InvariantParams {
            base: LzParams::from_ratio(eps1, ratio, 0.1 * eps1, tau)?,
            a_const: a,
            kind,
        })
    }

    #[test]
    fn unit_energy_scale_is_infeasible_at_unit_duration() {
        match inv(1.0, 0.4, 1.0, 1.0, ZProtocolKind::Quintic) {
            Err(Error::RadicandNegative { radicand, t }) => {
                assert!(radicand < -0.02);
                assert!(t > 0.2 && t < 0.8);
            }
            other => panic!("expected RadicandNegative, got {other:?}"),
        }
        // The radicand scales as A², so a larger A cannot help.
        assert!(inv(1.0, 0.4, 1.0, 50.0, ZProtocolKind::Quintic).is_err());
    }

    #[test]
    fn norm_is_conserved() {
        let d = inv(4.0, 0.4, 1.0, 4.0, ZProtocolKind::Quintic).unwrap();
        for k in 0..1000 {
            let t = k as f64 / 999.0;
            let p = d.sample(t);
            assert!((p.dot(&p) - 16.0).abs() < 1e-10);
        }
    }

    #[test]
    fn starts_parallel_to_h1() {
        let d = inv(4.0, 0.5, 1.0, 7.0, ZProtocolKind::SineSquared).unwrap();
        let base = d.params.base;
        let i0 = d.sample(0.0);
        assert_eq!(i0.y, 0.0);
        assert!((i0.x - 7.0 * base.x / base.eps1()).abs() < 1e-12);
        assert!(i0.commutator_norm(&base.h1()) < 1e-10);
        assert!(d.sample(1.0).commutator_norm(&base.h2()) < 1e-10);
    }

    #[test]
    fn constant_protocol_is_scaled_hamiltonian() {
        let base = LzParams::from_ratio(2.0, 1.0, 0.2, 1.0).unwrap();
        let d = InvariantDrive::new(InvariantParams {
            base,
            a_const: 2.0,
            kind: ZProtocolKind::Quintic,
        })
        .unwrap();
        for k in 0..=8 {
            let t = k as f64 / 8.0;
            let p = d.sample(t);
            assert!((p - base.h1()).magnitude() < 1e-12);
            assert!((d.companion_z(t).unwrap() - base.z1).abs() < 1e-12);
        }
    }

    #[test]
    fn companion_control_hits_lz_endpoints() {
        for a in [3.0, 4.5, 11.0] {
            for kind in [ZProtocolKind::Quintic, ZProtocolKind::SineSquared] {
                let d = inv(4.0, 0.6, 1.0, a, kind).unwrap();
                let b = d.params.base;
                assert!((d.companion_z(0.0).unwrap() - b.z1).abs() < 1e-9);
                assert!((d.companion_z(1.0).unwrap() - b.z2).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sextic_companion_misses_final_endpoint() {
        let d = inv(4.0, 0.6, 1.0, 4.0, ZProtocolKind::Sextic).unwrap();
        let b = d.params.base;
        assert!((d.companion_z(0.0).unwrap() - b.z1).abs() < 1e-9);
        assert!((d.companion_z(1.0).unwrap() - b.z2).abs() > 1e-3);
        // Endpoint commutation still holds: y(τ) = 0 and x(τ)/z(τ) = x/z2.
        assert!(d.sample(1.0).commutator_norm(&b.h2()) < 1e-10);
    }

    #[test]
    fn invariance_conditions_hold() {
        // ẋ = −2yZ, ẏ = 2xZ − 2zX, ż = 2yX via central differences.
        let d = inv(4.0, 0.4, 1.0, 5.0, ZProtocolKind::Quintic).unwrap();
        let big_x = d.params.base.x;
        let h = 1e-6;
        for k in 1..200 {
            let t = k as f64 / 200.0;
            let dp = (d.sample(t + h) - d.sample(t - h)) * (0.5 / h);
            let p = d.sample(t);
            let zc = d.companion_z(t).unwrap();
            assert!((dp.x + 2.0 * p.y * zc).abs() < 1e-6);
            assert!((dp.y - (2.0 * p.x * zc - 2.0 * p.z * big_x)).abs() < 1e-6);
            assert!((dp.z - 2.0 * p.y * big_x).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn endpoint_gate_matches_feasibility_condition(
            eps1 in 0.1..10.0f64, ratio in 0.05..1.0f64, xfrac in 0.01..2.0f64,
        ) {
            let x = xfrac * eps1 * ratio;
            // z1² ≥ x²(1 − r²)/r² with z1² = ε1² − x²
            let lhs = eps1 * eps1 - x * x;
            let rhs = x * x * (1.0 - ratio * ratio) / (ratio * ratio);
            prop_assume!((lhs - rhs).abs() > 1e-9 * lhs.abs().max(rhs));
            let feasible = lhs >= rhs;
            prop_assert_eq!(lz_endpoints(eps1, ratio, x).is_ok(), feasible);
        }
    }
}
