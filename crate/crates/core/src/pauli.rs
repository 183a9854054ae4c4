//! Algebra of traceless Hermitian 2×2 generators `p·σ`.

use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Real coefficients of `X σx + Y σy + Z σz`, in energy units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PauliVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PauliVector {
    pub const ZERO: PauliVector = PauliVector::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Half the eigenvalue splitting, `√(x²+y²+z²)`.
    pub fn magnitude(&self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(&self, other: &PauliVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &PauliVector) -> PauliVector {
        PauliVector::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    /// Frobenius norm of the commutator `[p·σ, q·σ] = 2i (p×q)·σ`.
    pub fn commutator_norm(&self, other: &PauliVector) -> f64 {
        2.0 * core::f64::consts::SQRT_2 * self.cross(other).magnitude()
    }

    /// Dense matrix `p·σ`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.z, 0.0), Complex64::new(self.x, -self.y)],
            [Complex64::new(self.x, self.y), Complex64::new(-self.z, 0.0)],
        ]
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        let m = self.matrix();
        Spinor {
            up: m[0][0] * v.up + m[0][1] * v.down,
            down: m[1][0] * v.up + m[1][1] * v.down,
        }
    }
}

impl Add for PauliVector {
    type Output = PauliVector;
    fn add(self, o: PauliVector) -> PauliVector {
        PauliVector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for PauliVector {
    type Output = PauliVector;
    fn sub(self, o: PauliVector) -> PauliVector {
        PauliVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for PauliVector {
    type Output = PauliVector;
    fn mul(self, s: f64) -> PauliVector {
        PauliVector::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for PauliVector {
    type Output = PauliVector;
    fn neg(self) -> PauliVector {
        self * -1.0
    }
}

/// Two-component state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub up: Complex64,
    pub down: Complex64,
}

impl Spinor {
    pub fn new(up: Complex64, down: Complex64) -> Result<Self> {
        if !(up.is_finite() && down.is_finite()) {
            return Err(Error::NonFinite { what: "spinor" });
        }
        Ok(Self { up, down })
    }

    pub fn real(up: f64, down: f64) -> Result<Self> {
        Self::new(Complex64::new(up, 0.0), Complex64::new(down, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.up.norm().hypot(self.down.norm())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            up: self.up * c,
            down: self.down * c,
        }
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }
}

/// Row-major complex 2×2 matrix produced by unitary evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryMatrix {
    pub m: [[Complex64; 2]; 2],
}

impl UnitaryMatrix {
    pub const IDENTITY: UnitaryMatrix = UnitaryMatrix {
        m: [[ONE, ZERO], [ZERO, ONE]],
    };

    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        if m.iter().flatten().all(|c| c.is_finite()) {
            Ok(Self { m })
        } else {
            Err(Error::NonFinite { what: "matrix" })
        }
    }

    pub fn dagger(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        let m = &self.m;
        Spinor {
            up: m[0][0] * v.up + m[0][1] * v.down,
            down: m[1][0] * v.up + m[1][1] * v.down,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|e| *e *= c);
        out
    }

    /// Largest entry-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖U†U − I‖_max`
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self).max_abs_diff(&Self::IDENTITY)
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }
}

impl Mul for UnitaryMatrix {
    type Output = UnitaryMatrix;
    fn mul(self, rhs: UnitaryMatrix) -> UnitaryMatrix {
        let (a, b) = (&self.m, &rhs.m);
        UnitaryMatrix {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }
}

/// Eigen-decomposition of `p·σ` with eigenvalues `∓ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    pub epsilon: f64,
    /// Eigenvalue `−ε`.
    pub ground: Spinor,
    /// Eigenvalue `+ε`.
    pub excited: Spinor,
}

/// Orthonormal eigenpair of `p·σ`.
///
/// Each eigenvector is built from whichever of its two algebraically
/// equivalent forms has the larger norm (`ε+Z` vs `ε−Z`), so nothing cancels
/// near the poles `Z → ±ε`. The global phase is fixed so that the first
/// nonzero component is real and positive; for `Y = 0`, `X > 0` this reproduces
/// the familiar real Landau–Zener eigenvectors.
pub fn eigensystem(p: PauliVector) -> Result<EigenSystem> {
    if !p.is_finite() {
        return Err(Error::NonFinite { what: "generator" });
    }
    let eps = p.magnitude();
    if eps == 0.0 {
        return Err(Error::DegenerateGenerator);
    }
    let off_lo = Complex64::new(p.x, p.y); // X + iY
    let off_hi = off_lo.conj(); // X − iY

    let (ground, excited) = if p.z >= 0.0 {
        let s = eps + p.z;
        (
            (off_hi, Complex64::new(-s, 0.0)),
            (Complex64::new(s, 0.0), off_lo),
        )
    } else {
        let d = eps - p.z;
        (
            (Complex64::new(d, 0.0), -off_lo),
            (off_hi, Complex64::new(d, 0.0)),
        )
    };

    Ok(EigenSystem {
        epsilon: eps,
        ground: fix_phase(ground.0, ground.1)?,
        excited: fix_phase(excited.0, excited.1)?,
    })
}

fn fix_phase(up: Complex64, down: Complex64) -> Result<Spinor> {
    let v = Spinor::new(up, down)?.normalized()?;
    let lead = if v.up.norm() > 0.0 { v.up } else { v.down };
    Ok(v.scale(lead.conj() / lead.norm()))
}

/// `exp(−i (p·σ) dt) = cos(ε dt) I − i sin(ε dt) (p̂·σ)`.
pub fn step_unitary(p: PauliVector, dt: f64) -> UnitaryMatrix {
    let eps = p.magnitude();
    let theta = eps * dt;
    // s = sin(ε dt)/ε, with the removable singularity at ε = 0 handled by series.
    let (c, s) = if theta.abs() < 1e-8 {
        (1.0 - 0.5 * theta * theta, dt * (1.0 - theta * theta / 6.0))
    } else {
        let (sin, cos) = theta.sin_cos();
        (cos, sin / eps)
    };
    UnitaryMatrix {
        m: [
            [
                Complex64::new(c, -s * p.z),
                Complex64::new(-s * p.y, -s * p.x),
            ],
            [
                Complex64::new(s * p.y, -s * p.x),
                Complex64::new(c, s * p.z),
            ],
        ],
    }
}

/// Squared overlap `|⟨a|b⟩|²` of two normalized states.
pub fn fidelity(a: &Spinor, b: &Spinor) -> Result<f64> {
    for v in [a, b] {
        let n = v.norm();
        if (n - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized { norm: n });
        }
    }
    Ok(a.inner(b).norm_sqr().clamp(0.0, 1.0))
}

/// `trace(H†H) = 2(x²+y²+z²)`.
pub fn frobenius_sq(p: PauliVector) -> f64 {
    2.0 * p.dot(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    fn residual(p: PauliVector, v: &Spinor, lambda: f64) -> f64 {
        let hv = p.apply(v);
        (hv.up - v.up * lambda)
            .norm()
            .hypot((hv.down - v.down * lambda).norm())
    }

    #[test]
    fn sigma_z_eigenbasis() {
        let e = eigensystem(PauliVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(e.epsilon, 1.0);
        assert!(close(e.ground.up, ZERO, 1e-15) && close(e.ground.down, ONE, 1e-15));
        assert!(close(e.excited.up, ONE, 1e-15) && close(e.excited.down, ZERO, 1e-15));
    }

    #[test]
    fn sigma_x_eigenbasis() {
        let e = eigensystem(PauliVector::new(1.0, 0.0, 0.0)).unwrap();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(e.ground.up, h, 1e-15) && close(e.ground.down, -h, 1e-15));
        assert!(close(e.excited.up, h, 1e-15) && close(e.excited.down, h, 1e-15));
    }

    #[test]
    fn tilted_generator_residuals() {
        let p = PauliVector::new(0.1, 0.0, 0.99f64.sqrt());
        let e = eigensystem(p).unwrap();
        assert!((e.epsilon - 1.0).abs() < 1e-12);
        assert!(residual(p, &e.ground, -1.0) < 1e-10);
        assert!(residual(p, &e.excited, 1.0) < 1e-10);
    }

    #[test]
    fn matches_real_lz_closed_form() {
        // Y = 0, X > 0: ground = (√(X²/2ε(ε+Z)), −√((ε+Z)/2ε))
        for &(x, z) in &[(0.1, 0.9), (0.4, -0.3), (2.0, 0.0), (0.3, -5.0)] {
            let e = eigensystem(PauliVector::new(x, 0.0, z)).unwrap();
            let eps = e.epsilon;
            let g = (x * x / (2.0 * eps * (eps + z))).sqrt();
            let gd = -((eps + z) / (2.0 * eps)).sqrt();
            let ex = (x * x / (2.0 * eps * (eps - z))).sqrt();
            let exd = ((eps - z) / (2.0 * eps)).sqrt();
            assert!((e.ground.up.re - g).abs() < 1e-12 && (e.ground.down.re - gd).abs() < 1e-12);
            assert!(
                (e.excited.up.re - ex).abs() < 1e-12 && (e.excited.down.re - exd).abs() < 1e-12
            );
        }
    }

    #[test]
    fn near_pole_is_stable() {
        let p = PauliVector::new(1e-12, -3e-13, -1.0);
        let e = eigensystem(p).unwrap();
        assert!(residual(p, &e.ground, -e.epsilon) < 1e-12);
        assert!(residual(p, &e.excited, e.epsilon) < 1e-12);
        assert!(e.ground.inner(&e.excited).norm() < 1e-12);
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(
            eigensystem(PauliVector::ZERO),
            Err(Error::DegenerateGenerator)
        );
        assert!(eigensystem(PauliVector::new(f64::NAN, 0.0, 1.0)).is_err());
    }

    #[test]
    fn step_unitary_examples() {
        let p = PauliVector::new(0.3, -0.2, 0.7);
        assert_eq!(step_unitary(p, 0.0), UnitaryMatrix::IDENTITY);

        let u = step_unitary(PauliVector::new(0.0, 0.0, 1.0), PI);
        assert!(u.max_abs_diff(&UnitaryMatrix::IDENTITY.scale(-ONE)) < 1e-15);

        let u = step_unitary(PauliVector::new(1.0, 0.0, 0.0), PI / 2.0);
        let minus_i_sx = UnitaryMatrix {
            m: [
                [ZERO, Complex64::new(0.0, -1.0)],
                [Complex64::new(0.0, -1.0), ZERO],
            ],
        };
        assert!(u.max_abs_diff(&minus_i_sx) < 1e-15);
    }

    #[test]
    fn step_unitary_zero_generator_is_identity() {
        assert_eq!(
            step_unitary(PauliVector::ZERO, 3.0),
            UnitaryMatrix::IDENTITY
        );
    }

    #[test]
    fn fidelity_examples() {
        let up = Spinor::real(1.0, 0.0).unwrap();
        let down = Spinor::real(0.0, 1.0).unwrap();
        let plus = Spinor::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
        assert_eq!(fidelity(&up, &up).unwrap(), 1.0);
        assert_eq!(fidelity(&up, &down).unwrap(), 0.0);
        assert!((fidelity(&up, &plus).unwrap() - 0.5).abs() < 1e-15);
        let fat = Spinor::real(1.0, 1.0).unwrap();
        assert!(matches!(
            fidelity(&fat, &up),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_sq(PauliVector::ZERO), 0.0);
        assert_eq!(frobenius_sq(PauliVector::new(0.0, 0.0, 1.0)), 2.0);
        assert_eq!(frobenius_sq(PauliVector::new(1.0, 2.0, 2.0)), 18.0);
    }

    #[test]
    fn frobenius_matches_dense_trace() {
        let p = PauliVector::new(0.3, -1.1, 0.25);
        let m = p.matrix();
        let tr: f64 = m.iter().flatten().map(|c| c.norm_sqr()).sum();
        assert!((tr - frobenius_sq(p)).abs() < 1e-14);
    }

    #[test]
    fn commutator_norm_matches_dense() {
        let p = PauliVector::new(0.3, -1.1, 0.25);
        let q = PauliVector::new(-0.7, 0.2, 1.5);
        let (a, b) = (p.matrix(), q.matrix());
        let mut sq = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut c = ZERO;
                for k in 0..2 {
                    c += a[i][k] * b[k][j] - b[i][k] * a[k][j];
                }
                sq += c.norm_sqr();
            }
        }
        assert!((sq.sqrt() - p.commutator_norm(&q)).abs() < 1e-13);
    }

    fn pauli() -> impl Strategy<Value = PauliVector> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -3.0..3.0f64).prop_filter_map(
            "nonzero direction",
            |(x, y, z, log_eps)| {
                let p = PauliVector::new(x, y, z);
                let m = p.magnitude();
                (m > 1e-3).then(|| p * (10f64.powf(log_eps) / m))
            },
        )
    }

    fn spinor() -> impl Strategy<Value = Spinor> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_filter_map(
            "nonzero",
            |(a, b, c, d)| {
                Spinor::new(Complex64::new(a, b), Complex64::new(c, d))
                    .ok()?
                    .normalized()
                    .ok()
                    .filter(|_| a.hypot(b).hypot(c.hypot(d)) > 1e-3)
            },
        )
    }

    proptest! {
        #[test]
        fn step_is_unitary(p in pauli(), dt in -10.0..10.0f64) {
            prop_assert!(step_unitary(p, dt).unitarity_defect() < 1e-12);
        }

        #[test]
        fn commuting_steps_compose(p in pauli(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
            let lhs = step_unitary(p, a) * step_unitary(p, b);
            prop_assert!(lhs.max_abs_diff(&step_unitary(p, a + b)) < 1e-10);
        }

        #[test]
        fn eigen_residuals(p in pauli()) {
            let e = eigensystem(p).unwrap();
            let scale = e.epsilon.max(1.0);
            prop_assert!((e.epsilon - p.magnitude()).abs() < 1e-12 * scale);
            prop_assert!(residual(p, &e.ground, -e.epsilon) < 1e-10 * scale);
            prop_assert!(residual(p, &e.excited, e.epsilon) < 1e-10 * scale);
            prop_assert!(e.ground.inner(&e.excited).norm() < 1e-10);
            prop_assert!((e.ground.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn fidelity_symmetric(a in spinor(), b in spinor()) {
            prop_assert_eq!(fidelity(&a, &b).unwrap(), fidelity(&b, &a).unwrap());
        }

        #[test]
        fn fidelity_phase_invariant(a in spinor(), b in spinor(), theta in 0.0..6.3f64) {
            let rotated = a.scale(Complex64::from_polar(1.0, theta));
            let d = fidelity(&rotated, &b).unwrap() - fidelity(&a, &b).unwrap();
            prop_assert!(d.abs() < 1e-12);
        }
    }
}
