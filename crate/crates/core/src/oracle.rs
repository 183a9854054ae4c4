//! Independent reference propagator for verifying the product formula.
//!
//! Integrates `i dU/dt = F(t) U` with an adaptive Dormand–Prince 5(4) pair and
//! projects the result back onto the unitary group by polar decomposition.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::pauli::UnitaryMatrix;
use crate::propagator::DriveProtocol;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

// 5th-order weights minus embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type State = [Complex64; 4];

fn rhs<D: DriveProtocol + ?Sized>(drive: &D, t: f64, u: &State) -> Result<State> {
    let p = drive.sample(t);
    if !p.is_finite() {
        return Err(Error::NonFiniteDrive { t });
    }
    let h = p.matrix();
    let mi = Complex64::new(0.0, -1.0);
    Ok([
        mi * (h[0][0] * u[0] + h[0][1] * u[2]),
        mi * (h[0][0] * u[1] + h[0][1] * u[3]),
        mi * (h[1][0] * u[0] + h[1][1] * u[2]),
        mi * (h[1][0] * u[1] + h[1][1] * u[3]),
    ])
}

fn axpy(base: &State, h: f64, ks: &[State], weights: &[f64]) -> State {
    let mut out = *base;
    for (k, &w) in ks.iter().zip(weights) {
        if w != 0.0 {
            for (o, ki) in out.iter_mut().zip(k) {
                *o += ki * (h * w);
            }
        }
    }
    out
}

/// Nearest unitary to `u`: `U (U†U)^{-1/2}`.
pub fn polar_unitary(u: &UnitaryMatrix) -> UnitaryMatrix {
    let m = u.dagger() * *u;
    // √M = (M + √det I)/√(tr M + 2√det) for 2×2 positive definite M.
    let sd = m.det().re.max(0.0).sqrt();
    let norm = (m.trace().re + 2.0 * sd).sqrt();
    let s = [
        [(m.m[0][0] + sd) / norm, m.m[0][1] / norm],
        [m.m[1][0] / norm, (m.m[1][1] + sd) / norm],
    ];
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let inv = UnitaryMatrix {
        m: [
            [s[1][1] / det, -s[0][1] / det],
            [-s[1][0] / det, s[0][0] / det],
        ],
    };
    *u * inv
}

/// Adaptive reference solution of the time-ordered exponential.
///
/// `tol` bounds the local error per accepted step (max-modulus norm over the
/// four entries) and must lie in `[1e-12, 1e-4]`.
pub fn evolve_oracle<D: DriveProtocol + ?Sized>(drive: &D, tol: f64) -> Result<UnitaryMatrix> {
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(Error::InvalidTolerance(tol));
    }
    let tau = drive.duration();
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut u: State = [one, zero, zero, one];
    let mut t = 0.0;
    let scale = drive
        .sample(0.0)
        .magnitude()
        .max(drive.sample(tau).magnitude())
        .max(1.0);
    let mut h = (0.01 / scale).min(tau);
    let h_min = 1e-14 * tau;

    let mut k: [State; 7] = [[zero; 4]; 7];
    k[0] = rhs(drive, t, &u)?;
    while t < tau {
        if tau - t < h {
            h = tau - t;
        }
        for s in 1..7 {
            let stage = axpy(&u, h, &k[..s], &A[s][..s]);
            k[s] = rhs(drive, t + C[s] * h, &stage)?;
        }
        let err_vec = axpy(&[zero; 4], h, &k, &E);
        let err = err_vec.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if err <= tol {
            u = axpy(&u, h, &k[..6], &A[6]);
            t += h;
            // First-same-as-last: the 7th stage is the derivative at the new point.
            k[0] = k[6];
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < h_min && t < tau {
            return Err(Error::ToleranceNotReached { t, step: h });
        }
    }
    let raw = UnitaryMatrix::new([[u[0], u[1]], [u[2], u[3]]])?;
    Ok(polar_unitary(&raw))
}
