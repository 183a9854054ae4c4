use alloc::boxed::Box;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which unitary stroke of the cycle an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    /// Energy-gap compression, H₁ → H₂.
    Compression,
    /// Energy-gap expansion, H₂ → H₁ under the time-reversed drive.
    Expansion,
}

impl fmt::Display for Stroke {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stroke::Compression => f.write_str("compression stroke"),
            Stroke::Expansion => f.write_str("expansion stroke"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("generator has zero magnitude, eigenbasis undefined")]
    DegenerateGenerator,

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("step count must be at least 2, got {0}")]
    InvalidStepCount(usize),

    #[error("drive produced a non-finite generator at t = {t}")]
    NonFiniteDrive { t: f64 },

    #[error("oracle tolerance {0} outside [1e-12, 1e-4]")]
    InvalidTolerance(f64),

    #[error("adaptive oracle step size underflowed at t = {t} (h = {step})")]
    ToleranceNotReached { t: f64, step: f64 },

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("gap x = {x} exceeds target energy ratio·eps1 = {eps2}; z2 would be imaginary")]
    GapTooLarge { x: f64, eps2: f64 },

    #[error("invariant radicand negative (min {radicand} at t = {t}); protocol too steep for this duration and gap")]
    RadicandNegative { t: f64, radicand: f64 },

    #[error("work {w} differs from q1 + q2 = {sum}")]
    Inconsistent { w: f64, sum: f64 },

    #[error("heats q1 = {q1}, q2 = {q2} match no operating regime")]
    Unphysical { q1: f64, q2: f64 },

    #[error("{stroke}: {source}")]
    Stroke {
        stroke: Stroke,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_stroke(self, stroke: Stroke) -> Self {
        Error::Stroke {
            stroke,
            source: Box::new(self),
        }
    }

    /// Innermost error, with stroke context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stroke { source, .. } => source.root(),
            other => other,
        }
    }
}
