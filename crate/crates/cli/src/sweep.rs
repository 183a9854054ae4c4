//! Grid expansion, parallel evaluation and CSV emission.

use std::io::{self, Write};
use std::path::PathBuf;

use qhe_otto_core::{
    classify, clausius_ok, quasi_static, run_cycle, zero_work_fidelity, CycleResult, DriveSpec,
    HeatWork, Regime, ZProtocolKind,
};
use rayon::prelude::*;

use crate::config::{linspace, ConfigError, DriveKind, SweepMode, SweepSpec};
use crate::format::format_g;

pub const CSV_HEADER: [&str; 24] = [
    "tau",
    "ratio",
    "x",
    "eps1",
    "beta1",
    "beta2",
    "drive",
    "protocol",
    "A",
    "n",
    "f1",
    "f2",
    "q1",
    "q2",
    "w",
    "eta",
    "w_qs",
    "eta_qs",
    "w_over_wqs",
    "cost",
    "cost_ratio",
    "regime",
    "clausius",
    "skipped_reason",
];

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("config: {0}")]
    ConfigParse(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub f1: f64,
    pub f2: f64,
    pub q1: f64,
    pub q2: f64,
    pub w: f64,
    pub eta: Option<f64>,
    pub w_qs: f64,
    pub eta_qs: f64,
    pub w_over_wqs: Option<f64>,
    pub cost: Option<f64>,
    pub cost_ratio: Option<f64>,
    pub regime: Regime,
    pub clausius: bool,
}

impl From<CycleResult> for Metrics {
    fn from(r: CycleResult) -> Self {
        Self {
            f1: r.f1,
            f2: r.f2,
            q1: r.q1,
            q2: r.q2,
            w: r.w,
            eta: r.eta,
            w_qs: r.w_qs,
            eta_qs: r.eta_qs,
            w_over_wqs: r.work_ratio(),
            cost: Some(r.cost),
            cost_ratio: r.cost_ratio,
            regime: r.regime,
            clausius: r.clausius,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Done(Metrics),
    Skipped(String),
}

/// One grid point: its inputs and either its metrics or why it was skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub tau: Option<f64>,
    pub ratio: f64,
    pub x: Option<f64>,
    pub eps1: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// `lz`, `inv`, or `none` for closed-form zero-work rows.
    pub drive: &'static str,
    pub protocol: Option<ZProtocolKind>,
    pub a_const: Option<f64>,
    pub steps: Option<usize>,
    pub outcome: Outcome,
}

impl SweepRow {
    pub fn metrics(&self) -> Option<&Metrics> {
        match &self.outcome {
            Outcome::Done(m) => Some(m),
            Outcome::Skipped(_) => None,
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.outcome, Outcome::Skipped(_))
    }

    pub fn record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(format_g).unwrap_or_default();
        let mut out = vec![
            opt(self.tau),
            format_g(self.ratio),
            opt(self.x),
            format_g(self.eps1),
            format_g(self.beta1),
            format_g(self.beta2),
            self.drive.to_string(),
            self.protocol
                .map(|p| p.name().to_string())
                .unwrap_or_default(),
            opt(self.a_const),
            self.steps.map(|n| n.to_string()).unwrap_or_default(),
        ];
        match &self.outcome {
            Outcome::Done(m) => {
                out.extend([
                    format_g(m.f1),
                    format_g(m.f2),
                    format_g(m.q1),
                    format_g(m.q2),
                    format_g(m.w),
                    opt(m.eta),
                    format_g(m.w_qs),
                    format_g(m.eta_qs),
                    opt(m.w_over_wqs),
                    opt(m.cost),
                    opt(m.cost_ratio),
                    m.regime.name().to_string(),
                    m.clausius.to_string(),
                    String::new(),
                ]);
            }
            Outcome::Skipped(reason) => {
                out.extend(std::iter::repeat_n(String::new(), 13));
                out.push(reason.clone());
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
enum Point {
    Cycle {
        tau: f64,
        ratio: f64,
        drive: DriveSpec,
    },
    ZeroWork {
        beta_ratio: f64,
        ratio: f64,
    },
}

/// Grid points in lexicographic axis order: tau, ratio, drive, protocol, A
/// (or bath ratio, gap ratio for zero-work curves).
fn grid(spec: &SweepSpec) -> Vec<Point> {
    let mut pts = Vec::with_capacity(spec.len());
    match spec.mode {
        SweepMode::ZeroWork => {
            for &beta_ratio in &spec.beta_ratios {
                let ratios = if spec.ratios.is_empty() {
                    linspace(beta_ratio, 1.0, spec.points, false)
                } else {
                    spec.ratios.clone()
                };
                pts.extend(
                    ratios
                        .into_iter()
                        .map(|ratio| Point::ZeroWork { beta_ratio, ratio }),
                );
            }
        }
        SweepMode::Cycle => {
            for &tau in &spec.taus {
                for &ratio in &spec.ratios {
                    for &d in &spec.drives {
                        match d {
                            DriveKind::Lz => pts.push(Point::Cycle {
                                tau,
                                ratio,
                                drive: DriveSpec::Lz,
                            }),
                            DriveKind::Invariant => {
                                for &kind in &spec.protocols {
                                    for &a_const in &spec.a_values {
                                        pts.push(Point::Cycle {
                                            tau,
                                            ratio,
                                            drive: DriveSpec::Invariant { a_const, kind },
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    pts
}

fn evaluate(spec: &SweepSpec, p: Point) -> SweepRow {
    match p {
        Point::Cycle { tau, ratio, drive } => {
            let cfg = spec.point(tau, ratio, drive);
            let (protocol, a_const) = match drive {
                DriveSpec::Lz => (None, None),
                DriveSpec::Invariant { a_const, kind } => (Some(kind), Some(a_const)),
            };
            SweepRow {
                tau: Some(tau),
                ratio,
                x: Some(cfg.x),
                eps1: cfg.eps1,
                beta1: cfg.baths.beta1,
                beta2: cfg.baths.beta2,
                drive: drive.name(),
                protocol,
                a_const,
                steps: Some(cfg.steps),
                outcome: match run_cycle(&cfg) {
                    Ok(r) => Outcome::Done(r.into()),
                    Err(e) => Outcome::Skipped(e.to_string()),
                },
            }
        }
        Point::ZeroWork { beta_ratio, ratio } => {
            let b = spec.base;
            let beta1 = b.baths.beta1;
            let beta2 = beta1 / beta_ratio;
            SweepRow {
                tau: None,
                ratio,
                x: None,
                eps1: b.eps1,
                beta1,
                beta2,
                drive: "none",
                protocol: None,
                a_const: None,
                steps: None,
                outcome: zero_work_row(b.eps1, ratio * b.eps1, beta1, beta2, b.heat_form),
            }
        }
    }
}

fn zero_work_row(
    eps1: f64,
    eps2: f64,
    beta1: f64,
    beta2: f64,
    form: qhe_otto_core::HeatForm,
) -> Outcome {
    let f = zero_work_fidelity(eps1, eps2, beta1, beta2);
    // Endpoints of each curve sit at F = 1 up to roundoff.
    if !(-1e-12..=1.0 + 1e-12).contains(&f) {
        return Outcome::Skipped(format!("zero-work fidelity {} outside [0, 1]", format_g(f)));
    }
    let f = f.clamp(0.0, 1.0);
    let (q1, q2) = form.heats(eps1, eps2, beta1, beta2, f, f);
    let hw = HeatWork::new(q1, q2);
    let (w_qs, eta_qs) = quasi_static(eps1, eps2, beta1, beta2);
    match classify(q1, q2, hw.w) {
        Ok(regime) => Outcome::Done(Metrics {
            f1: f,
            f2: f,
            q1,
            q2,
            w: hw.w,
            eta: hw.eta,
            w_qs,
            eta_qs,
            w_over_wqs: (w_qs.abs() > 1e-15).then(|| hw.w / w_qs),
            cost: None,
            cost_ratio: None,
            regime,
            clausius: clausius_ok(q1, q2, beta1, beta2),
        }),
        Err(e) => Outcome::Skipped(e.to_string()),
    }
}

/// Evaluates every grid point on `workers` threads (all cores when `None`).
/// Row order follows the grid, independent of scheduling.
pub fn run_sweep(spec: &SweepSpec, workers: Option<usize>) -> Result<Vec<SweepRow>, SweepError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers.or(spec.workers) {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let points = grid(spec);
    Ok(pool.install(|| points.par_iter().map(|&p| evaluate(spec, p)).collect()))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), SweepError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
