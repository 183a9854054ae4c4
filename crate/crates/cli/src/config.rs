//! `key = value` sweep documents.
//!
//! One assignment per line, `#` starts a comment, list values are comma
//! separated. A later assignment to the same axis replaces an earlier one, which
//! is how a user file refines a preset.

use std::fmt;
use std::path::PathBuf;

use qhe_otto_core::cycle::{DEFAULT_BETA1, DEFAULT_EPS1};
use qhe_otto_core::{BathPair, CycleConfig, DriveSpec, HeatForm, ZProtocolKind, DEFAULT_STEPS};

use crate::presets;

/// Parse failure with the offending line (1-based; `None` for document-level
/// problems) and field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}, field `{}`: {}", self.field, self.message),
            None => write!(f, "field `{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: Option<usize>, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DriveKind {
    Lz,
    Invariant,
}

impl DriveKind {
    pub fn name(self) -> &'static str {
        match self {
            DriveKind::Lz => "lz",
            DriveKind::Invariant => "inv",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "lz" => Some(DriveKind::Lz),
            "inv" | "invariant" => Some(DriveKind::Invariant),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Full cycles on the tau × ratio × drive × protocol × A grid.
    Cycle,
    /// Closed-form zero-work fidelity curves over bath ratio × gap ratio.
    ZeroWork,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Scalars shared by every grid point. Its tau, ratio and drive are
    /// overwritten per point.
    pub base: CycleConfig,
    pub mode: SweepMode,
    pub taus: Vec<f64>,
    pub ratios: Vec<f64>,
    pub drives: Vec<DriveKind>,
    pub protocols: Vec<ZProtocolKind>,
    pub a_values: Vec<f64>,
    /// `β₁/β₂` values for zero-work curves.
    pub beta_ratios: Vec<f64>,
    /// Ratio samples per zero-work curve when no ratio axis is given; each
    /// curve then spans `[β₁/β₂, 1]`.
    pub points: usize,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl SweepSpec {
    /// Number of grid points `run_sweep` will visit.
    pub fn len(&self) -> usize {
        match self.mode {
            SweepMode::ZeroWork => {
                let per = if self.ratios.is_empty() {
                    self.points
                } else {
                    self.ratios.len()
                };
                self.beta_ratios.len() * per
            }
            SweepMode::Cycle => {
                let per_drive: usize = self
                    .drives
                    .iter()
                    .map(|d| match d {
                        DriveKind::Lz => 1,
                        DriveKind::Invariant => self.protocols.len() * self.a_values.len(),
                    })
                    .sum();
                self.taus.len() * self.ratios.len() * per_drive
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Config for one cycle grid point.
    pub fn point(&self, tau: f64, ratio: f64, drive: DriveSpec) -> CycleConfig {
        CycleConfig {
            tau,
            ratio,
            drive,
            ..self.base
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    line: Option<usize>,
    key: String,
    value: String,
}

/// Axis slots: alternative spellings of the same axis share a slot so the
/// last one written wins.
fn slot(key: &str) -> Option<&'static str> {
    Some(match key {
        "preset" => "preset",
        "mode" => "mode",
        "eps1" => "eps1",
        "beta1" => "beta1",
        "beta2" => "beta2",
        "x" => "x",
        "n" | "steps" => "n",
        "heat_form" => "heat_form",
        "tau" | "tau_linspace" => "tau",
        "ratio" | "ratio_linspace" => "ratio",
        "drive" => "drive",
        "protocol" => "protocol",
        "a" | "a_geomspace" => "a",
        "beta_ratio" => "beta_ratio",
        "points" => "points",
        "out" => "out",
        "workers" => "workers",
        _ => return None,
    })
}

const AXES: [&str; 6] = ["tau", "ratio", "drive", "protocol", "a", "beta_ratio"];

fn tokenize(text: &str, user: bool) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = user.then_some(i + 1);
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(err(line, body, "expected `key = value`"));
        };
        let key = key.trim();
        let key = if key == "A" {
            "a".to_string()
        } else {
            key.to_string()
        };
        if slot(&key).is_none() {
            return Err(err(line, &key, "unknown key"));
        }
        out.push(Entry {
            line,
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

fn parse_f64(e: &Entry, s: &str) -> Result<f64, ConfigError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| err(e.line, &e.key, format!("`{}` is not a number", s.trim())))?;
    if !v.is_finite() {
        return Err(err(e.line, &e.key, "must be finite"));
    }
    Ok(v)
}

fn parse_usize(e: &Entry, s: &str) -> Result<usize, ConfigError> {
    s.trim().parse().map_err(|_| {
        err(
            e.line,
            &e.key,
            format!("`{}` is not a non-negative integer", s.trim()),
        )
    })
}

fn items(e: &Entry) -> Result<Vec<&str>, ConfigError> {
    let parts: Vec<&str> = e.value.split(',').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(err(e.line, &e.key, "empty list or list item"));
    }
    Ok(parts)
}

fn float_list(e: &Entry) -> Result<Vec<f64>, ConfigError> {
    items(e)?.into_iter().map(|s| parse_f64(e, s)).collect()
}

/// `lo, hi, count` evenly spaced (linear or geometric), endpoints exact.
fn spaced(e: &Entry, geometric: bool) -> Result<Vec<f64>, ConfigError> {
    let parts = items(e)?;
    if parts.len() != 3 {
        return Err(err(e.line, &e.key, "expected `lo, hi, count`"));
    }
    let lo = parse_f64(e, parts[0])?;
    let hi = parse_f64(e, parts[1])?;
    let count = parse_usize(e, parts[2])?;
    if count == 0 {
        return Err(err(e.line, &e.key, "count must be at least 1"));
    }
    if geometric && !(lo > 0.0 && hi > 0.0) {
        return Err(err(
            e.line,
            &e.key,
            "geometric range needs positive endpoints",
        ));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok(linspace(lo, hi, count, geometric))
}

pub fn linspace(lo: f64, hi: f64, count: usize, geometric: bool) -> Vec<f64> {
    (0..count)
        .map(|k| {
            if k == count - 1 {
                return hi;
            }
            let s = k as f64 / (count - 1) as f64;
            if geometric {
                lo * (hi / lo).powf(s)
            } else {
                lo * (1.0 - s) + hi * s
            }
        })
        .collect()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn check_all(
    e: &Entry,
    v: &[f64],
    ok: impl Fn(f64) -> bool,
    what: &str,
) -> Result<(), ConfigError> {
    match v.iter().find(|&&x| !ok(x)) {
        Some(bad) => Err(err(
            e.line,
            &e.key,
            format!("{bad} is out of range ({what})"),
        )),
        None => Ok(()),
    }
}

/// Parses a sweep document. A `preset = <name>` line pulls in that preset
/// first; the document's own assignments then override it.
pub fn parse_config(text: &str) -> Result<SweepSpec, ConfigError> {
    parse_config_with_preset(text, None)
}

/// As [`parse_config`], with `preset` taking precedence over any `preset`
/// line in the document.
pub fn parse_config_with_preset(
    text: &str,
    preset: Option<&str>,
) -> Result<SweepSpec, ConfigError> {
    let user = tokenize(text, true)?;
    let named = match preset {
        Some(p) => Some((None, p.to_string())),
        None => user
            .iter()
            .rev()
            .find(|e| e.key == "preset")
            .map(|e| (e.line, e.value.clone())),
    };
    let mut entries = Vec::new();
    if let Some((line, name)) = named {
        let body = presets::lookup(&name).ok_or_else(|| {
            err(
                line,
                "preset",
                format!(
                    "unknown preset `{name}` (expected one of {})",
                    presets::NAMES.join(", ")
                ),
            )
        })?;
        entries.extend(tokenize(body, false)?);
    }
    entries.extend(user.into_iter().filter(|e| e.key != "preset"));

    let mut table: Vec<(&'static str, Entry)> = Vec::new();
    for e in entries {
        let s = slot(&e.key).expect("validated key");
        table.retain(|(k, _)| *k != s);
        table.push((s, e));
    }
    build(&table)
}

fn build(table: &[(&'static str, Entry)]) -> Result<SweepSpec, ConfigError> {
    let get = |s: &str| table.iter().find(|(k, _)| *k == s).map(|(_, e)| e);

    let scalar = |s: &str| -> Result<Option<f64>, ConfigError> {
        get(s).map(|e| parse_f64(e, &e.value)).transpose()
    };

    let eps1 = scalar("eps1")?.unwrap_or(DEFAULT_EPS1);
    if eps1 <= 0.0 {
        return Err(err(
            get("eps1").and_then(|e| e.line),
            "eps1",
            "must be positive",
        ));
    }
    // Dimensionless defaults: β₁ε₁ = 0.01, β₂ = 4β₁, x = 0.1ε₁.
    let beta1 = scalar("beta1")?.unwrap_or(DEFAULT_BETA1 * DEFAULT_EPS1 / eps1);
    let beta2 = scalar("beta2")?.unwrap_or(4.0 * beta1);
    let baths = BathPair::new(beta1, beta2).map_err(|e| {
        let line = get("beta2").or(get("beta1")).and_then(|e| e.line);
        err(line, "beta1/beta2", e.to_string())
    })?;
    let x = scalar("x")?.unwrap_or(0.1 * eps1);
    if x <= 0.0 {
        return Err(err(get("x").and_then(|e| e.line), "x", "must be positive"));
    }
    let steps = match get("n") {
        Some(e) => {
            let n = parse_usize(e, &e.value)?;
            if n < 2 {
                return Err(err(e.line, &e.key, "needs at least 2 grid points"));
            }
            n
        }
        None => DEFAULT_STEPS,
    };
    let heat_form = match get("heat_form") {
        Some(e) => parse_heat_form(&e.value)
            .ok_or_else(|| err(e.line, &e.key, "expected `derived` or `printed`"))?,
        None => HeatForm::Derived,
    };
    let mode = match get("mode") {
        Some(e) => match e.value.as_str() {
            "cycle" => SweepMode::Cycle,
            "zero_work" => SweepMode::ZeroWork,
            _ => return Err(err(e.line, &e.key, "expected `cycle` or `zero_work`")),
        },
        None => SweepMode::Cycle,
    };

    if !AXES.iter().any(|a| get(a).is_some()) {
        return Err(err(
            None,
            "axes",
            format!("no sweep axis given (one of {})", AXES.join(", ")),
        ));
    }

    let taus = match get("tau") {
        Some(e) => {
            let v = if e.key == "tau_linspace" {
                spaced(e, false)?
            } else {
                float_list(e)?
            };
            check_all(e, &v, |t| t > 0.0, "tau > 0")?;
            sorted(v)
        }
        None => vec![1.0],
    };
    let ratios = match get("ratio") {
        Some(e) => {
            let v = if e.key == "ratio_linspace" {
                spaced(e, false)?
            } else {
                float_list(e)?
            };
            check_all(e, &v, |r| r > 0.0 && r <= 1.0, "ratio in (0, 1]")?;
            sorted(v)
        }
        None if mode == SweepMode::ZeroWork => Vec::new(),
        None => vec![0.4],
    };
    let drives = match get("drive") {
        Some(e) => {
            let mut v = items(e)?
                .into_iter()
                .map(|s| {
                    DriveKind::from_name(s)
                        .ok_or_else(|| err(e.line, &e.key, format!("unknown drive `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            v.sort();
            v.dedup();
            v
        }
        None => vec![DriveKind::Lz],
    };
    let protocols = match get("protocol") {
        Some(e) => {
            let v = items(e)?
                .into_iter()
                .map(|s| {
                    ZProtocolKind::from_name(s)
                        .ok_or_else(|| err(e.line, &e.key, format!("unknown protocol `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            ZProtocolKind::ALL
                .into_iter()
                .filter(|k| v.contains(k))
                .collect()
        }
        None => vec![ZProtocolKind::Quintic],
    };
    let a_values = match get("a") {
        Some(e) => {
            let v = if e.key == "a_geomspace" {
                spaced(e, true)?
            } else {
                float_list(e)?
            };
            check_all(e, &v, |a| a > 0.0, "A > 0")?;
            sorted(v)
        }
        None => Vec::new(),
    };
    if mode == SweepMode::Cycle && drives.contains(&DriveKind::Invariant) && a_values.is_empty() {
        return Err(err(
            get("drive").and_then(|e| e.line),
            "a",
            "the invariant drive needs an A axis",
        ));
    }
    let beta_ratios = match get("beta_ratio") {
        Some(e) => {
            let v = float_list(e)?;
            check_all(e, &v, |b| b > 0.0 && b < 1.0, "beta1/beta2 in (0, 1)")?;
            sorted(v)
        }
        None => Vec::new(),
    };
    if mode == SweepMode::ZeroWork && beta_ratios.is_empty() {
        return Err(err(
            get("mode").and_then(|e| e.line),
            "beta_ratio",
            "zero-work curves need a beta_ratio axis",
        ));
    }
    let points = match get("points") {
        Some(e) => {
            let p = parse_usize(e, &e.value)?;
            if p < 2 {
                return Err(err(e.line, &e.key, "needs at least 2 points"));
            }
            p
        }
        None => 100,
    };
    let output = get("out").map(|e| PathBuf::from(&e.value));
    let workers = match get("workers") {
        Some(e) => Some(
            parse_workers(&e.value)
                .ok_or_else(|| err(e.line, &e.key, "expected a positive integer"))?,
        ),
        None => None,
    };

    Ok(SweepSpec {
        base: CycleConfig {
            baths,
            eps1,
            ratio: ratios.first().copied().unwrap_or(1.0),
            x,
            tau: taus[0],
            steps,
            drive: DriveSpec::Lz,
            heat_form,
        },
        mode,
        taus,
        ratios,
        drives,
        protocols,
        a_values,
        beta_ratios,
        points,
        output,
        workers,
    })
}

pub fn parse_heat_form(s: &str) -> Option<HeatForm> {
    match s {
        "derived" => Some(HeatForm::Derived),
        "printed" => Some(HeatForm::AsPrinted),
        _ => None,
    }
}

pub fn parse_workers(s: &str) -> Option<usize> {
    s.trim().parse().ok().filter(|&n| n > 0)
}
