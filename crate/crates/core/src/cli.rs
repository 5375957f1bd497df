//! Batch front end: sweep configuration, figure grids, evaluation and CSV output.
//!
//! Lengths here are in metres and plasma parameters in 1/m. The numerical
//! modules are unit-free, so the only physical constant is [`HBAR_C`], used to
//! express energies in joules.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::asymptotics::{leading_integral, ntl_series, AsymptoticsSpec};
use crate::energy::{casimir_energy, NumericsSpec, Truncation};
use crate::pfa::pfa_integral;
use crate::scattering::{Plasma, PlaneSheet, SphereSheet};

/// `hbar c` in J m.
pub const HBAR_C: f64 = 3.161_526_8e-26;

/// Graphene plasma parameter in 1/m.
pub const OMEGA_GRAPHENE: f64 = 6.75e5;

/// CSV header, in column order.
pub const COLUMNS: [&str; 14] = [
    "method",
    "R_m",
    "d_m",
    "L_m",
    "omega_s_per_m",
    "omega_p_per_m",
    "energy_J",
    "energy_dimensionless",
    "ratio_to_PFA_PC",
    "theta",
    "error_estimate",
    "l_max_used",
    "m_max_used",
    "status",
];

/// Exit status when every row succeeded.
pub const EXIT_OK: i32 = 0;
/// Exit status for I/O failures.
pub const EXIT_FATAL: i32 = 1;
/// Exit status for invalid flags or configuration.
pub const EXIT_USAGE: i32 = 2;
/// Exit status when output was written but some rows failed.
pub const EXIT_PARTIAL: i32 = 3;

/// Invalid configuration, with the place it came from.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{origin}: {message}")]
pub struct ConfigError {
    pub origin: Origin,
    pub message: String,
}

/// Where a configuration value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag(&'static str),
    Config,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "config line {n}"),
            Origin::Flag(name) => write!(f, "flag --{name}"),
            Origin::Config => f.write_str("config"),
        }
    }
}

fn config_error(origin: Origin, message: impl Into<String>) -> ConfigError {
    ConfigError {
        origin,
        message: message.into(),
    }
}

/// Which energy to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Exact,
    Pfa,
    Asympt,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Exact, Method::Pfa, Method::Asympt];

    fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Pfa => "pfa",
            Method::Asympt => "asympt",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parse `exact`, `pfa`, `asympt` or `all`.
pub fn parse_methods(s: &str) -> Result<Vec<Method>, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "exact" => Ok(vec![Method::Exact]),
        "pfa" => Ok(vec![Method::Pfa]),
        "asympt" | "asymptotic" => Ok(vec![Method::Asympt]),
        "all" => Ok(Method::ALL.to_vec()),
        other => Err(format!("unknown method {other:?} (expected exact, pfa, asympt or all)")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

impl FromStr for Spacing {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lin" | "linear" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            other => Err(format!("unknown spacing {other:?} (expected linear or log)")),
        }
    }
}

/// `count` values from `start` to `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Range {
    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            end: value,
            count: 1,
        }
    }

    pub fn values(&self, spacing: Spacing) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / last;
                match spacing {
                    Spacing::Linear => self.start + f * (self.end - self.start),
                    Spacing::Log => (self.start.ln() + f * (self.end / self.start).ln()).exp(),
                }
            })
            .collect()
    }
}

/// The swept separation: the gap `d` or the centre distance `L = R + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separation {
    Gap(Range),
    Distance(Range),
}

/// One geometry and material combination, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub radius: f64,
    pub gap: f64,
    pub omega_sphere: Plasma,
    pub omega_plane: Plasma,
}

/// A validated sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub methods: Vec<Method>,
    pub radius: Range,
    pub separation: Separation,
    pub spacing: Spacing,
    pub omega_sphere: Plasma,
    pub omega_plane: Plasma,
    pub numerics: NumericsSpec,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl SweepConfig {
    /// Grid points, radius outermost, in the order rows are written.
    pub fn points(&self) -> Vec<Point> {
        let mut points = Vec::new();
        for r in self.radius.values(self.spacing) {
            let gaps: Vec<f64> = match self.separation {
                Separation::Gap(range) => range.values(self.spacing),
                Separation::Distance(range) => range.values(self.spacing).into_iter().map(|l| l - r).collect(),
            };
            for d in gaps {
                points.push(Point {
                    radius: r,
                    gap: d,
                    omega_sphere: self.omega_sphere,
                    omega_plane: self.omega_plane,
                });
            }
        }
        points
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub numerics: NumericsSpec,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Configuration keys accepted in files (and, with dashes, as flags).
pub const KEYS: [&str; 21] = [
    "method",
    "radius",
    "radius_end",
    "radius_count",
    "gap",
    "gap_end",
    "gap_count",
    "distance",
    "distance_end",
    "distance_count",
    "spacing",
    "omega_sphere",
    "omega_plane",
    "l_max",
    "m_max",
    "kappa_nodes",
    "theta_nodes",
    "rel_tol",
    "abs_tol",
    "out",
    "threads",
];

fn canonical_key(key: &str) -> Option<&'static str> {
    let k = key.trim().to_ascii_lowercase().replace('-', "_");
    let k = match k.as_str() {
        "lmax" => "l_max",
        "mmax" => "m_max",
        other => other,
    };
    KEYS.iter().copied().find(|&known| known == k)
}

/// Accumulates key/value settings; later settings override earlier ones.
#[derive(Debug, Clone, Default)]
pub struct ConfigBuilder {
    values: BTreeMap<&'static str, (String, Origin)>,
}

impl ConfigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse `key = value` lines; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut builder = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = Origin::Line(i + 1);
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_error(origin, format!("expected key=value, got {line:?}")));
            };
            builder.set(key, value.trim(), origin)?;
        }
        Ok(builder)
    }

    /// Set one key, checking the name and the value's syntax immediately.
    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        let Some(key) = canonical_key(key) else {
            return Err(config_error(
                origin,
                format!("unknown key {:?} (known keys: {})", key.trim(), KEYS.join(", ")),
            ));
        };
        check_value(key, value).map_err(|m| config_error(origin.clone(), format!("{key}: {m}")))?;
        self.values.insert(key, (value.to_string(), origin));
        Ok(())
    }

    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some((v, origin)) => parse(v)
                .map(Some)
                .map_err(|m| config_error(origin.clone(), format!("{key}: {m}"))),
        }
    }

    fn range(&self, name: &str) -> Result<Option<Range>, ConfigError> {
        let start = self.get(name, parse_length)?;
        let end = self.get(&format!("{name}_end"), parse_length)?;
        let count = self.get(&format!("{name}_count"), parse_count)?;
        let Some(start) = start else {
            if end.is_some() || count.is_some() {
                return Err(config_error(Origin::Config, format!("{name}_end/{name}_count set without {name}")));
            }
            return Ok(None);
        };
        match (end, count) {
            (None, None) | (None, Some(1)) => Ok(Some(Range::single(start))),
            (Some(end), Some(count)) if count >= 2 => Ok(Some(Range { start, end, count })),
            (Some(_), _) => Err(config_error(Origin::Config, format!("{name}_end needs {name}_count >= 2"))),
            (None, Some(_)) => Err(config_error(Origin::Config, format!("{name}_count > 1 needs {name}_end"))),
        }
    }

    /// Methods, if set.
    pub fn methods(&self) -> Result<Option<Vec<Method>>, ConfigError> {
        self.get("method", parse_methods)
    }

    /// Keys describing geometry or materials that are present.
    pub fn geometry_keys(&self) -> Vec<&'static str> {
        self.values
            .keys()
            .copied()
            .filter(|k| k.starts_with("radius") || k.starts_with("gap") || k.starts_with("distance") || k.starts_with("omega") || *k == "spacing")
            .collect()
    }

    /// Numerics, output path and thread count.
    pub fn run_settings(&self) -> Result<RunSettings, ConfigError> {
        let mut numerics = NumericsSpec::default();
        if let Some(v) = self.get("l_max", parse_truncation)? {
            numerics.l_max = v;
        }
        if let Some(v) = self.get("m_max", parse_truncation)? {
            numerics.m_max = v;
        }
        if let Some(v) = self.get("kappa_nodes", parse_count)? {
            numerics.kappa_nodes = v;
        }
        if let Some(v) = self.get("theta_nodes", parse_count)? {
            numerics.theta_nodes = v;
        }
        if let Some(v) = self.get("rel_tol", parse_positive)? {
            numerics.rel_tol = v;
        }
        if let Some(v) = self.get("abs_tol", parse_positive)? {
            numerics.abs_tol = v;
        }
        numerics
            .validate()
            .map_err(|e| config_error(Origin::Config, e.to_string()))?;
        Ok(RunSettings {
            numerics,
            out: self.get("out", |s| Ok(PathBuf::from(s)))?,
            threads: self.get("threads", parse_count)?,
        })
    }

    /// Validate and produce the sweep; numerics not given keep their defaults.
    pub fn build(&self) -> Result<SweepConfig, ConfigError> {
        let methods = self.get("method", parse_methods)?.unwrap_or_else(|| Method::ALL.to_vec());
        let spacing = self.get("spacing", |s| s.parse::<Spacing>())?.unwrap_or_default();
        let radius = self
            .range("radius")?
            .ok_or_else(|| config_error(Origin::Config, "missing radius"))?;
        let separation = match (self.range("gap")?, self.range("distance")?) {
            (Some(g), None) => Separation::Gap(g),
            (None, Some(l)) => Separation::Distance(l),
            (Some(_), Some(_)) => return Err(config_error(Origin::Config, "set either gap or distance, not both")),
            (None, None) => return Err(config_error(Origin::Config, "missing gap (or distance)")),
        };
        let omega_sphere = self
            .get("omega_sphere", parse_plasma)?
            .ok_or_else(|| config_error(Origin::Config, "missing omega_sphere"))?;
        let omega_plane = self
            .get("omega_plane", parse_plasma)?
            .ok_or_else(|| config_error(Origin::Config, "missing omega_plane"))?;

        let run = self.run_settings()?;
        let config = SweepConfig {
            methods,
            radius,
            separation,
            spacing,
            omega_sphere,
            omega_plane,
            numerics: run.numerics,
            out: run.out,
            threads: run.threads,
        };
        for p in config.points() {
            if !(p.gap > 0.0) || !p.gap.is_finite() {
                return Err(config_error(
                    Origin::Config,
                    format!("gap must be > 0 throughout (R = {:e}, d = {:e})", p.radius, p.gap),
                ));
            }
        }
        Ok(config)
    }
}

fn check_value(key: &str, value: &str) -> Result<(), String> {
    match key {
        "method" => parse_methods(value).map(drop),
        "spacing" => value.parse::<Spacing>().map(drop),
        "radius" | "radius_end" | "gap" | "gap_end" | "distance" | "distance_end" => parse_length(value).map(drop),
        "radius_count" | "gap_count" | "distance_count" | "kappa_nodes" | "theta_nodes" | "threads" => {
            parse_count(value).map(drop)
        }
        "omega_sphere" | "omega_plane" => parse_plasma(value).map(drop),
        "l_max" | "m_max" => parse_truncation(value).map(drop),
        "rel_tol" | "abs_tol" => parse_positive(value).map(drop),
        "out" if value.is_empty() => Err("empty path".into()),
        _ => Ok(()),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_length(s: &str) -> Result<f64, String> {
    parse_positive(s).map_err(|_| format!("expected a positive length in metres, got {s:?}"))
}

fn parse_count(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn parse_plasma(s: &str) -> Result<Plasma, String> {
    s.parse::<Plasma>().map_err(|e| e.to_string())
}

fn parse_truncation(s: &str) -> Result<Truncation, String> {
    s.parse::<Truncation>().map_err(|e| e.to_string())
}

/// Parameter grid of figure `n` (1 to 6) and the methods evaluated on it.
///
/// Figures 1 to 3 are a graphene sphere (R = 1 mm) over a graphene plane with
/// `d` log-spaced from 0.1 um to 1 mm. Figures 4 to 6 use the same geometry
/// for equal and unequal plasma parameters between 1e5 and 1e7 1/m.
pub fn figure_grid(n: u8) -> Result<(Vec<Method>, Vec<Point>), String> {
    const RADIUS: f64 = 1e-3;
    let gaps = Range {
        start: 1e-7,
        end: 1e-3,
        count: 41,
    }
    .values(Spacing::Log);
    let materials: Vec<(f64, f64)> = match n {
        1..=3 => vec![(OMEGA_GRAPHENE, OMEGA_GRAPHENE)],
        4..=6 => vec![(1e5, 1e5), (1e6, 1e6), (1e7, 1e7), (1e5, 1e7), (1e7, 1e5)],
        _ => return Err(format!("figure must be 1 to 6, got {n}")),
    };
    let mut points = Vec::new();
    for (ws, wp) in materials {
        for &d in &gaps {
            points.push(Point {
                radius: RADIUS,
                gap: d,
                omega_sphere: Plasma::Finite(ws),
                omega_plane: Plasma::Finite(wp),
            });
        }
    }
    Ok((vec![Method::Pfa, Method::Asympt], points))
}

/// One evaluated CSV row. Energies are in joules.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub method: Method,
    pub point: Point,
    pub outcome: Result<Evaluation, String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub energy_j: f64,
    pub dimensionless: f64,
    /// `theta` for the asymptotic rows; `(E / E_PFA - 1) R / d` for exact rows.
    pub theta: Option<f64>,
    pub error_estimate_j: f64,
    pub l_max_used: Option<u32>,
    pub m_max_used: Option<u32>,
}

/// `E d^2 / (hbar c R)` of the perfect-conductor PFA energy.
pub fn pfa_pc_dimensionless() -> f64 {
    -PI.powi(3) / 720.0
}

fn evaluation(point: &Point, energy: f64, error: f64) -> Evaluation {
    // energy in units of hbar c / metre
    Evaluation {
        energy_j: energy * HBAR_C,
        dimensionless: energy * point.gap * point.gap / point.radius,
        theta: None,
        error_estimate_j: error * HBAR_C,
        l_max_used: None,
        m_max_used: None,
    }
}

fn pfa_row(p: &Point) -> crate::Result<Evaluation> {
    let (vs, vp) = (p.omega_sphere.times(p.gap), p.omega_plane.times(p.gap));
    let (integral, err) = pfa_integral(vs, vp)?;
    let scale = p.radius / (4.0 * PI * p.gap * p.gap);
    Ok(evaluation(p, -scale * integral, scale * err))
}

fn asympt_row(p: &Point) -> crate::Result<Evaluation> {
    let (vs, vp) = (p.omega_sphere.times(p.gap), p.omega_plane.times(p.gap));
    let spec = AsymptoticsSpec::default();
    let i0 = leading_integral(vs, vp, &spec)?;
    let series = ntl_series(vs, vp, &spec)?;
    let e0 = -p.radius / (4.0 * PI * p.gap * p.gap) * i0;
    let e1 = -series.value / (4.0 * PI * p.gap);
    let mut eval = evaluation(p, e0 + e1, series.error_estimate / (4.0 * PI * p.gap));
    eval.theta = (i0 != 0.0).then(|| series.value / i0);
    Ok(eval)
}

fn exact_row(p: &Point, numerics: &NumericsSpec) -> crate::Result<Evaluation> {
    let sphere = SphereSheet::new(p.radius, p.omega_sphere)?;
    let plane = PlaneSheet::new(p.omega_plane, p.radius + p.gap)?;
    let result = casimir_energy(&sphere, &plane, numerics)?;
    let mut eval = evaluation(p, result.energy, result.error_estimate);
    let pfa = pfa_row(p)?;
    if pfa.dimensionless != 0.0 {
        eval.theta = Some((eval.dimensionless / pfa.dimensionless - 1.0) * p.radius / p.gap);
    }
    eval.l_max_used = Some(result.l_max_used);
    eval.m_max_used = Some(result.m_max_used);
    Ok(eval)
}

/// Evaluate one method at one point.
pub fn evaluate(method: Method, point: &Point, numerics: &NumericsSpec) -> Row {
    let outcome = match method {
        Method::Exact => exact_row(point, numerics),
        Method::Pfa => pfa_row(point),
        Method::Asympt => asympt_row(point),
    };
    Row {
        method,
        point: *point,
        outcome: outcome.map_err(|e| e.to_string()),
    }
}

/// Every method at every point, point-major; rows come back in that order
/// whatever the completion order.
pub fn run_points(points: &[Point], methods: &[Method], numerics: &NumericsSpec) -> Vec<Row> {
    let jobs: Vec<(Method, Point)> = points
        .iter()
        .flat_map(|p| methods.iter().map(move |&m| (m, *p)))
        .collect();
    jobs.par_iter().map(|(m, p)| evaluate(*m, p, numerics)).collect()
}

fn float(v: f64) -> String {
    // + 0.0 folds -0 into 0
    format!("{:e}", v + 0.0)
}

fn row_record(row: &Row) -> Vec<String> {
    let p = &row.point;
    let mut record = vec![
        row.method.to_string(),
        float(p.radius),
        float(p.gap),
        float(p.radius + p.gap),
        plasma_field(p.omega_sphere),
        plasma_field(p.omega_plane),
    ];
    match &row.outcome {
        Ok(e) => {
            let opt = |v: Option<f64>| v.map(float).unwrap_or_default();
            let int = |v: Option<u32>| v.map(|n| n.to_string()).unwrap_or_default();
            record.extend([
                float(e.energy_j),
                float(e.dimensionless),
                float(e.dimensionless / pfa_pc_dimensionless()),
                opt(e.theta),
                float(e.error_estimate_j),
                int(e.l_max_used),
                int(e.m_max_used),
                "ok".to_string(),
            ]);
        }
        Err(message) => {
            record.extend(std::iter::repeat_n(String::new(), 7));
            record.push(format!("error: {message}"));
        }
    }
    record
}

fn plasma_field(p: Plasma) -> String {
    match p {
        Plasma::PerfectConductor => "inf".to_string(),
        Plasma::Finite(w) => float(w),
    }
}

/// Write the header and one record per row.
pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
    writer.write_record(COLUMNS)?;
    for row in rows {
        writer.write_record(row_record(row))?;
    }
    writer.flush()?;
    Ok(())
}
