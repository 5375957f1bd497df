//! Exact sphere-plane Casimir energy at zero temperature,
//! `E = (hbar c / 2 pi) int_0^inf dkappa sum_m ln det(I - M_m(i kappa))`.
//!
//! Energies are returned divided by `hbar c`, so they carry units of inverse
//! length in whatever length unit the geometry was given in.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::GaussLaguerre;
use crate::roundtrip::{RoundTripAssembler, RoundTripBlock};
use crate::scattering::{PlaneSheet, SphereSheet};

/// Hard ceiling on the multipole truncation.
pub const L_MAX_CAP: u32 = 2000;
/// Hard ceiling on the number of imaginary-frequency nodes.
pub const KAPPA_NODES_CAP: usize = 1280;

/// A truncation order that is either fixed or chosen by convergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    #[default]
    Auto,
    Fixed(u32),
}

impl std::fmt::Display for Truncation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Truncation::Auto => write!(f, "auto"),
            Truncation::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl std::str::FromStr for Truncation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("auto") {
            return Ok(Truncation::Auto);
        }
        t.parse::<u32>()
            .map(Truncation::Fixed)
            .map_err(|_| Error::domain(format!("expected an integer or \"auto\", got {s:?}")))
    }
}

/// Truncation orders, node counts and tolerances for the numerics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsSpec {
    pub l_max: Truncation,
    pub m_max: Truncation,
    pub kappa_nodes: usize,
    pub theta_nodes: usize,
    pub rel_tol: f64,
    /// Absolute tolerance on the dimensionless energy `E d^2 / (hbar c R)`.
    pub abs_tol: f64,
}

impl Default for NumericsSpec {
    fn default() -> Self {
        Self {
            l_max: Truncation::Auto,
            m_max: Truncation::Auto,
            kappa_nodes: 40,
            theta_nodes: 40,
            rel_tol: 1e-4,
            abs_tol: 1e-12,
        }
    }
}

impl NumericsSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::domain("tolerances must be > 0"));
        }
        if self.kappa_nodes < 8 || self.theta_nodes < 8 {
            return Err(Error::domain("node counts must be >= 8"));
        }
        if let Truncation::Fixed(l) = self.l_max {
            if !(1..=L_MAX_CAP).contains(&l) {
                return Err(Error::domain(format!("l_max must lie in 1..={L_MAX_CAP}, got {l}")));
            }
        }
        Ok(())
    }

    /// Starting multipole order: the fixed value, or `ceil(6 R / d) + 10`.
    pub fn l_max_seed(&self, sphere: &SphereSheet, plane: &PlaneSheet) -> Result<u32> {
        match self.l_max {
            Truncation::Fixed(l) => Ok(l),
            Truncation::Auto => {
                let d = plane.distance - sphere.radius;
                if !(d > 0.0) {
                    return Err(Error::domain("plane distance must exceed the sphere radius"));
                }
                let seed = (6.0 * sphere.radius / d).ceil() + 10.0;
                if seed > L_MAX_CAP as f64 {
                    return Err(Error::numerics(
                        format!("required l_max ~ {seed} exceeds the cap {L_MAX_CAP}; gap too small"),
                        f64::NAN,
                    ));
                }
                Ok(seed as u32)
            }
        }
    }
}

/// Energy with error estimate and the truncation actually used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResult {
    /// `E / (hbar c)`, inverse length.
    pub energy: f64,
    /// `E d^2 / (hbar c R)`.
    pub dimensionless: f64,
    /// Same units as `energy`.
    pub error_estimate: f64,
    pub l_max_used: u32,
    pub m_max_used: u32,
    pub kappa_nodes_used: usize,
    pub theta_nodes_used: usize,
}

/// `ln det(I - M)` for one block, with the block's scale factors reapplied.
pub fn logdet_one_minus(block: &RoundTripBlock) -> Result<f64> {
    if block.m == 0 {
        // TE and TM decouple; factor each half separately
        let n = block.dim() / 2;
        let mut total = 0.0;
        for p in 0..2 {
            let idx: Vec<usize> = (0..n).map(|i| 2 * i + p).collect();
            let sub = block.matrix.select_rows(&idx).select_columns(&idx);
            total += logdet_scaled(&sub, block.log_scale, block)?;
        }
        check_sign(total, block)
    } else {
        let v = logdet_scaled(&block.matrix, block.log_scale, block)?;
        check_sign(v, block)
    }
}

fn check_sign(v: f64, block: &RoundTripBlock) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::numerics(
            format!("non-finite log-determinant at m = {}, kappa = {}", block.m, block.kappa),
            f64::NAN,
        ));
    }
    if v > 1e-12 {
        return Err(Error::SpectralAnomaly {
            value: v,
            m: block.m,
            kappa: block.kappa,
        });
    }
    Ok(v)
}

fn logdet_scaled(b: &DMatrix<f64>, log_scale: f64, block: &RoundTripBlock) -> Result<f64> {
    let n = b.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let max = b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if max == 0.0 || log_scale + max.ln() + (n as f64).ln() < -745.0 {
        return Ok(0.0);
    }
    let a = b * log_scale.exp();
    let norm = a.norm();
    if norm < 1e-2 {
        // ln det(I - A) = -sum_k tr(A^k)/k, converged to full precision in a few terms
        let mut power = a.clone();
        let mut sum = -power.trace();
        for k in 2..=12 {
            power = &power * &a;
            let term = power.trace() / k as f64;
            sum -= term;
            if term.abs() <= 1e-17 * sum.abs() || norm.powi(k) / (k as f64) < 1e-18 * sum.abs() {
                break;
            }
        }
        return Ok(sum);
    }
    let mut m = -a;
    for i in 0..n {
        m[(i, i)] += 1.0;
    }
    let lu = m.lu();
    let u = lu.u();
    let mut sum = 0.0;
    let mut negative = false;
    for i in 0..n {
        let d = u[(i, i)];
        if d == 0.0 || !d.is_finite() {
            return Err(Error::SpectralAnomaly {
                value: f64::INFINITY,
                m: block.m,
                kappa: block.kappa,
            });
        }
        if d < 0.0 {
            negative = !negative;
        }
        sum += d.abs().ln();
    }
    // P (I - A) = L U, so the determinant's sign is the parity of P times sign(prod u_ii)
    if negative != (lu.p().determinant::<f64>() < 0.0) {
        return Err(Error::SpectralAnomaly {
            value: f64::NAN,
            m: block.m,
            kappa: block.kappa,
        });
    }
    Ok(sum)
}

/// Imaginary-wavenumber nodes `kappa_i` and weights for `int_0^inf dkappa`.
///
/// The substitution `kappa = x / (2 d)` puts the `e^{-2 kappa d}` decay of the
/// integrand into the Gauss–Laguerre weight.
#[derive(Debug, Clone)]
pub struct KappaRule {
    pub kappa: Vec<f64>,
    pub weights: Vec<f64>,
}

impl KappaRule {
    pub fn new(n: usize, gap: f64) -> Result<Self> {
        let rule = GaussLaguerre::new(n, 0.0)?;
        let mut kappa = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (&x, &lw) in rule.nodes.iter().zip(&rule.ln_weights) {
            kappa.push(x / (2.0 * gap));
            weights.push((lw + x).exp() / (2.0 * gap));
        }
        Ok(Self { kappa, weights })
    }
}

#[derive(Debug, Clone, Copy)]
struct KappaSample {
    value: f64,
    m_used: u32,
    m_tail: f64,
}

/// `sum_m ln det(I - M_m)` at one `kappa`, with `m` and `-m` folded together.
fn m_sum(assembler: &RoundTripAssembler, kappa: f64, m_max: Truncation, rel_tol: f64) -> Result<KappaSample> {
    let l_max = assembler.l_max();
    let (cap, adaptive) = match m_max {
        Truncation::Auto => (l_max, true),
        Truncation::Fixed(m) => (m.min(l_max), false),
    };
    let mut total = logdet_one_minus(&assembler.block(0, kappa)?)?;
    let mut prev = total.abs();
    let mut m_used = 0;
    let mut tail = 0.0;
    for m in 1..=cap {
        let c = 2.0 * logdet_one_minus(&assembler.block(m as i32, kappa)?)?;
        total += c;
        m_used = m;
        let ratio = if prev > 0.0 { c.abs() / prev } else { 0.0 };
        tail = if ratio < 0.9 { c.abs() * ratio / (1.0 - ratio) } else { 10.0 * c.abs() };
        prev = c.abs();
        if adaptive && c.abs() <= 0.25 * rel_tol * total.abs() {
            break;
        }
        if c == 0.0 {
            tail = 0.0;
            break;
        }
    }
    Ok(KappaSample {
        value: total,
        m_used,
        m_tail: tail,
    })
}

struct Evaluation {
    energy: f64,
    m_used: u32,
    m_err: f64,
    theta_nodes: usize,
}

fn evaluate(
    sphere: &SphereSheet,
    plane: &PlaneSheet,
    numerics: &NumericsSpec,
    l_max: u32,
    kappa_nodes: usize,
) -> Result<Evaluation> {
    let gap = plane.distance - sphere.radius;
    let assembler = RoundTripAssembler::new(*sphere, *plane, l_max, numerics.theta_nodes)?;
    let rule = KappaRule::new(kappa_nodes, gap)?;
    let samples: Vec<Result<Option<KappaSample>>> = rule
        .kappa
        .par_iter()
        .map(|&kappa| {
            // beyond this the whole block underflows
            if 2.0 * kappa * gap > 800.0 {
                return Ok(None);
            }
            m_sum(&assembler, kappa, numerics.m_max, numerics.rel_tol).map(Some)
        })
        .collect();
    let mut energy = 0.0;
    let mut m_err = 0.0;
    let mut m_used = 0;
    for (s, w) in samples.into_iter().zip(&rule.weights) {
        if let Some(s) = s? {
            energy += w * s.value;
            m_err += w * s.m_tail;
            m_used = m_used.max(s.m_used);
        }
    }
    Ok(Evaluation {
        energy: energy / (2.0 * PI),
        m_used,
        m_err: m_err / (2.0 * PI),
        theta_nodes: assembler.theta_nodes(),
    })
}

/// Exact interaction energy with automatic truncation control.
///
/// The `kappa` rule is doubled at the starting `l_max` until two successive
/// rules agree; with that rule `l_max` is then increased (when automatic)
/// until one increment changes the energy by less than `rel_tol / 4`.
pub fn casimir_energy(sphere: &SphereSheet, plane: &PlaneSheet, numerics: &NumericsSpec) -> Result<EnergyResult> {
    numerics.validate()?;
    let gap = plane.distance - sphere.radius;
    if !(gap > 0.0) {
        return Err(Error::domain(format!(
            "plane distance L = {} must exceed sphere radius R = {}",
            plane.distance, sphere.radius
        )));
    }
    let to_dimensionless = gap * gap / sphere.radius;
    let abs_tol = numerics.abs_tol / to_dimensionless;
    let l_seed = numerics.l_max_seed(sphere, plane)?;
    if sphere.omega.is_transparent() || plane.omega.is_transparent() {
        return Ok(EnergyResult {
            energy: 0.0,
            dimensionless: 0.0,
            error_estimate: 0.0,
            l_max_used: l_seed,
            m_max_used: 0,
            kappa_nodes_used: numerics.kappa_nodes,
            theta_nodes_used: numerics.theta_nodes,
        });
    }

    let mut n_kappa = numerics.kappa_nodes;
    let mut current = evaluate(sphere, plane, numerics, l_seed, n_kappa)?;
    let kappa_err;
    loop {
        if 2 * n_kappa > KAPPA_NODES_CAP {
            return Err(Error::numerics(
                format!("kappa quadrature not converged with {n_kappa} nodes"),
                f64::NAN,
            ));
        }
        let finer = evaluate(sphere, plane, numerics, l_seed, 2 * n_kappa)?;
        let diff = (finer.energy - current.energy).abs();
        n_kappa *= 2;
        current = finer;
        if diff <= 0.25 * numerics.rel_tol * current.energy.abs() + abs_tol {
            kappa_err = diff;
            break;
        }
    }

    let mut l_max = l_seed;
    let mut l_err = 0.0;
    if numerics.l_max == Truncation::Auto {
        loop {
            let step = (l_max / 4).max(5);
            let next_l = l_max + step;
            if next_l > L_MAX_CAP {
                return Err(Error::numerics(
                    format!("multipole sum not converged below l_max = {L_MAX_CAP}"),
                    l_err,
                ));
            }
            let next = evaluate(sphere, plane, numerics, next_l, n_kappa)?;
            let diff = (next.energy - current.energy).abs();
            l_max = next_l;
            current = next;
            l_err = diff;
            if diff <= 0.25 * numerics.rel_tol * current.energy.abs() + abs_tol {
                break;
            }
        }
    }

    let error_estimate = kappa_err + l_err + current.m_err;
    Ok(EnergyResult {
        energy: current.energy,
        dimensionless: current.energy * to_dimensionless,
        error_estimate,
        l_max_used: l_max,
        m_max_used: current.m_used,
        kappa_nodes_used: n_kappa,
        theta_nodes_used: current.theta_nodes,
    })
}
