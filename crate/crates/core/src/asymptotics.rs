//! Small-separation expansion `E = E0 (1 + (d/R) theta + ...)`.
//!
//! Everything here depends on the plasma parameters only through
//! `varpi = Omega d`; the dimensionless integrals are exposed alongside the
//! dimensional energies (divided by `hbar c`).
//!
//! Quadrature: the `tau` integrals use `tau = sin(phi)` (or
//! `tau = sqrt(1 - w^2)` for the leading term) so that the endpoint weight
//! `1/sqrt(1 - tau^2)` disappears; the `t` integrals are split into
//! geometrically graded Gauss–Legendre panels near `t = 0`, where the plasma
//! factors `varpi / (varpi + t)` vary fastest, followed by a Gauss–Laguerre tail.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{GaussLaguerre, GaussLegendre};
use crate::scattering::Plasma;
use crate::specfun::dilog;

/// `theta` for perfect conductors, `1/3 - 20/pi^2`.
pub const THETA_PERFECT: f64 = 1.0 / 3.0 - 20.0 / (PI * PI);

/// Node counts and tolerances for the asymptotic integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticsSpec {
    /// Gauss–Legendre nodes in the angular variable.
    pub tau_nodes: usize,
    /// Gauss–Legendre nodes per radial panel.
    pub panel_nodes: usize,
    /// Gauss–Laguerre nodes for the radial tail.
    pub tail_nodes: usize,
    /// Minimum number of `s` terms before the tail model is trusted.
    pub s_max: usize,
    pub rel_tol: f64,
}

impl Default for AsymptoticsSpec {
    fn default() -> Self {
        Self {
            tau_nodes: 48,
            panel_nodes: 16,
            tail_nodes: 48,
            s_max: 200,
            rel_tol: 1e-8,
        }
    }
}

impl AsymptoticsSpec {
    fn validate(&self) -> Result<()> {
        if self.tau_nodes < 8 || self.panel_nodes < 4 || self.tail_nodes < 8 || self.s_max < 16 {
            return Err(Error::domain("asymptotic node counts too small"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain("rel_tol must be > 0"));
        }
        Ok(())
    }

    /// Every node count doubled.
    pub fn refined(&self) -> Self {
        Self {
            tau_nodes: 2 * self.tau_nodes,
            panel_nodes: 2 * self.panel_nodes,
            tail_nodes: 2 * self.tail_nodes,
            ..*self
        }
    }
}

/// `varpi / (varpi + x)` with the perfect-conductor limit 1.
fn ratio(v: Plasma, x: f64) -> f64 {
    match v {
        Plasma::PerfectConductor => 1.0,
        Plasma::Finite(0.0) => 0.0,
        Plasma::Finite(w) => w / (w + x),
    }
}

/// `sum_{k=0}^{n-1} a^k b^{n-1-k} = (a^n - b^n) / (a - b)` for `a, b >= 0`.
///
/// Written as `b^{n-1} expm1(n delta) / expm1(delta)` with `delta = ln(a/b)`,
/// which has no cancellation as `a -> b`.
pub fn power_sum(a: f64, b: f64, n: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == 0.0 {
        return hi.powi(n as i32 - 1);
    }
    if hi - lo > 0.5 * hi {
        // well separated: the quotient form has no cancellation
        return (hi.powi(n as i32) - lo.powi(n as i32)) / (hi - lo);
    }
    let delta = ((hi - lo) / lo).ln_1p();
    if delta == 0.0 {
        return n as f64 * lo.powi(n as i32 - 1);
    }
    // logs keep lo^{n-1} from underflowing against an overflowing expm1(n delta)
    let nd = n as f64 * delta;
    let ln_num = if nd > 1.0 { nd + (-(-nd).exp()).ln_1p() } else { nd.exp_m1().ln() };
    ((n - 1) as f64 * lo.ln() + ln_num - delta.exp_m1().ln()).exp()
}

/// Term-by-term version of [`power_sum`].
pub fn power_sum_explicit(a: f64, b: f64, n: u32) -> f64 {
    (0..n).map(|k| a.powi(k as i32) * b.powi((n - 1 - k) as i32)).sum()
}

/// Building blocks of the next-to-leading-order integrand at one point.
/// Per-polarization arrays are indexed TE = 0, TM = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NtlCoefficients {
    pub t0: [f64; 2],
    pub t0_tilde: [f64; 2],
    pub script_a: f64,
    pub script_b: f64,
    pub script_c: [f64; 2],
    pub script_d: [f64; 2],
    pub c_v: f64,
    pub c_j: f64,
    pub d_vv: f64,
    pub d_jj: f64,
    pub d_vj: f64,
    pub d_v: f64,
    pub d_j: f64,
    pub k1: [f64; 2],
    pub k2: [f64; 2],
    pub w1: [f64; 2],
    pub w2: [f64; 2],
    pub y2: [f64; 2],
}

impl NtlCoefficients {
    pub fn new(s: u32, t: f64, tau: f64, varpi_s: Plasma, varpi_p: Plasma) -> Result<Self> {
        if !(t > 0.0) || !(tau > 0.0 && tau < 1.0) {
            return Err(Error::domain(format!("need t > 0 and 0 < tau < 1 (t = {t}, tau = {tau})")));
        }
        Ok(Self::unchecked(s, t, tau, varpi_s, varpi_p))
    }

    fn unchecked(s: u32, t: f64, tau: f64, varpi_s: Plasma, varpi_p: Plasma) -> Self {
        let sp = s as f64 + 1.0;
        let (sp2, sp3) = (sp * sp, sp * sp * sp);
        let tau2 = tau * tau;
        let c = 1.0 - tau2;

        let t0 = [ratio(varpi_s, t), ratio(varpi_s, t * c)];
        let t0_tilde = [ratio(varpi_p, t), ratio(varpi_p, t * c)];
        let a = t0[0] * t0_tilde[0];
        let b = t0[1] * t0_tilde[1];

        let script_a = t * tau2 / 3.0 * (sp3 + 2.0 * sp)
            + ((tau2 - 2.0) * sp2 - 3.0 * tau * sp + 2.0 * tau2 - 1.0) / 3.0
            + (tau2 * tau2 + tau2 - 12.0) / (12.0 * t * tau2) * sp
            + (1.0 + tau) * c / (2.0 * t * tau2)
            - c / (3.0 * t) / sp;
        let script_b = c / (2.0 * t * tau2)
            * ((t0[0] * t0_tilde[1] + t0[1] * t0_tilde[0]) * power_sum(a, b, s + 1)
                + 2.0 * a * b * power_sum(a, b, s));

        let c_v = -tau / 3.0 * (sp3 + 2.0 * sp) + c / (6.0 * t * tau) * sp2 + sp / (2.0 * t)
            + (1.0 - 4.0 * tau2) / (12.0 * t * tau);
        let c_j = -t * tau / 3.0 * (sp3 - sp) + (sp2 - 1.0) / (6.0 * tau);
        let d_vv = (sp3 - 2.0 * sp2 + 2.0 * sp - 1.0) / (12.0 * t);
        let d_jj = t / 12.0 * (sp3 - 2.0 * sp2 - sp + 2.0);
        let d_vj = (sp3 - sp) / 6.0;
        let d_v = (2.0 * sp2 + 1.0) / (6.0 * t);
        let d_j = t / 3.0 * (sp2 - 1.0);

        let (k1, k2) = match varpi_p {
            Plasma::PerfectConductor => ([0.0; 2], [0.0; 2]),
            Plasma::Finite(wp) => {
                let te = wp + t;
                let tm = wp + t * c;
                (
                    [-t * tau / te, t * c / tm],
                    [
                        -t * (wp + t * (1.0 - 2.0 * tau2)) / (2.0 * te * te),
                        t * c * (wp * (1.0 - 2.0 * tau2) + t * c) / (2.0 * tm * tm),
                    ],
                )
            }
        };
        let y2_pc = [(0.25 - 5.0 * tau2 / 12.0) / t, (0.25 + 7.0 * tau2 / 12.0) / t];
        let (w1, w2, y2) = match varpi_s {
            Plasma::PerfectConductor => ([0.0; 2], [0.0; 2], y2_pc),
            Plasma::Finite(ws) => {
                let te = ws + t;
                let tm = ws + t * c;
                (
                    [-tau / te, tau * c / tm],
                    [
                        -(t * (1.0 - 3.0 * tau2) + ws * c) / (2.0 * t * te * te),
                        c * (t * c * c + ws * (1.0 - 3.0 * tau2)) / (2.0 * t * tm * tm),
                    ],
                    [-tau / (2.0 * te) + y2_pc[0], tau * c / (2.0 * tm) + y2_pc[1]],
                )
            }
        };

        let mut script_c = [0.0; 2];
        let mut script_d = [0.0; 2];
        for p in 0..2 {
            script_c[p] = c_v * k1[p] + c_j * w1[p];
            script_d[p] = d_vv * k1[p] * k1[p]
                + d_vj * k1[p] * w1[p]
                + d_jj * w1[p] * w1[p]
                + d_v * k2[p]
                + d_j * w2[p]
                + sp * y2[p];
        }
        Self {
            t0,
            t0_tilde,
            script_a,
            script_b,
            script_c,
            script_d,
            c_v,
            c_j,
            d_vv,
            d_jj,
            d_vj,
            d_v,
            d_j,
            k1,
            k2,
            w1,
            w2,
            y2,
        }
    }

    /// The braced factor of the integrand, without `e^{-2t(s+1)}`.
    pub fn bracket(&self, s: u32) -> f64 {
        let e = s as i32 + 1;
        let mut sum = self.script_b;
        for p in 0..2 {
            let g = (self.t0[p] * self.t0_tilde[p]).powi(e);
            sum += g * (self.script_a + self.script_c[p] + self.script_d[p]);
        }
        sum
    }
}

/// Braced factor for two perfect conductors:
/// `2 A + B + (s+1)(Y2_TE + Y2_TM)` with `B = (1 - tau^2)(4s + 2) / (2 t tau^2)`.
fn perfect_bracket(s: u32, t: f64, tau: f64) -> f64 {
    let sp = s as f64 + 1.0;
    let tau2 = tau * tau;
    let c = 1.0 - tau2;
    let script_a = t * tau2 / 3.0 * (sp * sp * sp + 2.0 * sp)
        + ((tau2 - 2.0) * sp * sp - 3.0 * tau * sp + 2.0 * tau2 - 1.0) / 3.0
        + (tau2 * tau2 + tau2 - 12.0) / (12.0 * t * tau2) * sp
        + (1.0 + tau) * c / (2.0 * t * tau2)
        - c / (3.0 * t) / sp;
    let script_b = c * (4.0 * s as f64 + 2.0) / (2.0 * t * tau2);
    let y2 = (0.25 - 5.0 * tau2 / 12.0) / t + (0.25 + 7.0 * tau2 / 12.0) / t;
    2.0 * script_a + script_b + sp * y2
}

fn both_perfect(vs: Plasma, vp: Plasma) -> bool {
    vs.is_perfect() && vp.is_perfect()
}

/// Integrand of `E1` at `(s, t, tau)`:
/// `e^{-2t(s+1)} { sum_* [T0 T0~]^{s+1} (A + C* + D*) + B }`.
pub fn ntl_integrand(s: u32, t: f64, tau: f64, varpi_s: Plasma, varpi_p: Plasma) -> Result<f64> {
    let coeffs = NtlCoefficients::new(s, t, tau, varpi_s, varpi_p)?;
    let bracket = if both_perfect(varpi_s, varpi_p) {
        perfect_bracket(s, t, tau)
    } else {
        coeffs.bracket(s)
    };
    Ok((-2.0 * t * (s as f64 + 1.0)).exp() * bracket)
}

/// Nodes and weights for `int_0^inf e^{-u} h(u) du` (weights include `e^{-u}`).
///
/// Panels double in length from `h0` up to `u = 4`, where a shifted
/// Gauss–Laguerre tail takes over.
fn radial_rule(h0: f64, panel: &GaussLegendre, tail: &GaussLaguerre) -> Vec<(f64, f64)> {
    const SPLIT: f64 = 4.0;
    let mut out = Vec::new();
    let mut breaks = vec![0.0];
    let mut b = h0.min(SPLIT);
    while b < SPLIT {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(SPLIT);
    for w in breaks.windows(2) {
        for (u, wu) in panel.mapped(w[0], w[1]) {
            out.push((u, wu * (-u).exp()));
        }
    }
    for (&v, &lw) in tail.nodes.iter().zip(&tail.ln_weights) {
        let wt = (lw - SPLIT).exp();
        if wt > 0.0 {
            out.push((SPLIT + v, wt));
        }
    }
    out
}

/// Smallest finite plasma parameter, or `None` when both are perfect conductors.
fn smallest_varpi(vs: Plasma, vp: Plasma) -> Option<f64> {
    [vs, vp]
        .iter()
        .filter_map(|v| match v {
            Plasma::Finite(w) => Some(*w),
            Plasma::PerfectConductor => None,
        })
        .reduce(f64::min)
}

/// `int_0^inf dt t int_0^1 dtau tau/sqrt(1-tau^2) [Li2(T0 T0~ e^{-2t})_TE + (...)_TM]`,
/// so that `E0 = -hbar c R / (4 pi d^2)` times this.
pub fn leading_integral(varpi_s: Plasma, varpi_p: Plasma, spec: &AsymptoticsSpec) -> Result<f64> {
    spec.validate()?;
    if varpi_s.is_transparent() || varpi_p.is_transparent() {
        return Ok(0.0);
    }
    // t = u / 2; the nearest pole of T0 sits at u = -2 varpi. A log-type
    // singularity at u = 0 for perfect conductors needs fine panels there.
    let pole = smallest_varpi(varpi_s, varpi_p).map_or(f64::INFINITY, |w| 2.0 * w);
    let h0 = (pole / 4.0).min(1.0 / 1024.0);
    let panel = GaussLegendre::new(spec.panel_nodes);
    let tail = GaussLaguerre::new(spec.tail_nodes, 0.0)?;
    let radial = radial_rule(h0, &panel, &tail);
    // tau = sqrt(1 - w^2): dtau tau / sqrt(1 - tau^2) = dw, and 1 - tau^2 = w^2
    let angular: Vec<(f64, f64)> = GaussLegendre::new(spec.tau_nodes).mapped(0.0, 1.0).collect();
    let mut total = 0.0;
    for &(u, wu) in &radial {
        let t = 0.5 * u;
        let decay = (-u).exp();
        let mut inner = 0.0;
        for &(w, ww) in &angular {
            let te = ratio(varpi_s, t) * ratio(varpi_p, t);
            let tm = ratio(varpi_s, t * w * w) * ratio(varpi_p, t * w * w);
            inner += ww * (dilog(te * decay)? + dilog(tm * decay)?);
        }
        // h(u) = (u / 4) Li2(...) e^{u}
        total += wu * 0.25 * u * inner * u.exp();
    }
    Ok(total)
}

/// `int_0^inf dt t int_0^1 dtau tau/sqrt(1-tau^2) ntl_integrand(s, t, tau)`.
pub fn ntl_weighted_integral(s: u32, varpi_s: Plasma, varpi_p: Plasma, spec: &AsymptoticsSpec) -> Result<f64> {
    spec.validate()?;
    let panel = GaussLegendre::new(spec.panel_nodes);
    let tail = GaussLaguerre::new(spec.tail_nodes, 0.0)?;
    let angular = angular_rule(spec.tau_nodes);
    Ok(weighted_integral(s, varpi_s, varpi_p, &panel, &tail, &angular))
}

fn angular_rule(n: usize) -> Vec<(f64, f64)> {
    // tau = sin(phi): dtau tau / sqrt(1 - tau^2) = sin(phi) dphi
    GaussLegendre::new(n)
        .mapped(0.0, FRAC_PI_2)
        .map(|(phi, w)| (phi.sin(), w * phi.sin()))
        .collect()
}

fn weighted_integral(
    s: u32,
    varpi_s: Plasma,
    varpi_p: Plasma,
    panel: &GaussLegendre,
    tail: &GaussLaguerre,
    angular: &[(f64, f64)],
) -> f64 {
    if varpi_s.is_transparent() || varpi_p.is_transparent() {
        return 0.0;
    }
    let sp = s as f64 + 1.0;
    // u = 2 t (s+1); poles of the plasma factors at u = -2 (s+1) varpi
    let pole = smallest_varpi(varpi_s, varpi_p).map_or(f64::INFINITY, |w| 2.0 * sp * w);
    let radial = radial_rule((pole / 4.0).min(1.0), panel, tail);
    let pc = both_perfect(varpi_s, varpi_p);
    let mut total = 0.0;
    for &(u, wu) in &radial {
        let t = u / (2.0 * sp);
        let mut inner = 0.0;
        for &(tau, wt) in angular {
            let bracket = if pc {
                perfect_bracket(s, t, tau)
            } else {
                NtlCoefficients::unchecked(s, t, tau, varpi_s, varpi_p).bracket(s)
            };
            inner += wt * bracket;
        }
        total += wu * t * inner;
    }
    total / (2.0 * sp)
}

/// Hurwitz zeta `sum_{n>=0} (n + a)^{-p}` for integer `p >= 2`, `a >= 1`,
/// by Euler–Maclaurin after twenty explicit terms.
fn hurwitz_zeta(p: i32, a: f64) -> f64 {
    const DIRECT: usize = 20;
    let mut sum: f64 = (0..DIRECT).map(|n| (n as f64 + a).powi(-p)).sum();
    let x = a + DIRECT as f64;
    let pf = p as f64;
    sum += x.powf(1.0 - pf) / (pf - 1.0) + 0.5 * x.powi(-p);
    // B_2k / (2k)! times the rising factorial p (p+1) ... (p+2k-2)
    let bernoulli = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
    let mut fact = 1.0;
    let mut rising = 1.0;
    for (k, b) in bernoulli.iter().enumerate() {
        let k2 = 2 * (k + 1);
        fact *= ((k2 - 1) * k2) as f64;
        rising *= if k == 0 { pf } else { (pf + k2 as f64 - 3.0) * (pf + k2 as f64 - 2.0) };
        sum += b / fact * rising * x.powf(-pf - k2 as f64 + 1.0);
    }
    sum
}

/// `sum_s J_s / (s+1)^2` together with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub error_estimate: f64,
    pub terms: usize,
}

/// Fit `J_s ~ c0 + c1/(s+1) + c2/(s+1)^2` to the last terms by least squares
/// and return the summed remainder `sum_{s > last} J_s / (s+1)^2`.
fn tail_estimate(terms: &[f64]) -> f64 {
    const FIT: usize = 12;
    let n = terms.len();
    let start = n.saturating_sub(FIT);
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for (s, &j) in terms.iter().enumerate().skip(start) {
        let x = 1.0 / (s as f64 + 1.0);
        let basis = [1.0, x, x * x];
        for r in 0..3 {
            atb[r] += basis[r] * j;
            for c in 0..3 {
                ata[r][c] += basis[r] * basis[c];
            }
        }
    }
    let coef = solve3(ata, atb);
    let a = n as f64 + 1.0;
    coef[0] * hurwitz_zeta(2, a) + coef[1] * hurwitz_zeta(3, a) + coef[2] * hurwitz_zeta(4, a)
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()).unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut v = b[row];
        for k in row + 1..3 {
            v -= m[row][k] * x[k];
        }
        x[row] = v / m[row][row];
    }
    x
}

/// `sum_{s>=0} (s+1)^{-2} J_s` with `J_s` from [`ntl_weighted_integral`], so
/// that `E1 = -hbar c / (4 pi d)` times this.
///
/// Terms are computed in blocks; after each block the partial sum plus the
/// fitted remainder is compared with the previous block's. The number of
/// terms grows past `spec.s_max` while the small-`varpi` crossover
/// `s ~ 1/varpi` has not been reached.
pub fn ntl_series(varpi_s: Plasma, varpi_p: Plasma, spec: &AsymptoticsSpec) -> Result<SeriesResult> {
    spec.validate()?;
    if varpi_s.is_transparent() || varpi_p.is_transparent() {
        return Ok(SeriesResult {
            value: 0.0,
            error_estimate: 0.0,
            terms: 0,
        });
    }
    const BLOCK: usize = 16;
    const HARD_CAP: usize = 20_000;
    let crossover = smallest_varpi(varpi_s, varpi_p).map_or(0.0, |w| 40.0 / w);
    let minimum = (spec.s_max as f64).max(crossover.min(HARD_CAP as f64)) as usize;
    let panel = GaussLegendre::new(spec.panel_nodes);
    let tail = GaussLaguerre::new(spec.tail_nodes, 0.0)?;
    let angular = angular_rule(spec.tau_nodes);

    let mut terms: Vec<f64> = Vec::new();
    let mut partial = 0.0;
    let mut previous: Option<f64> = None;
    loop {
        let start = terms.len();
        let block: Vec<f64> = (start..start + BLOCK)
            .into_par_iter()
            .map(|s| weighted_integral(s as u32, varpi_s, varpi_p, &panel, &tail, &angular))
            .collect();
        for (k, j) in block.into_iter().enumerate() {
            let sp = (start + k) as f64 + 1.0;
            partial += j / (sp * sp);
            terms.push(j);
        }
        let total = partial + tail_estimate(&terms);
        if let Some(prev) = previous {
            let change = (total - prev).abs();
            if terms.len() >= minimum && change <= spec.rel_tol * total.abs() {
                return Ok(SeriesResult {
                    value: total,
                    error_estimate: change,
                    terms: terms.len(),
                });
            }
            if terms.len() >= HARD_CAP {
                return Err(Error::numerics(
                    format!("s-sum not converged after {} terms", terms.len()),
                    change,
                ));
            }
        }
        previous = Some(total);
    }
}

/// Leading term `E0 / (hbar c)`.
pub fn e0(radius: f64, gap: f64, omega_s: Plasma, omega_p: Plasma) -> Result<f64> {
    check_lengths(radius, gap)?;
    let i0 = leading_integral(omega_s.times(gap), omega_p.times(gap), &AsymptoticsSpec::default())?;
    Ok(-radius / (4.0 * PI * gap * gap) * i0)
}

/// Next-to-leading term `E1 / (hbar c)`.
pub fn e1(radius: f64, gap: f64, omega_s: Plasma, omega_p: Plasma) -> Result<f64> {
    check_lengths(radius, gap)?;
    let series = ntl_series(omega_s.times(gap), omega_p.times(gap), &AsymptoticsSpec::default())?;
    Ok(-series.value / (4.0 * PI * gap))
}

/// `theta = (E1 / E0) (R / d)` as a function of `(varpi_s, varpi_p)`.
pub fn theta_dimensionless(varpi_s: Plasma, varpi_p: Plasma, spec: &AsymptoticsSpec) -> Result<f64> {
    let i0 = leading_integral(varpi_s, varpi_p, spec)?;
    if i0 == 0.0 {
        return Err(Error::domain("theta undefined: leading term vanishes"));
    }
    Ok(ntl_series(varpi_s, varpi_p, spec)?.value / i0)
}

/// `theta = (E1 / E0) (R / d)`.
pub fn theta(gap: f64, radius: f64, omega_s: Plasma, omega_p: Plasma) -> Result<f64> {
    check_lengths(radius, gap)?;
    theta_dimensionless(omega_s.times(gap), omega_p.times(gap), &AsymptoticsSpec::default())
}

fn check_lengths(radius: f64, gap: f64) -> Result<()> {
    if !(radius > 0.0) || !(gap > 0.0) || !radius.is_finite() || !gap.is_finite() {
        return Err(Error::domain(format!("radius and gap must be > 0 (R = {radius}, d = {gap})")));
    }
    Ok(())
}
