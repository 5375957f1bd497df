//! Associated Legendre functions of argument `x >= 1`.
//!
//! The convention is `P_l^m(x) = (x^2 - 1)^{m/2} d^m P_l(x) / dx^m`, which is
//! real and positive for `x > 1`. Upward recurrence in `l` at fixed `m` is
//! stable in this region.

use crate::error::{Error, Result};

const RESCALE_ABOVE: f64 = 1e200;
const RESCALE_BY: f64 = 1e-200;
const LN_RESCALE: f64 = 460.517_018_598_809_1; // 200 ln 10

/// `P_l^m(x)` and `dP_l^m/dx` for `x >= 1`.
///
/// At `x = 1` with `m = 1` the derivative diverges and `+inf` is returned.
pub fn legendre_p(l: u32, m: u32, x: f64) -> Result<(f64, f64)> {
    if m > l {
        return Err(Error::domain(format!("legendre_p: m = {m} exceeds l = {l}")));
    }
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::domain(format!("legendre_p: x = {x} must be finite and >= 1")));
    }
    if x == 1.0 {
        return Ok(at_one(l, m));
    }
    let mut ladder = NormalizedLegendre::new(m, l);
    ladder.evaluate(x, x - 1.0);
    let idx = ladder.index(l);
    // P = Q sqrt((l+m)!/(l-m)!)
    let ln_norm: f64 = ((l - m + 1)..=(l + m)).map(|k| 0.5 * (k as f64).ln()).sum();
    let scale = (ladder.log_scale[idx] + ln_norm).exp();
    let sinh = ((x - 1.0) * (x + 1.0)).sqrt();
    Ok((ladder.q[idx] * scale, ladder.sinh_dq[idx] / sinh * scale))
}

fn at_one(l: u32, m: u32) -> (f64, f64) {
    let lf = l as f64;
    match m {
        0 => (1.0, 0.5 * lf * (lf + 1.0)),
        1 => (0.0, if l == 0 { 0.0 } else { f64::INFINITY }),
        // P_l^2 = (x^2 - 1) P_l'' so the slope at 1 is 2 P_l''(1)
        2 => (0.0, 2.0 * (lf - 1.0) * lf * (lf + 1.0) * (lf + 2.0) / 8.0),
        _ => (0.0, 0.0),
    }
}

/// Normalized ladder `Q_l = sqrt((l-m)!/(l+m)!) P_l^m(x)` for `l = max(1,m)..=l_max`,
/// together with `sinh(theta) dQ_l/dx` where `x = cosh(theta)`.
///
/// Stored value times `exp(log_scale[i])` is the true value. The buffers are
/// reused across calls so that quadrature loops do not allocate.
#[derive(Debug, Clone)]
pub struct NormalizedLegendre {
    m: u32,
    l_min: u32,
    l_max: u32,
    pub q: Vec<f64>,
    pub sinh_dq: Vec<f64>,
    pub log_scale: Vec<f64>,
}

impl NormalizedLegendre {
    pub fn new(m: u32, l_max: u32) -> Self {
        let l_min = m.max(1);
        let n = (l_max + 1).saturating_sub(l_min) as usize;
        Self {
            m,
            l_min,
            l_max,
            q: vec![0.0; n],
            sinh_dq: vec![0.0; n],
            log_scale: vec![0.0; n],
        }
    }

    pub fn l_min(&self) -> u32 {
        self.l_min
    }

    pub fn index(&self, l: u32) -> usize {
        (l - self.l_min) as usize
    }

    /// Fill the ladder at `x > 1`; `x_minus_one` is passed separately so that
    /// `x^2 - 1` keeps full relative precision near `x = 1`.
    pub fn evaluate(&mut self, x: f64, x_minus_one: f64) {
        let m = self.m;
        let mf = m as f64;
        let x2m1 = x_minus_one * (x + 1.0);
        let sinh = x2m1.sqrt();

        // Q_m = prod_{k<=m} sqrt((2k-1)/(2k)) (x^2-1)^{m/2}, Q'_m = Q_m m x/(x^2-1)
        let mut log = 0.5 * mf * x2m1.ln();
        for k in 1..=m {
            log += 0.5 * ((2 * k - 1) as f64 / (2 * k) as f64).ln();
        }
        if m == 0 {
            log = 0.0;
        }
        let mut q_prev = 0.0;
        let mut dq_prev = 0.0;
        let mut q = 1.0;
        let mut dq = mf * x / x2m1;

        let mut l = m;
        loop {
            if l >= self.l_min {
                let i = (l - self.l_min) as usize;
                self.q[i] = q;
                self.sinh_dq[i] = dq * sinh;
                self.log_scale[i] = log;
            }
            if l == self.l_max {
                break;
            }
            let lf = l as f64;
            let a = ((lf - mf) * (lf + mf)).sqrt();
            let b = ((lf + 1.0 - mf) * (lf + 1.0 + mf)).sqrt();
            let q_next = ((2.0 * lf + 1.0) * x * q - a * q_prev) / b;
            let dq_next = ((2.0 * lf + 1.0) * (q + x * dq) - a * dq_prev) / b;
            q_prev = q;
            dq_prev = dq;
            q = q_next;
            dq = dq_next;
            if q.abs() > RESCALE_ABOVE || dq.abs() > RESCALE_ABOVE {
                q *= RESCALE_BY;
                dq *= RESCALE_BY;
                q_prev *= RESCALE_BY;
                dq_prev *= RESCALE_BY;
                log += LN_RESCALE;
            }
            l += 1;
        }
    }
}
