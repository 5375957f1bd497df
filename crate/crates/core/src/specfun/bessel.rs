//! Modified Bessel functions of half-integer order, exponentially scaled.
//!
//! For a fixed argument `z` the whole ladder `l = 0..=l_max` (order `l + 1/2`)
//! is produced in logarithmic form. `I` is obtained from a continued fraction
//! at the top order followed by downward ratio recurrence, `K` from upward
//! ratio recurrence starting at the closed forms of `K_{1/2}` and `K_{3/2}`.
//! Both directions are the stable ones, and working with ratios and logarithms
//! keeps every stored number finite even where `I` or `K` alone would overflow.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LENTZ_TINY: f64 = 1e-300;
const LENTZ_MAX_ITER: usize = 1_000_000;

/// Scaled values of `I_{l+1/2}(z)`, `K_{l+1/2}(z)` and their derivatives.
///
/// `i_scaled = e^{-z} I(z)` and `k_scaled = e^{z} K(z)`, except that when one
/// of them would leave the `f64` range both are rebalanced by `log_balance`:
/// the true scaled values are `i_scaled * e^{-log_balance}` and
/// `k_scaled * e^{log_balance}`. Products `I*K` never see the balance factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBessel {
    pub order_l: u32,
    pub argument: f64,
    pub i_scaled: f64,
    pub k_scaled: f64,
    pub i_deriv_scaled: f64,
    pub k_deriv_scaled: f64,
    /// Zero unless rebalancing was needed.
    pub log_balance: f64,
}

impl ScaledBessel {
    /// `ln(e^{-z} I_{l+1/2}(z))`.
    pub fn ln_i(&self) -> f64 {
        self.i_scaled.ln() - self.log_balance
    }

    /// `ln(e^{z} K_{l+1/2}(z))`.
    pub fn ln_k(&self) -> f64 {
        self.k_scaled.ln() + self.log_balance
    }

    /// `I_{l+1/2}(z) K_{l+1/2}(z)`; the exponential scales cancel.
    pub fn product(&self) -> f64 {
        self.i_scaled * self.k_scaled
    }
}

/// Logarithmic ladder of half-integer Bessel data at one argument.
#[derive(Debug, Clone)]
pub struct BesselLadder {
    z: f64,
    ln_i: Vec<f64>,
    ln_k: Vec<f64>,
    /// `I'/I` per order.
    i_log_deriv: Vec<f64>,
    /// `K'/K` per order.
    k_log_deriv: Vec<f64>,
    /// `I_{l+3/2}/I_{l+1/2}`.
    i_up_ratio: Vec<f64>,
    /// `K_{l-1/2}/K_{l+1/2}`.
    k_down_ratio: Vec<f64>,
}

impl BesselLadder {
    pub fn new(z: f64, l_max: u32) -> Result<Self> {
        if !z.is_finite() || z <= 0.0 {
            return Err(Error::domain(format!("Bessel argument must be finite and > 0, got {z}")));
        }
        let n = l_max as usize + 1;

        // I ratios: continued fraction at the top, then downward.
        let mut i_up_ratio = vec![0.0; n];
        i_up_ratio[n - 1] = i_ratio_cf(l_max as f64 + 0.5, z)?;
        for l in (1..n).rev() {
            let two_nu = 2.0 * l as f64 + 1.0;
            i_up_ratio[l - 1] = 1.0 / (two_nu / z + i_up_ratio[l]);
        }
        let mut ln_i = vec![0.0; n];
        // e^{-z} I_{1/2}(z) = sqrt(2/(pi z)) (1 - e^{-2z}) / 2
        ln_i[0] = 0.5 * (2.0 / (PI * z)).ln() + (-(-2.0 * z).exp_m1() / 2.0).ln();
        for l in 1..n {
            ln_i[l] = ln_i[l - 1] + i_up_ratio[l - 1].ln();
        }

        // K ratios upward: s_l = K_{l+3/2}/K_{l+1/2}.
        let mut ln_k = vec![0.0; n];
        let mut k_down_ratio = vec![1.0; n];
        ln_k[0] = 0.5 * (PI / (2.0 * z)).ln();
        let mut s = 1.0 + 1.0 / z;
        for l in 1..n {
            ln_k[l] = ln_k[l - 1] + s.ln();
            k_down_ratio[l] = 1.0 / s;
            s = (2.0 * l as f64 + 1.0) / z + 1.0 / s;
        }

        let mut i_log_deriv = vec![0.0; n];
        let mut k_log_deriv = vec![0.0; n];
        for l in 0..n {
            let nu = l as f64 + 0.5;
            i_log_deriv[l] = i_up_ratio[l] + nu / z;
            k_log_deriv[l] = -k_down_ratio[l] - nu / z;
        }

        Ok(Self {
            z,
            ln_i,
            ln_k,
            i_log_deriv,
            k_log_deriv,
            i_up_ratio,
            k_down_ratio,
        })
    }

    pub fn argument(&self) -> f64 {
        self.z
    }

    pub fn l_max(&self) -> u32 {
        (self.ln_i.len() - 1) as u32
    }

    pub fn ln_i(&self, l: u32) -> f64 {
        self.ln_i[l as usize]
    }

    pub fn ln_k(&self, l: u32) -> f64 {
        self.ln_k[l as usize]
    }

    pub fn i_log_deriv(&self, l: u32) -> f64 {
        self.i_log_deriv[l as usize]
    }

    pub fn k_log_deriv(&self, l: u32) -> f64 {
        self.k_log_deriv[l as usize]
    }

    /// `(1/2) I + z I'` divided by `I`: `l + 1 + z I_{l+3/2}/I_{l+1/2}`, always positive.
    pub fn i_riccati_factor(&self, l: u32) -> f64 {
        l as f64 + 1.0 + self.z * self.i_up_ratio[l as usize]
    }

    /// `(1/2) K + z K'` divided by `K`: `-(l + z K_{l-1/2}/K_{l+1/2})`, always negative.
    pub fn k_riccati_factor(&self, l: u32) -> f64 {
        -(l as f64 + self.z * self.k_down_ratio[l as usize])
    }

    pub fn scaled(&self, l: u32) -> ScaledBessel {
        let li = self.ln_i(l);
        let lk = self.ln_k(l);
        let balance = if li.abs() > 600.0 || lk.abs() > 600.0 {
            0.5 * (lk - li)
        } else {
            0.0
        };
        let i_scaled = (li + balance).exp();
        let k_scaled = (lk - balance).exp();
        ScaledBessel {
            order_l: l,
            argument: self.z,
            i_scaled,
            k_scaled,
            i_deriv_scaled: i_scaled * self.i_log_deriv(l),
            k_deriv_scaled: k_scaled * self.k_log_deriv(l),
            log_balance: balance,
        }
    }
}

/// `I_{nu+1}(z)/I_nu(z)` by modified Lentz evaluation of the continued fraction
/// `1/(2(nu+1)/z + 1/(2(nu+2)/z + ...))`.
fn i_ratio_cf(nu: f64, z: f64) -> Result<f64> {
    let mut f = LENTZ_TINY;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..LENTZ_MAX_ITER {
        let b = 2.0 * (nu + k as f64) / z;
        d += b;
        if d.abs() < LENTZ_TINY {
            d = LENTZ_TINY;
        }
        c = b + 1.0 / c;
        if c.abs() < LENTZ_TINY {
            c = LENTZ_TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if k > 1 && (delta - 1.0).abs() < 1e-16 {
            return Ok(f);
        }
    }
    Err(Error::numerics(
        format!("Bessel continued fraction did not converge for nu = {nu}, z = {z}"),
        f64::NAN,
    ))
}

/// Scaled half-integer modified Bessel functions of order `order_l + 1/2`.
pub fn bessel_half(order_l: u32, z: f64) -> Result<ScaledBessel> {
    Ok(BesselLadder::new(z, order_l)?.scaled(order_l))
}
