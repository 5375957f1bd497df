use std::f64::consts::PI;

use crate::error::{Error, Result};

const ZETA2: f64 = PI * PI / 6.0;

/// Dilogarithm `Li_2(x) = sum_{n>=1} x^n / n^2` on `[-1, 1]`.
pub fn dilog(x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("dilog: |x| = {} exceeds 1", x.abs())));
    }
    Ok(dilog_unchecked(x))
}

/// `dilog` without the range check, for hot quadrature loops whose arguments
/// are products of reflection coefficients and `e^{-2t}`.
fn dilog_unchecked(x: f64) -> f64 {
    if x == 1.0 {
        ZETA2
    } else if x == -1.0 {
        -ZETA2 / 2.0
    } else if x.abs() <= 0.5 {
        series(x)
    } else if x > 0.5 {
        // Euler reflection
        let y = 1.0 - x;
        ZETA2 - x.ln() * y.ln() - series(y)
    } else {
        // Landen: x/(x-1) lands in [1/3, 1/2)
        let l = (1.0 - x).ln();
        -series(x / (x - 1.0)) - 0.5 * l * l
    }
}

fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = x;
    let mut n = 1.0f64;
    loop {
        let term = pow / (n * n);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) || n > 200.0 {
            break;
        }
        pow *= x;
        n += 1.0;
    }
    sum
}
