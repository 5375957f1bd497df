//! Gaussian quadrature rules.
//!
//! Gauss–Laguerre weights are kept as logarithms: for the node counts needed
//! by the round-trip integrals (hundreds of nodes) the outer weights fall far
//! below `f64::MIN_POSITIVE` while the integrands they multiply are huge, and
//! only the product is meaningful. Nodes come from the eigenvalues of the
//! Jacobi matrix, polished by Newton steps on the three-term recurrence, and
//! the weights from the closed form in `L_{n-1}`; an eigenvector-based
//! (Golub–Welsch) weight would lose all relative accuracy in the tail.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Generalized Gauss–Laguerre rule for `int_0^inf x^alpha e^{-x} f(x) dx`.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    /// Natural logarithms of the weights.
    pub ln_weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 || !(alpha > -1.0) {
            return Err(Error::domain(format!(
                "Gauss-Laguerre rule needs n >= 1 and alpha > -1 (n = {n}, alpha = {alpha})"
            )));
        }
        let mut diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
        let mut off: Vec<f64> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    let k = i as f64 + 1.0;
                    (k * (k + alpha)).sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        tridiagonal_eigenvalues(&mut diag, &mut off)?;
        diag.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let nf = n as f64;
        let ln_norm = ln_gamma(nf + alpha + 1.0) - ln_gamma(nf + 1.0) - 2.0 * (nf + alpha).ln();
        let mut nodes = Vec::with_capacity(n);
        let mut ln_weights = Vec::with_capacity(n);
        for &guess in &diag {
            let mut x = guess.max(f64::MIN_POSITIVE);
            for _ in 0..8 {
                let (ln, lnm1, _) = laguerre_scaled(n, alpha, x);
                // x L_n' = n L_n - (n + alpha) L_{n-1}
                let dx = x * ln / (nf * ln - (nf + alpha) * lnm1);
                if !dx.is_finite() {
                    break;
                }
                let next = x - dx;
                if next <= 0.0 {
                    break;
                }
                x = next;
                if dx.abs() <= 4.0 * f64::EPSILON * x {
                    break;
                }
            }
            let (_, lnm1, log_scale) = laguerre_scaled(n, alpha, x);
            let ln_lnm1 = lnm1.abs().ln() + log_scale;
            nodes.push(x);
            ln_weights.push(ln_norm + x.ln() - 2.0 * ln_lnm1);
        }
        Ok(Self {
            alpha,
            nodes,
            ln_weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(x_i)`, with `f` given as a closure.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.ln_weights)
            .map(|(&x, &lw)| {
                let w = lw.exp();
                if w == 0.0 {
                    0.0
                } else {
                    w * f(x)
                }
            })
            .sum()
    }
}

/// Double-exponential rule for `int_0^inf f(x) dx` with `f` decaying
/// exponentially: `x = exp(s - e^{-s})`, trapezoid in `s` with step `h` on
/// `[-s_max, s_max]`. Insensitive to integrable endpoint singularities at 0.
pub fn exp_decay_rule(h: f64, s_max: f64) -> Vec<(f64, f64)> {
    let k = (s_max / h).ceil() as i64;
    (-k..=k)
        .map(|i| {
            let s = i as f64 * h;
            let e = (-s).exp();
            let x = (s - e).exp();
            (x, h * x * (1.0 + e))
        })
        .filter(|&(x, w)| x > 0.0 && w > 0.0)
        .collect()
}

/// Evaluate `rule(n)` for `n = n0, 2 n0, 4 n0, ...` until two successive
/// values agree to `rel_tol` (relative) or `abs_tol`. Returns the finer value,
/// the last difference and the node count used.
pub fn until_stable<F>(n0: usize, n_cap: usize, rel_tol: f64, abs_tol: f64, mut rule: F) -> Result<(f64, f64, usize)>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut n = n0;
    let mut prev = rule(n)?;
    loop {
        if 2 * n > n_cap {
            return Err(Error::numerics(
                format!("quadrature did not stabilize with {n} nodes"),
                f64::NAN,
            ));
        }
        n *= 2;
        let next = rule(n)?;
        let diff = (next - prev).abs();
        if diff <= rel_tol * next.abs() + abs_tol {
            return Ok((next, diff, n));
        }
        prev = next;
    }
}

/// `(L_n, L_{n-1}, log_scale)` with true values `L * exp(log_scale)`.
fn laguerre_scaled(n: usize, alpha: f64, x: f64) -> (f64, f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    let mut log_scale = 0.0;
    if n == 1 {
        return (cur, prev, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e150 {
            cur /= mag;
            prev /= mag;
            log_scale += mag.ln();
        }
    }
    (cur, prev, log_scale)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL. `off[i]`
/// couples rows `i` and `i + 1`; on return `diag` holds the eigenvalues.
fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                return Err(Error::numerics("tridiagonal QL iteration did not converge", f64::NAN));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
