//! Round-trip matrix `M(i xi)` of the sphere-plane system, one azimuthal
//! index `m` at a time.
//!
//! The angular integral over the rapidity `theta` is mapped by
//! `cosh(theta) = 1 + u / (2 kappa L)` onto `int_0^inf e^{-u} (...) du` and
//! evaluated with Gauss–Laguerre. For `P_l^m` the convention of
//! [`crate::specfun::legendre_p`] is used (real and positive above 1); with it
//! the printed `(-1)^m` phase is absorbed and every diagonal round trip is
//! attractive, as required by the `m -> -m` degeneracy and the large-distance
//! Casimir–Polder limit.
//!
//! Entries of `M` range over hundreds of decades (`T_l` falls like
//! `(kappa R)^{2l}` while the angular integral grows like `(2l)!`), so blocks
//! are stored in the diagonally balanced form `B = D^{-1} M D` with
//! `D = diag(sqrt|T|)` and a common factor `exp(log_scale)`. The determinant
//! of `I - M` is unchanged by the similarity.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::energy::NumericsSpec;
use crate::error::{Error, Result};
use crate::quadrature::GaussLaguerre;
use crate::scattering::{plane_r_q, sphere_t_scaled, PlaneSheet, Polarization, ScaledT, SphereSheet};
use crate::specfun::{BesselLadder, NormalizedLegendre};

/// 2x2 polarization block indexed `[row][col]` with TE = 0, TM = 1.
pub type PolBlock = [[f64; 2]; 2];

/// Round-trip matrix restricted to one `m` at one imaginary wavenumber.
///
/// Rows and columns are ordered by `l` ascending with the polarization
/// running fastest: `(l_min, TE), (l_min, TM), (l_min + 1, TE), ...`.
#[derive(Debug, Clone)]
pub struct RoundTripBlock {
    pub m: i32,
    pub kappa: f64,
    pub l_min: u32,
    pub l_max: u32,
    /// Balanced matrix; the true block is `exp(log_scale) * D * matrix * D^{-1}`.
    pub matrix: DMatrix<f64>,
    pub log_scale: f64,
    /// `ln D_ii`.
    pub ln_balance: Vec<f64>,
}

impl RoundTripBlock {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn index(&self, l: u32, pol: Polarization) -> usize {
        2 * (l - self.l_min) as usize + pol_index(pol)
    }

    /// Entry of the balanced block with the common scale applied.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let v = self.matrix[(i, j)];
        if v == 0.0 {
            0.0
        } else {
            v * self.log_scale.exp()
        }
    }

    /// Entry of the unbalanced matrix `M` itself.
    pub fn raw_entry(&self, i: usize, j: usize) -> f64 {
        let v = self.matrix[(i, j)];
        if v == 0.0 {
            return 0.0;
        }
        v * (self.log_scale + self.ln_balance[i] - self.ln_balance[j]).exp()
    }

    /// Balanced block with the common scale applied.
    pub fn scaled_matrix(&self) -> DMatrix<f64> {
        let s = self.log_scale.exp();
        &self.matrix * s
    }
}

fn pol_index(pol: Polarization) -> usize {
    match pol {
        Polarization::TE => 0,
        Polarization::TM => 1,
    }
}

/// Number of angular nodes used for a block truncated at `l_max`.
///
/// For perfect reflectors the angular integrand is a polynomial of degree
/// `<= 2 l_max` in `u`, integrated exactly by `l_max + 1` Laguerre nodes; the
/// margin covers the rational plasma factors.
pub fn theta_rule_size(theta_nodes: usize, l_max: u32) -> usize {
    let need = l_max as usize + 1 + l_max as usize / 8 + 8;
    theta_nodes.max(need)
}

fn prefactor_ln(l: u32) -> f64 {
    let lf = l as f64;
    0.5 * ((PI / 2.0) * (2.0 * lf + 1.0) / (lf * (lf + 1.0))).ln()
}

fn check_geometry(kappa: f64, sphere: &SphereSheet, plane: &PlaneSheet) -> Result<()> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::domain(format!("kappa must be > 0, got {kappa}")));
    }
    if !(plane.distance > sphere.radius) {
        return Err(Error::domain(format!(
            "plane distance L = {} must exceed sphere radius R = {}",
            plane.distance, sphere.radius
        )));
    }
    Ok(())
}

/// Assembles round-trip blocks for a fixed geometry, truncation and angular rule.
#[derive(Debug, Clone)]
pub struct RoundTripAssembler {
    sphere: SphereSheet,
    plane: PlaneSheet,
    l_max: u32,
    rule: GaussLaguerre,
}

impl RoundTripAssembler {
    pub fn new(sphere: SphereSheet, plane: PlaneSheet, l_max: u32, theta_nodes: usize) -> Result<Self> {
        if l_max < 1 {
            return Err(Error::domain("l_max must be >= 1"));
        }
        let rule = GaussLaguerre::new(theta_rule_size(theta_nodes, l_max), 0.0)?;
        Ok(Self {
            sphere,
            plane,
            l_max,
            rule,
        })
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn theta_nodes(&self) -> usize {
        self.rule.len()
    }

    /// Sphere T-matrix elements for `l = l_min..=l_max` at `kappa`.
    fn t_elements(&self, kappa: f64, l_min: u32) -> Result<Vec<[ScaledT; 2]>> {
        let ladder = BesselLadder::new(kappa * self.sphere.radius, self.l_max)?;
        let omega_r = self.sphere.omega.times(self.sphere.radius);
        (l_min..=self.l_max)
            .map(|l| {
                Ok([
                    sphere_t_scaled(Polarization::TE, l, &ladder, omega_r)?,
                    sphere_t_scaled(Polarization::TM, l, &ladder, omega_r)?,
                ])
            })
            .collect()
    }

    /// Block for azimuthal index `m` at imaginary wavenumber `kappa`.
    pub fn block(&self, m: i32, kappa: f64) -> Result<RoundTripBlock> {
        check_geometry(kappa, &self.sphere, &self.plane)?;
        let m_abs = m.unsigned_abs();
        let l_min = m_abs.max(1);
        if self.l_max < l_min {
            return Err(Error::domain(format!("l_max = {} < max(1, |m|) = {l_min}", self.l_max)));
        }
        let n_l = (self.l_max - l_min + 1) as usize;
        let dim = 2 * n_l;
        let kl2 = 2.0 * kappa * self.plane.distance;
        let log_scale = -2.0 * kappa * (self.plane.distance - self.sphere.radius);

        let ts = self.t_elements(kappa, l_min)?;
        let mut ln_balance = vec![0.0; dim];
        let mut signs = vec![0.0; dim];
        for (i, t) in ts.iter().enumerate() {
            for p in 0..2 {
                ln_balance[2 * i + p] = 0.5 * t[p].ln_abs;
                signs[2 * i + p] = t[p].sign;
            }
        }
        if signs.iter().all(|&s| s == 0.0) || self.plane.omega.is_transparent() {
            return Ok(RoundTripBlock {
                m,
                kappa,
                l_min,
                l_max: self.l_max,
                matrix: DMatrix::zeros(dim, dim),
                log_scale,
                ln_balance,
            });
        }
        let ln_pref: Vec<f64> = (l_min..=self.l_max).map(prefactor_ln).collect();

        let n_nodes = self.rule.len();
        let decoupled = m == 0;
        // F: rows (l, p), cols (node, q). G carries the plane factor r_q.
        let cols = if decoupled { n_nodes } else { 2 * n_nodes };
        let mut f = DMatrix::<f64>::zeros(dim, cols);
        let mut g = DMatrix::<f64>::zeros(dim, cols);
        let mut legendre = NormalizedLegendre::new(m_abs, self.l_max);
        let mf = m as f64;

        for (n, (&u, &ln_w)) in self.rule.nodes.iter().zip(&self.rule.ln_weights).enumerate() {
            let xm1 = u / kl2;
            let x = 1.0 + xm1;
            let sinh = (xm1 * (x + 1.0)).sqrt();
            let r_te = plane_r_q(Polarization::TE, kappa, kappa * x, self.plane.omega);
            let r_tm = plane_r_q(Polarization::TM, kappa, kappa * x, self.plane.omega);
            legendre.evaluate(x, xm1);
            for (i, l) in (l_min..=self.l_max).enumerate() {
                let j = legendre.index(l);
                let base = 0.5 * ln_w + ln_pref[i] + legendre.log_scale[j];
                let d = legendre.sinh_dq[j];
                let e = mf * legendre.q[j] / sinh;
                for p in 0..2 {
                    let row = 2 * i + p;
                    if signs[row] == 0.0 {
                        continue;
                    }
                    let amp = (base + ln_balance[row]).exp();
                    if amp == 0.0 {
                        continue;
                    }
                    if decoupled {
                        let r = if p == 0 { r_te } else { r_tm };
                        f[(row, n)] = amp * d;
                        g[(row, n)] = amp * r * d;
                    } else {
                        // first factor rows [d, -e; -e, d], last factor rows [d, e; e, d]
                        let (a_te, a_tm) = if p == 0 { (d, -e) } else { (-e, d) };
                        let (b_te, b_tm) = if p == 0 { (d, e) } else { (e, d) };
                        f[(row, 2 * n)] = amp * a_te;
                        f[(row, 2 * n + 1)] = amp * a_tm;
                        g[(row, 2 * n)] = amp * r_te * b_te;
                        g[(row, 2 * n + 1)] = amp * r_tm * b_tm;
                    }
                }
            }
        }

        let mut matrix = if decoupled {
            // TE and TM rows only couple to themselves
            let mut out = DMatrix::<f64>::zeros(dim, dim);
            for p in 0..2 {
                let rows: Vec<usize> = (0..n_l).map(|i| 2 * i + p).collect();
                let fp = f.select_rows(&rows);
                let gp = g.select_rows(&rows);
                let prod = &fp * gp.transpose();
                for (a, &ra) in rows.iter().enumerate() {
                    for (b, &rb) in rows.iter().enumerate() {
                        out[(ra, rb)] = prod[(a, b)];
                    }
                }
            }
            out
        } else {
            &f * g.transpose()
        };
        let inv = 1.0 / kl2;
        for (i, mut row) in matrix.row_iter_mut().enumerate() {
            row *= signs[i] * inv;
        }
        Ok(RoundTripBlock {
            m,
            kappa,
            l_min,
            l_max: self.l_max,
            matrix,
            log_scale,
            ln_balance,
        })
    }
}

/// Assemble the block for `m` at `kappa` with truncation `numerics.l_max`
/// (its automatic seed when unset).
pub fn assemble_block(
    m: i32,
    kappa: f64,
    sphere: &SphereSheet,
    plane: &PlaneSheet,
    numerics: &NumericsSpec,
) -> Result<RoundTripBlock> {
    numerics.validate()?;
    let l_max = numerics.l_max_seed(sphere, plane)?.max(m.unsigned_abs().max(1));
    RoundTripAssembler::new(*sphere, *plane, l_max, numerics.theta_nodes)?.block(m, kappa)
}

/// One 2x2 polarization block `M_{lm, l'm}` of the round-trip matrix.
///
/// Evaluated directly, without balancing, with the angular node count doubled
/// from `numerics.theta_nodes` until two successive rules agree.
pub fn m_element(
    l: u32,
    l_prime: u32,
    m: i32,
    kappa: f64,
    sphere: &SphereSheet,
    plane: &PlaneSheet,
    numerics: &NumericsSpec,
) -> Result<PolBlock> {
    check_geometry(kappa, sphere, plane)?;
    let l_min = m.unsigned_abs().max(1);
    if l < l_min || l_prime < l_min {
        return Err(Error::domain(format!(
            "m_element: l = {l}, l' = {l_prime} must be >= max(1, |m|) = {l_min}"
        )));
    }
    if sphere.omega.is_transparent() || plane.omega.is_transparent() {
        return Ok([[0.0; 2]; 2]);
    }
    let z = kappa * sphere.radius;
    let ladder = BesselLadder::new(z, l)?;
    let omega_r = sphere.omega.times(sphere.radius);
    let t = [
        sphere_t_scaled(Polarization::TE, l, &ladder, omega_r)?,
        sphere_t_scaled(Polarization::TM, l, &ladder, omega_r)?,
    ];
    let kl2 = 2.0 * kappa * plane.distance;
    let ln_common = prefactor_ln(l) + prefactor_ln(l_prime) + 2.0 * z - kl2 - kl2.ln();

    let mut n = numerics.theta_nodes.max(8);
    let mut prev: Option<PolBlock> = None;
    let tol = numerics.rel_tol.min(1e-6);
    for _ in 0..8 {
        let integral = angular_integral(l, l_prime, m, kappa, plane, n)?;
        let mut out = [[0.0; 2]; 2];
        for p in 0..2 {
            for q in 0..2 {
                let (sign, ln_mag) = integral[p][q];
                if sign == 0.0 || t[p].sign == 0.0 {
                    continue;
                }
                out[p][q] = t[p].sign * sign * (ln_mag + t[p].ln_abs + ln_common).exp();
            }
        }
        if let Some(old) = prev {
            let scale = out.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
            let diff = out
                .iter()
                .flatten()
                .zip(old.iter().flatten())
                .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            if diff <= tol * scale + numerics.abs_tol * 1e-6 {
                return Ok(out);
            }
            if n >= 4096 {
                return Err(Error::numerics(
                    format!("angular integral for l = {l}, l' = {l_prime}, m = {m} did not converge"),
                    diff,
                ));
            }
        }
        prev = Some(out);
        n *= 2;
    }
    Err(Error::numerics("angular integral did not converge", f64::NAN))
}

/// Signed log-magnitudes of `int_0^inf e^{-u} [A_l diag(r) B_l'](u) du`
/// including the Legendre normalization, per polarization pair.
fn angular_integral(
    l: u32,
    l_prime: u32,
    m: i32,
    kappa: f64,
    plane: &PlaneSheet,
    n: usize,
) -> Result<[[(f64, f64); 2]; 2]> {
    let rule = GaussLaguerre::new(n, 0.0)?;
    let kl2 = 2.0 * kappa * plane.distance;
    let m_abs = m.unsigned_abs();
    let mf = m as f64;
    let mut legendre = NormalizedLegendre::new(m_abs, l.max(l_prime));
    let mut terms: Vec<([[f64; 2]; 2], f64)> = Vec::with_capacity(n);
    for (&u, &ln_w) in rule.nodes.iter().zip(&rule.ln_weights) {
        let xm1 = u / kl2;
        let x = 1.0 + xm1;
        let sinh = (xm1 * (x + 1.0)).sqrt();
        legendre.evaluate(x, xm1);
        let r = [
            plane_r_q(Polarization::TE, kappa, kappa * x, plane.omega),
            plane_r_q(Polarization::TM, kappa, kappa * x, plane.omega),
        ];
        let (i, j) = (legendre.index(l), legendre.index(l_prime));
        let (d1, e1) = (legendre.sinh_dq[i], mf * legendre.q[i] / sinh);
        let (d2, e2) = (legendre.sinh_dq[j], mf * legendre.q[j] / sinh);
        let a = [[d1, -e1], [-e1, d1]];
        let b = [[d2, e2], [e2, d2]];
        let mut v = [[0.0; 2]; 2];
        for p in 0..2 {
            for q in 0..2 {
                v[p][q] = (0..2).map(|k| a[p][k] * r[k] * b[k][q]).sum();
            }
        }
        terms.push((v, ln_w + legendre.log_scale[i] + legendre.log_scale[j]));
    }
    let max_log = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let mut out = [[(0.0, f64::NEG_INFINITY); 2]; 2];
    for p in 0..2 {
        for q in 0..2 {
            let s: f64 = terms.iter().map(|(v, lg)| v[p][q] * (lg - max_log).exp()).sum();
            if s != 0.0 {
                out[p][q] = (s.signum(), s.abs().ln() + max_log);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::Plasma;
    use crate::specfun::legendre_p;

    fn geometry(ws: f64, wp: f64, r: f64, l: f64) -> (SphereSheet, PlaneSheet) {
        (
            SphereSheet::new(r, Plasma::new(ws).unwrap()).unwrap(),
            PlaneSheet::new(Plasma::new(wp).unwrap(), l).unwrap(),
        )
    }

    fn fixed(l_max: u32) -> NumericsSpec {
        NumericsSpec {
            l_max: crate::energy::Truncation::Fixed(l_max),
            ..NumericsSpec::default()
        }
    }

    /// The same element evaluated with `cosh(theta) = 1 + u` and a fine
    /// trapezoid grid, Richardson-extrapolated from two step sizes.
    fn trapezoid_oracle(l: u32, lp: u32, m: i32, kappa: f64, s: &SphereSheet, p: &PlaneSheet) -> PolBlock {
        let ma = m.unsigned_abs();
        let fact = |a: u32, b: u32| -> f64 { ((a - b + 1)..=(a + b)).map(|k| k as f64).product() };
        let lf = l as f64;
        let lpf = lp as f64;
        let pref = std::f64::consts::FRAC_PI_2
            * ((2.0 * lf + 1.0) * (2.0 * lpf + 1.0) / (lf * (lf + 1.0) * lpf * (lpf + 1.0)) / (fact(l, ma) * fact(lp, ma)))
                .sqrt();
        let t = [
            crate::scattering::sphere_t(Polarization::TE, l, kappa, s).unwrap(),
            crate::scattering::sphere_t(Polarization::TM, l, kappa, s).unwrap(),
        ];
        let integrand = |u: f64| -> [[f64; 2]; 2] {
            let x = 1.0 + u;
            let sinh = (u * (2.0 + u)).sqrt();
            let (p1, dp1) = legendre_p(l, ma, x).unwrap();
            let (p2, dp2) = legendre_p(lp, ma, x).unwrap();
            let mf = m as f64;
            let w = p.omega.value();
            let r = [w / (w + kappa * x), -w * x / (w * x + kappa)];
            let a = [[sinh * dp1, -mf * p1 / sinh], [-mf * p1 / sinh, sinh * dp1]];
            let b = [[sinh * dp2, mf * p2 / sinh], [mf * p2 / sinh, sinh * dp2]];
            let weight = (-2.0 * kappa * p.distance * x).exp();
            let mut v = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    v[i][j] = weight * (0..2).map(|k| a[i][k] * r[k] * b[k][j]).sum::<f64>();
                }
            }
            v
        };
        let trap = |n: usize, upper: f64| -> [[f64; 2]; 2] {
            let h = upper / n as f64;
            let mut acc = [[0.0; 2]; 2];
            for k in 0..=n {
                // the integrand is finite at u = 0 for m = +-1; use the limit by a tiny offset
                let u = if k == 0 { 1e-12 } else { k as f64 * h };
                let f = integrand(u);
                let c = if k == 0 || k == n { 0.5 } else { 1.0 };
                for i in 0..2 {
                    for j in 0..2 {
                        acc[i][j] += c * h * f[i][j];
                    }
                }
            }
            acc
        };
        let upper = 40.0 / (2.0 * kappa * p.distance);
        let coarse = trap(5_000, upper);
        let fine = trap(10_000, upper);
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let rich = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
                out[i][j] = pref * t[i] * rich;
            }
        }
        out
    }

    #[test]
    fn m_element_matches_trapezoid_oracle() {
        // kappa L = 1, Omega_s R = Omega_p L = 1, L/R = 2
        let (s, p) = geometry(2.0, 0.5, 0.5, 1.0);
        let got = m_element(1, 1, 1, 1.0, &s, &p, &NumericsSpec::default()).unwrap();
        let want = trapezoid_oracle(1, 1, 1, 1.0, &s, &p);
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (got[i][j] - want[i][j]).abs() <= 1e-8 * want[i][j].abs(),
                    "[{i}][{j}] {} vs {}",
                    got[i][j],
                    want[i][j]
                );
            }
        }
    }

    #[test]
    fn m_element_oracle_off_diagonal_orders() {
        let (s, p) = geometry(1.3, 0.7, 1.0, 1.6);
        for &(l, lp, m) in &[(2u32, 3u32, 2i32), (3, 1, 0), (4, 2, -1)] {
            let got = m_element(l, lp, m, 0.8, &s, &p, &NumericsSpec::default()).unwrap();
            let want = trapezoid_oracle(l, lp, m, 0.8, &s, &p);
            for i in 0..2 {
                for j in 0..2 {
                    let tol = 1e-7 * want[i][j].abs().max(1e-14);
                    assert!((got[i][j] - want[i][j]).abs() <= tol, "l={l} l'={lp} m={m} [{i}][{j}]");
                }
            }
        }
    }

    #[test]
    fn m_zero_has_no_polarization_mixing() {
        let (s, p) = geometry(1.0, 1.0, 1.0, 1.5);
        let e = m_element(2, 3, 0, 0.7, &s, &p, &NumericsSpec::default()).unwrap();
        assert_eq!(e[0][1], 0.0);
        assert_eq!(e[1][0], 0.0);
        let b = assemble_block(0, 0.7, &s, &p, &fixed(6)).unwrap();
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                if i % 2 != j % 2 {
                    assert_eq!(b.matrix[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn transparent_sphere_gives_zero() {
        let (s, p) = geometry(0.0, 1.0, 1.0, 1.5);
        let e = m_element(2, 2, 1, 0.7, &s, &p, &NumericsSpec::default()).unwrap();
        assert_eq!(e, [[0.0; 2]; 2]);
        let b = assemble_block(1, 0.7, &s, &p, &fixed(5)).unwrap();
        assert!(b.matrix.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_l_block_dimension() {
        let (s, p) = geometry(1.0, 1.0, 1.0, 1.5);
        let b = assemble_block(3, 0.7, &s, &p, &fixed(3)).unwrap();
        assert_eq!(b.dim(), 2);
        let b = assemble_block(0, 0.7, &s, &p, &fixed(1)).unwrap();
        assert_eq!(b.dim(), 2);
    }

    #[test]
    fn far_plane_block_is_negligible() {
        // kappa L = 40; the decay is e^{-2 kappa (L - R)} since T grows like e^{2 kappa R}
        let (s, p) = geometry(3.0, 2.0, 0.1, 2.0);
        let b = assemble_block(1, 20.0, &s, &p, &fixed(8)).unwrap();
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                assert!(b.entry(i, j).abs() < 1e-30);
                assert!(b.raw_entry(i, j).abs() < 1e-30);
            }
        }
    }

    #[test]
    fn block_equals_elementwise_construction() {
        let (s, p) = geometry(1.7, 0.9, 1.0, 1.4);
        let b = assemble_block(2, 0.9, &s, &p, &fixed(6)).unwrap();
        for l in 2..=6 {
            for lp in 2..=6 {
                let e = m_element(l, lp, 2, 0.9, &s, &p, &NumericsSpec::default()).unwrap();
                for (pi, pol) in Polarization::BOTH.iter().enumerate() {
                    for (qi, pol2) in Polarization::BOTH.iter().enumerate() {
                        let got = b.raw_entry(b.index(l, *pol), b.index(lp, *pol2));
                        let want = e[pi][qi];
                        assert!(
                            (got - want).abs() <= 1e-10 * want.abs().max(1e-300),
                            "l={l} l'={lp} {pol:?}{pol2:?}: {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_decays_in_l() {
        let (s, p) = geometry(2.0, 2.0, 1.0, 1.3);
        let kappa = 1.5;
        let b = assemble_block(1, kappa, &s, &p, &fixed(30)).unwrap();
        let start = (2.0 * kappa * s.radius + 5.0).ceil() as u32;
        for l in start..30 {
            for pol in Polarization::BOTH {
                let a = b.raw_entry(b.index(l, pol), b.index(l, pol)).abs();
                let c = b.raw_entry(b.index(l + 1, pol), b.index(l + 1, pol)).abs();
                assert!(c < a, "l={l} {pol:?}");
            }
        }
    }
}
