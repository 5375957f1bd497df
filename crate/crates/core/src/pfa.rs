//! Proximity force approximation built from the plane-plane Lifshitz energy.
//!
//! Energies are divided by `hbar c` as in [`crate::energy`].

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::{exp_decay_rule, until_stable, GaussLegendre};
use crate::scattering::{plane_r_q, Plasma, Polarization};
use crate::specfun::dilog;

const START_NODES: usize = 64;
const NODE_CAP: usize = 1024;
const REL_TOL: f64 = 1e-11;
/// Upper end of the double-exponential parameter; `u = e^{6}` is far past the decay.
const DE_RANGE: f64 = 6.0;

/// Radial nodes for `int_0^inf du`, refined along with the angular count `n`.
/// The integrand has a `u ln u` endpoint term (reflection products reach 1 at
/// `u = 0`), which the double-exponential map absorbs.
fn radial_nodes(n: usize) -> Vec<(f64, f64)> {
    exp_decay_rule(8.0 / n as f64, DE_RANGE)
}

/// Dimensionless inputs of the PFA energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfaParams {
    /// `Omega_1 d`.
    pub varpi_1: Plasma,
    /// `Omega_2 d`.
    pub varpi_2: Plasma,
    pub radius: f64,
    pub gap: f64,
}

impl PfaParams {
    /// From the plasma parameters of the two sheets (inverse length).
    pub fn new(radius: f64, gap: f64, omega_1: Plasma, omega_2: Plasma) -> Result<Self> {
        if !(radius > 0.0) || !(gap > 0.0) || !radius.is_finite() || !gap.is_finite() {
            return Err(Error::domain(format!("radius and gap must be > 0 (R = {radius}, d = {gap})")));
        }
        Ok(Self {
            varpi_1: omega_1.times(gap),
            varpi_2: omega_2.times(gap),
            radius,
            gap,
        })
    }
}

/// `r^(1) r^(2)` for both polarizations in the `(t, c)` variables where
/// `t = d q` and `c = kappa / q`.
fn reflection_products(v1: Plasma, v2: Plasma, t: f64, c: f64) -> [f64; 2] {
    let kappa = t * c;
    [
        plane_r_q(Polarization::TE, kappa, t, v1) * plane_r_q(Polarization::TE, kappa, t, v2),
        plane_r_q(Polarization::TM, kappa, t, v1) * plane_r_q(Polarization::TM, kappa, t, v2),
    ]
}

/// Plane-plane Casimir energy per unit area, `E / (hbar c A)`, at separation `d`.
pub fn lifshitz_plane_plane(d: f64, omega_1: Plasma, omega_2: Plasma) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::domain(format!("separation must be > 0, got {d}")));
    }
    let (v1, v2) = (omega_1.times(d), omega_2.times(d));
    if v1.is_transparent() || v2.is_transparent() {
        return Ok(0.0);
    }
    // int dkappa int dk k f = int dq q^2 int_0^1 dc f with kappa = c q; then u = 2 d q
    let (value, _, _) = until_stable(START_NODES, NODE_CAP, REL_TOL, 0.0, |n| {
        let leg = GaussLegendre::new(n);
        let mut total = 0.0;
        for (u, w) in radial_nodes(n) {
            let t = 0.5 * u;
            let weight = w * t * t;
            if weight == 0.0 {
                continue;
            }
            // 1 - rr e^{-u} = (1 - rr) - rr expm1(-u)
            let em1 = (-u).exp_m1();
            let inner: f64 = leg
                .mapped(0.0, 1.0)
                .map(|(c, wc)| {
                    let rr = reflection_products(v1, v2, t, c);
                    wc * rr.iter().map(|&x| ((1.0 - x) - x * em1).ln()).sum::<f64>()
                })
                .sum();
            total += weight * inner;
        }
        Ok(0.5 * total)
    })?;
    Ok(value / (4.0 * PI * PI * d * d * d))
}

/// `int_0^inf dt t int_0^1 dtau tau / sqrt(1 - tau^2) [Li2(r r e^{-2t})_TE + Li2(r r e^{-2t})_TM]`
/// with a double-exponential rule in `2t` and Gauss–Legendre in `phi`, `tau = sin(phi)`.
/// Returns the value and the last change under node doubling.
pub fn pfa_integral(varpi_1: Plasma, varpi_2: Plasma) -> Result<(f64, f64)> {
    if varpi_1.is_transparent() || varpi_2.is_transparent() {
        return Ok((0.0, 0.0));
    }
    let (value, err, _) = until_stable(START_NODES, NODE_CAP, REL_TOL, 0.0, |n| {
        let leg = GaussLegendre::new(n);
        let angles: Vec<(f64, f64, f64)> = leg
            .mapped(0.0, FRAC_PI_2)
            .map(|(phi, w)| (phi.sin(), phi.cos(), w))
            .collect();
        let mut total = 0.0;
        for (u, w) in radial_nodes(n) {
            let t = 0.5 * u;
            let decay = (-u).exp();
            let mut inner = 0.0;
            for &(tau, cos, wphi) in &angles {
                let rr = reflection_products(varpi_1, varpi_2, t, cos);
                let mut f = 0.0;
                for x in rr {
                    let arg = x * decay;
                    if arg.abs() > 1.0 {
                        return Err(Error::numerics(format!("dilog argument {arg} outside [-1, 1]"), arg));
                    }
                    f += dilog(arg)?;
                }
                inner += wphi * tau * f;
            }
            total += w * t * inner;
        }
        Ok(0.5 * total)
    })?;
    Ok((value, err))
}

/// PFA sphere-plane energy `E / (hbar c)`.
pub fn pfa_energy(params: &PfaParams) -> Result<f64> {
    let (integral, _) = pfa_integral(params.varpi_1, params.varpi_2)?;
    Ok(-params.radius / (4.0 * PI * params.gap * params.gap) * integral)
}

/// PFA energy of two perfect conductors, `-pi^3 R / (720 d^2)`.
pub fn pfa_energy_perfect(radius: f64, gap: f64) -> f64 {
    -PI.powi(3) * radius / (720.0 * gap * gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn plasma(v: f64) -> Plasma {
        Plasma::new(v).unwrap()
    }

    #[test]
    fn transparent_sheet_gives_zero() {
        assert_eq!(lifshitz_plane_plane(1.0, plasma(0.0), plasma(3.0)).unwrap(), 0.0);
        let p = PfaParams::new(1.0, 0.1, plasma(0.0), plasma(0.0)).unwrap();
        assert_eq!(pfa_energy(&p).unwrap(), 0.0);
    }

    #[test]
    fn perfect_conductors() {
        let d = 0.7;
        let e = lifshitz_plane_plane(d, Plasma::PerfectConductor, Plasma::PerfectConductor).unwrap();
        let want = -PI * PI / (720.0 * d.powi(3));
        assert!((e / want - 1.0).abs() < 1e-6, "{e} vs {want}");
        let p = PfaParams::new(2.0, 0.05, Plasma::PerfectConductor, Plasma::PerfectConductor).unwrap();
        let e = pfa_energy(&p).unwrap();
        assert!((e / pfa_energy_perfect(2.0, 0.05) - 1.0).abs() < 1e-8);
    }

    /// `ln(1 - x) = -sum_n x^n / n` in polar variables `kappa = q cos(a)`,
    /// `k = q sin(a)`, trapezoid with one Richardson step.
    fn lifshitz_oracle(omega: f64) -> f64 {
        let q_max = 20.0;
        let grid = |n: usize| -> f64 {
            let hq = q_max / n as f64;
            let ha = FRAC_PI_2 / n as f64;
            let mut sum = 0.0;
            for i in 0..=n {
                let q = i as f64 * hq;
                let cq = if i == 0 || i == n { 0.5 } else { 1.0 };
                for j in 0..=n {
                    let a = j as f64 * ha;
                    let ca = if j == 0 || j == n { 0.5 } else { 1.0 };
                    let kappa = q * a.cos();
                    let rte = omega / (omega + q);
                    let rtm = if q == 0.0 { -1.0 } else { -omega * q / (omega * q + kappa * kappa) };
                    let e = (-2.0 * q).exp();
                    let mut s = 0.0;
                    for x in [rte * rte * e, rtm * rtm * e] {
                        let mut p = x;
                        for n in 1..=400 {
                            let term = p / n as f64;
                            s -= term;
                            if term < 1e-18 {
                                break;
                            }
                            p *= x;
                        }
                    }
                    sum += cq * ca * q * q * a.sin() * s;
                }
            }
            sum * hq * ha
        };
        let coarse = grid(1000);
        let fine = grid(2000);
        (4.0 * fine - coarse) / 3.0 / (4.0 * PI * PI)
    }

    #[test]
    fn lifshitz_matches_series_oracle() {
        let got = lifshitz_plane_plane(1.0, plasma(1.0), plasma(1.0)).unwrap();
        let want = lifshitz_oracle(1.0);
        assert!((got / want - 1.0).abs() < 1e-6, "{got} vs {want}");
    }

    #[test]
    fn pfa_equals_integrated_lifshitz() {
        // PFA = 2 pi R int_d^inf E_par(u) du with u = d / s
        let (r, d, omega) = (1.0, 0.2, 5.0);
        let p = PfaParams::new(r, d, plasma(omega), plasma(omega)).unwrap();
        let leg = GaussLegendre::new(48);
        let integral: f64 = leg
            .mapped(0.0, 1.0)
            .map(|(s, w)| {
                let u = d / s;
                w * d / (s * s) * lifshitz_plane_plane(u, plasma(omega), plasma(omega)).unwrap()
            })
            .sum();
        let want = 2.0 * PI * r * integral;
        let got = pfa_energy(&p).unwrap();
        assert!((got / want - 1.0).abs() < 1e-6, "{got} vs {want}");
    }

    #[test]
    fn tau_substitution_independence() {
        // same integral with tau = sqrt(1 - w^2), which removes the endpoint weight differently
        let (v1, v2) = (plasma(0.8), plasma(2.5));
        let (got, _) = pfa_integral(v1, v2).unwrap();
        let leg = GaussLegendre::new(200);
        let mut total = 0.0;
        for (u, wu) in exp_decay_rule(1.0 / 64.0, DE_RANGE) {
            let t = 0.5 * u;
            let inner: f64 = leg
                .mapped(0.0, 1.0)
                .map(|(w, ww)| {
                    let rr = reflection_products(v1, v2, t, w);
                    ww * (dilog(rr[0] * (-u).exp()).unwrap() + dilog(rr[1] * (-u).exp()).unwrap())
                })
                .sum();
            total += wu * t * inner;
        }
        let want = 0.5 * total;
        assert!((got / want - 1.0).abs() < 1e-9, "{got} vs {want}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn monotone_and_bounded_by_perfect(v in 0.1f64..10.0, factor in 1.1f64..3.0) {
            let (lo, _) = pfa_integral(plasma(v), plasma(v)).unwrap();
            let (hi, _) = pfa_integral(plasma(v * factor), plasma(v)).unwrap();
            let (pc, _) = pfa_integral(Plasma::PerfectConductor, Plasma::PerfectConductor).unwrap();
            prop_assert!(hi > lo);
            prop_assert!(hi < pc);
        }
    }
}
