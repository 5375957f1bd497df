//! Scattering data of the two plasma sheets on the imaginary frequency axis.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::specfun::BesselLadder;

/// Plasma parameter `Omega` of a sheet (units of inverse length).
///
/// The perfect conductor is a separate variant rather than a large number so
/// that the limiting formulas can be evaluated exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plasma {
    Finite(f64),
    PerfectConductor,
}

impl Plasma {
    pub fn new(omega: f64) -> Result<Self> {
        if omega == f64::INFINITY {
            Ok(Plasma::PerfectConductor)
        } else if omega.is_finite() && omega >= 0.0 {
            Ok(Plasma::Finite(omega))
        } else {
            Err(Error::domain(format!("plasma parameter must be >= 0, got {omega}")))
        }
    }

    pub fn is_perfect(self) -> bool {
        matches!(self, Plasma::PerfectConductor)
    }

    pub fn is_transparent(self) -> bool {
        matches!(self, Plasma::Finite(w) if w == 0.0)
    }

    /// `Omega` as a float, `+inf` for the perfect conductor.
    pub fn value(self) -> f64 {
        match self {
            Plasma::Finite(w) => w,
            Plasma::PerfectConductor => f64::INFINITY,
        }
    }

    /// The dimensionless product `Omega * length`.
    pub fn times(self, length: f64) -> Plasma {
        match self {
            Plasma::Finite(w) => Plasma::Finite(w * length),
            Plasma::PerfectConductor => Plasma::PerfectConductor,
        }
    }
}

impl fmt::Display for Plasma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plasma::Finite(w) => write!(f, "{w}"),
            Plasma::PerfectConductor => f.write_str("inf"),
        }
    }
}

impl FromStr for Plasma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "pc" => Ok(Plasma::PerfectConductor),
            _ => {
                let v: f64 = t
                    .parse()
                    .map_err(|_| Error::domain(format!("cannot parse plasma parameter {t:?}")))?;
                Plasma::new(v)
            }
        }
    }
}

/// A spherical plasma sheet of radius `radius` centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSheet {
    pub radius: f64,
    pub omega: Plasma,
}

impl SphereSheet {
    pub fn new(radius: f64, omega: Plasma) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::domain(format!("sphere radius must be > 0, got {radius}")));
        }
        Ok(Self { radius, omega })
    }
}

/// A planar plasma sheet at distance `distance` from the sphere centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSheet {
    pub omega: Plasma,
    pub distance: f64,
}

impl PlaneSheet {
    pub fn new(omega: Plasma, distance: f64) -> Result<Self> {
        if !(distance > 0.0) || !distance.is_finite() {
            return Err(Error::domain(format!("plane distance must be > 0, got {distance}")));
        }
        Ok(Self { omega, distance })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

/// Sign and logarithmic magnitude of a sphere T-matrix element with the
/// `e^{2 kappa R}` growth removed: `T = sign * exp(ln_abs + 2 kappa R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledT {
    pub sign: f64,
    pub ln_abs: f64,
}

impl ScaledT {
    const ZERO: ScaledT = ScaledT {
        sign: 0.0,
        ln_abs: f64::NEG_INFINITY,
    };
}

/// Sphere T-matrix element from a precomputed Bessel ladder at `z = kappa R`.
/// `omega_r` is the dimensionless `Omega_s R`.
pub fn sphere_t_scaled(pol: Polarization, l: u32, ladder: &BesselLadder, omega_r: Plasma) -> Result<ScaledT> {
    if l < 1 {
        return Err(Error::domain("sphere T-matrix needs l >= 1"));
    }
    if omega_r.is_transparent() {
        return Ok(ScaledT::ZERO);
    }
    let z = ladder.argument();
    let ln_i = ladder.ln_i(l);
    let ln_k = ladder.ln_k(l);
    let ik = (ln_i + ln_k).exp();
    let t = match (pol, omega_r) {
        (Polarization::TE, Plasma::PerfectConductor) => ScaledT {
            sign: 1.0,
            ln_abs: ln_i - ln_k,
        },
        (Polarization::TE, Plasma::Finite(w)) => ScaledT {
            sign: 1.0,
            ln_abs: (2.0 * w).ln() + 2.0 * ln_i - (2.0 * w * ik).ln_1p(),
        },
        (Polarization::TM, Plasma::PerfectConductor) => {
            let alpha = ladder.i_riccati_factor(l);
            let beta = ladder.k_riccati_factor(l);
            ScaledT {
                sign: -1.0,
                ln_abs: ln_i - ln_k + alpha.ln() - (-beta).ln(),
            }
        }
        (Polarization::TM, Plasma::Finite(w)) => {
            let alpha = ladder.i_riccati_factor(l);
            let beta = ladder.k_riccati_factor(l);
            // kappa^2 R^2 - 2 Omega R (I/2 + z I')(K/2 + z K'), times R
            let cross = 2.0 * w * ik * alpha * beta;
            let denom = z * z - cross;
            if !(denom.abs() > 1e-300 * (z * z + cross.abs())) {
                return Err(Error::numerics(
                    format!("TM sphere denominator vanishes at l = {l}, kappa R = {z}"),
                    denom,
                ));
            }
            ScaledT {
                sign: -denom.signum(),
                ln_abs: (2.0 * w).ln() + 2.0 * ln_i + 2.0 * alpha.ln() - denom.abs().ln(),
            }
        }
    };
    Ok(t)
}

/// Diagonal sphere T-matrix element `T_l^{pol}` at imaginary wavenumber `kappa`.
pub fn sphere_t(pol: Polarization, l: u32, kappa: f64, sphere: &SphereSheet) -> Result<f64> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::domain(format!("kappa must be > 0, got {kappa}")));
    }
    if l < 1 {
        return Err(Error::domain("sphere T-matrix needs l >= 1"));
    }
    let z = kappa * sphere.radius;
    let ladder = BesselLadder::new(z, l)?;
    let t = sphere_t_scaled(pol, l, &ladder, sphere.omega.times(sphere.radius))?;
    if t.sign == 0.0 {
        return Ok(0.0);
    }
    Ok(t.sign * (t.ln_abs + 2.0 * z).exp())
}

/// Plane reflection coefficient in terms of `q = sqrt(kappa^2 + k_perp^2)`.
#[inline]
pub fn plane_r_q(pol: Polarization, kappa: f64, q: f64, omega: Plasma) -> f64 {
    match (pol, omega) {
        (_, Plasma::Finite(0.0)) => 0.0,
        (Polarization::TE, Plasma::PerfectConductor) => 1.0,
        (Polarization::TM, Plasma::PerfectConductor) => -1.0,
        (Polarization::TE, Plasma::Finite(w)) => w / (w + q),
        (Polarization::TM, Plasma::Finite(w)) => {
            if kappa == 0.0 {
                -1.0
            } else {
                -w * q / (w * q + kappa * kappa)
            }
        }
    }
}

/// Reflection coefficient of the planar sheet.
pub fn plane_r(pol: Polarization, kappa: f64, k_perp: f64, plane: &PlaneSheet) -> Result<f64> {
    if !(kappa >= 0.0) || !(k_perp >= 0.0) || !kappa.is_finite() || !k_perp.is_finite() {
        return Err(Error::domain(format!(
            "plane_r needs finite kappa, k_perp >= 0 (got {kappa}, {k_perp})"
        )));
    }
    if kappa == 0.0 && k_perp == 0.0 {
        return Err(Error::domain("plane_r is undefined at kappa = k_perp = 0"));
    }
    Ok(plane_r_q(pol, kappa, kappa.hypot(k_perp), plane.omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_half;
    use proptest::prelude::*;

    fn sphere(r: f64, w: f64) -> SphereSheet {
        SphereSheet::new(r, Plasma::new(w).unwrap()).unwrap()
    }

    #[test]
    fn transparent_sphere_and_plane() {
        for pol in Polarization::BOTH {
            assert_eq!(sphere_t(pol, 3, 0.7, &sphere(1.0, 0.0)).unwrap(), 0.0);
            let plane = PlaneSheet::new(Plasma::Finite(0.0), 2.0).unwrap();
            assert_eq!(plane_r(pol, 0.3, 0.2, &plane).unwrap(), 0.0);
            assert_eq!(plane_r(pol, 0.0, 0.2, &plane).unwrap(), 0.0);
        }
    }

    #[test]
    fn perfect_conductor_te() {
        let b = bessel_half(1, 1.0).unwrap();
        let want = b.i_scaled / b.k_scaled * 2f64.exp();
        let s = SphereSheet::new(1.0, Plasma::PerfectConductor).unwrap();
        let got = sphere_t(Polarization::TE, 1, 1.0, &s).unwrap();
        assert!((got / want - 1.0).abs() < 1e-14);
    }

    #[test]
    fn finite_te_substitution() {
        // closed forms of I_{3/2}(1), K_{3/2}(1)
        let i = (2.0 / std::f64::consts::PI).sqrt() * (1f64.cosh() - 1f64.sinh());
        let k = (std::f64::consts::PI / 2.0).sqrt() * (-1f64).exp() * 2.0;
        let want = 2.0 * i * i / (1.0 + 2.0 * i * k);
        let got = sphere_t(Polarization::TE, 1, 1.0, &sphere(1.0, 1.0)).unwrap();
        assert!((got / want - 1.0).abs() < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn finite_tm_direct_formula() {
        // direct evaluation from the unscaled Bessel values
        for &(l, z, w) in &[(1u32, 1.0, 1.0), (3, 0.4, 5.0), (7, 6.0, 0.3)] {
            let b = bessel_half(l, z).unwrap();
            let i = b.i_scaled * z.exp();
            let ip = b.i_deriv_scaled * z.exp();
            let k = b.k_scaled * (-z).exp();
            let kp = b.k_deriv_scaled * (-z).exp();
            let a = 0.5 * i + z * ip;
            let c = 0.5 * k + z * kp;
            let want = -2.0 * w * a * a / (z * z - 2.0 * w * a * c);
            let got = sphere_t(Polarization::TM, l, z, &sphere(1.0, w)).unwrap();
            assert!((got / want - 1.0).abs() < 1e-12, "l={l} z={z}");
            assert!(got < 0.0);
        }
    }

    #[test]
    fn perfect_conductor_tm_sign_matches_ratio_form() {
        // (I/2 + z I')/(K/2 + z K') is negative, consistent with the finite-Omega
        // element that carries an explicit minus sign
        let s = SphereSheet::new(1.0, Plasma::PerfectConductor).unwrap();
        for l in 1..10 {
            let pc = sphere_t(Polarization::TM, l, 0.8, &s).unwrap();
            let big = sphere_t(Polarization::TM, l, 0.8, &sphere(1.0, 1e9)).unwrap();
            assert!(pc < 0.0 && big < 0.0);
            assert!((pc / big - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn plane_values() {
        let plane = PlaneSheet::new(Plasma::Finite(1.0), 1.0).unwrap();
        let te = plane_r(Polarization::TE, 3.0, 4.0, &plane).unwrap();
        let tm = plane_r(Polarization::TM, 3.0, 4.0, &plane).unwrap();
        assert!((te - 1.0 / 6.0).abs() < 1e-15);
        assert!((tm + 5.0 / 14.0).abs() < 1e-15);
        let pc = PlaneSheet::new(Plasma::PerfectConductor, 1.0).unwrap();
        assert_eq!(plane_r(Polarization::TE, 3.0, 4.0, &pc).unwrap(), 1.0);
        assert_eq!(plane_r(Polarization::TM, 3.0, 4.0, &pc).unwrap(), -1.0);
        // kappa = 0 endpoint of TM is its analytic limit
        assert_eq!(plane_r(Polarization::TM, 0.0, 2.0, &plane).unwrap(), -1.0);
        assert!(plane_r(Polarization::TE, 0.0, 0.0, &plane).is_err());
    }

    #[test]
    fn domain_errors() {
        let s = sphere(1.0, 1.0);
        assert!(sphere_t(Polarization::TE, 0, 1.0, &s).is_err());
        assert!(sphere_t(Polarization::TE, 1, 0.0, &s).is_err());
        assert!(sphere_t(Polarization::TE, 1, -1.0, &s).is_err());
        assert!(Plasma::new(-1.0).is_err());
        assert!(SphereSheet::new(0.0, Plasma::Finite(1.0)).is_err());
    }

    #[test]
    fn plasma_parse_print_round_trip() {
        for s in ["inf", "0", "675000", "1.5e-3"] {
            let p: Plasma = s.parse().unwrap();
            let again: Plasma = p.to_string().parse().unwrap();
            assert_eq!(p, again);
        }
        assert!("Inf".parse::<Plasma>().unwrap().is_perfect());
        assert!("abc".parse::<Plasma>().is_err());
    }

    proptest! {
        #[test]
        fn perfect_conductor_consistency(l in 1u32..=50, log_z in -2.0f64..2.0) {
            let z = 10f64.powf(log_z);
            let pc = SphereSheet::new(1.0, Plasma::PerfectConductor).unwrap();
            for pol in Polarization::BOTH {
                let a = sphere_t(pol, l, z, &pc).unwrap();
                let b = sphere_t(pol, l, z, &sphere(1.0, 1e9)).unwrap();
                if a.is_finite() && a != 0.0 {
                    prop_assert!((b / a - 1.0).abs() < 1e-6, "pol={:?} l={} z={}", pol, l, z);
                }
            }
        }

        #[test]
        fn scale_invariance(l in 1u32..30, kappa in 0.01f64..20.0, r in 0.1f64..5.0, w in 0.0f64..10.0, lam in 0.1f64..10.0) {
            for pol in Polarization::BOTH {
                let a = sphere_t(pol, l, kappa, &sphere(r, w)).unwrap();
                let b = sphere_t(pol, l, lam * kappa, &sphere(r / lam, lam * w)).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * a.abs(), "{} {}", a, b);
            }
        }

        #[test]
        fn tm_sign_pattern(l in 1u32..40, z in 0.01f64..30.0, w in 0.001f64..100.0) {
            let b = bessel_half(l, z).unwrap();
            // sign of -2 w a^2 / (z^2 - 2 w a c) from the scaled values
            let a = 0.5 * b.i_scaled + z * b.i_deriv_scaled;
            let c = 0.5 * b.k_scaled + z * b.k_deriv_scaled;
            let direct = -(z * z - 2.0 * w * a * c).signum();
            let got = sphere_t(Polarization::TM, l, z, &sphere(1.0, w)).unwrap();
            prop_assert_eq!(got.signum(), direct);
            let plane = PlaneSheet::new(Plasma::Finite(w), 1.0).unwrap();
            prop_assert!(plane_r(Polarization::TM, z, l as f64, &plane).unwrap() <= 0.0);
        }

        #[test]
        fn reflection_monotone_in_omega(kappa in 0.0f64..10.0, kp in 0.01f64..10.0, w1 in 0.0f64..50.0, dw in 0.0f64..50.0) {
            let p1 = PlaneSheet::new(Plasma::Finite(w1), 1.0).unwrap();
            let p2 = PlaneSheet::new(Plasma::Finite(w1 + dw), 1.0).unwrap();
            for pol in Polarization::BOTH {
                let a = plane_r(pol, kappa, kp, &p1).unwrap().abs();
                let b = plane_r(pol, kappa, kp, &p2).unwrap().abs();
                prop_assert!(b >= a - 1e-15);
            }
        }
    }
}
