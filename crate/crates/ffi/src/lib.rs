//! C ABI for `casimir-core`.
//!
//! Every fallible function returns a [`CasimirStatus`]; on failure a message
//! is available from [`casimir_last_error`] on the same thread until the next
//! call. Objects are opaque handles created by `*_new` and released by the
//! matching `*_free`. Lengths are unit-free and energies are in units of
//! `hbar c / length`; pass `INFINITY` as a plasma parameter for a perfect
//! conductor.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use casimir_core::asymptotics::{leading_integral, ntl_series, AsymptoticsSpec};
use casimir_core::energy::{casimir_energy, NumericsSpec, Truncation};
use casimir_core::pfa::{pfa_energy, PfaParams};
use casimir_core::{Error, Plasma, PlaneSheet, SphereSheet};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirStatus {
    Ok = 0,
    NullPointer = 1,
    /// Invalid argument: non-positive length, negative plasma parameter, ...
    Domain = 2,
    /// A quadrature, series or truncation did not converge.
    Numerics = 3,
    /// `ln det(I - M)` had the wrong sign.
    SpectralAnomaly = 4,
    /// Internal panic caught at the boundary.
    Internal = 5,
}

/// Sphere of radius `R` whose centre sits at distance `L` from the plane.
pub struct CasimirSystem {
    sphere: SphereSheet,
    plane: PlaneSheet,
}

/// Truncation orders, node counts and tolerances for the exact energy.
pub struct CasimirNumerics {
    spec: NumericsSpec,
}

/// Exact (TGTG) energy.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CasimirEnergy {
    /// `E / (hbar c)`.
    pub energy: f64,
    /// `E d^2 / (hbar c R)`.
    pub dimensionless: f64,
    pub error_estimate: f64,
    pub l_max_used: u32,
    pub m_max_used: u32,
}

/// Small-separation expansion `E = E0 (1 + (d/R) theta + ...)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CasimirAsymptotic {
    pub e0: f64,
    pub e1: f64,
    pub theta: f64,
    /// Truncation estimate of the `E1` series.
    pub error_estimate: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> CasimirStatus {
    match err {
        Error::Domain(_) => CasimirStatus::Domain,
        Error::Numerics { .. } => CasimirStatus::Numerics,
        Error::SpectralAnomaly { .. } => CasimirStatus::SpectralAnomaly,
    }
}

/// Run `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), CasimirStatusError>) -> CasimirStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CasimirStatus::Ok,
        Ok(Err(CasimirStatusError(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            CasimirStatus::Internal
        }
    }
}

struct CasimirStatusError(CasimirStatus, String);

impl From<Error> for CasimirStatusError {
    fn from(e: Error) -> Self {
        CasimirStatusError(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> CasimirStatusError {
    CasimirStatusError(CasimirStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn casimir_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn casimir_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => c"",
    };
    VERSION.as_ptr()
}

/// Create a system; `distance` is the centre-to-plane distance `L > R`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn casimir_system_new(
    radius: f64,
    distance: f64,
    omega_sphere: f64,
    omega_plane: f64,
    out: *mut *mut CasimirSystem,
) -> CasimirStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let sphere = SphereSheet::new(radius, Plasma::new(omega_sphere)?)?;
        let plane = PlaneSheet::new(Plasma::new(omega_plane)?, distance)?;
        if distance <= radius {
            return Err(Error::Domain(format!("distance {distance} must exceed radius {radius}")).into());
        }
        unsafe { *out = Box::into_raw(Box::new(CasimirSystem { sphere, plane })) };
        Ok(())
    })
}

/// Release a system; null is ignored.
///
/// # Safety
/// `system` must be null or a pointer from [`casimir_system_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn casimir_system_free(system: *mut CasimirSystem) {
    if !system.is_null() {
        drop(unsafe { Box::from_raw(system) });
    }
}

/// Default numerics: automatic truncation, 40 nodes, `rel_tol = 1e-4`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn casimir_numerics_new(out: *mut *mut CasimirNumerics) -> CasimirStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let h = Box::new(CasimirNumerics {
            spec: NumericsSpec::default(),
        });
        unsafe { *out = Box::into_raw(h) };
        Ok(())
    })
}

/// Release numerics; null is ignored.
///
/// # Safety
/// `numerics` must be null or a pointer from [`casimir_numerics_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn casimir_numerics_free(numerics: *mut CasimirNumerics) {
    if !numerics.is_null() {
        drop(unsafe { Box::from_raw(numerics) });
    }
}

fn truncation(n: u32) -> Truncation {
    if n == 0 {
        Truncation::Auto
    } else {
        Truncation::Fixed(n)
    }
}

/// Set truncation orders; 0 selects automatic truncation. Node counts of 0
/// keep the current value; tolerances that are not positive are rejected.
///
/// # Safety
/// `numerics` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn casimir_numerics_configure(
    numerics: *mut CasimirNumerics,
    l_max: u32,
    m_max: u32,
    kappa_nodes: u32,
    theta_nodes: u32,
    rel_tol: f64,
    abs_tol: f64,
) -> CasimirStatus {
    guard(|| {
        let h = unsafe { numerics.as_mut() }.ok_or_else(|| null("numerics"))?;
        let mut spec = h.spec;
        spec.l_max = truncation(l_max);
        spec.m_max = truncation(m_max);
        if kappa_nodes > 0 {
            spec.kappa_nodes = kappa_nodes as usize;
        }
        if theta_nodes > 0 {
            spec.theta_nodes = theta_nodes as usize;
        }
        spec.rel_tol = rel_tol;
        spec.abs_tol = abs_tol;
        spec.validate()?;
        h.spec = spec;
        Ok(())
    })
}

/// Exact energy. `numerics` may be null for the defaults.
///
/// # Safety
/// `system` must be a live handle, `numerics` null or a live handle, `out`
/// valid for writing.
#[no_mangle]
pub unsafe extern "C" fn casimir_exact_energy(
    system: *const CasimirSystem,
    numerics: *const CasimirNumerics,
    out: *mut CasimirEnergy,
) -> CasimirStatus {
    guard(|| {
        let sys = unsafe { system.as_ref() }.ok_or_else(|| null("system"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let spec = unsafe { numerics.as_ref() }.map_or_else(NumericsSpec::default, |n| n.spec);
        let r = casimir_energy(&sys.sphere, &sys.plane, &spec)?;
        *out = CasimirEnergy {
            energy: r.energy,
            dimensionless: r.dimensionless,
            error_estimate: r.error_estimate,
            l_max_used: r.l_max_used,
            m_max_used: r.m_max_used,
        };
        Ok(())
    })
}

fn gap(sys: &CasimirSystem) -> f64 {
    sys.plane.distance - sys.sphere.radius
}

/// Proximity force approximation `E_PFA / (hbar c)`.
///
/// # Safety
/// `system` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn casimir_pfa_energy(system: *const CasimirSystem, out: *mut f64) -> CasimirStatus {
    guard(|| {
        let sys = unsafe { system.as_ref() }.ok_or_else(|| null("system"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let params = PfaParams::new(sys.sphere.radius, gap(sys), sys.sphere.omega, sys.plane.omega)?;
        *out = pfa_energy(&params)?;
        Ok(())
    })
}

/// Leading and next-to-leading small-separation terms and `theta`.
/// `theta` is NaN when the leading term vanishes (a transparent sheet).
///
/// # Safety
/// `system` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn casimir_asymptotic(system: *const CasimirSystem, out: *mut CasimirAsymptotic) -> CasimirStatus {
    guard(|| {
        let sys = unsafe { system.as_ref() }.ok_or_else(|| null("system"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let (r, d) = (sys.sphere.radius, gap(sys));
        let (vs, vp) = (sys.sphere.omega.times(d), sys.plane.omega.times(d));
        let spec = AsymptoticsSpec::default();
        let i0 = leading_integral(vs, vp, &spec)?;
        let series = ntl_series(vs, vp, &spec)?;
        let pi = std::f64::consts::PI;
        *out = CasimirAsymptotic {
            e0: -r / (4.0 * pi * d * d) * i0,
            e1: -series.value / (4.0 * pi * d),
            theta: if i0 == 0.0 { f64::NAN } else { series.value / i0 },
            error_estimate: series.error_estimate / (4.0 * pi * d),
        };
        Ok(())
    })
}
