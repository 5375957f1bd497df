//! Casimir interaction between a spherical and a planar plasma sheet.
//!
//! Three routes to the energy are provided:
//!
//! * [`energy::casimir_energy`]: the exact trace-log (TGTG) formula, integrated
//!   over imaginary wavenumber with the round-trip matrix assembled per
//!   azimuthal index;
//! * [`pfa::pfa_energy`]: the proximity force approximation built from the
//!   plane-plane Lifshitz energy;
//! * [`asymptotics`]: the small-separation expansion, leading term plus the
//!   first correction beyond PFA and the ratio `theta`.
//!
//! Lengths are unit-free; energies are returned in units of `hbar c / length`
//! together with the dimensionless `E d^2 / (hbar c R)`.

// `!(x > 0.0)` also rejects NaN; index loops mirror the matrix formulas
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod asymptotics;
pub mod cli;
pub mod energy;
pub mod error;
pub mod pfa;
pub mod quadrature;
pub mod roundtrip;
pub mod scattering;
pub mod specfun;

pub use error::{Error, Result};
pub use scattering::{Plasma, PlaneSheet, Polarization, SphereSheet};
