//! Special functions used by the scattering, round-trip and asymptotic modules.
//!
//! All functions are pure; nothing here holds global state.

mod bessel;
mod dilog;
mod legendre;

pub use bessel::{bessel_half, BesselLadder, ScaledBessel};
pub use dilog::dilog;
pub use legendre::{legendre_p, NormalizedLegendre};
