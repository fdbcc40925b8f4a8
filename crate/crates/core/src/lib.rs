//! Channel model and link optimization for a point-to-point mmWave MIMO link
//! assisted by an intelligent reflecting surface (IRS) made of `K`
//! subsurfaces of `N` passive elements each.
//!
//! The crate is split along the signal path:
//!
//! - [`channel`]: ULA steering vectors, clustered LOS/NLOS segment channels,
//!   large-scale fading, full link realizations, the aggregate channel and
//!   its virtual-path decomposition.
//! - [`irs`]: reflection matrices, coupling coefficients, optimal/linear
//!   phase profiles and strongest-path selection per subsurface.
//! - [`transceiver`]: SVD precoding/combining, waterfilling, exact and
//!   large-array rates, and the minimum-power results for pure-LOS surfaces.
//!
//! All randomness is drawn from a caller-supplied [`rand::Rng`], so every
//! result is a pure function of its inputs and the generator state.

pub mod channel;
mod error;
pub mod irs;
pub mod linalg;
pub mod transceiver;

pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix, ComplexVector};

/// Default inter-element spacing in wavelengths (`d = λ/2`).
pub const HALF_WAVELENGTH: f64 = 0.5;

/// Converts a dB value to a linear power ratio.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to dB.
#[inline]
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Converts dBm to watts: `P_W = 10^((dBm - 30) / 10)`.
#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

#[inline]
pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts) + 30.0
}
