//! Placement of the surface on a line parallel to the transmitter–receiver
//! axis, offset by `D_v`.

use crate::{Result, SimError};

/// Transmitter→surface and surface→receiver distances for a surface at
/// horizontal offset `d_1` from the transmitter:
/// `d₁ = √(D_1² + D_v²)`, `d₂ = √((D_TR − D_1)² + D_v²)`.
pub fn derive_geometry(d_tr: f64, d_v: f64, d_1: f64) -> Result<(f64, f64)> {
    let mut errs = Vec::new();
    for (name, v) in [("d_tr", d_tr), ("d_v", d_v), ("d_1", d_1)] {
        if !(v >= 0.0) || !v.is_finite() {
            errs.push(format!("{name}: {v} is not a finite distance >= 0"));
        }
    }
    if d_1 > d_tr {
        errs.push(format!("d_1: {d_1} exceeds d_tr = {d_tr}"));
    }
    if !errs.is_empty() {
        return Err(SimError::Invalid(errs));
    }
    Ok((d_1.hypot(d_v), (d_tr - d_1).hypot(d_v)))
}
