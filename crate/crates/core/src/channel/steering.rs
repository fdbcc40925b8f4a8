use std::f64::consts::PI;

use crate::{c64, ComplexVector, Error, Result};

/// Normalized response of an `M`-element uniform linear array towards
/// azimuth `angle`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    angle: f64,
    spacing: f64,
    entries: ComplexVector,
}

impl SteeringVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Element spacing in wavelengths.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn as_vector(&self) -> &ComplexVector {
        &self.entries
    }

    pub fn into_vector(self) -> ComplexVector {
        self.entries
    }
}

/// `a(φ) = M^{-1/2} [1, e^{j2π s sinφ}, …, e^{j2π(M-1) s sinφ}]ᵀ` with `s = d/λ`.
pub fn array_response(m: usize, angle: f64, spacing: f64) -> Result<SteeringVector> {
    if m == 0 {
        return Err(Error::InvalidDimension("array with zero elements".into()));
    }
    let step = 2.0 * PI * spacing * angle.sin();
    let scale = 1.0 / (m as f64).sqrt();
    let entries = ComplexVector::from_iterator(
        m,
        (0..m).map(|n| c64::from_polar(scale, step * n as f64)),
    );
    Ok(SteeringVector {
        angle,
        spacing,
        entries,
    })
}

/// `v1ᴴ v2`.
pub fn steering_inner_product(v1: &SteeringVector, v2: &SteeringVector) -> Result<c64> {
    if v1.len() != v2.len() {
        return Err(Error::LengthMismatch {
            what: "steering vectors",
            expected: v1.len(),
            actual: v2.len(),
        });
    }
    Ok(v1.entries.dotc(&v2.entries))
}

/// `|sin(Mx) / (M sin x)|`, the normalized Dirichlet kernel, with the
/// removable singularities (`sin x = 0`) evaluated as 1.
///
/// For two length-`M` steering vectors with spacing `s` and
/// `δ = sinφ₂ − sinφ₁`, `|a(φ₁)ᴴ a(φ₂)| = dirichlet_magnitude(M, π s δ)`.
pub fn dirichlet_magnitude(m: usize, x: f64) -> f64 {
    let den = (m as f64) * x.sin();
    if den.abs() < 1e-300 || x.sin().abs() < 1e-15 {
        return 1.0;
    }
    ((m as f64 * x).sin() / den).abs()
}
