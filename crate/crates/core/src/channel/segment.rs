use rand::Rng;

use super::fading::{sample_pathloss, PathLoss, PathLossParams, RiceanMix};
use super::steering::array_response;
use super::{complex_gaussian, uniform_azimuth};
use crate::linalg::outer;
use crate::{c64, ComplexMatrix, Error, Result};

/// One non-LOS cluster path: complex gain and its arrival/departure azimuths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteredPath {
    pub gain: c64,
    pub arrival: f64,
    pub departure: f64,
}

/// `√(M_r·M_t) · a_r(φ) · a_t(θ)ᴴ`
pub fn los_component(
    rx: usize,
    tx: usize,
    arrival: f64,
    departure: f64,
    spacing: f64,
) -> Result<ComplexMatrix> {
    let ar = array_response(rx, arrival, spacing)?;
    let at = array_response(tx, departure, spacing)?;
    Ok(outer(ar.as_vector(), at.as_vector()) * c64::from((rx as f64 * tx as f64).sqrt()))
}

/// `√(M_r·M_t/L) · Σ_{l=2}^{L} α^l · a_r(φ^l) · a_t(θ^l)ᴴ`, where `paths`
/// holds the `L − 1` non-LOS clusters.
pub fn scattered_component(
    rx: usize,
    tx: usize,
    path_count: usize,
    paths: &[ScatteredPath],
    spacing: f64,
) -> Result<ComplexMatrix> {
    if path_count < 2 {
        return Err(Error::NoScatteredPaths(path_count));
    }
    if paths.len() != path_count - 1 {
        return Err(Error::LengthMismatch {
            what: "scattered paths",
            expected: path_count - 1,
            actual: paths.len(),
        });
    }
    if rx == 0 || tx == 0 {
        return Err(Error::InvalidDimension(format!("{rx}x{tx} channel")));
    }
    let mut h = ComplexMatrix::zeros(rx, tx);
    for p in paths {
        let ar = array_response(rx, p.arrival, spacing)?;
        let at = array_response(tx, p.departure, spacing)?;
        h.gerc(p.gain, ar.as_vector(), at.as_vector(), c64::new(1.0, 0.0));
    }
    Ok(h * c64::from((rx as f64 * tx as f64 / path_count as f64).sqrt()))
}

/// `H = √(η̄/g)·H̄ + √(η̃/g)·H̃`
pub fn build_segment(
    mix: RiceanMix,
    pathloss: f64,
    los: &ComplexMatrix,
    scattered: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if !(pathloss > 0.0) {
        return Err(Error::param("pathloss", format!("{pathloss} is not > 0")));
    }
    if los.shape() != scattered.shape() {
        return Err(Error::InvalidDimension(format!(
            "LOS part is {:?}, scattered part is {:?}",
            los.shape(),
            scattered.shape()
        )));
    }
    let a = (mix.los_fraction() / pathloss).sqrt();
    let b = (mix.scattered_fraction() / pathloss).sqrt();
    Ok(los * c64::from(a) + scattered * c64::from(b))
}

/// One drawn point-to-point segment (direct, transmitter→subsurface or
/// subsurface→receiver). Matrices are rebuilt on demand from the stored
/// angles and gains so that realizations with large surfaces stay small.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentChannel {
    rx: usize,
    tx: usize,
    spacing: f64,
    mix: RiceanMix,
    los_arrival: f64,
    los_departure: f64,
    scattered: Vec<ScatteredPath>,
    pathloss: PathLoss,
}

impl SegmentChannel {
    pub fn new(
        (rx, tx): (usize, usize),
        spacing: f64,
        mix: RiceanMix,
        (los_arrival, los_departure): (f64, f64),
        scattered: Vec<ScatteredPath>,
        pathloss: PathLoss,
    ) -> Result<Self> {
        if rx == 0 || tx == 0 {
            return Err(Error::InvalidDimension(format!("{rx}x{tx} channel")));
        }
        if !(pathloss.linear > 0.0) {
            return Err(Error::param("pathloss", "must be > 0"));
        }
        Ok(Self {
            rx,
            tx,
            spacing,
            mix,
            los_arrival,
            los_departure,
            scattered,
            pathloss,
        })
    }

    /// Draws angles uniformly on `(−π/2, π/2)`, `CN(0,1)` cluster gains and
    /// one shadowing term. Draw order: LOS arrival, LOS departure, then
    /// `(gain, arrival, departure)` per cluster, then shadowing.
    pub fn sample<R: Rng + ?Sized>(
        (rx, tx): (usize, usize),
        path_count: usize,
        mix: RiceanMix,
        pathloss: &PathLossParams,
        spacing: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if path_count == 0 {
            return Err(Error::param("path_count", "must be >= 1"));
        }
        let los = (uniform_azimuth(rng), uniform_azimuth(rng));
        let scattered = (1..path_count)
            .map(|_| ScatteredPath {
                gain: complex_gaussian(rng),
                arrival: uniform_azimuth(rng),
                departure: uniform_azimuth(rng),
            })
            .collect();
        let g = sample_pathloss(pathloss, rng);
        Self::new((rx, tx), spacing, mix, los, scattered, g)
    }

    pub fn rx_size(&self) -> usize {
        self.rx
    }

    pub fn tx_size(&self) -> usize {
        self.tx
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn mix(&self) -> RiceanMix {
        self.mix
    }

    /// Total path count `L` including the LOS path.
    pub fn path_count(&self) -> usize {
        self.scattered.len() + 1
    }

    pub fn los_angles(&self) -> (f64, f64) {
        (self.los_arrival, self.los_departure)
    }

    pub fn scattered_paths(&self) -> &[ScatteredPath] {
        &self.scattered
    }

    pub fn pathloss(&self) -> PathLoss {
        self.pathloss
    }

    /// Arrival angle of path `l` (0 = LOS).
    pub fn arrival(&self, l: usize) -> f64 {
        if l == 0 {
            self.los_arrival
        } else {
            self.scattered[l - 1].arrival
        }
    }

    /// Departure angle of path `l` (0 = LOS).
    pub fn departure(&self, l: usize) -> f64 {
        if l == 0 {
            self.los_departure
        } else {
            self.scattered[l - 1].departure
        }
    }

    /// Per-path amplitude coefficients without array gain or path loss:
    /// `√η̄` for the LOS path, `√(η̃/L)·α^l` for cluster `l ≥ 2`.
    pub fn path_coefficients(&self) -> Vec<c64> {
        let l = self.path_count() as f64;
        let scat = (self.mix.scattered_fraction() / l).sqrt();
        std::iter::once(c64::from(self.mix.los_fraction().sqrt()))
            .chain(self.scattered.iter().map(|p| p.gain * scat))
            .collect()
    }

    pub fn los_matrix(&self) -> ComplexMatrix {
        los_component(self.rx, self.tx, self.los_arrival, self.los_departure, self.spacing)
            .expect("dimensions validated at construction")
    }

    /// Scattered part `H̃`; all zeros when `L = 1`.
    pub fn scattered_matrix(&self) -> ComplexMatrix {
        match scattered_component(
            self.rx,
            self.tx,
            self.path_count(),
            &self.scattered,
            self.spacing,
        ) {
            Ok(h) => h,
            Err(Error::NoScatteredPaths(_)) => ComplexMatrix::zeros(self.rx, self.tx),
            Err(e) => unreachable!("{e}"),
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        build_segment(
            self.mix,
            self.pathloss.linear,
            &self.los_matrix(),
            &self.scattered_matrix(),
        )
        .expect("components share dimensions")
    }
}
