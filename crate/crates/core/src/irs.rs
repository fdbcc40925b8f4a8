//! Reflecting-surface control: phase profiles, reflection matrices, the
//! coupling coefficient `ξ = a(θ₂)ᴴ V a(φ₁)` and per-subsurface selection of
//! the path to steer towards.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::channel::{array_response, ChannelRealization};
use crate::{c64, ComplexMatrix, ComplexVector, Error, Result};

/// Phase shifts `v_1 … v_N` of one subsurface plus its amplitude `β`.
///
/// Phases are stored reduced to `[0, 2π)`. Linear profiles remember their
/// slope `Δ` (`v_n = π(n−1)Δ`).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    phases: Vec<f64>,
    amplitude: f64,
    slope: Option<f64>,
}

fn check_amplitude(amplitude: f64) -> Result<()> {
    if amplitude > 0.0 && amplitude <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("amplitude", format!("{amplitude} is outside (0, 1]")))
    }
}

impl PhaseProfile {
    pub fn new(phases: Vec<f64>, amplitude: f64) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidDimension("empty phase profile".into()));
        }
        check_amplitude(amplitude)?;
        Ok(Self {
            phases: phases.into_iter().map(|v| v.rem_euclid(TAU)).collect(),
            amplitude,
            slope: None,
        })
    }

    /// All phases zero: the surface acts as a plain mirror (`V = I`).
    pub fn zero(n: usize) -> Result<Self> {
        linear_profile(0.0, n)
    }

    /// Every phase drawn independently and uniformly on `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::new((0..n).map(|_| rng.random_range(0.0..TAU)).collect(), 1.0)
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Result<Self> {
        check_amplitude(amplitude)?;
        self.amplitude = amplitude;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn slope(&self) -> Option<f64> {
        self.slope
    }

    /// Diagonal of `V`: `β·e^{−j v_n}`.
    pub fn reflection_coefficients(&self) -> Vec<c64> {
        self.phases
            .iter()
            .map(|&v| c64::from_polar(self.amplitude, -v))
            .collect()
    }
}

/// `V = β·diag(e^{−j v_1}, …, e^{−j v_N})`
pub fn reflection_matrix(profile: &PhaseProfile) -> Result<ComplexMatrix> {
    check_amplitude(profile.amplitude)?;
    Ok(ComplexMatrix::from_diagonal(&ComplexVector::from_vec(
        profile.reflection_coefficients(),
    )))
}

/// `ξ = a(θ₂)ᴴ · V · a(φ₁)` for an incident arrival angle `φ₁` (transmitter
/// → surface) and a reflected departure angle `θ₂` (surface → receiver).
pub fn coupling(departure: f64, profile: &PhaseProfile, arrival: f64, spacing: f64) -> Result<c64> {
    let n = profile.len();
    let out = array_response(n, departure, spacing)?;
    let inc = array_response(n, arrival, spacing)?;
    Ok(out
        .as_vector()
        .iter()
        .zip(inc.as_vector().iter())
        .zip(profile.reflection_coefficients())
        .map(|((o, i), v)| o.conj() * v * i)
        .sum())
}

/// Linear profile `v_n = π(n−1)Δ`, reduced mod 2π.
pub fn linear_profile(slope: f64, n: usize) -> Result<PhaseProfile> {
    if n == 0 {
        return Err(Error::InvalidDimension("empty phase profile".into()));
    }
    // reduce (n−1)Δ mod 2 before scaling so integer slopes stay exact
    let phases = (0..n)
        .map(|k| ((k as f64 * slope).rem_euclid(2.0) * PI).rem_euclid(TAU))
        .collect();
    Ok(PhaseProfile {
        phases,
        amplitude: 1.0,
        slope: Some(slope),
    })
}

/// Slope that aligns incidence `φ₁` with reflection `θ₂`. For half-wavelength
/// spacing this is `sin φ₁ − sin θ₂`.
pub fn aligning_slope(arrival: f64, departure: f64, spacing: f64) -> f64 {
    2.0 * spacing * (arrival.sin() - departure.sin())
}

/// Phases that make `|ξ(θ₂, φ₁)| = 1`.
pub fn optimal_phases(arrival: f64, departure: f64, n: usize, spacing: f64) -> Result<PhaseProfile> {
    linear_profile(aligning_slope(arrival, departure, spacing), n)
}

/// Path pair chosen for one subsurface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSelection {
    pub subsurface: usize,
    /// Index `i₀` into the surface→receiver paths (0 = LOS).
    pub rx_path: usize,
    /// Index `j₀` into the transmitter→surface paths (0 = LOS).
    pub tx_path: usize,
    /// `ω(i₀, j₀)`, linear power.
    pub metric: f64,
    pub slope: f64,
}

/// `ω(i,j) = N_t·N_r·N²/(g₁g₂) · |β₁^j β₂^i|²`, the power of path `(i, j)` had
/// the surface been aligned to it. Never divides by the installed coupling.
pub fn selection_metric(realization: &ChannelRealization, k: usize, i: usize, j: usize) -> Result<f64> {
    let (to_irs, from_irs) = realization.subsurface(k)?;
    let b1 = to_irs.path_coefficients();
    let b2 = from_irs.path_coefficients();
    if j >= b1.len() || i >= b2.len() {
        return Err(Error::param("path index", format!("({i}, {j}) out of range")));
    }
    Ok(array_power_gain(realization, to_irs.pathloss().linear * from_irs.pathloss().linear)
        * (b1[j] * b2[i]).norm_sqr())
}

fn array_power_gain(realization: &ChannelRealization, g1g2: f64) -> f64 {
    let p = realization.params();
    let n = p.elements_per_subsurface as f64;
    p.tx_antennas as f64 * p.rx_antennas as f64 * n * n / g1g2
}

/// Strongest `(i, j)` pair of subsurface `k` by [`selection_metric`]; ties go
/// to the lexicographically smallest `(i, j)`.
pub fn select_strongest_path(realization: &ChannelRealization, k: usize) -> Result<PathSelection> {
    let (to_irs, from_irs) = realization.subsurface(k)?;
    let b1 = to_irs.path_coefficients();
    let b2 = from_irs.path_coefficients();
    let (mut best_i, mut best_j, mut best) = (0, 0, f64::NEG_INFINITY);
    for (i, x) in b2.iter().enumerate() {
        for (j, y) in b1.iter().enumerate() {
            let w = (x * y).norm_sqr();
            if w > best {
                (best_i, best_j, best) = (i, j, w);
            }
        }
    }
    let gain = array_power_gain(realization, to_irs.pathloss().linear * from_irs.pathloss().linear);
    Ok(PathSelection {
        subsurface: k,
        rx_path: best_i,
        tx_path: best_j,
        metric: gain * best,
        slope: aligning_slope(to_irs.arrival(best_j), from_irs.departure(best_i), to_irs.spacing()),
    })
}
