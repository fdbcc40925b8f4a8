use std::cmp::Ordering;

use super::realization::ChannelRealization;
use super::steering::array_response;
use crate::irs::{coupling, PhaseProfile};
use crate::{c64, ComplexMatrix, Result};

/// Where a virtual path comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathOrigin {
    /// Direct-link cluster `path` (0 = LOS).
    Direct { path: usize },
    /// Surface path of subsurface `subsurface` pairing surface→receiver
    /// cluster `rx_path` (`i`) with transmitter→surface cluster `tx_path` (`j`).
    Irs {
        subsurface: usize,
        rx_path: usize,
        tx_path: usize,
    },
}

/// One rank-1 term `ν · a_r(φ) · a_t(θ)ᴴ` of the aggregate channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualPath {
    pub gain: c64,
    /// Arrival azimuth at the receive array.
    pub arrival: f64,
    /// Departure azimuth at the transmit array.
    pub departure: f64,
    pub origin: PathOrigin,
}

/// The aggregate channel rewritten as `L_K` virtual paths, sorted by
/// decreasing gain magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDecomposition {
    rx: usize,
    tx: usize,
    spacing: f64,
    direct_gains: Vec<c64>,
    irs_gains: Vec<ComplexMatrix>,
    paths: Vec<VirtualPath>,
}

impl PathDecomposition {
    /// `ν_l` for the direct link (empty when the direct link is excluded).
    pub fn direct_gains(&self) -> &[c64] {
        &self.direct_gains
    }

    /// `ϑ^k_ij` of subsurface `k`, an `L₂ × L₁` matrix indexed `(i, j)`.
    pub fn irs_gains(&self, k: usize) -> Option<&ComplexMatrix> {
        self.irs_gains.get(k)
    }

    /// Paths sorted by `|ν̃_1| ≥ |ν̃_2| ≥ …`.
    pub fn paths(&self) -> &[VirtualPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// `|ν̃_l|²` in sorted order.
    pub fn power_gains(&self) -> Vec<f64> {
        self.paths.iter().map(|p| p.gain.norm_sqr()).collect()
    }

    /// `Σ_l ν̃_l · a_r(φ̃_l) · a_t(θ̃_l)ᴴ`
    pub fn channel_matrix(&self) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.rx, self.tx);
        for p in &self.paths {
            let ar = array_response(self.rx, p.arrival, self.spacing).expect("nonzero rx size");
            let at = array_response(self.tx, p.departure, self.spacing).expect("nonzero tx size");
            h.gerc(p.gain, ar.as_vector(), at.as_vector(), c64::new(1.0, 0.0));
        }
        h
    }
}

/// Computes `ν_l`, `ϑ^k_ij` and the merged sorted path list for the given
/// phase profiles. Ties in magnitude keep generation order (direct paths,
/// then subsurfaces by `(k, i, j)`).
pub fn path_decomposition(realization: &ChannelRealization, profiles: &[PhaseProfile]) -> Result<PathDecomposition> {
    realization.check_profiles(profiles)?;
    let p = realization.params();
    let (nr, nt) = (p.rx_antennas as f64, p.tx_antennas as f64);
    let n = p.elements_per_subsurface as f64;
    let mut paths = Vec::with_capacity(p.virtual_path_count());

    let direct_gains = if p.include_direct {
        let d = realization.direct();
        let array = (nr * nt / d.pathloss().linear).sqrt();
        let gains: Vec<c64> = d.path_coefficients().into_iter().map(|b| b * array).collect();
        for (l, &gain) in gains.iter().enumerate() {
            paths.push(VirtualPath {
                gain,
                arrival: d.arrival(l),
                departure: d.departure(l),
                origin: PathOrigin::Direct { path: l },
            });
        }
        gains
    } else {
        Vec::new()
    };

    let mut irs_gains = Vec::with_capacity(profiles.len());
    for (k, profile) in profiles.iter().enumerate() {
        let (to_irs, from_irs) = realization.subsurface(k)?;
        let b1 = to_irs.path_coefficients();
        let b2 = from_irs.path_coefficients();
        let g = to_irs.pathloss().linear * from_irs.pathloss().linear;
        let array = (nt * nr * n * n / g).sqrt();
        let mut gains = ComplexMatrix::zeros(b2.len(), b1.len());
        for (i, x) in b2.iter().enumerate() {
            for (j, y) in b1.iter().enumerate() {
                let xi = coupling(from_irs.departure(i), profile, to_irs.arrival(j), p.spacing)?;
                let gain = xi * x * y * array;
                gains[(i, j)] = gain;
                paths.push(VirtualPath {
                    gain,
                    arrival: from_irs.arrival(i),
                    departure: to_irs.departure(j),
                    origin: PathOrigin::Irs {
                        subsurface: k,
                        rx_path: i,
                        tx_path: j,
                    },
                });
            }
        }
        irs_gains.push(gains);
    }

    paths.sort_by(|a, b| b.gain.norm().partial_cmp(&a.gain.norm()).unwrap_or(Ordering::Equal));

    Ok(PathDecomposition {
        rx: p.rx_antennas,
        tx: p.tx_antennas,
        spacing: p.spacing,
        direct_gains,
        irs_gains,
        paths,
    })
}
