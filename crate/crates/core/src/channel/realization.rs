use rand::Rng;

use super::fading::{PathLossParams, RiceanMix};
use super::segment::SegmentChannel;
use crate::irs::PhaseProfile;
use crate::linalg::scale_columns;
use crate::{c64, ComplexMatrix, Error, Result};

/// Physical link description: array sizes, cluster counts, Ricean mixes and
/// path-loss models for the three segment types. Every subsurface shares the
/// transmitter→surface and surface→receiver models.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkParams {
    pub tx_antennas: usize,
    pub rx_antennas: usize,
    /// Reflecting elements per subsurface, `N`.
    pub elements_per_subsurface: usize,
    /// Number of subsurfaces, `K` (0 disables the surface).
    pub subsurfaces: usize,
    pub direct_paths: usize,
    pub tx_irs_paths: usize,
    pub irs_rx_paths: usize,
    pub direct_mix: RiceanMix,
    pub tx_irs_mix: RiceanMix,
    pub irs_rx_mix: RiceanMix,
    pub direct_pathloss: PathLossParams,
    pub tx_irs_pathloss: PathLossParams,
    pub irs_rx_pathloss: PathLossParams,
    /// When false the direct segment is still drawn but left out of the
    /// aggregate channel and its path decomposition.
    pub include_direct: bool,
    /// Element spacing in wavelengths for every array.
    pub spacing: f64,
}

impl LinkParams {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("tx_antennas", self.tx_antennas),
            ("rx_antennas", self.rx_antennas),
            ("elements_per_subsurface", self.elements_per_subsurface),
            ("direct_paths", self.direct_paths),
            ("tx_irs_paths", self.tx_irs_paths),
            ("irs_rx_paths", self.irs_rx_paths),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::param(name, "must be >= 1"));
            }
        }
        if !(self.spacing > 0.0) {
            return Err(Error::param("spacing", "must be > 0"));
        }
        self.direct_pathloss.validate()?;
        self.tx_irs_pathloss.validate()?;
        self.irs_rx_pathloss.validate()?;
        Ok(())
    }

    /// Number of virtual paths `L_K` the aggregate channel decomposes into.
    pub fn virtual_path_count(&self) -> usize {
        let direct = if self.include_direct { self.direct_paths } else { 0 };
        direct + self.subsurfaces * self.tx_irs_paths * self.irs_rx_paths
    }
}

/// All random quantities of one channel draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    params: LinkParams,
    direct: SegmentChannel,
    tx_irs: Vec<SegmentChannel>,
    irs_rx: Vec<SegmentChannel>,
}

impl ChannelRealization {
    pub fn params(&self) -> &LinkParams {
        &self.params
    }

    /// Transmitter→receiver segment, `N_r × N_t`.
    pub fn direct(&self) -> &SegmentChannel {
        &self.direct
    }

    /// `(H_TI^k, H_IR^k)`, sized `N × N_t` and `N_r × N`.
    pub fn subsurface(&self, k: usize) -> Result<(&SegmentChannel, &SegmentChannel)> {
        match (self.tx_irs.get(k), self.irs_rx.get(k)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::param(
                "subsurface",
                format!("index {k} with {} subsurfaces", self.tx_irs.len()),
            )),
        }
    }

    pub fn subsurface_count(&self) -> usize {
        self.tx_irs.len()
    }

    /// Realized `g₁^k·g₂^k` for every subsurface.
    pub fn cascaded_pathloss(&self) -> Vec<f64> {
        self.tx_irs
            .iter()
            .zip(&self.irs_rx)
            .map(|(a, b)| a.pathloss().linear * b.pathloss().linear)
            .collect()
    }

    pub(crate) fn check_profiles(&self, profiles: &[PhaseProfile]) -> Result<()> {
        if profiles.len() != self.subsurface_count() {
            return Err(Error::LengthMismatch {
                what: "phase profiles",
                expected: self.subsurface_count(),
                actual: profiles.len(),
            });
        }
        for p in profiles {
            if p.len() != self.params.elements_per_subsurface {
                return Err(Error::LengthMismatch {
                    what: "phase profile elements",
                    expected: self.params.elements_per_subsurface,
                    actual: p.len(),
                });
            }
        }
        Ok(())
    }
}

/// Draws the direct segment first, then `(H_TI^k, H_IR^k)` for each
/// subsurface in order, so realizations that differ only in `K` or `N`
/// share their direct link under the same generator state.
pub fn sample_link_realization<R: Rng + ?Sized>(
    params: &LinkParams,
    rng: &mut R,
) -> Result<ChannelRealization> {
    params.validate()?;
    let p = params;
    let direct = SegmentChannel::sample(
        (p.rx_antennas, p.tx_antennas),
        p.direct_paths,
        p.direct_mix,
        &p.direct_pathloss,
        p.spacing,
        rng,
    )?;
    let mut tx_irs = Vec::with_capacity(p.subsurfaces);
    let mut irs_rx = Vec::with_capacity(p.subsurfaces);
    for _ in 0..p.subsurfaces {
        tx_irs.push(SegmentChannel::sample(
            (p.elements_per_subsurface, p.tx_antennas),
            p.tx_irs_paths,
            p.tx_irs_mix,
            &p.tx_irs_pathloss,
            p.spacing,
            rng,
        )?);
        irs_rx.push(SegmentChannel::sample(
            (p.rx_antennas, p.elements_per_subsurface),
            p.irs_rx_paths,
            p.irs_rx_mix,
            &p.irs_rx_pathloss,
            p.spacing,
            rng,
        )?);
    }
    Ok(ChannelRealization {
        params: params.clone(),
        direct,
        tx_irs,
        irs_rx,
    })
}

/// `ℍ = Σ_k H_IR^k · V^k · H_TI^k + H_TR`, evaluated with dense products.
pub fn aggregate_channel(realization: &ChannelRealization, profiles: &[PhaseProfile]) -> Result<ComplexMatrix> {
    realization.check_profiles(profiles)?;
    let p = realization.params();
    let mut h = if p.include_direct {
        realization.direct.matrix()
    } else {
        ComplexMatrix::zeros(p.rx_antennas, p.tx_antennas)
    };
    for ((to_irs, from_irs), profile) in realization.tx_irs.iter().zip(&realization.irs_rx).zip(profiles) {
        let mut hv = from_irs.matrix();
        scale_columns(&mut hv, &profile.reflection_coefficients());
        h.gemm(c64::new(1.0, 0.0), &hv, &to_irs.matrix(), c64::new(1.0, 0.0));
    }
    Ok(h)
}
