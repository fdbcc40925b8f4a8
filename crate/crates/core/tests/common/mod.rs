#![allow(dead_code)]

use irs_mimo::channel::{LinkParams, PathLossParams, RiceanMix};
use irs_mimo::HALF_WAVELENGTH;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Reference link: 51 m apart, surface offset 2 m at horizontal distance `d_1`,
/// K-factors −5 dB (direct) and 5 dB (surface), three clusters everywhere.
pub fn reference_link(nt: usize, nr: usize, n: usize, k: usize, d_1: f64) -> LinkParams {
    let d1 = d_1.hypot(2.0);
    let d2 = (51.0 - d_1).hypot(2.0);
    LinkParams {
        tx_antennas: nt,
        rx_antennas: nr,
        elements_per_subsurface: n,
        subsurfaces: k,
        direct_paths: 3,
        tx_irs_paths: 3,
        irs_rx_paths: 3,
        direct_mix: RiceanMix::from_db(-5.0).unwrap(),
        tx_irs_mix: RiceanMix::from_db(5.0).unwrap(),
        irs_rx_mix: RiceanMix::from_db(5.0).unwrap(),
        direct_pathloss: PathLossParams::new(72.0, 29.2, 51.0, 8.7).unwrap(),
        tx_irs_pathloss: PathLossParams::new(61.4, 20.0, d1, 5.8).unwrap(),
        irs_rx_pathloss: PathLossParams::new(61.4, 20.0, d2, 5.8).unwrap(),
        include_direct: true,
        spacing: HALF_WAVELENGTH,
    }
}

/// 30 dBm and −85 dBm.
pub const TX_POWER: f64 = 1.0;
pub const NOISE: f64 = 3.162_277_660_168_379_5e-12;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn std_err(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (var / xs.len() as f64).sqrt()
}
