//! Clustered mmWave channel model for the direct link and the per-subsurface
//! transmitter→IRS and IRS→receiver links.

mod fading;
mod paths;
mod realization;
mod segment;
mod steering;

pub use fading::{sample_pathloss, PathLoss, PathLossParams, RiceanMix};
pub use paths::{path_decomposition, PathDecomposition, PathOrigin, VirtualPath};
pub use realization::{aggregate_channel, sample_link_realization, ChannelRealization, LinkParams};
pub use segment::{
    build_segment, los_component, scattered_component, ScatteredPath, SegmentChannel,
};
pub use steering::{array_response, dirichlet_magnitude, steering_inner_product, SteeringVector};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::c64;

/// Draws a circularly-symmetric complex Gaussian `CN(0, 1)` sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws an azimuth angle uniformly on `(-π/2, π/2)`.
pub fn uniform_azimuth<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    loop {
        let a = rng.random_range(-FRAC_PI_2..FRAC_PI_2);
        // half-open range; drop the closed endpoint
        if a > -FRAC_PI_2 {
            return a;
        }
    }
}
