//! Per-trial simulation and the parallel trial runner.
//!
//! Trial `t` draws from `ChaCha8` seeded with the master seed on stream `t`,
//! so results do not depend on how trials are scheduled. Within a trial the
//! channel is drawn first and policy randomness (random phases) after it;
//! configurations that differ only in `K`, `N` or phase policy therefore
//! share their direct-link draws.

use irs_mimo::channel::{path_decomposition, sample_link_realization, sample_pathloss, ChannelRealization};
use irs_mimo::irs::{linear_profile, select_strongest_path, PhaseProfile};
use irs_mimo::linalg::singular_values;
use irs_mimo::transceiver::{
    asymptotic_rate, effective_rank, epa_rate, equal_allocation, instantaneous_power_for_rate, rate_from_gains,
    waterfilling, ArraySizes, PowerAllocation,
};
use irs_mimo::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{PhasePolicy, PowerPolicy, ScenarioConfig};
use crate::report::RateReport;
use crate::{Result, SimError};

/// Leading singular values kept per trial.
pub const SINGULAR_VALUES_KEPT: usize = 8;

/// Generator for trial (or draw) `index` under `seed`.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Everything recorded for one channel realization. Rates in bits/s/Hz,
/// powers in watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    /// SVD transceiver with waterfilling.
    pub rate_opa: f64,
    /// SVD transceiver with equal power on the leading streams.
    pub rate_epa: f64,
    /// Large-array rate from the path gains under the configured policy.
    pub rate_asymptotic: f64,
    /// Closed-form equal-power rate over the realized cascaded path losses;
    /// `None` without a surface.
    pub rate_epa_formula: Option<f64>,
    /// Instantaneous power that meets `target_rate`, when one is set.
    pub required_power: Option<f64>,
    /// Leading singular values of the aggregate channel.
    pub singular_values: Vec<f64>,
}

impl TrialOutcome {
    /// Exact rate under the given power policy.
    pub fn rate(&self, policy: PowerPolicy) -> f64 {
        match policy {
            PowerPolicy::Opa => self.rate_opa,
            PowerPolicy::Epa => self.rate_epa,
        }
    }
}

/// One profile per subsurface, following the configured policy.
pub fn phase_profiles<R: Rng + ?Sized>(
    config: &ScenarioConfig,
    realization: &ChannelRealization,
    rng: &mut R,
) -> irs_mimo::Result<Vec<PhaseProfile>> {
    let n = config.elements;
    (0..realization.subsurface_count())
        .map(|k| {
            let profile = match config.phase_policy {
                PhasePolicy::OptimalLinear => linear_profile(select_strongest_path(realization, k)?.slope, n)?,
                PhasePolicy::Zero => PhaseProfile::zero(n)?,
                PhasePolicy::Random => PhaseProfile::random(n, rng)?,
                PhasePolicy::RandomSlope => linear_profile(rng.random_range(-2.0..2.0), n)?,
            };
            profile.with_amplitude(config.reflection_amplitude)
        })
        .collect()
}

fn waterfilled_rate(gains: &[f64], total: f64, noise: f64) -> irs_mimo::Result<f64> {
    match waterfilling(gains, total, noise) {
        Ok(a) => Ok(rate_from_gains(gains, &a.powers, noise)),
        Err(Error::NoUsableStream) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Equal power over the first `streams` entries of `gains` (sorted
/// descending), zero on the rest.
fn equal_power_on_leading(gains_len: usize, streams: usize, total: f64, noise: f64) -> PowerAllocation {
    let mut a = equal_allocation(streams, total, noise);
    a.powers.resize(gains_len, 0.0);
    a
}

/// Simulates one trial of `config` (already validated).
pub fn run_trial(config: &ScenarioConfig, trial: usize) -> Result<TrialOutcome> {
    let link = config.link_params()?;
    simulate(config, &link, trial).map_err(|source| SimError::Trial { trial, source })
}

fn simulate(
    config: &ScenarioConfig,
    link: &irs_mimo::channel::LinkParams,
    trial: usize,
) -> irs_mimo::Result<TrialOutcome> {
    let mut rng = trial_rng(config.seed, trial);
    let realization = sample_link_realization(link, &mut rng)?;
    let profiles = phase_profiles(config, &realization, &mut rng)?;
    let decomposition = path_decomposition(&realization, &profiles)?;
    // ℍ rebuilt from its rank-1 paths; identical to the dense cascade product
    let channel = decomposition.channel_matrix();
    let sv = singular_values(&channel);

    let total = config.tx_power_watts();
    let noise = config.noise_power_watts();
    let rank = effective_rank(&sv);
    let gains: Vec<f64> = sv[..rank].iter().map(|s| s * s).collect();

    let rate_opa = waterfilled_rate(&gains, total, noise)?;
    let streams = config.epa_streams().min(rank);
    let rate_epa = if streams == 0 {
        0.0
    } else {
        let a = equal_allocation(streams, total, noise);
        rate_from_gains(&gains[..streams], &a.powers, noise)
    };

    let path_gains = decomposition.power_gains();
    let rate_asymptotic = match config.power_policy {
        PowerPolicy::Opa => waterfilled_rate(&path_gains, total, noise)?,
        PowerPolicy::Epa => {
            let m = config.epa_streams().min(path_gains.len());
            asymptotic_rate(&decomposition, &equal_power_on_leading(path_gains.len(), m, total, noise), noise)?
        }
    };

    let arrays = ArraySizes {
        tx: config.tx_antennas,
        rx: config.rx_antennas,
        elements: config.elements,
    };
    let cascaded = realization.cascaded_pathloss();
    let (rate_epa_formula, required_power) = if cascaded.is_empty() {
        (None, None)
    } else {
        let formula = epa_rate(total, &cascaded, arrays, noise)?;
        let power = config
            .target_rate
            .map(|r| instantaneous_power_for_rate(r, &cascaded, arrays, noise))
            .transpose()?;
        (Some(formula), power)
    };

    Ok(TrialOutcome {
        trial,
        rate_opa,
        rate_epa,
        rate_asymptotic,
        rate_epa_formula,
        required_power,
        singular_values: sv.into_iter().take(SINGULAR_VALUES_KEPT).collect(),
    })
}

fn run_trials(config: &ScenarioConfig) -> Result<Vec<TrialOutcome>> {
    let link = config.link_params()?;
    (0..config.trials)
        .into_par_iter()
        .map(|t| simulate(config, &link, t).map_err(|source| SimError::Trial { trial: t, source }))
        .collect()
}

/// Runs every trial of `config` on the global thread pool.
pub fn run_monte_carlo(config: &ScenarioConfig) -> Result<RateReport> {
    config.validate()?;
    Ok(RateReport::new(config.clone(), run_trials(config)?))
}

/// Runs every trial on a dedicated pool of `threads` workers.
pub fn run_monte_carlo_with_threads(config: &ScenarioConfig, threads: usize) -> Result<RateReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SimError::ThreadPool(e.to_string()))?;
    pool.install(|| run_monte_carlo(config))
}

/// One shadowing draw for the minimum-power experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerDraw {
    /// Instantaneous power meeting the target rate with equal allocation, W.
    pub required_power: f64,
    /// Equal-power rate obtained when transmitting at that power.
    pub achieved_rate: f64,
}

/// Draws `g₁^k g₂^k` for every subsurface `draws` times and evaluates the
/// power needed for `rate` under equal allocation. Draw `d` uses stream `d`
/// of the master seed; only shadowing is random here.
pub fn run_power_draws(config: &ScenarioConfig, rate: f64, draws: usize) -> Result<Vec<PowerDraw>> {
    let link = config.link_params()?;
    if config.subsurfaces == 0 {
        return Err(SimError::Invalid(vec!["subsurfaces: the power experiment needs K >= 1".into()]));
    }
    let arrays = ArraySizes {
        tx: config.tx_antennas,
        rx: config.rx_antennas,
        elements: config.elements,
    };
    let noise = config.noise_power_watts();
    (0..draws)
        .into_par_iter()
        .map(|d| {
            let mut rng = trial_rng(config.seed, d);
            let cascaded: Vec<f64> = (0..config.subsurfaces)
                .map(|_| {
                    let g1 = sample_pathloss(&link.tx_irs_pathloss, &mut rng).linear;
                    let g2 = sample_pathloss(&link.irs_rx_pathloss, &mut rng).linear;
                    g1 * g2
                })
                .collect();
            let eval = || -> irs_mimo::Result<PowerDraw> {
                let required_power = instantaneous_power_for_rate(rate, &cascaded, arrays, noise)?;
                let achieved_rate = epa_rate(required_power, &cascaded, arrays, noise)?;
                Ok(PowerDraw {
                    required_power,
                    achieved_rate,
                })
            };
            eval().map_err(|source| SimError::Trial { trial: d, source })
        })
        .collect()
}
