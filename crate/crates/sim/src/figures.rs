//! Figure sweeps. Each figure starts from a fixed base scenario (the
//! reference setup plus the figure's own settings), applies user overrides,
//! then sweeps its x-variable; overrides of the swept fields are replaced by
//! the sweep values.
//!
//! | figure | x     | curves                                            |
//! |--------|-------|---------------------------------------------------|
//! | fig2   | `N`   | `\|ξ\|²` for optimal, zero, random, random-slope  |
//! | fig4   | `N_t` | σ₁, σ₆, σ₇ of the aggregate channel               |
//! | fig5   | `N_t` | simulated and asymptotic rate for `D_1` ∈ {2,25,45} |
//! | fig6   | `N_t` | rate for `N` ∈ {10,100,1000} and without surface  |
//! | fig7   | `N`   | optimal-linear and zero phases for `K` ∈ {1,3,6}  |
//! | fig8   | `K`   | OPA and EPA for `N` ∈ {10,100,200,1000}           |
//! | fig9   | `N`   | simulated/analytic power and achieved rate, `R̄` ∈ {15,30,45} |

use std::fmt::{self, Write as _};
use std::str::FromStr;

use irs_mimo::channel::uniform_azimuth;
use irs_mimo::irs::{coupling, linear_profile, optimal_phases, PhaseProfile};
use irs_mimo::transceiver::{gbar_i, min_power_epa, ArraySizes};
use rand::Rng;

use crate::config::{KFactorDb, PhasePolicy, ScenarioConfig};
use crate::montecarlo::{run_monte_carlo, run_power_draws, trial_rng};
use crate::report::Stats;
use crate::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureName {
    Fig2,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl FigureName {
    pub const ALL: [FigureName; 7] = [
        Self::Fig2,
        Self::Fig4,
        Self::Fig5,
        Self::Fig6,
        Self::Fig7,
        Self::Fig8,
        Self::Fig9,
    ];

    pub fn x_label(self) -> &'static str {
        match self {
            Self::Fig2 | Self::Fig7 | Self::Fig9 => "N",
            Self::Fig4 | Self::Fig5 | Self::Fig6 => "N_t",
            Self::Fig8 => "K",
        }
    }

    /// Scenario before overrides and sweeps.
    pub fn base_config(self) -> ScenarioConfig {
        match self {
            Self::Fig2 => ScenarioConfig::reference(64, 36, 1000, 1),
            Self::Fig4 => {
                let mut c = ScenarioConfig::reference(112, 82, 300, 3);
                c.direct_k_factor = KFactorDb(5.0);
                c.d_1 = 15.0;
                c
            }
            Self::Fig5 => ScenarioConfig::reference(64, 36, 100, 3),
            Self::Fig6 => ScenarioConfig::reference(64, 36, 100, 3),
            Self::Fig7 => {
                let mut c = ScenarioConfig::reference(64, 36, 500, 3);
                c.d_1 = 5.0;
                c
            }
            Self::Fig8 => {
                let mut c = ScenarioConfig::reference(100, 100, 100, 5);
                c.d_1 = 25.0;
                c.include_direct = false;
                c.tx_irs_k_factor = KFactorDb::LOS;
                c.irs_rx_k_factor = KFactorDb::LOS;
                c
            }
            Self::Fig9 => {
                let mut c = Self::Fig8.base_config();
                c.trials = 10_000;
                c
            }
        }
    }
}

impl FromStr for FigureName {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| SimError::UnknownFigure(s.to_string()))
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Self::Fig2 => 2,
            Self::Fig4 => 4,
            Self::Fig5 => 5,
            Self::Fig6 => 6,
            Self::Fig7 => 7,
            Self::Fig8 => 8,
            Self::Fig9 => 9,
        };
        write!(f, "fig{n}")
    }
}

/// Grid of `N_t` values with `N_r` rising linearly from `nr0` to `nr1`.
fn coupled_arrays(nt: &[usize], nr0: usize, nr1: usize) -> Vec<(usize, usize)> {
    let (nt0, nt1) = (nt[0] as f64, nt[nt.len() - 1] as f64);
    nt.iter()
        .map(|&t| {
            let r = nr0 as f64 + (t as f64 - nt0) * (nr1 - nr0) as f64 / (nt1 - nt0);
            (t, r.round() as usize)
        })
        .collect()
}

/// `(N_t, N_r)` for fig4: `N_t` 32→112 with `N_r` 32→82.
pub fn fig4_arrays() -> Vec<(usize, usize)> {
    coupled_arrays(&[32, 48, 64, 80, 96, 112], 32, 82)
}

/// `(N_t, N_r)` for fig5 and fig6: `N_t` 8→64 with `N_r` 8→36.
pub fn fig5_arrays() -> Vec<(usize, usize)> {
    coupled_arrays(&[8, 16, 24, 32, 40, 48, 56, 64], 8, 36)
}

pub const FIG2_ELEMENTS: [usize; 7] = [10, 20, 50, 100, 200, 500, 1000];
pub const FIG5_DISTANCES: [f64; 3] = [2.0, 25.0, 45.0];
pub const FIG6_ELEMENTS: [usize; 3] = [10, 100, 1000];
pub const FIG7_ELEMENTS: [usize; 10] = [50, 100, 150, 200, 250, 300, 350, 400, 450, 500];
pub const FIG7_SUBSURFACES: [usize; 3] = [1, 3, 6];
pub const FIG8_ELEMENTS: [usize; 4] = [10, 100, 200, 1000];
pub const FIG9_ELEMENTS: [usize; 10] = [10, 20, 30, 40, 50, 60, 70, 80, 90, 100];
pub const FIG9_RATES: [f64; 3] = [15.0, 30.0, 45.0];

#[derive(Debug, Clone, PartialEq)]
pub struct FigureRow {
    pub x: f64,
    pub curve: String,
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub name: FigureName,
    /// Scenario after overrides, before the sweep.
    pub config: ScenarioConfig,
    pub rows: Vec<FigureRow>,
}

impl FigureData {
    fn push(&mut self, x: f64, curve: impl Into<String>, samples: &[f64]) {
        let s = Stats::from_samples(samples).expect("at least one trial");
        self.rows.push(FigureRow {
            x,
            curve: curve.into(),
            mean: s.mean,
            stderr: s.stderr,
            trials: s.count,
        });
    }

    /// Rows of one curve in x order.
    pub fn curve(&self, name: &str) -> Vec<&FigureRow> {
        self.rows.iter().filter(|r| r.curve == name).collect()
    }

    /// The row at `x` on curve `name`.
    pub fn at(&self, name: &str, x: f64) -> Option<&FigureRow> {
        self.rows.iter().find(|r| r.curve == name && r.x == x)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{},curve,mean,stderr,trials\n", self.name.x_label());
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.x, r.curve, r.mean, r.stderr, r.trials);
        }
        out
    }
}

/// Runs figure `name` with `key=value` overrides on its base scenario.
pub fn figure_command<S: AsRef<str>>(name: FigureName, overrides: &[S]) -> Result<FigureData> {
    let config = name.base_config().with_overrides(overrides)?;
    let mut data = FigureData {
        name,
        config: config.clone(),
        rows: Vec::new(),
    };
    match name {
        FigureName::Fig2 => fig2(&config, &mut data)?,
        FigureName::Fig4 => fig4(&config, &mut data)?,
        FigureName::Fig5 => fig5(&config, &mut data)?,
        FigureName::Fig6 => fig6(&config, &mut data)?,
        FigureName::Fig7 => fig7(&config, &mut data)?,
        FigureName::Fig8 => fig8(&config, &mut data)?,
        FigureName::Fig9 => fig9(&config, &mut data)?,
    }
    Ok(data)
}

fn fig2(base: &ScenarioConfig, data: &mut FigureData) -> Result<()> {
    let curves = [
        PhasePolicy::OptimalLinear,
        PhasePolicy::Zero,
        PhasePolicy::Random,
        PhasePolicy::RandomSlope,
    ];
    for &n in &FIG2_ELEMENTS {
        let mut samples = vec![Vec::with_capacity(base.trials); curves.len()];
        for d in 0..base.trials {
            let mut rng = trial_rng(base.seed, d);
            let arrival = uniform_azimuth(&mut rng);
            let departure = uniform_azimuth(&mut rng);
            for (policy, out) in curves.iter().zip(samples.iter_mut()) {
                let profile = match policy {
                    PhasePolicy::OptimalLinear => optimal_phases(arrival, departure, n, base.spacing)?,
                    PhasePolicy::Zero => PhaseProfile::zero(n)?,
                    PhasePolicy::Random => PhaseProfile::random(n, &mut rng)?,
                    PhasePolicy::RandomSlope => linear_profile(rng.random_range(-2.0..2.0), n)?,
                };
                out.push(coupling(departure, &profile, arrival, base.spacing)?.norm_sqr());
            }
        }
        for (policy, s) in curves.iter().zip(&samples) {
            data.push(n as f64, policy.to_string(), s);
        }
    }
    Ok(())
}

fn fig4(base: &ScenarioConfig, data: &mut FigureData) -> Result<()> {
    for (nt, nr) in fig4_arrays() {
        let mut c = base.clone();
        c.tx_antennas = nt;
        c.rx_antennas = nr;
        let r = run_monte_carlo(&c)?;
        for l in [1usize, 6, 7] {
            let sv: Vec<f64> = r.trials.iter().map(|t| t.singular_values.get(l - 1).copied().unwrap_or(0.0)).collect();
            data.push(nt as f64, format!("sigma{l}"), &sv);
        }
    }
    Ok(())
}

fn fig5(base: &ScenarioConfig, data: &mut FigureData) -> Result<()> {
    for (nt, nr) in fig5_arrays() {
        for d1 in FIG5_DISTANCES {
            let mut c = base.clone();
            c.tx_antennas = nt;
            c.rx_antennas = nr;
            c.d_1 = d1;
            let r = run_monte_carlo(&c)?;
            let sim: Vec<f64> = r.trials.iter().map(|t| t.rate(c.power_policy)).collect();
            let asym: Vec<f64> = r.trials.iter().map(|t| t.rate_asymptotic).collect();
            data.push(nt as f64, format!("sim-D1={d1}"), &sim);
            data.push(nt as f64, format!("analytic-D1={d1}"), &asym);
        }
    }
    Ok(())
}

fn fig6(base: &ScenarioConfig, data: &mut FigureData) -> Result<()> {
    for (nt, nr) in fig5_arrays() {
        let mut c = base.clone();
        c.tx_antennas = nt;
        c.rx_antennas = nr;
        for n in FIG6_ELEMENTS {
            c.elements = n;
            let r = run_monte_carlo(&c)?;
            data.push(nt as f64, format!("N={n}"), &rates(&r));
        }
        let mut none = c.clone();
        none.subsurfaces = 0;
        none.include_direct = true;
        let r = run_monte_carlo(&none)?;
        data.push(nt as f64, "no-IRS", &rates(&r));
    }
    Ok(())
}

fn fig7(base: &ScenarioConfig, data: &mut FigureData) -> Result<()> {
    for n in FIG7_ELEMENTS {
        for k in FIG7_SUBSURFACES {
            for policy in [PhasePolicy::OptimalLinear, PhasePolicy::Zero] {
                let mut c = base.clone();
                c.elements = n;
                c.subsurfaces = k;
                c.phase_policy = policy;
                let r = run_monte_carlo(&c)?;
                let label = if policy == PhasePolicy::Zero { "zero" } else { "optimal" };
                data.push(n as f64, format!("{label}-K={k}"), &rates(&r));
            }
        }
    }
    Ok(())
}

fn fig8(base: &ScenarioConfig, data: &mut FigureData) -> Result<()> {
    for k in 1..=10usize {
        for n in FIG8_ELEMENTS {
            let mut c = base.clone();
            c.subsurfaces = k;
            c.elements = n;
            let r = run_monte_carlo(&c)?;
            let opa: Vec<f64> = r.trials.iter().map(|t| t.rate_opa).collect();
            let epa: Vec<f64> = r.trials.iter().map(|t| t.rate_epa).collect();
            data.push(k as f64, format!("opa-N={n}"), &opa);
            data.push(k as f64, format!("epa-N={n}"), &epa);
        }
    }
    Ok(())
}

fn fig9(base: &ScenarioConfig, data: &mut FigureData) -> Result<()> {
    let link = base.link_params()?;
    let gbar = gbar_i(&link.tx_irs_pathloss, &link.irs_rx_pathloss, base.shadowing_mode.0)?;
    for n in FIG9_ELEMENTS {
        let mut c = base.clone();
        c.elements = n;
        let arrays = ArraySizes {
            tx: c.tx_antennas,
            rx: c.rx_antennas,
            elements: n,
        };
        for rate in FIG9_RATES {
            let draws = run_power_draws(&c, rate, c.trials)?;
            let power: Vec<f64> = draws.iter().map(|d| d.required_power).collect();
            let achieved: Vec<f64> = draws.iter().map(|d| d.achieved_rate).collect();
            let analytic = min_power_epa(rate, c.subsurfaces, arrays, c.noise_power_watts(), gbar)?;
            data.push(n as f64, format!("sim-R={rate}"), &power);
            data.push(n as f64, format!("analytic-R={rate}"), &[analytic]);
            data.push(n as f64, format!("rate-R={rate}"), &achieved);
        }
    }
    Ok(())
}

fn rates(r: &crate::RateReport) -> Vec<f64> {
    r.trials.iter().map(|t| t.rate(r.config.power_policy)).collect()
}
