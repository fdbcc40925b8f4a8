//! Rate and transmit-power relations for a surface without a direct link and
//! with pure-LOS subsurface paths, where each subsurface contributes one
//! stream of power gain `N_t·N_r·N²/(g₁^k g₂^k)`.

use std::f64::consts::LN_10;
use std::fmt;
use std::str::FromStr;

use crate::channel::PathLossParams;
use crate::{db_to_linear, Error, Result};

/// Transmit, receive and per-subsurface array sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArraySizes {
    pub tx: usize,
    pub rx: usize,
    pub elements: usize,
}

impl ArraySizes {
    /// `N_t·N_r·N²`
    pub fn power_gain(&self) -> f64 {
        let n = self.elements as f64;
        self.tx as f64 * self.rx as f64 * n * n
    }
}

/// `Σ_k log₂(1 + P·N_r·N_t·N²/(K·g₁^k g₂^k·σ²))` with `P/K` per subsurface.
pub fn epa_rate(total_power: f64, cascaded: &[f64], arrays: ArraySizes, noise: f64) -> Result<f64> {
    let k = cascaded.len();
    if k == 0 {
        return Err(Error::param("subsurfaces", "need at least one"));
    }
    let per = total_power * arrays.power_gain() / (k as f64 * noise);
    Ok(cascaded.iter().map(|g| (per / g).log2_1p()).sum())
}

/// `K·log₂(1 + P·N_r·N_t·N²/(σ²·Σ_k g₁^k g₂^k))`, the AM-GM lower bound on
/// [`epa_rate`].
pub fn rate_lower_bound(k: usize, total_power: f64, cascaded_sum: f64, arrays: ArraySizes, noise: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::param("subsurfaces", "need at least one"));
    }
    Ok(k as f64 * (total_power * arrays.power_gain() / (noise * cascaded_sum)).log2_1p())
}

/// How the mean shadowing offset `c` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShadowingMeanMode {
    /// `c = (ln10/20)·10^{σ/5}`, as printed alongside the minimum-power result.
    Paper,
    /// `c = (ln10/20)·σ²`, the dB value of `E[10^{χ/10}]` for `χ ~ N(0, σ²)`.
    #[default]
    LognormalExact,
}

impl FromStr for ShadowingMeanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Paper),
            "lognormal-exact" => Ok(Self::LognormalExact),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for ShadowingMeanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Paper => "paper",
            Self::LognormalExact => "lognormal-exact",
        })
    }
}

pub fn shadowing_mean_db(sigma_db: f64, mode: ShadowingMeanMode) -> Result<f64> {
    if !(sigma_db >= 0.0) {
        return Err(Error::param("sigma_db", format!("{sigma_db} is not >= 0")));
    }
    Ok(match mode {
        ShadowingMeanMode::Paper => LN_10 / 20.0 * 10f64.powf(sigma_db / 5.0),
        ShadowingMeanMode::LognormalExact => LN_10 / 20.0 * sigma_db * sigma_db,
    })
}

/// `ḡ_I[dB] = Σ_{i=1,2} a_i + b_i·log₁₀(d_i) + c_i`.
pub fn gbar_i_db(to_irs: &PathLossParams, from_irs: &PathLossParams, mode: ShadowingMeanMode) -> Result<f64> {
    to_irs.validate()?;
    from_irs.validate()?;
    Ok(to_irs.median_db()
        + shadowing_mean_db(to_irs.shadowing_db, mode)?
        + from_irs.median_db()
        + shadowing_mean_db(from_irs.shadowing_db, mode)?)
}

/// [`gbar_i_db`] in linear scale.
pub fn gbar_i(to_irs: &PathLossParams, from_irs: &PathLossParams, mode: ShadowingMeanMode) -> Result<f64> {
    gbar_i_db(to_irs, from_irs, mode).map(db_to_linear)
}

/// Average transmit power that meets rate `R̄` with equal power on `K`
/// subsurface streams: `K·σ²·ḡ_I·(2^{R̄/K} − 1)/(N_r·N_t·N²)`.
pub fn min_power_epa(rate: f64, k: usize, arrays: ArraySizes, noise: f64, gbar: f64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::param("rate", format!("{rate} is not > 0")));
    }
    if k == 0 {
        return Err(Error::param("subsurfaces", "need at least one"));
    }
    let k = k as f64;
    Ok(k * noise * gbar * (rate / k).exp2_m1() / arrays.power_gain())
}

/// Power that makes [`rate_lower_bound`] equal `R̄` for the realized
/// `g₁^k g₂^k`: `σ²·Σ_k g₁^k g₂^k·(2^{R̄/K} − 1)/(N_r·N_t·N²)`.
pub fn instantaneous_power_for_rate(rate: f64, cascaded: &[f64], arrays: ArraySizes, noise: f64) -> Result<f64> {
    if cascaded.is_empty() {
        return Err(Error::param("subsurfaces", "need at least one"));
    }
    if cascaded.iter().any(|g| !(*g > 0.0)) {
        return Err(Error::param("cascaded", "gains must be > 0"));
    }
    let k = cascaded.len() as f64;
    let sum: f64 = cascaded.iter().sum();
    Ok(noise * sum * (rate / k).exp2_m1() / arrays.power_gain())
}

/// `3K(1 − 2^{−R̄/K}) − R̄`
pub fn optimal_k_equation(rate: f64, k: f64) -> f64 {
    3.0 * k * -(-rate / k).exp2_m1() - rate
}

/// Root of [`optimal_k_equation`] and the integer subsurface count it rounds to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsurfaceCount {
    pub real: f64,
    pub recommended: usize,
    /// Elements per subsurface, `M/K`, for the recommendation.
    pub elements: f64,
}

/// Solves `R̄ = 3K(1 − 2^{−R̄/K})` by bisection and picks whichever of
/// `⌊K*⌋`, `⌈K*⌉` (within `1..=M`) needs less EPA power at fixed `M = K·N`.
pub fn optimal_subsurface_count(rate: f64, total_elements: usize) -> Result<SubsurfaceCount> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::param("rate", format!("{rate} is not > 0")));
    }
    if total_elements == 0 {
        return Err(Error::param("total_elements", "must be >= 1"));
    }
    // f(K) < 0 for K ≤ R̄/3 and f(K) → R̄(3 ln 2 − 1) > 0 as K → ∞
    let (mut lo, mut hi) = (rate / 100.0, rate);
    debug_assert!(optimal_k_equation(rate, lo) < 0.0 && optimal_k_equation(rate, hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if optimal_k_equation(rate, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let real = if optimal_k_equation(rate, lo).abs() <= optimal_k_equation(rate, hi).abs() {
        lo
    } else {
        hi
    };

    let m = total_elements as f64;
    // min_power_epa with N = M/K, dropping the K-independent factor σ²ḡ_I/(N_t N_r M²)
    let relative_power = |k: usize| {
        let k = k as f64;
        k * k * k * (rate / k).exp2_m1()
    };
    let floor = (real.floor() as usize).clamp(1, total_elements);
    let ceil = (real.ceil() as usize).clamp(1, total_elements);
    let recommended = if relative_power(ceil) < relative_power(floor) { ceil } else { floor };
    Ok(SubsurfaceCount {
        real,
        recommended,
        elements: m / recommended as f64,
    })
}

/// Per-subsurface instantaneous powers `σ²·g₁^k g₂^k·SNR_k/(N_r N_t N²)`.
pub fn apa_instantaneous_powers(snr_targets: &[f64], cascaded: &[f64], arrays: ArraySizes, noise: f64) -> Result<Vec<f64>> {
    if snr_targets.len() != cascaded.len() {
        return Err(Error::LengthMismatch {
            what: "SNR targets",
            expected: cascaded.len(),
            actual: snr_targets.len(),
        });
    }
    if snr_targets.iter().any(|s| !(*s >= 0.0)) {
        return Err(Error::param("snr_targets", "must be >= 0"));
    }
    Ok(snr_targets
        .iter()
        .zip(cascaded)
        .map(|(s, g)| noise * g * s / arrays.power_gain())
        .collect())
}

/// Average APA total `σ²·ḡ_I·Σ_k SNR_k/(N_r N_t N²)`.
pub fn apa_average_power(snr_targets: &[f64], gbar: f64, arrays: ArraySizes, noise: f64) -> Result<f64> {
    if snr_targets.iter().any(|s| !(*s >= 0.0)) {
        return Err(Error::param("snr_targets", "must be >= 0"));
    }
    Ok(noise * gbar * snr_targets.iter().sum::<f64>() / arrays.power_gain())
}

trait Log2Ext {
    fn log2_1p(self) -> f64;
    fn exp2_m1(self) -> f64;
}

impl Log2Ext for f64 {
    /// `log₂(1 + x)`
    fn log2_1p(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }

    /// `2^x − 1`
    fn exp2_m1(self) -> f64 {
        (self * std::f64::consts::LN_2).exp_m1()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    const ARR: ArraySizes = ArraySizes {
        tx: 100,
        rx: 100,
        elements: 100,
    };

    fn section_v_link(d: f64) -> PathLossParams {
        PathLossParams::new(61.4, 20.0, d, 5.8).unwrap()
    }

    #[test]
    fn epa_cases() {
        assert_eq!(epa_rate(0.0, &[1e17, 2e17], ARR, 1e-11).unwrap(), 0.0);
        let single = epa_rate(1.0, &[1e17], ARR, 1e-11).unwrap();
        assert!((single - (1.0f64 + 1e8 / (1e17 * 1e-11)).log2()).abs() < 1e-12);
        assert!(epa_rate(1.0, &[], ARR, 1.0).is_err());
    }

    #[test]
    fn lower_bound_cases() {
        let g = [3e17; 4];
        let epa = epa_rate(0.5, &g, ARR, 1e-11).unwrap();
        let lb = rate_lower_bound(4, 0.5, g.iter().sum(), ARR, 1e-11).unwrap();
        assert!((epa - lb).abs() < 1e-12);

        let k1 = rate_lower_bound(1, 0.5, 7e16, ARR, 1e-11).unwrap();
        assert!((k1 - epa_rate(0.5, &[7e16], ARR, 1e-11).unwrap()).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let chi = Normal::new(0.0, 8.0).unwrap();
        for _ in 0..10_000 {
            let g: Vec<f64> = (0..5).map(|_| db_to_linear(170.0 + chi.sample(&mut rng))).collect();
            let epa = epa_rate(1.0, &g, ARR, 1e-11).unwrap();
            let lb = rate_lower_bound(5, 1.0, g.iter().sum(), ARR, 1e-11).unwrap();
            assert!(lb <= epa + 1e-12);
        }
    }

    #[test]
    fn shadowing_offsets() {
        assert_eq!(shadowing_mean_db(0.0, ShadowingMeanMode::LognormalExact).unwrap(), 0.0);
        let c = shadowing_mean_db(5.8, ShadowingMeanMode::Paper).unwrap();
        // 0.115129 · 10^1.16
        assert!((c - 1.664_124_034).abs() < 1e-8, "{c}");
        assert!(shadowing_mean_db(-1.0, ShadowingMeanMode::Paper).is_err());
        assert_eq!("paper".parse::<ShadowingMeanMode>().unwrap(), ShadowingMeanMode::Paper);
        assert_eq!(
            "lognormal".parse::<ShadowingMeanMode>(),
            Err(Error::UnknownMode("lognormal".into()))
        );
    }

    #[test]
    fn lognormal_offset_matches_sample_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let chi = Normal::new(0.0, 5.8).unwrap();
        let n = 1_000_000;
        let mean = (0..n).map(|_| db_to_linear(chi.sample(&mut rng))).sum::<f64>() / n as f64;
        let c = shadowing_mean_db(5.8, ShadowingMeanMode::LognormalExact).unwrap();
        assert!((10.0 * mean.log10() - c).abs() < 0.05);
    }

    #[test]
    fn gbar_cases() {
        let p = PathLossParams::new(0.0, 20.0, 10.0, 0.0).unwrap();
        let db = gbar_i_db(&p, &p, ShadowingMeanMode::Paper).unwrap();
        // σ = 0 still leaves c = ln10/20 in paper mode
        assert!((db - 40.0 - 2.0 * LN_10 / 20.0).abs() < 1e-12);
        let db = gbar_i_db(&p, &p, ShadowingMeanMode::LognormalExact).unwrap();
        assert!((db - 40.0).abs() < 1e-12);

        let a = section_v_link(25.08);
        let b = section_v_link(26.08);
        let total = gbar_i_db(&a, &b, ShadowingMeanMode::LognormalExact).unwrap();
        let c = shadowing_mean_db(5.8, ShadowingMeanMode::LognormalExact).unwrap();
        assert!((total - (a.median_db() + c + b.median_db() + c)).abs() < 1e-12);
    }

    #[test]
    fn min_power_cases() {
        let p1 = min_power_epa(1e-9, 3, ARR, 1e-11, 1e17).unwrap();
        assert!(p1 < 1e-3 * min_power_epa(1.0, 3, ARR, 1e-11, 1e17).unwrap());
        let small = ArraySizes { elements: 10, ..ARR };
        let ratio = min_power_epa(30.0, 5, small, 1e-11, 1e17).unwrap() / min_power_epa(30.0, 5, ARR, 1e-11, 1e17).unwrap();
        assert!((10.0 * ratio.log10() - 20.0).abs() < 1e-9);
        assert!(min_power_epa(0.0, 3, ARR, 1.0, 1.0).is_err());
    }

    #[test]
    fn instantaneous_power_meets_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chi = Normal::new(0.0, 8.2).unwrap();
        for _ in 0..1000 {
            let g: Vec<f64> = (0..5).map(|_| db_to_linear(178.0 + chi.sample(&mut rng))).collect();
            let p = instantaneous_power_for_rate(30.0, &g, ARR, 1e-11).unwrap();
            let lb = rate_lower_bound(5, p, g.iter().sum(), ARR, 1e-11).unwrap();
            assert!((lb - 30.0).abs() < 1e-9);
            assert!(epa_rate(p, &g, ARR, 1e-11).unwrap() >= 30.0 - 1e-9);
        }
        // K = 1 inverts the scalar rate formula
        let p = instantaneous_power_for_rate(6.0, &[2e17], ARR, 1e-11).unwrap();
        assert!((p - 63.0 * 2e17 * 1e-11 / 1e8).abs() < 1e-12 * p);
    }

    #[test]
    fn optimal_k_root() {
        for rate in [0.5, 3.0, 10.0, 45.0, 300.0] {
            let s = optimal_subsurface_count(rate, 1000).unwrap();
            assert!(optimal_k_equation(rate, s.real).abs() <= 1e-9, "{rate}");
        }
        let s = optimal_subsurface_count(3.0, 1000).unwrap();
        assert!(s.real > 1.0 && s.real < 2.0);
        assert!(optimal_k_equation(3.0, 1.0) < 0.0 && optimal_k_equation(3.0, 2.0) > 0.0);
    }

    #[test]
    fn optimal_k_scales_linearly() {
        // Only R̄/K enters the equation, so K*/R̄ is the same for every rate.
        let grid: Vec<f64> = (1..=60).map(|i| i as f64 * 5.0).collect();
        let ks: Vec<f64> = grid.iter().map(|&r| optimal_subsurface_count(r, 10_000).unwrap().real).collect();
        assert!(ks.windows(2).all(|w| w[1] >= w[0]));
        let x = grid[0] / ks[0];
        for (r, k) in grid.iter().zip(&ks) {
            assert!((r / k - x).abs() < 1e-9);
        }
        assert!((x - 2.451_561_963).abs() < 1e-6);
    }

    #[test]
    fn recommendation_minimizes_power() {
        let m = 1000;
        for rate in [10.0, 30.0, 45.0] {
            let s = optimal_subsurface_count(rate, m).unwrap();
            let power = |k: usize| {
                let n = m / k;
                // exact divisors only; fall back to the real-valued formula otherwise
                if n * k == m {
                    min_power_epa(rate, k, ArraySizes { elements: n, ..ARR }, 1e-11, 1e17).unwrap()
                } else {
                    let nf = m as f64 / k as f64;
                    k as f64 * 1e-11 * 1e17 * (2f64.powf(rate / k as f64) - 1.0) / (1e4 * nf * nf)
                }
            };
            let lo = s.real.floor().max(1.0) as usize;
            let hi = s.real.ceil() as usize;
            assert!(power(s.recommended) <= power(lo).min(power(hi)) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn apa_cases() {
        let g = [1e17, 3e17];
        let p = apa_instantaneous_powers(&[0.0, 0.0], &g, ARR, 1e-11).unwrap();
        assert_eq!(p, vec![0.0, 0.0]);
        assert_eq!(apa_average_power(&[0.0; 5], 1e17, ARR, 1e-11).unwrap(), 0.0);

        let rate = 30.0;
        let k = 5;
        let target = 2f64.powf(rate / k as f64) - 1.0;
        let avg = apa_average_power(&vec![target; k], 2e17, ARR, 1e-11).unwrap();
        let epa = min_power_epa(rate, k, ARR, 1e-11, 2e17).unwrap();
        assert!((avg - epa).abs() <= 1e-12 * epa);
        assert!(apa_instantaneous_powers(&[1.0], &g, ARR, 1.0).is_err());
    }
}
