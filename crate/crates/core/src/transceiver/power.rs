use crate::{Error, Result};

/// Per-stream transmit powers with the budget and noise they were made for.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    /// `p_l` in watts.
    pub powers: Vec<f64>,
    /// Budget `P` in watts.
    pub total: f64,
    /// Noise power `σ_n²` in watts.
    pub noise: f64,
    /// Water level `μ` when the allocation came from waterfilling.
    pub water_level: Option<f64>,
}

impl PowerAllocation {
    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn active_streams(&self) -> usize {
        self.powers.iter().filter(|&&p| p > 0.0).count()
    }
}

/// `P/m` on each of `m` streams.
pub fn equal_allocation(streams: usize, total: f64, noise: f64) -> PowerAllocation {
    let p = if streams == 0 { 0.0 } else { total / streams as f64 };
    PowerAllocation {
        powers: vec![p; streams],
        total,
        noise,
        water_level: None,
    }
}

/// Waterfilling over channel power gains `λ_l²`: `p_l = max(0, μ − σ²/λ_l²)`
/// with `Σ p_l = P`.
///
/// The gains are sorted and, for each active-set size `m`, the level
/// `μ_m = (P + Σ_{l≤m} σ²/λ_l²)/m` is computed in closed form; the largest
/// `m` with `μ_m` above the `m`-th inverse gain is optimal.
pub fn waterfilling(gains: &[f64], total: f64, noise: f64) -> Result<PowerAllocation> {
    if gains.iter().any(|g| !(*g >= 0.0)) {
        return Err(Error::param("gains", "must all be >= 0"));
    }
    if !(total > 0.0) {
        return Err(Error::param("total", format!("{total} is not > 0")));
    }
    if !(noise > 0.0) {
        return Err(Error::param("noise", format!("{noise} is not > 0")));
    }
    let mut order: Vec<usize> = (0..gains.len()).filter(|&i| gains[i] > 0.0).collect();
    if order.is_empty() {
        return Err(Error::NoUsableStream);
    }
    order.sort_by(|&a, &b| gains[b].total_cmp(&gains[a]));
    let floors: Vec<f64> = order.iter().map(|&i| noise / gains[i]).collect();

    let mut level = total + floors[0];
    let mut prefix = 0.0;
    for (m, &floor) in floors.iter().enumerate() {
        prefix += floor;
        let mu = (total + prefix) / (m + 1) as f64;
        if mu > floor {
            level = mu;
        } else {
            break;
        }
    }

    let powers = gains
        .iter()
        .map(|&g| if g > 0.0 { (level - noise / g).max(0.0) } else { 0.0 })
        .collect();
    Ok(PowerAllocation {
        powers,
        total,
        noise,
        water_level: Some(level),
    })
}
