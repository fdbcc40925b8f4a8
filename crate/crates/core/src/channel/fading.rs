use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::{db_to_linear, Error, Result};

/// Split of a segment's power between its LOS and scattered parts.
///
/// `k_factor` is the linear Ricean factor `η ≥ 0`; `f64::INFINITY` encodes a
/// pure-LOS link (no scattered power at all).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiceanMix {
    k_factor: f64,
}

impl RiceanMix {
    pub fn new(k_factor: f64) -> Result<Self> {
        if k_factor.is_nan() || k_factor < 0.0 {
            return Err(Error::param("k_factor", format!("{k_factor} is not >= 0")));
        }
        Ok(Self { k_factor })
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::new(db_to_linear(db))
    }

    /// Blocked LOS (`η = 0`).
    pub fn nlos() -> Self {
        Self { k_factor: 0.0 }
    }

    pub fn pure_los() -> Self {
        Self {
            k_factor: f64::INFINITY,
        }
    }

    pub fn k_factor(&self) -> f64 {
        self.k_factor
    }

    pub fn is_pure_los(&self) -> bool {
        self.k_factor.is_infinite()
    }

    /// `η̄ = η / (1 + η)`
    pub fn los_fraction(&self) -> f64 {
        if self.is_pure_los() {
            1.0
        } else {
            self.k_factor / (1.0 + self.k_factor)
        }
    }

    /// `η̃ = 1 / (1 + η)`
    pub fn scattered_fraction(&self) -> f64 {
        if self.is_pure_los() {
            0.0
        } else {
            1.0 / (1.0 + self.k_factor)
        }
    }
}

/// Log-distance path loss with lognormal shadowing:
/// `g[dB] = a + b·log₁₀(d) + χ`, `χ ~ N(0, σ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams {
    /// Intercept `a` in dB.
    pub intercept_db: f64,
    /// Slope `b` in dB per decade of distance.
    pub slope_db: f64,
    /// Link distance in meters.
    pub distance: f64,
    /// Shadowing standard deviation `σ` in dB.
    pub shadowing_db: f64,
}

impl PathLossParams {
    pub fn new(intercept_db: f64, slope_db: f64, distance: f64, shadowing_db: f64) -> Result<Self> {
        let p = Self {
            intercept_db,
            slope_db,
            distance,
            shadowing_db,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distance > 0.0) || !self.distance.is_finite() {
            return Err(Error::param("distance", format!("{} is not > 0", self.distance)));
        }
        if !(self.shadowing_db >= 0.0) {
            return Err(Error::param(
                "shadowing_db",
                format!("{} is not >= 0", self.shadowing_db),
            ));
        }
        Ok(())
    }

    /// Path loss without shadowing, `a + b·log₁₀(d)`.
    pub fn median_db(&self) -> f64 {
        self.intercept_db + self.slope_db * self.distance.log10()
    }

    pub fn with_distance(self, distance: f64) -> Self {
        Self { distance, ..self }
    }
}

/// One drawn large-scale attenuation. `linear` is a power ratio; channel
/// amplitudes scale by `1/√linear`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    pub db: f64,
    pub linear: f64,
}

impl PathLoss {
    pub fn from_db(db: f64) -> Self {
        Self {
            db,
            linear: db_to_linear(db),
        }
    }
}

pub fn sample_pathloss<R: Rng + ?Sized>(params: &PathLossParams, rng: &mut R) -> PathLoss {
    let chi = if params.shadowing_db > 0.0 {
        Normal::new(0.0, params.shadowing_db)
            .expect("validated shadowing std")
            .sample(rng)
    } else {
        0.0
    };
    PathLoss::from_db(params.median_db() + chi)
}
