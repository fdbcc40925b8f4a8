//! Scenario configuration.
//!
//! Configurations are TOML documents. Four keys are required (`tx_antennas`,
//! `rx_antennas`, `elements`, `subsurfaces`); everything else defaults to the
//! reference setup (51 m link, 2 m surface offset, 30 dBm transmit power,
//! −85 dBm noise, three clusters per segment). Quantities may carry a unit
//! suffix, which is checked and stripped:
//!
//! ```toml
//! tx_antennas = 64
//! rx_antennas = 36
//! elements = 100
//! subsurfaces = 3
//! d_1 = "2 m"
//! direct_k_factor = "-5 dB"
//! tx_irs_k_factor = "5 dB"      # or "los" for a pure-LOS segment
//! tx_power = "30 dBm"
//!
//! [direct_pathloss]
//! intercept = 72.0
//! slope = 29.2
//! shadowing = "8.7 dB"
//! ```
//!
//! Unknown keys are rejected.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use irs_mimo::channel::{LinkParams, PathLossParams, RiceanMix};
use irs_mimo::transceiver::ShadowingMeanMode;
use irs_mimo::{dbm_to_watts, HALF_WAVELENGTH};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::geometry::derive_geometry;
use crate::{Result, SimError};

#[derive(Debug, Clone, Copy)]
enum Unit {
    Db,
    Dbm,
    Meter,
}

impl Unit {
    fn suffix(self) -> &'static str {
        match self {
            Unit::Db => "dB",
            Unit::Dbm => "dBm",
            Unit::Meter => "m",
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawQuantity {
    Number(f64),
    Text(String),
}

fn parse_quantity(text: &str, unit: Unit) -> std::result::Result<f64, String> {
    let t = text.trim();
    let (num, suffix) = match t.find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
        Some(i) => (t[..i].trim(), t[i..].trim()),
        None => (t, ""),
    };
    if !suffix.is_empty() && suffix != unit.suffix() {
        return Err(format!("`{t}`: expected unit `{}`, found `{suffix}`", unit.suffix()));
    }
    num.parse::<f64>()
        .map_err(|_| format!("`{t}` is not a number with optional `{}` suffix", unit.suffix()))
}

fn de_unit<'de, D: Deserializer<'de>>(d: D, unit: Unit) -> std::result::Result<f64, D::Error> {
    match RawQuantity::deserialize(d)? {
        RawQuantity::Number(v) => Ok(v),
        RawQuantity::Text(s) => parse_quantity(&s, unit).map_err(de::Error::custom),
    }
}

fn de_db<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    de_unit(d, Unit::Db)
}

fn de_dbm<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    de_unit(d, Unit::Dbm)
}

fn de_m<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    de_unit(d, Unit::Meter)
}

/// Ricean K-factor in dB; `+∞` (written `"los"`) is a pure-LOS segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KFactorDb(pub f64);

impl KFactorDb {
    pub const LOS: KFactorDb = KFactorDb(f64::INFINITY);

    pub fn mix(self) -> irs_mimo::Result<RiceanMix> {
        if self.0 == f64::INFINITY {
            Ok(RiceanMix::pure_los())
        } else {
            RiceanMix::from_db(self.0)
        }
    }
}

impl Serialize for KFactorDb {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("los")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for KFactorDb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawQuantity::deserialize(d)? {
            RawQuantity::Number(v) => Ok(KFactorDb(v)),
            RawQuantity::Text(s) if matches!(s.trim(), "los" | "inf" | "pure-los") => Ok(KFactorDb::LOS),
            RawQuantity::Text(s) => parse_quantity(&s, Unit::Db).map(KFactorDb).map_err(de::Error::custom),
        }
    }
}

/// Path-loss model of one segment type; the distance comes from the geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathLossModel {
    /// `a`, dB.
    #[serde(deserialize_with = "de_db")]
    pub intercept: f64,
    /// `b`, dB per decade.
    pub slope: f64,
    /// `σ`, dB.
    #[serde(deserialize_with = "de_db")]
    pub shadowing: f64,
}

impl PathLossModel {
    pub fn at(&self, distance: f64) -> irs_mimo::Result<PathLossParams> {
        PathLossParams::new(self.intercept, self.slope, distance, self.shadowing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhasePolicy {
    /// Linear profile aligned to each subsurface's strongest path.
    OptimalLinear,
    /// `V = I`.
    Zero,
    /// Every phase uniform on `[0, 2π)`.
    Random,
    /// Linear profile with one slope uniform on `[−2, 2)`.
    RandomSlope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerPolicy {
    Opa,
    Epa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShadowingMode(pub ShadowingMeanMode);

impl Serialize for ShadowingMode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ShadowingMode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ShadowingMeanMode::from_str(&s).map(ShadowingMode).map_err(de::Error::custom)
    }
}

impl fmt::Display for PhasePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::OptimalLinear => "optimal-linear",
            Self::Zero => "zero",
            Self::Random => "random",
            Self::RandomSlope => "random-slope",
        })
    }
}

/// Fully resolved scenario: geometry, arrays, channel statistics, power
/// budget and Monte Carlo controls. Powers are held in dBm, K-factors and
/// shadowing in dB, distances in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub tx_antennas: usize,
    pub rx_antennas: usize,
    /// Elements per subsurface, `N`.
    pub elements: usize,
    /// Subsurface count, `K`; 0 runs without a surface.
    pub subsurfaces: usize,

    #[serde(default = "defaults::paths")]
    pub direct_paths: usize,
    #[serde(default = "defaults::paths")]
    pub tx_irs_paths: usize,
    #[serde(default = "defaults::paths")]
    pub irs_rx_paths: usize,

    #[serde(default = "defaults::direct_k")]
    pub direct_k_factor: KFactorDb,
    #[serde(default = "defaults::irs_k")]
    pub tx_irs_k_factor: KFactorDb,
    #[serde(default = "defaults::irs_k")]
    pub irs_rx_k_factor: KFactorDb,

    #[serde(default = "defaults::d_tr", deserialize_with = "de_m")]
    pub d_tr: f64,
    #[serde(default = "defaults::d_v", deserialize_with = "de_m")]
    pub d_v: f64,
    #[serde(default = "defaults::d_1", deserialize_with = "de_m")]
    pub d_1: f64,

    #[serde(default = "defaults::direct_pathloss")]
    pub direct_pathloss: PathLossModel,
    #[serde(default = "defaults::irs_pathloss")]
    pub tx_irs_pathloss: PathLossModel,
    #[serde(default = "defaults::irs_pathloss")]
    pub irs_rx_pathloss: PathLossModel,

    #[serde(default = "defaults::tx_power", deserialize_with = "de_dbm")]
    pub tx_power: f64,
    #[serde(default = "defaults::noise_power", deserialize_with = "de_dbm")]
    pub noise_power: f64,

    #[serde(default = "defaults::yes")]
    pub include_direct: bool,
    #[serde(default = "defaults::phase_policy")]
    pub phase_policy: PhasePolicy,
    #[serde(default = "defaults::power_policy")]
    pub power_policy: PowerPolicy,
    #[serde(default = "defaults::shadowing_mode")]
    pub shadowing_mode: ShadowingMode,

    /// Element spacing in wavelengths.
    #[serde(default = "defaults::spacing")]
    pub spacing: f64,
    /// Surface amplitude `β`.
    #[serde(default = "defaults::amplitude")]
    pub reflection_amplitude: f64,
    /// Stream count for equal power allocation; defaults to the number of
    /// useful paths (`K`, plus `L` with the direct link).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub streams: Option<usize>,
    /// Rate target (bits/s/Hz) for per-trial required-power output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_rate: Option<f64>,

    #[serde(default = "defaults::trials")]
    pub trials: usize,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
}

mod defaults {
    use super::*;

    pub fn paths() -> usize {
        3
    }
    pub fn direct_k() -> KFactorDb {
        KFactorDb(-5.0)
    }
    pub fn irs_k() -> KFactorDb {
        KFactorDb(5.0)
    }
    pub fn d_tr() -> f64 {
        51.0
    }
    pub fn d_v() -> f64 {
        2.0
    }
    pub fn d_1() -> f64 {
        2.0
    }
    pub fn direct_pathloss() -> PathLossModel {
        PathLossModel {
            intercept: 72.0,
            slope: 29.2,
            shadowing: 8.7,
        }
    }
    pub fn irs_pathloss() -> PathLossModel {
        PathLossModel {
            intercept: 61.4,
            slope: 20.0,
            shadowing: 5.8,
        }
    }
    pub fn tx_power() -> f64 {
        30.0
    }
    pub fn noise_power() -> f64 {
        -85.0
    }
    pub fn yes() -> bool {
        true
    }
    pub fn phase_policy() -> PhasePolicy {
        PhasePolicy::OptimalLinear
    }
    pub fn power_policy() -> PowerPolicy {
        PowerPolicy::Opa
    }
    pub fn shadowing_mode() -> ShadowingMode {
        ShadowingMode(ShadowingMeanMode::LognormalExact)
    }
    pub fn spacing() -> f64 {
        HALF_WAVELENGTH
    }
    pub fn amplitude() -> f64 {
        1.0
    }
    pub fn trials() -> usize {
        500
    }
    pub fn seed() -> u64 {
        2021
    }
}

impl ScenarioConfig {
    /// Reference setup with the given array sizes and surface layout.
    pub fn reference(tx_antennas: usize, rx_antennas: usize, elements: usize, subsurfaces: usize) -> Self {
        Self {
            tx_antennas,
            rx_antennas,
            elements,
            subsurfaces,
            direct_paths: defaults::paths(),
            tx_irs_paths: defaults::paths(),
            irs_rx_paths: defaults::paths(),
            direct_k_factor: defaults::direct_k(),
            tx_irs_k_factor: defaults::irs_k(),
            irs_rx_k_factor: defaults::irs_k(),
            d_tr: defaults::d_tr(),
            d_v: defaults::d_v(),
            d_1: defaults::d_1(),
            direct_pathloss: defaults::direct_pathloss(),
            tx_irs_pathloss: defaults::irs_pathloss(),
            irs_rx_pathloss: defaults::irs_pathloss(),
            tx_power: defaults::tx_power(),
            noise_power: defaults::noise_power(),
            include_direct: true,
            phase_policy: defaults::phase_policy(),
            power_policy: defaults::power_policy(),
            shadowing_mode: defaults::shadowing_mode(),
            spacing: defaults::spacing(),
            reflection_amplitude: defaults::amplitude(),
            streams: None,
            target_rate: None,
            trials: defaults::trials(),
            seed: defaults::seed(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_toml_at(text, Path::new("<inline>"))
    }

    fn from_toml_at(text: &str, path: &Path) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|source| SimError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Applies `key=value` overrides, with values in TOML syntax (bare words
    /// are taken as strings).
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        let mut table: toml::Table = toml::from_str(&self.to_toml_string()).expect("own serialization parses");
        for item in overrides {
            let item = item.as_ref();
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| SimError::Override(item.to_string()))?;
            let key = key.trim();
            let value = value.trim();
            let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(value.to_string()));
            match key.split_once('.') {
                Some((outer, inner)) => {
                    let sub = table
                        .entry(outer.to_string())
                        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
                    match sub.as_table_mut() {
                        Some(t) => {
                            t.insert(inner.to_string(), parsed);
                        }
                        None => return Err(SimError::Override(item.to_string())),
                    }
                }
                None => {
                    table.insert(key.to_string(), parsed);
                }
            }
        }
        Self::from_toml_str(&toml::to_string(&table).expect("table serializes"))
    }

    /// Every schema violation, not just the first.
    pub fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        for (name, v) in [
            ("tx_antennas", self.tx_antennas),
            ("rx_antennas", self.rx_antennas),
            ("elements", self.elements),
            ("direct_paths", self.direct_paths),
            ("tx_irs_paths", self.tx_irs_paths),
            ("irs_rx_paths", self.irs_rx_paths),
            ("trials", self.trials),
        ] {
            if v == 0 {
                errs.push(format!("{name}: must be >= 1"));
            }
        }
        for (name, k) in [
            ("direct_k_factor", self.direct_k_factor),
            ("tx_irs_k_factor", self.tx_irs_k_factor),
            ("irs_rx_k_factor", self.irs_rx_k_factor),
        ] {
            if k.0.is_nan() || k.0 == f64::NEG_INFINITY {
                errs.push(format!("{name}: {} dB is not a K-factor", k.0));
            }
        }
        for (name, pl) in [
            ("direct_pathloss", &self.direct_pathloss),
            ("tx_irs_pathloss", &self.tx_irs_pathloss),
            ("irs_rx_pathloss", &self.irs_rx_pathloss),
        ] {
            if !(pl.shadowing >= 0.0) {
                errs.push(format!("{name}.shadowing: must be >= 0"));
            }
            if !pl.intercept.is_finite() || !pl.slope.is_finite() {
                errs.push(format!("{name}: intercept and slope must be finite"));
            }
        }
        match derive_geometry(self.d_tr, self.d_v, self.d_1) {
            Err(SimError::Invalid(e)) => errs.extend(e),
            Err(e) => errs.push(e.to_string()),
            Ok((d1, d2)) => {
                if !(self.d_tr > 0.0) {
                    errs.push("d_tr: must be > 0".into());
                }
                if self.subsurfaces > 0 && (d1 <= 0.0 || d2 <= 0.0) {
                    errs.push(format!("surface distances ({d1}, {d2}) must both be > 0"));
                }
            }
        }
        if !self.tx_power.is_finite() {
            errs.push("tx_power: must be finite".into());
        }
        if !self.noise_power.is_finite() {
            errs.push("noise_power: must be finite".into());
        }
        if !(self.spacing > 0.0) {
            errs.push("spacing: must be > 0".into());
        }
        if !(self.reflection_amplitude > 0.0 && self.reflection_amplitude <= 1.0) {
            errs.push("reflection_amplitude: must be in (0, 1]".into());
        }
        if self.streams == Some(0) {
            errs.push("streams: must be >= 1".into());
        }
        if let Some(r) = self.target_rate {
            if !(r > 0.0) {
                errs.push("target_rate: must be > 0".into());
            }
        }
        if !self.include_direct && self.subsurfaces == 0 {
            errs.push("no direct link and no surface: nothing to transmit over".into());
        }
        errs
    }

    pub fn validate(&self) -> Result<()> {
        let errs = self.violations();
        if errs.is_empty() {
            Ok(())
        } else {
            Err(SimError::Invalid(errs))
        }
    }

    pub fn tx_power_watts(&self) -> f64 {
        dbm_to_watts(self.tx_power)
    }

    pub fn noise_power_watts(&self) -> f64 {
        dbm_to_watts(self.noise_power)
    }

    /// `(d₁, d₂)` for the configured geometry.
    pub fn distances(&self) -> Result<(f64, f64)> {
        derive_geometry(self.d_tr, self.d_v, self.d_1)
    }

    /// Streams used by equal power allocation.
    pub fn epa_streams(&self) -> usize {
        self.streams.unwrap_or(self.subsurfaces + if self.include_direct { self.direct_paths } else { 0 })
    }

    pub fn link_params(&self) -> Result<LinkParams> {
        self.validate()?;
        let (d1, d2) = self.distances()?;
        // with no surface the segment distances are never used
        let (d1, d2) = if self.subsurfaces == 0 { (d1.max(1.0), d2.max(1.0)) } else { (d1, d2) };
        let p = LinkParams {
            tx_antennas: self.tx_antennas,
            rx_antennas: self.rx_antennas,
            elements_per_subsurface: self.elements,
            subsurfaces: self.subsurfaces,
            direct_paths: self.direct_paths,
            tx_irs_paths: self.tx_irs_paths,
            irs_rx_paths: self.irs_rx_paths,
            direct_mix: self.direct_k_factor.mix()?,
            tx_irs_mix: self.tx_irs_k_factor.mix()?,
            irs_rx_mix: self.irs_rx_k_factor.mix()?,
            direct_pathloss: self.direct_pathloss.at(self.d_tr)?,
            tx_irs_pathloss: self.tx_irs_pathloss.at(d1)?,
            irs_rx_pathloss: self.irs_rx_pathloss.at(d2)?,
            include_direct: self.include_direct,
            spacing: self.spacing,
        };
        p.validate()?;
        Ok(p)
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioConfig::from_toml_at(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "tx_antennas = 64\nrx_antennas = 36\nelements = 100\nsubsurfaces = 3\n";

    #[test]
    fn minimal_uses_reference_values() {
        let c = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(c, ScenarioConfig::reference(64, 36, 100, 3));
    }

    #[test]
    fn round_trip() {
        let mut c = ScenarioConfig::reference(8, 8, 10, 2);
        c.tx_irs_k_factor = KFactorDb::LOS;
        c.streams = Some(2);
        c.target_rate = Some(12.5);
        c.phase_policy = PhasePolicy::RandomSlope;
        c.shadowing_mode = ShadowingMode(ShadowingMeanMode::Paper);
        let back = ScenarioConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn units() {
        let text = format!(
            "{MINIMAL}tx_power = \"30 dBm\"\nd_1 = \"25 m\"\ndirect_k_factor = \"-5 dB\"\n\
             tx_irs_k_factor = \"los\"\n[irs_rx_pathloss]\nintercept = \"61.4 dB\"\nslope = 20\nshadowing = \"5.8dB\"\n"
        );
        let c = ScenarioConfig::from_toml_str(&text).unwrap();
        assert!((c.tx_power_watts() - 1.0).abs() < 1e-15);
        assert_eq!(c.d_1, 25.0);
        assert_eq!(c.direct_k_factor, KFactorDb(-5.0));
        assert_eq!(c.tx_irs_k_factor, KFactorDb::LOS);
        assert_eq!(c.irs_rx_pathloss.shadowing, 5.8);

        let c = ScenarioConfig::from_toml_str(&format!("{MINIMAL}tx_power = \"30\"\n")).unwrap();
        assert!((c.tx_power_watts() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wrong_unit() {
        let err = ScenarioConfig::from_toml_str(&format!("{MINIMAL}tx_power = \"30 dB\"\n")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("dBm") && msg.contains("tx_power"), "{msg}");
    }

    #[test]
    fn missing_field_named() {
        let err = ScenarioConfig::from_toml_str("tx_antennas = 4\nrx_antennas = 4\nelements = 4\n").unwrap_err();
        assert!(err.to_string().contains("subsurfaces"), "{err}");
    }

    #[test]
    fn unknown_field_rejected() {
        let err = ScenarioConfig::from_toml_str(&format!("{MINIMAL}colour = 3\n")).unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
    }

    #[test]
    fn violations_enumerated() {
        let text = format!("{MINIMAL}trials = 0\nd_1 = 60\nreflection_amplitude = 2.0\n");
        match ScenarioConfig::from_toml_str(&text) {
            Err(SimError::Invalid(v)) => {
                assert_eq!(v.len(), 3, "{v:?}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overrides() {
        let c = ScenarioConfig::reference(8, 8, 10, 2)
            .with_overrides(&["elements=20", "tx_irs_k_factor=los", "direct_pathloss.shadowing=0", "phase_policy=zero"])
            .unwrap();
        assert_eq!(c.elements, 20);
        assert_eq!(c.tx_irs_k_factor, KFactorDb::LOS);
        assert_eq!(c.direct_pathloss.shadowing, 0.0);
        assert_eq!(c.phase_policy, PhasePolicy::Zero);
        assert!(ScenarioConfig::reference(8, 8, 10, 2).with_overrides(&["nonsense"]).is_err());
        assert!(ScenarioConfig::reference(8, 8, 10, 2).with_overrides(&["bogus=1"]).is_err());
    }
}
