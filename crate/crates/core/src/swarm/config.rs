use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stochastic::{LevyConfig, StochasticError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Variant {
    Spso,
    Spsoi,
    Spsodi,
    Apso,
    Apsoi,
    Apsodi,
    Cpsolf,
}

impl Variant {
    /// Canonical order: the proposed variant first, then the baselines.
    pub const ALL: [Variant; 7] = [
        Variant::Cpsolf,
        Variant::Spso,
        Variant::Spsoi,
        Variant::Spsodi,
        Variant::Apso,
        Variant::Apsoi,
        Variant::Apsodi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Spso => "SPSO",
            Variant::Spsoi => "SPSOI",
            Variant::Spsodi => "SPSODI",
            Variant::Apso => "APSO",
            Variant::Apsoi => "APSOI",
            Variant::Apsodi => "APSODI",
            Variant::Cpsolf => "CPSOLF",
        }
    }

    pub fn is_accelerated(self) -> bool {
        matches!(self, Variant::Apso | Variant::Apsoi | Variant::Apsodi)
    }

    /// Position of the variant in [`Variant::ALL`].
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&v| v == self).expect("listed")
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown variant {given:?}; valid names: CPSOLF, SPSO, SPSOI, SPSODI, APSO, APSOI, APSODI")]
pub struct UnknownVariant {
    pub given: String,
}

impl FromStr for Variant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownVariant { given: s.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionRange {
    pub lo: f64,
    pub hi: f64,
}

impl PositionRange {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Folds `y` back into `[lo, hi]` by mirror reflection at the bounds.
    /// A single overshoot maps to `2 hi - y` (or `2 lo - y`); larger ones
    /// keep bouncing.
    pub fn reflect(&self, y: f64) -> f64 {
        let (lo, hi) = (self.lo, self.hi);
        let w = hi - lo;
        if y >= lo && y <= hi {
            y
        } else if y > hi && y <= hi + w {
            2.0 * hi - y
        } else if y < lo && y >= lo - w {
            2.0 * lo - y
        } else {
            let m = (y - lo).rem_euclid(2.0 * w);
            let folded = if m <= w { lo + m } else { hi - (m - w) };
            folded.clamp(lo, hi)
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConfigError {
    #[error("population must be positive")]
    EmptyPopulation,
    #[error("coefficient {name} must be positive, got {value}")]
    NonPositiveCoefficient { name: &'static str, value: f64 },
    #[error("inertia schedule needs w_lo < w_hi, got {lo} >= {hi}")]
    InertiaOrder { lo: f64, hi: f64 },
    #[error("position range needs x_lo < x_hi, got [{lo}, {hi}]")]
    RangeOrder { lo: f64, hi: f64 },
    #[error("v_max must be positive, got {0}")]
    VMax(f64),
    #[error("apso_alpha must be positive, got {0}")]
    ApsoAlpha(f64),
    #[error("apso_beta must lie in (0, 1), got {0}")]
    ApsoBeta(f64),
    #[error("max_stagnancy must be positive")]
    MaxStagnancy,
    #[error("constriction needs c1 + c2 > 4, got phi = {0}")]
    Constriction(f64),
    #[error(transparent)]
    Levy(#[from] StochasticError),
}

/// Everything that determines a run apart from the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantConfig {
    pub variant: Variant,
    pub population: usize,
    pub max_itr: usize,
    /// Cognitive coefficient at `t = 0`, falling linearly to `c1_end`.
    pub c1_start: f64,
    pub c1_end: f64,
    /// Social coefficient at `t = 0`, rising linearly to `c2_end`.
    pub c2_start: f64,
    pub c2_end: f64,
    /// Constant coefficients used by the SPSO family.
    pub c1_const: f64,
    pub c2_const: f64,
    pub w_const: f64,
    pub w_hi: f64,
    pub w_lo: f64,
    pub max_stagnancy: u32,
    pub levy: LevyConfig,
    pub position_range: PositionRange,
    pub v_max: f64,
    pub apso_alpha: f64,
    pub apso_beta: f64,
}

impl VariantConfig {
    /// The benchmark defaults: 50 iterations, 10 particles, cognitive
    /// 2.4 -> 1.7, social 1.7 -> 2.4, constant coefficients 2, inertia 0.7
    /// or 0.9 -> 0.4.
    pub fn standard(variant: Variant) -> Self {
        let position_range = PositionRange { lo: 0.0, hi: 1.0 };
        Self {
            variant,
            population: 10,
            max_itr: 50,
            c1_start: 2.4,
            c1_end: 1.7,
            c2_start: 1.7,
            c2_end: 2.4,
            c1_const: 2.0,
            c2_const: 2.0,
            w_const: 0.7,
            w_hi: 0.9,
            w_lo: 0.4,
            max_stagnancy: 5,
            levy: LevyConfig::default(),
            position_range,
            v_max: 0.5 * position_range.width(),
            apso_alpha: 0.1 * position_range.width(),
            apso_beta: 0.5,
        }
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        Self {
            variant,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population == 0 {
            return Err(ConfigError::EmptyPopulation);
        }
        for (name, value) in [
            ("c1_start", self.c1_start),
            ("c1_end", self.c1_end),
            ("c2_start", self.c2_start),
            ("c2_end", self.c2_end),
            ("c1_const", self.c1_const),
            ("c2_const", self.c2_const),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::NonPositiveCoefficient { name, value });
            }
        }
        if !(self.w_lo < self.w_hi) {
            return Err(ConfigError::InertiaOrder {
                lo: self.w_lo,
                hi: self.w_hi,
            });
        }
        let r = self.position_range;
        if !(r.lo < r.hi && r.lo.is_finite() && r.hi.is_finite()) {
            return Err(ConfigError::RangeOrder { lo: r.lo, hi: r.hi });
        }
        if !(self.v_max > 0.0 && self.v_max.is_finite()) {
            return Err(ConfigError::VMax(self.v_max));
        }
        if !(self.apso_alpha > 0.0) {
            return Err(ConfigError::ApsoAlpha(self.apso_alpha));
        }
        if !(self.apso_beta > 0.0 && self.apso_beta < 1.0) {
            return Err(ConfigError::ApsoBeta(self.apso_beta));
        }
        if self.max_stagnancy == 0 {
            return Err(ConfigError::MaxStagnancy);
        }
        self.levy.validate()?;
        if self.variant == Variant::Cpsolf {
            // c1 + c2 is linear in t, so the endpoints bound it.
            constriction(self.c1_start, self.c2_start)?;
            constriction(self.c1_end, self.c2_end)?;
        }
        Ok(())
    }

    fn progress(&self, t: usize) -> f64 {
        if self.max_itr == 0 {
            0.0
        } else {
            t as f64 / self.max_itr as f64
        }
    }

    /// Linearly decreasing inertia, `w_hi` at `t = 0` and `w_lo` at the end.
    pub fn decreasing_inertia(&self, t: usize) -> f64 {
        self.w_hi - (self.w_hi - self.w_lo) * self.progress(t)
    }
}

/// Time-varying `(c1, c2)` at iteration `t`: c1 moves from `c1_start` to
/// `c1_end` and c2 from `c2_start` to `c2_end` as `t` goes from 0 to
/// `max_itr`.
pub fn schedule_coefficients(cfg: &VariantConfig, t: usize) -> (f64, f64) {
    let p = cfg.progress(t);
    (
        cfg.c1_start + (cfg.c1_end - cfg.c1_start) * p,
        cfg.c2_start + (cfg.c2_end - cfg.c2_start) * p,
    )
}

/// Constriction factor `2 / (phi - 2 + sqrt(phi^2 - 4 phi))`, `phi = c1 + c2`.
pub fn constriction(c1: f64, c2: f64) -> Result<f64, ConfigError> {
    let phi = c1 + c2;
    if !(phi > 4.0) {
        return Err(ConfigError::Constriction(phi));
    }
    Ok(2.0 / (phi - 2.0 + (phi * phi - 4.0 * phi).sqrt()))
}
