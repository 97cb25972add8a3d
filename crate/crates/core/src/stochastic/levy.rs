use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::{RngStream, StochasticError, UniformSource};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyConfig {
    /// Stability exponent, in `[1, 3]`.
    pub lambda: f64,
    /// Multiplier on every displacement component.
    pub step_scale: f64,
}

impl LevyConfig {
    pub fn validate(&self) -> Result<(), StochasticError> {
        if !(1.0..=3.0).contains(&self.lambda) {
            return Err(StochasticError::LevyLambda(self.lambda));
        }
        if !(self.step_scale.is_finite() && self.step_scale >= 0.0) {
            return Err(StochasticError::LevyScale(self.step_scale));
        }
        Ok(())
    }
}

impl Default for LevyConfig {
    fn default() -> Self {
        Self {
            lambda: 1.5,
            step_scale: 0.1,
        }
    }
}

/// Mantegna's normaliser for the numerator variance:
/// `[G(1+l) sin(pi l / 2) / (G((1+l)/2) l 2^((l-1)/2))]^(1/l)`.
pub fn mantegna_sigma(lambda: f64) -> f64 {
    let num = gamma(1.0 + lambda) * (PI * lambda / 2.0).sin();
    let den = gamma((1.0 + lambda) / 2.0) * lambda * 2f64.powf((lambda - 1.0) / 2.0);
    (num / den).abs().powf(1.0 / lambda)
}

/// One heavy-tailed draw `u / |v|^(1/lambda)`, `u ~ N(0, sigma^2)`,
/// `v ~ N(0, 1)`.
pub fn mantegna_step(lambda: f64, sigma: f64, rng: &mut RngStream) -> f64 {
    let u = sigma * rng.standard_normal();
    let v = loop {
        let v = rng.standard_normal();
        if v != 0.0 {
            break v;
        }
    };
    u / v.abs().powf(1.0 / lambda)
}

/// Displacement vector whose components are `S * step * alpha`, with a fresh
/// Mantegna step and a fresh `alpha` uniform in `[-1, 1]` per component.
pub fn levy_step(cfg: &LevyConfig, rng: &mut RngStream, dims: usize) -> Vec<f64> {
    let sigma = mantegna_sigma(cfg.lambda);
    (0..dims)
        .map(|_| {
            let step = mantegna_step(cfg.lambda, sigma, rng);
            let alpha = 2.0 * rng.uniform() - 1.0;
            if cfg.step_scale == 0.0 {
                0.0
            } else {
                cfg.step_scale * step * alpha
            }
        })
        .collect()
}
