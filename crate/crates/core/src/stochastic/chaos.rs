use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{StochasticError, UniformSource};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChaosMap {
    /// `z' = mu z (1 - z)`
    Logistic { mu: f64 },
    /// `z' = beta sin(pi z)`
    Sine { beta: f64 },
    /// `z' = |sin(pi z / u)|` with a fresh uniform `u` in `(0, 1)`.
    ModifiedSine,
}

impl ChaosMap {
    fn validate(&self) -> Result<(), StochasticError> {
        match *self {
            ChaosMap::Logistic { mu } if !(mu > 0.0 && mu <= 4.0) => Err(StochasticError::LogisticMu(mu)),
            ChaosMap::Sine { beta } if !(beta > 0.0 && beta <= 1.0) => Err(StochasticError::SineBeta(beta)),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaosState {
    z: f64,
    map: ChaosMap,
}

impl ChaosState {
    pub fn new(map: ChaosMap, z0: f64) -> Result<Self, StochasticError> {
        map.validate()?;
        if !(0.0..=1.0).contains(&z0) {
            return Err(StochasticError::ChaosOutOfRange(z0));
        }
        Ok(Self { z: z0, map })
    }

    /// Starts from a uniform `z0` in `(0, 1)`, skipping the fixed point 0.
    pub fn seeded<R: UniformSource>(map: ChaosMap, draws: &mut R) -> Result<Self, StochasticError> {
        let z0 = loop {
            let z = draws.uniform();
            if z > 0.0 {
                break z;
            }
        };
        Self::new(map, z0)
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn map(&self) -> ChaosMap {
        self.map
    }

    /// Advances the map once and returns the new value.
    pub fn step<R: UniformSource>(&mut self, draws: &mut R) -> f64 {
        let z = self.z;
        self.z = match self.map {
            ChaosMap::Logistic { mu } => mu * z * (1.0 - z),
            ChaosMap::Sine { beta } => beta * (PI * z).sin(),
            ChaosMap::ModifiedSine => {
                let u = loop {
                    let u = draws.uniform();
                    if u != 0.0 {
                        break u;
                    }
                };
                (PI * z / u).sin().abs()
            }
        };
        self.z
    }
}

/// Chaotic random inertia weight `0.5 r + 0.5 z'`, where `z'` is the next
/// modified-sine value and `r` a fresh uniform draw. Lies in `[0, 1)`.
pub fn chaotic_inertia<R: UniformSource>(state: &mut ChaosState, draws: &mut R) -> f64 {
    debug_assert!(matches!(state.map, ChaosMap::ModifiedSine));
    let z = state.step(draws);
    let r = draws.uniform();
    0.5 * r + 0.5 * z
}
