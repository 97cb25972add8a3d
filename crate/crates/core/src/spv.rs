//! Smallest-position-value decoding of continuous positions into layouts.

use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("position component {index} is not finite ({value})")]
pub struct NonFinitePosition {
    pub index: usize,
    pub value: f64,
}

/// A particle position; every component is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PositionVector(Vec<f64>);

impl PositionVector {
    pub fn new(values: Vec<f64>) -> Result<Self, NonFinitePosition> {
        check_finite(&values)?;
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for PositionVector {
    type Error = NonFinitePosition;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<PositionVector> for Vec<f64> {
    fn from(p: PositionVector) -> Self {
        p.0
    }
}

impl Deref for PositionVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn check_finite(x: &[f64]) -> Result<(), NonFinitePosition> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(NonFinitePosition {
            index,
            value: x[index],
        }),
        None => Ok(()),
    }
}

/// Lists dimension indices in ascending order of their values. Equal
/// values keep ascending index order.
pub fn spv_decode(x: &[f64]) -> Result<Vec<usize>, NonFinitePosition> {
    check_finite(x)?;
    Ok(spv_decode_unchecked(x))
}

pub(crate) fn spv_decode_unchecked(x: &[f64]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..x.len()).collect();
    // Stable sort: ties stay in index order. Callers guarantee finiteness.
    perm.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).expect("finite positions"));
    perm
}
