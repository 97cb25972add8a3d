use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::BenchError;

/// Describes the test in report metadata.
pub const Z_TEST_METHOD: &str =
    "unpooled two-sample z-test, two-tailed, sample standard deviations (n - 1), alpha = 0.05";

pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZTest {
    pub z_statistic: f64,
    pub p_value: f64,
    pub significant: bool,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation, `n - 1` denominator.
pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Two-tailed standard normal tail, `erfc(|z| / sqrt 2)`.
pub fn two_tailed_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

/// `z = (mean_a - mean_b) / sqrt(sd_a^2 / n_a + sd_b^2 / n_b)`.
///
/// When both samples have zero spread the statistic is undefined; equal
/// means then give `z = 0, p = 1` and different means give `z = +-inf,
/// p = 0`.
pub fn z_test(a: &[f64], b: &[f64]) -> Result<ZTest, BenchError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(BenchError::SampleTooSmall(a.len().min(b.len())));
    }
    let (ma, mb) = (mean(a), mean(b));
    let (sa, sb) = (sample_sd(a), sample_sd(b));
    let se = (sa * sa / a.len() as f64 + sb * sb / b.len() as f64).sqrt();
    let z = if se > 0.0 {
        (ma - mb) / se
    } else if ma == mb {
        0.0
    } else {
        (ma - mb).signum() * f64::INFINITY
    };
    let p_value = two_tailed_p(z);
    Ok(ZTest {
        z_statistic: z,
        p_value,
        significant: p_value < SIGNIFICANCE_LEVEL,
    })
}
