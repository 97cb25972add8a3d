use serde::{Deserialize, Serialize};

use super::config::{constriction, schedule_coefficients, ConfigError, PositionRange, Variant, VariantConfig};
use crate::stochastic::UniformSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub fitness: u64,
    pub pbest_position: Vec<f64>,
    pub pbest_fitness: u64,
    /// Consecutive iterations without a personal-best improvement.
    pub stagnancy: u32,
}

impl Particle {
    /// A particle at rest whose personal best is its starting point.
    pub fn at_rest(position: Vec<f64>, fitness: u64) -> Self {
        Self {
            velocity: vec![0.0; position.len()],
            pbest_position: position.clone(),
            position,
            fitness,
            pbest_fitness: fitness,
            stagnancy: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }
}

/// The per-iteration scalars consumed by [`velocity_update`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCoefficients {
    /// Inertia weight; 1 for the variants without one. For CPSOLF this is
    /// the chaotic weight.
    pub inertia: f64,
    pub c1: f64,
    pub c2: f64,
    /// Constriction factor on the inertia term; 1 outside CPSOLF.
    pub chi: f64,
    pub apso_alpha: f64,
    pub apso_beta: f64,
}

impl StepCoefficients {
    /// Coefficients for iteration `t`. `chaotic_inertia` is only read for
    /// CPSOLF.
    pub fn at(cfg: &VariantConfig, t: usize, chaotic_inertia: f64) -> Result<Self, ConfigError> {
        let inertia = match cfg.variant {
            Variant::Spso | Variant::Apso => 1.0,
            Variant::Spsoi | Variant::Apsoi => cfg.w_const,
            Variant::Spsodi | Variant::Apsodi => cfg.decreasing_inertia(t),
            Variant::Cpsolf => chaotic_inertia,
        };
        let (c1, c2, chi) = if cfg.variant == Variant::Cpsolf {
            let (c1, c2) = schedule_coefficients(cfg, t);
            (c1, c2, constriction(c1, c2)?)
        } else {
            (cfg.c1_const, cfg.c2_const, 1.0)
        };
        Ok(Self {
            inertia,
            c1,
            c2,
            chi,
            apso_alpha: cfg.apso_alpha,
            apso_beta: cfg.apso_beta,
        })
    }
}

/// New velocity for `particle` under `variant`, clamped to `[-v_max, v_max]`.
///
/// * SPSO family: `w v + c1 r1 (p - x) + c2 r2 (g - x)`, fresh `r1`, `r2`
///   per dimension.
/// * APSO family: `w v + alpha (r - 1/2) + beta (g - x)`, no personal-best
///   term.
/// * CPSOLF: `chi w v + c1 (p - x) + c2 (g - x)`, no random draws.
pub fn velocity_update<R: UniformSource>(
    variant: Variant,
    particle: &Particle,
    gbest: &[f64],
    k: &StepCoefficients,
    v_max: f64,
    draws: &mut R,
) -> Vec<f64> {
    debug_assert_eq!(particle.dim(), gbest.len());
    let x = &particle.position;
    let p = &particle.pbest_position;
    let v = &particle.velocity;
    (0..x.len())
        .map(|d| {
            let next = match variant {
                Variant::Cpsolf => {
                    k.chi * k.inertia * v[d] + k.c1 * (p[d] - x[d]) + k.c2 * (gbest[d] - x[d])
                }
                _ if variant.is_accelerated() => {
                    let r = draws.uniform();
                    k.inertia * v[d] + k.apso_alpha * (r - 0.5) + k.apso_beta * (gbest[d] - x[d])
                }
                _ => {
                    let r1 = draws.uniform();
                    let r2 = draws.uniform();
                    k.inertia * v[d] + k.c1 * r1 * (p[d] - x[d]) + k.c2 * r2 * (gbest[d] - x[d])
                }
            };
            next.clamp(-v_max, v_max)
        })
        .collect()
}

/// `x + v`, reflected into `range`.
pub fn position_update(position: &[f64], velocity: &[f64], range: &PositionRange) -> Vec<f64> {
    position
        .iter()
        .zip(velocity)
        .map(|(x, v)| range.reflect(x + v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Constant(f64);

    impl UniformSource for Constant {
        fn uniform(&mut self) -> f64 {
            self.0
        }
    }

    struct Forbidden;

    impl UniformSource for Forbidden {
        fn uniform(&mut self) -> f64 {
            panic!("CPSOLF must not draw")
        }
    }

    fn particle(x: f64, v: f64, p: f64) -> Particle {
        Particle {
            position: vec![x],
            velocity: vec![v],
            fitness: 0,
            pbest_position: vec![p],
            pbest_fitness: 0,
            stagnancy: 0,
        }
    }

    fn coeffs(inertia: f64, c1: f64, c2: f64, chi: f64) -> StepCoefficients {
        StepCoefficients {
            inertia,
            c1,
            c2,
            chi,
            apso_alpha: 0.1,
            apso_beta: 0.5,
        }
    }

    #[test]
    fn spso_hand_example() {
        // v = 0, r1 = r2 = 1, c1 = c2 = 2, p - x = 1, g - x = -1
        let pt = particle(0.0, 0.0, 1.0);
        let v = velocity_update(Variant::Spso, &pt, &[-1.0], &coeffs(1.0, 2.0, 2.0, 1.0), 10.0, &mut Constant(1.0));
        assert_eq!(v, [0.0]);
    }

    #[test]
    fn cpsolf_hand_example() {
        let chi = 0.729_844;
        let omega = 0.604_509;
        let pt = particle(0.0, 1.0, 0.5);
        let k = coeffs(omega, 2.4, 1.7, chi);
        let v = velocity_update(Variant::Cpsolf, &pt, &[1.0], &k, 100.0, &mut Forbidden);
        // 0.729844 * 0.604509 + 2.4 * 0.5 + 1.7 * 1.0 = 3.341197266596
        assert!((v[0] - 3.341_197_266_596).abs() < 1e-12, "{}", v[0]);
        let clamped = velocity_update(Variant::Cpsolf, &pt, &[1.0], &k, 0.5, &mut Forbidden);
        assert_eq!(clamped, [0.5]);
    }

    #[test]
    fn converged_cpsolf_only_decays() {
        let pt = particle(0.3, 0.2, 0.3);
        let k = coeffs(0.6, 2.4, 1.7, 0.73);
        let v = velocity_update(Variant::Cpsolf, &pt, &[0.3], &k, 1.0, &mut Forbidden);
        assert!((v[0] - 0.73 * 0.6 * 0.2).abs() < 1e-15);
    }

    #[test]
    fn apso_uses_global_best_only() {
        let pt = particle(0.2, 0.1, 0.9);
        let k = coeffs(0.7, 2.0, 2.0, 1.0);
        let v = velocity_update(Variant::Apsoi, &pt, &[0.6], &k, 1.0, &mut Constant(0.5));
        assert!((v[0] - (0.07 + 0.5 * 0.4)).abs() < 1e-15);
    }

    #[test]
    fn positions() {
        let r = PositionRange { lo: 0.0, hi: 1.0 };
        assert!((position_update(&[0.2], &[0.3], &r)[0] - 0.5).abs() < 1e-15);
        assert!((position_update(&[0.9], &[0.3], &r)[0] - 0.8).abs() < 1e-15);
        assert_eq!(position_update(&[0.9, 0.1], &[0.0, 0.0], &r), [0.9, 0.1]);
    }

    #[test]
    fn coefficients_per_variant() {
        let cfg = VariantConfig::standard(Variant::Spsodi);
        let k = StepCoefficients::at(&cfg, 25, 0.0).unwrap();
        assert!((k.inertia - 0.65).abs() < 1e-12);
        assert_eq!((k.c1, k.c2, k.chi), (2.0, 2.0, 1.0));

        let k = StepCoefficients::at(&cfg.with_variant(Variant::Apso), 10, 0.0).unwrap();
        assert_eq!(k.inertia, 1.0);

        let k = StepCoefficients::at(&cfg.with_variant(Variant::Cpsolf), 0, 0.42).unwrap();
        assert_eq!((k.inertia, k.c1, k.c2), (0.42, 2.4, 1.7));
        assert!((k.chi - 0.729_843_788_128_357_6).abs() < 1e-12);
    }
}
