//! The variant engine.
//!
//! Seven update rules share one loop. Each iteration moves every particle
//! (velocity, then position), decodes its position into a layout, and
//! updates the personal and global bests in particle order. CPSOLF adds a
//! chaotic inertia weight, time-varying coefficients with constriction,
//! chaotic initialization and a Lévy-flight escape for stagnant particles.

mod config;
mod update;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{
    constriction, schedule_coefficients, ConfigError, PositionRange, UnknownVariant, Variant,
    VariantConfig,
};
pub use update::{position_update, velocity_update, Particle, StepCoefficients};

use crate::fragments::{layout_score, DatasetInfo, FragmentSet, OverlapMatrix};
use crate::spv::spv_decode_unchecked;
use crate::stochastic::{chaotic_inertia, levy_step, ChaosMap, ChaosState, RngStream, RNG_ALGORITHM};

#[derive(Debug, Error)]
pub enum SwarmError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("dimension mismatch: {fragments} fragments but a {matrix}x{matrix} overlap matrix")]
    DimensionMismatch { fragments: usize, matrix: usize },
    #[error("assembly needs at least 2 fragments, got {0}")]
    TooFewFragments(usize),
}

#[derive(Debug, Clone)]
pub struct SwarmState {
    pub particles: Vec<Particle>,
    pub gbest_position: Vec<f64>,
    pub gbest_fitness: u64,
    /// Iterations completed so far.
    pub t: usize,
    /// Present for CPSOLF only.
    pub chaos: Option<ChaosState>,
    pub rng: RngStream,
}

fn evaluate(position: &[f64], matrix: &OverlapMatrix) -> u64 {
    layout_score(&spv_decode_unchecked(position), matrix)
}

impl SwarmState {
    /// Fills pbest/gbest from freshly placed particles. Ties keep the
    /// earlier particle.
    fn from_particles(
        particles: Vec<Particle>,
        chaos: Option<ChaosState>,
        rng: RngStream,
    ) -> Self {
        let best = particles
            .iter()
            .enumerate()
            .fold(0, |best, (i, p)| {
                if p.pbest_fitness > particles[best].pbest_fitness {
                    i
                } else {
                    best
                }
            });
        Self {
            gbest_position: particles[best].pbest_position.clone(),
            gbest_fitness: particles[best].pbest_fitness,
            particles,
            t: 0,
            chaos,
            rng,
        }
    }

    /// Records a new position for particle `i` and updates its bests.
    /// Returns true when the personal best improved.
    fn observe(&mut self, i: usize, position: Vec<f64>, matrix: &OverlapMatrix) -> bool {
        let f = evaluate(&position, matrix);
        let p = &mut self.particles[i];
        p.position = position;
        p.fitness = f;
        if f > p.pbest_fitness {
            p.pbest_position.clone_from(&p.position);
            p.pbest_fitness = f;
            if f > self.gbest_fitness {
                self.gbest_fitness = f;
                self.gbest_position.clone_from(&p.position);
            }
            true
        } else {
            false
        }
    }
}

/// Positions from iterating the chaos map, one component per step, mapped
/// affinely from `[0, 1]` onto the position range.
pub fn chaotic_positions(
    cfg: &VariantConfig,
    dim: usize,
    chaos: &mut ChaosState,
    rng: &mut RngStream,
) -> Vec<Vec<f64>> {
    let r = cfg.position_range;
    (0..cfg.population)
        .map(|_| (0..dim).map(|_| r.lo + chaos.step(rng) * r.width()).collect())
        .collect()
}

/// CPSOLF start: chaotic placement of every particle, then one greedy Lévy
/// refinement per particle (a displaced candidate replaces the position
/// only if strictly fitter).
pub fn chaotic_initialize(
    cfg: &VariantConfig,
    matrix: &OverlapMatrix,
    mut chaos: ChaosState,
    mut rng: RngStream,
) -> SwarmState {
    let dim = matrix.dim();
    let range = cfg.position_range;
    let particles = chaotic_positions(cfg, dim, &mut chaos, &mut rng)
        .into_iter()
        .map(|x| {
            let f = evaluate(&x, matrix);
            let step = levy_step(&cfg.levy, &mut rng, dim);
            let candidate: Vec<f64> = x.iter().zip(&step).map(|(a, s)| range.reflect(a + s)).collect();
            let fc = evaluate(&candidate, matrix);
            if fc > f {
                Particle::at_rest(candidate, fc)
            } else {
                Particle::at_rest(x, f)
            }
        })
        .collect();
    SwarmState::from_particles(particles, Some(chaos), rng)
}

/// Baseline start: positions uniform over the range, velocities zero.
pub fn uniform_initialize(cfg: &VariantConfig, matrix: &OverlapMatrix, mut rng: RngStream) -> SwarmState {
    let dim = matrix.dim();
    let r = cfg.position_range;
    let particles = (0..cfg.population)
        .map(|_| {
            let x: Vec<f64> = (0..dim).map(|_| rng.uniform_in(r.lo, r.hi)).collect();
            let f = evaluate(&x, matrix);
            Particle::at_rest(x, f)
        })
        .collect();
    SwarmState::from_particles(particles, None, rng)
}

/// A configured swarm bound to one overlap matrix.
pub struct Swarm<'m> {
    cfg: VariantConfig,
    matrix: &'m OverlapMatrix,
    state: SwarmState,
}

impl<'m> Swarm<'m> {
    pub fn new(cfg: &VariantConfig, matrix: &'m OverlapMatrix, seed: u64) -> Result<Self, SwarmError> {
        cfg.validate()?;
        if matrix.dim() < 2 {
            return Err(SwarmError::TooFewFragments(matrix.dim()));
        }
        let mut rng = RngStream::new(seed);
        let state = if cfg.variant == Variant::Cpsolf {
            let chaos = ChaosState::seeded(ChaosMap::ModifiedSine, &mut rng)
                .expect("modified sine takes any z0 in (0, 1)");
            chaotic_initialize(cfg, matrix, chaos, rng)
        } else {
            uniform_initialize(cfg, matrix, rng)
        };
        Ok(Self {
            cfg: cfg.clone(),
            matrix,
            state,
        })
    }

    pub fn state(&self) -> &SwarmState {
        &self.state
    }

    pub fn config(&self) -> &VariantConfig {
        &self.cfg
    }

    /// Runs one iteration.
    pub fn step(&mut self) {
        let cfg = &self.cfg;
        let st = &mut self.state;
        let t = st.t;
        let base = StepCoefficients::at(cfg, t, 1.0).expect("validated at construction");

        for i in 0..st.particles.len() {
            let mut k = base;
            if let Some(chaos) = st.chaos.as_mut() {
                k.inertia = chaotic_inertia(chaos, &mut st.rng);
            }
            let p = &st.particles[i];
            let velocity = velocity_update(cfg.variant, p, &st.gbest_position, &k, cfg.v_max, &mut st.rng);
            let position = position_update(&p.position, &velocity, &cfg.position_range);
            st.particles[i].velocity = velocity;
            if st.observe(i, position, self.matrix) {
                st.particles[i].stagnancy = 0;
            } else {
                st.particles[i].stagnancy += 1;
            }
        }

        if cfg.variant == Variant::Cpsolf {
            let dim = self.matrix.dim();
            for i in 0..st.particles.len() {
                if st.particles[i].stagnancy < cfg.max_stagnancy {
                    continue;
                }
                let step = levy_step(&cfg.levy, &mut st.rng, dim);
                let position: Vec<f64> = st.particles[i]
                    .position
                    .iter()
                    .zip(&step)
                    .map(|(x, s)| cfg.position_range.reflect(x + s))
                    .collect();
                st.particles[i].stagnancy = 0;
                st.observe(i, position, self.matrix);
            }
        }
        st.t += 1;
    }

    /// Best layout found so far.
    pub fn best_permutation(&self) -> Vec<usize> {
        spv_decode_unchecked(&self.state.gbest_position)
    }
}

/// Output of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub variant: Variant,
    pub seed: u64,
    pub config: VariantConfig,
    pub rng_algorithm: String,
    /// Global best after initialization, then after each iteration.
    pub gbest_per_iteration: Vec<u64>,
    pub best_permutation: Vec<usize>,
    pub best_fitness: u64,
    pub wall_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<DatasetInfo>,
}

/// Runs `cfg.max_itr` iterations from a seeded start.
pub fn run(cfg: &VariantConfig, set: &FragmentSet, matrix: &OverlapMatrix, seed: u64) -> Result<RunTrace, SwarmError> {
    if set.len() != matrix.dim() {
        return Err(SwarmError::DimensionMismatch {
            fragments: set.len(),
            matrix: matrix.dim(),
        });
    }
    let started = Instant::now();
    let mut swarm = Swarm::new(cfg, matrix, seed)?;
    let mut trace = Vec::with_capacity(cfg.max_itr + 1);
    trace.push(swarm.state().gbest_fitness);
    for _ in 0..cfg.max_itr {
        swarm.step();
        trace.push(swarm.state().gbest_fitness);
    }
    Ok(RunTrace {
        variant: cfg.variant,
        seed,
        config: cfg.clone(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        best_permutation: swarm.best_permutation(),
        best_fitness: swarm.state().gbest_fitness,
        gbest_per_iteration: trace,
        wall_ms: started.elapsed().as_millis() as u64,
        dataset: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragments::{build_overlap_matrix, fitness};
    use crate::spv::spv_decode;

    fn figure_one() -> (FragmentSet, OverlapMatrix) {
        let set = FragmentSet::from_sequences(["ATCGAA", "GCTAGG", "AGAGCT", "GGTCTA"]).unwrap();
        let m = build_overlap_matrix(&set);
        (set, m)
    }

    #[test]
    fn zero_iterations_trace_has_one_point() {
        let (set, m) = figure_one();
        let mut cfg = VariantConfig::standard(Variant::Cpsolf);
        cfg.max_itr = 0;
        let tr = run(&cfg, &set, &m, 1).unwrap();
        assert_eq!(tr.gbest_per_iteration.len(), 1);
        assert_eq!(tr.gbest_per_iteration[0], tr.best_fitness);
    }

    #[test]
    fn traces_are_monotone_and_consistent() {
        let (set, m) = figure_one();
        for v in Variant::ALL {
            for seed in 0..5 {
                let tr = run(&VariantConfig::standard(v), &set, &m, seed).unwrap();
                assert_eq!(tr.gbest_per_iteration.len(), 51);
                assert!(tr.gbest_per_iteration.windows(2).all(|w| w[0] <= w[1]), "{v} {seed}");
                assert_eq!(fitness(&tr.best_permutation, &m).unwrap(), tr.best_fitness);
            }
        }
    }

    #[test]
    fn finds_figure_one_layout() {
        let (set, m) = figure_one();
        let tr = run(&VariantConfig::standard(Variant::Cpsolf), &set, &m, 3).unwrap();
        // [2, 1, 3, 0] is the reference order; [0, 2, 1, 3] ties it.
        assert_eq!(tr.best_fitness, 6);
    }

    #[test]
    fn singleton_swarm_is_its_own_gbest() {
        let (_, m) = figure_one();
        let mut cfg = VariantConfig::standard(Variant::Cpsolf);
        cfg.population = 1;
        let s = Swarm::new(&cfg, &m, 9).unwrap();
        let st = s.state();
        assert_eq!(st.gbest_fitness, st.particles[0].pbest_fitness);
        assert_eq!(st.gbest_position, st.particles[0].pbest_position);
    }

    #[test]
    fn zero_scale_refinement_is_identity() {
        let (_, m) = figure_one();
        let mut cfg = VariantConfig::standard(Variant::Cpsolf);
        cfg.levy.step_scale = 0.0;
        let mut rng = RngStream::new(4);
        let chaos = ChaosState::seeded(ChaosMap::ModifiedSine, &mut rng).unwrap();
        let placed = chaotic_positions(&cfg, m.dim(), &mut chaos.clone(), &mut rng.clone());
        let st = chaotic_initialize(&cfg, &m, chaos, rng);
        let got: Vec<Vec<f64>> = st.particles.iter().map(|p| p.position.clone()).collect();
        assert_eq!(got, placed);
    }

    #[test]
    fn refinement_never_lowers_fitness() {
        let (_, m) = figure_one();
        let cfg = VariantConfig::standard(Variant::Cpsolf);
        for seed in 0..30 {
            let mut rng = RngStream::new(seed);
            let chaos = ChaosState::seeded(ChaosMap::ModifiedSine, &mut rng).unwrap();
            let placed = chaotic_positions(&cfg, m.dim(), &mut chaos.clone(), &mut rng.clone());
            let st = chaotic_initialize(&cfg, &m, chaos, rng);
            for (p, x) in st.particles.iter().zip(&placed) {
                assert!(p.fitness >= evaluate(x, &m));
            }
        }
    }

    #[test]
    fn state_invariants_hold_every_iteration() {
        let set = FragmentSet::from_sequences([
            "ACGTTGCA", "TGCAAGGT", "AGGTCCAT", "CCATGGAA", "GGAATTCC", "TTCCAGTA",
        ])
        .unwrap();
        let m = build_overlap_matrix(&set);
        for v in Variant::ALL {
            let cfg = VariantConfig::standard(v);
            let mut s = Swarm::new(&cfg, &m, 21).unwrap();
            for _ in 0..40 {
                let before = s.state().gbest_fitness;
                s.step();
                let st = s.state();
                assert!(st.gbest_fitness >= before);
                let best = st.particles.iter().map(|p| p.pbest_fitness).max().unwrap();
                assert_eq!(st.gbest_fitness, best);
                for p in &st.particles {
                    assert!(p.position.iter().all(|x| (0.0..=1.0).contains(x)));
                    assert!(p.velocity.iter().all(|x| x.abs() <= cfg.v_max));
                    let perm = spv_decode(&p.pbest_position).unwrap();
                    assert_eq!(fitness(&perm, &m).unwrap(), p.pbest_fitness);
                }
            }
        }
    }

    #[test]
    fn run_is_deterministic() {
        let (set, m) = figure_one();
        for v in Variant::ALL {
            let cfg = VariantConfig::standard(v);
            let mut a = run(&cfg, &set, &m, 77).unwrap();
            let mut b = run(&cfg, &set, &m, 77).unwrap();
            a.wall_ms = 0;
            b.wall_ms = 0;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn startup_errors() {
        let (set, m) = figure_one();
        let small = set.clone().take(3).unwrap();
        assert!(matches!(
            run(&VariantConfig::standard(Variant::Spso), &small, &m, 0),
            Err(SwarmError::DimensionMismatch { .. })
        ));
        let one = set.take(1).unwrap();
        let m1 = build_overlap_matrix(&one);
        assert!(matches!(
            run(&VariantConfig::standard(Variant::Spso), &one, &m1, 0),
            Err(SwarmError::TooFewFragments(1))
        ));
        let mut cfg = VariantConfig::standard(Variant::Spso);
        cfg.population = 0;
        assert!(matches!(run(&cfg, &small, &build_overlap_matrix(&small), 0), Err(SwarmError::Config(_))));
    }
}
