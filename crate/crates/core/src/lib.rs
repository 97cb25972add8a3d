//! Particle swarm optimization for the layout stage of overlap-layout-consensus
//! genome fragment assembly.
//!
//! Reads are scored by pairwise suffix/prefix overlap ([`fragments`]),
//! particles live in a continuous space decoded into layouts by the
//! smallest-position-value rule ([`spv`]), and [`swarm`] implements seven
//! update rules, among them the chaotic variant with Lévy-flight escape
//! (CPSOLF). [`bench`] runs multi-trial comparisons and writes CSV/JSON
//! results.

pub mod bench;
pub mod fragments;
pub mod spv;
pub mod stochastic;
pub mod swarm;

pub use fragments::{
    build_overlap_matrix, fitness, overlap_len, DatasetInfo, Fragment, FragmentError, FragmentSet,
    OverlapMatrix,
};
pub use spv::{spv_decode, PositionVector};
pub use stochastic::{LevyConfig, RngStream};
pub use swarm::{run, RunTrace, Variant, VariantConfig};
